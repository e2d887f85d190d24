// SPDX-License-Identifier: Apache-2.0

//! Holds the reference data under `tests/golden` and the `acceptance`
//! check that compares the library against it. There is no library code.

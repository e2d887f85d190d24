// SPDX-License-Identifier: Apache-2.0

//! Combinatorial invariants of the Ekedahl-Oort (EO) and Newton polygon (NP)
//! stratifications of the moduli space `A_g` of principally polarised abelian
//! varieties in characteristic `p`, together with a small rule engine that
//! classifies which EO strata meet which NP strata.
//!
//! Group schemes never appear here; every object is represented by its
//! combinatorial shadow:
//!
//! - [`eo_seq`]: elementary sequences `φ` (EO strata) and final sequences `ψ`.
//! - [`weyl_closure`]: the symplectic Weyl group, Bruhat order and the closure
//!   relation between EO strata.
//! - [`newton`]: symmetric Newton polygons (NP strata).
//! - [`final_type`]: final types, the permutation `π_δ`, `ν`-values, direct sums
//!   of BT₁ invariants and minimal elementary sequences.
//! - [`slope`]: the first Newton slope `λ_φ` of an EO stratum.
//! - [`classifier`]: the rule engine producing per-cell intersection statuses
//!   with provenance.
//! - [`report`]: renderers for the reference tables, the closure diagram and
//!   the intersection summaries.

#![forbid(unsafe_code)]

pub mod classifier;
pub mod eo_seq;
mod error;
pub mod final_type;
pub mod newton;
pub mod rational;
pub mod report;
pub mod slope;
pub mod weyl_closure;

pub use classifier::{
    classify, explain, CellStatus, Classification, ClassifyOptions, DimensionMatrix, FactsLedger,
    LedgerEntry, RuleFiring, RuleId, Status,
};
pub use eo_seq::{ElementarySeq, FinalSeq, MAX_G};
pub use error::{Error, Result};
pub use final_type::{
    base_type, es_decompose, es_sum, final_type_of, ft_sum, minimal_sequence, Decomposition,
    FinalType,
};
pub use newton::{NewtonPolygon, Segment};
pub use rational::Rational;
pub use slope::{first_newton_slope, slope_trace, SlopeTrace};
pub use weyl_closure::{closure_below, closure_poset, ClosureOptions, ClosurePoset, SymplecticPerm};

/// Version tag written into every JSON document.
pub const SCHEMA: &str = "stratlab/1";

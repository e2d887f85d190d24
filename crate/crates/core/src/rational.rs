// SPDX-License-Identifier: Apache-2.0

//! Exact rationals used for slopes and `ν`-values.

use num_rational::Ratio;

pub type Rational = Ratio<i64>;

/// Renders as `p/q` (always with a denominator, so `0` prints as `0/1`).
pub fn fmt_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer.
pub fn parse_ratio(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => text.parse::<i64>().ok().map(Rational::from_integer),
    }
}

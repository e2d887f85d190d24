// SPDX-License-Identifier: Apache-2.0

//! First Newton slope `λ_φ` of an EO stratum.
//!
//! With `ψ` the final sequence of `φ`, set `Φ(i) = ψ(i)` when `ψ(i) != 0` and
//! `Φ(i) = g + i` otherwise, on `{1..2g}`. `D` is the eventual image of `Φ`,
//! `C = D ∩ {g+1..2g}` and `λ_φ = |C| / |D|`.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::eo_seq::{ElementarySeq, FinalSeq};
use crate::rational::{fmt_ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeTrace {
    pub psi: FinalSeq,
    /// `Φ(1..=2g)`, so `phi_map[i-1] = Φ(i)`.
    pub phi_map: Vec<usize>,
    pub d: BTreeSet<usize>,
    pub c: BTreeSet<usize>,
    pub lambda: Rational,
    /// Number of image iterations before the chain stabilised.
    pub steps: usize,
}

#[derive(Serialize)]
struct TraceJson<'a> {
    psi: &'a [u8],
    phi_map: &'a [usize],
    d: Vec<usize>,
    c: Vec<usize>,
    lambda: String,
}

impl SlopeTrace {
    pub fn to_json(&self) -> Value {
        json!(TraceJson {
            psi: self.psi.values(),
            phi_map: &self.phi_map,
            d: self.d.iter().copied().collect(),
            c: self.c.iter().copied().collect(),
            lambda: fmt_ratio(&self.lambda),
        })
    }
}

pub fn slope_trace(phi: &ElementarySeq) -> SlopeTrace {
    let g = phi.g();
    let psi = phi.stretch();
    let phi_map: Vec<usize> = (1..=2 * g)
        .map(|i| match psi.at(i) {
            0 => g + i,
            v => v,
        })
        .collect();

    let mut cur: BTreeSet<usize> = (1..=2 * g).collect();
    let mut steps = 0;
    loop {
        let next: BTreeSet<usize> = cur.iter().map(|&i| phi_map[i - 1]).collect();
        if next == cur {
            break;
        }
        cur = next;
        steps += 1;
        assert!(steps <= 2 * g, "image chain of Φ failed to stabilise for {}", phi);
    }
    let c: BTreeSet<usize> = cur.iter().copied().filter(|&i| i > g).collect();
    let lambda = Rational::new(c.len() as i64, cur.len() as i64);
    SlopeTrace { psi, phi_map, d: cur, c, lambda, steps }
}

pub fn first_newton_slope(phi: &ElementarySeq) -> Rational {
    slope_trace(phi).lambda
}

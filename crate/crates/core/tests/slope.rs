// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeSet;

use common::*;
use stratlab::eo_seq::enumerate_elementary;
use stratlab::newton::enumerate_symmetric_np;
use stratlab::{first_newton_slope, minimal_sequence, slope_trace, Rational};

/// `λ` by iterating `Φ` on `{1..2g}` until the image stops shrinking.
fn oracle_slope(v: &[u8]) -> Rational {
    let g = v.len();
    let psi = brute_psi(v);
    let big_phi = |i: usize| if psi[i] == 0 { g + i } else { psi[i] };
    let mut s: BTreeSet<usize> = (1..=2 * g).collect();
    loop {
        let t: BTreeSet<usize> = s.iter().map(|&i| big_phi(i)).collect();
        if t == s {
            break;
        }
        s = t;
    }
    Rational::new(s.iter().filter(|&&i| i > g).count() as i64, s.len() as i64)
}

#[test]
fn agrees_with_oracle() {
    for g in 1..=10 {
        for phi in enumerate_elementary(g, None).unwrap() {
            assert_eq!(first_newton_slope(&phi), oracle_slope(phi.values()), "{}", phi);
        }
    }
}

#[test]
fn range_and_p_rank() {
    for g in 1..=9 {
        for phi in enumerate_elementary(g, None).unwrap() {
            let lam = first_newton_slope(&phi);
            assert!(lam >= Rational::from_integer(0) && lam <= Rational::new(1, 2), "{}", phi);
            assert_eq!(lam == Rational::from_integer(0), phi.p_rank() > 0, "{}", phi);
        }
    }
}

#[test]
fn half_exactly_on_supersingular_strata() {
    // S_φ lies in the supersingular locus iff φ(⌈g/2⌉) = 0
    for g in 1..=9 {
        for phi in enumerate_elementary(g, None).unwrap() {
            let inside = phi.at(g.div_ceil(2)) == 0;
            assert_eq!(first_newton_slope(&phi) == Rational::new(1, 2), inside, "{}", phi);
        }
    }
}

#[test]
fn minimal_sequences_recover_first_slope() {
    for g in 1..=7 {
        for xi in enumerate_symmetric_np(g, None).unwrap() {
            let lam = first_newton_slope(&minimal_sequence(&xi).unwrap());
            let want = if xi.p_rank() == 0 { xi.first_slope() } else { Rational::from_integer(0) };
            assert_eq!(lam, want, "{}", xi);
        }
    }
}

#[test]
fn trace_is_consistent() {
    for phi in enumerate_elementary(6, Some(0)).unwrap() {
        let t = slope_trace(&phi);
        assert!(t.steps <= 12);
        let image: BTreeSet<usize> = t.d.iter().map(|&i| t.phi_map[i - 1]).collect();
        assert_eq!(image, t.d);
        assert!(t.c.is_subset(&t.d));
        assert_eq!(t.lambda, Rational::new(t.c.len() as i64, t.d.len() as i64));
    }
}

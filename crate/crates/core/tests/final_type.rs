// SPDX-License-Identifier: Apache-2.0

mod common;

use std::thread;

use common::*;
use proptest::prelude::*;
use stratlab::eo_seq::enumerate_elementary;
use stratlab::final_type::{
    base_type, elementary_of, es_splits, es_sum_uncached, final_type_of, ft_sum, is_es_indecomposable, FinalType,
};
use stratlab::newton::enumerate_symmetric_np;
use stratlab::{es_decompose, es_sum, minimal_sequence, ElementarySeq, Error, Rational};

fn all(g: usize) -> Vec<ElementarySeq> {
    enumerate_elementary(g, None).unwrap()
}

#[test]
fn pi_matches_direct_rule() {
    for g in 1..=7 {
        for phi in all(g) {
            let ft = final_type_of(&phi);
            assert_eq!(ft.delta(), brute_delta(phi.values()).as_slice());
            assert_eq!(ft.pi_map().unwrap(), brute_pi(ft.delta()), "{}", phi);
        }
    }
}

#[test]
fn cycles_partition_the_type() {
    for g in 1..=6 {
        for phi in all(g) {
            let ft = final_type_of(&phi);
            let mut seen: Vec<usize> = ft.cycles().unwrap().iter().flat_map(|c| c.support.clone()).collect();
            seen.sort();
            assert_eq!(seen, (1..=2 * g).collect::<Vec<_>>());
        }
    }
}

#[test]
fn nu_is_weakly_increasing_and_in_unit_interval() {
    for g in 1..=7 {
        for phi in all(g) {
            let nu = final_type_of(&phi).nu_values().unwrap();
            assert!(nu.windows(2).all(|w| w[0] <= w[1]), "{}: {:?}", phi, nu);
            assert!(nu.iter().all(|x| *x >= Rational::from_integer(0) && *x <= Rational::from_integer(1)));
        }
    }
}

#[test]
fn sums_agree_with_module_oracle() {
    for a in 1..=6 {
        for b in 1..=7 - a {
            for x in all(a) {
                for y in all(b) {
                    let s = es_sum(&x, &y).unwrap();
                    assert_eq!(s.values(), module_sum(x.values(), y.values()).as_slice(), "({}) ⊕ ({})", x, y);
                }
            }
        }
    }
}

#[test]
fn known_sums() {
    assert_eq!(es_sum(&es("0"), &es("1")).unwrap(), es("1,1"));
    // the module oracle agrees: the sum is (0,0,1,2,3), not (0,1,1,2,3)
    assert_eq!(es_sum(&es("0,1,2"), &es("0,1")).unwrap(), es("0,0,1,2,3"));
    assert_eq!(module_sum(&[0, 1, 2], &[0, 1]), vec![0, 0, 1, 2, 3]);
    assert_eq!(es_sum(&es("0,1,1,2"), &es("0")).unwrap(), es("0,1,1,1,2"));
}

#[test]
fn cached_sum_is_consistent_across_threads() {
    let pairs: Vec<(ElementarySeq, ElementarySeq)> =
        all(3).into_iter().flat_map(|x| all(3).into_iter().map(move |y| (x.clone(), y))).collect();
    let handles: Vec<_> = (0..8)
        .map(|k| {
            let mut mine = pairs.clone();
            mine.rotate_left(k * 7 % pairs.len());
            thread::spawn(move || mine.iter().map(|(x, y)| (x.clone(), y.clone(), es_sum(x, y).unwrap())).collect::<Vec<_>>())
        })
        .collect();
    for h in handles {
        for (x, y, s) in h.join().unwrap() {
            assert_eq!(s, es_sum_uncached(&x, &y).unwrap());
        }
    }
}

#[test]
fn indecomposables_agree_with_no_split_oracle() {
    for g in 1..=5 {
        for phi in all(g) {
            assert_eq!(is_es_indecomposable(&phi).unwrap(), no_split(phi.values()), "{}", phi);
        }
    }
}

#[test]
fn decompositions_unique_and_correct_up_to_eight() {
    for g in 1..=8 {
        for phi in all(g) {
            let d = es_decompose(&phi).unwrap();
            assert!(!d.ambiguous, "{} has several factorisations", phi);
            let total = d.factors[1..].iter().fold(d.factors[0].clone(), |acc, x| es_sum(&acc, x).unwrap());
            assert_eq!(total, phi);
            for f in &d.factors {
                assert!(is_es_indecomposable(f).unwrap());
            }
            assert!(d.factors.windows(2).all(|w| (w[0].g(), w[0].values()) <= (w[1].g(), w[1].values())));
        }
    }
}

#[test]
fn splits_are_ordered_by_length() {
    for (a, b) in es_splits(&es("0,0,1,2")).unwrap() {
        assert!(a.g() <= b.g());
        assert_eq!(es_sum(&a, &b).unwrap(), es("0,0,1,2"));
    }
    assert_eq!(es_decompose(&es("1,1,1,2")).unwrap().to_string(), "(1,1,1,2) = (0) ⊕ (1) ⊕ (0,1)");
}

#[test]
fn base_types() {
    assert_eq!(base_type(1, 0).unwrap().delta(), &[0]);
    assert_eq!(base_type(1, 1).unwrap().delta(), &[1, 0]);
    assert_eq!(base_type(2, 1).unwrap().psi(), vec![0, 0, 1, 2]);
    for (m, n) in [(1, 2), (2, 2), (0, 0), (4, 2)] {
        assert!(matches!(base_type(m, n), Err(Error::InvalidPair { .. })));
    }
}

#[test]
fn non_symmetric_types_have_no_sequence() {
    let ft = FinalType::from_bits(vec![1, 1, 0]).unwrap();
    assert!(matches!(elementary_of(&ft), Err(Error::NotSymmetric(_))));
    let s = ft_sum(&base_type(2, 1).unwrap(), &base_type(1, 0).unwrap()).unwrap();
    assert_eq!(s.len(), 4);
}

#[test]
fn minimal_sequences_respect_invariants() {
    for g in 1..=7 {
        for xi in enumerate_symmetric_np(g, None).unwrap() {
            let phi = minimal_sequence(&xi).unwrap();
            assert_eq!(phi.g(), g);
            assert_eq!(phi.p_rank(), xi.p_rank(), "{}", xi);
        }
    }
    assert_eq!(minimal_sequence(&np("5[1,1]")).unwrap(), es("0,0,0,0,0"));
    assert!(matches!(minimal_sequence(&np("[2,1]")), Err(Error::NotSymmetric(_))));
}

#[test]
fn minimal_sequences_distinct() {
    for g in 1..=7 {
        let mut seen: Vec<ElementarySeq> =
            enumerate_symmetric_np(g, None).unwrap().iter().map(|x| minimal_sequence(x).unwrap()).collect();
        let n = seen.len();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), n, "g = {}", g);
    }
}

fn arb_seq(max: usize) -> impl Strategy<Value = ElementarySeq> {
    prop::collection::vec(any::<bool>(), 1..=max).prop_map(|bits| {
        let mut c = 0u8;
        ElementarySeq::new(
            bits.into_iter()
                .map(|b| {
                    c += b as u8;
                    c
                })
                .collect(),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn sum_commutes_and_adds_invariants(x in arb_seq(5), y in arb_seq(5)) {
        let s = es_sum(&x, &y).unwrap();
        prop_assert_eq!(&s, &es_sum(&y, &x).unwrap());
        prop_assert_eq!(s.g(), x.g() + y.g());
        prop_assert_eq!(s.p_rank(), x.p_rank() + y.p_rank());
        prop_assert_eq!(s.a_number(), x.a_number() + y.a_number());
        let oracle = module_sum(x.values(), y.values());
        prop_assert_eq!(s.values(), oracle.as_slice());
    }

    #[test]
    fn sum_associates(x in arb_seq(4), y in arb_seq(4), z in arb_seq(4)) {
        let l = es_sum(&es_sum(&x, &y).unwrap(), &z).unwrap();
        let r = es_sum(&x, &es_sum(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn round_trip(x in arb_seq(12)) {
        prop_assert_eq!(elementary_of(&final_type_of(&x)).unwrap(), x);
    }
}

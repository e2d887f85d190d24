// SPDX-License-Identifier: Apache-2.0

//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library except for parsing and the types it returns.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use stratlab::{ElementarySeq, NewtonPolygon};

pub fn es(s: &str) -> ElementarySeq {
    s.parse().unwrap_or_else(|e| panic!("bad sequence {:?}: {}", s, e))
}

pub fn np(s: &str) -> NewtonPolygon {
    s.parse().unwrap_or_else(|e| panic!("bad polygon {:?}: {}", s, e))
}

/// Every elementary sequence of length `g` as a raw vector, from the
/// `2^g` step patterns.
pub fn brute_sequences(g: usize) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = (0u32..1 << g)
        .map(|bits| {
            let mut c = 0u8;
            (0..g)
                .map(|i| {
                    c += (bits >> (g - 1 - i) & 1) as u8;
                    c
                })
                .collect()
        })
        .collect();
    out.sort();
    out
}

pub fn brute_p_rank(v: &[u8]) -> usize {
    (1..=v.len()).filter(|&i| v[i - 1] as usize == i).max().unwrap_or(0)
}

/// `ψ(0..=2g)` straight from `ψ(2g-i) = g-i+φ(i)`.
pub fn brute_psi(v: &[u8]) -> Vec<usize> {
    let g = v.len();
    let at = |i: usize| if i == 0 { 0 } else { v[i - 1] as usize };
    let mut psi = vec![0; 2 * g + 1];
    for i in 1..=g {
        psi[i] = at(i);
    }
    for i in 0..=g {
        psi[2 * g - i] = g - i + at(i);
    }
    psi
}

pub fn brute_delta(v: &[u8]) -> Vec<u8> {
    let psi = brute_psi(v);
    (1..psi.len()).map(|i| (1 + psi[i - 1] - psi[i]) as u8).collect()
}

/// `π(i)`, 1-based: zeros of `δ` go in order to the start, ones to the end.
pub fn brute_pi(delta: &[u8]) -> Vec<usize> {
    let zeros = delta.iter().filter(|&&b| b == 0).count();
    let (mut z, mut o) = (0, zeros);
    delta
        .iter()
        .map(|&b| {
            if b == 0 {
                z += 1;
                z
            } else {
                o += 1;
                o
            }
        })
        .collect()
}

/// Mod-`p` Dieudonné module attached to a word: basis `1..=d`, `V` and `F`
/// as partial maps (`None` means the basis vector goes to zero).
#[derive(Clone, Debug)]
pub struct KraftModule {
    v: Vec<Option<usize>>,
    f: Vec<Option<usize>>,
}

impl KraftModule {
    pub fn of_delta(delta: &[u8]) -> Self {
        let d = delta.len();
        let p = brute_pi(delta);
        let mut v = vec![None; d];
        let mut f = vec![None; d];
        for i in 0..d {
            if delta[i] == 0 {
                v[i] = Some(p[i]);
            } else {
                f[p[i] - 1] = Some(i + 1);
            }
        }
        KraftModule { v, f }
    }

    pub fn of_seq(v: &[u8]) -> Self {
        Self::of_delta(&brute_delta(v))
    }

    pub fn direct_sum(&self, other: &KraftModule) -> KraftModule {
        let shift = self.v.len();
        let lift = |x: &Option<usize>| x.map(|y| y + shift);
        KraftModule {
            v: self.v.iter().cloned().chain(other.v.iter().map(lift)).collect(),
            f: self.f.iter().cloned().chain(other.f.iter().map(lift)).collect(),
        }
    }

    /// The elementary sequence read off the canonical filtration, i.e. the
    /// coarsest flag stable under `V` and `F^{-1}`.
    pub fn elementary_sequence(&self) -> Vec<u8> {
        let d = self.v.len();
        let full: BTreeSet<usize> = (1..=d).collect();
        let vop = |n: &BTreeSet<usize>| -> BTreeSet<usize> { n.iter().filter_map(|&z| self.v[z - 1]).collect() };
        let finv = |n: &BTreeSet<usize>| -> BTreeSet<usize> {
            (1..=d).filter(|&z| self.f[z - 1].is_none_or(|y| n.contains(&y))).collect()
        };
        let mut seen: BTreeSet<BTreeSet<usize>> = [full.clone(), BTreeSet::new()].into_iter().collect();
        let mut todo = vec![full];
        while let Some(n) = todo.pop() {
            for m in [vop(&n), finv(&n)] {
                if seen.insert(m.clone()) {
                    todo.push(m);
                }
            }
        }
        let mut chain: Vec<&BTreeSet<usize>> = seen.iter().collect();
        chain.sort_by_key(|n| n.len());
        for w in chain.windows(2) {
            assert!(w[0].is_subset(w[1]) && w[0].len() < w[1].len(), "canonical filtration is not a flag");
        }
        let known: BTreeMap<usize, usize> = chain.iter().map(|n| (n.len(), vop(n).len())).collect();
        let lens: Vec<usize> = known.keys().copied().collect();
        let mut psi = vec![0usize; d + 1];
        for w in lens.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (pa, pb) = (known[&a], known[&b]);
            for (t, slot) in psi.iter_mut().enumerate().take(b + 1).skip(a) {
                *slot = if pa == pb {
                    pa
                } else {
                    assert_eq!(pb - pa, b - a, "jump in ψ inconsistent with the flag");
                    pa + (t - a)
                };
            }
        }
        psi[1..=d / 2].iter().map(|&x| x as u8).collect()
    }
}

/// Direct sum via the module oracle.
pub fn module_sum(a: &[u8], b: &[u8]) -> Vec<u8> {
    KraftModule::of_seq(a).direct_sum(&KraftModule::of_seq(b)).elementary_sequence()
}

/// No way to write `v` as the module sum of two shorter sequences.
pub fn no_split(v: &[u8]) -> bool {
    let g = v.len();
    for a in 1..g {
        for x in brute_sequences(a) {
            for y in brute_sequences(g - a) {
                if module_sum(&x, &y) == v {
                    return false;
                }
            }
        }
    }
    true
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Symmetric polygons of dimension `g` as sorted multisets of coprime pairs
/// `(m, n)` (height `m + n`), symmetric under `(m, n) ↔ (n, m)`.
pub fn brute_symmetric_polygons(g: usize) -> BTreeSet<Vec<(u32, u32)>> {
    let h = 2 * g as u32;
    let mut pairs = Vec::new();
    for m in 0..=h {
        for n in 0..=h - m {
            if m + n > 0 && gcd(m, n) == 1 {
                pairs.push((m, n));
            }
        }
    }
    let mut out = BTreeSet::new();
    let mut cur = Vec::new();
    fn rec(
        pairs: &[(u32, u32)],
        start: usize,
        left: u32,
        cur: &mut Vec<(u32, u32)>,
        out: &mut BTreeSet<Vec<(u32, u32)>>,
    ) {
        if left == 0 {
            let mut mirrored: Vec<(u32, u32)> = cur.iter().map(|&(m, n)| (n, m)).collect();
            mirrored.sort();
            let mut c = cur.clone();
            c.sort();
            if mirrored == c {
                out.insert(c);
            }
            return;
        }
        for i in start..pairs.len() {
            let (m, n) = pairs[i];
            if m + n <= left {
                cur.push((m, n));
                rec(pairs, i, left - m - n, cur, out);
                cur.pop();
            }
        }
    }
    rec(&pairs, 0, h, &mut cur, &mut out);
    out
}

pub fn pair_multiset(xi: &NewtonPolygon) -> Vec<(u32, u32)> {
    let mut v = xi.expanded();
    v.sort();
    v
}

/// `2^g · g!`.
pub fn hyperoctahedral_order(g: usize) -> usize {
    (1usize << g) * (1..=g).product::<usize>()
}

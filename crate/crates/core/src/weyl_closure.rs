// SPDX-License-Identifier: Apache-2.0

//! The symplectic Weyl group `W_g ⊂ S_{2g}`, Bruhat order, and the closure
//! relation between EO strata.
//!
//! `S_{φ1}` lies in the closure of `S_{φ2}` iff some `u ∈ W_I` satisfies
//! `u·ω_{φ1}·(w_{0,I}·u·w_{0,I}) ≤ ω_{φ2}` in Bruhat order, where `W_I` is
//! the stabiliser of `{1..g}` and `w_{0,I}` its longest element.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::eo_seq::{enumerate_elementary, ElementarySeq};
use crate::error::{Error, Result};

pub const ENUMERATE_W_MAX_G: usize = 7;
pub const ENUMERATE_WI_MAX_G: usize = 10;
pub const CLOSURE_MAX_G: usize = 7;

/// Permutation `w` of `{1..2g}` with `w(i) + w(2g+1-i) = 2g+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SymplecticPerm {
    images: Vec<u8>,
}

impl SymplecticPerm {
    /// `images[i-1] = w(i)`.
    pub fn new(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        if n == 0 || n % 2 == 1 {
            return Err(Error::MalformedInput(format!("need 2g images, got {}", n)));
        }
        let mut seen = vec![false; n + 1];
        for &x in &images {
            let x = x as usize;
            if x == 0 || x > n || seen[x] {
                return Err(Error::MalformedInput(format!("{:?} is not a permutation", images)));
            }
            seen[x] = true;
        }
        for i in 0..n / 2 {
            if images[i] as usize + images[n - 1 - i] as usize != n + 1 {
                return Err(Error::InvariantViolation(format!(
                    "{:?} is not in W_g: w({}) + w({}) != {}",
                    images,
                    i + 1,
                    n - i,
                    n + 1
                )));
            }
        }
        Ok(SymplecticPerm { images })
    }

    pub fn identity(g: usize) -> Self {
        SymplecticPerm { images: (1..=2 * g as u8).collect() }
    }

    /// Completes `w(1..g)` by `w(2g+1-i) = 2g+1-w(i)`.
    fn from_first_half(g: usize, first: &[u8]) -> Self {
        let mut images = vec![0u8; 2 * g];
        for i in 0..g {
            images[i] = first[i];
            images[2 * g - 1 - i] = (2 * g + 1) as u8 - first[i];
        }
        SymplecticPerm { images }
    }

    pub fn g(&self) -> usize {
        self.images.len() / 2
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    /// `w(i)` for `1 <= i <= 2g`.
    pub fn at(&self, i: usize) -> usize {
        self.images[i - 1] as usize
    }

    /// `(self·other)(i) = self(other(i))`.
    pub fn compose(&self, other: &SymplecticPerm) -> SymplecticPerm {
        debug_assert_eq!(self.g(), other.g());
        SymplecticPerm { images: other.images.iter().map(|&j| self.images[j as usize - 1]).collect() }
    }

    pub fn inverse(&self) -> SymplecticPerm {
        let mut images = vec![0u8; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize - 1] = (i + 1) as u8;
        }
        SymplecticPerm { images }
    }
}

impl fmt::Display for SymplecticPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `ω_φ`: positions where `φ` stays flat go to `1, 2, …` in order, positions
/// where it steps up go to `g+1, g+2, …`; the second half follows by symmetry.
pub fn weyl_element(phi: &ElementarySeq) -> SymplecticPerm {
    let g = phi.g();
    let mut first = Vec::with_capacity(g);
    let (mut flat, mut up) = (0u8, 0u8);
    for l in 1..=g {
        if phi.at(l) == phi.at(l - 1) {
            flat += 1;
            first.push(flat);
        } else {
            up += 1;
            first.push(g as u8 + up);
        }
    }
    let w = SymplecticPerm::from_first_half(g, &first);
    debug_assert!(SymplecticPerm::new(w.images.clone()).is_ok());
    w
}

/// `w_{0,I}(i) = g+1-i` for `i <= g` and `3g+1-i` for `i > g`.
pub fn w0i(g: usize) -> SymplecticPerm {
    let images = (1..=2 * g)
        .map(|i| if i <= g { g + 1 - i } else { 3 * g + 1 - i } as u8)
        .collect();
    SymplecticPerm { images }
}

/// Steps `p` to the next permutation in lexicographic order.
fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Visits `W_I` in lexicographic order of `u(1..g)` until `f` returns true.
fn find_in_wi<T>(g: usize, mut f: impl FnMut(&SymplecticPerm) -> Option<T>) -> Option<T> {
    let mut p: Vec<u8> = (1..=g as u8).collect();
    loop {
        let u = SymplecticPerm::from_first_half(g, &p);
        if let Some(hit) = f(&u) {
            return Some(hit);
        }
        if !next_permutation(&mut p) {
            return None;
        }
    }
}

/// All of `W_g`, `2^g·g!` elements, in lexicographic order.
pub fn enumerate_w(g: usize) -> Result<Vec<SymplecticPerm>> {
    check_g(g, ENUMERATE_W_MAX_G)?;
    let mut out = Vec::with_capacity((1usize << g) * (1..=g).product::<usize>());
    let mut p: Vec<u8> = (1..=g as u8).collect();
    loop {
        for signs in 0u32..(1 << g) {
            let first: Vec<u8> = (0..g)
                .map(|i| if signs >> i & 1 == 1 { (2 * g + 1) as u8 - p[i] } else { p[i] })
                .collect();
            out.push(SymplecticPerm::from_first_half(g, &first));
        }
        if !next_permutation(&mut p) {
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// `W_I`: elements of `W_g` preserving `{1..g}`, `g!` of them.
pub fn enumerate_wi(g: usize) -> Result<Vec<SymplecticPerm>> {
    check_g(g, ENUMERATE_WI_MAX_G)?;
    let mut out = Vec::new();
    find_in_wi(g, |u| {
        out.push(u.clone());
        None::<()>
    });
    Ok(out)
}

fn check_g(g: usize, max: usize) -> Result<()> {
    if g == 0 {
        return Err(Error::MalformedInput("g must be positive".into()));
    }
    if g > max {
        return Err(Error::LengthCap { g, max });
    }
    Ok(())
}

fn check_same(a: &SymplecticPerm, b: &SymplecticPerm) -> Result<()> {
    if a.g() != b.g() {
        return Err(Error::DimensionMismatch { left: a.g(), right: b.g() });
    }
    Ok(())
}

/// Prefix-maximum comparison: `max w1(1..d) <= max w2(1..d)` for `1 <= d <= g`.
pub fn bc_below(w1: &SymplecticPerm, w2: &SymplecticPerm) -> Result<bool> {
    check_same(w1, w2)?;
    Ok(prefix_max_le(w1, w2, w1.g()))
}

fn prefix_max_le(w1: &SymplecticPerm, w2: &SymplecticPerm, upto: usize) -> bool {
    let (mut m1, mut m2) = (0u8, 0u8);
    for d in 0..upto {
        m1 = m1.max(w1.images[d]);
        m2 = m2.max(w2.images[d]);
        if m1 > m2 {
            return false;
        }
    }
    true
}

/// Bruhat order on `S_{2g}` (tableau criterion): for every `d`, the sorted
/// prefix `w1(1..d)` is entrywise `<=` the sorted prefix `w2(1..d)`.
/// On `W_g` this is the Bruhat order of the type-C Weyl group.
pub fn bruhat_le(w1: &SymplecticPerm, w2: &SymplecticPerm) -> Result<bool> {
    check_same(w1, w2)?;
    Ok(tableau_le(w1, w2))
}

fn tableau_le(w1: &SymplecticPerm, w2: &SymplecticPerm) -> bool {
    let n = w1.images.len();
    // counts of values >= k among the prefix, for each k
    let mut c1 = vec![0u8; n + 2];
    let mut c2 = vec![0u8; n + 2];
    for d in 0..n {
        for k in 1..=w1.images[d] as usize {
            c1[k] += 1;
        }
        for k in 1..=w2.images[d] as usize {
            c2[k] += 1;
        }
        if (1..=n).any(|k| c1[k] > c2[k]) {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Convention {
    /// `(x·y)(i) = x(y(i))`.
    #[default]
    RightFirst,
    /// `(x·y)(i) = y(x(i))`.
    LeftFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Predicate {
    /// Full Bruhat order via [`bruhat_le`].
    #[default]
    Tableau,
    /// The prefix-maximum test of [`bc_below`], over `d <= g` only.
    PrefixMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ClosureOptions {
    pub convention: Convention,
    pub predicate: Predicate,
}

fn twisted(u: &SymplecticPerm, w1: &SymplecticPerm, w0: &SymplecticPerm, conv: Convention) -> SymplecticPerm {
    match conv {
        Convention::RightFirst => u.compose(w1).compose(&w0.compose(u).compose(w0)),
        // x·y read left to right is y∘x
        Convention::LeftFirst => {
            let t = w0.compose(u).compose(w0);
            t.compose(w1).compose(u)
        }
    }
}

/// First `u ∈ W_I` (lexicographic) witnessing `S_{φ1} ⊆ closure(S_{φ2})`.
pub fn closure_witness(
    phi1: &ElementarySeq,
    phi2: &ElementarySeq,
    opts: ClosureOptions,
) -> Result<Option<SymplecticPerm>> {
    if phi1.g() != phi2.g() {
        return Err(Error::DimensionMismatch { left: phi1.g(), right: phi2.g() });
    }
    let g = phi1.g();
    check_g(g, CLOSURE_MAX_G)?;
    let (w1, w2, w0) = (weyl_element(phi1), weyl_element(phi2), w0i(g));
    Ok(find_in_wi(g, |u| {
        let x = twisted(u, &w1, &w0, opts.convention);
        let ok = match opts.predicate {
            Predicate::Tableau => tableau_le(&x, &w2),
            Predicate::PrefixMax => prefix_max_le(&x, &w2, g),
        };
        ok.then(|| u.clone())
    }))
}

pub fn closure_below(phi1: &ElementarySeq, phi2: &ElementarySeq, opts: ClosureOptions) -> Result<bool> {
    Ok(closure_witness(phi1, phi2, opts)?.is_some())
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosurePoset {
    pub g: usize,
    pub prank: Option<usize>,
    /// Sorted by dimension, then lexicographically.
    pub nodes: Vec<ElementarySeq>,
    /// `relation[a][b]`: node `a` lies in the closure of node `b`
    /// (reflexive-transitive closure of the pairwise test).
    pub relation: Vec<Vec<bool>>,
    /// Whether the pairwise test was already transitive before closing.
    pub raw_transitive: bool,
    /// `(lower, upper)` node indices of the transitive reduction.
    pub hasse_edges: Vec<(usize, usize)>,
}

pub fn closure_poset(g: usize, prank: Option<usize>, opts: ClosureOptions) -> Result<ClosurePoset> {
    check_g(g, CLOSURE_MAX_G)?;
    let mut nodes = enumerate_elementary(g, prank)?;
    nodes.sort_by(|a, b| a.dimension().cmp(&b.dimension()).then_with(|| a.cmp(b)));
    let n = nodes.len();

    let flat: Vec<bool> = (0..n * n)
        .into_par_iter()
        .map(|k| closure_below(&nodes[k / n], &nodes[k % n], opts))
        .collect::<Result<_>>()?;
    let mut rel: Vec<Vec<bool>> = flat.chunks(n).map(|r| r.to_vec()).collect();
    for (a, row) in rel.iter_mut().enumerate() {
        row[a] = true;
    }
    let raw = rel.clone();
    for k in 0..n {
        for a in 0..n {
            if rel[a][k] {
                for b in 0..n {
                    if rel[k][b] {
                        rel[a][b] = true;
                    }
                }
            }
        }
    }
    let raw_transitive = raw == rel;

    let mut hasse_edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || !rel[a][b] {
                continue;
            }
            let covered = (0..n).any(|c| c != a && c != b && rel[a][c] && rel[c][b]);
            if !covered {
                hasse_edges.push((a, b));
            }
        }
    }
    Ok(ClosurePoset { g, prank, nodes, relation: rel, raw_transitive, hasse_edges })
}

impl ClosurePoset {
    pub fn edge_labels(&self) -> Vec<(ElementarySeq, ElementarySeq)> {
        self.hasse_edges.iter().map(|&(a, b)| (self.nodes[a].clone(), self.nodes[b].clone())).collect()
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.nodes.len();
        (0..n).all(|a| (0..n).all(|b| a == b || !(self.relation[a][b] && self.relation[b][a])))
    }

    /// Graphviz rendering: compact labels, one rank per dimension, edges
    /// pointing from the smaller stratum to the larger one.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        s.push_str("digraph closure {\n");
        s.push_str("  rankdir=BT;\n");
        s.push_str("  node [shape=plaintext];\n");
        let mut dims: Vec<usize> = self.nodes.iter().map(|x| x.dimension()).collect();
        dims.dedup();
        for d in dims {
            s.push_str("  { rank=same;");
            for x in self.nodes.iter().filter(|x| x.dimension() == d) {
                s.push_str(&format!(" \"{}\";", x.compact()));
            }
            s.push_str(" }\n");
        }
        for &(a, b) in &self.hasse_edges {
            s.push_str(&format!("  \"{}\" -> \"{}\";\n", self.nodes[a].compact(), self.nodes[b].compact()));
        }
        s.push_str("}\n");
        s
    }
}

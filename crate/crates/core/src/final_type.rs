// SPDX-License-Identifier: Apache-2.0

//! Final types `(B, δ)`, the permutation `π_δ`, `ν`-values and direct sums.
//!
//! Positions are 1-based throughout the public API: `delta()[i-1]` is
//! `δ(b_i)` and `pi_map(..)[i-1]` is the index `j` with `π_δ(b_i) = b_j`.
//!
//! The direct sum of two final types sorts the union of their elements by
//! `ν`, breaking ties by summand and then by original position. Identical
//! cycles in the two summands share `ν`-values and interleave through the
//! tie-break; any other `ν` collision is reported as an internal error.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::Zero;
use serde::Serialize;

use crate::eo_seq::{enumerate_elementary, ElementarySeq, MAX_G};
use crate::error::{Error, Result};
use crate::newton::NewtonPolygon;
use crate::rational::Rational;

/// Largest `g` accepted by [`es_decompose`].
pub const DECOMPOSE_MAX_G: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinalType {
    delta: Vec<u8>,
    /// `(summand index, position within that summand)` for each element;
    /// `(0, i)` for types that are not the result of a sum.
    origin: Vec<(u8, u32)>,
}

/// One `π_δ`-orbit: positions in orbit order starting from the smallest,
/// and the bits `δ` read along them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub support: Vec<usize>,
    pub bits: Vec<u8>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Same length and the bit words agree up to rotation.
    pub fn isomorphic(&self, other: &Cycle) -> bool {
        let c = self.bits.len();
        c == other.bits.len() && (0..c).any(|r| (0..c).all(|k| self.bits[k] == other.bits[(k + r) % c]))
    }
}

impl FinalType {
    pub fn from_bits(delta: Vec<u8>) -> Result<Self> {
        if delta.is_empty() {
            return Err(Error::MalformedInput("empty final type".into()));
        }
        if delta.len() > 2 * MAX_G {
            return Err(Error::LengthCap { g: delta.len(), max: 2 * MAX_G });
        }
        if let Some(b) = delta.iter().find(|&&b| b > 1) {
            return Err(Error::MalformedInput(format!("δ value {} is not a bit", b)));
        }
        let origin = (0..delta.len() as u32).map(|i| (0, i + 1)).collect();
        Ok(FinalType { delta, origin })
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn delta(&self) -> &[u8] {
        &self.delta
    }

    pub fn origin(&self) -> &[(u8, u32)] {
        &self.origin
    }

    /// `ψ(i) = i - Σ_{j<=i} δ(b_j)` for `0 <= i <= d`.
    pub fn psi(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(0);
        let mut ones = 0;
        for (i, &b) in self.delta.iter().enumerate() {
            ones += b as usize;
            out.push(i + 1 - ones);
        }
        out
    }

    /// `d = 2g` and `δ(b_i) + δ(b_{2g+1-i}) = 1` for all `i`.
    pub fn is_symmetric(&self) -> bool {
        let d = self.len();
        d.is_multiple_of(2) && (0..d / 2).all(|i| self.delta[i] + self.delta[d - 1 - i] == 1)
    }

    /// `π_δ(b_i) = b_{ψ(i)}` if `δ(b_i) = 0`, else `b_{ψ(d)+i-ψ(i)}`.
    pub fn pi_map(&self) -> Result<Vec<usize>> {
        let psi = self.psi();
        let d = self.len();
        let mut img = Vec::with_capacity(d);
        for i in 1..=d {
            let j = if self.delta[i - 1] == 0 { psi[i] } else { psi[d] + i - psi[i] };
            img.push(j);
        }
        let mut seen = vec![false; d + 1];
        for &j in &img {
            if j == 0 || j > d || seen[j] {
                return Err(Error::NotBijective(format!("δ = {}", self)));
            }
            seen[j] = true;
        }
        Ok(img)
    }

    pub fn cycles(&self) -> Result<Vec<Cycle>> {
        let pi = self.pi_map()?;
        let d = self.len();
        let mut seen = vec![false; d + 1];
        let mut out = Vec::new();
        for start in 1..=d {
            if seen[start] {
                continue;
            }
            let mut support = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                support.push(x);
                x = pi[x - 1];
            }
            let bits = support.iter().map(|&p| self.delta[p - 1]).collect();
            out.push(Cycle { support, bits });
        }
        Ok(out)
    }

    /// `ν(b) = Σ_{l=1}^{c} δ(π^{-l} b) 2^{c-l} / (2^c - 1)` for `b` on a cycle
    /// of length `c`; indexed like `delta()`.
    pub fn nu_values(&self) -> Result<Vec<Rational>> {
        let mut nu = vec![Rational::zero(); self.len()];
        for cyc in self.cycles()? {
            let c = cyc.len();
            let den: i64 = (1i64 << c) - 1;
            for (k, &b) in cyc.support.iter().enumerate() {
                // predecessors of support[k] along the orbit are support[k-1], support[k-2], ...
                let mut num: i64 = 0;
                for l in 1..=c {
                    let pred = cyc.bits[(k + c * 2 - l) % c] as i64;
                    num += pred << (c - l);
                }
                nu[b - 1] = Rational::new(num, den);
            }
        }
        Ok(nu)
    }
}

impl fmt::Display for FinalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.delta.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", b)?;
        }
        f.write_str(")")
    }
}

/// `δ(b_i) = 1 - ψ(i) + ψ(i-1)` on the stretched sequence.
pub fn final_type_of(phi: &ElementarySeq) -> FinalType {
    let psi = phi.stretch();
    let v = psi.values();
    let delta = (1..v.len()).map(|i| 1 + v[i - 1] - v[i]).collect();
    FinalType::from_bits(delta).expect("stretched sequence gives a valid final type")
}

pub fn elementary_of(ft: &FinalType) -> Result<ElementarySeq> {
    if !ft.is_symmetric() {
        return Err(Error::NotSymmetric(ft.to_string()));
    }
    let g = ft.len() / 2;
    let psi = ft.psi();
    ElementarySeq::new(psi[1..=g].iter().map(|&x| x as u8).collect())
}

/// Direct sum of final types, ordered by `ν`.
pub fn ft_sum(a: &FinalType, b: &FinalType) -> Result<FinalType> {
    if a.len() + b.len() > 2 * MAX_G {
        return Err(Error::LengthCap { g: a.len() + b.len(), max: 2 * MAX_G });
    }
    let (nu_a, nu_b) = (a.nu_values()?, b.nu_values()?);
    let mut elems: Vec<(Rational, u8, u32, u8)> = Vec::with_capacity(a.len() + b.len());
    for i in 0..a.len() {
        elems.push((nu_a[i], 0, i as u32 + 1, a.delta[i]));
    }
    for i in 0..b.len() {
        elems.push((nu_b[i], 1, i as u32 + 1, b.delta[i]));
    }
    elems.sort();
    audit_collisions(a, b, &nu_a, &nu_b)?;
    Ok(FinalType {
        delta: elems.iter().map(|e| e.3).collect(),
        origin: elems.iter().map(|e| (e.1, e.2)).collect(),
    })
}

fn audit_collisions(a: &FinalType, b: &FinalType, nu_a: &[Rational], nu_b: &[Rational]) -> Result<()> {
    let ca = a.cycles()?;
    let cb = b.cycles()?;
    let by_value: HashMap<Rational, usize> =
        ca.iter().enumerate().flat_map(|(k, c)| c.support.iter().map(move |&p| (nu_a[p - 1], k))).collect();
    for cyc in &cb {
        for &p in &cyc.support {
            if let Some(&k) = by_value.get(&nu_b[p - 1]) {
                if !ca[k].isomorphic(cyc) {
                    return Err(Error::Internal(format!(
                        "ν collision between non-isomorphic cycles of {} and {}",
                        a, b
                    )));
                }
            }
        }
    }
    Ok(())
}

fn sum_cache() -> &'static Mutex<HashMap<(ElementarySeq, ElementarySeq), ElementarySeq>> {
    static CACHE: OnceLock<Mutex<HashMap<(ElementarySeq, ElementarySeq), ElementarySeq>>> =
        OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `φ ⊕ φ'`: the elementary sequence of the direct sum.
pub fn es_sum(a: &ElementarySeq, b: &ElementarySeq) -> Result<ElementarySeq> {
    let key = (a.clone(), b.clone());
    if let Some(hit) = sum_cache().lock().expect("cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let out = es_sum_uncached(a, b)?;
    sum_cache().lock().expect("cache poisoned").insert(key, out.clone());
    Ok(out)
}

pub fn es_sum_uncached(a: &ElementarySeq, b: &ElementarySeq) -> Result<ElementarySeq> {
    elementary_of(&ft_sum(&final_type_of(a), &final_type_of(b))?)
}

/// Factor order used by decompositions: shorter first, then lexicographic.
fn factor_key(x: &ElementarySeq) -> (usize, &[u8]) {
    (x.g(), x.values())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub target: ElementarySeq,
    /// ⊕-indecomposable factors, shortest first then lexicographic.
    pub factors: Vec<ElementarySeq>,
    /// More than one factor multiset sums to `target`.
    pub ambiguous: bool,
}

impl Decomposition {
    pub fn is_indecomposable(&self) -> bool {
        self.factors.len() == 1
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.target.paren())?;
        let parts: Vec<String> = self.factors.iter().map(|x| x.paren()).collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

/// All ordered splits `φ = α ⊕ β` with `1 <= g(α) <= g(β)`.
pub fn es_splits(phi: &ElementarySeq) -> Result<Vec<(ElementarySeq, ElementarySeq)>> {
    let g = phi.g();
    let mut out = Vec::new();
    for g1 in 1..=g / 2 {
        let lefts = enumerate_elementary(g1, None)?;
        let rights = enumerate_elementary(g - g1, None)?;
        for a in &lefts {
            for b in &rights {
                // p-rank and a-number add under ⊕
                if a.p_rank() + b.p_rank() != phi.p_rank() || a.a_number() + b.a_number() != phi.a_number() {
                    continue;
                }
                if es_sum(a, b)? == *phi {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
    }
    Ok(out)
}

/// No representation `φ = α ⊕ β` with both summands non-empty.
pub fn is_es_indecomposable(phi: &ElementarySeq) -> Result<bool> {
    Ok(es_splits(phi)?.is_empty())
}

fn all_factorisations(
    phi: &ElementarySeq,
    memo: &mut HashMap<ElementarySeq, Vec<Vec<ElementarySeq>>>,
) -> Result<Vec<Vec<ElementarySeq>>> {
    if let Some(hit) = memo.get(phi) {
        return Ok(hit.clone());
    }
    let splits = es_splits(phi)?;
    let mut out: Vec<Vec<ElementarySeq>> = Vec::new();
    if splits.is_empty() {
        out.push(vec![phi.clone()]);
    }
    for (a, b) in splits {
        let fa = all_factorisations(&a, memo)?;
        let fb = all_factorisations(&b, memo)?;
        for x in &fa {
            for y in &fb {
                let mut m: Vec<ElementarySeq> = x.iter().chain(y.iter()).cloned().collect();
                m.sort_by(|p, q| factor_key(p).cmp(&factor_key(q)));
                if !out.contains(&m) {
                    out.push(m);
                }
            }
        }
    }
    out.sort_by(|x, y| {
        let kx: Vec<_> = x.iter().map(factor_key).collect();
        let ky: Vec<_> = y.iter().map(factor_key).collect();
        kx.cmp(&ky)
    });
    memo.insert(phi.clone(), out.clone());
    Ok(out)
}

/// Splits `φ` into ⊕-indecomposable factors. When several factor multisets
/// exist the least one (shorter factors first) is returned and `ambiguous`
/// is set.
pub fn es_decompose(phi: &ElementarySeq) -> Result<Decomposition> {
    if phi.g() > DECOMPOSE_MAX_G {
        return Err(Error::LengthCap { g: phi.g(), max: DECOMPOSE_MAX_G });
    }
    let all = all_factorisations(phi, &mut HashMap::new())?;
    Ok(Decomposition { target: phi.clone(), factors: all[0].clone(), ambiguous: all.len() > 1 })
}

/// The final type of the minimal p-divisible group `H_{m,n}`:
/// `ψ_{m,n} = (0,…,0,1,…,m)` with `n` leading zeros.
pub fn base_type(m: u32, n: u32) -> Result<FinalType> {
    use num_integer::Integer;
    if m < n || (m, n) == (0, 0) || m.gcd(&n) != 1 {
        return Err(Error::InvalidPair { m, n });
    }
    if (m + n) as usize > 2 * MAX_G {
        return Err(Error::LengthCap { g: (m + n) as usize, max: 2 * MAX_G });
    }
    // ψ steps by 0 over the first n entries (δ=1) and by 1 afterwards (δ=0)
    let mut delta = vec![1u8; n as usize];
    delta.extend(std::iter::repeat_n(0u8, m as usize));
    FinalType::from_bits(delta)
}

/// Elementary sequence of the minimal p-divisible group of `ξ`.
pub fn minimal_sequence(xi: &NewtonPolygon) -> Result<ElementarySeq> {
    if !xi.is_symmetric() {
        return Err(Error::NotSymmetric(xi.to_string()));
    }
    let mut half: Vec<(u32, u32)> = Vec::new();
    for seg in xi.lower_half() {
        for _ in 0..seg.multiplicity {
            half.push((seg.m, seg.n));
        }
    }
    let s = xi.multiplicity(1, 1) as usize;
    let m: usize = half.iter().map(|&(m, _)| m as usize).sum();
    let n: usize = half.iter().map(|&(_, n)| n as usize).sum();
    let mut values: Vec<u8> = Vec::with_capacity(m + n + s);
    if !half.is_empty() {
        let mut acc = base_type(half[0].0, half[0].1)?;
        for &(hm, hn) in &half[1..] {
            acc = ft_sum(&acc, &base_type(hm, hn)?)?;
        }
        let psi = acc.psi();
        values.extend(psi[1..=m].iter().map(|&x| x as u8));
    }
    values.extend(std::iter::repeat_n((m - n) as u8, n + s));
    ElementarySeq::new(values)
}

// SPDX-License-Identifier: Apache-2.0

//! Elementary sequences and their stretched final sequences.
//!
//! An elementary sequence `φ` of length `g` is stored 1-indexed: `values[i-1]`
//! is `φ(i)`, and `φ(0) = 0` is implicit. The final sequence `ψ` is stored
//! with its full index range `0..=2g`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported `g`. With `2g <= 32` every `π_δ` cycle length fits a
/// 64-bit `ν` denominator `2^c - 1`.
pub const MAX_G: usize = 16;

/// Compact (digit string) input is only unambiguous while every entry is a
/// single digit.
const COMPACT_MAX_G: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ElementarySeq {
    values: Vec<u8>,
}

impl ElementarySeq {
    /// Validates `φ(1..=g)` against the step rule `φ(i) <= φ(i+1) <= φ(i)+1`.
    pub fn new(values: Vec<u8>) -> Result<Self> {
        let g = values.len();
        if g == 0 {
            return Err(Error::MalformedInput("empty elementary sequence".into()));
        }
        if g > MAX_G {
            return Err(Error::LengthCap { g, max: MAX_G });
        }
        let mut prev = 0u8;
        for (i, &v) in values.iter().enumerate() {
            if v < prev || v > prev + 1 {
                return Err(Error::InvariantViolation(format!(
                    "step from φ({})={} to φ({})={} must be 0 or 1",
                    i,
                    prev,
                    i + 1,
                    v
                )));
            }
            prev = v;
        }
        let seq = ElementarySeq { values };
        debug_assert!(seq.values.iter().enumerate().all(|(i, &v)| (v as usize) <= i + 1));
        Ok(seq)
    }

    pub fn g(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// `φ(i)` for `0 <= i <= g`.
    pub fn at(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.values[i - 1] as usize
        }
    }

    /// `max { i : φ(i) = i }`, or 0 when only `i = 0` qualifies.
    pub fn p_rank(&self) -> usize {
        (1..=self.g()).filter(|&i| self.at(i) == i).max().unwrap_or(0)
    }

    /// `g - φ(g)`.
    pub fn a_number(&self) -> usize {
        self.g() - self.at(self.g())
    }

    /// Dimension of the EO stratum, `Σ φ(i)`.
    pub fn dimension(&self) -> usize {
        self.values.iter().map(|&v| v as usize).sum()
    }

    /// Stretches `φ` to the final sequence `ψ` on `0..=2g`.
    pub fn stretch(&self) -> FinalSeq {
        let g = self.g();
        let mut psi = vec![0u8; 2 * g + 1];
        for i in 0..=g {
            psi[i] = self.at(i) as u8;
            psi[2 * g - i] = (g - i + self.at(i)) as u8;
        }
        FinalSeq { g, values: psi }
    }

    /// Digit-string label (`01234`) when every entry is one digit, otherwise
    /// the canonical comma form.
    pub fn compact(&self) -> String {
        if self.values.iter().all(|&v| v < 10) {
            self.values.iter().map(|v| char::from(b'0' + v)).collect()
        } else {
            self.to_string()
        }
    }

    /// Parenthesised form as used in tables: `(0,1,1,2)`.
    pub fn paren(&self) -> String {
        format!("({})", self)
    }

    /// Parses comma-separated integers (optionally wrapped in parentheses) or,
    /// for `g <= 9`, a contiguous digit string.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(t)
            .trim();
        if t.is_empty() {
            return Err(Error::MalformedInput("empty elementary sequence".into()));
        }
        let values: Vec<u8> = if t.contains(',') {
            let parts: Vec<&str> = t.split(',').map(str::trim).collect();
            if parts.len() > MAX_G {
                return Err(Error::LengthCap { g: parts.len(), max: MAX_G });
            }
            parts
                .iter()
                .map(|p| {
                    if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(Error::MalformedInput(format!("not an integer: {:?}", p)));
                    }
                    p.parse::<u8>()
                        .map_err(|_| Error::MalformedInput(format!("entry out of range: {:?}", p)))
                })
                .collect::<Result<_>>()?
        } else {
            if !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::MalformedInput(format!("not a digit string: {:?}", t)));
            }
            if t.len() > MAX_G {
                return Err(Error::LengthCap { g: t.len(), max: MAX_G });
            }
            if t.len() > COMPACT_MAX_G {
                return Err(Error::MalformedInput(format!(
                    "compact digit form only allowed for g <= {}; use commas",
                    COMPACT_MAX_G
                )));
            }
            t.bytes().map(|b| b - b'0').collect()
        };
        ElementarySeq::new(values)
    }
}

impl fmt::Display for ElementarySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.values {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{}", v)?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for ElementarySeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ElementarySeq::parse(s)
    }
}

impl TryFrom<String> for ElementarySeq {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        ElementarySeq::parse(&s)
    }
}

impl From<ElementarySeq> for String {
    fn from(s: ElementarySeq) -> String {
        s.to_string()
    }
}

/// Final sequence `ψ : {0..2g} -> {0..g}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinalSeq {
    g: usize,
    values: Vec<u8>,
}

impl FinalSeq {
    /// Checks `ψ(0)=0`, `ψ(2g)=g`, unit steps and `ψ(2g-i) = g-i+ψ(i)`.
    pub fn new(values: Vec<u8>) -> Result<Self> {
        if values.len() < 3 || values.len().is_multiple_of(2) {
            return Err(Error::MalformedInput(format!(
                "final sequence needs 2g+1 entries, got {}",
                values.len()
            )));
        }
        let g = (values.len() - 1) / 2;
        if g > MAX_G {
            return Err(Error::LengthCap { g, max: MAX_G });
        }
        let fs = FinalSeq { g, values };
        fs.check()?;
        Ok(fs)
    }

    fn check(&self) -> Result<()> {
        let g = self.g;
        let v = &self.values;
        if v[0] != 0 || v[2 * g] as usize != g {
            return Err(Error::InvariantViolation("need ψ(0)=0 and ψ(2g)=g".into()));
        }
        for i in 0..2 * g {
            if v[i + 1] < v[i] || v[i + 1] > v[i] + 1 {
                return Err(Error::InvariantViolation(format!("ψ step at {} is not 0 or 1", i)));
            }
        }
        for i in 0..=g {
            if v[2 * g - i] as usize != g - i + v[i] as usize {
                return Err(Error::InvariantViolation(format!("ψ(2g-{}) symmetry fails", i)));
            }
        }
        Ok(())
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// `ψ(0..=2g)`.
    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn at(&self, i: usize) -> usize {
        self.values[i] as usize
    }

    /// Restriction to `1..=g`, i.e. the elementary sequence it was stretched from.
    pub fn restrict(&self) -> ElementarySeq {
        ElementarySeq { values: self.values[1..=self.g].to_vec() }
    }
}

/// All elementary sequences of length `g` in lexicographic order, optionally
/// restricted to one p-rank.
pub fn enumerate_elementary(g: usize, prank: Option<usize>) -> Result<Vec<ElementarySeq>> {
    if g == 0 {
        return Err(Error::MalformedInput("g must be positive".into()));
    }
    if g > MAX_G {
        return Err(Error::LengthCap { g, max: MAX_G });
    }
    if let Some(f) = prank {
        if f > g {
            return Err(Error::MalformedInput(format!("p-rank {} exceeds g = {}", f, g)));
        }
    }
    // Bit j (most significant first) says whether φ steps up at position j+1;
    // counting up through the bit patterns is lexicographic on the values.
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << g) {
        let mut values = Vec::with_capacity(g);
        let mut acc = 0u8;
        for j in 0..g {
            acc += ((mask >> (g - 1 - j)) & 1) as u8;
            values.push(acc);
        }
        let seq = ElementarySeq { values };
        if prank.is_none_or(|f| seq.p_rank() == f) {
            out.push(seq);
        }
    }
    Ok(out)
}

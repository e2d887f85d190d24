// SPDX-License-Identifier: Apache-2.0

//! Symmetric Newton polygons as multisets of coprime segments `[m,n]`.
//!
//! A segment `[m,n]` has height `m+n` and slope `n/(m+n)`; `[1,0]` is slope 0
//! (étale part), `[1,1]` is slope 1/2 (supersingular part).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::eo_seq::MAX_G;
use crate::error::{Error, Result};
use crate::rational::{fmt_ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub m: u32,
    pub n: u32,
    pub multiplicity: u32,
}

impl Segment {
    pub fn new(m: u32, n: u32, multiplicity: u32) -> Result<Self> {
        if (m, n) == (0, 0) || m.gcd(&n) != 1 {
            return Err(Error::NonCoprime { m, n });
        }
        if multiplicity == 0 {
            return Err(Error::MalformedInput(format!("zero multiplicity for [{},{}]", m, n)));
        }
        Ok(Segment { m, n, multiplicity })
    }

    pub fn slope(&self) -> Rational {
        Rational::new(self.n as i64, (self.m + self.n) as i64)
    }

    fn cmp_slope(&self, other: &Segment) -> Ordering {
        // n1/(m1+n1) vs n2/(m2+n2) by cross multiplication
        let l = self.n as u64 * (other.m + other.n) as u64;
        let r = other.n as u64 * (self.m + self.n) as u64;
        l.cmp(&r)
    }
}

/// Canonical form: equal segments aggregated, sorted by ascending slope.
/// Coprimality makes the slope determine the segment, so the order is total.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NewtonPolygon {
    segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Builds a polygon from `(m, n, multiplicity)` triples in any order.
    pub fn from_parts(parts: &[(u32, u32, u32)]) -> Result<Self> {
        let mut segments: Vec<Segment> = Vec::new();
        for &(m, n, k) in parts {
            let seg = Segment::new(m, n, k)?;
            match segments.iter_mut().find(|s| s.m == m && s.n == n) {
                Some(s) => s.multiplicity += k,
                None => segments.push(seg),
            }
        }
        if segments.is_empty() {
            return Err(Error::MalformedInput("empty Newton polygon".into()));
        }
        segments.sort_by(|a, b| a.cmp_slope(b));
        Ok(NewtonPolygon { segments })
    }

    /// `g[1,1]`.
    pub fn supersingular(g: usize) -> Self {
        NewtonPolygon { segments: vec![Segment { m: 1, n: 1, multiplicity: g as u32 }] }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Segments with multiplicities expanded, in slope order.
    pub fn expanded(&self) -> Vec<(u32, u32)> {
        self.segments
            .iter()
            .flat_map(|s| std::iter::repeat_n((s.m, s.n), s.multiplicity as usize))
            .collect()
    }

    pub fn multiplicity(&self, m: u32, n: u32) -> u32 {
        self.segments.iter().find(|s| s.m == m && s.n == n).map_or(0, |s| s.multiplicity)
    }

    pub fn height(&self) -> usize {
        self.segments.iter().map(|s| (s.multiplicity * (s.m + s.n)) as usize).sum()
    }

    pub fn dimension(&self) -> usize {
        self.segments.iter().map(|s| (s.multiplicity * s.m) as usize).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.segments.iter().all(|s| self.multiplicity(s.n, s.m) == s.multiplicity)
    }

    /// Number of zero slopes, i.e. the multiplicity of `[1,0]`.
    pub fn p_rank(&self) -> usize {
        self.multiplicity(1, 0) as usize
    }

    pub fn first_slope(&self) -> Rational {
        self.segments[0].slope()
    }

    /// Vertices `(Σ(m+n), Σn)` of the expanded polygon, starting at the origin.
    pub fn break_points(&self) -> Vec<(usize, usize)> {
        let mut pts = vec![(0, 0)];
        let (mut x, mut y) = (0usize, 0usize);
        for (m, n) in self.expanded() {
            x += (m + n) as usize;
            y += n as usize;
            pts.push((x, y));
        }
        pts
    }

    pub fn is_supersingular(&self) -> bool {
        self.segments.len() == 1 && self.segments[0].m == 1 && self.segments[0].n == 1
    }

    /// Segments of slope `< 1/2`, one from each symmetric pair (including `[1,0]`).
    pub fn lower_half(&self) -> Vec<Segment> {
        self.segments.iter().filter(|s| s.n < s.m).copied().collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for raw in text.split('+') {
            let term = raw.trim();
            let open = term
                .find('[')
                .ok_or_else(|| Error::MalformedInput(format!("expected '[m,n]' in {:?}", term)))?;
            let (mult, rest) = term.split_at(open);
            let mult = mult.trim();
            let k: u32 = if mult.is_empty() {
                1
            } else {
                mult.parse()
                    .map_err(|_| Error::MalformedInput(format!("bad multiplier {:?}", mult)))?
            };
            let inner = rest
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| Error::MalformedInput(format!("unbalanced brackets in {:?}", term)))?;
            let (m, n) = inner
                .split_once(',')
                .ok_or_else(|| Error::MalformedInput(format!("expected m,n in {:?}", term)))?;
            let num = |s: &str| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::MalformedInput(format!("bad integer {:?}", s.trim())))
            };
            let (m, n) = (num(m)?, num(n)?);
            if (m + n) as usize > 2 * MAX_G {
                return Err(Error::LengthCap { g: (m + n) as usize, max: 2 * MAX_G });
            }
            parts.push((m, n, k));
        }
        let np = NewtonPolygon::from_parts(&parts)?;
        if np.height() > 2 * MAX_G {
            return Err(Error::LengthCap { g: np.height() / 2, max: MAX_G });
        }
        Ok(np)
    }

    pub fn to_json(&self) -> Value {
        let segs: Vec<Value> = self.expanded().iter().map(|&(m, n)| json!([m, n])).collect();
        let bps: Vec<Value> = self.break_points().iter().map(|&(x, y)| json!([x, y])).collect();
        json!({
            "polygon": self.to_string(),
            "segments": segs,
            "height": self.height(),
            "dimension": self.dimension(),
            "p_rank": self.p_rank(),
            "first_slope": fmt_ratio(&self.first_slope()),
            "symmetric": self.is_symmetric(),
            "break_points": bps,
        })
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if s.multiplicity > 1 {
                write!(f, "{}", s.multiplicity)?;
            }
            write!(f, "[{},{}]", s.m, s.n)?;
        }
        Ok(())
    }
}

impl FromStr for NewtonPolygon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NewtonPolygon::parse(s)
    }
}

impl Serialize for NewtonPolygon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for NewtonPolygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        NewtonPolygon::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Multiset union.
pub fn np_sum(a: &NewtonPolygon, b: &NewtonPolygon) -> NewtonPolygon {
    let parts: Vec<(u32, u32, u32)> = a
        .segments
        .iter()
        .chain(b.segments.iter())
        .map(|s| (s.m, s.n, s.multiplicity))
        .collect();
    NewtonPolygon::from_parts(&parts).expect("union of valid polygons is valid")
}

/// All symmetric polygons of dimension `g`, ordered by p-rank, then first
/// slope, then the expanded segment list.
pub fn enumerate_symmetric_np(g: usize, prank: Option<usize>) -> Result<Vec<NewtonPolygon>> {
    if g == 0 {
        return Err(Error::MalformedInput("g must be positive".into()));
    }
    if g > MAX_G {
        return Err(Error::LengthCap { g, max: MAX_G });
    }
    // coprime m > n >= 0 with m+n <= g: one half of each symmetric pair
    let mut pairs = Vec::new();
    for h in 1..=g as u32 {
        for n in 0..h {
            let m = h - n;
            if m > n && m.gcd(&n) == 1 {
                pairs.push((m, n));
            }
        }
    }
    let mut halves: Vec<Vec<(u32, u32)>> = Vec::new();
    fn grow(
        pairs: &[(u32, u32)],
        start: usize,
        budget: usize,
        acc: &mut Vec<(u32, u32)>,
        out: &mut Vec<Vec<(u32, u32)>>,
    ) {
        out.push(acc.clone());
        for j in start..pairs.len() {
            let (m, n) = pairs[j];
            if (m + n) as usize <= budget {
                acc.push((m, n));
                grow(pairs, j, budget - (m + n) as usize, acc, out);
                acc.pop();
            }
        }
    }
    grow(&pairs, 0, g, &mut Vec::new(), &mut halves);

    let mut out = Vec::with_capacity(halves.len());
    for half in halves {
        let used: usize = half.iter().map(|&(m, n)| (m + n) as usize).sum();
        let s = (g - used) as u32;
        let mut parts: Vec<(u32, u32, u32)> = Vec::new();
        for &(m, n) in &half {
            parts.push((m, n, 1));
            parts.push((n, m, 1));
        }
        if s > 0 {
            parts.push((1, 1, s));
        }
        let np = NewtonPolygon::from_parts(&parts)?;
        debug_assert!(np.is_symmetric() && np.dimension() == g);
        if prank.is_none_or(|f| np.p_rank() == f) {
            out.push(np);
        }
    }
    out.sort_by(|a, b| {
        a.p_rank()
            .cmp(&b.p_rank())
            .then(a.first_slope().cmp(&b.first_slope()))
            .then_with(|| a.expanded().cmp(&b.expanded()))
    });
    Ok(out)
}

// SPDX-License-Identifier: Apache-2.0

//! Rule engine classifying intersections `S_φ ∩ N(ξ)` of EO and NP strata.
//!
//! Every cell starts `Unknown`. Rules assert statuses; assertions are joined in
//! the lattice `Unknown < NonEmpty < NonEmptyDense < Contained`, with `Empty`
//! terminal and incompatible with anything non-empty. Dimensions `1..=g` are
//! classified in increasing order because the product rule reads the finished
//! lower-dimensional matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::eo_seq::{enumerate_elementary, ElementarySeq};
use crate::error::{Error, Result};
use crate::final_type::{es_sum, minimal_sequence};
use crate::newton::{enumerate_symmetric_np, np_sum, NewtonPolygon};
use crate::rational::{fmt_ratio, Rational};
use crate::slope::first_newton_slope;
use crate::SCHEMA;

pub const CLASSIFY_MAX_G: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "unknown")]
    Unknown,
    #[serde(rename = "nonempty")]
    NonEmpty,
    #[serde(rename = "dense")]
    NonEmptyDense,
    #[serde(rename = "contained")]
    Contained,
    #[serde(rename = "empty")]
    Empty,
}

impl Status {
    pub fn is_nonempty(self) -> bool {
        matches!(self, Status::NonEmpty | Status::NonEmptyDense | Status::Contained)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Unknown => "unknown",
            Status::NonEmpty => "nonempty",
            Status::NonEmptyDense => "dense",
            Status::Contained => "contained",
            Status::Empty => "empty",
        }
    }

    pub fn parse(s: &str) -> Option<Status> {
        Some(match s {
            "unknown" => Status::Unknown,
            "nonempty" => Status::NonEmpty,
            "dense" => Status::NonEmptyDense,
            "contained" => Status::Contained,
            "empty" => Status::Empty,
            _ => return None,
        })
    }

    fn rank(self) -> u8 {
        match self {
            Status::Unknown => 0,
            Status::NonEmpty => 1,
            Status::NonEmptyDense => 2,
            Status::Contained => 3,
            Status::Empty => 0,
        }
    }

    /// Join of two assertions; `None` on a contradiction.
    fn join(self, other: Status) -> Option<Status> {
        use Status::*;
        match (self, other) {
            (a, b) if a == b => Some(a),
            (Empty, Unknown) | (Unknown, Empty) => Some(Empty),
            (Empty, _) | (_, Empty) => None,
            (a, b) => Some(if a.rank() >= b.rank() { a } else { b }),
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R4b,
    R5,
    R6,
    R7,
    R8,
}

impl RuleId {
    pub const ALL: [RuleId; 9] =
        [RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4, RuleId::R4b, RuleId::R5, RuleId::R6, RuleId::R7, RuleId::R8];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::R1 => "chai_oort",
            RuleId::R2 => "minimality",
            RuleId::R3 => "prank_split",
            RuleId::R4 => "slope_bound",
            RuleId::R4b => "unique_slope",
            RuleId::R5 => "anumber_one",
            RuleId::R6 => "products",
            RuleId::R7 => "ledger",
            RuleId::R8 => "unique_np",
        }
    }

    fn citation(self) -> &'static str {
        match self {
            RuleId::R1 => "Chai-Oort: S_φ ⊆ S_g iff φ(⌊(g+1)/2⌋) = 0",
            RuleId::R2 => "minimality (Oort, Harashita): S_{φ_ξ} ⊆ N(ξ)",
            RuleId::R3 => "p-rank: φ and ξ must have the same p-rank",
            RuleId::R4 => "Harashita first slope: S_φ ⊆ Z_λ iff λ_φ ≥ λ",
            RuleId::R4b => "first slope: S_φ meets the union of NP strata with first slope λ_φ",
            RuleId::R5 => "a-number one strata are dense in every NP stratum of their p-rank",
            RuleId::R6 => "products: S_{φ⊕φ'} ∩ N(ξ⊕ξ') ≠ ∅ when both factors meet",
            RuleId::R7 => "ledger entry",
            RuleId::R8 => "unique NP stratum of this p-rank: every EO stratum of that p-rank lands in it",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RuleFiring {
    pub rule: RuleId,
    pub status: Status,
    pub detail: String,
    pub citation: String,
}

impl fmt::Display for RuleFiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} -> {} [{}]", self.rule, self.detail, self.status, self.citation)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellStatus {
    pub status: Status,
    /// Firings asserting the final status, one per rule (least detail wins),
    /// ordered by rule.
    pub provenance: Vec<RuleFiring>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct LedgerEntry {
    pub g: usize,
    pub phi: String,
    pub np: String,
    pub status: Status,
    pub citation: String,
}

/// Externally supplied facts applied by rule R7.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(transparent)]
pub struct FactsLedger {
    pub entries: Vec<LedgerEntry>,
}

impl FactsLedger {
    /// `S_{(0,0,1,1,2)} ∩ S_5 ≠ ∅`. The stratum `(0,0,1,1,2)` has both
    /// `(0,0,0,1,2) ⊆ S_5` and `(0,0,1,1,1) ⊆ N([3,2]+[2,3])` in its closure,
    /// which forces it to meet the supersingular locus; the engine does not
    /// derive this.
    pub fn builtin() -> Self {
        FactsLedger {
            entries: vec![LedgerEntry {
                g: 5,
                phi: "0,0,1,1,2".into(),
                np: "5[1,1]".into(),
                status: Status::NonEmpty,
                citation: "closure argument: (0,0,0,1,2) ⊆ S_5 and (0,0,1,1,1) ⊆ N([3,2]+[2,3]) both lie in the \
                           closure of S_(0,0,1,1,2)"
                    .into(),
            }],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ledger: FactsLedger =
            serde_json::from_str(text).map_err(|e| Error::InvalidLedger(e.to_string()))?;
        for e in &ledger.entries {
            e.resolve()?;
        }
        Ok(ledger)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidLedger(format!("{}: {}", path.display(), e)))?;
        FactsLedger::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ledger serialises")
    }
}

impl LedgerEntry {
    fn resolve(&self) -> Result<(ElementarySeq, NewtonPolygon)> {
        let bad = |msg: String| Error::InvalidLedger(format!("{} / {}: {}", self.phi, self.np, msg));
        let phi = ElementarySeq::parse(&self.phi).map_err(|e| bad(e.to_string()))?;
        let np = NewtonPolygon::parse(&self.np).map_err(|e| bad(e.to_string()))?;
        if phi.g() != self.g || np.dimension() != self.g {
            return Err(bad(format!("expected dimension {}", self.g)));
        }
        if !np.is_symmetric() {
            return Err(bad("polygon is not symmetric".into()));
        }
        if phi.p_rank() != np.p_rank() {
            return Err(bad("p-ranks differ".into()));
        }
        if !matches!(self.status, Status::NonEmpty | Status::Empty | Status::Contained) {
            return Err(bad(format!("status {} not allowed", self.status)));
        }
        Ok((phi, np))
    }
}

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub ledger: FactsLedger,
    /// Order in which rules are applied within each pass. The fixed point
    /// does not depend on it.
    pub rule_order: Vec<RuleId>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { ledger: FactsLedger::builtin(), rule_order: RuleId::ALL.to_vec() }
    }
}

impl ClassifyOptions {
    pub fn without_ledger() -> Self {
        ClassifyOptions { ledger: FactsLedger::default(), ..Default::default() }
    }
}

/// All cells of one dimension.
#[derive(Debug, Clone)]
pub struct DimensionMatrix {
    pub g: usize,
    pub rows: Vec<ElementarySeq>,
    pub cols: Vec<NewtonPolygon>,
    pub cells: Vec<Vec<CellStatus>>,
}

impl DimensionMatrix {
    pub fn row_index(&self, phi: &ElementarySeq) -> Option<usize> {
        self.rows.iter().position(|r| r == phi)
    }

    pub fn col_index(&self, xi: &NewtonPolygon) -> Option<usize> {
        self.cols.iter().position(|c| c == xi)
    }

    pub fn cell(&self, phi: &ElementarySeq, xi: &NewtonPolygon) -> Result<&CellStatus> {
        match (self.row_index(phi), self.col_index(xi)) {
            (Some(r), Some(c)) => Ok(&self.cells[r][c]),
            _ => Err(Error::CellNotFound(format!("({}, {}) in dimension {}", phi.paren(), xi, self.g))),
        }
    }

    pub fn status(&self, phi: &ElementarySeq, xi: &NewtonPolygon) -> Result<Status> {
        Ok(self.cell(phi, xi)?.status)
    }

    /// Distinct p-ranks present among the rows.
    pub fn p_ranks(&self) -> Vec<usize> {
        (0..=self.g).filter(|&f| self.rows.iter().any(|r| r.p_rank() == f)).collect()
    }

    /// Row and column indices of the p-rank `f` block.
    pub fn block(&self, f: usize) -> (Vec<usize>, Vec<usize>) {
        let rows = (0..self.rows.len()).filter(|&r| self.rows[r].p_rank() == f).collect();
        let cols = (0..self.cols.len()).filter(|&c| self.cols[c].p_rank() == f).collect();
        (rows, cols)
    }

    pub fn count(&self, status: Status) -> usize {
        self.cells.iter().flatten().filter(|c| c.status == status).count()
    }

    /// Same-p-rank cells of `status` in column `xi`.
    pub fn column_members(&self, xi: &NewtonPolygon, status: Status) -> Vec<ElementarySeq> {
        let Some(c) = self.col_index(xi) else { return Vec::new() };
        (0..self.rows.len())
            .filter(|&r| self.rows[r].p_rank() == xi.p_rank() && self.cells[r][c].status == status)
            .map(|r| self.rows[r].clone())
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    /// `dims[k]` is dimension `k+1`.
    pub dims: Vec<DimensionMatrix>,
}

impl Classification {
    pub fn g(&self) -> usize {
        self.dims.len()
    }

    pub fn matrix(&self, g: usize) -> Result<&DimensionMatrix> {
        if g == 0 || g > self.dims.len() {
            return Err(Error::CellNotFound(format!("dimension {} not classified", g)));
        }
        Ok(&self.dims[g - 1])
    }

    pub fn top(&self) -> &DimensionMatrix {
        self.dims.last().expect("at least one dimension")
    }

    pub fn status(&self, phi: &ElementarySeq, xi: &NewtonPolygon) -> Result<Status> {
        self.matrix(phi.g())?.status(phi, xi)
    }

    /// Statuses of the top dimension, keyed by (compact φ, polygon string).
    pub fn status_map(&self) -> BTreeMap<(String, String), Status> {
        let m = self.top();
        let mut out = BTreeMap::new();
        for (r, phi) in m.rows.iter().enumerate() {
            for (c, xi) in m.cols.iter().enumerate() {
                out.insert((phi.to_string(), xi.to_string()), m.cells[r][c].status);
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let m = self.top();
        let mut blocks = Vec::new();
        for f in m.p_ranks() {
            let (rows, cols) = m.block(f);
            let mut cells = Vec::new();
            for &r in &rows {
                for &c in &cols {
                    let cell = &m.cells[r][c];
                    cells.push(json!({
                        "phi": m.rows[r].to_string(),
                        "np": m.cols[c].to_string(),
                        "status": cell.status,
                        "provenance": cell.provenance,
                    }));
                }
            }
            blocks.push(json!({
                "p_rank": f,
                "rows": rows.iter().map(|&r| m.rows[r].to_string()).collect::<Vec<_>>(),
                "cols": cols.iter().map(|&c| m.cols[c].to_string()).collect::<Vec<_>>(),
                "cells": cells,
            }));
        }
        json!({ "schema": SCHEMA, "g": m.g, "blocks": blocks })
    }

    /// Full status grid of the top dimension.
    pub fn to_csv(&self) -> String {
        let m = self.top();
        let mut s = String::from("phi");
        for xi in &m.cols {
            s.push_str(&format!(",\"{}\"", xi));
        }
        s.push('\n');
        for (r, phi) in m.rows.iter().enumerate() {
            s.push_str(&format!("\"{}\"", phi));
            for c in 0..m.cols.len() {
                s.push(',');
                s.push_str(m.cells[r][c].status.as_str());
            }
            s.push('\n');
        }
        s
    }

    /// One union statement per NP stratum of the top dimension.
    pub fn to_markdown(&self) -> String {
        let m = self.top();
        let mut s = format!("# Intersections in dimension {}\n", m.g);
        for f in m.p_ranks() {
            s.push_str(&format!("\n## p-rank {}\n", f));
            for xi in m.cols.iter().filter(|x| x.p_rank() == f) {
                s.push_str(&format!("\n### N({})\n\n", xi));
                let mut terms = Vec::new();
                for st in [Status::Contained, Status::NonEmptyDense, Status::NonEmpty, Status::Unknown] {
                    for phi in m.column_members(xi, st) {
                        terms.push(match st {
                            Status::Contained => format!("S_{}", phi.paren()),
                            _ => format!("(S_{} ∩ N)", phi.paren()),
                        });
                    }
                }
                s.push_str(&format!("N = {}\n\n", terms.join(" ∪ ")));
                for (st, label) in [
                    (Status::Contained, "contained"),
                    (Status::NonEmptyDense, "dense"),
                    (Status::NonEmpty, "non-empty"),
                    (Status::Unknown, "undecided"),
                    (Status::Empty, "empty"),
                ] {
                    let members: Vec<String> = m.column_members(xi, st).iter().map(|p| p.paren()).collect();
                    if !members.is_empty() {
                        s.push_str(&format!("- {}: {}\n", label, members.join(", ")));
                    }
                }
            }
        }
        s
    }
}

/// Working state for one dimension.
struct Engine<'a> {
    g: usize,
    rows: Vec<ElementarySeq>,
    cols: Vec<NewtonPolygon>,
    status: Vec<Vec<Status>>,
    /// Per cell: strongest-claim firing per (rule, status), least detail kept.
    firings: Vec<Vec<BTreeMap<(RuleId, Status), RuleFiring>>>,
    lower: &'a [DimensionMatrix],
    ledger: Vec<(ElementarySeq, NewtonPolygon, Status, String)>,
    lambdas: Vec<Rational>,
}

impl<'a> Engine<'a> {
    fn new(g: usize, lower: &'a [DimensionMatrix], ledger: &FactsLedger) -> Result<Self> {
        let rows = enumerate_elementary(g, None)?;
        let cols = enumerate_symmetric_np(g, None)?;
        let status = vec![vec![Status::Unknown; cols.len()]; rows.len()];
        let firings = vec![vec![BTreeMap::new(); cols.len()]; rows.len()];
        let lambdas = rows.iter().map(first_newton_slope).collect();
        let mut entries = Vec::new();
        for e in ledger.entries.iter().filter(|e| e.g == g) {
            let (phi, np) = e.resolve()?;
            entries.push((phi, np, e.status, e.citation.clone()));
        }
        Ok(Engine { g, rows, cols, status, firings, lower, ledger: entries, lambdas })
    }

    fn row(&self, phi: &ElementarySeq) -> Result<usize> {
        self.rows
            .iter()
            .position(|r| r == phi)
            .ok_or_else(|| Error::Internal(format!("row {} missing in dimension {}", phi, self.g)))
    }

    fn col(&self, xi: &NewtonPolygon) -> Result<usize> {
        self.cols
            .iter()
            .position(|c| c == xi)
            .ok_or_else(|| Error::Internal(format!("column {} missing in dimension {}", xi, self.g)))
    }

    /// Records an assertion; returns whether the status changed.
    fn assert(&mut self, r: usize, c: usize, st: Status, rule: RuleId, detail: String, citation: &str) -> Result<bool> {
        let cur = self.status[r][c];
        let next = cur.join(st).ok_or_else(|| {
            Error::Contradiction(format!(
                "{} claims {} for ({}, {}) which is already {}",
                rule,
                st,
                self.rows[r].paren(),
                self.cols[c],
                cur
            ))
        })?;
        let firing = RuleFiring { rule, status: st, detail, citation: citation.to_string() };
        let slot = self.firings[r][c].entry((rule, st)).or_insert_with(|| firing.clone());
        if firing.detail < slot.detail {
            *slot = firing;
        }
        self.status[r][c] = next;
        Ok(next != cur)
    }

    fn apply(&mut self, rule: RuleId) -> Result<bool> {
        let mut changed = false;
        let g = self.g;
        let (nr, nc) = (self.rows.len(), self.cols.len());
        let cite = rule.citation();
        match rule {
            RuleId::R1 => {
                let h = g.div_ceil(2);
                for r in 0..nr {
                    if self.rows[r].at(h) != 0 {
                        continue;
                    }
                    for c in 0..nc {
                        let (st, detail) = if self.cols[c].is_supersingular() {
                            (Status::Contained, format!("φ({}) = 0", h))
                        } else {
                            (Status::Empty, format!("φ({}) = 0, so S_φ ⊆ S_{}", h, g))
                        };
                        changed |= self.assert(r, c, st, rule, detail, cite)?;
                    }
                }
            }
            RuleId::R2 => {
                for c in 0..nc {
                    let ms = minimal_sequence(&self.cols[c])?;
                    let r = self.row(&ms)?;
                    for c2 in 0..nc {
                        let (st, detail) = if c2 == c {
                            (Status::Contained, format!("{} is minimal for {}", ms.paren(), self.cols[c]))
                        } else {
                            (Status::Empty, format!("contained in N({})", self.cols[c]))
                        };
                        changed |= self.assert(r, c2, st, rule, detail, cite)?;
                    }
                }
            }
            RuleId::R3 => {
                for r in 0..nr {
                    for c in 0..nc {
                        let (fr, fc) = (self.rows[r].p_rank(), self.cols[c].p_rank());
                        if fr != fc {
                            changed |= self.assert(r, c, Status::Empty, rule, format!("p-rank {} vs {}", fr, fc), cite)?;
                        }
                    }
                }
            }
            RuleId::R4 => {
                for r in 0..nr {
                    let lam = self.lambdas[r];
                    for c in 0..nc {
                        let first = self.cols[c].first_slope();
                        if first < lam {
                            let detail = format!("first slope {} < λ_φ = {}", fmt_ratio(&first), fmt_ratio(&lam));
                            changed |= self.assert(r, c, Status::Empty, rule, detail, cite)?;
                        }
                    }
                }
            }
            RuleId::R4b => {
                for r in 0..nr {
                    let lam = self.lambdas[r];
                    if lam == Rational::from_integer(0) {
                        continue;
                    }
                    let hits: Vec<usize> = (0..nc).filter(|&c| self.cols[c].first_slope() == lam).collect();
                    if let [c] = hits[..] {
                        let detail = format!("only NP stratum with first slope λ_φ = {}", fmt_ratio(&lam));
                        changed |= self.assert(r, c, Status::NonEmpty, rule, detail, cite)?;
                    }
                }
            }
            RuleId::R5 => {
                for r in 0..nr {
                    if self.rows[r].a_number() != 1 {
                        continue;
                    }
                    for c in 0..nc {
                        if self.cols[c].p_rank() == self.rows[r].p_rank() {
                            changed |= self.assert(r, c, Status::NonEmptyDense, rule, "a-number 1".into(), cite)?;
                        }
                    }
                }
            }
            RuleId::R6 => {
                let lower = self.lower;
                for g1 in 1..g {
                    let (m1, m2) = (&lower[g1 - 1], &lower[g - g1 - 1]);
                    let left = nonempty_cells(m1);
                    let right = nonempty_cells(m2);
                    for &(r1, c1) in &left {
                        for &(r2, c2) in &right {
                            let phi = es_sum(&m1.rows[r1], &m2.rows[r2])?;
                            let xi = np_sum(&m1.cols[c1], &m2.cols[c2]);
                            let (r, c) = (self.row(&phi)?, self.col(&xi)?);
                            let detail = format!(
                                "{} ⊕ {} with N({}) × N({})",
                                m1.rows[r1].paren(),
                                m2.rows[r2].paren(),
                                m1.cols[c1],
                                m2.cols[c2]
                            );
                            changed |= self.assert(r, c, Status::NonEmpty, rule, detail, cite)?;
                        }
                    }
                }
            }
            RuleId::R7 => {
                let entries = self.ledger.clone();
                for (phi, np, st, citation) in entries {
                    let (r, c) = (self.row(&phi)?, self.col(&np)?);
                    changed |= self.assert(r, c, st, rule, "ledger".into(), &citation)?;
                    if st == Status::Contained {
                        for c2 in (0..nc).filter(|&c2| c2 != c) {
                            let detail = format!("ledger: contained in N({})", np);
                            changed |= self.assert(r, c2, Status::Empty, rule, detail, &citation)?;
                        }
                    }
                }
            }
            RuleId::R8 => {
                for f in 0..=g {
                    let cols: Vec<usize> = (0..nc).filter(|&c| self.cols[c].p_rank() == f).collect();
                    if let [c] = cols[..] {
                        let rows: Vec<usize> = (0..nr).filter(|&r| self.rows[r].p_rank() == f).collect();
                        for r in rows {
                            let detail = format!("N({}) is the only NP stratum of p-rank {}", self.cols[c], f);
                            changed |= self.assert(r, c, Status::NonEmpty, rule, detail, cite)?;
                        }
                    }
                }
            }
        }
        Ok(changed)
    }

    fn finish(self) -> Result<DimensionMatrix> {
        let mut cells = Vec::with_capacity(self.rows.len());
        for r in 0..self.rows.len() {
            let mut row = Vec::with_capacity(self.cols.len());
            for c in 0..self.cols.len() {
                let st = self.status[r][c];
                let provenance: Vec<RuleFiring> =
                    self.firings[r][c].values().filter(|f| f.status == st).cloned().collect();
                row.push(CellStatus { status: st, provenance });
            }
            if row.iter().all(|cell| cell.status == Status::Empty) {
                return Err(Error::Internal(format!(
                    "every cell in the row of {} is empty",
                    self.rows[r].paren()
                )));
            }
            cells.push(row);
        }
        Ok(DimensionMatrix { g: self.g, rows: self.rows, cols: self.cols, cells })
    }
}

fn nonempty_cells(m: &DimensionMatrix) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..m.rows.len() {
        for c in 0..m.cols.len() {
            if m.cells[r][c].status.is_nonempty() {
                out.push((r, c));
            }
        }
    }
    out
}

/// Classifies dimensions `1..=g` and returns all of them.
pub fn classify(g: usize, opts: &ClassifyOptions) -> Result<Classification> {
    if g == 0 {
        return Err(Error::MalformedInput("g must be positive".into()));
    }
    if g > CLASSIFY_MAX_G {
        return Err(Error::LengthCap { g, max: CLASSIFY_MAX_G });
    }
    for e in &opts.ledger.entries {
        e.resolve()?;
    }
    let mut dims: Vec<DimensionMatrix> = Vec::with_capacity(g);
    for d in 1..=g {
        let mut engine = Engine::new(d, &dims, &opts.ledger)?;
        loop {
            let mut changed = false;
            for &rule in &opts.rule_order {
                changed |= engine.apply(rule)?;
            }
            if !changed {
                break;
            }
        }
        let m = engine.finish()?;
        dims.push(m);
    }
    Ok(Classification { dims })
}

#[derive(Debug, Clone, Serialize)]
pub struct Explanation {
    pub phi: String,
    pub np: String,
    pub status: Status,
    pub firings: Vec<RuleFiring>,
}

impl fmt::Display for Explanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "S_({}) ∩ N({}): {}", self.phi, self.np, self.status)?;
        if self.firings.is_empty() {
            writeln!(f, "  no rule decides this cell")?;
        }
        for firing in &self.firings {
            writeln!(f, "  {}", firing)?;
        }
        Ok(())
    }
}

pub fn explain(cls: &Classification, phi: &ElementarySeq, xi: &NewtonPolygon) -> Result<Explanation> {
    let cell = cls.matrix(phi.g()).and_then(|m| m.cell(phi, xi)).map_err(|_| {
        Error::CellNotFound(format!("({}, {})", phi.paren(), xi))
    })?;
    Ok(Explanation {
        phi: phi.to_string(),
        np: xi.to_string(),
        status: cell.status,
        firings: cell.provenance.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn es(s: &str) -> ElementarySeq {
        s.parse().unwrap()
    }

    fn np(s: &str) -> NewtonPolygon {
        s.parse().unwrap()
    }

    #[test]
    fn lattice_join() {
        use Status::*;
        assert_eq!(Unknown.join(NonEmpty), Some(NonEmpty));
        assert_eq!(NonEmpty.join(NonEmptyDense), Some(NonEmptyDense));
        assert_eq!(NonEmptyDense.join(Contained), Some(Contained));
        assert_eq!(Contained.join(NonEmpty), Some(Contained));
        assert_eq!(Unknown.join(Empty), Some(Empty));
        assert_eq!(Empty.join(NonEmpty), None);
        assert_eq!(Contained.join(Empty), None);
    }

    #[test]
    fn g1_and_g2() {
        let cls = classify(2, &ClassifyOptions::default()).unwrap();
        let m1 = cls.matrix(1).unwrap();
        assert_eq!(m1.status(&es("0"), &np("[1,1]")).unwrap(), Status::Contained);
        assert_eq!(m1.status(&es("1"), &np("[1,0]+[0,1]")).unwrap(), Status::Contained);
        assert_eq!(m1.status(&es("1"), &np("[1,1]")).unwrap(), Status::Empty);
        let m2 = cls.matrix(2).unwrap();
        assert_eq!(m2.status(&es("00"), &np("2[1,1]")).unwrap(), Status::Contained);
        assert_eq!(m2.status(&es("01"), &np("2[1,1]")).unwrap(), Status::Contained);
        assert_eq!(m2.count(Status::Unknown), 0);
    }

    #[test]
    fn explain_lists_rules() {
        let cls = classify(5, &ClassifyOptions::default()).unwrap();
        let e = explain(&cls, &es("00000"), &np("5[1,1]")).unwrap();
        let rules: Vec<RuleId> = e.firings.iter().map(|f| f.rule).collect();
        assert_eq!(rules, vec![RuleId::R1, RuleId::R2]);
        let e = explain(&cls, &es("01233"), &np("[3,1]+[1,1]+[1,3]")).unwrap();
        assert_eq!(e.status, Status::Empty);
        assert!(e.firings.iter().any(|f| f.rule == RuleId::R2 && f.detail.contains("[4,1] + [1,4]")));
        assert!(matches!(explain(&cls, &es("0"), &np("5[1,1]")), Err(Error::CellNotFound(_))));
        assert!(matches!(explain(&cls, &es("00000"), &np("[1,1]")), Err(Error::CellNotFound(_))));
    }

    #[test]
    fn bad_ledger_entries() {
        let mut opts = ClassifyOptions::default();
        opts.ledger.entries.push(LedgerEntry {
            g: 5,
            phi: "0,1,2,3,3".into(),
            np: "5[1,1]".into(),
            status: Status::NonEmpty,
            citation: "wrong".into(),
        });
        assert!(matches!(classify(5, &opts), Err(Error::Contradiction(_))));

        let mut opts = ClassifyOptions::default();
        opts.ledger.entries[0].np = "[1,0]+3[1,1]+[0,1]".into();
        assert!(matches!(classify(5, &opts), Err(Error::InvalidLedger(_))));
        assert!(matches!(classify(7, &ClassifyOptions::default()), Err(Error::LengthCap { .. })));
    }

    #[test]
    fn ledger_json_round_trip() {
        let l = FactsLedger::builtin();
        let text = l.to_json();
        assert!(text.contains("\"status\": \"nonempty\""));
        assert_eq!(FactsLedger::from_json(&text).unwrap(), l);
        assert!(matches!(FactsLedger::from_json("{"), Err(Error::InvalidLedger(_))));
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Renderers for the standard tables, the `g = 5` closure diagram and the
//! per-column intersection summaries.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::classifier::{classify, Classification, ClassifyOptions, Status};
use crate::eo_seq::{enumerate_elementary, ElementarySeq};
use crate::error::{Error, Result};
use crate::final_type::{es_decompose, minimal_sequence};
use crate::newton::{enumerate_symmetric_np, NewtonPolygon};
use crate::rational::fmt_ratio;
use crate::slope::first_newton_slope;
use crate::weyl_closure::{closure_poset, ClosureOptions};
use crate::SCHEMA;

/// First slopes of all `p`-rank-0 sequences of length `g`, grouped by slope.
pub fn table1(g: usize) -> Result<String> {
    let mut seqs = enumerate_elementary(g, Some(0))?;
    seqs.sort_by(|a, b| first_newton_slope(a).cmp(&first_newton_slope(b)).then_with(|| b.cmp(a)));
    let mut s = String::from("| φ | λ_φ |\n|---|---|\n");
    let mut i = 0;
    while i < seqs.len() {
        let lam = first_newton_slope(&seqs[i]);
        let group: Vec<String> = seqs[i..]
            .iter()
            .take_while(|x| first_newton_slope(x) == lam)
            .map(|x| x.paren())
            .collect();
        i += group.len();
        s.push_str(&format!("| {} | {} |\n", group.join(", "), fmt_ratio(&lam)));
    }
    Ok(s)
}

/// `(0)^⊕2 ⊕ (0,1)` style rendering of a factor list.
pub fn factor_string(factors: &[ElementarySeq]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < factors.len() {
        let k = factors[i..].iter().take_while(|x| **x == factors[i]).count();
        parts.push(if k > 1 {
            format!("{}^⊕{}", factors[i].paren(), k)
        } else {
            factors[i].paren()
        });
        i += k;
    }
    parts.join(" ⊕ ")
}

/// Decompositions of all elementary sequences of length `1..=max_g`.
pub fn table2(max_g: usize) -> Result<String> {
    let mut s = String::from("| Dimension | Decomposable | Indecomposable | p-rank |\n|---|---|---|---|\n");
    for g in 1..=max_g {
        for f in 0..=g {
            let mut dec = Vec::new();
            let mut ind = Vec::new();
            for phi in enumerate_elementary(g, Some(f))? {
                let d = es_decompose(&phi)?;
                if d.is_indecomposable() {
                    ind.push(phi.paren());
                } else {
                    dec.push(format!("{} = {}", phi.paren(), factor_string(&d.factors)));
                }
            }
            s.push_str(&format!("| {} | {} | {} | {} |\n", g, dec.join(", "), ind.join(", "), f));
        }
    }
    Ok(s)
}

/// Minimal sequences of every non-supersingular symmetric polygon of
/// dimension `g` with p-rank at most `max_prank`.
pub fn table3(g: usize, max_prank: usize) -> Result<String> {
    let mut s = String::from("| ξ → φ_ξ | p-rank |\n|---|---|\n");
    for xi in enumerate_symmetric_np(g, None)? {
        if xi.is_supersingular() || xi.p_rank() > max_prank {
            continue;
        }
        s.push_str(&format!("| {} → {} | {} |\n", xi, minimal_sequence(&xi)?.paren(), xi.p_rank()));
    }
    Ok(s)
}

/// Union presentation of one NP column.
fn union_of(cls: &Classification, xi: &NewtonPolygon) -> Result<String> {
    let m = cls.matrix(xi.dimension())?;
    let mut terms = Vec::new();
    for st in [Status::Contained, Status::NonEmptyDense, Status::NonEmpty, Status::Unknown] {
        for phi in m.column_members(xi, st) {
            terms.push(match st {
                Status::Contained => format!("S_{}", phi.paren()),
                _ => format!("(S_{} ∩ N)", phi.paren()),
            });
        }
    }
    Ok(format!("N({}) = {}", xi, terms.join(" ∪ ")))
}

/// Positive p-rank intersections in dimensions `1..=max_g`.
pub fn table4(cls: &Classification, max_g: usize) -> Result<String> {
    let mut s = String::from("| Dimension | Decomposition | p-rank |\n|---|---|---|\n");
    for g in 1..=max_g {
        for xi in enumerate_symmetric_np(g, None)?.iter().filter(|x| x.p_rank() > 0) {
            s.push_str(&format!("| {} | {} | {} |\n", g, union_of(cls, xi)?, xi.p_rank()));
        }
    }
    Ok(s)
}

pub fn figure1_dot(opts: ClosureOptions) -> Result<String> {
    Ok(closure_poset(5, Some(0), opts)?.to_dot())
}

/// `{ "np": .., "cells": { "φ": status, .. } }` for one column, listing every
/// row of matching p-rank.
pub fn column_json(cls: &Classification, xi: &NewtonPolygon) -> Result<Value> {
    let m = cls.matrix(xi.dimension())?;
    let mut cells = Map::new();
    for phi in m.rows.iter().filter(|r| r.p_rank() == xi.p_rank()) {
        cells.insert(phi.to_string(), json!(m.status(phi, xi)?));
    }
    Ok(json!({ "np": xi.to_string(), "cells": cells }))
}

/// The four intersection summaries: the supersingular locus of dimension 5,
/// the other p-rank 0 strata of dimension 5, p-rank 1 in dimension 4, and
/// p-rank 1 and 2 in dimension 5.
pub fn summary_views(cls: &Classification) -> Result<Vec<(String, Value)>> {
    if cls.g() < 5 {
        return Err(Error::MalformedInput("summary views need a classification up to g = 5".into()));
    }
    let pick = |g: usize, keep: &dyn Fn(&NewtonPolygon) -> bool| -> Result<Vec<Value>> {
        enumerate_symmetric_np(g, None)?.iter().filter(|x| keep(x)).map(|x| column_json(cls, x)).collect()
    };
    let views = [
        ("thm1", "supersingular locus in dimension 5", 5, pick(5, &|x| x.is_supersingular())?),
        ("thm2", "p-rank 0 NP strata of dimension 5 other than S_5", 5, pick(5, &|x| x.p_rank() == 0 && !x.is_supersingular())?),
        ("thm3", "p-rank 1 NP strata of dimension 4", 4, pick(4, &|x| x.p_rank() == 1)?),
        ("thm4", "p-rank 1 and 2 NP strata of dimension 5", 5, pick(5, &|x| x.p_rank() == 1 || x.p_rank() == 2)?),
    ];
    Ok(views
        .into_iter()
        .map(|(name, title, g, cols)| {
            (name.to_string(), json!({ "schema": SCHEMA, "title": title, "g": g, "columns": cols }))
        })
        .collect())
}

/// Writes the fixed golden file set into `outdir` and returns the paths.
pub fn emit_goldens(outdir: &Path) -> Result<Vec<PathBuf>> {
    let io = |p: &Path, e: std::io::Error| Error::Internal(format!("{}: {}", p.display(), e));
    fs::create_dir_all(outdir).map_err(|e| io(outdir, e))?;
    let cls = classify(5, &ClassifyOptions::default())?;
    let mut files: Vec<(String, String)> = vec![
        ("table1.md".into(), table1(5)?),
        ("table2.md".into(), table2(4)?),
        ("table3.md".into(), table3(5, 2)?),
        ("table4.md".into(), table4(&cls, 3)?),
        ("figure1.dot".into(), figure1_dot(ClosureOptions::default())?),
    ];
    for (name, value) in summary_views(&cls)? {
        let mut text = serde_json::to_string_pretty(&value).expect("json serialises");
        text.push('\n');
        files.push((format!("{}.json", name), text));
    }
    let mut out = Vec::new();
    for (name, body) in files {
        let path = outdir.join(name);
        fs::write(&path, body).map_err(|e| io(&path, e))?;
        out.push(path);
    }
    Ok(out)
}

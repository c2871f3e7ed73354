//! Grouping catalog graphs by measure value and scoring how finely a measure
//! separates the canonical classes.
//!
//! The resolution power of a measure over a set of graphs is
//! `RP = 100 · (number of distinct measure values) / (number of graphs)`,
//! where every catalog graph is its own canonical class.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{catalog, CatalogEntry};
use crate::measures::{gcm, gem, GemConfig, MeasureError, MeasureKind};
use crate::state::{StateError, StateVector};

/// Default grouping tolerance.
pub const DEFAULT_GROUP_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("canonical class count is zero")]
    NoClasses,
    #[error("grouping tolerance must be positive")]
    BadTolerance,
    #[error("graph {id}: {source}")]
    Measure { id: usize, source: MeasureError },
    #[error("graph {id}: {source}")]
    State { id: usize, source: StateError },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureClass {
    /// 1-based rank by ascending value.
    pub index: usize,
    /// Mean of the member values.
    pub value: f64,
    pub members: Vec<usize>,
}

/// Single-linkage grouping: after sorting by value, neighbours closer than
/// `tol` share a class.
pub fn group_by_value(values: &[(usize, f64)], tol: f64) -> Result<Vec<MeasureClass>, ClassifyError> {
    if !(tol > 0.0) {
        return Err(ClassifyError::BadTolerance);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));

    let mut groups: Vec<Vec<(usize, f64)>> = Vec::new();
    for (id, v) in sorted {
        match groups.last_mut() {
            Some(g) if v - g.last().expect("groups are nonempty").1 < tol => g.push((id, v)),
            _ => groups.push(vec![(id, v)]),
        }
    }
    Ok(groups
        .into_iter()
        .enumerate()
        .map(|(k, g)| {
            let value = g.iter().map(|&(_, v)| v).sum::<f64>() / g.len() as f64;
            let mut members: Vec<usize> = g.into_iter().map(|(id, _)| id).collect();
            members.sort_unstable();
            MeasureClass {
                index: k + 1,
                value,
                members,
            }
        })
        .collect())
}

/// `100 · eta_measure / eta_kappa`.
pub fn resolution_power(eta_measure: usize, eta_kappa: usize) -> Result<f64, ClassifyError> {
    if eta_kappa == 0 {
        return Err(ClassifyError::NoClasses);
    }
    Ok(100.0 * eta_measure as f64 / eta_kappa as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RpRow {
    /// Vertex count; `None` for the cumulative row.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub eta_measure: usize,
    pub eta_kappa: usize,
    pub rp: f64,
    /// The same ratio as an unreduced fraction, e.g. `"7/45"`.
    pub rp_fraction: String,
}

impl RpRow {
    fn new(n: Option<usize>, eta_measure: usize, eta_kappa: usize) -> Result<Self, ClassifyError> {
        Ok(Self {
            n,
            eta_measure,
            eta_kappa,
            rp: resolution_power(eta_measure, eta_kappa)?,
            rp_fraction: format!("{eta_measure}/{eta_kappa}"),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphValue {
    pub id: usize,
    pub n: usize,
    pub value: f64,
    /// GEM only: restarts that reached the winning fidelity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts_at_best: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub measure: MeasureKind,
    pub tolerance: f64,
    pub classes: Vec<MeasureClass>,
    pub per_n: Vec<RpRow>,
    pub cumulative: RpRow,
    pub values: Vec<GraphValue>,
}

impl ClassificationReport {
    /// Graphs whose GEM optimum was reached by fewer than three restarts.
    pub fn weakly_supported(&self) -> Vec<usize> {
        self.values
            .iter()
            .filter(|v| v.restarts_at_best.is_some_and(|r| r < 3))
            .map(|v| v.id)
            .collect()
    }
}

/// Evaluates one measure on every given catalog graph, in input order.
pub fn evaluate(entries: &[CatalogEntry], kind: MeasureKind, cfg: &GemConfig) -> Result<Vec<GraphValue>, ClassifyError> {
    entries
        .par_iter()
        .map(|e| {
            let s = StateVector::graph_state(&e.graph).map_err(|source| ClassifyError::State { id: e.id, source })?;
            let r = match kind {
                MeasureKind::Gcm => gcm(&s),
                MeasureKind::Gem => gem(&s, cfg),
            }
            .map_err(|source| ClassifyError::Measure { id: e.id, source })?;
            Ok(GraphValue {
                id: e.id,
                n: e.n(),
                value: r.value,
                restarts_at_best: r.diagnostics.map(|d| d.restarts_at_best),
            })
        })
        .collect()
}

/// Groups precomputed values: classes per vertex count, and jointly over all.
pub fn report_from_values(kind: MeasureKind, values: Vec<GraphValue>, tol: f64) -> Result<ClassificationReport, ClassifyError> {
    let pairs: Vec<(usize, f64)> = values.iter().map(|v| (v.id, v.value)).collect();
    let classes = group_by_value(&pairs, tol)?;

    let mut by_n: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
    for v in &values {
        by_n.entry(v.n).or_default().push((v.id, v.value));
    }
    let per_n = by_n
        .iter()
        .map(|(&n, vals)| RpRow::new(Some(n), group_by_value(vals, tol)?.len(), vals.len()))
        .collect::<Result<Vec<_>, _>>()?;
    let cumulative = RpRow::new(None, classes.len(), values.len())?;
    Ok(ClassificationReport {
        measure: kind,
        tolerance: tol,
        classes,
        per_n,
        cumulative,
        values,
    })
}

/// Full pipeline over the built-in catalog.
pub fn build_report(kind: MeasureKind, cfg: &GemConfig, tol: f64) -> Result<ClassificationReport, ClassifyError> {
    let values = evaluate(catalog(), kind, cfg)?;
    report_from_values(kind, values, tol)
}

/// Side-by-side resolution-power table for both measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RpTable {
    pub rows: Vec<RpTableRow>,
    pub cumulative: RpTableRow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RpTableRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub eta_gcm: usize,
    pub eta_gem: usize,
    pub eta_kappa: usize,
    pub rp_gcm: f64,
    pub rp_gem: f64,
    pub rp_gcm_fraction: String,
    pub rp_gem_fraction: String,
}

impl RpTable {
    pub fn from_reports(gcm: &ClassificationReport, gem: &ClassificationReport) -> Self {
        let join = |a: &RpRow, b: &RpRow| RpTableRow {
            n: a.n,
            eta_gcm: a.eta_measure,
            eta_gem: b.eta_measure,
            eta_kappa: a.eta_kappa,
            rp_gcm: a.rp,
            rp_gem: b.rp,
            rp_gcm_fraction: a.rp_fraction.clone(),
            rp_gem_fraction: b.rp_fraction.clone(),
        };
        Self {
            rows: gcm.per_n.iter().zip(&gem.per_n).map(|(a, b)| join(a, b)).collect(),
            cumulative: join(&gcm.cumulative, &gem.cumulative),
        }
    }
}

fn members_label(members: &[usize]) -> String {
    members.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", ")
}

fn n_label(n: Option<usize>) -> String {
    n.map_or_else(|| "Up to 7".to_string(), |n| n.to_string())
}

/// Aligned text: the class table followed by the per-n summary.
pub fn render_report_text(r: &ClassificationReport) -> String {
    let label = r.measure.label();
    let mut out = String::new();
    writeln!(out, "{:<6} {:>9}  Graph No.", "Class", label).unwrap();
    for c in &r.classes {
        writeln!(out, "{:<6} {:>9.5}  {}", c.index, c.value, members_label(&c.members)).unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "{:<8} {:>7} {:>7} {:>9}  fraction", "n", format!("η[{label}]"), "η[κ]", "RP %").unwrap();
    for row in r.per_n.iter().chain([&r.cumulative]) {
        writeln!(
            out,
            "{:<8} {:>7} {:>7} {:>9.2}  {}",
            n_label(row.n),
            row.eta_measure,
            row.eta_kappa,
            row.rp,
            row.rp_fraction
        )
        .unwrap();
    }
    let weak = r.weakly_supported();
    if !weak.is_empty() {
        writeln!(out, "\nwarning: optimum reached by fewer than 3 restarts for graphs {}", members_label(&weak)).unwrap();
    }
    out
}

/// CSV with one row per class: `class,value,members` (members space-separated).
pub fn render_report_csv(r: &ClassificationReport) -> Result<String, ClassifyError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["class", "value", "members"])?;
    for c in &r.classes {
        let members = c.members.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ");
        w.write_record([c.index.to_string(), format!("{:.5}", c.value), members])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?).expect("csv output is UTF-8"))
}

pub fn render_rp_text(t: &RpTable) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<8} {:>7} {:>7} {:>6} {:>9} {:>9}  exact",
        "n", "η[GCM]", "η[GEM]", "η[κ]", "RP[GCM]", "RP[GEM]"
    )
    .unwrap();
    for row in t.rows.iter().chain([&t.cumulative]) {
        writeln!(
            out,
            "{:<8} {:>7} {:>7} {:>6} {:>8.2}% {:>8.2}%  {} / {}",
            n_label(row.n),
            row.eta_gcm,
            row.eta_gem,
            row.eta_kappa,
            row.rp_gcm,
            row.rp_gem,
            row.rp_gcm_fraction,
            row.rp_gem_fraction
        )
        .unwrap();
    }
    out
}

pub fn render_rp_csv(t: &RpTable) -> Result<String, ClassifyError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "eta_gcm", "eta_gem", "eta_kappa", "rp_gcm", "rp_gem", "rp_gcm_fraction", "rp_gem_fraction"])?;
    for row in t.rows.iter().chain([&t.cumulative]) {
        w.write_record([
            n_label(row.n),
            row.eta_gcm.to_string(),
            row.eta_gem.to_string(),
            row.eta_kappa.to_string(),
            format!("{:.2}", row.rp_gcm),
            format!("{:.2}", row.rp_gem),
            row.rp_gcm_fraction.clone(),
            row.rp_gem_fraction.clone(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?).expect("csv output is UTF-8"))
}

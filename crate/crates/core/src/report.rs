//! Structured verification records for CSV/JSON emission.

use crate::domain::{end_exponents, is_complete, EndExponent};
use crate::metric::{
    gauss_curvature, gauss_curvature_numeric_richardson, oracle_admissible, WeierstrassData,
};
use crate::verify::{BoundScanReport, ExceptionalSet, PicardCheck};
use crate::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One node of a curvature comparison scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvatureRow {
    pub re: f64,
    pub im: f64,
    pub k_closed: f64,
    pub k_numeric: Option<f64>,
    pub rel_err: Option<f64>,
    pub admissible: bool,
}

/// Aggregate statistics of a curvature scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvatureSummary {
    pub grid_nodes: usize,
    pub evaluated_nodes: usize,
    pub admissible_nodes: usize,
    pub compared_nodes: usize,
    /// Fraction of admissible comparisons within the 1e−4 tolerance.
    pub agreement_fraction: f64,
    pub max_rel_disagreement: f64,
    pub k_min: f64,
    pub k_max: f64,
    /// A strictly positive closed-form curvature was seen (must never
    /// happen).
    pub positive_curvature_found: bool,
    pub stencil_h: f64,
    pub step: f64,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct CurvatureScanOptions {
    pub extent: f64,
    pub step: f64,
    pub stencil_h: f64,
    /// Admissibility margin in units of the stencil size.
    pub margin: f64,
}

impl Default for CurvatureScanOptions {
    fn default() -> Self {
        CurvatureScanOptions {
            extent: 2.5,
            step: 0.1,
            stencil_h: 1e-3,
            margin: 100.0,
        }
    }
}

/// Per-node closed-form curvature against the finite-difference
/// oracle over a rectangular lattice. The relative disagreement is
/// normalized by `max(1, |K|)`, and only nodes clear of the data's
/// poles and zeros by `margin·h` enter the comparison.
pub fn curvature_scan(
    data: &WeierstrassData,
    opts: &CurvatureScanOptions,
) -> (Vec<CurvatureRow>, CurvatureSummary) {
    let n = (opts.extent / opts.step).round() as i64;
    let mut nodes = Vec::new();
    for j in -n..=n {
        for i in -n..=n {
            let z = Complex64::new(i as f64 * opts.step, j as f64 * opts.step);
            if data.domain().contains(z) {
                nodes.push(z);
            }
        }
    }
    let grid_nodes = nodes.len();

    let rows: Vec<Option<CurvatureRow>> = nodes
        .par_iter()
        .map(|&z| {
            let k_closed = gauss_curvature(data, z).ok()?;
            let admissible = oracle_admissible(data, z, opts.stencil_h, opts.margin);
            let k_numeric = if admissible {
                gauss_curvature_numeric_richardson(data, z, opts.stencil_h).ok()
            } else {
                None
            };
            let rel_err =
                k_numeric.map(|kn| (kn - k_closed).abs() / k_closed.abs().max(1.0));
            Some(CurvatureRow {
                re: z.re,
                im: z.im,
                k_closed,
                k_numeric,
                rel_err,
                admissible,
            })
        })
        .collect();

    let rows: Vec<CurvatureRow> = rows.into_iter().flatten().collect();
    let mut summary = CurvatureSummary {
        grid_nodes,
        evaluated_nodes: rows.len(),
        admissible_nodes: rows.iter().filter(|r| r.admissible).count(),
        compared_nodes: 0,
        agreement_fraction: 1.0,
        max_rel_disagreement: 0.0,
        k_min: f64::INFINITY,
        k_max: f64::NEG_INFINITY,
        positive_curvature_found: false,
        stencil_h: opts.stencil_h,
        step: opts.step,
        errors: Vec::new(),
    };
    let mut agree = 0usize;
    for row in &rows {
        summary.k_min = summary.k_min.min(row.k_closed);
        summary.k_max = summary.k_max.max(row.k_closed);
        if row.k_closed > 0.0 {
            summary.positive_curvature_found = true;
        }
        if let Some(err) = row.rel_err {
            summary.compared_nodes += 1;
            summary.max_rel_disagreement = summary.max_rel_disagreement.max(err);
            if err <= 1e-4 {
                agree += 1;
            }
        }
    }
    if summary.compared_nodes > 0 {
        summary.agreement_fraction = agree as f64 / summary.compared_nodes as f64;
    }
    if rows.is_empty() {
        summary.k_min = 0.0;
        summary.k_max = 0.0;
    }
    (rows, summary)
}

/// Envelope of one verification run: exceptional set, completeness,
/// the Picard consistency verdict, and the bound scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub m: f64,
    pub exceptional: ExceptionalSet,
    pub ends: Vec<EndExponent>,
    pub complete: bool,
    pub witness: Option<String>,
    pub picard: PicardCheck,
    pub bound_scan: BoundScanReport,
    pub errors: Vec<String>,
}

impl VerificationReport {
    pub fn assemble(
        data: &WeierstrassData,
        exceptional: ExceptionalSet,
        picard: PicardCheck,
        bound_scan: BoundScanReport,
    ) -> VerificationReport {
        let verdict = is_complete(data);
        VerificationReport {
            m: data.exponent(),
            exceptional,
            ends: end_exponents(data),
            complete: verdict.complete,
            witness: verdict.witness.map(|w| w.to_string()),
            picard,
            bound_scan,
            errors: Vec::new(),
        }
    }

    /// The truth-table CSV row for this dataset.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}\n",
            self.m,
            self.exceptional.q(),
            self.complete,
            self.picard.exceptional_count,
            self.picard.consistent
        )
    }
}

/// CSV emission of curvature rows. Optional values print as the
/// literal `excluded` so no silent NaN reaches the file.
pub fn curvature_rows_csv(rows: &[CurvatureRow]) -> String {
    let mut out = String::from("re,im,k_closed,k_numeric,rel_err,admissible\n");
    for r in rows {
        let numeric = r
            .k_numeric
            .map(|v| v.to_string())
            .unwrap_or_else(|| "excluded".into());
        let err = r
            .rel_err
            .map(|v| v.to_string())
            .unwrap_or_else(|| "excluded".into());
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.re, r.im, r.k_closed, numeric, err, r.admissible
        ));
    }
    out
}

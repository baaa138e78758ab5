//! Growth exponents of the metric at the ends of the domain and the
//! resulting completeness decision.
//!
//! For rational data on a punctured plane the minimal-growth direction
//! into each end is radial, so the verdicts are exact for this input
//! class: near a puncture `√factor ~ c·|z−α|^e` diverges iff `e ≤ −1`,
//! and at infinity `√factor ~ c·|z|^e` diverges iff `e ≥ −1`.

use super::{DomainKind, EndId};
use crate::metric::WeierstrassData;
use serde::{Deserialize, Serialize};

const ORDER_TOL: f64 = 1e-7;

/// Growth order of `√(conformal factor)` into one end, with the
/// divergence verdict for the improper length integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndExponent {
    pub end: EndId,
    pub exponent: f64,
    pub divergent: bool,
}

/// Exponents at every end of the domain, computed exactly from
/// polynomial degrees and root orders.
pub fn end_exponents(data: &WeierstrassData) -> Vec<EndExponent> {
    let m = data.exponent();
    let domain = data.domain();
    let mut out = Vec::new();
    for (i, &p) in domain.punctures().iter().enumerate() {
        let omega_ord = data.omega().order_at(p, ORDER_TOL) as f64;
        let gauss_ord = data.gauss().order_at(p, ORDER_TOL) as f64;
        // (1+|g|²)^{m/2} grows like |z−α|^{m·ord} only when g has a pole.
        let e = omega_ord + m * gauss_ord.min(0.0);
        out.push(EndExponent {
            end: EndId::Puncture(i),
            exponent: e,
            divergent: e <= -1.0,
        });
    }
    match domain.kind() {
        DomainKind::PuncturedPlane => {
            let omega_growth = data.omega().growth_at_infinity() as f64;
            let gauss_growth = data.gauss().growth_at_infinity() as f64;
            let e = omega_growth + m * gauss_growth.max(0.0);
            out.push(EndExponent {
                end: EndId::Infinity,
                exponent: e,
                divergent: e >= -1.0,
            });
        }
        DomainKind::Disk => {
            // The rim is a finite ideal boundary; rational data without
            // poles on the rim always reaches it in finite length.
            out.push(EndExponent {
                end: EndId::DiskRim,
                exponent: 0.0,
                divergent: false,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompletenessVerdict {
    pub complete: bool,
    /// A convergent end witnessing incompleteness, when there is one.
    pub witness: Option<EndId>,
}

/// The metric is complete exactly when every end is divergent.
pub fn is_complete(data: &WeierstrassData) -> CompletenessVerdict {
    let ends = end_exponents(data);
    match ends.iter().find(|e| !e.divergent) {
        Some(e) => CompletenessVerdict {
            complete: false,
            witness: Some(e.end),
        },
        None => CompletenessVerdict {
            complete: true,
            witness: None,
        },
    }
}

//! Punctured-plane and disk domains with sampling grids, metric path
//! lengths, graph distance to the boundary, and the completeness
//! decision by end-exponent analysis.

mod distance;
mod ends;
mod grid;

pub use distance::{
    boundary_distance, boundary_distances, path_length, path_length_with_order, BoundaryDistance,
    DistanceField, DistanceOptions, TailMode,
};
pub use ends::{end_exponents, is_complete, CompletenessVerdict, EndExponent};
pub use grid::{GridParams, NodeRole, SampleGrid};

use crate::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("punctures must be pairwise distinct")]
    DuplicatePunctures,
    #[error("puncture {re}+{im}i is not finite or lies outside the domain")]
    BadPuncture { re: f64, im: f64 },
    #[error("outer cutoff {got} too small; needs > {need}")]
    CutoffTooSmall { got: f64, need: f64 },
    #[error("disk radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("path leaves the domain")]
    PathExitsDomain,
    #[error("pole of the conformal factor on the integration path")]
    PoleOnPath,
    #[error("grid component of the query node contains no boundary sentinel")]
    DisconnectedGrid,
    #[error("path needs at least two points")]
    DegeneratePath,
}

/// An end of the domain: one of the punctures, the point at infinity
/// (plane case), or the rim circle (disk case).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndId {
    Puncture(usize),
    Infinity,
    DiskRim,
}

impl std::fmt::Display for EndId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EndId::Puncture(i) => write!(f, "puncture {i}"),
            EndId::Infinity => write!(f, "infinity"),
            EndId::DiskRim => write!(f, "rim"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    PuncturedPlane,
    Disk,
}

/// A planar parameter domain: the plane punctured at finitely many
/// points, or a disk (possibly punctured).
///
/// For the plane, `outer_cutoff` is a purely numerical truncation radius
/// used by grids and scans; ideal membership does not depend on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    kind: DomainKind,
    punctures: Vec<Complex64>,
    radius: f64,
    outer_cutoff: f64,
}

impl Domain {
    /// The full complex plane with a default truncation radius.
    pub fn plane() -> Domain {
        Domain {
            kind: DomainKind::PuncturedPlane,
            punctures: Vec::new(),
            radius: 0.0,
            outer_cutoff: 8.0,
        }
    }

    pub fn punctured_plane(
        punctures: Vec<Complex64>,
        outer_cutoff: f64,
    ) -> Result<Domain, DomainError> {
        validate_punctures(&punctures, None)?;
        let max_abs = punctures.iter().map(|p| p.norm()).fold(0.0, f64::max);
        let need = 2.0 * max_abs + 1.0;
        if outer_cutoff <= need {
            return Err(DomainError::CutoffTooSmall {
                got: outer_cutoff,
                need,
            });
        }
        Ok(Domain {
            kind: DomainKind::PuncturedPlane,
            punctures,
            radius: 0.0,
            outer_cutoff,
        })
    }

    /// A punctured plane with the cutoff picked automatically.
    pub fn punctured_plane_auto(punctures: Vec<Complex64>) -> Result<Domain, DomainError> {
        let max_abs = punctures.iter().map(|p| p.norm()).fold(0.0, f64::max);
        let cutoff = (2.0 * max_abs + 1.0).max(6.0) * 1.25;
        Domain::punctured_plane(punctures, cutoff)
    }

    pub fn disk(radius: f64, punctures: Vec<Complex64>) -> Result<Domain, DomainError> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(DomainError::BadRadius(radius));
        }
        validate_punctures(&punctures, Some(radius))?;
        Ok(Domain {
            kind: DomainKind::Disk,
            punctures,
            radius,
            outer_cutoff: 0.0,
        })
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn punctures(&self) -> &[Complex64] {
        &self.punctures
    }

    /// Disk radius, when this is a disk.
    pub fn radius(&self) -> Option<f64> {
        match self.kind {
            DomainKind::Disk => Some(self.radius),
            DomainKind::PuncturedPlane => None,
        }
    }

    /// Numerical truncation radius, when this is a plane.
    pub fn outer_cutoff(&self) -> Option<f64> {
        match self.kind {
            DomainKind::PuncturedPlane => Some(self.outer_cutoff),
            DomainKind::Disk => None,
        }
    }

    /// Ideal membership: finite, off the punctures, inside the disk for
    /// disk domains. The plane cutoff plays no role here.
    pub fn contains(&self, z: Complex64) -> bool {
        if !z.re.is_finite() || !z.im.is_finite() {
            return false;
        }
        if self.punctures.iter().any(|&p| p == z) {
            return false;
        }
        match self.kind {
            DomainKind::PuncturedPlane => true,
            DomainKind::Disk => z.norm() < self.radius,
        }
    }

    /// Minimal pairwise distance between punctures (∞ with fewer than
    /// two).
    pub fn min_puncture_separation(&self) -> f64 {
        let n = self.punctures.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                best = best.min((self.punctures[i] - self.punctures[j]).norm());
            }
        }
        best
    }

    /// Characteristic linear scale of the configuration.
    pub fn scale(&self) -> f64 {
        match self.kind {
            DomainKind::Disk => self.radius,
            DomainKind::PuncturedPlane => self.outer_cutoff,
        }
    }

    pub fn translate(&self, t: Complex64) -> Domain {
        Domain {
            kind: self.kind,
            punctures: self.punctures.iter().map(|p| p + t).collect(),
            radius: self.radius,
            outer_cutoff: self.outer_cutoff,
        }
    }

    /// Same domain with a different truncation radius (plane only).
    pub fn with_outer_cutoff(&self, cutoff: f64) -> Result<Domain, DomainError> {
        Domain::punctured_plane(self.punctures.clone(), cutoff)
    }
}

fn validate_punctures(punctures: &[Complex64], radius: Option<f64>) -> Result<(), DomainError> {
    for (i, p) in punctures.iter().enumerate() {
        if !p.re.is_finite() || !p.im.is_finite() {
            return Err(DomainError::BadPuncture { re: p.re, im: p.im });
        }
        if let Some(r) = radius {
            if p.norm() >= r {
                return Err(DomainError::BadPuncture { re: p.re, im: p.im });
            }
        }
        for q in &punctures[i + 1..] {
            if p == q {
                return Err(DomainError::DuplicatePunctures);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;

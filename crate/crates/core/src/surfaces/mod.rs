//! Builders for the four surface classes generated by holomorphic
//! data: minimal surfaces in Euclidean 3-space, maxfaces in
//! Lorentz–Minkowski 3-space, improper affine fronts in affine 3-space,
//! and flat fronts in hyperbolic 3-space. Each builder integrates its
//! representation formula along a spanning tree of a rectangular
//! parameter grid, checks the side conditions (periods, exactness,
//! unimodularity), samples the relevant metric and curvature, and
//! extracts the singular set where the class has one.

mod affine;
mod export;
mod flat;
mod grid;
mod integrate;
mod marching;
mod maxface;
mod minimal;

pub use affine::build_affine;
pub use export::{read_scalars_csv, write_mesh, ExportFormat, Projection};
pub use flat::build_flat_front;
pub use grid::{BuildGrid, BuildOptions};
pub use marching::{extract_singular_set, marching_squares, Polyline};
pub use maxface::build_maxface;
pub use minimal::build_minimal;

use crate::cplx::{CplxError, RationalMap};
use crate::domain::{Domain, DomainError};
use crate::metric::MetricError;
use crate::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("period condition fails on the loop around {center}: residual {residual:.3e} > {tolerance:.3e}")]
    PeriodViolation {
        center: Complex64,
        residual: f64,
        tolerance: f64,
    },
    #[error("exactness fails on the loop around {center}: residual {residual:.3e} > {tolerance:.3e}")]
    ExactnessViolation {
        center: Complex64,
        residual: f64,
        tolerance: f64,
    },
    #[error("integration path crosses a pole of the data")]
    IntegrationThroughPole,
    #[error("|g| is identically 1: no maxface metric")]
    IdenticallyUnitModulus,
    #[error("kind-specific metric is not positive definite")]
    DegenerateMetric,
    #[error("adaptive ODE step size underflowed")]
    OdeStepFailure,
    #[error("determinant drift {drift:.3e} exceeds 1e-8 during the holomorphic lift")]
    NonUnimodularDrift { drift: f64 },
    #[error("flat fronts need a simply connected parameter region (no punctures)")]
    NotSimplyConnected,
    #[error("parameter grid contains no usable vertices")]
    EmptyGrid,
    #[error("wrong input kind for this builder")]
    WrongKind,
    #[error("mesh export failed: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Cplx(#[from] CplxError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Ambient space of a built mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    /// Euclidean 3-space; fourth coordinate unused.
    R3,
    /// Lorentz–Minkowski 3-space with signature (−,+,+); fourth unused.
    R31,
    /// C² identified with R⁴.
    C2AsR4,
    /// Hyperboloid model in Minkowski 4-space: −x₀²+x₁²+x₂²+x₃² = −1.
    H3Minkowski,
}

/// A sampled immersion or front with per-vertex metric data and the
/// extracted singular polylines.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub ambient: Ambient,
    pub vertices: Vec<[f64; 4]>,
    pub faces: Vec<[usize; 3]>,
    /// Parameter-plane position of each vertex.
    pub params: Vec<Complex64>,
    /// Conformal factor of the class's completeness metric.
    pub conformal_factor: Vec<f64>,
    /// Gaussian curvature of that metric.
    pub curvature: Vec<f64>,
    /// Modulus of the class's gauge function (|g|, |ν| or |ρ|).
    pub gauge_modulus: Vec<f64>,
    pub singular_param: Vec<Polyline>,
    /// Singular polylines mapped onto the mesh.
    pub singular_ambient: Vec<Vec<[f64; 4]>>,
}

impl SurfaceMesh {
    /// Structural invariants: index validity, scalar array lengths, the
    /// hyperboloid constraint for H³ meshes.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.vertices.len();
        if self.params.len() != n
            || self.conformal_factor.len() != n
            || self.curvature.len() != n
            || self.gauge_modulus.len() != n
        {
            return Err("scalar arrays must match vertex count".into());
        }
        for f in &self.faces {
            if f.iter().any(|&i| i >= n) {
                return Err(format!("face index out of range: {f:?}"));
            }
        }
        if self.ambient == Ambient::H3Minkowski {
            for (k, v) in self.vertices.iter().enumerate() {
                let q = -v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3];
                // Evaluating the quadratic form cancels at scale x₀², so
                // the 1e−8 constraint tolerance is measured relative to
                // that scale for large fronts.
                if (q + 1.0).abs() > 1e-8 * (v[0] * v[0]).max(1.0) || v[0] <= 0.0 {
                    return Err(format!("vertex {k} off the hyperboloid: q = {q}"));
                }
            }
        }
        Ok(())
    }
}

/// Which representation a [`FrontData`] document drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrontKind {
    Minimal,
    Maxface,
    Affine,
    FlatFront,
}

/// Kind-specific rational inputs of the four representations.
#[derive(Debug, Clone)]
pub enum FrontInputs {
    /// Weierstrass pair `(g, ω̂)`.
    Minimal { gauss: RationalMap, omega: RationalMap },
    /// Lorentzian pair `(g, ω̂)`.
    Maxface { gauss: RationalMap, omega: RationalMap },
    /// Derivatives `dF`, `dG` of the holomorphic generators.
    Affine { df: RationalMap, dg: RationalMap },
    /// Canonical forms `ω̂`, `θ̂` of the Legendrian lift.
    FlatFront { omega: RationalMap, theta: RationalMap },
}

/// Input data of one surface build.
#[derive(Debug, Clone)]
pub struct FrontData {
    pub inputs: FrontInputs,
    pub base_point: Complex64,
    pub domain: Domain,
}

impl FrontData {
    pub fn kind(&self) -> FrontKind {
        match self.inputs {
            FrontInputs::Minimal { .. } => FrontKind::Minimal,
            FrontInputs::Maxface { .. } => FrontKind::Maxface,
            FrontInputs::Affine { .. } => FrontKind::Affine,
            FrontInputs::FlatFront { .. } => FrontKind::FlatFront,
        }
    }
}

/// Side-condition residuals and diagnostics of one build.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BuildReport {
    pub vertex_count: usize,
    pub face_count: usize,
    /// Largest |Re ∮| over the checked loops, relative to the loop's
    /// metric length.
    pub max_period_residual: f64,
    /// Largest |Σ (component)²| / Σ |component|² over vertices, for the
    /// classes with a nullity identity.
    pub max_nullity_residual: f64,
    /// Largest |det L − 1| along the lift (flat fronts).
    pub max_det_drift: f64,
    /// Largest relative disagreement between the finite-difference
    /// induced metric of the mesh and its closed form, over interior
    /// vertices clear of the singular set.
    pub induced_metric_max_rel_err: f64,
    /// The gauge has unit modulus everywhere: the whole mesh is
    /// singular (flat fronts report it; maxfaces reject it).
    pub totally_degenerate: bool,
    /// Vertices dropped near poles of the data.
    pub excluded_vertices: usize,
    /// Poles inside the region punched holes in the grid (flat fronts
    /// tolerate this but the lift is then tree-dependent).
    pub holes_excluded: bool,
}

/// A finished build: the mesh, an optional companion mesh (the
/// Lagrangian immersion of an affine front), and the residual report.
#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub mesh: SurfaceMesh,
    pub companion: Option<SurfaceMesh>,
    pub report: BuildReport,
}

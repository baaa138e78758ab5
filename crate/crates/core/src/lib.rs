//! Numerical laboratory for conformal metrics of the form
//! `ds² = (1 + |g|²)^m |ω|²` built from rational Weierstrass data on
//! punctured planar domains.
//!
//! The crate provides:
//!
//! - exact-coefficient rational maps on the Riemann sphere with
//!   evaluation, differentiation, preimages and the chordal metric
//!   ([`cplx`]);
//! - the conformal metric, its closed-form Gaussian curvature, a
//!   finite-difference curvature oracle, and the auxiliary flat metric
//!   used in curvature estimates ([`metric`]);
//! - punctured-plane and disk domains with sampling grids, metric path
//!   lengths, graph distance to the boundary, and an exact completeness
//!   decision by end-exponent analysis ([`domain`]);
//! - exceptional-value enumeration, the Picard-bound consistency check,
//!   empirical curvature-bound scans, and the sharp example family
//!   ([`verify`]);
//! - builders for minimal surfaces, maxfaces, improper affine fronts and
//!   flat fronts, with singular-set extraction and mesh export
//!   ([`surfaces`]);
//! - a declarative JSON input document and structured reports
//!   ([`document`], [`report`]).

pub mod cplx;
pub mod document;
pub mod domain;
pub mod metric;
pub mod quad;
pub mod report;
pub mod surfaces;
pub mod verify;

pub use cplx::{chordal, Polynomial, RationalMap, SpherePoint};
pub use domain::{Domain, GridParams, SampleGrid};
pub use metric::{AuxiliaryMetricParams, WeierstrassData};
pub use surfaces::{FrontData, FrontInputs, SurfaceMesh};
pub use verify::{BoundScanReport, ExceptionalSet};

/// Complex double-precision scalar used throughout.
pub type Complex64 = num_complex::Complex<f64>;

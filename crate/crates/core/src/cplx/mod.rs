//! Rational complex maps on the Riemann sphere.
//!
//! Everything here treats `C ∪ {∞}` with exact sphere semantics: the
//! point at infinity is a first-class value decided by degree
//! bookkeeping, never by floating-point overflow.

mod poly;
mod rational;
mod roots;
mod sphere;

pub use poly::Polynomial;
pub use rational::{Mat2c, RationalMap};
pub use roots::{cluster_roots, polynomial_roots};
pub use sphere::SpherePoint;

use thiserror::Error;

/// Errors from sphere-level rational-map operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CplxError {
    /// The operation needs a nonconstant map.
    #[error("map is constant")]
    ConstantMap,
    /// A Möbius transformation was requested with determinant zero.
    #[error("Möbius matrix is singular (determinant = 0)")]
    SingularMatrix,
    /// The denominator is identically zero.
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
}

/// Half the chordal distance between two points of the Riemann sphere.
///
/// For finite `a`, `b` this is `|a − b| / (√(1+|a|²)·√(1+|b|²))`; against
/// the point at infinity it degenerates to `1/√(1+|a|²)`. The value is
/// symmetric, vanishes exactly on coincident points and never exceeds 1.
pub fn chordal(a: SpherePoint, b: SpherePoint) -> f64 {
    use SpherePoint::*;
    match (a, b) {
        (Infinity, Infinity) => 0.0,
        (Finite(a), Infinity) | (Infinity, Finite(a)) => 1.0 / (1.0 + a.norm_sqr()).sqrt(),
        (Finite(a), Finite(b)) => {
            (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
        }
    }
}

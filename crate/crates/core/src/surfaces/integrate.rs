//! Cumulative integration of holomorphic integrands along the spanning
//! tree, and loop integrals around punctures for side-condition checks.

use super::{BuildGrid, SurfaceError};
use crate::quad::{circle_arc_length, circle_integral, segment_integral};
use crate::Complex64;

/// Integrates a vector integrand from the root along every tree edge,
/// returning the cumulative integral per vertex (zero at the root).
pub fn integrate_over_tree<const N: usize>(
    grid: &BuildGrid,
    order: usize,
    integrand: impl Fn(Complex64) -> Option<[Complex64; N]>,
) -> Result<Vec<[Complex64; N]>, SurfaceError> {
    let zero = [Complex64::new(0.0, 0.0); N];
    let mut values = vec![zero; grid.vertices().len()];
    for &(parent, child) in grid.tree() {
        let a = grid.vertices()[parent];
        let b = grid.vertices()[child];
        let mut edge = zero;
        for (k, slot) in edge.iter_mut().enumerate() {
            *slot = segment_integral(a, b, order, |z| integrand(z).map(|v| v[k]))
                .ok_or(SurfaceError::IntegrationThroughPole)?;
        }
        for k in 0..N {
            values[child][k] = values[parent][k] + edge[k];
        }
    }
    Ok(values)
}

/// Loop radius for the puncture with the given index: clear of the
/// other punctures and of any extra singular points.
pub fn loop_radius(punctures: &[Complex64], which: usize, extra: &[Complex64]) -> f64 {
    let center = punctures[which];
    let mut r = 0.5f64;
    for (k, p) in punctures.iter().enumerate() {
        if k != which {
            r = r.min((p - center).norm() / 3.0);
        }
    }
    for p in extra {
        if (p - center).norm() > 1e-12 {
            r = r.min((p - center).norm() / 3.0);
        }
    }
    r
}

/// ∮ of the vector integrand around a circle, by the trapezoid rule
/// (exponentially accurate for integrands analytic near the circle).
pub fn loop_integral<const N: usize>(
    center: Complex64,
    radius: f64,
    samples: usize,
    integrand: impl Fn(Complex64) -> Option<[Complex64; N]>,
) -> Result<[Complex64; N], SurfaceError> {
    let mut out = [Complex64::new(0.0, 0.0); N];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = circle_integral(center, radius, samples, |z| integrand(z).map(|v| v[k]))
            .ok_or(SurfaceError::IntegrationThroughPole)?;
    }
    Ok(out)
}

/// Metric circumference of a loop, for scale-aware period tolerances.
pub fn loop_metric_length(
    center: Complex64,
    radius: f64,
    samples: usize,
    speed: impl Fn(Complex64) -> Option<f64>,
) -> Result<f64, SurfaceError> {
    circle_arc_length(center, radius, samples, speed).ok_or(SurfaceError::IntegrationThroughPole)
}

/// Checks `|Re ∮| ≤ 10⁻⁸ · (loop metric length)` for every component of
/// the integrand around every puncture. Returns the largest relative
/// residual; errors with the offending loop on violation.
pub fn check_periods<const N: usize>(
    punctures: &[Complex64],
    extra_singularities: &[Complex64],
    integrand: impl Fn(Complex64) -> Option<[Complex64; N]>,
    speed: impl Fn(Complex64) -> Option<f64>,
) -> Result<f64, SurfaceError> {
    const SAMPLES: usize = 512;
    let mut worst: f64 = 0.0;
    for (idx, &center) in punctures.iter().enumerate() {
        let radius = loop_radius(punctures, idx, extra_singularities);
        let integral = loop_integral(center, radius, SAMPLES, &integrand)?;
        let scale = loop_metric_length(center, radius, SAMPLES, &speed)?;
        let tolerance = 1e-8 * scale;
        for component in integral {
            let residual = component.re.abs();
            worst = worst.max(residual / scale.max(f64::MIN_POSITIVE));
            if residual > tolerance {
                return Err(SurfaceError::PeriodViolation {
                    center,
                    residual,
                    tolerance,
                });
            }
        }
    }
    Ok(worst)
}

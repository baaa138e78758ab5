//! Minimal surfaces in Euclidean 3-space from Weierstrass data.
//!
//! The coordinate differentials are `φ₁ = (1−g²)ω̂/2`,
//! `φ₂ = (i/2)(1+g²)ω̂`, `φ₃ = g·ω̂` — the unique choice with
//! `ω = φ₁ − i·φ₂`, `g = φ₃/ω` and `φ₁² + φ₂² + φ₃² = 0` — and the
//! immersion is recovered as `xᵏ = 2·Re ∫ φₖ`, so the induced metric is
//! exactly `(1 + |g|²)² |ω|²`.

use super::grid::{BuildGrid, BuildOptions};
use super::integrate::{check_periods, integrate_over_tree};
use super::{Ambient, BuildOutput, BuildReport, FrontData, FrontInputs, SurfaceError, SurfaceMesh};
use crate::cplx::{RationalMap, SpherePoint};
use crate::domain::DomainKind;
use crate::Complex64;

pub(super) fn eval_or_pole(f: &RationalMap, z: Complex64) -> Option<Complex64> {
    match f.eval(SpherePoint::Finite(z)) {
        SpherePoint::Finite(v) => Some(v),
        SpherePoint::Infinity => None,
    }
}

/// Pole positions of both maps plus the domain punctures: the points a
/// build grid must keep away from.
pub(super) fn data_exclusions(fd: &FrontData, maps: &[&RationalMap]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = fd.domain.punctures().to_vec();
    for map in maps {
        out.extend(map.poles().iter().map(|(p, _)| *p));
    }
    out
}

fn weierstrass_forms(gauss: &RationalMap, omega: &RationalMap, z: Complex64) -> Option<[Complex64; 3]> {
    let g = eval_or_pole(gauss, z)?;
    let w = eval_or_pole(omega, z)?;
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    Some([
        (one - g * g) * w * 0.5,
        i * (one + g * g) * w * 0.5,
        g * w,
    ])
}

pub fn build_minimal(fd: &FrontData, options: &BuildOptions) -> Result<BuildOutput, SurfaceError> {
    let FrontInputs::Minimal { gauss, omega } = &fd.inputs else {
        return Err(SurfaceError::WrongKind);
    };
    // The induced metric is (1 + |g|²)²|ω|²: positivity is exactly the
    // m = 2 conformal-metric invariant.
    crate::metric::WeierstrassData::new(gauss.clone(), omega.clone(), 2, fd.domain.clone())?;

    let exclusions = data_exclusions(fd, &[gauss, omega]);
    let grid = BuildGrid::build(&fd.domain, options, &exclusions, fd.base_point)
        .ok_or(SurfaceError::EmptyGrid)?;

    let forms = |z: Complex64| weierstrass_forms(gauss, omega, z);
    let speed = |z: Complex64| {
        let g = eval_or_pole(gauss, z)?;
        let w = eval_or_pole(omega, z)?;
        Some((1.0 + g.norm_sqr()) * w.norm())
    };

    // Real parts of every loop integral must vanish for the immersion
    // to be single-valued on a punctured domain.
    let max_period_residual = if fd.domain.kind() == DomainKind::PuncturedPlane {
        check_periods(fd.domain.punctures(), &exclusions, forms, speed)?
    } else {
        0.0
    };

    let cumulative = integrate_over_tree(&grid, options.quad_order, forms)?;
    let gauss_derivative = gauss.derivative();

    let n = grid.vertices().len();
    let mut vertices = Vec::with_capacity(n);
    let mut conformal_factor = Vec::with_capacity(n);
    let mut curvature = Vec::with_capacity(n);
    let mut gauge_modulus = Vec::with_capacity(n);
    let mut max_nullity = 0.0f64;
    for (k, &z) in grid.vertices().iter().enumerate() {
        let x = cumulative[k];
        // dx = 2·Re(∂x dz)
        vertices.push([2.0 * x[0].re, 2.0 * x[1].re, 2.0 * x[2].re, 0.0]);
        let g = eval_or_pole(gauss, z).ok_or(SurfaceError::IntegrationThroughPole)?;
        let w = eval_or_pole(omega, z).ok_or(SurfaceError::IntegrationThroughPole)?;
        let dg = eval_or_pole(&gauss_derivative, z);
        let one_plus = 1.0 + g.norm_sqr();
        conformal_factor.push(one_plus * one_plus * w.norm_sqr());
        let k_val = match dg {
            Some(dg) if w.norm_sqr() > 0.0 => {
                -4.0 * dg.norm_sqr() / (one_plus.powi(4) * w.norm_sqr())
            }
            _ => 0.0,
        };
        curvature.push(k_val);
        gauge_modulus.push(g.norm());
        if let Some(phi) = forms(z) {
            let null_sum = (phi[0] * phi[0] + phi[1] * phi[1] + phi[2] * phi[2]).norm();
            let scale: f64 = phi.iter().map(|p| p.norm_sqr()).sum();
            if scale > 0.0 {
                max_nullity = max_nullity.max(null_sum / scale);
            }
        }
    }

    let mesh = SurfaceMesh {
        ambient: Ambient::R3,
        vertices,
        faces: grid.faces().to_vec(),
        params: grid.vertices().to_vec(),
        conformal_factor,
        curvature,
        gauge_modulus,
        singular_param: Vec::new(),
        singular_ambient: Vec::new(),
    };

    let induced_metric_max_rel_err =
        sampled_euclidean_metric_error(&grid, &mesh.vertices, &mesh.conformal_factor);

    let report = BuildReport {
        vertex_count: mesh.vertices.len(),
        face_count: mesh.faces.len(),
        max_period_residual,
        max_nullity_residual: max_nullity,
        induced_metric_max_rel_err,
        excluded_vertices: grid.excluded(),
        ..Default::default()
    };
    debug_assert!(report.max_nullity_residual <= 1e-10);
    Ok(BuildOutput {
        mesh,
        companion: None,
        report,
    })
}

/// Largest relative gap between the finite-difference induced metric
/// `(|X_u|² + |X_v|²)/2` of the mesh and the recorded conformal factor,
/// over interior vertices.
pub(super) fn sampled_euclidean_metric_error(
    grid: &BuildGrid,
    positions: &[[f64; 4]],
    factor: &[f64],
) -> f64 {
    let mut worst = 0.0f64;
    for v in 0..positions.len() {
        let Some((du, dv)) = grid.central_derivatives(positions, v) else {
            continue;
        };
        let e = 0.5
            * (du.iter().map(|d| d * d).sum::<f64>() + dv.iter().map(|d| d * d).sum::<f64>());
        if factor[v] > 0.0 {
            worst = worst.max((e - factor[v]).abs() / factor[v]);
        }
    }
    worst
}

//! Maxfaces in Lorentz–Minkowski 3-space:
//! `f = Re ∫ (−2g, 1+g², i(1−g²)) ω`, with the completeness metric
//! `dσ² = (1+|g|²)²|ω|²`, the induced metric `(1−|g|²)²|ω|²`, and the
//! singular set exactly where `|g| = 1`.

use super::grid::{BuildGrid, BuildOptions};
use super::integrate::{check_periods, integrate_over_tree};
use super::minimal::{data_exclusions, eval_or_pole};
use super::{Ambient, BuildOutput, BuildReport, FrontData, FrontInputs, SurfaceError, SurfaceMesh};
use crate::cplx::RationalMap;
use crate::domain::DomainKind;
use crate::surfaces::marching::marching_squares;
use crate::Complex64;

fn lorentz_forms(gauss: &RationalMap, omega: &RationalMap, z: Complex64) -> Option<[Complex64; 3]> {
    let g = eval_or_pole(gauss, z)?;
    let w = eval_or_pole(omega, z)?;
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    Some([-2.0 * g * w, (one + g * g) * w, i * (one - g * g) * w])
}

pub fn build_maxface(fd: &FrontData, options: &BuildOptions) -> Result<BuildOutput, SurfaceError> {
    let FrontInputs::Maxface { gauss, omega } = &fd.inputs else {
        return Err(SurfaceError::WrongKind);
    };
    // |g| identically 1 happens for rational maps only when g is a
    // unimodular constant.
    if gauss.is_constant() {
        if let Some(c) = gauss.eval_finite(Complex64::new(0.0, 0.0)) {
            if (c.norm() - 1.0).abs() <= 1e-12 {
                return Err(SurfaceError::IdenticallyUnitModulus);
            }
        }
    }

    // dσ² = (1 + |g|²)²|ω|² must be a Riemannian metric: the m = 2
    // conformal-metric invariant.
    crate::metric::WeierstrassData::new(gauss.clone(), omega.clone(), 2, fd.domain.clone())?;

    let exclusions = data_exclusions(fd, &[gauss, omega]);
    let grid = BuildGrid::build(&fd.domain, options, &exclusions, fd.base_point)
        .ok_or(SurfaceError::EmptyGrid)?;

    let forms = |z: Complex64| lorentz_forms(gauss, omega, z);
    let speed = |z: Complex64| {
        let g = eval_or_pole(gauss, z)?;
        let w = eval_or_pole(omega, z)?;
        Some((1.0 + g.norm_sqr()) * w.norm())
    };
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
        vertices.push([x[0].re, x[1].re, x[2].re, 0.0]);
        let g = eval_or_pole(gauss, z).ok_or(SurfaceError::IntegrationThroughPole)?;
        let w = eval_or_pole(omega, z).ok_or(SurfaceError::IntegrationThroughPole)?;
        let one_plus = 1.0 + g.norm_sqr();
        conformal_factor.push(one_plus * one_plus * w.norm_sqr());
        let k_val = match eval_or_pole(&gauss_derivative, z) {
            Some(dg) if w.norm_sqr() > 0.0 => {
                -4.0 * dg.norm_sqr() / (one_plus.powi(4) * w.norm_sqr())
            }
            _ => 0.0,
        };
        curvature.push(k_val);
        gauge_modulus.push(g.norm());

        // The holomorphic null lift has derivative
        // (−2ig, 1+g², i(1−g²))·ω̂, whose square-sum vanishes
        // identically; the residual is pure rounding.
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let lift = [
            -2.0 * i * g * w,
            (one + g * g) * w,
            i * (one - g * g) * w,
        ];
        let null_sum = (lift[0] * lift[0] + lift[1] * lift[1] + lift[2] * lift[2]).norm();
        let scale: f64 = lift.iter().map(|p| p.norm_sqr()).sum();
        if scale > 0.0 {
            max_nullity = max_nullity.max(null_sum / scale);
        }
    }

    // Singular set |g| = 1 as the zero level of |g_num|² − |g_den|²,
    // a polynomial field free of pole artifacts.
    let field: Vec<f64> = {
        let mut vals = Vec::with_capacity(grid.xs().len() * grid.ys().len());
        for &y in grid.ys() {
            for &x in grid.xs() {
                let z = Complex64::new(x, y);
                vals.push(gauss.num().eval(z).norm_sqr() - gauss.den().eval(z).norm_sqr());
            }
        }
        vals
    };
    let singular_param = marching_squares(grid.xs(), grid.ys(), &field, 0.0);
    let singular_ambient = singular_param
        .iter()
        .map(|line| {
            line.points
                .iter()
                .filter_map(|&p| grid.interpolate(&vertices, p))
                .collect()
        })
        .collect();

    let mesh = SurfaceMesh {
        ambient: Ambient::R31,
        vertices,
        faces: grid.faces().to_vec(),
        params: grid.vertices().to_vec(),
        conformal_factor,
        curvature,
        gauge_modulus,
        singular_param,
        singular_ambient,
    };

    let induced_metric_max_rel_err = sampled_lorentz_metric_error(&grid, &mesh, gauss, omega);

    let report = BuildReport {
        vertex_count: mesh.vertices.len(),
        face_count: mesh.faces.len(),
        max_period_residual,
        max_nullity_residual: max_nullity,
        induced_metric_max_rel_err,
        excluded_vertices: grid.excluded(),
        ..Default::default()
    };
    Ok(BuildOutput {
        mesh,
        companion: None,
        report,
    })
}

/// Finite-difference Lorentzian induced metric against the closed form
/// `(1−|g|²)²|ω̂|²`, at interior vertices clear of the singular set.
fn sampled_lorentz_metric_error(
    grid: &BuildGrid,
    mesh: &SurfaceMesh,
    gauss: &RationalMap,
    omega: &RationalMap,
) -> f64 {
    let mut worst = 0.0f64;
    for v in 0..mesh.vertices.len() {
        let z = mesh.params[v];
        let (Some(g), Some(w)) = (eval_or_pole(gauss, z), eval_or_pole(omega, z)) else {
            continue;
        };
        // Near |g| = 1 the induced metric degenerates; finite
        // differences are meaningless across the singular curve.
        if (g.norm() - 1.0).abs() < 0.2 {
            continue;
        }
        let Some((du, dv)) = grid.central_derivatives(&mesh.vertices, v) else {
            continue;
        };
        let minkowski =
            |a: &[f64; 4], b: &[f64; 4]| -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let e = 0.5 * (minkowski(&du, &du) + minkowski(&dv, &dv));
        let expected = (1.0 - g.norm_sqr()).powi(2) * w.norm_sqr();
        if expected > 1e-12 {
            worst = worst.max((e - expected).abs() / expected);
        }
    }
    worst
}
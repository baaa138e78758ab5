//! Improper affine fronts from a pair of holomorphic functions
//! `(F, G)`, supplied through their rational derivatives:
//! `ψ = (G + F̄, (|G|²−|F|²)/2 + Re(GF − 2∫F dG))` in `R³ = C × R`,
//! together with the special Lagrangian lift `x + i·n : Σ → C²` with
//! `x = G + F̄`, `n = F̄ − G`. The lift's induced metric is
//! `dτ² = 2(|dF|² + |dG|²) = 2(1 + |ν|²)|dG|²` for the gauge
//! `ν = dF/dG`, and the singular set is `|ν| = 1`.

use super::grid::{BuildGrid, BuildOptions};
use super::integrate::{loop_integral, loop_metric_length, loop_radius, integrate_over_tree};
use super::minimal::{data_exclusions, eval_or_pole, sampled_euclidean_metric_error};
use super::{Ambient, BuildOutput, BuildReport, FrontData, FrontInputs, SurfaceError, SurfaceMesh};
use crate::cplx::RationalMap;
use crate::domain::DomainKind;
use crate::quad::gauss_legendre;
use crate::surfaces::marching::marching_squares;
use crate::Complex64;

pub fn build_affine(fd: &FrontData, options: &BuildOptions) -> Result<BuildOutput, SurfaceError> {
    let FrontInputs::Affine { df, dg } = &fd.inputs else {
        return Err(SurfaceError::WrongKind);
    };
    // Positive definiteness of |dF|² + |dG|²: a common zero of both
    // derivatives degenerates the metric.
    for (z, _) in df.zeros() {
        if fd.domain.contains(z) {
            if let Some(gv) = eval_or_pole(dg, z) {
                if gv.norm() <= 1e-9 {
                    return Err(SurfaceError::DegenerateMetric);
                }
            }
        }
    }
    if df.num().is_zero() && dg.num().is_zero() {
        return Err(SurfaceError::DegenerateMetric);
    }

    let exclusions = data_exclusions(fd, &[df, dg]);
    let grid = BuildGrid::build(&fd.domain, options, &exclusions, fd.base_point)
        .ok_or(SurfaceError::EmptyGrid)?;

    let pair = |z: Complex64| -> Option<[Complex64; 2]> {
        Some([eval_or_pole(df, z)?, eval_or_pole(dg, z)?])
    };
    let speed = |z: Complex64| {
        let [a, b] = pair(z)?;
        Some((2.0 * (a.norm_sqr() + b.norm_sqr())).sqrt())
    };

    // Side conditions on a punctured domain: F and G single-valued
    // (full loop integrals of their derivatives vanish) and Re(F dG)
    // exact.
    let mut max_period_residual = 0.0f64;
    if fd.domain.kind() == DomainKind::PuncturedPlane {
        const SAMPLES: usize = 512;
        for (idx, &center) in fd.domain.punctures().iter().enumerate() {
            let radius = loop_radius(fd.domain.punctures(), idx, &exclusions);
            let scale = loop_metric_length(center, radius, SAMPLES, &speed)?;
            let tolerance = 1e-8 * scale;
            let derivative_loops = loop_integral(center, radius, SAMPLES, &pair)?;
            for component in derivative_loops {
                let residual = component.norm();
                max_period_residual = max_period_residual.max(residual / scale);
                if residual > tolerance {
                    return Err(SurfaceError::ExactnessViolation {
                        center,
                        residual,
                        tolerance,
                    });
                }
            }
            // ∮ F dG with F accumulated along the loop itself.
            let residual = f_dg_loop(df, dg, center, radius, SAMPLES)
                .ok_or(SurfaceError::IntegrationThroughPole)?
                .re
                .abs();
            max_period_residual = max_period_residual.max(residual / scale);
            if residual > tolerance {
                return Err(SurfaceError::ExactnessViolation {
                    center,
                    residual,
                    tolerance,
                });
            }
        }
    }

    // F and G from the root (both vanish at the base vertex), then the
    // cumulative ∫F dG along the same tree.
    let fg = integrate_over_tree(&grid, options.quad_order, pair)?;
    let int_fdg = integrate_fdg(&grid, options.quad_order, df, dg, &fg)?;

    let dgauge = {
        // ν′ numerator via the Wronskian dF″·dG − dF·dG″ of the
        // derivative pair; used for the curvature closed form.
        let dfp = df.derivative();
        let dgp = dg.derivative();
        move |z: Complex64| -> Option<(Complex64, Complex64, Complex64, Complex64)> {
            Some((
                eval_or_pole(df, z)?,
                eval_or_pole(dg, z)?,
                eval_or_pole(&dfp, z)?,
                eval_or_pole(&dgp, z)?,
            ))
        }
    };

    let n = grid.vertices().len();
    let mut surface_vertices = Vec::with_capacity(n);
    let mut lagrangian_vertices = Vec::with_capacity(n);
    let mut conformal_factor = Vec::with_capacity(n);
    let mut curvature = Vec::with_capacity(n);
    let mut gauge_modulus = Vec::with_capacity(n);
    for (k, &z) in grid.vertices().iter().enumerate() {
        let [f_val, g_val] = fg[k];
        let x = g_val + f_val.conj();
        let nvec = f_val.conj() - g_val;
        let height = 0.5 * (g_val.norm_sqr() - f_val.norm_sqr())
            + (g_val * f_val - 2.0 * int_fdg[k]).re;
        surface_vertices.push([x.re, x.im, height, 0.0]);
        lagrangian_vertices.push([x.re, x.im, nvec.re, nvec.im]);

        let (a, b, ap, bp) = dgauge(z).ok_or(SurfaceError::IntegrationThroughPole)?;
        let denom = a.norm_sqr() + b.norm_sqr();
        conformal_factor.push(2.0 * denom);
        let wronskian = ap * b - a * bp;
        curvature.push(if denom > 0.0 {
            -wronskian.norm_sqr() / denom.powi(3)
        } else {
            0.0
        });
        gauge_modulus.push(if b.norm() == 0.0 {
            f64::INFINITY
        } else {
            a.norm() / b.norm()
        });
    }

    // Singular set |ν| = 1, i.e. |dF|² − |dG|² = 0 (pole-free field:
    // cross-multiplied through the denominators).
    let field: Vec<f64> = {
        let mut vals = Vec::with_capacity(grid.xs().len() * grid.ys().len());
        for &y in grid.ys() {
            for &x in grid.xs() {
                let z = Complex64::new(x, y);
                let lhs = df.num().eval(z).norm_sqr() * dg.den().eval(z).norm_sqr();
                let rhs = dg.num().eval(z).norm_sqr() * df.den().eval(z).norm_sqr();
                vals.push(lhs - rhs);
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
                .filter_map(|&p| grid.interpolate(&surface_vertices, p))
                .collect()
        })
        .collect();

    let lagrangian = SurfaceMesh {
        ambient: Ambient::C2AsR4,
        vertices: lagrangian_vertices,
        faces: grid.faces().to_vec(),
        params: grid.vertices().to_vec(),
        conformal_factor: conformal_factor.clone(),
        curvature: curvature.clone(),
        gauge_modulus: gauge_modulus.clone(),
        singular_param: singular_param.clone(),
        singular_ambient: Vec::new(),
    };
    let induced_metric_max_rel_err = sampled_euclidean_metric_error(
        &grid,
        &lagrangian.vertices,
        &lagrangian.conformal_factor,
    );

    let mesh = SurfaceMesh {
        ambient: Ambient::R3,
        vertices: surface_vertices,
        faces: grid.faces().to_vec(),
        params: grid.vertices().to_vec(),
        conformal_factor,
        curvature,
        gauge_modulus,
        singular_param,
        singular_ambient,
    };

    let report = BuildReport {
        vertex_count: mesh.vertices.len(),
        face_count: mesh.faces.len(),
        max_period_residual,
        induced_metric_max_rel_err,
        excluded_vertices: grid.excluded(),
        ..Default::default()
    };
    Ok(BuildOutput {
        mesh,
        companion: Some(lagrangian),
        report,
    })
}

/// Cumulative ∫ F dG along the spanning tree. `F` on each edge is
/// reconstructed from the parent value by a nested quadrature, so the
/// whole computation shares one integration framework and tolerance.
fn integrate_fdg(
    grid: &BuildGrid,
    order: usize,
    df: &RationalMap,
    dg: &RationalMap,
    fg: &[[Complex64; 2]],
) -> Result<Vec<Complex64>, SurfaceError> {
    let zero = Complex64::new(0.0, 0.0);
    let mut values = vec![zero; grid.vertices().len()];
    let (nodes, weights) = gauss_legendre(order);
    for &(parent, child) in grid.tree() {
        let a = grid.vertices()[parent];
        let b = grid.vertices()[child];
        let span = b - a;
        let f_at = |t: f64| -> Option<Complex64> {
            // F(a + t·span) = F(a) + span·∫₀ᵗ F′(a + s·span) ds
            let mut acc = zero;
            for (x, w) in nodes.iter().zip(&weights) {
                let s = 0.5 * t * (x + 1.0);
                acc += eval_or_pole(df, a + span * s)? * *w;
            }
            Some(fg[parent][0] + span * acc * (0.5 * t))
        };
        let mut edge = zero;
        for (x, w) in nodes.iter().zip(&weights) {
            let t = 0.5 * (x + 1.0);
            let z = a + span * t;
            let f_val = f_at(t).ok_or(SurfaceError::IntegrationThroughPole)?;
            let dg_val = eval_or_pole(dg, z).ok_or(SurfaceError::IntegrationThroughPole)?;
            edge += f_val * dg_val * *w;
        }
        values[child] = values[parent] + edge * span * 0.5;
    }
    Ok(values)
}

/// ∮ F dG around a circle, with `F` accumulated along the loop by
/// per-arc quadrature from the loop's starting point. The closed-loop
/// sum is independent of the unknown constant `F(start)` exactly when
/// ∮ dG = 0, which is checked separately.
fn f_dg_loop(
    df: &RationalMap,
    dg: &RationalMap,
    center: Complex64,
    radius: f64,
    samples: usize,
) -> Option<Complex64> {
    let point = |k: usize| {
        center
            + Complex64::from_polar(
                radius,
                2.0 * std::f64::consts::PI * k as f64 / samples as f64,
            )
    };
    // F relative to the start, on each sample point.
    let mut f_rel = vec![Complex64::new(0.0, 0.0); samples + 1];
    for k in 0..samples {
        let seg = crate::quad::segment_integral(point(k), point(k + 1), 8, |z| {
            eval_or_pole(df, z)
        })?;
        f_rel[k + 1] = f_rel[k] + seg;
    }
    // ∮ F dG by per-arc quadrature with linear F interpolation error
    // controlled by the arc quadrature itself.
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..samples {
        let (a, b) = (point(k), point(k + 1));
        let base = f_rel[k];
        let seg = crate::quad::segment_integral(a, b, 8, |z| {
            // F along the arc: base + ∫ from a to z.
            let inner = crate::quad::segment_integral(a, z, 8, |w| eval_or_pole(df, w))?;
            Some((base + inner) * eval_or_pole(dg, z)?)
        })?;
        total += seg;
    }
    Some(total)
}

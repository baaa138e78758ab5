//! Flat fronts in hyperbolic 3-space: the holomorphic Legendrian lift
//! solves `dL = L·[[0, θ̂], [ω̂, 0]] dz` from the identity at the base
//! point, and the front is `f = LL*` on the hyperboloid
//! `−x₀² + x₁² + x₂² + x₃² = −1`. The coefficient matrix is trace
//! free, so `det L ≡ 1` exactly; numerical drift of the determinant is
//! a diagnostic of integrator quality and is never renormalized away.

use super::grid::{BuildGrid, BuildOptions};
use super::minimal::{data_exclusions, eval_or_pole};
use super::{Ambient, BuildOutput, BuildReport, FrontData, FrontInputs, SurfaceError, SurfaceMesh};
use crate::domain::DomainKind;
use crate::surfaces::marching::marching_squares;
use crate::Complex64;

/// Column-major-free tiny 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(super) struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2 {
    fn identity() -> Mat2 {
        Mat2 {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    fn add(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            c: self.c + rhs.c,
            d: self.d + rhs.d,
        }
    }

    fn scale(&self, s: Complex64) -> Mat2 {
        Mat2 {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
            d: self.d * s,
        }
    }

    fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    fn sub_norm(&self, rhs: &Mat2) -> f64 {
        ((self.a - rhs.a).norm_sqr()
            + (self.b - rhs.b).norm_sqr()
            + (self.c - rhs.c).norm_sqr()
            + (self.d - rhs.d).norm_sqr())
        .sqrt()
    }
}

/// One classical Runge–Kutta step of `dL/dt = L·A(z(t))·ż` along the
/// straight segment `a + t·span`.
fn rk4_step(
    l: &Mat2,
    a: Complex64,
    span: Complex64,
    t: f64,
    h: f64,
    coeff: &impl Fn(Complex64) -> Option<Mat2>,
) -> Option<Mat2> {
    let rhs = |t: f64, l: &Mat2| -> Option<Mat2> {
        let z = a + span * t;
        Some(l.mul(&coeff(z)?).scale(span))
    };
    let k1 = rhs(t, l)?;
    let k2 = rhs(t + 0.5 * h, &l.add(&k1.scale(Complex64::new(0.5 * h, 0.0))))?;
    let k3 = rhs(t + 0.5 * h, &l.add(&k2.scale(Complex64::new(0.5 * h, 0.0))))?;
    let k4 = rhs(t + h, &l.add(&k3.scale(Complex64::new(h, 0.0))))?;
    let increment = k1
        .add(&k2.scale(Complex64::new(2.0, 0.0)))
        .add(&k3.scale(Complex64::new(2.0, 0.0)))
        .add(&k4)
        .scale(Complex64::new(h / 6.0, 0.0));
    Some(l.add(&increment))
}

/// Integrates the lift along one tree edge with step-doubling error
/// control targeting `tol` local error, without determinant
/// renormalization.
fn advance_edge(
    mut l: Mat2,
    a: Complex64,
    b: Complex64,
    coeff: &impl Fn(Complex64) -> Option<Mat2>,
    tol: f64,
) -> Result<Mat2, SurfaceError> {
    let span = b - a;
    let mut t = 0.0f64;
    let mut h = 0.5f64;
    while t < 1.0 {
        h = h.min(1.0 - t);
        if h < 1e-13 {
            return Err(SurfaceError::OdeStepFailure);
        }
        let full = rk4_step(&l, a, span, t, h, coeff).ok_or(SurfaceError::OdeStepFailure)?;
        let half = rk4_step(&l, a, span, t, 0.5 * h, coeff)
            .and_then(|mid| rk4_step(&mid, a, span, t + 0.5 * h, 0.5 * h, coeff))
            .ok_or(SurfaceError::OdeStepFailure)?;
        let err = full.sub_norm(&half) / 15.0;
        let scale = tol * (1.0 + l.norm());
        if err <= scale {
            // Local extrapolation: the combination cancels the leading
            // error term of the half-step result.
            let fifth = half.add(&half.add(&full.scale(Complex64::new(-1.0, 0.0))).scale(
                Complex64::new(1.0 / 15.0, 0.0),
            ));
            l = fifth;
            t += h;
            h *= (scale / err.max(1e-300)).powf(0.2).min(2.0) * 0.9;
        } else {
            h *= (scale / err).powf(0.25).max(0.1) * 0.9;
        }
    }
    Ok(l)
}

pub fn build_flat_front(
    fd: &FrontData,
    options: &BuildOptions,
) -> Result<BuildOutput, SurfaceError> {
    let FrontInputs::FlatFront { omega, theta } = &fd.inputs else {
        return Err(SurfaceError::WrongKind);
    };
    if fd.domain.kind() == DomainKind::PuncturedPlane && !fd.domain.punctures().is_empty() {
        return Err(SurfaceError::NotSimplyConnected);
    }
    // ds²_L = |ω|² + |θ|² must be positive definite.
    for (z, _) in omega.zeros() {
        if fd.domain.contains(z) {
            if let Some(tv) = eval_or_pole(theta, z) {
                if tv.norm() <= 1e-9 {
                    return Err(SurfaceError::DegenerateMetric);
                }
            }
        }
    }
    if omega.num().is_zero() && theta.num().is_zero() {
        return Err(SurfaceError::DegenerateMetric);
    }

    let exclusions = data_exclusions(fd, &[omega, theta]);
    let grid = BuildGrid::build(&fd.domain, options, &exclusions, fd.base_point)
        .ok_or(SurfaceError::EmptyGrid)?;
    let holes_excluded = grid.excluded() > 0;

    let coeff = |z: Complex64| -> Option<Mat2> {
        Some(Mat2 {
            a: Complex64::new(0.0, 0.0),
            b: eval_or_pole(theta, z)?,
            c: eval_or_pole(omega, z)?,
            d: Complex64::new(0.0, 0.0),
        })
    };

    // The lift along the spanning tree, with the determinant monitored
    // at every vertex.
    let n = grid.vertices().len();
    let mut lifts = vec![Mat2::identity(); n];
    let mut max_det_drift = 0.0f64;
    for &(parent, child) in grid.tree() {
        let l = advance_edge(
            lifts[parent],
            grid.vertices()[parent],
            grid.vertices()[child],
            &coeff,
            1e-12,
        )?;
        let drift = (l.det() - Complex64::new(1.0, 0.0)).norm();
        max_det_drift = max_det_drift.max(drift);
        if drift > 1e-8 {
            return Err(SurfaceError::NonUnimodularDrift { drift });
        }
        lifts[child] = l;
    }

    let omega_derivative = omega.derivative();
    let theta_derivative = theta.derivative();

    let mut vertices = Vec::with_capacity(n);
    let mut conformal_factor = Vec::with_capacity(n);
    let mut curvature = Vec::with_capacity(n);
    let mut gauge_modulus = Vec::with_capacity(n);
    let mut unit_gauge_everywhere = true;
    for (k, &z) in grid.vertices().iter().enumerate() {
        let l = &lifts[k];
        // f = LL* is Hermitian positive definite with det 1; in the
        // Pauli-style coordinates x₀ = (f₁₁+f₂₂)/2, x₃ = (f₁₁−f₂₂)/2,
        // x₁ + i x₂ = f₁₂.
        let f11 = (l.a * l.a.conj() + l.b * l.b.conj()).re;
        let f22 = (l.c * l.c.conj() + l.d * l.d.conj()).re;
        let f12 = l.a * l.c.conj() + l.b * l.d.conj();
        vertices.push([
            0.5 * (f11 + f22),
            f12.re,
            f12.im,
            0.5 * (f11 - f22),
        ]);

        let w = eval_or_pole(omega, z).ok_or(SurfaceError::IntegrationThroughPole)?;
        let t = eval_or_pole(theta, z).ok_or(SurfaceError::IntegrationThroughPole)?;
        let denom = w.norm_sqr() + t.norm_sqr();
        conformal_factor.push(denom);
        let wronskian = eval_or_pole(&theta_derivative, z)
            .zip(eval_or_pole(&omega_derivative, z))
            .map(|(tp, wp)| tp * w - t * wp);
        curvature.push(match wronskian {
            Some(wr) if denom > 0.0 => -2.0 * wr.norm_sqr() / denom.powi(3),
            _ => 0.0,
        });
        let rho_mod = if w.norm() == 0.0 {
            f64::INFINITY
        } else {
            t.norm() / w.norm()
        };
        if (rho_mod - 1.0).abs() > 1e-9 {
            unit_gauge_everywhere = false;
        }
        gauge_modulus.push(rho_mod);
    }

    // Singular set |ρ| = 1 via the cross-multiplied pole-free field.
    let singular_param = if unit_gauge_everywhere {
        // ρ ≡ 1: every point is singular; a level set is meaningless.
        Vec::new()
    } else {
        let mut vals = Vec::with_capacity(grid.xs().len() * grid.ys().len());
        for &y in grid.ys() {
            for &x in grid.xs() {
                let z = Complex64::new(x, y);
                let lhs = theta.num().eval(z).norm_sqr() * omega.den().eval(z).norm_sqr();
                let rhs = omega.num().eval(z).norm_sqr() * theta.den().eval(z).norm_sqr();
                vals.push(lhs - rhs);
            }
        }
        marching_squares(grid.xs(), grid.ys(), &vals, 0.0)
    };
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
        ambient: Ambient::H3Minkowski,
        vertices,
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
        max_det_drift,
        totally_degenerate: unit_gauge_everywhere,
        excluded_vertices: grid.excluded(),
        holes_excluded,
        ..Default::default()
    };
    Ok(BuildOutput {
        mesh,
        companion: None,
        report,
    })
}

//! The conformal metric `ds² = (1 + |g|²)^m |ω|²`, its closed-form
//! Gaussian curvature, a finite-difference curvature oracle, and the
//! auxiliary flat metric with its parameter window.

use crate::cplx::{RationalMap, SpherePoint};
use crate::domain::{Domain, DomainError};
use crate::Complex64;
use thiserror::Error;

/// Tolerance for matching poles and zeros of the data against punctures
/// during construction.
const MATCH_TOL: f64 = 1e-5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("pole of the data at the evaluation point (metric blows up or degenerates)")]
    PoleEncountered,
    #[error("finite-difference stencil leaves the domain or hits a pole")]
    StencilOutsideDomain,
    #[error("critical point of the map: g' vanishes here")]
    CriticalPoint,
    #[error("parameter window is empty: q = {q} must be at least m + 3 = {min_q}")]
    WindowEmpty { q: usize, min_q: usize },
    #[error("eta = {eta} outside the open window ({lo}, {hi})")]
    EtaOutOfRange { eta: f64, lo: f64, hi: f64 },
    #[error("metric exponent must be positive (m = {0}); m = 0 is only the flat special case")]
    InvalidExponent(f64),
    #[error("metric is not positive definite: degenerate or infinite at {re}+{im}i")]
    DegenerateMetric { re: f64, im: f64 },
    #[error("auxiliary parameters need exactly q−1 finite exceptional values, got {0}")]
    ExceptionalCount(usize),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// The triple `(g, ω, m)` on a domain, with the metric
/// `ds² = (1 + |g|²)^m |ω̂|² |dz|²` in the global coordinate.
///
/// Construction validates positive definiteness exactly from the root
/// structure of the rational data: every pole of `ω̂` must sit at a
/// puncture, and a pole of `g` of order `k` inside the domain must be
/// compensated by a zero of `ω̂` of order exactly `m·k`.
#[derive(Debug, Clone)]
pub struct WeierstrassData {
    gauss: RationalMap,
    omega: RationalMap,
    gauss_derivative: RationalMap,
    exponent: f64,
    integer_exponent: bool,
    domain: Domain,
}

impl WeierstrassData {
    pub fn new(
        gauss: RationalMap,
        omega: RationalMap,
        m: u32,
        domain: Domain,
    ) -> Result<Self, MetricError> {
        Self::build(gauss, omega, m as f64, true, domain)
    }

    /// Real exponents `m > 0` extend every formula verbatim and are
    /// accepted behind this explicit constructor; such data is flagged
    /// as a non-integer extension. Poles of `g` inside the domain are
    /// rejected here since no integer-order zero of `ω̂` can compensate.
    pub fn with_real_exponent(
        gauss: RationalMap,
        omega: RationalMap,
        m: f64,
        domain: Domain,
    ) -> Result<Self, MetricError> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(MetricError::InvalidExponent(m));
        }
        let integer = m.fract() == 0.0;
        Self::build(gauss, omega, m, integer, domain)
    }

    fn build(
        gauss: RationalMap,
        omega: RationalMap,
        m: f64,
        integer_exponent: bool,
        domain: Domain,
    ) -> Result<Self, MetricError> {
        // Root-cluster centers carry numerical noise, so all matching
        // here works on cluster positions with a generous tolerance
        // rather than re-evaluating orders at perturbed points.
        let near = |a: Complex64, b: Complex64| (a - b).norm() <= MATCH_TOL * (1.0 + b.norm());
        let in_domain = |p: Complex64| match domain.radius() {
            Some(r) => p.norm() <= r,
            None => true,
        };
        let at_puncture = |p: Complex64| domain.punctures().iter().any(|&a| near(p, a));
        let degenerate = |p: Complex64| MetricError::DegenerateMetric { re: p.re, im: p.im };

        let gauss_poles = gauss.poles();
        let omega_zeros = omega.zeros();

        // Poles of ω̂ cannot be compensated by (1+|g|²)^m ≥ 1.
        for (p, _) in omega.poles() {
            if in_domain(p) && !at_puncture(p) {
                return Err(degenerate(p));
            }
        }
        // A pole of g of order k needs a zero of ω̂ of order exactly m·k.
        for &(p, k) in &gauss_poles {
            if in_domain(p) && !at_puncture(p) {
                let zero_order = omega_zeros
                    .iter()
                    .find(|(z, _)| near(*z, p))
                    .map_or(0, |(_, j)| *j);
                if !integer_exponent || zero_order as f64 != m * k as f64 {
                    return Err(degenerate(p));
                }
            }
        }
        // Zeros of ω̂ without exactly that compensation are degenerate.
        for &(p, j) in &omega_zeros {
            if in_domain(p) && !at_puncture(p) {
                let pole_order = gauss_poles
                    .iter()
                    .find(|(z, _)| near(*z, p))
                    .map_or(0, |(_, k)| *k);
                if m * pole_order as f64 != j as f64 {
                    return Err(degenerate(p));
                }
            }
        }

        let gauss_derivative = gauss.derivative();
        Ok(WeierstrassData {
            gauss,
            omega,
            gauss_derivative,
            exponent: m,
            integer_exponent,
            domain,
        })
    }

    /// The flat special case `m = 0`, where `ds² = |ω|²`.
    pub fn flat(omega: RationalMap, domain: Domain) -> Result<Self, MetricError> {
        Self::build(
            RationalMap::constant(Complex64::new(0.0, 0.0)),
            omega,
            0.0,
            true,
            domain,
        )
    }

    pub fn gauss(&self) -> &RationalMap {
        &self.gauss
    }

    pub fn omega(&self) -> &RationalMap {
        &self.omega
    }

    pub fn gauss_derivative(&self) -> &RationalMap {
        &self.gauss_derivative
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn has_integer_exponent(&self) -> bool {
        self.integer_exponent
    }

    /// True for the flagged `m = 0` flat case.
    pub fn is_flat_case(&self) -> bool {
        self.exponent == 0.0
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// The same data moved by `z ↦ z + t` (punctures move along).
    pub fn translate(&self, t: Complex64) -> WeierstrassData {
        WeierstrassData {
            gauss: self.gauss.translate(-t),
            omega: self.omega.translate(-t),
            gauss_derivative: self.gauss_derivative.translate(-t),
            exponent: self.exponent,
            integer_exponent: self.integer_exponent,
            domain: self.domain.translate(t),
        }
    }

    /// Singular points of the data in the finite plane: poles of `g` and
    /// zeros/poles of `ω̂`. Finite-difference oracles keep away from
    /// these.
    pub fn singular_points(&self) -> Vec<Complex64> {
        let mut pts: Vec<Complex64> = Vec::new();
        pts.extend(self.gauss.poles().iter().map(|(p, _)| *p));
        pts.extend(self.omega.poles().iter().map(|(p, _)| *p));
        pts.extend(self.omega.zeros().iter().map(|(p, _)| *p));
        pts.extend(self.domain.punctures().iter().copied());
        pts
    }
}

/// `λ²(z) = (1 + |g(z)|²)^m · |ω̂(z)|²`, the conformal factor of `ds²`.
pub fn conformal_factor(data: &WeierstrassData, z: Complex64) -> Result<f64, MetricError> {
    if !data.domain().contains(z) {
        return Err(MetricError::OutsideDomain);
    }
    let g = match data.gauss().eval(SpherePoint::Finite(z)) {
        SpherePoint::Finite(g) => g,
        SpherePoint::Infinity => return Err(MetricError::PoleEncountered),
    };
    let w = match data.omega().eval(SpherePoint::Finite(z)) {
        SpherePoint::Finite(w) => w,
        SpherePoint::Infinity => return Err(MetricError::PoleEncountered),
    };
    let factor = (1.0 + g.norm_sqr()).powf(data.exponent()) * w.norm_sqr();
    if !factor.is_finite() {
        return Err(MetricError::PoleEncountered);
    }
    Ok(factor)
}

/// Closed-form Gaussian curvature of `ds²`:
/// `K = −2m |g′|² / ((1 + |g|²)^{m+2} |ω̂|²)`.
///
/// Always ≤ 0, and zero exactly at the critical points of `g`.
pub fn gauss_curvature(data: &WeierstrassData, z: Complex64) -> Result<f64, MetricError> {
    if !data.domain().contains(z) {
        return Err(MetricError::OutsideDomain);
    }
    let g = match data.gauss().eval(SpherePoint::Finite(z)) {
        SpherePoint::Finite(g) => g,
        SpherePoint::Infinity => return Err(MetricError::PoleEncountered),
    };
    let w = match data.omega().eval(SpherePoint::Finite(z)) {
        SpherePoint::Finite(w) => w,
        SpherePoint::Infinity => return Err(MetricError::PoleEncountered),
    };
    let dg = match data.gauss_derivative().eval(SpherePoint::Finite(z)) {
        SpherePoint::Finite(dg) => dg,
        SpherePoint::Infinity => return Err(MetricError::PoleEncountered),
    };
    let denom = (1.0 + g.norm_sqr()).powf(data.exponent() + 2.0) * w.norm_sqr();
    if denom == 0.0 || !denom.is_finite() {
        return Err(MetricError::PoleEncountered);
    }
    Ok(-2.0 * data.exponent() * dg.norm_sqr() / denom)
}

/// Five-point Laplacian of a log-factor field at `z`.
fn five_point_log_laplacian<F>(factor: &F, z: Complex64, h: f64) -> Result<f64, MetricError>
where
    F: Fn(Complex64) -> Result<f64, MetricError>,
{
    let log_at = |w: Complex64| -> Result<f64, MetricError> {
        let v = factor(w)?;
        if v <= 0.0 || !v.is_finite() {
            return Err(MetricError::StencilOutsideDomain);
        }
        Ok(v.ln())
    };
    let c = log_at(z)?;
    let e = log_at(z + Complex64::new(h, 0.0))?;
    let w = log_at(z - Complex64::new(h, 0.0))?;
    let n = log_at(z + Complex64::new(0.0, h))?;
    let s = log_at(z - Complex64::new(0.0, h))?;
    Ok((e + w + n + s - 4.0 * c) / (h * h))
}

/// Richardson extrapolation of the five-point Laplacian: cancels the
/// `h²` truncation term, leaving `O(h⁴)` error.
fn richardson_log_laplacian<F>(factor: &F, z: Complex64, h: f64) -> Result<f64, MetricError>
where
    F: Fn(Complex64) -> Result<f64, MetricError>,
{
    let coarse = five_point_log_laplacian(factor, z, h)?;
    let fine = five_point_log_laplacian(factor, z, h * 0.5)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Finite-difference curvature oracle: for a conformal metric
/// `λ²|dz|²`, `K = −Δ(log λ)/λ²` with the Laplacian discretized on a
/// five-point stencil of spacing `h`.
///
/// This path is independent of the closed-form expression and is the
/// check against it; it is only meaningful away from poles and zeros of
/// the data (the stencil must clear them by a couple of orders of `h`).
pub fn gauss_curvature_numeric(
    data: &WeierstrassData,
    z: Complex64,
    h: f64,
) -> Result<f64, MetricError> {
    let factor = |w: Complex64| conformal_factor(data, w);
    let lap = five_point_log_laplacian(&factor, z, h)?;
    let lambda_sq = conformal_factor(data, z)?;
    // log λ = ½ log λ²
    Ok(-0.5 * lap / lambda_sq)
}

/// Richardson-extrapolated variant of the curvature oracle: five-point
/// Laplacians at `h` and `h/2` combined to cancel the `h²` truncation
/// term. Near the admissibility margin the plain stencil's truncation
/// can exceed the comparison tolerance; this variant keeps the oracle
/// below it with the same independence from the closed form.
pub fn gauss_curvature_numeric_richardson(
    data: &WeierstrassData,
    z: Complex64,
    h: f64,
) -> Result<f64, MetricError> {
    let factor = |w: Complex64| conformal_factor(data, w);
    let lap = richardson_log_laplacian(&factor, z, h)?;
    let lambda_sq = conformal_factor(data, z)?;
    Ok(-0.5 * lap / lambda_sq)
}

/// Admissibility of `z` for the curvature oracle at stencil size `h`:
/// distance to every pole/zero of the data exceeds `margin·h`.
pub fn oracle_admissible(data: &WeierstrassData, z: Complex64, h: f64, margin: f64) -> bool {
    data.singular_points()
        .iter()
        .all(|p| (z - p).norm() > margin * h)
}

/// Parameters of the auxiliary flat metric: the exponent window for η
/// and the derived λ, plus the finite exceptional values entering the
/// product (the value at ∞ is normalized away beforehand).
#[derive(Debug, Clone)]
pub struct AuxiliaryMetricParams {
    m: f64,
    q: usize,
    eta: f64,
    lambda: f64,
    exceptional: Vec<Complex64>,
}

/// The open window `((q − 2(m+1))/q, (q − (m+2))/q)` for η.
pub fn eta_window(m: f64, q: usize) -> (f64, f64) {
    let qf = q as f64;
    ((qf - 2.0 * (m + 1.0)) / qf, (qf - (m + 2.0)) / qf)
}

/// `λ = m / (q − 2 − q·η)`.
pub fn lambda_for(m: f64, q: usize, eta: f64) -> f64 {
    m / (q as f64 - 2.0 - q as f64 * eta)
}

impl AuxiliaryMetricParams {
    /// Validates or auto-selects η and computes λ.
    ///
    /// Auto-selection takes the midpoint of the positive part of the
    /// window (η must be a positive number, which exists exactly when
    /// `q ≥ m + 3`); an explicit η is checked against the full stated
    /// window. Inputs with `q ≤ m + 2` are rejected.
    pub fn new(
        m: u32,
        q: usize,
        eta: Option<f64>,
        finite_exceptional: Vec<Complex64>,
    ) -> Result<Self, MetricError> {
        let mf = m as f64;
        if q < m as usize + 3 {
            return Err(MetricError::WindowEmpty {
                q,
                min_q: m as usize + 3,
            });
        }
        if finite_exceptional.len() != q - 1 {
            return Err(MetricError::ExceptionalCount(finite_exceptional.len()));
        }
        let (lo, hi) = eta_window(mf, q);
        let eta = match eta {
            Some(eta) => {
                if eta <= lo || eta >= hi {
                    return Err(MetricError::EtaOutOfRange { eta, lo, hi });
                }
                eta
            }
            None => (lo.max(0.0) + hi) / 2.0,
        };
        let lambda = lambda_for(mf, q, eta);
        debug_assert!(lambda > 0.5 && lambda < 1.0);
        Ok(AuxiliaryMetricParams {
            m: mf,
            q,
            eta,
            lambda,
            exceptional: finite_exceptional,
        })
    }

    /// Exploration constructor that admits any η inside the stated
    /// window regardless of the `q ≥ m + 3` hypothesis. The λ formula
    /// still applies verbatim; callers are on their own outside the
    /// bounded regime.
    pub fn unchecked(
        m: u32,
        q: usize,
        eta: f64,
        finite_exceptional: Vec<Complex64>,
    ) -> Result<Self, MetricError> {
        let mf = m as f64;
        let (lo, hi) = eta_window(mf, q);
        if eta <= lo || eta >= hi {
            return Err(MetricError::EtaOutOfRange { eta, lo, hi });
        }
        Ok(AuxiliaryMetricParams {
            m: mf,
            q,
            eta,
            lambda: lambda_for(mf, q, eta),
            exceptional: finite_exceptional,
        })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn exceptional(&self) -> &[Complex64] {
        &self.exceptional
    }
}

/// Conformal factor of the auxiliary metric
/// `dσ² = |ω̂|^{2/(1−λ)} · ((1/|g′|) ∏_j (|g−α_j|/√(1+|α_j|²))^{1−η})^{2λ/(1−λ)} |dz|²`
/// on the set where `g′ ≠ 0`.
pub fn auxiliary_metric_factor(
    data: &WeierstrassData,
    params: &AuxiliaryMetricParams,
    z: Complex64,
) -> Result<f64, MetricError> {
    if !data.domain().contains(z) {
        return Err(MetricError::OutsideDomain);
    }
    let g = match data.gauss().eval(SpherePoint::Finite(z)) {
        SpherePoint::Finite(g) => g,
        SpherePoint::Infinity => return Err(MetricError::PoleEncountered),
    };
    let w = match data.omega().eval(SpherePoint::Finite(z)) {
        SpherePoint::Finite(w) => w,
        SpherePoint::Infinity => return Err(MetricError::PoleEncountered),
    };
    let dg = match data.gauss_derivative().eval(SpherePoint::Finite(z)) {
        SpherePoint::Finite(dg) => dg,
        SpherePoint::Infinity => return Err(MetricError::PoleEncountered),
    };
    if dg.norm() == 0.0 {
        return Err(MetricError::CriticalPoint);
    }
    let lambda = params.lambda();
    let eta = params.eta();
    let mut product = 1.0 / dg.norm();
    for alpha in params.exceptional() {
        product *= ((g - alpha).norm() / (1.0 + alpha.norm_sqr()).sqrt()).powf(1.0 - eta);
    }
    let factor =
        w.norm().powf(2.0 / (1.0 - lambda)) * product.powf(2.0 * lambda / (1.0 - lambda));
    if !factor.is_finite() {
        return Err(MetricError::PoleEncountered);
    }
    Ok(factor)
}

/// Flatness residual of the auxiliary metric at `z`: the
/// Richardson-extrapolated five-point Laplacian of the log conformal
/// factor. The log factor is a combination of log-moduli of analytic
/// functions without zeros near admissible points, so the exact value
/// is zero; the residual measures only discretization error.
pub fn auxiliary_flatness_residual(
    data: &WeierstrassData,
    params: &AuxiliaryMetricParams,
    z: Complex64,
    h: f64,
) -> Result<f64, MetricError> {
    let factor = |w: Complex64| auxiliary_metric_factor(data, params, w);
    richardson_log_laplacian(&factor, z, h)
}

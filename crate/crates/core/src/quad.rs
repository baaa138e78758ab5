//! Gauss–Legendre quadrature on segments and trapezoid sums on circles.

use crate::Complex64;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Computed by Newton iteration on the Legendre recurrence; accurate to
/// machine precision for the orders used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-style initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and its derivative by recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// ∫ along the straight segment `a → b` of a complex-valued integrand,
/// `∫₀¹ f(z(t))·(b−a) dt` by an `order`-point Gauss–Legendre rule.
///
/// Returns `None` when the integrand reports a singularity.
pub fn segment_integral<F>(a: Complex64, b: Complex64, order: usize, mut f: F) -> Option<Complex64>
where
    F: FnMut(Complex64) -> Option<Complex64>,
{
    let (nodes, weights) = gauss_legendre(order);
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(&weights) {
        let z = mid + half * *x;
        acc += f(z)? * *w;
    }
    Some(acc * half)
}

/// Real line integral `∫ f(z) |dz|` along the segment `a → b`.
pub fn segment_arc_integral<F>(a: Complex64, b: Complex64, order: usize, mut f: F) -> Option<f64>
where
    F: FnMut(Complex64) -> Option<f64>,
{
    let (nodes, weights) = gauss_legendre(order);
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let len_half = half.norm();
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        let z = mid + half * *x;
        acc += f(z)? * *w;
    }
    Some(acc * len_half)
}

/// ∮ of a complex integrand around the circle `center + r·e^{iθ}`.
///
/// The trapezoid rule converges exponentially for integrands analytic in
/// an annulus around the circle, which is the only case used here.
pub fn circle_integral<F>(
    center: Complex64,
    radius: f64,
    samples: usize,
    mut f: F,
) -> Option<Complex64>
where
    F: FnMut(Complex64) -> Option<Complex64>,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..samples {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
        let dir = Complex64::from_polar(1.0, theta);
        let z = center + dir * radius;
        // dz = i·r·e^{iθ} dθ
        let dz = Complex64::new(0.0, 1.0) * dir * radius;
        acc += f(z)? * dz;
    }
    Some(acc * (2.0 * std::f64::consts::PI / samples as f64))
}

/// Circumference of the circle measured by `√factor |dz|`.
pub fn circle_arc_length<F>(center: Complex64, radius: f64, samples: usize, mut f: F) -> Option<f64>
where
    F: FnMut(Complex64) -> Option<f64>,
{
    let mut acc = 0.0;
    for k in 0..samples {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
        let z = center + Complex64::from_polar(radius, theta);
        acc += f(z)?;
    }
    Some(acc * 2.0 * std::f64::consts::PI * radius / samples as f64)
}

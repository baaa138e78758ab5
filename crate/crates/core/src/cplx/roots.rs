//! Polynomial root finding by Aberth–Ehrlich iteration with Newton
//! polish, plus multiplicity recovery by root clustering.

use super::Polynomial;
use crate::Complex64;

const MAX_ITERATIONS: usize = 200;

/// All complex roots of `p`, with multiplicity `k` reported as `k`
/// nearby entries. Returns an empty list for constants.
///
/// Robust for the degrees this crate needs (≤ ~30): initial guesses on
/// a scaled circle, simultaneous Aberth updates, then a few Newton steps
/// per root to polish residuals.
pub fn polynomial_roots(p: &Polynomial) -> Vec<Complex64> {
    let n = p.degree();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![-p.coeffs()[0] / p.coeffs()[1]];
    }

    let deriv = p.derivative();

    // Cauchy-style radius from coefficient magnitudes.
    let lead = p.leading().norm();
    let radius = 1.0
        + p.coeffs()[..n]
            .iter()
            .map(|c| (c.norm() / lead).powf(1.0 / (n as f64)))
            .fold(0.0, f64::max);

    // Initial guesses: a slightly irrational spiral so no guess sits on
    // a symmetry axis of the root set.
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            let r = radius * (0.5 + 0.5 * (k as f64 + 1.0) / (n as f64));
            Complex64::from_polar(r, theta)
        })
        .collect();

    let scale = p.coeff_scale();
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let z = roots[i];
            let pz = p.eval(z);
            if pz.norm() <= 1e-300 * scale {
                continue;
            }
            let dz = deriv.eval(z);
            let newton = if dz.norm() == 0.0 {
                Complex64::new(1e-8, 1e-8)
            } else {
                pz / dz
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &w) in roots.iter().enumerate() {
                if j != i {
                    let d = z - w;
                    if d.norm() > 1e-300 {
                        repulsion += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() < 1e-14 {
                newton
            } else {
                newton / denom
            };
            roots[i] = z - step;
            max_step = max_step.max(step.norm() / (1.0 + roots[i].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
    }

    // Newton polish; multiple roots stall, which the clustering absorbs.
    for r in roots.iter_mut() {
        for _ in 0..8 {
            let pz = p.eval(*r);
            let dz = deriv.eval(*r);
            if dz.norm() == 0.0 {
                break;
            }
            let step = pz / dz;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *r -= step;
            if step.norm() <= 1e-16 * (1.0 + r.norm()) {
                break;
            }
        }
    }

    roots
}

/// Groups nearby roots into `(representative, multiplicity)` pairs.
///
/// Two roots join the same cluster when they are within `tol` of the
/// cluster centroid scaled by the local magnitude. The representative is
/// the centroid of the cluster.
pub fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    let mut sorted: Vec<Complex64> = roots.to_vec();
    sorted.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    for &r in &sorted {
        let mut placed = false;
        for (center, count) in clusters.iter_mut() {
            let local = tol * (1.0 + center.norm());
            if (r - *center).norm() <= local {
                // running centroid
                let k = *count as f64;
                *center = (*center * k + r) / (k + 1.0);
                *count += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            clusters.push((r, 1));
        }
    }
    clusters
}

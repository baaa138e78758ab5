//! Shared fixtures for the kernel benchmarks.

use num_complex::Complex;
use wlab_core::cplx::{Polynomial, RationalMap};
use wlab_core::domain::Domain;
use wlab_core::metric::WeierstrassData;
use wlab_core::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex::new(re, im)
}

/// A polynomial with well-spread roots on a spiral.
pub fn spiral_polynomial(degree: usize) -> Polynomial {
    let roots: Vec<Complex64> = (0..degree)
        .map(|k| Complex64::from_polar(0.4 + 0.05 * k as f64, 0.9 * k as f64))
        .collect();
    Polynomial::from_roots(c(1.0, 0.0), &roots)
}

/// Sharp-family data at q = m + 3 (the bounded-scan regime).
pub fn sharp_data() -> WeierstrassData {
    let punctures = vec![c(1.2, 0.0), c(-0.6, 1.0), c(-0.6, -1.0)];
    let den = Polynomial::from_roots(c(1.0, 0.0), &punctures);
    let omega = RationalMap::new(Polynomial::one(), den).unwrap();
    let domain = Domain::punctured_plane(punctures, 7.5).unwrap();
    WeierstrassData::new(RationalMap::identity(), omega, 1, domain).unwrap()
}

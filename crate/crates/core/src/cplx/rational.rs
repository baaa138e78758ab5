use super::roots::{cluster_roots, polynomial_roots};
use super::{CplxError, Polynomial, SpherePoint};
use crate::Complex64;

/// Tolerance for declaring a numerator and denominator root common
/// during reduction. Inputs carry floating coefficients, so the GCD is
/// decided by root clustering rather than symbolically.
const REDUCE_TOL: f64 = 1e-9;

/// A 2×2 complex matrix acting on rational maps as a Möbius
/// transformation `f ↦ (a·f + b)/(c·f + d)`.
pub type Mat2c = [[Complex64; 2]; 2];

/// A rational map of the Riemann sphere, stored in reduced form.
///
/// Invariants: the denominator is not the zero polynomial and shares no
/// root with the numerator (within the reduction tolerance). The degree
/// of the map is `max(deg num, deg den)`. Wire formats go through the
/// document layer, which re-reduces on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap {
    num: Polynomial,
    den: Polynomial,
}

impl RationalMap {
    /// Builds a reduced rational map. Common roots of numerator and
    /// denominator are cancelled by root clustering.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, CplxError> {
        if den.is_zero() {
            return Err(CplxError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalMap {
                num: Polynomial::zero(),
                den: Polynomial::one(),
            });
        }
        let mut num_roots = polynomial_roots(&num);
        let mut den_roots = polynomial_roots(&den);
        let mut cancelled = false;
        let mut i = 0;
        while i < num_roots.len() {
            let r = num_roots[i];
            let local = REDUCE_TOL * (1.0 + r.norm());
            if let Some(j) = den_roots.iter().position(|d| (d - r).norm() <= local) {
                num_roots.remove(i);
                den_roots.remove(j);
                cancelled = true;
            } else {
                i += 1;
            }
        }
        if cancelled {
            let num = Polynomial::from_roots(num.leading(), &num_roots);
            let den = Polynomial::from_roots(den.leading(), &den_roots);
            Ok(RationalMap { num, den })
        } else {
            Ok(RationalMap { num, den })
        }
    }

    /// A polynomial viewed as a rational map.
    pub fn from_polynomial(num: Polynomial) -> Self {
        RationalMap {
            num,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        RationalMap::from_polynomial(Polynomial::constant(c))
    }

    /// The map `z ↦ z`.
    pub fn identity() -> Self {
        RationalMap::from_polynomial(Polynomial::identity())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// Degree as a map of the sphere: `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Evaluation on the sphere, total by degree bookkeeping: poles map
    /// to ∞ and the value at ∞ is decided by leading-degree comparison.
    pub fn eval(&self, z: SpherePoint) -> SpherePoint {
        match z {
            SpherePoint::Infinity => {
                let (dn, dd) = (self.num.degree(), self.den.degree());
                if self.num.is_zero() {
                    SpherePoint::finite(0.0, 0.0)
                } else if dn > dd {
                    SpherePoint::Infinity
                } else if dn < dd {
                    SpherePoint::finite(0.0, 0.0)
                } else {
                    SpherePoint::Finite(self.num.leading() / self.den.leading())
                }
            }
            SpherePoint::Finite(z) => {
                let d = self.den.eval(z);
                if d.norm() == 0.0 {
                    // In reduced form 0/0 cannot occur.
                    return SpherePoint::Infinity;
                }
                let n = self.num.eval(z);
                let v = n / d;
                if v.re.is_finite() && v.im.is_finite() {
                    SpherePoint::Finite(v)
                } else {
                    SpherePoint::Infinity
                }
            }
        }
    }

    /// Finite evaluation shortcut; `None` at poles.
    pub fn eval_finite(&self, z: Complex64) -> Option<Complex64> {
        self.eval(SpherePoint::Finite(z)).as_finite()
    }

    /// Quotient-rule derivative, in reduced form.
    pub fn derivative(&self) -> RationalMap {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let d = &self.den * &self.den;
        RationalMap::new(n, d).expect("denominator square is nonzero")
    }

    /// All solutions of `f(z) = v` on the sphere with multiplicities.
    ///
    /// Multiplicities always sum to the degree of the map; the point at
    /// infinity is included when it is a preimage.
    pub fn preimages(&self, v: SpherePoint) -> Result<Vec<(SpherePoint, usize)>, CplxError> {
        if self.is_constant() {
            return Err(CplxError::ConstantMap);
        }
        let degree = self.degree();
        let target = match v {
            SpherePoint::Infinity => self.den.clone(),
            SpherePoint::Finite(v) => &self.num - &self.den.scale(v),
        };
        let mut out: Vec<(SpherePoint, usize)> = Vec::new();
        let finite_count = if target.is_zero() {
            // Cannot happen for nonconstant reduced maps.
            0
        } else {
            let roots = polynomial_roots(&target);
            let clusters = cluster_roots(&roots, 1e-6);
            let mut count = 0;
            for (center, mult) in clusters {
                count += mult;
                out.push((SpherePoint::Finite(center), mult));
            }
            count
        };
        // Degree drop against max(deg num, deg den) is the multiplicity
        // of ∞ as a preimage of v.
        if finite_count < degree {
            out.push((SpherePoint::Infinity, degree - finite_count));
        }
        Ok(out)
    }

    /// Post-composition with the Möbius transformation given by a
    /// nonsingular 2×2 matrix: `(a·f + b)/(c·f + d)` in reduced form.
    pub fn mobius(&self, matrix: Mat2c) -> Result<RationalMap, CplxError> {
        let [[a, b], [c, d]] = matrix;
        let det = a * d - b * c;
        if det.norm() == 0.0 {
            return Err(CplxError::SingularMatrix);
        }
        let num = &self.num.scale(a) + &self.den.scale(b);
        let den = &self.num.scale(c) + &self.den.scale(d);
        RationalMap::new(num, den)
    }

    /// Pre-composition with the coordinate shift `z ↦ z + t`.
    pub fn translate(&self, t: Complex64) -> RationalMap {
        let one = Complex64::new(1.0, 0.0);
        RationalMap {
            num: self.num.compose_affine(one, t),
            den: self.den.compose_affine(one, t),
        }
    }

    /// Pointwise product of two rational maps, reduced.
    pub fn product(&self, other: &RationalMap) -> RationalMap {
        RationalMap::new(&self.num * &other.num, &self.den * &other.den)
            .expect("product of nonzero denominators is nonzero")
    }

    /// Pointwise quotient `self / other`, reduced.
    pub fn quotient(&self, other: &RationalMap) -> Result<RationalMap, CplxError> {
        if other.num.is_zero() {
            return Err(CplxError::ZeroDenominator);
        }
        RationalMap::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Finite poles with multiplicities.
    ///
    /// A k-fold root scatters numerically by ~ε^(1/k), so clustering is
    /// generous; the centroid of a complete cluster is accurate to
    /// machine precision. Roots of distinct points closer than ~1e-4
    /// would be conflated, which is outside this crate's input class.
    pub fn poles(&self) -> Vec<(Complex64, usize)> {
        if self.den.is_constant() {
            return Vec::new();
        }
        cluster_roots(&polynomial_roots(&self.den), 1e-4)
    }

    /// Finite zeros with multiplicities.
    pub fn zeros(&self) -> Vec<(Complex64, usize)> {
        if self.num.is_constant() {
            return Vec::new();
        }
        cluster_roots(&polynomial_roots(&self.num), 1e-4)
    }

    /// Order of the map at a finite point: the multiplicity of `p` as a
    /// zero, minus its multiplicity as a pole. Decided by successive
    /// derivative evaluation with backward-error thresholds, which is
    /// robust for high-multiplicity points.
    pub fn order_at(&self, p: Complex64, _tol: f64) -> i32 {
        vanishing_order(&self.num, p) as i32 - vanishing_order(&self.den, p) as i32
    }

    /// Growth exponent at infinity: `f(z) ~ c·z^e` with
    /// `e = deg num − deg den`.
    pub fn growth_at_infinity(&self) -> i32 {
        if self.num.is_zero() {
            0
        } else {
            self.num.degree() as i32 - self.den.degree() as i32
        }
    }
}

/// Order of `p` as a root of the polynomial: the first derivative whose
/// value at `p` is distinguishable from zero given coefficient-level
/// rounding.
fn vanishing_order(poly: &Polynomial, p: Complex64) -> usize {
    let mut current = poly.clone();
    for order in 0..=poly.degree() {
        // Backward-error scale: |Σ cᵢ pⁱ| evaluated on magnitudes.
        let mut scale = 0.0f64;
        let mut power = 1.0f64;
        for c in current.coeffs() {
            scale += c.norm() * power;
            power *= p.norm().max(1.0);
        }
        if current.eval(p).norm() > 1e-10 * scale {
            return order;
        }
        current = current.derivative();
        if current.is_zero() {
            return order + 1;
        }
    }
    poly.degree()
}

//! Exceptional-value enumeration, the Picard-bound consistency check,
//! the empirical curvature-bound scan, and the sharp example family.

use crate::cplx::{chordal, CplxError, Polynomial, RationalMap, SpherePoint};
use crate::domain::{
    boundary_distances, is_complete, Domain, DomainError, DomainKind, DistanceOptions, SampleGrid,
    TailMode,
};
use crate::metric::{gauss_curvature, MetricError, WeierstrassData};
use crate::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("the sharp family needs exactly q−1 punctures, got {got} for q = {q}")]
    WrongPunctureCount { q: usize, got: usize },
    #[error("q must be at least 2, got {0}")]
    DegenerateFamily(usize),
    #[error(transparent)]
    Cplx(#[from] CplxError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// The set of values a map omits on a domain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExceptionalSet {
    pub values: Vec<SpherePoint>,
    /// Minimal pairwise chordal separation; `None` with fewer than two
    /// values.
    pub min_separation: Option<f64>,
    /// Disk-domain enumeration checks candidates only and may miss
    /// values never attained over the disk, so it is marked approximate.
    pub approximate: bool,
}

impl ExceptionalSet {
    pub fn q(&self) -> usize {
        self.values.len()
    }

    pub fn contains(&self, v: SpherePoint) -> bool {
        self.values.iter().any(|&w| chordal(w, v) <= 1e-9)
    }
}

const PUNCTURE_MATCH_TOL: f64 = 1e-6;

fn matches_puncture(domain: &Domain, z: Complex64) -> bool {
    domain
        .punctures()
        .iter()
        .any(|&p| (p - z).norm() <= PUNCTURE_MATCH_TOL * (1.0 + p.norm()))
}

/// Exact enumeration of the exceptional values of a nonconstant
/// rational map on a punctured plane.
///
/// Any omitted value must have its whole preimage outside the domain,
/// i.e. among the punctures and ∞; since nonconstant rational maps are
/// surjective on the sphere, the candidates are exactly the images of
/// the punctures and of ∞. Disk domains check the same candidates but
/// cannot exclude further omitted values, so their result is flagged
/// approximate.
pub fn exceptional_values(
    g: &RationalMap,
    domain: &Domain,
) -> Result<ExceptionalSet, VerifyError> {
    if g.is_constant() {
        return Err(CplxError::ConstantMap.into());
    }
    let mut candidates: Vec<SpherePoint> = Vec::new();
    let mut push = |v: SpherePoint| {
        if !candidates.iter().any(|&w| chordal(w, v) <= 1e-9) {
            candidates.push(v);
        }
    };
    for &p in domain.punctures() {
        push(g.eval(SpherePoint::Finite(p)));
    }
    if domain.kind() == DomainKind::PuncturedPlane {
        push(g.eval(SpherePoint::Infinity));
    }

    let mut values = Vec::new();
    for v in candidates {
        let mut omitted = true;
        for (pre, _) in g.preimages(v)? {
            let escaped = match pre {
                SpherePoint::Infinity => domain.kind() == DomainKind::PuncturedPlane,
                SpherePoint::Finite(z) => {
                    matches_puncture(domain, z)
                        || match domain.radius() {
                            Some(r) => z.norm() >= r,
                            None => false,
                        }
                }
            };
            if !escaped {
                omitted = false;
                break;
            }
        }
        if omitted {
            values.push(v);
        }
    }

    let mut min_separation = None;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let d = chordal(values[i], values[j]);
            min_separation = Some(min_separation.map_or(d, |m: f64| m.min(d)));
        }
    }
    Ok(ExceptionalSet {
        values,
        min_separation,
        approximate: domain.kind() == DomainKind::Disk,
    })
}

/// Outcome of the Picard-bound consistency check: a complete metric
/// with nonconstant `g` omitting more than `m + 2` values would
/// contradict the bound and must never occur on valid inputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PicardCheck {
    pub consistent: bool,
    pub complete: bool,
    pub nonconstant: bool,
    pub exceptional_count: usize,
    pub bound: f64,
    pub detail: String,
}

pub fn check_picard(data: &WeierstrassData) -> Result<PicardCheck, VerifyError> {
    let nonconstant = !data.gauss().is_constant();
    let verdict = is_complete(data);
    let q = if nonconstant {
        exceptional_values(data.gauss(), data.domain())?.q()
    } else {
        0
    };
    let bound = data.exponent() + 2.0;
    let inconsistent = verdict.complete && nonconstant && (q as f64) > bound;
    let detail = if !nonconstant {
        "hypothesis gate: g constant, bound not applicable".to_string()
    } else if !verdict.complete {
        format!(
            "metric incomplete (witness {}), bound not applicable; q = {q}",
            verdict
                .witness
                .map(|w| w.to_string())
                .unwrap_or_else(|| "none".into())
        )
    } else {
        format!("complete metric, q = {q} ≤ m + 2 = {bound}")
    };
    Ok(PicardCheck {
        consistent: !inconsistent,
        complete: verdict.complete,
        nonconstant,
        exceptional_count: q,
        bound,
        detail,
    })
}

/// Empirical record of `sup √|K(p)| · d(p)` over a sampling grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundScanReport {
    pub m: f64,
    pub q: usize,
    pub min_separation: Option<f64>,
    pub sup_product: f64,
    pub argmax: [f64; 2],
    pub sample_count: usize,
    pub skipped_nodes: usize,
    pub grid_nodes: usize,
    pub grid_step: f64,
    /// True when the scan ran with truncated-domain distances instead
    /// of analytic tails (the sharpness probe for complete metrics).
    pub truncated_tails: bool,
    /// True when capped (+∞) distances entered the supremum; the value
    /// is then a cap artifact, not an estimate.
    pub used_capped_distances: bool,
    /// `q ≥ m + 3`: the hypothesis regime in which the product
    /// stays bounded.
    pub bounded_regime: bool,
}

#[derive(Debug, Clone)]
pub struct BoundScanOptions {
    pub distance: DistanceOptions,
}

impl Default for BoundScanOptions {
    fn default() -> Self {
        BoundScanOptions {
            distance: DistanceOptions::default(),
        }
    }
}

impl BoundScanOptions {
    pub fn truncated() -> Self {
        BoundScanOptions {
            distance: DistanceOptions {
                tail: TailMode::Truncated,
                ..Default::default()
            },
        }
    }
}

/// Scans the grid for the supremum of `√|K| · d(p)`.
///
/// Curvature evaluations are embarrassingly parallel; the reduction is
/// a sequential maximum with first-index tie-break, so the result is
/// deterministic for a fixed grid.
pub fn bound_scan(
    data: &WeierstrassData,
    grid: &SampleGrid,
    opts: &BoundScanOptions,
) -> Result<BoundScanReport, VerifyError> {
    let exceptional = exceptional_values(data.gauss(), data.domain());
    let (q, min_separation) = match &exceptional {
        Ok(set) => (set.q(), set.min_separation),
        Err(_) => (0, None),
    };
    let field = boundary_distances(data, grid, &opts.distance)?;

    let curvatures: Vec<Option<f64>> = grid
        .nodes()
        .par_iter()
        .map(|&z| gauss_curvature(data, z).ok())
        .collect();

    let mut sup = 0.0f64;
    let mut argmax = [0.0, 0.0];
    let mut used_capped = false;
    let mut sample_count = 0usize;
    let mut skipped = 0usize;
    for (idx, k) in curvatures.iter().enumerate() {
        let k = match k {
            Some(k) => *k,
            None => {
                skipped += 1;
                continue;
            }
        };
        sample_count += 1;
        let product = k.abs().sqrt() * field.values[idx];
        if product > sup {
            sup = product;
            argmax = [grid.nodes()[idx].re, grid.nodes()[idx].im];
            used_capped = field.capped[idx];
        }
    }

    Ok(BoundScanReport {
        m: data.exponent(),
        q,
        min_separation,
        sup_product: sup,
        argmax,
        sample_count,
        skipped_nodes: skipped,
        grid_nodes: grid.len(),
        grid_step: grid.step(),
        truncated_tails: opts.distance.tail == TailMode::Truncated,
        used_capped_distances: used_capped,
        bounded_regime: q as f64 >= data.exponent() + 3.0,
    })
}

/// The sharp example family: `g = z`, `ω = dz/∏(z − αᵢ)` on the plane
/// punctured at the `q − 1` points `αᵢ`. Omits exactly the punctures
/// and ∞, and is complete exactly when `q ≤ m + 2`.
pub fn make_voss(
    m: u32,
    q: usize,
    punctures: &[Complex64],
) -> Result<WeierstrassData, VerifyError> {
    if q < 2 {
        return Err(VerifyError::DegenerateFamily(q));
    }
    if punctures.len() != q - 1 {
        return Err(VerifyError::WrongPunctureCount {
            q,
            got: punctures.len(),
        });
    }
    let den = Polynomial::from_roots(Complex64::new(1.0, 0.0), punctures);
    let omega = RationalMap::new(Polynomial::one(), den)?;
    let domain = Domain::punctured_plane_auto(punctures.to_vec())?;
    Ok(WeierstrassData::new(
        RationalMap::identity(),
        omega,
        m,
        domain,
    )?)
}

/// One row of the completeness/Picard truth table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeRow {
    pub m: u32,
    pub q: usize,
    pub complete: bool,
    pub exceptional_count: usize,
    pub consistent: bool,
}

/// Draws `count` points in the disk of radius 2 with pairwise
/// separation at least 0.35 by rejection.
pub fn random_punctures<R: Rng>(rng: &mut R, count: usize) -> Vec<Complex64> {
    let mut points: Vec<Complex64> = Vec::with_capacity(count);
    while points.len() < count {
        let re = rng.gen_range(-2.0..2.0);
        let im = rng.gen_range(-2.0..2.0);
        let z = Complex64::new(re, im);
        if z.norm() <= 2.0 && points.iter().all(|p| (p - z).norm() >= 0.35) {
            points.push(z);
        }
    }
    points
}

/// Runs the sharp family over the lattice `m ∈ {1..m_max}`,
/// `q ∈ {2..min(q_max, m+4)}` with `trials` random puncture
/// configurations per cell. Deterministic for a fixed seed.
pub fn voss_lattice(
    m_max: u32,
    q_max: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<LatticeRow>, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for m in 1..=m_max {
        for q in 2..=q_max.min(m as usize + 4) {
            for _ in 0..trials {
                let punctures = random_punctures(&mut rng, q - 1);
                let data = make_voss(m, q, &punctures)?;
                let complete = is_complete(&data).complete;
                let picard = check_picard(&data)?;
                rows.push(LatticeRow {
                    m,
                    q,
                    complete,
                    exceptional_count: picard.exceptional_count,
                    consistent: picard.consistent,
                });
            }
        }
    }
    Ok(rows)
}

/// CSV emission of the truth table, columns
/// `m,q,complete,exceptional_count,consistent`.
pub fn lattice_csv(rows: &[LatticeRow]) -> String {
    let mut out = String::from("m,q,complete,exceptional_count,consistent\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.m, r.q, r.complete, r.exceptional_count, r.consistent
        ));
    }
    out
}

/// Seeded generator of valid non-sharp datasets for randomized checks.
///
/// Three families: polynomial `g` with all `ω̂` poles at punctures;
/// `ω̂` mixing zeros and poles at punctures; and `g` with a pole at a
/// puncture compensated in `ω̂`. All satisfy the positivity invariant
/// by construction.
pub fn random_dataset<R: Rng>(rng: &mut R) -> Result<WeierstrassData, VerifyError> {
    let m = rng.gen_range(1..=3u32);
    let family = rng.gen_range(0..3u32);
    let puncture_count = rng.gen_range(1..=3usize);
    let punctures = random_punctures(rng, puncture_count);
    let one = Complex64::new(1.0, 0.0);

    let random_poly = |rng: &mut R, deg: usize| -> Polynomial {
        let mut coeffs: Vec<Complex64> = (0..=deg)
            .map(|_| Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)))
            .collect();
        let lead = coeffs.last_mut().unwrap();
        if lead.norm() < 0.3 {
            *lead += Complex64::new(0.5, 0.25);
        }
        Polynomial::new(coeffs)
    };

    let (gauss, omega) = match family {
        0 => {
            let deg = rng.gen_range(1..=3);
            let g = RationalMap::from_polynomial(random_poly(rng, deg));
            let den = Polynomial::from_roots(one, &punctures);
            (g, RationalMap::new(Polynomial::one(), den)?)
        }
        1 => {
            let deg = rng.gen_range(1..=2);
            let g = RationalMap::from_polynomial(random_poly(rng, deg));
            let mut num = Polynomial::constant(one);
            let mut den = Polynomial::one();
            for &p in &punctures {
                if rng.gen_bool(0.5) {
                    num = &num * &Polynomial::from_roots(one, &[p]);
                } else {
                    den = &den * &Polynomial::from_roots(one, &[p]);
                }
            }
            (g, RationalMap::new(num, den)?)
        }
        _ => {
            // g = p(z)/(z − α₁) with ω̂ carrying (z − α₁)^m to compensate.
            let pole = punctures[0];
            let g = RationalMap::new(
                random_poly(rng, 1),
                Polynomial::from_roots(one, &[pole]),
            )?;
            let mut num = Polynomial::constant(one);
            for _ in 0..m {
                num = &num * &Polynomial::from_roots(one, &[pole]);
            }
            let den = Polynomial::from_roots(one, &punctures[1..]);
            (g, RationalMap::new(num, den)?)
        }
    };
    let domain = Domain::punctured_plane_auto(punctures)?;
    Ok(WeierstrassData::new(gauss, omega, m, domain)?)
}

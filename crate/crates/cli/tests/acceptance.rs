//! Acceptance suite: one test per release criterion, each printing a
//! pass line with the measured quantity. Run with
//! `cargo test -p wlab-cli --test acceptance -- --nocapture`.

use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use wlab_core::cplx::{Polynomial, RationalMap};
use wlab_core::domain::{Domain, GridParams, SampleGrid};
use wlab_core::metric::{
    auxiliary_flatness_residual, gauss_curvature, AuxiliaryMetricParams, MetricError,
    WeierstrassData,
};
use wlab_core::report::{curvature_scan, CurvatureScanOptions};
use wlab_core::surfaces::{
    build_affine, build_flat_front, build_maxface, build_minimal, BuildGrid, BuildOptions,
    FrontData, FrontInputs, Polyline,
};
use wlab_core::verify::{
    bound_scan, check_picard, make_voss, random_dataset, voss_lattice, BoundScanOptions,
};
use wlab_core::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex::new(re, im)
}

fn pass(criterion: usize, detail: String) {
    println!("[PASS] criterion {criterion}: {detail}");
}

fn within_runtime(criterion: usize, started: Instant, budget_secs: u64) {
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < budget_secs,
        "criterion {criterion} exceeded its {budget_secs}s budget: {elapsed:?}"
    );
}

/// Criterion 1 — sharp-family truth table: completeness equals
/// `q ≤ m + 2` and the exceptional count equals `q` on every row,
/// m ∈ {1..4}, q ∈ {2..m+4}, three random configurations each.
#[test]
fn criterion_01_voss_truth_table() {
    let started = Instant::now();
    let rows = voss_lattice(4, 8, 3, 20260811).unwrap();
    assert_eq!(rows.len(), 66);
    for row in &rows {
        assert_eq!(
            row.complete,
            row.q <= row.m as usize + 2,
            "completeness misjudged on {row:?}"
        );
        assert_eq!(row.exceptional_count, row.q, "wrong count on {row:?}");
    }
    within_runtime(1, started, 10);
    pass(
        1,
        format!(
            "{} rows; completeness ⟺ q ≤ m+2 and exceptional count = q on all ({:?})",
            rows.len(),
            started.elapsed()
        ),
    );
}

/// Criterion 2 — Picard consistency: no inconsistent row over the
/// lattice plus twenty randomized non-sharp datasets.
#[test]
fn criterion_02_picard_consistency() {
    let started = Instant::now();
    let rows = voss_lattice(4, 8, 3, 77).unwrap();
    let mut checked = rows.len();
    for row in &rows {
        assert!(row.consistent, "inconsistent lattice row {row:?}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(424242);
    for _ in 0..20 {
        let data = random_dataset(&mut rng).unwrap();
        let picard = check_picard(&data).unwrap();
        assert!(picard.consistent, "inconsistent dataset: {}", picard.detail);
        checked += 1;
    }
    within_runtime(2, started, 30);
    pass(
        2,
        format!("0 inconsistent rows out of {checked} ({:?})", started.elapsed()),
    );
}

/// Criterion 3 — curvature oracle: closed form against the
/// finite-difference Laplacian at h = 1e−3, agreement ≤ 1e−4 relative
/// on ≥ 99% of admissible nodes, K ≤ 0 everywhere, and K(0) = −4 on
/// the Enneper data.
#[test]
fn criterion_03_curvature_oracle() {
    let started = Instant::now();
    let enneper = WeierstrassData::new(
        RationalMap::identity(),
        RationalMap::constant(c(1.0, 0.0)),
        2,
        Domain::plane(),
    )
    .unwrap();
    let catenoid = {
        let omega =
            RationalMap::new(Polynomial::one(), Polynomial::from_reals(&[0.0, 0.0, 1.0]))
                .unwrap();
        let domain = Domain::punctured_plane(vec![c(0.0, 0.0)], 8.0).unwrap();
        WeierstrassData::new(RationalMap::identity(), omega, 2, domain).unwrap()
    };
    let mut datasets = vec![enneper.clone(), catenoid];
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..10 {
        datasets.push(random_dataset(&mut rng).unwrap());
    }

    let opts = CurvatureScanOptions {
        extent: 2.0,
        step: 0.1,
        stencil_h: 1e-3,
        margin: 100.0,
    };
    let mut total_compared = 0usize;
    let mut worst_fraction = 1.0f64;
    for data in &datasets {
        let (_, summary) = curvature_scan(data, &opts);
        assert!(
            !summary.positive_curvature_found,
            "positive curvature on a dataset"
        );
        assert!(summary.compared_nodes > 50, "too few admissible nodes");
        assert!(
            summary.agreement_fraction >= 0.99,
            "agreement {} below 99% (max disagreement {:.3e})",
            summary.agreement_fraction,
            summary.max_rel_disagreement
        );
        total_compared += summary.compared_nodes;
        worst_fraction = worst_fraction.min(summary.agreement_fraction);
    }

    let k0 = gauss_curvature(&enneper, c(0.0, 0.0)).unwrap();
    assert!((k0 + 4.0).abs() <= 1e-12, "Enneper K(0) = {k0}");
    within_runtime(3, started, 60);
    pass(
        3,
        format!(
            "12 datasets, {total_compared} compared nodes, worst agreement {:.4}, Enneper K(0) = {k0} ({:?})",
            worst_fraction,
            started.elapsed()
        ),
    );
}

/// Criterion 4 — auxiliary-metric flatness with midpoint η on the
/// sharp data at q = m+3, plus rejection of every window with
/// q ≤ m + 2.
#[test]
fn criterion_04_auxiliary_flatness_and_window() {
    let started = Instant::now();
    let configs: [(u32, usize, Vec<Complex64>); 2] = [
        (
            1,
            4,
            vec![c(1.5, 0.0), c(-0.75, 1.3), c(-0.75, -1.3)],
        ),
        (
            2,
            5,
            vec![c(1.6, 0.0), c(0.0, 1.6), c(-1.6, 0.0), c(0.0, -1.6)],
        ),
    ];
    let mut checked_points = 0usize;
    let mut worst = 0.0f64;
    for (m, q, punctures) in &configs {
        let data = make_voss(*m, *q, punctures).unwrap();
        let params = AuxiliaryMetricParams::new(*m, *q, None, punctures.clone()).unwrap();
        let n = 13;
        for i in 0..n {
            for j in 0..n {
                let z = c(
                    -3.0 + 6.0 * i as f64 / (n - 1) as f64,
                    -3.0 + 6.0 * j as f64 / (n - 1) as f64,
                );
                if punctures.iter().any(|p| (z - p).norm() < 0.8) {
                    continue;
                }
                let residual = auxiliary_flatness_residual(&data, &params, z, 1.5e-2).unwrap();
                assert!(
                    residual.abs() <= 1e-6,
                    "flatness residual {residual:.3e} at {z} for m={m}, q={q}"
                );
                worst = worst.max(residual.abs());
                checked_points += 1;
            }
        }
    }
    // Window rejection exactly below the hypothesis window.
    for m in 1u32..=4 {
        for q in 2usize..=(m as usize + 2) {
            let alphas: Vec<Complex64> = (0..q - 1).map(|k| c(k as f64, 1.0)).collect();
            assert!(
                matches!(
                    AuxiliaryMetricParams::new(m, q, None, alphas),
                    Err(MetricError::WindowEmpty { .. })
                ),
                "window must be empty for m={m}, q={q}"
            );
        }
    }
    within_runtime(4, started, 30);
    pass(
        4,
        format!(
            "{checked_points} sample points flat within 1e-6 (worst {worst:.3e}); q ≤ m+2 rejected ({:?})",
            started.elapsed()
        ),
    );
}

/// Criterion 5 — bound-scan stability at q = m + 3: the empirical
/// supremum moves by less than 10% across two refinements and is
/// invariant to 1e−10 under puncture relabeling.
#[test]
fn criterion_05_bound_scan_stability() {
    let started = Instant::now();
    let punctures = vec![c(1.2, 0.0), c(-0.6, 1.0), c(-0.6, -1.0)];
    let data = make_voss(1, 4, &punctures).unwrap();
    let opts = BoundScanOptions::default();

    let mut params = GridParams::with_step(0.5);
    let mut sups = Vec::new();
    for _ in 0..3 {
        let grid = SampleGrid::build(data.domain(), &params);
        let report = bound_scan(&data, &grid, &opts).unwrap();
        assert!(report.bounded_regime);
        assert!(!report.used_capped_distances);
        sups.push(report.sup_product);
        params = params.refined();
    }
    let change1 = (sups[1] - sups[0]).abs() / sups[0];
    let change2 = (sups[2] - sups[1]).abs() / sups[1];
    assert!(change1 < 0.10, "first refinement moved the supremum by {change1}");
    assert!(change2 < 0.10, "second refinement moved the supremum by {change2}");

    let mut relabeled = punctures.clone();
    relabeled.rotate_left(1);
    relabeled.swap(0, 1);
    let data2 = make_voss(1, 4, &relabeled).unwrap();
    let grid = SampleGrid::build(data.domain(), &GridParams::with_step(0.5));
    let grid2 = SampleGrid::build(data2.domain(), &GridParams::with_step(0.5));
    let s1 = bound_scan(&data, &grid, &opts).unwrap().sup_product;
    let s2 = bound_scan(&data2, &grid2, &opts).unwrap().sup_product;
    let relabel_gap = (s1 - s2).abs() / s1;
    assert!(relabel_gap <= 1e-10, "relabeling moved the supremum by {relabel_gap}");
    within_runtime(5, started, 120);
    pass(
        5,
        format!(
            "sup {:.6} -> {:.6} -> {:.6} (changes {:.2}%, {:.2}%); relabeling gap {relabel_gap:.2e} ({:?})",
            sups[0],
            sups[1],
            sups[2],
            100.0 * change1,
            100.0 * change2,
            started.elapsed()
        ),
    );
}

/// Criterion 6 — minimal builder: Enneper harmonicity ≤ 1e−3, induced
/// metric within 1e−3 of (1+|z|²)², catenoid period real parts ≤ 1e−8.
#[test]
fn criterion_06_minimal_builder() {
    let started = Instant::now();
    let enneper = FrontData {
        inputs: FrontInputs::Minimal {
            gauss: RationalMap::identity(),
            omega: RationalMap::constant(c(1.0, 0.0)),
        },
        base_point: c(0.0, 0.0),
        domain: Domain::plane(),
    };
    let options = BuildOptions {
        step: 1.0 / 32.0,
        extent: 1.0,
        ..Default::default()
    };
    let out = build_minimal(&enneper, &options).unwrap();
    assert!(
        out.report.induced_metric_max_rel_err <= 1e-3,
        "induced metric error {}",
        out.report.induced_metric_max_rel_err
    );
    let grid = BuildGrid::build(&enneper.domain, &options, &[], enneper.base_point).unwrap();
    let mut harmonicity = 0.0f64;
    for v in 0..out.mesh.vertices.len() {
        for coord in 0..3 {
            if let Some(lap) = grid.laplacian(&out.mesh.vertices, v, coord) {
                harmonicity = harmonicity.max(lap.abs());
            }
        }
    }
    assert!(harmonicity <= 1e-3, "harmonicity residual {harmonicity}");

    let catenoid = FrontData {
        inputs: FrontInputs::Minimal {
            gauss: RationalMap::identity(),
            omega: RationalMap::new(
                Polynomial::one(),
                Polynomial::from_reals(&[0.0, 0.0, 1.0]),
            )
            .unwrap(),
        },
        base_point: c(1.0, 0.0),
        domain: Domain::punctured_plane(vec![c(0.0, 0.0)], 8.0).unwrap(),
    };
    let cat = build_minimal(&catenoid, &BuildOptions::with_step(0.05)).unwrap();
    assert!(
        cat.report.max_period_residual <= 1e-8,
        "catenoid period residual {}",
        cat.report.max_period_residual
    );
    within_runtime(6, started, 30);
    pass(
        6,
        format!(
            "harmonicity {harmonicity:.3e}, induced metric {:.3e}, catenoid periods {:.3e} ({:?})",
            out.report.induced_metric_max_rel_err,
            cat.report.max_period_residual,
            started.elapsed()
        ),
    );
}

fn hausdorff_to_unit_circle(lines: &[Polyline]) -> f64 {
    let mut worst = 0.0f64;
    let mut any = false;
    for line in lines {
        for &(x, y) in &line.points {
            worst = worst.max(((x * x + y * y).sqrt() - 1.0).abs());
            any = true;
        }
    }
    assert!(any, "no singular points extracted");
    let segment_distance = |p: (f64, f64), a: (f64, f64), b: (f64, f64)| -> f64 {
        let (abx, aby) = (b.0 - a.0, b.1 - a.1);
        let len_sq = abx * abx + aby * aby;
        let t = if len_sq == 0.0 {
            0.0
        } else {
            (((p.0 - a.0) * abx + (p.1 - a.1) * aby) / len_sq).clamp(0.0, 1.0)
        };
        let (dx, dy) = (a.0 + t * abx - p.0, a.1 + t * aby - p.1);
        (dx * dx + dy * dy).sqrt()
    };
    for k in 0..720 {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / 720.0;
        let p = (theta.cos(), theta.sin());
        let mut best = f64::MAX;
        for line in lines {
            let n = line.points.len();
            let last = if line.closed { n } else { n.saturating_sub(1) };
            for i in 0..last {
                best = best.min(segment_distance(p, line.points[i], line.points[(i + 1) % n]));
            }
        }
        worst = worst.max(best);
    }
    worst
}

/// Criterion 7 — maxface builder: the singular polyline of the
/// Lorentzian Enneper data is the unit circle to 1e−3 Hausdorff, the
/// nullity residual stays below 1e−10, and ds² ≤ dσ² at every sample.
#[test]
fn criterion_07_maxface_builder() {
    let started = Instant::now();
    let fd = FrontData {
        inputs: FrontInputs::Maxface {
            gauss: RationalMap::identity(),
            omega: RationalMap::constant(c(1.0, 0.0)),
        },
        base_point: c(0.0, 0.0),
        domain: Domain::plane(),
    };
    let out = build_maxface(&fd, &BuildOptions::with_step(0.02)).unwrap();
    let hausdorff = hausdorff_to_unit_circle(&out.mesh.singular_param);
    assert!(hausdorff <= 1e-3, "singular circle Hausdorff {hausdorff}");
    assert!(
        out.report.max_nullity_residual <= 1e-10,
        "nullity residual {}",
        out.report.max_nullity_residual
    );
    for &z in &out.mesh.params {
        let g_sq = z.norm_sqr();
        let ds = (1.0 - g_sq) * (1.0 - g_sq);
        let dsigma = (1.0 + g_sq) * (1.0 + g_sq);
        assert!(ds <= dsigma + 1e-15, "ds² > dσ² at {z}");
    }
    within_runtime(7, started, 30);
    pass(
        7,
        format!(
            "Hausdorff {hausdorff:.3e}, nullity {:.3e}, ds² ≤ dσ² on {} samples ({:?})",
            out.report.max_nullity_residual,
            out.mesh.params.len(),
            started.elapsed()
        ),
    );
}

/// Criterion 8 — affine builder: the trivial generators reproduce the
/// elliptic paraboloid to 1e−8 with ν ≡ 0 and no singular points, and
/// the sampled Lagrangian metric matches 2(1+|ν|²)|dG|² to 1e−3.
#[test]
fn criterion_08_affine_builder() {
    let started = Instant::now();
    let paraboloid = FrontData {
        inputs: FrontInputs::Affine {
            df: RationalMap::constant(c(0.0, 0.0)),
            dg: RationalMap::constant(c(1.0, 0.0)),
        },
        base_point: c(0.0, 0.0),
        domain: Domain::plane(),
    };
    let out = build_affine(&paraboloid, &BuildOptions::with_step(0.05)).unwrap();
    let mut worst = 0.0f64;
    for (k, &z) in out.mesh.params.iter().enumerate() {
        let v = out.mesh.vertices[k];
        worst = worst.max((v[0] - z.re).abs());
        worst = worst.max((v[1] - z.im).abs());
        worst = worst.max((v[2] - 0.5 * z.norm_sqr()).abs());
        assert_eq!(out.mesh.gauge_modulus[k], 0.0, "ν must vanish identically");
    }
    assert!(worst <= 1e-8, "paraboloid deviation {worst}");
    assert!(out.mesh.singular_param.is_empty(), "paraboloid has no singular set");
    assert!(out.report.induced_metric_max_rel_err <= 1e-3);

    // Nontrivial generators: dF = z, dG = 1.
    let singular = FrontData {
        inputs: FrontInputs::Affine {
            df: RationalMap::identity(),
            dg: RationalMap::constant(c(1.0, 0.0)),
        },
        base_point: c(0.0, 0.0),
        domain: Domain::plane(),
    };
    let out2 = build_affine(&singular, &BuildOptions::with_step(0.05)).unwrap();
    assert!(
        out2.report.induced_metric_max_rel_err <= 1e-3,
        "dτ² sampled error {}",
        out2.report.induced_metric_max_rel_err
    );
    within_runtime(8, started, 30);
    pass(
        8,
        format!(
            "paraboloid exact to {worst:.3e}; dτ² sampled errors {:.3e} / {:.3e} ({:?})",
            out.report.induced_metric_max_rel_err,
            out2.report.induced_metric_max_rel_err,
            started.elapsed()
        ),
    );
}

/// Criterion 9 — flat-front builder: the horosphere document matches
/// the closed-form lift to 1e−6, the determinant drifts below 1e−8 on
/// ten random datasets, and the ρ = z singular set is the unit circle
/// to 1e−3 Hausdorff.
#[test]
fn criterion_09_flat_front_builder() {
    let started = Instant::now();
    let horosphere = FrontData {
        inputs: FrontInputs::FlatFront {
            omega: RationalMap::constant(c(1.0, 0.0)),
            theta: RationalMap::constant(c(0.0, 0.0)),
        },
        base_point: c(0.0, 0.0),
        domain: Domain::plane(),
    };
    let out = build_flat_front(&horosphere, &BuildOptions::with_step(0.05)).unwrap();
    let mut worst = 0.0f64;
    for (k, &z) in out.mesh.params.iter().enumerate() {
        let v = out.mesh.vertices[k];
        worst = worst.max((v[0] - (1.0 + 0.5 * z.norm_sqr())).abs());
        worst = worst.max((v[1] - z.re).abs());
        worst = worst.max((v[2] + z.im).abs());
        worst = worst.max((v[3] + 0.5 * z.norm_sqr()).abs());
    }
    assert!(worst <= 1e-6, "horosphere deviation {worst}");

    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let mut max_drift = 0.0f64;
    for trial in 0..10 {
        let poly = |rng: &mut ChaCha8Rng, deg: usize| {
            Polynomial::new(
                (0..=deg)
                    .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            )
        };
        // Mix plain polynomials with rational data whose poles stay
        // outside the build rectangle.
        let make = |rng: &mut ChaCha8Rng, with_poles: bool| {
            let deg = rng.gen_range(1..=3);
            let num = poly(rng, deg);
            if with_poles {
                let pole = Complex64::from_polar(
                    rng.gen_range(2.6..3.5),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                );
                RationalMap::new(num, Polynomial::from_roots(c(1.0, 0.0), &[pole])).unwrap()
            } else {
                RationalMap::from_polynomial(num)
            }
        };
        let with_poles = trial % 2 == 1;
        let fd = FrontData {
            inputs: FrontInputs::FlatFront {
                omega: make(&mut rng, with_poles),
                theta: make(&mut rng, with_poles),
            },
            base_point: c(0.0, 0.0),
            domain: Domain::plane(),
        };
        let out = build_flat_front(&fd, &BuildOptions::with_step(0.1)).unwrap();
        out.mesh.validate().unwrap();
        max_drift = max_drift.max(out.report.max_det_drift);
        assert!(
            out.report.max_det_drift <= 1e-8,
            "det drift {} on trial {trial}",
            out.report.max_det_drift
        );
    }

    let rho_z = FrontData {
        inputs: FrontInputs::FlatFront {
            omega: RationalMap::constant(c(1.0, 0.0)),
            theta: RationalMap::identity(),
        },
        base_point: c(0.0, 0.0),
        domain: Domain::plane(),
    };
    let out = build_flat_front(&rho_z, &BuildOptions::with_step(0.02)).unwrap();
    let hausdorff = hausdorff_to_unit_circle(&out.mesh.singular_param);
    assert!(hausdorff <= 1e-3, "ρ = z singular circle Hausdorff {hausdorff}");
    within_runtime(9, started, 60);
    pass(
        9,
        format!(
            "horosphere {worst:.3e}, max det drift {max_drift:.3e} over 10 datasets, singular Hausdorff {hausdorff:.3e} ({:?})",
            started.elapsed()
        ),
    );
}

/// Criterion 10 — determinism: the lattice command with a fixed seed
/// produces byte-identical CSV across two independent binary runs.
#[test]
fn criterion_10_lattice_determinism() {
    let started = Instant::now();
    let run = |tag: &str| -> Vec<u8> {
        let out = std::env::temp_dir().join(format!(
            "wlab_acceptance_lattice_{tag}_{}",
            std::process::id()
        ));
        std::fs::create_dir_all(&out).unwrap();
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_wlab"))
            .args(["voss-lattice", "--m-max", "4", "--q-max", "8", "--seed", "7"])
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        let bytes = std::fs::read(out.join("voss_lattice.csv")).unwrap();
        std::fs::remove_dir_all(&out).ok();
        bytes
    };
    let first = run("a");
    let second = run("b");
    assert_eq!(first, second, "lattice CSV differs between runs");
    assert!(first.starts_with(b"m,q,complete,exceptional_count,consistent\n"));
    pass(
        10,
        format!(
            "two runs byte-identical ({} bytes, {:?})",
            first.len(),
            started.elapsed()
        ),
    );
}

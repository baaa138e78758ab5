use super::*;
use crate::cplx::{Polynomial, RationalMap};
use crate::metric::WeierstrassData;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn voss(m: u32, punctures: Vec<Complex64>, cutoff: f64) -> WeierstrassData {
    let den = Polynomial::from_roots(c(1.0, 0.0), &punctures);
    let omega = RationalMap::new(Polynomial::one(), den).unwrap();
    let domain = Domain::punctured_plane(punctures, cutoff).unwrap();
    WeierstrassData::new(RationalMap::identity(), omega, m, domain).unwrap()
}

fn flat_disk() -> WeierstrassData {
    WeierstrassData::flat(
        RationalMap::constant(c(1.0, 0.0)),
        Domain::disk(1.0, vec![]).unwrap(),
    )
    .unwrap()
}

fn enneper() -> WeierstrassData {
    WeierstrassData::new(
        RationalMap::identity(),
        RationalMap::constant(c(1.0, 0.0)),
        2,
        Domain::plane(),
    )
    .unwrap()
}

#[test]
fn domain_validation() {
    assert_eq!(
        Domain::punctured_plane(vec![c(1.0, 0.0), c(1.0, 0.0)], 10.0).unwrap_err(),
        DomainError::DuplicatePunctures
    );
    assert!(matches!(
        Domain::punctured_plane(vec![c(2.0, 0.0)], 4.0).unwrap_err(),
        DomainError::CutoffTooSmall { .. }
    ));
    assert!(matches!(
        Domain::disk(1.0, vec![c(2.0, 0.0)]).unwrap_err(),
        DomainError::BadPuncture { .. }
    ));
    let d = Domain::punctured_plane(vec![c(0.5, 0.0)], 6.0).unwrap();
    assert!(d.contains(c(3.0, 2.0)));
    assert!(!d.contains(c(0.5, 0.0)));
    let disk = Domain::disk(2.0, vec![]).unwrap();
    assert!(disk.contains(c(1.9, 0.0)));
    assert!(!disk.contains(c(2.1, 0.0)));
}

#[test]
fn path_length_flat_segment_is_euclidean() {
    let data = WeierstrassData::flat(RationalMap::constant(c(1.0, 0.0)), Domain::plane()).unwrap();
    let len = path_length(&data, &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    assert!((len - 1.0).abs() < 1e-12);
}

#[test]
fn path_length_enneper_unit_segment() {
    // ∫₀¹ (1 + t²) dt = 4/3
    let len = path_length(&enneper(), &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    assert!((len - 4.0 / 3.0).abs() < 1e-10);
}

#[test]
fn path_length_is_additive_and_order_stable() {
    let data = enneper();
    let whole = path_length(&data, &[c(0.0, 0.0), c(1.0, 1.0)]).unwrap();
    let split = path_length(&data, &[c(0.0, 0.0), c(0.5, 0.5), c(1.0, 1.0)]).unwrap();
    assert!((whole - split).abs() < 1e-10);

    let o16 = path_length_with_order(&data, &[c(0.0, 0.0), c(1.0, 1.0)], 16).unwrap();
    let o32 = path_length_with_order(&data, &[c(0.0, 0.0), c(1.0, 1.0)], 32).unwrap();
    assert!((o16 - o32).abs() / o32 < 1e-8);
}

#[test]
fn path_length_logarithmic_growth_along_rays() {
    // Symmetric cube-roots-of-unity punctures: the speed decays like
    // 1/t along rays, so each decade contributes ln 10.
    let punctures = vec![c(1.0, 0.0), c(-0.5, 0.75f64.sqrt()), c(-0.5, -(0.75f64.sqrt()))];
    let data = voss(2, punctures, 6.0);
    let ln10 = std::f64::consts::LN_10;
    let l1 = path_length(&data, &[c(10.0, 0.0), c(100.0, 0.0)]).unwrap();
    let l2 = path_length(&data, &[c(100.0, 0.0), c(1000.0, 0.0)]).unwrap();
    assert!((l1 - ln10).abs() / ln10 < 0.02, "first decade {l1}");
    assert!((l2 - ln10).abs() / ln10 < 0.005, "second decade {l2}");
}

#[test]
fn path_errors() {
    let data = flat_disk();
    assert_eq!(
        path_length(&data, &[c(0.0, 0.0), c(1.5, 0.0)]).unwrap_err(),
        DomainError::PathExitsDomain
    );
    let cat = {
        let omega =
            RationalMap::new(Polynomial::one(), Polynomial::from_reals(&[0.0, 0.0, 1.0])).unwrap();
        let domain = Domain::punctured_plane(vec![c(0.0, 0.0)], 8.0).unwrap();
        WeierstrassData::new(RationalMap::identity(), omega, 2, domain).unwrap()
    };
    // Path through the puncture at the origin.
    assert!(matches!(
        path_length(&cat, &[c(-1.0, 0.0), c(1.0, 0.0)]),
        Err(DomainError::PoleOnPath) | Err(DomainError::PathExitsDomain)
    ));
}

#[test]
fn end_exponents_for_the_sharp_family() {
    // q = m + 2: every end divergent, metric complete.
    let data = voss(2, vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)], 10.0);
    let ends = end_exponents(&data);
    assert_eq!(ends.len(), 4);
    for e in &ends {
        match e.end {
            EndId::Puncture(_) => {
                assert_eq!(e.exponent, -1.0);
                assert!(e.divergent);
            }
            EndId::Infinity => {
                assert_eq!(e.exponent, -1.0);
                assert!(e.divergent);
            }
            EndId::DiskRim => unreachable!(),
        }
    }
    assert!(is_complete(&data).complete);

    // q = m + 3: the end at infinity becomes convergent.
    let data = voss(
        2,
        vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)],
        10.0,
    );
    let inf = end_exponents(&data)
        .into_iter()
        .find(|e| e.end == EndId::Infinity)
        .unwrap();
    assert_eq!(inf.exponent, -2.0);
    assert!(!inf.divergent);
    let verdict = is_complete(&data);
    assert!(!verdict.complete);
    assert_eq!(verdict.witness, Some(EndId::Infinity));
}

#[test]
fn end_exponents_catenoid_data() {
    let omega =
        RationalMap::new(Polynomial::one(), Polynomial::from_reals(&[0.0, 0.0, 1.0])).unwrap();
    let domain = Domain::punctured_plane(vec![c(0.0, 0.0)], 8.0).unwrap();
    let data = WeierstrassData::new(RationalMap::identity(), omega, 2, domain).unwrap();
    let ends = end_exponents(&data);
    let at_zero = ends.iter().find(|e| e.end == EndId::Puncture(0)).unwrap();
    assert_eq!(at_zero.exponent, -2.0);
    assert!(at_zero.divergent);
    let at_inf = ends.iter().find(|e| e.end == EndId::Infinity).unwrap();
    assert_eq!(at_inf.exponent, 0.0);
    assert!(at_inf.divergent);
    assert!(is_complete(&data).complete);

    // Radial numeric integral cross-check near the puncture:
    // speed ~ (1+t²)/t², so ∫_a^b ≈ [−1/t + t]_a^b for small radii.
    let len = path_length(&data, &[c(0.01, 0.0), c(0.1, 0.0)]).unwrap();
    let exact = (1.0 / 0.01 - 1.0 / 0.1) + (0.1 - 0.01);
    assert!((len - exact).abs() / exact < 1e-6);
}

#[test]
fn completeness_truth_table() {
    // complete ⟺ q ≤ m + 2 across the whole lattice.
    for m in 1u32..=4 {
        for q in 2usize..=(m as usize + 4) {
            let punctures: Vec<Complex64> = (0..q - 1)
                .map(|k| {
                    Complex64::from_polar(
                        1.0 + 0.2 * k as f64,
                        2.0 * std::f64::consts::PI * k as f64 / (q - 1) as f64 + 0.3,
                    )
                })
                .collect();
            let data = voss(m, punctures, 12.0);
            let verdict = is_complete(&data);
            assert_eq!(
                verdict.complete,
                q <= m as usize + 2,
                "m = {m}, q = {q} misjudged"
            );
        }
    }
}

#[test]
fn completeness_flat_plane_and_disk_rim() {
    let plane = WeierstrassData::flat(RationalMap::constant(c(1.0, 0.0)), Domain::plane()).unwrap();
    assert!(is_complete(&plane).complete);

    let disk = flat_disk();
    let verdict = is_complete(&disk);
    assert!(!verdict.complete);
    assert_eq!(verdict.witness, Some(EndId::DiskRim));
}

#[test]
fn grid_is_connected_and_exports() {
    let domain = Domain::punctured_plane(vec![c(0.6, 0.2), c(-0.7, -0.4)], 5.0).unwrap();
    let grid = SampleGrid::build(&domain, &GridParams::with_step(0.25));
    assert!(grid.len() > 100);
    assert!(grid.is_connected());

    let dir = std::env::temp_dir();
    let nodes = dir.join("wlab_grid_nodes_test.csv");
    let edges = dir.join("wlab_grid_edges_test.csv");
    grid.write_csv(&nodes, &edges).unwrap();
    let text = std::fs::read_to_string(&nodes).unwrap();
    assert!(text.starts_with("id,re,im,role"));
    assert_eq!(text.lines().count(), grid.len() + 1);
    std::fs::remove_file(nodes).ok();
    std::fs::remove_file(edges).ok();
}

#[test]
fn disk_distance_matches_euclidean_geometry() {
    let data = flat_disk();
    let grid = SampleGrid::build(data.domain(), &GridParams::with_step(0.05));
    let opts = DistanceOptions::default();
    let center = grid.nearest_node(c(0.0, 0.0));
    let d0 = boundary_distance(&data, &grid, center, &opts).unwrap();
    assert!(!d0.capped);
    assert!((d0.value - 1.0).abs() < 1e-8, "center distance {}", d0.value);

    let half = grid.nearest_node(c(0.5, 0.0));
    let dh = boundary_distance(&data, &grid, half, &opts).unwrap();
    assert!((dh.value - 0.5).abs() < 1e-8, "half-radius distance {}", dh.value);
}

#[test]
fn complete_metric_distances_are_capped() {
    // q = m + 2 = 3 with m = 1: complete, so d ≡ +∞ (capped).
    let data = voss(1, vec![c(1.0, 0.0), c(-1.0, 0.0)], 6.0);
    let grid = SampleGrid::build(data.domain(), &GridParams::with_step(0.3));
    let field = boundary_distances(&data, &grid, &DistanceOptions::default()).unwrap();
    assert!(field.capped.iter().all(|&c| c));
    assert!(field.values.iter().all(|&v| v == field.cap));
}

#[test]
fn distance_is_lipschitz_along_edges() {
    let data = voss(1, vec![c(1.0, 0.0), c(-0.8, 0.5), c(0.0, -1.1)], 8.0);
    let grid = SampleGrid::build(data.domain(), &GridParams::with_step(0.3));
    let field = boundary_distances(&data, &grid, &DistanceOptions::default()).unwrap();
    for &(a, b, _) in grid.edges().iter().step_by(7) {
        if field.capped[a] || field.capped[b] {
            continue;
        }
        let w = path_length(&data, &[grid.nodes()[a], grid.nodes()[b]]);
        let w = match w {
            Ok(w) => w,
            Err(_) => continue,
        };
        let gap = (field.values[a] - field.values[b]).abs();
        assert!(
            gap <= w * (1.0 + 1e-9) + 1e-9,
            "Lipschitz violation: gap {gap} > weight {w}"
        );
    }
}

#[test]
fn convergent_tail_matches_numeric_radial_integral() {
    // Voss m = 2, q = 5: convergent end at infinity with exponent −2.
    let punctures = vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
    let data = voss(2, punctures.clone(), 25.0);

    // Analytic tail from R, calibrated at the ray point, against the
    // numeric integral out to 100R plus the remainder from there.
    let e = -2.0;
    let radius = 12.0;
    let start = c(radius, 0.0);
    let speed_at = |z: Complex64| {
        crate::metric::conformal_factor(&data, z).unwrap().sqrt()
    };
    let tail_analytic = speed_at(start) * radius / (-e - 1.0);
    let far = 100.0 * radius;
    let numeric = path_length(&data, &[start, c(far, 0.0)]).unwrap();
    let remainder = speed_at(c(far, 0.0)) * far / (-e - 1.0);
    let combined = numeric + remainder;
    assert!(
        (tail_analytic - combined).abs() / combined < 0.01,
        "tail {tail_analytic} vs numeric {combined}"
    );

    // A convergent puncture end: ω̂ = z has a simple zero at the
    // puncture, tail ∫₀^r t dt = r²/2.
    let omega = RationalMap::from_polynomial(Polynomial::identity());
    let domain = Domain::punctured_plane(vec![c(0.0, 0.0)], 6.0).unwrap();
    let zero_data = WeierstrassData::flat(omega, domain).unwrap();
    let ends = end_exponents(&zero_data);
    let at0 = ends.iter().find(|e| e.end == EndId::Puncture(0)).unwrap();
    assert_eq!(at0.exponent, 1.0);
    assert!(!at0.divergent);
    let r = 0.05;
    let tail = speed_of(&zero_data, c(r, 0.0)) * r / (at0.exponent + 1.0);
    let numeric = path_length(&zero_data, &[c(1e-5, 0.0), c(r, 0.0)]).unwrap();
    assert!((tail - numeric).abs() / numeric < 0.01);
}

fn speed_of(data: &WeierstrassData, z: Complex64) -> f64 {
    crate::metric::conformal_factor(data, z).unwrap().sqrt()
}

#[test]
fn distance_decreases_toward_its_cutoff_limit() {
    let punctures = vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
    let data_near = voss(2, punctures.clone(), 10.0);
    let data_far = voss(2, punctures, 16.0);
    let opts = DistanceOptions::default();

    let grid_near = SampleGrid::build(data_near.domain(), &GridParams::with_step(0.4));
    let grid_far = SampleGrid::build(data_far.domain(), &GridParams::with_step(0.4));
    let p = c(0.3, 0.2);
    let d_near = boundary_distance(&data_near, &grid_near, grid_near.nearest_node(p), &opts)
        .unwrap()
        .value;
    let d_far = boundary_distance(&data_far, &grid_far, grid_far.nearest_node(p), &opts)
        .unwrap()
        .value;
    assert!(d_near.is_finite() && d_far.is_finite());
    assert!(d_far <= d_near * 1.01, "cutoff growth: {d_near} -> {d_far}");
}

#[test]
fn truncated_mode_probes_complete_metrics() {
    // Complete example: truncated-domain distances grow with the cutoff.
    let punctures = vec![c(1.0, 0.0), c(-1.0, 0.0)];
    let opts = DistanceOptions {
        tail: TailMode::Truncated,
        ..Default::default()
    };
    let mut previous = 0.0;
    for cutoff in [6.0, 12.0] {
        let data = voss(1, punctures.clone(), cutoff);
        let grid = SampleGrid::build(data.domain(), &GridParams::with_step(0.3));
        let node = grid.nearest_node(c(0.0, 0.3));
        let d = boundary_distance(&data, &grid, node, &opts).unwrap();
        assert!(!d.capped);
        assert!(d.value > previous * 1.05);
        previous = d.value;
    }
}

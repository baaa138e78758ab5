//! Metric path lengths and graph distance to the ideal boundary.

use super::{DomainError, EndId, NodeRole, SampleGrid};
use crate::domain::ends::end_exponents;
use crate::metric::{conformal_factor, MetricError, WeierstrassData};
use crate::quad::segment_arc_integral;
use crate::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Default cap standing in for +∞ distances, kept numeric for reports.
pub const DISTANCE_CAP: f64 = 1e12;

fn metric_speed(data: &WeierstrassData, z: Complex64) -> Result<Option<f64>, DomainError> {
    match conformal_factor(data, z) {
        Ok(f) => Ok(Some(f.sqrt())),
        Err(MetricError::OutsideDomain) => Err(DomainError::PathExitsDomain),
        Err(MetricError::PoleEncountered) => Ok(None),
        Err(_) => Ok(None),
    }
}

/// Adaptive composite Gauss–Legendre arc integral of `√factor |dz|`.
///
/// Subdivision is driven by interval halving, so integrands with
/// power-law blowup toward one endpoint are resolved geometrically. The
/// acceptance tolerance is floored by the cancellation noise of
/// evaluating the data on a short segment far from the origin, and a
/// panel budget bounds the total work on any call.
fn adaptive_arc(
    data: &WeierstrassData,
    a: Complex64,
    b: Complex64,
    order: usize,
    depth: usize,
    budget: &mut usize,
) -> Result<f64, DomainError> {
    let eval = |x: Complex64, y: Complex64| -> Result<Option<f64>, DomainError> {
        let mut exited = false;
        let mut poled = false;
        let r = segment_arc_integral(x, y, order, |z| match metric_speed(data, z) {
            Ok(Some(v)) => Some(v),
            Ok(None) => {
                poled = true;
                None
            }
            Err(_) => {
                exited = true;
                None
            }
        });
        if exited {
            return Err(DomainError::PathExitsDomain);
        }
        if poled {
            return Err(DomainError::PoleOnPath);
        }
        Ok(r)
    };
    let whole = eval(a, b)?.ok_or(DomainError::PoleOnPath)?;
    let mid = (a + b) * 0.5;
    let left = eval(a, mid)?.ok_or(DomainError::PoleOnPath)?;
    let right = eval(mid, b)?.ok_or(DomainError::PoleOnPath)?;
    let refined = left + right;
    *budget = budget.saturating_sub(1);
    // Noise floor: quadrature nodes on a segment of length L at distance
    // |z| from the origin carry O(ε·|z|/L) relative placement error,
    // which power-law integrands amplify one-for-one.
    let len = (b - a).norm();
    let noise = f64::EPSILON * (1.0 + a.norm().max(b.norm()) / len);
    let tol = refined.abs() * (1e-9f64).max(32.0 * noise);
    if depth == 0 || *budget == 0 || (whole - refined).abs() <= tol {
        return Ok(refined);
    }
    Ok(adaptive_arc(data, a, mid, order, depth - 1, budget)?
        + adaptive_arc(data, mid, b, order, depth - 1, budget)?)
}

/// Length of the polyline under `ds = √(conformal factor) |dz|`.
///
/// Composite Gauss–Legendre quadrature per segment; additive over
/// concatenation by construction.
pub fn path_length(data: &WeierstrassData, polyline: &[Complex64]) -> Result<f64, DomainError> {
    path_length_with_order(data, polyline, 16)
}

pub fn path_length_with_order(
    data: &WeierstrassData,
    polyline: &[Complex64],
    order: usize,
) -> Result<f64, DomainError> {
    if polyline.len() < 2 {
        return Err(DomainError::DegeneratePath);
    }
    for &p in polyline {
        if !data.domain().contains(p) {
            return Err(DomainError::PathExitsDomain);
        }
    }
    let mut total = 0.0;
    for pair in polyline.windows(2) {
        // Quadrature nodes never sit exactly on a puncture, so grazing
        // is detected geometrically.
        for &s in data.domain().punctures() {
            if point_segment_distance(s, pair[0], pair[1]) <= 1e-9 * (1.0 + s.norm()) {
                return Err(DomainError::PoleOnPath);
            }
        }
        let mut budget = 40_000;
        total += adaptive_arc(data, pair[0], pair[1], order, 30, &mut budget)?;
    }
    Ok(total)
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sqr();
    if len_sq == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len_sq;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// How boundary sentinels are seeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMode {
    /// Sentinels start at the analytically computed remaining length
    /// from the sentinel into the end; divergent ends are unreachable.
    Analytic,
    /// Sentinels start at zero: distance within the truncated domain.
    /// This is the sharpness probe for complete metrics.
    Truncated,
}

#[derive(Debug, Clone)]
pub struct DistanceOptions {
    pub cap: f64,
    pub quad_order: usize,
    pub tail: TailMode,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions {
            cap: DISTANCE_CAP,
            quad_order: 8,
            tail: TailMode::Analytic,
        }
    }
}

/// Distance-to-boundary values for every grid node.
#[derive(Debug, Clone)]
pub struct DistanceField {
    pub values: Vec<f64>,
    /// True where the value is the cap instead of a finite distance.
    pub capped: Vec<bool>,
    pub cap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryDistance {
    pub value: f64,
    pub capped: bool,
}

struct HeapEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, ties broken by node id for determinism
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Analytic remaining length from a sentinel node into its end.
///
/// Near the end the speed behaves like `c·t^e` in the radial variable;
/// `c` is calibrated from the factor at the sentinel itself, so the
/// tail is `λ(s)·r/(e+1)` into a puncture and `λ(s)·R/(−e−1)` outward.
/// `None` marks a divergent end (infinite tail).
fn sentinel_tail(
    data: &WeierstrassData,
    exponents: &[(EndId, f64, bool)],
    node: Complex64,
    end: EndId,
) -> Result<Option<f64>, DomainError> {
    match end {
        EndId::DiskRim => Ok(Some(0.0)),
        EndId::Puncture(i) => {
            let &(_, e, divergent) = exponents
                .iter()
                .find(|(id, _, _)| *id == EndId::Puncture(i))
                .expect("puncture end present");
            if divergent {
                return Ok(None);
            }
            let speed = metric_speed(data, node)?.ok_or(DomainError::PoleOnPath)?;
            let r = (node - data.domain().punctures()[i]).norm();
            Ok(Some(speed * r / (e + 1.0)))
        }
        EndId::Infinity => {
            let &(_, e, divergent) = exponents
                .iter()
                .find(|(id, _, _)| *id == EndId::Infinity)
                .expect("infinity end present");
            if divergent {
                return Ok(None);
            }
            let speed = metric_speed(data, node)?.ok_or(DomainError::PoleOnPath)?;
            // Radial coordinate measured from the puncture centroid so
            // the tail is equivariant under joint translation of the
            // configuration and the grid.
            let punctures = data.domain().punctures();
            let center = if punctures.is_empty() {
                Complex64::new(0.0, 0.0)
            } else {
                punctures.iter().sum::<Complex64>() / punctures.len() as f64
            };
            let r = (node - center).norm();
            Ok(Some(speed * r / (-e - 1.0)))
        }
    }
}

/// Distance from every node to the ideal boundary: a multi-source
/// shortest-path pass from the sentinel set, with edge weights given by
/// the metric length of the straight edge and sentinels pre-loaded with
/// their analytic tails.
///
/// When every end is divergent (complete metric) all distances are +∞;
/// they are reported as the cap with the `capped` flag set.
pub fn boundary_distances(
    data: &WeierstrassData,
    grid: &SampleGrid,
    opts: &DistanceOptions,
) -> Result<DistanceField, DomainError> {
    let exponents: Vec<(EndId, f64, bool)> = end_exponents(data)
        .into_iter()
        .map(|e| (e.end, e.exponent, e.divergent))
        .collect();

    let n = grid.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();

    for (idx, role) in grid.roles().iter().enumerate() {
        if let NodeRole::Sentinel(end) = role {
            let tail = match opts.tail {
                TailMode::Truncated => Some(0.0),
                TailMode::Analytic => sentinel_tail(data, &exponents, grid.nodes()[idx], *end)?,
            };
            if let Some(t) = tail {
                if t < dist[idx] {
                    dist[idx] = t;
                    heap.push(HeapEntry { dist: t, node: idx });
                }
            }
        }
    }

    // Lazy edge weights: metric length of each straight edge.
    let mut weights: Vec<Option<Option<f64>>> = vec![None; grid.edges().len()];
    let mut weight_of = |edge_idx: usize| -> Option<f64> {
        if weights[edge_idx].is_none() {
            let (a, b, _) = grid.edges()[edge_idx];
            let mut budget = 4_000;
            let w = adaptive_arc(
                data,
                grid.nodes()[a],
                grid.nodes()[b],
                opts.quad_order,
                20,
                &mut budget,
            )
            .ok();
            weights[edge_idx] = Some(w);
        }
        weights[edge_idx].unwrap()
    };

    while let Some(HeapEntry { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(next, edge_idx) in grid.neighbors(node) {
            if let Some(w) = weight_of(edge_idx) {
                let nd = d + w;
                if nd < dist[next] {
                    dist[next] = nd;
                    heap.push(HeapEntry {
                        dist: nd,
                        node: next,
                    });
                }
            }
        }
    }

    let capped: Vec<bool> = dist.iter().map(|d| !d.is_finite()).collect();
    let values: Vec<f64> = dist
        .iter()
        .map(|&d| if d.is_finite() { d } else { opts.cap })
        .collect();
    Ok(DistanceField {
        values,
        capped,
        cap: opts.cap,
    })
}

/// Distance from one grid node to the ideal boundary.
///
/// Returns the capped flag when every end is divergent; errors with
/// [`DomainError::DisconnectedGrid`] when the node's component contains
/// no usable sentinel although finite sentinels exist elsewhere.
pub fn boundary_distance(
    data: &WeierstrassData,
    grid: &SampleGrid,
    node: usize,
    opts: &DistanceOptions,
) -> Result<BoundaryDistance, DomainError> {
    let field = boundary_distances(data, grid, opts)?;
    let any_finite = field.capped.iter().any(|c| !c);
    if field.capped[node] && any_finite {
        return Err(DomainError::DisconnectedGrid);
    }
    Ok(BoundaryDistance {
        value: field.values[node],
        capped: field.capped[node],
    })
}

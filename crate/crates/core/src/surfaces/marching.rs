//! Marching-squares contour extraction on rectangular grids.

use crate::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// An ordered contour polyline in the parameter plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

/// Level set of the squared-modulus criterion: the contour of
/// `|field|² − 1 = 0` over the rectangular grid `xs × ys`.
pub fn extract_singular_set(
    xs: &[f64],
    ys: &[f64],
    field: impl Fn(Complex64) -> Complex64,
) -> Vec<Polyline> {
    let mut values = Vec::with_capacity(xs.len() * ys.len());
    for &y in ys {
        for &x in xs {
            values.push(field(Complex64::new(x, y)).norm_sqr() - 1.0);
        }
    }
    marching_squares(xs, ys, &values, 0.0)
}

// Edge identifiers: horizontal edge (i, j) joins (i,j)-(i+1,j);
// vertical edge (i, j) joins (i,j)-(i,j+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeId {
    H(usize, usize),
    V(usize, usize),
}

/// Contours of `values = level` over the grid (row-major, `ys.len()`
/// rows of `xs.len()` values). Segment endpoints interpolate linearly
/// along cell edges; chains are stitched into ordered polylines and
/// marked closed when they come back around. Cells with non-finite
/// corners are skipped.
pub fn marching_squares(xs: &[f64], ys: &[f64], values: &[f64], level: f64) -> Vec<Polyline> {
    assert_eq!(values.len(), xs.len() * ys.len());
    let nx = xs.len();
    let ny = ys.len();
    let at = |i: usize, j: usize| values[j * nx + i];

    // Crossing points on the shared grid edges, computed once so both
    // adjacent cells reference bit-identical coordinates.
    let mut crossings: HashMap<EdgeId, (f64, f64)> = HashMap::new();
    let interp = |a: f64, b: f64| -> f64 {
        if a == b {
            0.5
        } else {
            ((level - a) / (b - a)).clamp(0.0, 1.0)
        }
    };
    for j in 0..ny {
        for i in 0..nx - 1 {
            let (a, b) = (at(i, j), at(i + 1, j));
            if a.is_finite() && b.is_finite() && (a >= level) != (b >= level) {
                let t = interp(a, b);
                crossings.insert(EdgeId::H(i, j), (xs[i] + t * (xs[i + 1] - xs[i]), ys[j]));
            }
        }
    }
    for j in 0..ny - 1 {
        for i in 0..nx {
            let (a, b) = (at(i, j), at(i, j + 1));
            if a.is_finite() && b.is_finite() && (a >= level) != (b >= level) {
                let t = interp(a, b);
                crossings.insert(EdgeId::V(i, j), (xs[i], ys[j] + t * (ys[j + 1] - ys[j])));
            }
        }
    }

    // Per-cell segments between edge crossings.
    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let corners = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            if corners.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let mut case = 0usize;
            for (bit, v) in corners.iter().enumerate() {
                if *v >= level {
                    case |= 1 << bit;
                }
            }
            let bottom = EdgeId::H(i, j);
            let top = EdgeId::H(i, j + 1);
            let left = EdgeId::V(i, j);
            let right = EdgeId::V(i + 1, j);
            let mut push = |a: EdgeId, b: EdgeId| segments.push((a, b));
            match case {
                0 | 15 => {}
                1 | 14 => push(left, bottom),
                2 | 13 => push(bottom, right),
                3 | 12 => push(left, right),
                4 | 11 => push(right, top),
                6 | 9 => push(bottom, top),
                7 | 8 => push(left, top),
                5 | 10 => {
                    // Saddle: resolve by the cell-center average.
                    let center = corners.iter().sum::<f64>() / 4.0;
                    let center_inside = center >= level;
                    let bl_inside = case == 5;
                    if bl_inside == center_inside {
                        push(bottom, right);
                        push(left, top);
                    } else {
                        push(left, bottom);
                        push(right, top);
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    chain_segments(&segments, &crossings)
}

fn chain_segments(
    segments: &[(EdgeId, EdgeId)],
    crossings: &HashMap<EdgeId, (f64, f64)>,
) -> Vec<Polyline> {
    // Crossing-node adjacency over segment endpoints.
    let mut adjacency: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in segments.iter().enumerate() {
        adjacency.entry(*a).or_default().push(k);
        adjacency.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();

    let walk = |start_node: EdgeId, first_seg: usize, used: &mut Vec<bool>| -> Polyline {
        let (a, b) = segments[first_seg];
        used[first_seg] = true;
        let mut current = if a == start_node { b } else { a };
        let mut nodes = vec![start_node, current];
        loop {
            let next_seg = adjacency[&current].iter().copied().find(|&s| !used[s]);
            let Some(seg) = next_seg else { break };
            used[seg] = true;
            let (a, b) = segments[seg];
            current = if a == current { b } else { a };
            nodes.push(current);
        }
        let closed = nodes.len() > 2 && nodes.first() == nodes.last();
        if closed {
            nodes.pop();
        }
        Polyline {
            points: nodes.iter().map(|id| crossings[id]).collect(),
            closed,
        }
    };

    // Open chains first, started from a degree-one endpoint so each
    // chain is walked whole; remaining segments form closed loops.
    for k in 0..segments.len() {
        if used[k] {
            continue;
        }
        let (a, b) = segments[k];
        let start = if adjacency[&a].len() == 1 {
            Some(a)
        } else if adjacency[&b].len() == 1 {
            Some(b)
        } else {
            None
        };
        if let Some(start) = start {
            polylines.push(walk(start, k, &mut used));
        }
    }
    for k in 0..segments.len() {
        if !used[k] {
            polylines.push(walk(segments[k].0, k, &mut used));
        }
    }
    polylines
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, half: f64) -> Vec<f64> {
        (0..=n)
            .map(|k| -half + 2.0 * half * k as f64 / n as f64)
            .collect()
    }

    #[test]
    fn unit_circle_is_recovered() {
        let xs = grid(300, 1.5);
        let ys = xs.clone();
        let lines = extract_singular_set(&xs, &ys, |z| z);
        assert_eq!(lines.len(), 1);
        let line = &lines[0];
        assert!(line.closed);
        // Polyline within 1e-3 of the circle, and the circle covered.
        for (x, y) in &line.points {
            assert!(((x * x + y * y).sqrt() - 1.0).abs() < 1e-3);
        }
        for k in 0..64 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            let (cx, cy) = (theta.cos(), theta.sin());
            let nearest = line
                .points
                .iter()
                .map(|(x, y)| ((x - cx).powi(2) + (y - cy).powi(2)).sqrt())
                .fold(f64::MAX, f64::min);
            assert!(nearest < 2e-2, "circle not covered near angle {theta}");
        }
    }

    #[test]
    fn squared_field_gives_the_same_circle() {
        let xs = grid(300, 1.5);
        let ys = xs.clone();
        let lines = extract_singular_set(&xs, &ys, |z| z * z);
        assert_eq!(lines.len(), 1);
        for (x, y) in &lines[0].points {
            assert!(((x * x + y * y).sqrt() - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn constant_below_level_is_empty() {
        let xs = grid(50, 1.0);
        let ys = xs.clone();
        let lines = extract_singular_set(&xs, &ys, |_| Complex64::new(0.5, 0.0));
        assert!(lines.is_empty());
    }

    #[test]
    fn open_contour_is_ordered() {
        // x = 0 line across the box: an open chain.
        let xs = grid(40, 1.0);
        let ys = xs.clone();
        let mut values = Vec::new();
        for &y in &ys {
            for &x in &xs {
                let _ = y;
                values.push(x);
            }
        }
        let lines = marching_squares(&xs, &ys, &values, 0.0);
        assert_eq!(lines.len(), 1);
        let line = &lines[0];
        assert!(!line.closed);
        assert_eq!(line.points.len(), ys.len() - 1 + 1);
        // Strictly monotone in y.
        for pair in line.points.windows(2) {
            assert!(pair[1].1 > pair[0].1 || pair[1].1 < pair[0].1);
        }
        for (x, _) in &line.points {
            assert!(x.abs() < 1e-12);
        }
    }
}

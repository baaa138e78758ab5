use super::{Domain, DomainKind, EndId};
use crate::Complex64;
use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

/// Grid construction parameters.
///
/// `step` is the lattice spacing; punctures are resolved by geometric
/// rings (ratio 1/2) from roughly two lattice steps down to
/// `exclusion_radius`, which defaults to `10⁻⁶ ×` the minimal puncture
/// separation. The innermost ring around each puncture, the outer
/// cutoff circle and the disk rim are boundary sentinels.
#[derive(Debug, Clone)]
pub struct GridParams {
    pub step: f64,
    pub ring_points: usize,
    pub exclusion_radius: Option<f64>,
}

impl GridParams {
    pub fn with_step(step: f64) -> GridParams {
        GridParams {
            step,
            ring_points: 16,
            exclusion_radius: None,
        }
    }

    /// One refinement level: half the lattice step, twice the angular
    /// resolution. The exclusion radius is left alone so refinements
    /// share the analytic-tail handoff point.
    pub fn refined(&self) -> GridParams {
        GridParams {
            step: self.step * 0.5,
            ring_points: self.ring_points * 2,
            exclusion_radius: self.exclusion_radius,
        }
    }
}

/// Role of a grid node in boundary-distance queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRole {
    Interior,
    /// Boundary sentinel for the given end: innermost puncture ring,
    /// the outer-cutoff circle, or the disk rim.
    Sentinel(EndId),
}

/// A connected sampling graph of the domain.
///
/// Nodes carry positions; edges carry Euclidean lengths. Metric weights
/// are computed per query by quadrature of the relevant conformal
/// factor along each edge.
#[derive(Debug, Clone)]
pub struct SampleGrid {
    nodes: Vec<Complex64>,
    roles: Vec<NodeRole>,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, usize)>>,
    step: f64,
    exclusion_radius: f64,
}

impl SampleGrid {
    pub fn build(domain: &Domain, params: &GridParams) -> SampleGrid {
        let step = params.step;
        let ring_points = params.ring_points.max(8);
        let minsep = domain.min_puncture_separation();
        let exclusion = params
            .exclusion_radius
            .unwrap_or_else(|| 1e-6 * minsep.min(domain.scale()));

        let limit = match domain.kind() {
            DomainKind::PuncturedPlane => domain.outer_cutoff().unwrap(),
            DomainKind::Disk => domain.radius().unwrap(),
        };

        // Per-puncture outermost ring radius.
        let ring_start: Vec<f64> = domain
            .punctures()
            .iter()
            .map(|p| {
                let mut r0 = (2.0 * step).min(minsep / 3.0);
                if domain.kind() == DomainKind::Disk {
                    r0 = r0.min((limit - p.norm()) / 2.0);
                }
                r0.max(exclusion)
            })
            .collect();

        let mut nodes: Vec<Complex64> = Vec::new();
        let mut roles: Vec<NodeRole> = Vec::new();
        let mut edges: Vec<(usize, usize, f64)> = Vec::new();

        // Square lattice clipped to the domain and the ring zones.
        let n = (limit / step).floor() as i64;
        let mut lattice: HashMap<(i64, i64), usize> = HashMap::new();
        for j in -n..=n {
            for i in -n..=n {
                let z = Complex64::new(i as f64 * step, j as f64 * step);
                if z.norm() > limit - 0.7 * step {
                    continue;
                }
                if domain
                    .punctures()
                    .iter()
                    .zip(&ring_start)
                    .any(|(p, r0)| (z - p).norm() < *r0)
                {
                    continue;
                }
                lattice.insert((i, j), nodes.len());
                nodes.push(z);
                roles.push(NodeRole::Interior);
            }
        }
        for (&(i, j), &a) in lattice.iter() {
            for (di, dj) in [(1i64, 0i64), (0, 1)] {
                if let Some(&b) = lattice.get(&(i + di, j + dj)) {
                    edges.push((a, b, step));
                }
            }
        }

        let stitch = |nodes: &Vec<Complex64>,
                          edges: &mut Vec<(usize, usize, f64)>,
                          idx: usize| {
            let z = nodes[idx];
            let ci = (z.re / step).round() as i64;
            let cj = (z.im / step).round() as i64;
            for dj in -2i64..=2 {
                for di in -2i64..=2 {
                    if let Some(&b) = lattice.get(&(ci + di, cj + dj)) {
                        let d = (nodes[b] - z).norm();
                        if d <= 1.9 * step && d > 0.0 {
                            edges.push((idx, b, d));
                        }
                    }
                }
            }
        };

        // Geometric ring ladders around each puncture.
        for (pi, (&p, &r0)) in domain.punctures().iter().zip(&ring_start).enumerate() {
            let mut radii = vec![r0];
            while *radii.last().unwrap() / 2.0 > exclusion * 1.5 {
                let r = radii.last().unwrap() / 2.0;
                radii.push(r);
            }
            if (radii.last().unwrap() - exclusion).abs() > f64::EPSILON {
                radii.push(exclusion);
            }
            let levels = radii.len();
            let base = nodes.len();
            for (l, &r) in radii.iter().enumerate() {
                for t in 0..ring_points {
                    let theta = 2.0 * std::f64::consts::PI * t as f64 / ring_points as f64;
                    nodes.push(p + Complex64::from_polar(r, theta));
                    roles.push(if l == levels - 1 {
                        NodeRole::Sentinel(EndId::Puncture(pi))
                    } else {
                        NodeRole::Interior
                    });
                }
            }
            for l in 0..levels {
                for t in 0..ring_points {
                    let a = base + l * ring_points + t;
                    let b = base + l * ring_points + (t + 1) % ring_points;
                    edges.push((a, b, (nodes[a] - nodes[b]).norm()));
                    if l + 1 < levels {
                        let c = base + (l + 1) * ring_points + t;
                        edges.push((a, c, (nodes[a] - nodes[c]).norm()));
                    }
                }
            }
            // Outermost ring hooks into the lattice.
            for t in 0..ring_points {
                stitch(&nodes, &mut edges, base + t);
            }
        }

        // Outer circle (plane) or rim (disk): boundary sentinels.
        let outer_count = ((2.0 * std::f64::consts::PI * limit / step).ceil() as usize).max(32);
        let outer_role = match domain.kind() {
            DomainKind::PuncturedPlane => NodeRole::Sentinel(EndId::Infinity),
            DomainKind::Disk => NodeRole::Sentinel(EndId::DiskRim),
        };
        let outer_base = nodes.len();
        for t in 0..outer_count {
            let theta = 2.0 * std::f64::consts::PI * t as f64 / outer_count as f64;
            nodes.push(Complex64::from_polar(limit, theta));
            roles.push(outer_role);
        }
        for t in 0..outer_count {
            let a = outer_base + t;
            let b = outer_base + (t + 1) % outer_count;
            edges.push((a, b, (nodes[a] - nodes[b]).norm()));
            stitch(&nodes, &mut edges, a);
        }

        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (k, &(a, b, _)) in edges.iter().enumerate() {
            adjacency[a].push((b, k));
            adjacency[b].push((a, k));
        }

        SampleGrid {
            nodes,
            roles,
            edges,
            adjacency,
            step,
            exclusion_radius: exclusion,
        }
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn roles(&self) -> &[NodeRole] {
        &self.roles
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn exclusion_radius(&self) -> f64 {
        self.exclusion_radius
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index of the node closest to `z`.
    pub fn nearest_node(&self, z: Complex64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, n) in self.nodes.iter().enumerate() {
            let d = (n - z).norm();
            if d < best_d {
                best_d = d;
                best = k;
            }
        }
        best
    }

    /// Translates every node by `t` (edges and roles unchanged); used
    /// together with [`crate::metric::WeierstrassData::translate`].
    pub fn translated(&self, t: Complex64) -> SampleGrid {
        SampleGrid {
            nodes: self.nodes.iter().map(|z| z + t).collect(),
            roles: self.roles.clone(),
            edges: self.edges.clone(),
            adjacency: self.adjacency.clone(),
            step: self.step,
            exclusion_radius: self.exclusion_radius,
        }
    }

    /// Whether the whole graph is a single component.
    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.nodes.len()
    }

    /// Debug export: node table and edge list as CSV.
    pub fn write_csv(&self, nodes_path: &Path, edges_path: &Path) -> std::io::Result<()> {
        let mut nf = std::io::BufWriter::new(std::fs::File::create(nodes_path)?);
        writeln!(nf, "id,re,im,role")?;
        for (k, (z, role)) in self.nodes.iter().zip(&self.roles).enumerate() {
            let tag = match role {
                NodeRole::Interior => "interior".to_string(),
                NodeRole::Sentinel(EndId::Puncture(i)) => format!("puncture_{i}"),
                NodeRole::Sentinel(EndId::Infinity) => "infinity".to_string(),
                NodeRole::Sentinel(EndId::DiskRim) => "rim".to_string(),
            };
            writeln!(nf, "{},{},{},{}", k, z.re, z.im, tag)?;
        }
        let mut ef = std::io::BufWriter::new(std::fs::File::create(edges_path)?);
        writeln!(ef, "a,b,length")?;
        for &(a, b, len) in &self.edges {
            writeln!(ef, "{a},{b},{len}")?;
        }
        Ok(())
    }
}

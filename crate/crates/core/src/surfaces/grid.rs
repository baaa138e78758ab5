use crate::domain::{Domain, DomainKind};
use crate::Complex64;

/// Surface-build parameters: rectangle half-width for plane domains,
/// lattice step, quadrature order along tree edges, and the spanning
/// tree orientation knob used by invariance tests.
#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub extent: f64,
    pub step: f64,
    pub quad_order: usize,
    pub reversed_tree: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            extent: 1.5,
            step: 0.05,
            quad_order: 12,
            reversed_tree: false,
        }
    }
}

impl BuildOptions {
    pub fn with_step(step: f64) -> Self {
        BuildOptions {
            step,
            ..Default::default()
        }
    }
}

/// A rectangular parameter grid with a validity mask, triangulated
/// faces over fully valid cells, and a breadth-first spanning tree
/// rooted near the base point.
#[derive(Debug, Clone)]
pub struct BuildGrid {
    xs: Vec<f64>,
    ys: Vec<f64>,
    index: Vec<Option<usize>>,
    vertices: Vec<Complex64>,
    cells: Vec<(usize, usize)>,
    faces: Vec<[usize; 3]>,
    /// `(parent, child)` vertex pairs in traversal order; every valid
    /// vertex except the root appears exactly once as a child.
    tree: Vec<(usize, usize)>,
    root: usize,
    step: f64,
    excluded: usize,
}

impl BuildGrid {
    /// Builds the grid over the domain, dropping vertices within
    /// `2·step` of any excluded point (data poles, punctures).
    ///
    /// Returns `None` when no vertex survives or the base point's
    /// component is empty.
    pub fn build(
        domain: &Domain,
        options: &BuildOptions,
        exclusions: &[Complex64],
        base_point: Complex64,
    ) -> Option<BuildGrid> {
        let step = options.step;
        let half = match domain.kind() {
            DomainKind::PuncturedPlane => options.extent,
            DomainKind::Disk => domain.radius().unwrap() * 0.98,
        };
        let n = (half / step).round() as i64;
        let coords: Vec<f64> = (-n..=n).map(|i| i as f64 * step).collect();
        let (xs, ys) = (coords.clone(), coords);
        let (nx, ny) = (xs.len(), ys.len());

        let guard = 2.0 * step;
        let mut index = vec![None; nx * ny];
        let mut vertices = Vec::new();
        let mut cells = Vec::new();
        let mut excluded = 0usize;
        for (j, &y) in ys.iter().enumerate() {
            for (i, &x) in xs.iter().enumerate() {
                let z = Complex64::new(x, y);
                let inside = match domain.kind() {
                    DomainKind::PuncturedPlane => true,
                    DomainKind::Disk => z.norm() <= half,
                };
                let clear = exclusions.iter().all(|p| (z - p).norm() >= guard);
                if inside && clear {
                    index[j * nx + i] = Some(vertices.len());
                    vertices.push(z);
                    cells.push((i, j));
                } else if inside {
                    excluded += 1;
                }
            }
        }
        if vertices.is_empty() {
            return None;
        }

        let at = |i: usize, j: usize| index[j * nx + i];
        let mut faces = Vec::new();
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                if let (Some(bl), Some(br), Some(tr), Some(tl)) =
                    (at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1))
                {
                    faces.push([bl, br, tr]);
                    faces.push([bl, tr, tl]);
                }
            }
        }

        // Breadth-first spanning tree from the vertex nearest the base
        // point, with a deterministic neighbor order.
        let root = vertices
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (*a - base_point)
                    .norm()
                    .total_cmp(&(*b - base_point).norm())
            })
            .map(|(k, _)| k)?;
        let mut offsets: Vec<(i64, i64)> = vec![(1, 0), (-1, 0), (0, 1), (0, -1)];
        if options.reversed_tree {
            offsets.reverse();
        }
        let mut seen = vec![false; vertices.len()];
        let mut tree = Vec::with_capacity(vertices.len().saturating_sub(1));
        let mut queue = std::collections::VecDeque::new();
        seen[root] = true;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let (i, j) = cells[v];
            for &(di, dj) in &offsets {
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if ni < 0 || nj < 0 || ni >= nx as i64 || nj >= ny as i64 {
                    continue;
                }
                if let Some(w) = at(ni as usize, nj as usize) {
                    if !seen[w] {
                        seen[w] = true;
                        tree.push((v, w));
                        queue.push_back(w);
                    }
                }
            }
        }
        // Unreachable vertices (separated by exclusion holes) are kept
        // out of the tree; their faces are dropped.
        if tree.len() + 1 < vertices.len() {
            let keep: Vec<bool> = seen;
            let mut remap = vec![usize::MAX; vertices.len()];
            let mut new_vertices = Vec::new();
            let mut new_cells = Vec::new();
            for (k, &kept) in keep.iter().enumerate() {
                if kept {
                    remap[k] = new_vertices.len();
                    new_vertices.push(vertices[k]);
                    new_cells.push(cells[k]);
                }
            }
            for slot in index.iter_mut() {
                *slot = slot.and_then(|v| (remap[v] != usize::MAX).then(|| remap[v]));
            }
            faces = faces
                .into_iter()
                .filter(|f| f.iter().all(|&v| remap[v] != usize::MAX))
                .map(|f| [remap[f[0]], remap[f[1]], remap[f[2]]])
                .collect();
            let tree = tree
                .into_iter()
                .map(|(a, b)| (remap[a], remap[b]))
                .collect();
            let root = remap[root];
            return Some(BuildGrid {
                xs,
                ys,
                index,
                vertices: new_vertices,
                cells: new_cells,
                faces,
                tree,
                root,
                step,
                excluded,
            });
        }

        Some(BuildGrid {
            xs,
            ys,
            index,
            vertices,
            cells,
            faces,
            tree,
            root,
            step,
            excluded,
        })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn tree(&self) -> &[(usize, usize)] {
        &self.tree
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn excluded(&self) -> usize {
        self.excluded
    }

    pub fn vertex_at(&self, i: usize, j: usize) -> Option<usize> {
        self.index[j * self.xs.len() + i]
    }

    pub fn cell_of(&self, vertex: usize) -> (usize, usize) {
        self.cells[vertex]
    }

    /// The four lattice neighbors of a vertex, where valid.
    pub fn axis_neighbors(&self, vertex: usize) -> [Option<usize>; 4] {
        let (i, j) = self.cells[vertex];
        let nx = self.xs.len();
        let ny = self.ys.len();
        let mut out = [None; 4];
        if i + 1 < nx {
            out[0] = self.vertex_at(i + 1, j);
        }
        if i > 0 {
            out[1] = self.vertex_at(i - 1, j);
        }
        if j + 1 < ny {
            out[2] = self.vertex_at(i, j + 1);
        }
        if j > 0 {
            out[3] = self.vertex_at(i, j - 1);
        }
        out
    }

    /// Central-difference derivative pair `(X_u, X_v)` of a vector
    /// field over the grid at an interior vertex with all four
    /// neighbors valid.
    pub fn central_derivatives(
        &self,
        values: &[[f64; 4]],
        vertex: usize,
    ) -> Option<([f64; 4], [f64; 4])> {
        let [e, w, n, s] = self.axis_neighbors(vertex);
        let (e, w, n, s) = (e?, w?, n?, s?);
        let h2 = 2.0 * self.step;
        let mut du = [0.0; 4];
        let mut dv = [0.0; 4];
        for k in 0..4 {
            du[k] = (values[e][k] - values[w][k]) / h2;
            dv[k] = (values[n][k] - values[s][k]) / h2;
        }
        Some((du, dv))
    }

    /// Five-point Laplacian of one coordinate of a vector field.
    pub fn laplacian(&self, values: &[[f64; 4]], vertex: usize, coord: usize) -> Option<f64> {
        let [e, w, n, s] = self.axis_neighbors(vertex);
        let (e, w, n, s) = (e?, w?, n?, s?);
        let h_sq = self.step * self.step;
        Some(
            (values[e][coord] + values[w][coord] + values[n][coord] + values[s][coord]
                - 4.0 * values[vertex][coord])
                / h_sq,
        )
    }

    /// Maps a parameter point into the mesh by bilinear interpolation
    /// of per-vertex positions; `None` where the containing cell has
    /// dropped corners.
    pub fn interpolate(&self, positions: &[[f64; 4]], p: (f64, f64)) -> Option<[f64; 4]> {
        let (x, y) = p;
        let x0 = self.xs[0];
        let y0 = self.ys[0];
        let fi = (x - x0) / self.step;
        let fj = (y - y0) / self.step;
        let i = (fi.floor() as i64).clamp(0, self.xs.len() as i64 - 2) as usize;
        let j = (fj.floor() as i64).clamp(0, self.ys.len() as i64 - 2) as usize;
        let (tx, ty) = (fi - i as f64, fj - j as f64);
        let bl = self.vertex_at(i, j)?;
        let br = self.vertex_at(i + 1, j)?;
        let tl = self.vertex_at(i, j + 1)?;
        let tr = self.vertex_at(i + 1, j + 1)?;
        let mut out = [0.0; 4];
        for k in 0..4 {
            let bottom = positions[bl][k] * (1.0 - tx) + positions[br][k] * tx;
            let top = positions[tl][k] * (1.0 - tx) + positions[tr][k] * tx;
            out[k] = bottom * (1.0 - ty) + top * ty;
        }
        Some(out)
    }
}

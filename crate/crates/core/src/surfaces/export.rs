//! Mesh export: ASCII OBJ with per-ambient projection, plus sidecar
//! CSVs for per-vertex scalars and singular polylines.

use super::{Ambient, SurfaceError, SurfaceMesh};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Obj,
    Csv,
}

/// Declared projection used to turn 4-coordinate ambients into the
/// three OBJ coordinates. R³ and R³₁ always export verbatim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Projection {
    /// Hyperboloid to the Poincaré ball by `xᵢ/(1 + x₀)`; C²-as-R⁴
    /// drops the fourth coordinate.
    #[default]
    Ball,
    /// Drop the extra coordinate instead: `x₀` for the hyperboloid,
    /// the fourth coordinate for C².
    Drop,
}

fn project(ambient: Ambient, projection: Projection, v: &[f64; 4]) -> [f64; 3] {
    match (ambient, projection) {
        (Ambient::R3 | Ambient::R31 | Ambient::C2AsR4, _) => [v[0], v[1], v[2]],
        (Ambient::H3Minkowski, Projection::Ball) => {
            let s = 1.0 / (1.0 + v[0]);
            [v[1] * s, v[2] * s, v[3] * s]
        }
        (Ambient::H3Minkowski, Projection::Drop) => [v[1], v[2], v[3]],
    }
}

/// Writes `<stem>.obj` and/or the sidecar CSVs
/// `<stem>.scalars.csv` / `<stem>.singular.csv` next to it.
pub fn write_mesh(
    mesh: &SurfaceMesh,
    stem: &Path,
    formats: &[ExportFormat],
    projection: Projection,
) -> Result<Vec<std::path::PathBuf>, SurfaceError> {
    let mut written = Vec::new();
    for format in formats {
        match format {
            ExportFormat::Obj => {
                let path = stem.with_extension("obj");
                let mut out = std::io::BufWriter::new(std::fs::File::create(&path)?);
                writeln!(out, "# vertices: {}", mesh.vertices.len())?;
                for v in &mesh.vertices {
                    let [x, y, z] = project(mesh.ambient, projection, v);
                    writeln!(out, "v {x} {y} {z}")?;
                }
                for f in &mesh.faces {
                    writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
                }
                out.flush()?;
                written.push(path);
            }
            ExportFormat::Csv => {
                let path = stem.with_extension("scalars.csv");
                let mut out = std::io::BufWriter::new(std::fs::File::create(&path)?);
                writeln!(
                    out,
                    "vertex_id,param_re,param_im,conformal_factor,curvature,gauge_modulus"
                )?;
                for (k, z) in mesh.params.iter().enumerate() {
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        k,
                        z.re,
                        z.im,
                        mesh.conformal_factor[k],
                        mesh.curvature[k],
                        mesh.gauge_modulus[k]
                    )?;
                }
                out.flush()?;
                written.push(path);

                let path = stem.with_extension("singular.csv");
                let mut out = std::io::BufWriter::new(std::fs::File::create(&path)?);
                writeln!(out, "polyline_id,point_index,param_re,param_im,closed")?;
                for (pid, line) in mesh.singular_param.iter().enumerate() {
                    for (idx, (x, y)) in line.points.iter().enumerate() {
                        writeln!(out, "{pid},{idx},{x},{y},{}", line.closed)?;
                    }
                }
                out.flush()?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

/// Reads back a scalars sidecar:
/// `(vertex_id, param_re, param_im, conformal_factor, curvature,
/// gauge_modulus)` rows. Round-trips bit-exactly because the writer
/// uses shortest-representation float formatting.
pub fn read_scalars_csv(
    path: &Path,
) -> Result<Vec<(usize, f64, f64, f64, f64, f64)>, SurfaceError> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for line in text.lines().skip(1) {
        let mut cols = line.split(',');
        let mut next = || {
            cols.next().ok_or_else(|| {
                SurfaceError::Io(std::io::Error::new(
                    std::io::ErrorKind::InvalidData,
                    "short row",
                ))
            })
        };
        let parse_err = |_| {
            SurfaceError::Io(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                "bad number",
            ))
        };
        rows.push((
            next()?.parse::<usize>().map_err(|_| parse_err(()))?,
            next()?.parse::<f64>().map_err(|_| parse_err(()))?,
            next()?.parse::<f64>().map_err(|_| parse_err(()))?,
            next()?.parse::<f64>().map_err(|_| parse_err(()))?,
            next()?.parse::<f64>().map_err(|_| parse_err(()))?,
            next()?.parse::<f64>().map_err(|_| parse_err(()))?,
        ));
    }
    Ok(rows)
}

//! `wlab` — drives the conformal-metric laboratory from one
//! declarative JSON document: curvature comparisons, completeness and
//! Picard verification, truth-table sweeps, and surface builds.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::{Path, PathBuf};
use wlab_core::document::InputDocument;
use wlab_core::domain::{DistanceOptions, GridParams, SampleGrid, TailMode};
use wlab_core::report::{
    curvature_rows_csv, curvature_scan, CurvatureScanOptions, VerificationReport,
};
use wlab_core::surfaces::{
    build_affine, build_flat_front, build_maxface, build_minimal, BuildOptions, BuildOutput,
    ExportFormat, FrontKind, Projection,
};
use wlab_core::verify::{
    bound_scan, check_picard, exceptional_values, lattice_csv, voss_lattice, BoundScanOptions,
    ExceptionalSet,
};

#[derive(Parser)]
#[command(name = "wlab", version, about = "Conformal metrics from rational Weierstrass data: curvature bounds, exceptional values, and surface builders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare closed-form Gaussian curvature against the
    /// finite-difference oracle over a grid.
    Curvature(CurvatureArgs),
    /// Exceptional values, completeness, the Picard bound, and the
    /// curvature-bound scan.
    Verify(VerifyArgs),
    /// Completeness/Picard truth table over the sharp example family.
    VossLattice(LatticeArgs),
    /// Build a surface mesh from a front document.
    Build(BuildArgs),
}

#[derive(Args)]
struct CurvatureArgs {
    /// Input document (kind: weierstrass).
    #[arg(long)]
    input: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Lattice step of the scan grid.
    #[arg(long, default_value_t = 0.1)]
    grid_step: f64,
    /// Half-width of the scan rectangle.
    #[arg(long, default_value_t = 2.5)]
    extent: f64,
    /// Finite-difference stencil size.
    #[arg(long, default_value_t = 1e-3)]
    stencil_h: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Input document (kind: weierstrass).
    #[arg(long)]
    input: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Lattice step of the sampling grid.
    #[arg(long, default_value_t = 0.25)]
    grid_step: f64,
    /// Scan with truncated-domain distances instead of analytic tails
    /// (the sharpness probe for complete metrics).
    #[arg(long)]
    truncated: bool,
    /// Also write the sampling grid as CSV for debugging.
    #[arg(long)]
    dump_grid: bool,
}

#[derive(Args)]
struct LatticeArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 4)]
    m_max: u32,
    #[arg(long, default_value_t = 8)]
    q_max: usize,
    /// Random puncture configurations per (m, q) cell.
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct BuildArgs {
    /// Input document (kind: minimal|maxface|affine|flat_front).
    #[arg(long)]
    input: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Parameter-grid step.
    #[arg(long, default_value_t = 0.05)]
    grid_step: f64,
    /// Half-width of the parameter rectangle (plane domains).
    #[arg(long, default_value_t = 1.5)]
    extent: f64,
    /// Comma-separated outputs: obj, csv, json.
    #[arg(long, default_value = "obj,csv,json")]
    format: String,
    /// OBJ projection for 4-coordinate ambients: "ball" maps the
    /// hyperboloid to the Poincaré ball, "drop" discards the extra
    /// coordinate.
    #[arg(long, default_value = "ball")]
    projection: String,
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    configure_threads()?;
    match Cli::parse().command {
        Command::Curvature(args) => cmd_curvature(args),
        Command::Verify(args) => cmd_verify(args),
        Command::VossLattice(args) => cmd_voss_lattice(args),
        Command::Build(args) => cmd_build(args),
    }
}

/// WLAB_THREADS caps internal parallelism.
fn configure_threads() -> Result<()> {
    if let Ok(raw) = std::env::var("WLAB_THREADS") {
        let n: usize = raw
            .parse()
            .with_context(|| format!("WLAB_THREADS must be a positive integer, got {raw:?}"))?;
        if n == 0 {
            bail!("WLAB_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("thread pool already initialized")?;
    }
    Ok(())
}

/// Temp-then-rename so partial files never appear under the final name.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)
        .with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

fn ensure_out_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))
}

fn cmd_curvature(args: CurvatureArgs) -> Result<()> {
    ensure_out_dir(&args.out)?;
    let doc = InputDocument::from_path(&args.input)?;
    let data = doc.to_weierstrass()?;
    let opts = CurvatureScanOptions {
        extent: args.extent,
        step: args.grid_step,
        stencil_h: args.stencil_h,
        ..Default::default()
    };
    let (rows, summary) = curvature_scan(&data, &opts);
    write_atomic(
        &args.out.join("curvature.csv"),
        curvature_rows_csv(&rows).as_bytes(),
    )?;
    write_atomic(
        &args.out.join("curvature.json"),
        serde_json::to_string_pretty(&summary)?.as_bytes(),
    )?;
    println!(
        "curvature: {} nodes, {} compared, max relative disagreement {:.3e}",
        summary.evaluated_nodes, summary.compared_nodes, summary.max_rel_disagreement
    );
    if summary.positive_curvature_found {
        bail!("positive curvature encountered: the closed form is nonpositive by construction");
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    ensure_out_dir(&args.out)?;
    let doc = InputDocument::from_path(&args.input)?;
    let data = doc.to_weierstrass()?;
    let grid = SampleGrid::build(data.domain(), &GridParams::with_step(args.grid_step));
    if args.dump_grid {
        grid.write_csv(
            &args.out.join("grid_nodes.csv"),
            &args.out.join("grid_edges.csv"),
        )?;
    }
    let exceptional = match exceptional_values(data.gauss(), data.domain()) {
        Ok(set) => set,
        // A constant map omits everything; the enumeration degenerates
        // and the Picard check gates on nonconstancy instead.
        Err(_) => ExceptionalSet {
            values: Vec::new(),
            min_separation: None,
            approximate: false,
        },
    };
    let picard = check_picard(&data)?;
    let scan_opts = if args.truncated {
        BoundScanOptions::truncated()
    } else {
        BoundScanOptions {
            distance: DistanceOptions {
                tail: TailMode::Analytic,
                ..Default::default()
            },
        }
    };
    let scan = bound_scan(&data, &grid, &scan_opts)?;
    let report = VerificationReport::assemble(&data, exceptional, picard, scan);

    let mut csv = String::from("m,q,complete,exceptional_count,consistent\n");
    csv.push_str(&report.csv_row());
    write_atomic(&args.out.join("verify.csv"), csv.as_bytes())?;
    write_atomic(
        &args.out.join("verify.json"),
        serde_json::to_string_pretty(&report)?.as_bytes(),
    )?;
    println!(
        "verify: q = {}, complete = {}, consistent = {}, sup |K|^(1/2) d = {:.6e}{}",
        report.exceptional.q(),
        report.complete,
        report.picard.consistent,
        report.bound_scan.sup_product,
        if report.bound_scan.used_capped_distances {
            " (capped)"
        } else {
            ""
        }
    );
    if !report.picard.consistent {
        bail!("Picard-bound inconsistency: {}", report.picard.detail);
    }
    Ok(())
}

fn cmd_voss_lattice(args: LatticeArgs) -> Result<()> {
    ensure_out_dir(&args.out)?;
    let rows = voss_lattice(args.m_max, args.q_max, args.trials, args.seed)?;
    let csv = lattice_csv(&rows);
    write_atomic(&args.out.join("voss_lattice.csv"), csv.as_bytes())?;
    let mut jsonl = String::new();
    for row in &rows {
        jsonl.push_str(&serde_json::to_string(row)?);
        jsonl.push('\n');
    }
    write_atomic(&args.out.join("voss_lattice.jsonl"), jsonl.as_bytes())?;
    let inconsistent = rows.iter().filter(|r| !r.consistent).count();
    println!(
        "voss-lattice: {} rows, {} inconsistent",
        rows.len(),
        inconsistent
    );
    if inconsistent > 0 {
        bail!("{inconsistent} inconsistent rows in the truth table");
    }
    Ok(())
}

#[derive(Serialize)]
struct BuildDocument<'a> {
    kind: &'a str,
    report: &'a wlab_core::surfaces::BuildReport,
    files: Vec<String>,
    errors: Vec<String>,
}

fn cmd_build(args: BuildArgs) -> Result<()> {
    ensure_out_dir(&args.out)?;
    let doc = InputDocument::from_path(&args.input)?;
    let front = doc.to_front()?;
    let kind = front.kind();
    let options = BuildOptions {
        step: args.grid_step,
        extent: args.extent,
        ..Default::default()
    };

    let formats = parse_formats(&args.format)?;
    let projection = match args.projection.as_str() {
        "ball" => Projection::Ball,
        "drop" => Projection::Drop,
        other => bail!("unknown projection {other:?} (expected ball or drop)"),
    };
    let stem_name = match kind {
        FrontKind::Minimal => "minimal",
        FrontKind::Maxface => "maxface",
        FrontKind::Affine => "affine",
        FrontKind::FlatFront => "flat_front",
    };

    let built: std::result::Result<BuildOutput, _> = match kind {
        FrontKind::Minimal => build_minimal(&front, &options),
        FrontKind::Maxface => build_maxface(&front, &options),
        FrontKind::Affine => build_affine(&front, &options),
        FrontKind::FlatFront => build_flat_front(&front, &options),
    };
    let out = match built {
        Ok(out) => out,
        Err(err) => {
            // The error report still lands on disk for post-mortems.
            let document = BuildDocument {
                kind: stem_name,
                report: &Default::default(),
                files: Vec::new(),
                errors: vec![err.to_string()],
            };
            write_atomic(
                &args.out.join("build.json"),
                serde_json::to_string_pretty(&document)?.as_bytes(),
            )?;
            return Err(err.into());
        }
    };
    out.mesh
        .validate()
        .map_err(|e| anyhow::anyhow!("mesh invariant violated: {e}"))?;

    let mesh_formats: Vec<ExportFormat> = formats
        .iter()
        .filter_map(|f| match f.as_str() {
            "obj" => Some(ExportFormat::Obj),
            "csv" => Some(ExportFormat::Csv),
            _ => None,
        })
        .collect();
    let mut files = Vec::new();
    for written in wlab_core::surfaces::write_mesh(
        &out.mesh,
        &args.out.join(stem_name),
        &mesh_formats,
        projection,
    )? {
        files.push(written.display().to_string());
    }
    if let Some(companion) = &out.companion {
        for written in wlab_core::surfaces::write_mesh(
            companion,
            &args.out.join(format!("{stem_name}_lagrangian")),
            &mesh_formats,
            projection,
        )? {
            files.push(written.display().to_string());
        }
    }
    if formats.iter().any(|f| f == "json") {
        let document = BuildDocument {
            kind: stem_name,
            report: &out.report,
            files: files.clone(),
            errors: Vec::new(),
        };
        let path = args.out.join("build.json");
        write_atomic(&path, serde_json::to_string_pretty(&document)?.as_bytes())?;
        files.push(path.display().to_string());
    }
    println!(
        "build {stem_name}: {} vertices, {} faces, {} singular polylines -> {} file(s)",
        out.report.vertex_count,
        out.report.face_count,
        out.mesh.singular_param.len(),
        files.len()
    );
    Ok(())
}

fn parse_formats(raw: &str) -> Result<Vec<String>> {
    let mut formats = Vec::new();
    for token in raw.split(',') {
        let token = token.trim().to_lowercase();
        match token.as_str() {
            "obj" | "csv" | "json" => formats.push(token),
            "" => {}
            other => bail!("unknown format {other:?} (expected obj, csv, json)"),
        }
    }
    if formats.is_empty() {
        bail!("no output formats selected");
    }
    Ok(formats)
}

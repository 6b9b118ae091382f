//! `ifslab`: analyses of one-parameter affine IFS families from the
//! command line. Every subcommand writes its artifacts, a `report.json`
//! and a `manifest.json` into `--out-dir`, and prints a short JSON summary.

mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ifslab_core::attractor::io::{cover_to_csv, cover_to_pgm, sample_to_csv};
use ifslab_core::attractor::{chaos_game, compute_attractor, convex_hull, hausdorff, trapping_ball, PointSample};
use ifslab_core::interior::{interior_scan, nonempty_threshold_bound_2d, Interior, InteriorCertificate};
use ifslab_core::report::{AnalysisReport, CertificateKind, ScanRow, Tagged};
use ifslab_core::scan::{family_thresholds, mandelbrot_scan, ComplexFamilySpec, PlaneScanOptions};
use ifslab_core::topology::{connectivity_status, weak_threshold};
use ifslab_core::transition::{
    default_epsilon, invariance_residual, lower_transition_attractor, transition_hull, upper_transition_evidence, DEFAULT_MAX_POINTS,
};
use ifslab_core::{classify, classify::default_samples, t0_threshold, Error, OneParamFamily};
use rayon::prelude::*;
use serde_json::{json, Value};

use output::{Csv, Field, OutDir};

#[derive(Parser)]
#[command(name = "ifslab", version, about = "Analyses of one-parameter affine IFS families")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "IFSLAB_THREADS")]
    threads: Option<usize>,
    /// Directory for artifacts, report.json and manifest.json.
    #[arg(long, global = true, default_value = "ifslab-out")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FamilyArg {
    /// Family file (JSON with name, dim and members [{L, a, q}]).
    family: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Linear / quasi-linear / semi-linear / similarity / bounded flags.
    Classify(FamilyArg),
    /// Existence threshold t0 (exact for similarity families).
    T0 {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Outer cover (PGM + CSV) or chaos-game sample of A_t.
    Attractor {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        cell: f64,
        /// Use the chaos game with this many points instead of a cover.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worklist generations per level (0 = default).
        #[arg(long, default_value_t = 0)]
        max_iters: usize,
    },
    /// Connectivity status over a t grid.
    ScanConnectivity {
        #[command(flatten)]
        family: FamilyArg,
        /// `lo:hi:n` or a comma list.
        #[arg(long)]
        t_grid: String,
        #[arg(long, default_value_t = 1.0 / 256.0)]
        cell: f64,
        #[arg(long, default_value_t = 2)]
        refinements: u32,
    },
    /// Interior status over a t grid.
    ScanInterior {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        t_grid: String,
        #[arg(long, default_value_t = 1.0 / 128.0)]
        cell: f64,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
    /// Switch from strong disconnection to weak connectivity.
    WeakThreshold {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        t_grid: String,
        #[arg(long, default_value_t = 1.0 / 256.0)]
        cell: f64,
    },
    /// Threshold above which A_t has non-empty interior (rotation cone argument).
    ConeBound(FamilyArg),
    /// Lower transition attractor, nested hulls and Cauchy evidence at t0.
    Transition {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
        max_points: usize,
        /// Grid for the hull sequence (omit to skip).
        #[arg(long)]
        t_grid: Option<String>,
        /// Increasing t sequence for the Cauchy table (omit to skip).
        #[arg(long)]
        upper: Option<String>,
        #[arg(long, default_value_t = 1.0 / 512.0)]
        cell: f64,
    },
    /// Connectivity picture of {τz + c1, τ·m·z + c2} over a τ rectangle.
    Mandel {
        #[arg(long, default_value = "0,0,1,1")]
        region: String,
        #[arg(long, default_value = "128x128")]
        res: String,
        #[arg(long, default_value_t = 5)]
        budget: u32,
        #[arg(long, default_value = "mandel.pgm")]
        out: String,
        /// Fail on pixels with |τ| >= 1 instead of masking them.
        #[arg(long)]
        no_mask: bool,
        #[arg(long, default_value = "0,0")]
        c1: String,
        #[arg(long, default_value = "1,0")]
        multiplier: String,
        #[arg(long, default_value = "1,0")]
        c2: String,
    },
    /// Hausdorff distance between two CSV point sets.
    Hausdorff { a: PathBuf, b: PathBuf },
}

/// Failures split by exit code.
enum Failure {
    Usage(anyhow::Error),
    Inconsistent(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::NestingViolation { .. }) => Failure::Inconsistent(e),
            _ => Failure::Usage(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Inconsistent(e)) => {
            eprintln!("certificate inconsistency: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage(anyhow!("--threads must be positive")));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Usage(e.into()))?;
    }
    let mut out = OutDir::create(&cli.out_dir)?;
    let mut inconsistency = None;
    let (mut report, summary) = match cli.command {
        Command::Classify(f) => cmd_classify(&load(&f.family)?)?,
        Command::T0 { family, depth } => cmd_t0(&load(&family.family)?, depth)?,
        Command::Attractor { family, t, cell, points, seed, max_iters } => {
            cmd_attractor(&load(&family.family)?, t, cell, points, seed, max_iters, &mut out)?
        }
        Command::ScanConnectivity { family, t_grid, cell, refinements } => {
            cmd_scan_connectivity(&load(&family.family)?, &parse_grid(&t_grid)?, cell, refinements, &mut out)?
        }
        Command::ScanInterior { family, t_grid, cell, max_n } => {
            let (r, s, bad) = cmd_scan_interior(&load(&family.family)?, &parse_grid(&t_grid)?, cell, max_n, &mut out)?;
            inconsistency = bad;
            (r, s)
        }
        Command::WeakThreshold { family, t_grid, cell } => cmd_weak(&load(&family.family)?, &parse_grid(&t_grid)?, cell)?,
        Command::ConeBound(f) => cmd_cone(&load(&f.family)?)?,
        Command::Transition { family, epsilon, max_points, t_grid, upper, cell } => {
            let grid = t_grid.as_deref().map(parse_grid).transpose()?;
            let upper = upper.as_deref().map(parse_grid).transpose()?;
            cmd_transition(&load(&family.family)?, epsilon, max_points, grid.as_deref(), upper.as_deref(), cell, &mut out)?
        }
        Command::Mandel { region, res, budget, out: name, no_mask, c1, multiplier, c2 } => {
            let spec = ComplexFamilySpec { c1: parse_pair(&c1)?, multiplier: parse_pair(&multiplier)?, c2: parse_pair(&c2)? };
            cmd_mandel(&spec, parse_region(&region)?, parse_res(&res)?, budget, !no_mask, &name, &mut out)?
        }
        Command::Hausdorff { a, b } => cmd_hausdorff(&a, &b)?,
    };
    report.artifacts = out.names();
    out.write("report.json", report.to_json().as_bytes())?;
    out.finish()?;
    let text = serde_json::to_string_pretty(&summary).map_err(anyhow::Error::from)?;
    // a closed pipe on stdout is not an error
    let _ = writeln!(std::io::stdout(), "{text}");
    match inconsistency {
        Some(msg) => Err(Failure::Inconsistent(anyhow!(msg))),
        None => Ok(()),
    }
}

fn load(path: &Path) -> Result<OneParamFamily> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    OneParamFamily::from_json(&text).with_context(|| format!("in {}", path.display()))
}

/// `lo:hi:n` (n evenly spaced values, ends included) or `a,b,c`.
fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [lo, hi, n] => {
            let (lo, hi): (f64, f64) = (lo.trim().parse()?, hi.trim().parse()?);
            let n: usize = n.trim().parse()?;
            match n {
                0 => bail!("grid needs at least one point"),
                1 => vec![lo],
                _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
            }
        }
        [list] => list.split(',').map(|v| v.trim().parse::<f64>()).collect::<std::result::Result<_, _>>()?,
        _ => bail!("bad grid {s:?}: use lo:hi:n or a comma list"),
    };
    if grid.iter().any(|t| !t.is_finite()) {
        bail!("grid values must be finite");
    }
    Ok(grid)
}

fn parse_floats<const N: usize>(s: &str, what: &str) -> Result<[f64; N]> {
    let v: Vec<f64> = s.split(',').map(|x| x.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().with_context(|| format!("bad {what} {s:?}"))?;
    v.try_into().map_err(|_| anyhow!("{what} needs {N} comma-separated numbers"))
}

fn parse_pair(s: &str) -> Result<[f64; 2]> {
    parse_floats::<2>(s, "complex number")
}

fn parse_region(s: &str) -> Result<[f64; 4]> {
    parse_floats::<4>(s, "region")
}

fn parse_res(s: &str) -> Result<(usize, usize)> {
    let (w, h) = s.split_once('x').ok_or_else(|| anyhow!("resolution must look like 128x128"))?;
    Ok((w.trim().parse()?, h.trim().parse()?))
}

fn positive(x: f64, name: &str) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        bail!("{name} must be positive, got {x}");
    }
    Ok(())
}

fn classification_of(family: &OneParamFamily) -> Result<ifslab_core::Classification> {
    let t0 = t0_threshold(family, ifslab_core::jsr::DEFAULT_DEPTH)?;
    Ok(classify(family, &default_samples(family.dim, 0.5 * t0.t0_lo)))
}

fn base_report(command: &str, config: Value, family: &OneParamFamily) -> Result<AnalysisReport> {
    let mut r = AnalysisReport::new(command, config);
    r.family = Some(family.name.clone());
    r.classification = Some(classification_of(family)?);
    r.thresholds = family_thresholds(family)?;
    Ok(r)
}

fn cmd_classify(family: &OneParamFamily) -> Result<(AnalysisReport, Value)> {
    let c = classification_of(family)?;
    let degenerate = serde_json::to_value(c.is_degenerate)?;
    let summary = json!({
        "similarity": c.is_similarity,
        "linear": c.is_linear,
        "quasi_linear": c.is_quasi_linear,
        "semi_linear": c.is_semi_linear,
        "bounded": c.is_bounded,
        "degenerate": degenerate,
        "scaling_ratios": c.scaling_ratios,
    });
    let mut r = base_report("classify", json!({}), family)?;
    r.details = summary.clone();
    Ok((r, summary))
}

fn cmd_t0(family: &OneParamFamily, depth: usize) -> Result<(AnalysisReport, Value)> {
    let th = t0_threshold(family, depth)?;
    let summary = if th.exact {
        json!({ "t0": th.t0_lo, "exact": true })
    } else {
        json!({ "t0": [th.t0_lo, th.t0_hi], "exact": false, "jsr": th.bounds.as_ref().map(|b| json!({"lower": b.lower, "upper": b.upper, "depth": b.depth})) })
    };
    let mut r = base_report("t0", json!({ "depth": depth }), family)?;
    r.thresholds.t0 = Some(if th.exact {
        Tagged::value(CertificateKind::Exact, th.t0_lo)
    } else {
        Tagged::interval(CertificateKind::Bound, th.t0_lo, th.t0_hi)
    });
    r.details = summary.clone();
    Ok((r, summary))
}

fn cmd_attractor(family: &OneParamFamily, t: f64, cell: f64, points: Option<usize>, seed: u64, max_iters: usize, out: &mut OutDir) -> Result<(AnalysisReport, Value)> {
    positive(cell, "cell")?;
    let maps = family.instantiate(t);
    let config = json!({ "t": t, "cell": cell, "points": points, "seed": seed, "max_iters": max_iters });
    let summary = match points {
        Some(n) => {
            let sample = chaos_game(&maps, n, &[], seed)?;
            out.write("chaos.csv", sample_to_csv(&sample).as_bytes())?;
            json!({ "method": "chaos", "points": sample.points.len(), "hull": convex_hull(&sample)? })
        }
        None => {
            let trap = trapping_ball(family, t)?;
            let cover = compute_attractor(&maps, &trap, cell, max_iters)?;
            let (pgm, meta) = cover_to_pgm(&cover);
            out.write("attractor.pgm", &pgm)?;
            out.write_json("attractor.pgm.json", &meta)?;
            out.write("attractor.csv", cover_to_csv(&cover).as_bytes())?;
            json!({ "method": "cover", "cells": cover.len(), "cell": cover.cell, "slack": cover.slack, "hull": convex_hull(&cover)? })
        }
    };
    let mut r = base_report("attractor", config, family)?;
    r.details = summary.clone();
    Ok((r, summary))
}

fn cmd_scan_connectivity(family: &OneParamFamily, grid: &[f64], cell: f64, refinements: u32, out: &mut OutDir) -> Result<(AnalysisReport, Value)> {
    positive(cell, "cell")?;
    let rows = grid
        .par_iter()
        .map(|&t| connectivity_status(family, t, cell, refinements))
        .collect::<ifslab_core::Result<Vec<_>>>()?;
    let mut csv = Csv::new(&["t", "status", "components", "gap", "witness_normal_x", "witness_normal_y", "witness_offset"]);
    for s in &rows {
        let sep = s.separation.as_ref();
        csv.row(vec![
            s.t.into(),
            s.status.as_str().into(),
            s.components.into(),
            s.witness.as_ref().map(|w| w.gap()).into(),
            sep.map(|w| w.normal[0]).into(),
            sep.map(|w| w.normal[1]).into(),
            sep.map(|w| w.offset).into(),
        ]);
    }
    out.write("connectivity.csv", &csv.into_bytes())?;
    let counts = status_counts(rows.iter().map(|s| s.status.as_str()));
    let mut r = base_report("scan-connectivity", json!({ "t_grid": grid, "cell": cell, "refinements": refinements }), family)?;
    r.rows = rows.into_iter().map(|s| ScanRow { connectivity: Some(s.clone()), ..ScanRow::new(s.t) }).collect();
    Ok((r, json!({ "rows": grid.len(), "statuses": counts })))
}

fn status_counts<'a>(statuses: impl Iterator<Item = &'a str>) -> Value {
    let mut map = serde_json::Map::new();
    for s in statuses {
        let n = map.get(s).and_then(Value::as_u64).unwrap_or(0);
        map.insert(s.to_string(), json!(n + 1));
    }
    Value::Object(map)
}

fn cmd_scan_interior(family: &OneParamFamily, grid: &[f64], cell: f64, max_n: usize, out: &mut OutDir) -> Result<(AnalysisReport, Value, Option<String>)> {
    positive(cell, "cell")?;
    let scan = interior_scan(family, grid, cell, max_n)?;
    let mut csv = Csv::new(&["t", "status", "certificate_kind", "ball_cx", "ball_cy", "ball_r", "depth_n"]);
    for row in &scan.rows {
        let mut fields: Vec<Field> = vec![row.t.into(), row.status.as_str().into()];
        match &row.certificate {
            Some(InteriorCertificate::Ball { center, radius, depth }) => {
                fields.extend([
                    "ball".into(),
                    center[0].into(),
                    center.get(1).copied().into(),
                    (*radius).into(),
                    (*depth).into(),
                ]);
            }
            Some(InteriorCertificate::MeasureBound { .. }) => fields.extend(["measure_bound".into(), Field::Empty, Field::Empty, Field::Empty, Field::Empty]),
            None => fields.extend([Field::Empty, Field::Empty, Field::Empty, Field::Empty, Field::Empty]),
        }
        csv.row(fields);
    }
    out.write("interior.csv", &csv.into_bytes())?;
    let mut r = base_report("scan-interior", json!({ "t_grid": grid, "cell": cell, "max_n": max_n }), family)?;
    if let Some((lo, hi)) = scan.t2_bracket {
        r.thresholds.t2_bracket = Some(Tagged::interval(CertificateKind::Bound, lo, hi).with_note("assumes monotone interior in t"));
    }
    r.rows = scan.rows.iter().map(|s| ScanRow { interior: Some(s.clone()), ..ScanRow::new(s.t) }).collect();
    r.details = json!({ "assumes_tame": scan.assumes_tame, "inconsistency": scan.inconsistency });
    let summary = json!({
        "rows": grid.len(),
        "statuses": status_counts(scan.rows.iter().map(|s| s.status.as_str())),
        "nonempty": scan.rows.iter().filter(|s| s.status == Interior::NonEmptyCertified).count(),
        "t2_bracket": scan.t2_bracket,
    });
    Ok((r, summary, scan.inconsistency))
}

fn cmd_weak(family: &OneParamFamily, grid: &[f64], cell: f64) -> Result<(AnalysisReport, Value)> {
    positive(cell, "cell")?;
    let w = weak_threshold(family, grid, cell)?;
    let mut r = base_report("weak-threshold", json!({ "t_grid": grid, "cell": cell }), family)?;
    r.thresholds.weak_tau = Some(Tagged::interval(CertificateKind::Evidence, w.lo, w.hi).with_note("strongly disconnected below, weakly connected evidence above"));
    r.details = serde_json::to_value(&w)?;
    Ok((r, json!({ "tau": w.tau, "bracket": [w.lo, w.hi] })))
}

fn cmd_cone(family: &OneParamFamily) -> Result<(AnalysisReport, Value)> {
    let c = nonempty_threshold_bound_2d(family)?;
    let mut r = base_report("cone-bound", json!({}), family)?;
    r.thresholds.cone_bound = Some(Tagged::value(CertificateKind::Bound, c.tau).with_note("interior non-empty for t above"));
    let summary = serde_json::to_value(&c)?;
    r.details = summary.clone();
    Ok((r, summary))
}

fn cmd_transition(
    family: &OneParamFamily,
    epsilon: Option<f64>,
    max_points: usize,
    grid: Option<&[f64]>,
    upper: Option<&[f64]>,
    cell: f64,
    out: &mut OutDir,
) -> Result<(AnalysisReport, Value)> {
    positive(cell, "cell")?;
    let eps = match epsilon {
        Some(e) => e,
        None => default_epsilon(family)?,
    };
    let lower = lower_transition_attractor(family, eps, max_points)?;
    let residual = invariance_residual(&lower.points, family)?;
    out.write("lower_transition.csv", sample_to_csv(&lower).as_bytes())?;
    let mut summary = json!({ "epsilon": eps, "points": lower.points.len(), "invariance_residual": residual, "hull": convex_hull(&lower)? });
    let config = json!({ "epsilon": eps, "max_points": max_points, "t_grid": grid, "upper": upper, "cell": cell });
    let mut r = base_report("transition", config, family)?;
    if let Some(grid) = grid {
        // a nesting violation aborts with exit code 2
        let hulls = transition_hull(family, grid, cell)?;
        out.write_json("hulls.json", &hulls)?;
        summary["max_hull_excess"] = json!(hulls.max_excess);
        summary["k_star"] = serde_json::to_value(&hulls.k_star)?;
        r.rows = hulls.steps.iter().map(|s| ScanRow { hull: Some(s.hull.clone()), ..ScanRow::new(s.t) }).collect();
    }
    if let Some(seq) = upper {
        let e = upper_transition_evidence(family, seq, cell)?;
        let mut csv = Csv::new(&["t_k", "t_next", "hausdorff"]);
        for row in &e.rows {
            csv.row(vec![row.t_k.into(), row.t_next.into(), row.hausdorff.into()]);
        }
        out.write("cauchy.csv", &csv.into_bytes())?;
        summary["verdict"] = json!(e.verdict);
        summary["hull_gaps"] = json!(e.hull_gaps);
    }
    r.details = summary.clone();
    Ok((r, summary))
}

fn cmd_mandel(spec: &ComplexFamilySpec, region: [f64; 4], (w, h): (usize, usize), budget: u32, mask: bool, name: &str, out: &mut OutDir) -> Result<(AnalysisReport, Value)> {
    let options = PlaneScanOptions { budget, mask_outside: mask, ..PlaneScanOptions::default() };
    let scan = mandelbrot_scan(spec, region, w, h, &options)?;
    out.write(name, &scan.to_pgm())?;
    let counts = status_counts(scan.pixels.iter().map(|p| serde_json::to_value(p).ok().and_then(|v| v.as_str().map(str::to_owned)).map_or("?", |s| leak_status(&s))));
    let sidecar = json!({
        "region": region,
        "resolution": [w, h],
        "budget": budget,
        "overlap_depth": options.overlap_depth,
        "code_words": options.cover.max_code_words,
        "mask_outside": mask,
        "family": spec,
        "pixels": counts,
        "resolved_fraction": scan.resolved_fraction(),
        "gray_levels": { "connected-evidence": 255, "disconnected-certified": 0, "unresolved": 128, "outside": 64 },
    });
    out.write_json(&format!("{name}.json"), &sidecar)?;
    let mut r = AnalysisReport::new("mandel", json!({ "region": region, "resolution": [w, h], "budget": budget, "mask_outside": mask }));
    r.details = sidecar.clone();
    Ok((r, json!({ "pixels": counts, "resolved_fraction": scan.resolved_fraction() })))
}

/// Pixel status names are a fixed set; map them to static strings.
fn leak_status(s: &str) -> &'static str {
    match s {
        "connected-evidence" => "connected-evidence",
        "disconnected-certified" => "disconnected-certified",
        "unresolved" => "unresolved",
        _ => "outside",
    }
}

fn read_points(path: &Path) -> Result<PointSample> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| anyhow!("{}: empty file", path.display()))?;
    let dim = match header.trim() {
        "x" => 1,
        "x,y" => 2,
        other => bail!("{}: header must be `x` or `x,y`, got {other:?}", path.display()),
    };
    let mut points = Vec::new();
    for (k, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let v: Vec<f64> = line
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("{}: line {}", path.display(), k + 2))?;
        if v.len() != dim {
            bail!("{}: line {} has {} fields, expected {dim}", path.display(), k + 2, v.len());
        }
        points.push([v[0], if dim == 2 { v[1] } else { 0.0 }]);
    }
    Ok(PointSample::new(dim, points))
}

fn cmd_hausdorff(a: &Path, b: &Path) -> Result<(AnalysisReport, Value)> {
    let (pa, pb) = (read_points(a)?, read_points(b)?);
    let d = hausdorff(&pa, &pb)?;
    let summary = json!({ "hausdorff": d, "points": [pa.points.len(), pb.points.len()] });
    let mut r = AnalysisReport::new("hausdorff", json!({ "a": a, "b": b }));
    r.details = summary.clone();
    Ok((r, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.1, 0.3").unwrap(), vec![0.1, 0.3]);
        assert_eq!(parse_grid("0.2:0.9:1").unwrap(), vec![0.2]);
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a,b").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn regions_and_resolutions() {
        assert_eq!(parse_region("0,0,1,0.5").unwrap(), [0.0, 0.0, 1.0, 0.5]);
        assert!(parse_region("0,0,1").is_err());
        assert_eq!(parse_res("64x32").unwrap(), (64, 32));
        assert!(parse_res("64").is_err());
    }

    #[test]
    fn nesting_violation_maps_to_inconsistency() {
        let e = Error::NestingViolation { t: 0.5, excess: 0.1 };
        assert!(matches!(Failure::from(e), Failure::Inconsistent(_)));
        assert!(matches!(Failure::from(Error::NotBounded), Failure::Usage(_)));
    }
}

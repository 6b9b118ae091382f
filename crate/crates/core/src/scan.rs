//! Parameter scans: the τ-plane picture of two-map complex families and
//! t-grid scans of a one-parameter family.

use rayon::prelude::*;
use serde::Serialize;

use crate::attractor::io::pgm_bytes;
use crate::attractor::trap::instance_trap;
use crate::attractor::{convex_hull, trapping_ball, CoverConfig, CoverEngine};
use crate::classify::{classify, default_samples};
use crate::error::{Error, Result};
use crate::family::{AffineMap, OneParamFamily};
use crate::interior::{interior_status, measure_zero_threshold, nonempty_threshold_bound_2d, Interior};
use crate::jsr::t0_threshold;
use crate::linalg::{Matrix, Vector};
use crate::report::{AnalysisReport, CertificateKind, ScanRow, Tagged};
use crate::topology::{connectivity_lower_bound, instance_connectivity, Connectivity, ConnectivityOptions, ConnectivityStatus};

/// `{τz + c₁, τ·m·z + c₂}` with complex numbers stored as `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexFamilySpec {
    pub c1: [f64; 2],
    pub multiplier: [f64; 2],
    pub c2: [f64; 2],
}

impl Default for ComplexFamilySpec {
    /// `{τz, τz + 1}`.
    fn default() -> Self {
        Self { c1: [0.0, 0.0], multiplier: [1.0, 0.0], c2: [1.0, 0.0] }
    }
}

fn complex_matrix(z: [f64; 2]) -> Matrix {
    Matrix::from_rows(&[[z[0], -z[1]], [z[1], z[0]]]).expect("2x2")
}

impl ComplexFamilySpec {
    /// The two real affine maps for the parameter τ.
    pub fn maps(&self, tau: [f64; 2]) -> Vec<AffineMap> {
        let m = self.multiplier;
        let tau_m = [tau[0] * m[0] - tau[1] * m[1], tau[0] * m[1] + tau[1] * m[0]];
        vec![
            AffineMap::new(complex_matrix(tau), Vector::from_slice(&self.c1)),
            AffineMap::new(complex_matrix(tau_m), Vector::from_slice(&self.c2)),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PixelStatus {
    ConnectedEvidence,
    DisconnectedCertified,
    Unresolved,
    /// `|τ| ≥ 1` (or a map that does not contract); not analysed.
    Outside,
}

impl PixelStatus {
    pub fn gray(&self) -> u8 {
        match self {
            PixelStatus::ConnectedEvidence => 255,
            PixelStatus::DisconnectedCertified => 0,
            PixelStatus::Unresolved => 128,
            PixelStatus::Outside => 64,
        }
    }

    pub fn is_resolved(&self) -> bool {
        matches!(self, PixelStatus::ConnectedEvidence | PixelStatus::DisconnectedCertified)
    }
}

impl From<Connectivity> for PixelStatus {
    fn from(c: Connectivity) -> Self {
        match c {
            Connectivity::ConnectedEvidence => PixelStatus::ConnectedEvidence,
            Connectivity::DisconnectedCertified => PixelStatus::DisconnectedCertified,
            Connectivity::Unresolved => PixelStatus::Unresolved,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaneScanOptions {
    /// Cover levels per pixel, starting at trap diameter / 2⁶.
    pub budget: u32,
    /// A single-component cover stops refinement early when the two image
    /// covers share a (2k+1)² block of cells.
    pub overlap_depth: i64,
    /// Mark pixels with |τ| ≥ 1 as outside instead of failing.
    pub mask_outside: bool,
    #[serde(skip)]
    pub cover: CoverConfig,
}

impl Default for PlaneScanOptions {
    fn default() -> Self {
        // per-pixel covers only need components, so a short code suffices
        let cover = CoverConfig { max_code_words: 16, ..CoverConfig::default() };
        Self { budget: 5, overlap_depth: 2, mask_outside: true, cover }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaneScan {
    /// `[x0, y0, x1, y1]` in the τ-plane.
    pub region: [f64; 4],
    pub width: usize,
    pub height: usize,
    pub budget: u32,
    /// Row-major, row 0 at the top (largest Im τ).
    pub pixels: Vec<PixelStatus>,
}

impl PlaneScan {
    pub fn tau(&self, col: usize, row: usize) -> [f64; 2] {
        pixel_tau(self.region, self.width, self.height, col, row)
    }

    pub fn status(&self, col: usize, row: usize) -> PixelStatus {
        self.pixels[row * self.width + col]
    }

    /// Fraction of analysed (non-outside) pixels that are resolved.
    pub fn resolved_fraction(&self) -> f64 {
        let inside = self.pixels.iter().filter(|p| **p != PixelStatus::Outside).count();
        let resolved = self.pixels.iter().filter(|p| p.is_resolved()).count();
        if inside == 0 { 0.0 } else { resolved as f64 / inside as f64 }
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let gray: Vec<u8> = self.pixels.iter().map(PixelStatus::gray).collect();
        pgm_bytes(self.width, self.height, &gray)
    }
}

/// Centre of pixel (col, row).
pub fn pixel_tau(region: [f64; 4], width: usize, height: usize, col: usize, row: usize) -> [f64; 2] {
    let [x0, y0, x1, y1] = region;
    [
        x0 + (col as f64 + 0.5) * (x1 - x0) / width as f64,
        y1 - (row as f64 + 0.5) * (y1 - y0) / height as f64,
    ]
}

/// Connectivity of one τ, refining from trap diameter / 2⁶ through at
/// most `budget` levels.
pub fn pixel_status(spec: &ComplexFamilySpec, tau: [f64; 2], options: &PlaneScanOptions) -> Result<ConnectivityStatus> {
    if options.budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    if tau[0].hypot(tau[1]) >= 1.0 {
        return Err(Error::RegionOutsideDisk);
    }
    let maps = spec.maps(tau);
    let trap = instance_trap(&maps)?;
    let opts = ConnectivityOptions {
        cover: options.cover.clone(),
        image_gap: true,
        separation: false,
        early_overlap_depth: Some(options.overlap_depth),
    };
    instance_connectivity(&maps, trap, tau[0].hypot(tau[1]), trap.diameter() / 64.0, options.budget - 1, &opts)
}

pub fn mandelbrot_scan(spec: &ComplexFamilySpec, region: [f64; 4], width: usize, height: usize, options: &PlaneScanOptions) -> Result<PlaneScan> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    if !(region[2] > region[0] && region[3] > region[1]) {
        return Err(Error::InvalidArgument(format!("bad region {region:?}")));
    }
    let pixels: Vec<PixelStatus> = (0..width * height)
        .into_par_iter()
        .map(|k| {
            let tau = pixel_tau(region, width, height, k % width, k / width);
            match pixel_status(spec, tau, options) {
                Ok(s) => Ok(s.status.into()),
                Err(Error::RegionOutsideDisk) if options.mask_outside => Ok(PixelStatus::Outside),
                // e.g. a degenerate multiplier; nothing to analyse
                Err(Error::NoContractiveDepth) if options.mask_outside => Ok(PixelStatus::Outside),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    Ok(PlaneScan { region, width, height, budget: options.budget, pixels })
}

/// Which analyses [`family_scan`] runs per t.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Analyses {
    pub connectivity: bool,
    pub interior: bool,
    pub hulls: bool,
}

impl Analyses {
    pub fn all() -> Self {
        Self { connectivity: true, interior: true, hulls: true }
    }
}

/// Largest word depth tried by interior certificates in scans.
pub const SCAN_MAX_DEPTH: usize = 8;

fn scan_row(family: &OneParamFamily, t: f64, analyses: Analyses, cell: f64) -> Result<ScanRow> {
    let mut row = ScanRow::new(t);
    if analyses.connectivity || analyses.hulls {
        let trap = trapping_ball(family, t)?;
        let maps = family.instantiate(t);
        if analyses.connectivity {
            row.connectivity = Some(instance_connectivity(&maps, trap, t, cell, 0, &ConnectivityOptions::default())?);
        }
        if analyses.hulls {
            let cover = CoverEngine::new(&maps, trap, CoverConfig::default())?.cover(cell)?;
            row.hull = Some(convex_hull(&cover)?);
        }
    }
    if analyses.interior {
        row.interior = Some(interior_status(family, t, cell, SCAN_MAX_DEPTH)?);
    }
    Ok(row)
}

/// One row per t with the requested statuses, plus the family-level
/// thresholds. Rows are computed in parallel; the result does not depend
/// on the thread count.
pub fn family_scan(family: &OneParamFamily, t_grid: &[f64], analyses: Analyses, cell: f64) -> Result<AnalysisReport> {
    if !(cell > 0.0) {
        return Err(Error::InvalidArgument(format!("cell must be positive, got {cell}")));
    }
    let t0 = t0_threshold(family, crate::jsr::DEFAULT_DEPTH)?;
    if let Some(t) = t_grid.iter().find(|t| !(**t >= 0.0 && **t < t0.t0_lo)) {
        return Err(Error::InvalidArgument(format!("t = {t} is outside [0, t0)")));
    }
    let rows: Vec<ScanRow> = t_grid.par_iter().map(|&t| scan_row(family, t, analyses, cell)).collect::<Result<_>>()?;

    let config = serde_json::json!({ "t_grid": t_grid, "analyses": analyses, "cell": cell });
    let mut report = AnalysisReport::new("family-scan", config);
    report.family = Some(family.name.clone());
    report.classification = Some(classify(family, &default_samples(family.dim, 0.5 * t0.t0_lo)));
    report.thresholds = family_thresholds(family)?;
    if analyses.interior {
        report.thresholds.t2_bracket = t2_bracket(&rows);
    }
    report.rows = rows;
    Ok(report)
}

/// t₀ plus every closed-form bound that applies to the family.
pub fn family_thresholds(family: &OneParamFamily) -> Result<crate::report::Thresholds> {
    let t0 = t0_threshold(family, crate::jsr::DEFAULT_DEPTH)?;
    let mut th = crate::report::Thresholds {
        t0: Some(if t0.exact {
            Tagged::value(CertificateKind::Exact, t0.t0_lo)
        } else {
            Tagged::interval(CertificateKind::Bound, t0.t0_lo, t0.t0_hi)
        }),
        measure_bound: Some(Tagged::value(CertificateKind::Bound, measure_zero_threshold(family)).with_note("interior empty for t below")),
        ..Default::default()
    };
    if let Ok(tau) = connectivity_lower_bound(family) {
        th.connectivity_bound = Some(Tagged::value(CertificateKind::Bound, tau).with_note("connected for t above"));
    }
    if let Ok(c) = nonempty_threshold_bound_2d(family) {
        th.cone_bound = Some(Tagged::value(CertificateKind::Bound, c.tau).with_note("interior non-empty for t above"));
    }
    Ok(th)
}

/// Last certified-empty and first certified-non-empty t, if ordered.
pub fn t2_bracket(rows: &[ScanRow]) -> Option<Tagged> {
    let with = |s: Interior| rows.iter().filter(move |r| r.interior.as_ref().is_some_and(|i| i.status == s)).map(|r| r.t);
    let lo = with(Interior::EmptyCertified).fold(None, |m: Option<f64>, t| Some(m.map_or(t, |m| m.max(t))))?;
    let hi = with(Interior::NonEmptyCertified).fold(None, |m: Option<f64>, t| Some(m.map_or(t, |m| m.min(t))))?;
    (lo <= hi).then(|| Tagged::interval(CertificateKind::Bound, lo, hi).with_note("assumes monotone interior in t"))
}

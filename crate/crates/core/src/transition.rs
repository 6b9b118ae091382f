//! Bounded families at the transition point t₀: the special fixed point,
//! the lower transition attractor (orbit closure of q*), nested convex
//! hulls and evidence for a limit of A_t as t → t₀.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::attractor::hull::{convex_hull, Hull};
use crate::attractor::metric::directed_hausdorff;
use crate::attractor::trap::bounded_trap;
use crate::attractor::{from_xy, hausdorff, BoxCover, CoverConfig, CoverEngine, PointSample};
use crate::classify::{classify, default_samples, scaling_data, unique_max_ratio};
use crate::error::{Error, Result};
use crate::family::{AffineMap, OneParamFamily};
use crate::linalg::{spectral_norm, Vector};

pub const DEFAULT_MAX_POINTS: usize = 100_000;

/// Index of the unique maximal-ratio member, `q*`, and `t₀`.
pub fn special_function(family: &OneParamFamily) -> Result<(usize, Vector, f64)> {
    let (ratios, _) = scaling_data(family).map_err(|_| Error::NotBounded)?;
    let idx = unique_max_ratio(&ratios).ok_or(Error::NotBounded)?;
    let t0 = 1.0 / ratios[idx];
    if !classify(family, &default_samples(family.dim, 0.5 * t0)).is_bounded {
        return Err(Error::NotBounded);
    }
    Ok((idx, family.members[idx].q, t0))
}

/// Default dedup radius: 1e−6 times the uniform trap radius.
pub fn default_epsilon(family: &OneParamFamily) -> Result<f64> {
    let (_, _, t0) = special_function(family)?;
    Ok(1e-6 * bounded_trap(family, t0).ok_or(Error::NotBounded)?.radius)
}

/// Points within `eps` of each other are merged; lookups use a grid of
/// side `eps` and scan neighbouring buckets.
struct Dedup {
    eps: f64,
    dim: usize,
    buckets: HashMap<[i64; 3], Vec<usize>>,
    points: Vec<Vector>,
}

impl Dedup {
    fn key(&self, p: &Vector) -> [i64; 3] {
        let mut k = [0i64; 3];
        for (d, slot) in k.iter_mut().enumerate().take(self.dim) {
            *slot = (p[d] / self.eps).floor() as i64;
        }
        k
    }

    fn insert(&mut self, p: Vector) -> bool {
        let k = self.key(&p);
        let span = |d: usize| if d < self.dim { -1..=1 } else { 0..=0 };
        for dx in span(0) {
            for dy in span(1) {
                for dz in span(2) {
                    if let Some(ids) = self.buckets.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        if ids.iter().any(|&i| (self.points[i] - p).norm() <= self.eps) {
                            return false;
                        }
                    }
                }
            }
        }
        self.buckets.entry(k).or_default().push(self.points.len());
        self.points.push(p);
        true
    }
}

/// `A_* = closure ⋃ (F*)ⁿ(q*)`, F* = F_{t₀}: breadth-first orbit of q* and
/// of the fixed points of the contracting maps of F* (limits of the
/// orbit), merging points within `epsilon`.
pub fn lower_transition_attractor(family: &OneParamFamily, epsilon: f64, max_points: usize) -> Result<PointSample> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    let (_, q_star, t0) = special_function(family)?;
    let maps = family.instantiate(t0);
    let mut set = Dedup { eps: epsilon, dim: family.dim, buckets: HashMap::new(), points: Vec::new() };
    let mut frontier = Vec::new();
    let seeds = std::iter::once(q_star).chain(maps.iter().filter(|m| spectral_norm(&m.l) < 1.0).filter_map(AffineMap::fixed_point));
    for s in seeds {
        if set.insert(s) {
            frontier.push(s);
        }
    }
    while !frontier.is_empty() {
        let images: Vec<Vector> = frontier.par_iter().flat_map_iter(|p| maps.iter().map(move |m| m.apply(p))).collect();
        let mut next = Vec::new();
        for p in images {
            if set.insert(p) {
                if set.points.len() > max_points {
                    return Err(Error::BudgetExceeded(format!("lower transition attractor exceeds {max_points} points")));
                }
                next.push(p);
            }
        }
        frontier = next;
    }
    let points = set.points.iter().map(|p| p.xy()).collect();
    Ok(PointSample { dim: family.dim, points, seed: 0, weights: Vec::new() })
}

/// `hausdorff(F*(S), S)` for a finite set S.
pub fn invariance_residual(points: &[[f64; 2]], family: &OneParamFamily) -> Result<f64> {
    let (_, _, t0) = special_function(family)?;
    residual_under(points, &family.instantiate(t0), family.dim)
}

/// `hausdorff(F(S), S)` for explicit maps.
pub fn residual_under(points: &[[f64; 2]], maps: &[AffineMap], dim: usize) -> Result<f64> {
    let images: Vec<[f64; 2]> = points
        .par_iter()
        .flat_map_iter(|p| {
            let v = from_xy(dim, *p);
            maps.iter().map(move |m| m.apply(&v).xy())
        })
        .collect();
    Ok(directed_hausdorff(&images, points)?.max(directed_hausdorff(points, &images)?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HullStep {
    pub t: f64,
    pub hull: Hull,
    pub cell: f64,
    /// How far the previous hull sticks out of this one.
    pub excess_over_next: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitionHulls {
    pub steps: Vec<HullStep>,
    /// Outermost hull (the last grid value).
    pub k_star: Hull,
    pub max_excess: f64,
}

fn cover_at(family: &OneParamFamily, t: f64, cell: f64) -> Result<BoxCover> {
    let (_, _, t0) = special_function(family)?;
    let trap = bounded_trap(family, t.min(t0)).ok_or(Error::NotBounded)?;
    // near t₀ the maps barely contract; long words keep the cover tight
    let words = if family.dim == 1 { 4096 } else { 256 };
    let config = CoverConfig { max_code_words: words, ..CoverConfig::default() };
    CoverEngine::new(&family.instantiate(t), trap, config)?.cover(cell)
}

/// Hulls of the covers of `A_t` over an increasing grid; adjacent hulls
/// must nest within 2·cell (K_s ⊆ K_t for s < t).
pub fn transition_hull(family: &OneParamFamily, t_grid: &[f64], cell: f64) -> Result<TransitionHulls> {
    let (_, _, t0) = special_function(family)?;
    if t_grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) || t_grid[0] <= 0.0 || *t_grid.last().unwrap() >= t0 {
        return Err(Error::InvalidArgument("t grid must increase inside (0, t0)".into()));
    }
    let hulls: Vec<Hull> = t_grid
        .par_iter()
        .map(|&t| cover_at(family, t, cell).and_then(|c| convex_hull(&c)))
        .collect::<Result<_>>()?;
    let mut steps = Vec::with_capacity(hulls.len());
    let mut max_excess: f64 = 0.0;
    for (k, h) in hulls.iter().enumerate() {
        let excess = hulls.get(k + 1).map_or(0.0, |next| h.excess_over(next));
        max_excess = max_excess.max(excess);
        steps.push(HullStep { t: t_grid[k], hull: h.clone(), cell, excess_over_next: excess });
    }
    if let Some(bad) = steps.iter().find(|s| s.excess_over_next > 2.0 * cell) {
        return Err(Error::NestingViolation { t: bad.t, excess: bad.excess_over_next });
    }
    Ok(TransitionHulls { k_star: hulls.last().unwrap().clone(), steps, max_excess })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CauchyRow {
    pub t_k: f64,
    pub t_next: f64,
    pub hausdorff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UpperEvidence {
    pub rows: Vec<CauchyRow>,
    /// "cauchy-evidence" or "inconclusive"; never a proof.
    pub verdict: String,
    /// Hausdorff distance between conv A_{t_k} and conv A_* per t_k.
    pub hull_gaps: Vec<(f64, f64)>,
    pub covers: Vec<(f64, BoxCover)>,
}

/// Covers along `t_sequence`, successive Hausdorff distances and the
/// distance of their hulls to the hull of the lower transition attractor.
///
/// The verdict is "cauchy-evidence" when the distances never grow by more
/// than one cell and the last one is at most 5·cell.
pub fn upper_transition_evidence(family: &OneParamFamily, t_sequence: &[f64], cell: f64) -> Result<UpperEvidence> {
    let (_, _, t0) = special_function(family)?;
    if t_sequence.windows(2).any(|w| w[1] <= w[0]) || t_sequence.iter().any(|t| *t >= t0 || *t <= 0.0) {
        return Err(Error::InvalidArgument("t sequence must increase inside (0, t0)".into()));
    }
    let covers: Vec<(f64, BoxCover)> = t_sequence
        .par_iter()
        .map(|&t| cover_at(family, t, cell).map(|c| (t, c)))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for w in covers.windows(2) {
        rows.push(CauchyRow { t_k: w[0].0, t_next: w[1].0, hausdorff: hausdorff(&w[0].1, &w[1].1)? });
    }
    let lower = lower_transition_attractor(family, default_epsilon(family)?, DEFAULT_MAX_POINTS)?;
    let k_lower = convex_hull(&lower)?;
    let hull_gaps = covers
        .iter()
        .map(|(t, c)| Ok((*t, convex_hull(c)?.hausdorff(&k_lower))))
        .collect::<Result<Vec<_>>>()?;
    let monotone = rows.windows(2).all(|w| w[1].hausdorff <= w[0].hausdorff + cell);
    let small = rows.last().map_or(true, |r| r.hausdorff <= 5.0 * cell);
    let verdict = if monotone && small { "cauchy-evidence" } else { "inconclusive" };
    Ok(UpperEvidence { rows, verdict: verdict.into(), hull_gaps, covers })
}

//! Connectivity of attractors from outer covers: components, certified
//! disconnection, separating lines, weak components and thresholds.
//!
//! Every certificate here rests on one fact: the cover contains A. If the
//! cover splits into pieces with a positive gap and A is known to meet two
//! of them, A is disconnected. A single-component cover is only evidence.

use serde::Serialize;

use crate::attractor::hull::polygon_hull;
use crate::attractor::{trapping_ball, Ball, BoxCover, CoverConfig, CoverEngine};
use crate::classify::{classify, default_samples, scaling_data};
use crate::error::{Error, Result};
use crate::family::{AffineMap, OneParamFamily};
use crate::jsr::{t0_threshold, DEFAULT_DEPTH};
use crate::linalg::Vector;

/// Gap searches stop after this many rings of cells and report the bound.
const GAP_RINGS: i64 = 64;
/// Above this many vertex pairs, separating directions are sampled.
const MAX_DIRECTION_PAIRS: usize = 40_000;
const FALLBACK_DIRECTIONS: usize = 4096;
const ANGLE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentSet {
    /// Sorted cells of each component, components ordered by first cell.
    pub components: Vec<Vec<[i64; 2]>>,
    /// Smallest distance between two components (a lower bound when the
    /// components are more than 64 cells apart); `None` for one component.
    pub gap: Option<f64>,
}

impl ComponentSet {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

fn neighbours(dim: usize, c: [i64; 2]) -> Vec<[i64; 2]> {
    if dim == 1 {
        return vec![[c[0] - 1, 0], [c[0] + 1, 0]];
    }
    let mut out = Vec::with_capacity(8);
    for dx in -1..=1 {
        for dy in -1..=1 {
            if dx != 0 || dy != 0 {
                out.push([c[0] + dx, c[1] + dy]);
            }
        }
    }
    out
}

/// Bounding boxes up to this many cells get a dense position table.
const DENSE_LIMIT: i64 = 1 << 24;

/// Position of a cell in a sorted cell list.
struct CellIndex<'a> {
    cells: &'a [[i64; 2]],
    lo: [i64; 2],
    w: i64,
    h: i64,
    /// Position + 1, 0 when absent; empty when the box is too large.
    dense: Vec<u32>,
}

impl<'a> CellIndex<'a> {
    fn new(cells: &'a [[i64; 2]]) -> Self {
        let mut idx = CellIndex { cells, lo: [0, 0], w: 0, h: 0, dense: Vec::new() };
        let (Some(first), Some(last)) = (cells.first(), cells.last()) else { return idx };
        let (y0, y1) = cells.iter().fold((i64::MAX, i64::MIN), |(a, b), c| (a.min(c[1]), b.max(c[1])));
        let (w, h) = (last[0] - first[0] + 1, y1 - y0 + 1);
        if w.saturating_mul(h) <= DENSE_LIMIT {
            idx.lo = [first[0], y0];
            idx.w = w;
            idx.h = h;
            idx.dense = vec![0; (w * h) as usize];
            for (k, c) in cells.iter().enumerate() {
                idx.dense[((c[1] - y0) * w + c[0] - first[0]) as usize] = k as u32 + 1;
            }
        }
        idx
    }

    #[inline]
    fn find(&self, c: [i64; 2]) -> Option<usize> {
        if self.dense.is_empty() {
            return self.cells.binary_search(&c).ok();
        }
        let (x, y) = (c[0] - self.lo[0], c[1] - self.lo[1]);
        if x < 0 || y < 0 || x >= self.w || y >= self.h {
            return None;
        }
        self.dense[(y * self.w + x) as usize].checked_sub(1).map(|k| k as usize)
    }

    #[inline]
    fn contains(&self, c: [i64; 2]) -> bool {
        self.find(c).is_some()
    }
}

/// Component label of every cell (8-adjacency in 2-D).
fn label_cells(dim: usize, cells: &[[i64; 2]]) -> (Vec<usize>, usize) {
    let index = CellIndex::new(cells);
    let mut label = vec![usize::MAX; cells.len()];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..cells.len() {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = count;
        stack.push(start);
        while let Some(k) = stack.pop() {
            for n in neighbours(dim, cells[k]) {
                if let Some(m) = index.find(n) {
                    if label[m] == usize::MAX {
                        label[m] = count;
                        stack.push(m);
                    }
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// Distance between two closed cells of size `h`.
fn cell_distance(a: [i64; 2], b: [i64; 2], h: f64) -> f64 {
    let dx = ((a[0] - b[0]).abs() - 1).max(0) as f64;
    let dy = ((a[1] - b[1]).abs() - 1).max(0) as f64;
    h * dx.hypot(dy)
}

/// Distance from cell `c` to the nearest cell accepted by `hit`, searching
/// at most [`GAP_RINGS`] rings. Once no closer cell than `cap` can remain,
/// or the rings run out, a lower bound is returned instead.
fn nearest_cell(dim: usize, c: [i64; 2], h: f64, cap: f64, mut hit: impl FnMut([i64; 2]) -> bool) -> f64 {
    let mut best = f64::INFINITY;
    for r in 0..=GAP_RINGS {
        let bound = (r - 1).max(0) as f64 * h;
        if best <= bound {
            return best;
        }
        if bound >= cap {
            return bound;
        }
        let mut visit = |n: [i64; 2]| {
            if hit(n) {
                best = best.min(cell_distance(c, n, h));
            }
        };
        if r == 0 {
            visit(c);
        } else if dim == 1 {
            visit([c[0] - r, 0]);
            visit([c[0] + r, 0]);
        } else {
            for i in -r..=r {
                visit([c[0] + i, c[1] - r]);
                visit([c[0] + i, c[1] + r]);
            }
            for j in -r + 1..r {
                visit([c[0] - r, c[1] + j]);
                visit([c[0] + r, c[1] + j]);
            }
        }
    }
    best.min(GAP_RINGS as f64 * h)
}

/// Connected components of a cover.
pub fn components(cover: &BoxCover) -> Result<ComponentSet> {
    if cover.is_empty() {
        return Err(Error::EmptyInput);
    }
    let cells = &cover.cells;
    let (label, count) = label_cells(cover.dim, cells);
    let mut comps = vec![Vec::new(); count];
    for (k, c) in cells.iter().enumerate() {
        comps[label[k]].push(*c);
    }
    let gap = (count > 1).then(|| {
        let index = CellIndex::new(cells);
        let mut best = f64::INFINITY;
        for (k, &c) in cells.iter().enumerate() {
            let boundary = neighbours(cover.dim, c).iter().any(|n| !index.contains(*n));
            if !boundary {
                continue;
            }
            let own = label[k];
            let d = nearest_cell(cover.dim, c, cover.cell, best, |n| index.find(n).is_some_and(|m| label[m] != own));
            best = best.min(d);
        }
        best
    });
    Ok(ComponentSet { components: comps, gap })
}

/// Distance between two sorted cell sets (0 when they share or touch a
/// cell; a lower bound beyond 64 cells).
pub fn cell_set_gap(dim: usize, a: &[[i64; 2]], b: &[[i64; 2]], h: f64) -> f64 {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let (small_index, large_index) = (CellIndex::new(small), CellIndex::new(large));
    if small.iter().any(|&c| large_index.contains(c) || neighbours(dim, c).iter().any(|&n| large_index.contains(n))) {
        return 0.0;
    }
    // the nearest pair always involves a boundary cell of the smaller set
    let mut best = f64::INFINITY;
    for &c in small.iter().filter(|&&c| neighbours(dim, c).iter().any(|&n| !small_index.contains(n))) {
        best = best.min(nearest_cell(dim, c, h, best, |n| large_index.contains(n)));
        if best == 0.0 {
            break;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Separating lines

/// A line `⟨normal, x⟩ = offset` whose open strip of half-width `margin`
/// meets no cell, with cells on both sides.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationWitness {
    pub normal: [f64; 2],
    pub offset: f64,
    pub margin: f64,
    /// Cells below and above the line.
    pub side_counts: [usize; 2],
}

/// Best split of connected pieces (given by hull vertices) by a line:
/// `(normal, offset, margin, above)` with `above[k]` the side of piece k.
pub fn separate_pieces(dim: usize, pieces: &[Vec<[f64; 2]>]) -> Option<([f64; 2], f64, f64, Vec<bool>)> {
    if pieces.len() < 2 {
        return None;
    }
    let dirs = if dim == 1 { vec![0.0] } else { candidate_angles(pieces) };
    let mut best: Option<([f64; 2], f64, f64, Vec<bool>)> = None;
    let mut spans: Vec<(f64, f64, usize)> = Vec::with_capacity(pieces.len());
    for a in dirs {
        let u = [a.cos(), a.sin()];
        spans.clear();
        for (k, p) in pieces.iter().enumerate() {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for v in p {
                let s = u[0] * v[0] + u[1] * v[1];
                lo = lo.min(s);
                hi = hi.max(s);
            }
            spans.push((lo, hi, k));
        }
        spans.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.2.cmp(&y.2)));
        let mut reach = spans[0].1;
        for w in 1..spans.len() {
            let gap = spans[w].0 - reach;
            if gap > 0.0 && best.as_ref().map_or(true, |b| 0.5 * gap > b.2) {
                let mut above = vec![false; pieces.len()];
                for s in &spans[w..] {
                    above[s.2] = true;
                }
                best = Some((u, reach + 0.5 * gap, 0.5 * gap, above));
            }
            reach = reach.max(spans[w].1);
        }
    }
    best
}

fn norm_angle(dx: f64, dy: f64) -> Option<f64> {
    if dx == 0.0 && dy == 0.0 {
        return None;
    }
    Some(dy.atan2(dx).rem_euclid(std::f64::consts::PI))
}

/// Axis directions, hull-edge normals, directions along and across
/// segments joining vertices of different pieces, and midpoints between
/// consecutive critical angles (all modulo π).
fn candidate_angles(pieces: &[Vec<[f64; 2]>]) -> Vec<f64> {
    use std::f64::consts::{FRAC_PI_2, PI};
    let mut angles = vec![0.0, FRAC_PI_2];
    for p in pieces {
        let n = p.len();
        for k in 0..n {
            let (a, b) = (p[k], p[(k + 1) % n]);
            if let Some(t) = norm_angle(-(b[1] - a[1]), b[0] - a[0]) {
                angles.push(t);
            }
        }
    }
    let total: usize = pieces.iter().map(Vec::len).sum();
    if total * total > MAX_DIRECTION_PAIRS {
        angles.extend((0..FALLBACK_DIRECTIONS).map(|k| PI * k as f64 / FALLBACK_DIRECTIONS as f64));
    } else {
        for (i, p) in pieces.iter().enumerate() {
            for q in &pieces[i + 1..] {
                for a in p {
                    for b in q {
                        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                        angles.extend(norm_angle(dx, dy));
                        angles.extend(norm_angle(-dy, dx));
                    }
                }
            }
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() <= ANGLE_TOL);
    let n = angles.len();
    let mut mids: Vec<f64> = (0..n)
        .map(|k| {
            let next = if k + 1 < n { angles[k + 1] } else { angles[0] + PI };
            (0.5 * (angles[k] + next)).rem_euclid(PI)
        })
        .collect();
    angles.append(&mut mids);
    angles
}

/// Hull vertices of a group of cells (outer cell corners).
fn piece_vertices(dim: usize, h: f64, cells: &[[i64; 2]]) -> Vec<[f64; 2]> {
    let sub = BoxCover::from_cells(dim, h, cells.to_vec());
    let pts = crate::attractor::hull::HullInput::hull_points(&sub);
    if dim == 1 {
        let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        vec![[lo, 0.0], [hi, 0.0]]
    } else {
        polygon_hull(&pts)
    }
}

fn witness_from(
    comps: &[Vec<[i64; 2]>],
    (normal, offset, margin, above): ([f64; 2], f64, f64, Vec<bool>),
) -> SeparationWitness {
    let mut side_counts = [0, 0];
    for (c, up) in comps.iter().zip(&above) {
        side_counts[*up as usize] += c.len();
    }
    SeparationWitness { normal, offset, margin, side_counts }
}

/// A maximal-margin line separating the cover, if one exists.
pub fn strongly_disconnected(cover: &BoxCover) -> Result<Option<SeparationWitness>> {
    let comps = components(cover)?.components;
    let pieces: Vec<Vec<[f64; 2]>> = comps.iter().map(|c| piece_vertices(cover.dim, cover.cell, c)).collect();
    Ok(separate_pieces(cover.dim, &pieces).map(|s| witness_from(&comps, s)))
}

/// Weak components: maximal subsets no line separates. Groups of connected
/// components are split recursively along separating lines; a group that
/// no line splits is weakly connected.
pub fn weak_components(cover: &BoxCover) -> Result<Vec<Vec<[i64; 2]>>> {
    let comps = components(cover)?.components;
    let pieces: Vec<Vec<[f64; 2]>> = comps.iter().map(|c| piece_vertices(cover.dim, cover.cell, c)).collect();
    let mut done: Vec<Vec<usize>> = Vec::new();
    let mut todo: Vec<Vec<usize>> = vec![(0..comps.len()).collect()];
    while let Some(group) = todo.pop() {
        let sub: Vec<Vec<[f64; 2]>> = group.iter().map(|&k| pieces[k].clone()).collect();
        match separate_pieces(cover.dim, &sub) {
            Some((_, _, _, above)) => {
                let (hi, lo): (Vec<_>, Vec<_>) = group.iter().zip(&above).partition(|(_, up)| **up);
                todo.push(lo.into_iter().map(|(k, _)| *k).collect());
                todo.push(hi.into_iter().map(|(k, _)| *k).collect());
            }
            None => done.push(group),
        }
    }
    let mut out: Vec<Vec<[i64; 2]>> = done
        .into_iter()
        .map(|g| {
            let mut cells: Vec<[i64; 2]> = g.iter().flat_map(|&k| comps[k].iter().copied()).collect();
            cells.sort_unstable();
            cells
        })
        .collect();
    out.sort();
    debug_assert_eq!(out.iter().map(Vec::len).sum::<usize>(), cover.len());
    Ok(out)
}

// ---------------------------------------------------------------------------
// Connectivity status

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Connectivity {
    DisconnectedCertified,
    ConnectedEvidence,
    Unresolved,
}

impl Connectivity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Connectivity::DisconnectedCertified => "disconnected-certified",
            Connectivity::ConnectedEvidence => "connected-evidence",
            Connectivity::Unresolved => "unresolved",
        }
    }
}

/// What certified a disconnection.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DisconnectionWitness {
    /// The cover has components at distance ≥ `gap` and A meets two of them.
    ComponentGap { gap: f64, components: usize },
    /// Outer covers of `f₁(A)` and `f₂(A)` are at distance ≥ `gap`.
    ImageGap { gap: f64 },
}

impl DisconnectionWitness {
    pub fn gap(&self) -> f64 {
        match self {
            DisconnectionWitness::ComponentGap { gap, .. } | DisconnectionWitness::ImageGap { gap } => *gap,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectivityStatus {
    pub t: f64,
    pub status: Connectivity,
    /// Refinements done after the starting cell (0 = starting cell).
    pub refinement_level: u32,
    pub cell: f64,
    pub components: usize,
    pub witness: Option<DisconnectionWitness>,
    pub separation: Option<SeparationWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConnectivityOptions {
    pub cover: CoverConfig,
    /// Use the two-map image-gap certificate when N = 2.
    pub image_gap: bool,
    /// Compute a separating line for certified covers with few components.
    pub separation: bool,
    /// Stop refining at a single-component cover whose first-letter image
    /// covers overlap in a block of (2k+1)ᵈ cells, k the given depth.
    pub early_overlap_depth: Option<i64>,
}

impl Default for ConnectivityOptions {
    fn default() -> Self {
        Self { cover: CoverConfig::default(), image_gap: true, separation: true, early_overlap_depth: None }
    }
}

/// Fixed points of the maps and their images under short words; all lie in A.
pub fn known_points(maps: &[AffineMap]) -> Vec<Vector> {
    let mut pts: Vec<Vector> = maps.iter().filter_map(|m| m.fixed_point()).collect();
    let mut frontier = pts.clone();
    while !frontier.is_empty() && pts.len() * maps.len() <= 256 {
        frontier = frontier.iter().flat_map(|p| maps.iter().map(move |m| m.apply(p))).collect();
        pts.extend(frontier.iter().copied());
    }
    pts
}

/// Component labels of the known points that the cover contains.
fn labels_of_points(cover: &BoxCover, label: &[usize], pts: &[Vector]) -> Vec<usize> {
    let h = cover.cell;
    let tol = 1e-9 * h;
    let mut out = Vec::new();
    for p in pts {
        let xy = p.xy();
        let xs = ((xy[0] - tol) / h).floor() as i64..=((xy[0] + tol) / h).floor() as i64;
        let ys = if cover.dim == 1 { 0..=0 } else { ((xy[1] - tol) / h).floor() as i64..=((xy[1] + tol) / h).floor() as i64 };
        'found: for i in xs {
            for j in ys.clone() {
                if let Ok(k) = cover.cells.binary_search(&[i, j]) {
                    out.push(label[k]);
                    break 'found;
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Checks one cover for a disconnection certificate.
/// First-letter image covers, computed at most once per level.
type Images = Option<Vec<Vec<[i64; 2]>>>;

fn images<'a>(engine: &CoverEngine, cover: &BoxCover, slot: &'a mut Images) -> &'a [Vec<[i64; 2]>] {
    slot.get_or_insert_with(|| engine.first_letter_images(cover))
}

fn certify(engine: &CoverEngine, cover: &BoxCover, known: &[Vector], opts: &ConnectivityOptions, slot: &mut Images) -> (usize, Option<DisconnectionWitness>) {
    let (label, count) = label_cells(cover.dim, &cover.cells);
    if count >= 2 && labels_of_points(cover, &label, known).len() >= 2 {
        let gap = components(cover).ok().and_then(|c| c.gap).unwrap_or(cover.cell);
        return (count, Some(DisconnectionWitness::ComponentGap { gap, components: count }));
    }
    if opts.image_gap && engine.maps().len() == 2 {
        let images = images(engine, cover, slot);
        let gap = cell_set_gap(cover.dim, &images[0], &images[1], cover.cell);
        if gap > 0.0 {
            return (count, Some(DisconnectionWitness::ImageGap { gap }));
        }
    }
    (count, None)
}

/// Whether the first-letter image covers are linked into one group by
/// overlaps containing a full block of radius `depth` around some cell.
fn images_overlap_deeply(engine: &CoverEngine, cover: &BoxCover, depth: i64, slot: &mut Images) -> bool {
    let images = images(engine, cover, slot);
    let n = images.len();
    let dim = cover.dim;
    let deep = |a: &[[i64; 2]], b: &[[i64; 2]]| {
        let (ia, ib) = (CellIndex::new(a), CellIndex::new(b));
        let both = |c: [i64; 2]| ia.contains(c) && ib.contains(c);
        let span = if dim == 1 { 0 } else { depth };
        a.iter().any(|&c| (-depth..=depth).all(|dx| (-span..=span).all(|dy| both([c[0] + dx, c[1] + dy]))))
    };
    let mut group: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if group[i] != group[j] && deep(&images[i], &images[j]) {
                let (from, to) = (group[j], group[i]);
                group.iter_mut().filter(|g| **g == from).for_each(|g| *g = to);
            }
        }
    }
    group.iter().all(|g| *g == group[0])
}

/// Connectivity of one instance, refining from `cell_start` at most
/// `max_refinements` times.
pub fn instance_connectivity(
    maps: &[AffineMap],
    trap: Ball,
    t: f64,
    cell_start: f64,
    max_refinements: u32,
    opts: &ConnectivityOptions,
) -> Result<ConnectivityStatus> {
    let engine = CoverEngine::new(maps, trap, opts.cover.clone())?;
    let known = known_points(maps);
    let mut cover = engine.cover(cell_start)?;
    let mut level = 0;
    loop {
        let mut slot: Images = None;
        let (count, witness) = certify(&engine, &cover, &known, opts, &mut slot);
        if let Some(w) = witness {
            let separation = if opts.separation && count <= 64 { strongly_disconnected(&cover)? } else { None };
            return Ok(ConnectivityStatus {
                t,
                status: Connectivity::DisconnectedCertified,
                refinement_level: level,
                cell: cover.cell,
                components: count,
                witness: Some(w),
                separation,
            });
        }
        let mut overlapping = || opts.early_overlap_depth.is_some_and(|k| images_overlap_deeply(&engine, &cover, k, &mut slot));
        if level == max_refinements || (count == 1 && overlapping()) {
            let status = if count == 1 { Connectivity::ConnectedEvidence } else { Connectivity::Unresolved };
            return Ok(ConnectivityStatus { t, status, refinement_level: level, cell: cover.cell, components: count, witness: None, separation: None });
        }
        cover = engine.refine(&cover)?;
        level += 1;
    }
}

/// Connectivity of `A_t` for a family.
pub fn connectivity_status(family: &OneParamFamily, t: f64, cell_start: f64, max_refinements: u32) -> Result<ConnectivityStatus> {
    let trap = trapping_ball(family, t)?;
    instance_connectivity(&family.instantiate(t), trap, t, cell_start, max_refinements, &ConnectivityOptions::default())
}

/// τ̄ with A_t connected for every t ∈ (τ̄, t₀): `(1 + r_min^d)^{−1/d}·t₀`
/// for ratios normalised so the largest is 1.
pub fn connectivity_lower_bound(family: &OneParamFamily) -> Result<f64> {
    let (ratios, argmax) = scaling_data(family)?;
    let r_max = ratios[argmax];
    let r_min = ratios.iter().copied().fold(f64::INFINITY, f64::min) / r_max;
    let d = family.dim as f64;
    Ok((1.0 + r_min.powf(d)).powf(-1.0 / d) / r_max)
}

// ---------------------------------------------------------------------------
// Weak-connectivity threshold

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakProbe {
    pub t: f64,
    /// A separating line certified for A_t.
    pub strongly_disconnected: bool,
    pub margin: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakThreshold {
    pub tau: f64,
    pub lo: f64,
    pub hi: f64,
    pub probes: Vec<WeakProbe>,
}

/// Whether A_t is certifiably strongly disconnected: a line separates the
/// cover and known points of A lie on both sides.
pub fn probe_strong_disconnection(family: &OneParamFamily, t: f64, cell: f64) -> Result<WeakProbe> {
    let maps = family.instantiate(t);
    let trap = trapping_ball(family, t)?;
    let engine = CoverEngine::new(&maps, trap, CoverConfig::default())?;
    let cover = engine.cover(cell)?;
    let comps = components(&cover)?.components;
    let pieces: Vec<Vec<[f64; 2]>> = comps.iter().map(|c| piece_vertices(cover.dim, cover.cell, c)).collect();
    let certified = separate_pieces(cover.dim, &pieces).and_then(|(n, off, margin, _)| {
        let sides: Vec<bool> = known_points(&maps)
            .iter()
            .map(|p| {
                let xy = p.xy();
                n[0] * xy[0] + n[1] * xy[1] > off
            })
            .collect();
        (sides.iter().any(|s| *s) && sides.iter().any(|s| !*s)).then_some(margin)
    });
    Ok(WeakProbe { t, strongly_disconnected: certified.is_some(), margin: certified })
}

/// Bisection over a sorted grid for the switch from strong disconnection
/// (small t) to weak-connectivity evidence (large t).
pub fn weak_threshold(family: &OneParamFamily, t_grid: &[f64], cell: f64) -> Result<WeakThreshold> {
    if t_grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    let t0 = t0_threshold(family, DEFAULT_DEPTH)?;
    let c = classify(family, &default_samples(family.dim, 0.5 * t0.t0_lo));
    if !c.is_semi_linear || c.is_linear {
        return Err(Error::NotApplicable("weak threshold needs a semi-linear, non-linear family".into()));
    }
    let mut grid: Vec<f64> = t_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut probes: Vec<WeakProbe> = Vec::new();
    let mut probe = |k: usize| -> Result<bool> {
        let p = probe_strong_disconnection(family, grid[k], cell)?;
        let s = p.strongly_disconnected;
        probes.push(p);
        Ok(s)
    };
    // invariant: grid[..lo] disconnected, grid[hi..] not
    let (mut lo, mut hi) = (0, grid.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if probe(mid)? {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    probes.sort_by(|a, b| a.t.total_cmp(&b.t));
    let bracket_lo = if lo == 0 { 0.0 } else { grid[lo - 1] };
    let bracket_hi = if lo == grid.len() { t0.t0_hi } else { grid[lo] };
    let tau = if lo == grid.len() { t0.t0_hi } else { 0.5 * (bracket_lo + bracket_hi) };
    Ok(WeakThreshold { tau, lo: bracket_lo, hi: bracket_hi, probes })
}

//! Grid Hutchinson iteration producing outer covers.
//!
//! The operator is `G(S) = { cells meeting f_σ(c) : c ∈ S, σ ∈ C }` for a
//! word code C (see [`WordCode`]); images are rasterized exactly (bounding
//! box candidates filtered by a separating-axis test against the image
//! parallelogram) with a closed-cell tolerance, so cells merely touching an
//! image are included. The cover is the greatest fixpoint of
//! `S ↦ G(S) ∩ S₀`, computed with support counts: a cell is dropped once no
//! remaining cell maps onto it. Any set of cells meeting A is a
//! post-fixpoint, so the result contains A whenever `A ⊆ ∪S₀`.

use std::sync::atomic::{AtomicU32, AtomicU8, Ordering};

use rayon::prelude::*;

use super::code::WordCode;
use super::{to_xy, Ball, BoxCover};
use crate::error::{Error, Result};
use crate::family::AffineMap;

const ABSENT: u32 = u32::MAX;
const REMOVED: u32 = u32::MAX - 1;
/// Closed-cell tolerance as a fraction of the cell size.
const TOUCH_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct CoverConfig {
    /// Words are expanded until their linear parts have norm ≤ this.
    pub contraction_target: f64,
    pub max_code_words: usize,
    /// Dense grid budget (cells in the bounding box of S₀).
    pub max_grid_cells: usize,
    /// Worklist generations per level; `None` = 10·(trap diameter / cell).
    pub max_iters: Option<usize>,
    /// Cells across the trap diameter at the coarsest level of [`CoverEngine::cover`].
    pub base_cells: f64,
}

impl Default for CoverConfig {
    fn default() -> Self {
        Self {
            contraction_target: 0.25,
            max_code_words: 256,
            max_grid_cells: 1 << 26,
            max_iters: None,
            base_cells: 64.0,
        }
    }
}

/// One code map prepared for rasterization (per unit cell size).
#[derive(Clone, Copy, Debug)]
struct Raster {
    m: [[f64; 2]; 2],
    b: [f64; 2],
    /// Half extents of the image bounding box.
    ext: [f64; 2],
    /// Normals of the image parallelogram's sides.
    n: [[f64; 2]; 2],
    /// Half widths of (parallelogram + cell) along each normal.
    reach: [f64; 2],
    norm_len: [f64; 2],
    first: usize,
}

impl Raster {
    fn new(map: &AffineMap, first: usize) -> Self {
        let d = map.dim();
        let g = |i: usize, j: usize| if i < d && j < d { map.l.get(i, j) } else if i == j { 1.0 } else { 0.0 };
        let m = [[g(0, 0), g(0, 1)], [g(1, 0), g(1, 1)]];
        let b = [map.a[0], if d > 1 { map.a[1] } else { 0.0 }];
        let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs();
        let n = [[-m[1][0], m[0][0]], [-m[1][1], m[0][1]]];
        let reach = [0, 1].map(|k| 0.5 * (det + n[k][0].abs() + n[k][1].abs()));
        Raster {
            m,
            b,
            ext: [0.5 * (m[0][0].abs() + m[0][1].abs()), 0.5 * (m[1][0].abs() + m[1][1].abs())],
            n,
            reach,
            norm_len: [n[0][0].hypot(n[0][1]), n[1][0].hypot(n[1][1])],
            first,
        }
    }

    /// Calls `f` for every cell meeting the image of the cell centred at `c`.
    #[inline]
    fn for_each_target(&self, dim: usize, h: f64, c: [f64; 2], mut f: impl FnMut([i64; 2])) {
        let tol = TOUCH_TOL * h;
        let x = self.m[0][0] * c[0] + self.m[0][1] * c[1] + self.b[0];
        let ex = self.ext[0] * h + tol;
        let i0 = ((x - ex) / h).floor() as i64;
        let i1 = (((x + ex) / h).ceil() as i64 - 1).max(i0);
        if dim == 1 {
            for i in i0..=i1 {
                f([i, 0]);
            }
            return;
        }
        let y = self.m[1][0] * c[0] + self.m[1][1] * c[1] + self.b[1];
        let ey = self.ext[1] * h + tol;
        let j0 = ((y - ey) / h).floor() as i64;
        let j1 = (((y + ey) / h).ceil() as i64 - 1).max(j0);
        let single = i0 == i1 && j0 == j1;
        for j in j0..=j1 {
            let dy = (j as f64 + 0.5) * h - y;
            for i in i0..=i1 {
                if !single {
                    let dx = (i as f64 + 0.5) * h - x;
                    let separated = (0..2).any(|k| {
                        self.norm_len[k] > 0.0
                            && (self.n[k][0] * dx + self.n[k][1] * dy).abs() > self.reach[k] * h + tol * self.norm_len[k]
                    });
                    if separated {
                        continue;
                    }
                }
                f([i, j]);
            }
        }
    }
}

/// Dense index over a bounding box of cells.
struct Grid {
    lo: [i64; 2],
    w: i64,
    h: i64,
}

impl Grid {
    fn new(lo: [i64; 2], hi: [i64; 2]) -> Self {
        Grid { lo, w: hi[0] - lo[0] + 1, h: hi[1] - lo[1] + 1 }
    }

    fn size(&self) -> usize {
        (self.w * self.h) as usize
    }

    #[inline]
    fn index(&self, c: [i64; 2]) -> Option<usize> {
        let x = c[0] - self.lo[0];
        let y = c[1] - self.lo[1];
        (x >= 0 && y >= 0 && x < self.w && y < self.h).then(|| (y * self.w + x) as usize)
    }
}

fn bounds(cells: &[[i64; 2]]) -> ([i64; 2], [i64; 2]) {
    let mut lo = cells[0];
    let mut hi = cells[0];
    for c in cells {
        for k in 0..2 {
            lo[k] = lo[k].min(c[k]);
            hi[k] = hi[k].max(c[k]);
        }
    }
    (lo, hi)
}

/// Cover builder for one instance: holds the word code and the trap.
#[derive(Clone, Debug)]
pub struct CoverEngine {
    dim: usize,
    maps: Vec<AffineMap>,
    code: WordCode,
    raster: Vec<Raster>,
    trap: Ball,
    config: CoverConfig,
}

impl CoverEngine {
    pub fn new(instance: &[AffineMap], trap: Ball, config: CoverConfig) -> Result<Self> {
        let dim = instance.first().ok_or(Error::EmptyInput)?.dim();
        if dim > 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        let code = WordCode::build(instance, config.contraction_target, config.max_code_words);
        let raster = code.maps.iter().zip(&code.words).map(|(m, w)| Raster::new(m, w[0])).collect();
        Ok(Self { dim, maps: instance.to_vec(), code, raster, trap, config })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn code(&self) -> &WordCode {
        &self.code
    }

    pub fn trap(&self) -> &Ball {
        &self.trap
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    fn cell_diameter(&self, h: f64) -> f64 {
        if self.dim == 1 {
            h
        } else {
            h * std::f64::consts::SQRT_2
        }
    }

    /// Distance bound from any covered point to A: diam(cell)/(1 − κ).
    pub fn slack(&self, h: f64) -> f64 {
        let k = self.code.max_norm;
        if k < 1.0 {
            self.cell_diameter(h) * (1.0 + TOUCH_TOL) / (1.0 - k)
        } else {
            f64::INFINITY
        }
    }

    fn max_iters(&self, h: f64) -> usize {
        self.config.max_iters.unwrap_or_else(|| (10.0 * self.trap.diameter() / h).ceil().max(10.0) as usize)
    }

    /// Cells meeting the trap ball inflated by one cell diameter.
    fn trap_cells(&self, h: f64) -> Result<Vec<[i64; 2]>> {
        let c = to_xy(&self.trap.center);
        let r = self.trap.radius + self.cell_diameter(h);
        let span = |x: f64| (((x - r) / h).floor() as i64, ((x + r) / h).floor() as i64);
        let (i0, i1) = span(c[0]);
        let cells_x = (i1 - i0 + 1) as usize;
        if self.dim == 1 {
            if cells_x > self.config.max_grid_cells {
                return Err(Error::BudgetExceeded(format!("trap needs {cells_x} cells")));
            }
            return Ok((i0..=i1).map(|i| [i, 0]).collect());
        }
        let (j0, j1) = span(c[1]);
        let total = cells_x * (j1 - j0 + 1) as usize;
        if total > self.config.max_grid_cells {
            return Err(Error::BudgetExceeded(format!("trap needs {total} cells")));
        }
        let mut out = Vec::new();
        for i in i0..=i1 {
            for j in j0..=j1 {
                let dx = (c[0] - (i as f64 + 0.5) * h).abs() - 0.5 * h;
                let dy = (c[1] - (j as f64 + 0.5) * h).abs() - 0.5 * h;
                if dx.max(0.0).hypot(dy.max(0.0)) <= r {
                    out.push([i, j]);
                }
            }
        }
        Ok(out)
    }

    fn center(h: f64, c: [i64; 2]) -> [f64; 2] {
        [(c[0] as f64 + 0.5) * h, (c[1] as f64 + 0.5) * h]
    }

    /// Greatest fixpoint of `S ↦ G(S) ∩ S₀`. `s0` must be sorted.
    fn fixpoint(&self, h: f64, s0: &[[i64; 2]]) -> Result<Vec<[i64; 2]>> {
        if s0.is_empty() {
            return Ok(Vec::new());
        }
        let (lo, hi) = bounds(s0);
        let grid = Grid::new(lo, hi);
        if grid.size() > self.config.max_grid_cells {
            return Err(Error::BudgetExceeded(format!("grid of {} cells", grid.size())));
        }
        let state: Vec<AtomicU32> = (0..grid.size()).map(|_| AtomicU32::new(ABSENT)).collect();
        for c in s0 {
            state[grid.index(*c).unwrap()].store(0, Ordering::Relaxed);
        }
        let dim = self.dim;
        s0.par_chunks(2048).for_each(|chunk| {
            for &c in chunk {
                let p = Self::center(h, c);
                for r in &self.raster {
                    r.for_each_target(dim, h, p, |t| {
                        if let Some(k) = grid.index(t) {
                            if state[k].load(Ordering::Relaxed) != ABSENT {
                                state[k].fetch_add(1, Ordering::Relaxed);
                            }
                        }
                    });
                }
            }
        });
        let mut state: Vec<u32> = state.into_iter().map(AtomicU32::into_inner).collect();

        let mut current: Vec<[i64; 2]> = Vec::new();
        for c in s0 {
            let k = grid.index(*c).unwrap();
            if state[k] == 0 {
                state[k] = REMOVED;
                current.push(*c);
            }
        }
        let max_iters = self.max_iters(h);
        let mut generations = 0;
        while !current.is_empty() {
            generations += 1;
            if generations > max_iters {
                return Err(Error::BudgetExceeded(format!("no fixpoint within {max_iters} iterations")));
            }
            let mut next = Vec::new();
            for c in current {
                let p = Self::center(h, c);
                for r in &self.raster {
                    r.for_each_target(dim, h, p, |t| {
                        if let Some(k) = grid.index(t) {
                            let s = state[k];
                            if s != ABSENT && s != REMOVED {
                                if s == 1 {
                                    state[k] = REMOVED;
                                    next.push(t);
                                } else {
                                    state[k] = s - 1;
                                }
                            }
                        }
                    });
                }
            }
            current = next;
        }
        Ok(s0.iter().copied().filter(|c| state[grid.index(*c).unwrap()] != REMOVED).collect())
    }

    fn wrap(&self, h: f64, level: u32, cells: Vec<[i64; 2]>) -> BoxCover {
        BoxCover { dim: self.dim, origin: [0.0, 0.0], cell: h, level, cells, slack: self.slack(h) }
    }

    /// Cover at cell size `h`, seeded from the trap ball.
    pub fn base(&self, h: f64) -> Result<BoxCover> {
        let mut s0 = self.trap_cells(h)?;
        s0.sort_unstable();
        let cells = self.fixpoint(h, &s0)?;
        let cover = self.wrap(h, 0, cells);
        self.check_trapped(&cover)?;
        Ok(cover)
    }

    /// Cover at half the parent's cell size, seeded from the parent's children.
    pub fn refine(&self, parent: &BoxCover) -> Result<BoxCover> {
        let h = parent.cell / 2.0;
        let cells = self.fixpoint(h, &parent.children())?;
        Ok(self.wrap(h, parent.level + 1, cells))
    }

    /// An empty fixpoint, or a member fixed point outside the cover, means
    /// the trap did not contain the attractor.
    fn check_trapped(&self, cover: &BoxCover) -> Result<()> {
        if cover.is_empty() {
            return Err(Error::NotTrapping);
        }
        for m in &self.maps {
            if let Some(p) = m.fixed_point() {
                if !cover.contains_point(to_xy(&p), TOUCH_TOL * cover.cell) {
                    return Err(Error::NotTrapping);
                }
            }
        }
        Ok(())
    }

    /// Number of halvings used by [`Self::cover`] to reach `cell`.
    pub fn refinements_for(&self, cell: f64) -> u32 {
        let ratio = self.trap.diameter() / (self.config.base_cells * cell);
        if ratio <= 1.0 {
            0
        } else {
            ratio.log2().ceil() as u32
        }
    }

    /// Coarse-to-fine cover ending at exactly `cell`.
    pub fn cover(&self, cell: f64) -> Result<BoxCover> {
        let k = self.refinements_for(cell);
        let mut cover = self.base(cell * f64::powi(2.0, k as i32))?;
        for _ in 0..k {
            cover = self.refine(&cover)?;
        }
        Ok(cover)
    }

    /// One application of G without the S₀ restriction.
    pub fn sweep(&self, cover: &BoxCover) -> Vec<[i64; 2]> {
        let h = cover.cell;
        let mut out: Vec<[i64; 2]> = cover
            .cells
            .par_iter()
            .flat_map_iter(|&c| {
                let p = Self::center(h, c);
                let mut local = Vec::new();
                for r in &self.raster {
                    r.for_each_target(self.dim, h, p, |t| local.push(t));
                }
                local
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Outer covers of `f_i(A)` for each map `i`: images under the code words
    /// starting with `i`.
    pub fn first_letter_images(&self, cover: &BoxCover) -> Vec<Vec<[i64; 2]>> {
        let h = cover.cell;
        let Some((lo, hi)) = cover.index_bounds() else { return vec![Vec::new(); self.maps.len()] };
        // targets are marked in a padded box; strays outside it are collected
        let pad = 4;
        let (lo, hi) = ([lo[0] - pad, lo[1] - pad], [hi[0] + pad, hi[1] + pad]);
        let (w, ht) = (hi[0] - lo[0] + 1, hi[1] - lo[1] + 1);
        let dense = (w * ht) as usize <= self.config.max_grid_cells;
        (0..self.maps.len())
            .map(|i| {
                let marks: Vec<AtomicU8> = if dense { (0..w * ht).map(|_| AtomicU8::new(0)).collect() } else { Vec::new() };
                let mut strays: Vec<[i64; 2]> = cover
                    .cells
                    .par_iter()
                    .flat_map_iter(|&c| {
                        let p = Self::center(h, c);
                        let mut local = Vec::new();
                        for r in self.raster.iter().filter(|r| r.first == i) {
                            r.for_each_target(self.dim, h, p, |t| {
                                let (x, y) = (t[0] - lo[0], t[1] - lo[1]);
                                if dense && x >= 0 && y >= 0 && x < w && y < ht {
                                    marks[(x * ht + y) as usize].store(1, Ordering::Relaxed);
                                } else {
                                    local.push(t);
                                }
                            });
                        }
                        local
                    })
                    .collect();
                // column-major marks enumerate cells in (i, j) order
                strays.extend(
                    marks
                        .iter()
                        .enumerate()
                        .filter(|(_, m)| m.load(Ordering::Relaxed) != 0)
                        .map(|(k, _)| [lo[0] + k as i64 / ht, lo[1] + k as i64 % ht]),
                );
                strays.sort_unstable();
                strays.dedup();
                strays
            })
            .collect()
    }
}

/// Outer cover of the attractor of `instance` at the given cell size.
///
/// `max_iters` bounds the worklist generations per level (0 = default).
pub fn compute_attractor(instance: &[AffineMap], trap: &Ball, cell: f64, max_iters: usize) -> Result<BoxCover> {
    if !(cell > 0.0) {
        return Err(Error::InvalidArgument(format!("cell must be positive, got {cell}")));
    }
    let config = CoverConfig { max_iters: (max_iters > 0).then_some(max_iters), ..CoverConfig::default() };
    CoverEngine::new(instance, *trap, config)?.cover(cell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attractor::trap::{instance_trap, trapping_ball};
    use crate::fixtures;
    use crate::linalg::{Matrix, Vector};

    fn interval_of(cover: &BoxCover) -> (f64, f64) {
        let (lo, hi) = cover.index_bounds().unwrap();
        (lo[0] as f64 * cover.cell, (hi[0] + 1) as f64 * cover.cell)
    }

    #[test]
    fn example_4_6_interval() {
        let fam = fixtures::example_4_6();
        for t in [0.25, 0.5, 0.75] {
            let maps = fam.instantiate(t);
            let trap = trapping_ball(&fam, t).unwrap();
            let cover = compute_attractor(&maps, &trap, 1e-3, 0).unwrap();
            let e = (1.0 + t) / (1.0 - t);
            let (lo, hi) = interval_of(&cover);
            assert!((lo + e).abs() <= 2e-3 && (hi - e).abs() <= 2e-3, "t={t}: [{lo}, {hi}] vs ±{e}");
            let contiguous = cover.len() as i64 == cover.cells.last().unwrap()[0] - cover.cells[0][0] + 1;
            // images ±(1+t) + [−tE, tE] overlap iff t ≥ 1/2; below that A_t is a Cantor set
            assert_eq!(contiguous, t >= 0.5, "t={t}");
        }
    }

    #[test]
    fn single_contraction_shrinks_to_origin() {
        let maps = vec![AffineMap::new(Matrix::scalar(1, 0.5), Vector::zeros(1))];
        let trap = Ball::new(Vector::zeros(1), 1.0);
        let cover = compute_attractor(&maps, &trap, 1e-3, 0).unwrap();
        assert!(cover.len() <= 2);
        assert!(cover.contains_point([0.0, 0.0], 0.0));
    }

    #[test]
    fn cantor_measure_shrinks() {
        // τ = 0.3 real slice of {τz, τz+1}
        let maps = fixtures::eq4_real_line().instantiate(0.3);
        let trap = instance_trap(&maps).unwrap();
        let coarse = compute_attractor(&maps, &trap, 1e-2, 0).unwrap();
        let fine = compute_attractor(&maps, &trap, 1e-4, 0).unwrap();
        assert!(fine.measure() < 0.5 * coarse.measure());
        let (lo, hi) = interval_of(&fine);
        assert!(lo > -2e-4 && hi < 1.0 / 0.7 + 2e-4);
    }

    #[test]
    fn cantor_matches_word_union_oracle() {
        // depth-16 word images of the hull [0, 1/(1−τ)]: intervals of length 0.3^16 / 0.7
        let tau = 0.3;
        let maps = fixtures::eq4_real_line().instantiate(tau);
        let trap = instance_trap(&maps).unwrap();
        let h = 1e-4;
        let cover = compute_attractor(&maps, &trap, h, 0).unwrap();
        let mut starts = vec![0.0f64];
        for _ in 0..16 {
            starts = starts.iter().flat_map(|&s| [tau * s, tau * s + 1.0]).collect();
        }
        let len = tau.powi(16) / (1.0 - tau);
        for s in &starts {
            // every oracle interval meets the cover
            assert!(cover.contains_point([s + 0.5 * len, 0.0], 1e-12));
        }
        // every cover cell lies within slack of some oracle interval
        starts.sort_by(f64::total_cmp);
        for c in cover.centers() {
            let k = starts.partition_point(|s| *s <= c[0]);
            let d = starts[k.saturating_sub(1)..(k + 1).min(starts.len())]
                .iter()
                .map(|s| (s - c[0]).max(c[0] - (s + len)).max(0.0))
                .fold(f64::INFINITY, f64::min);
            assert!(d <= cover.slack + h, "cell {c:?} at distance {d}");
        }
    }

    #[test]
    fn fixpoint_is_stable_and_corners_land_inside() {
        let fam = fixtures::example_1_1();
        let maps = fam.instantiate(0.85);
        let trap = trapping_ball(&fam, 0.85).unwrap();
        let engine = CoverEngine::new(&maps, trap, CoverConfig::default()).unwrap();
        let cover = engine.cover(1.0 / 128.0).unwrap();
        let swept = engine.sweep(&cover);
        for c in &cover.cells {
            assert!(swept.binary_search(c).is_ok(), "cell not re-covered");
        }
        for &c in cover.cells.iter().step_by(7) {
            for corner in cover.corners_of(c) {
                for m in &engine.code().maps {
                    let img = m.apply(&Vector::from_slice(&corner));
                    assert!(cover.contains_point(img.xy(), 1e-9 * cover.cell), "corner image outside");
                }
            }
        }
        for m in &fam.members {
            assert!(cover.contains_point(m.fixed_point(0.85).unwrap().xy(), 0.0));
        }
    }

    #[test]
    fn mirror_symmetric_family_gives_symmetric_cover() {
        let fam = fixtures::example_4_6();
        let maps = fam.instantiate(0.5);
        let trap = Ball::new(Vector::zeros(1), 4.0);
        let cover = compute_attractor(&maps, &trap, 1.0 / 64.0, 0).unwrap();
        let mirrored: Vec<[i64; 2]> = {
            let mut v: Vec<_> = cover.cells.iter().map(|c| [-c[0] - 1, 0]).collect();
            v.sort_unstable();
            v
        };
        assert_eq!(mirrored, cover.cells);
    }

    #[test]
    fn budget_exceeded_on_tiny_cells() {
        let fam = fixtures::example_6_3();
        let maps = fam.instantiate(0.5);
        let trap = trapping_ball(&fam, 0.5).unwrap();
        let config = CoverConfig { max_grid_cells: 1000, ..CoverConfig::default() };
        let engine = CoverEngine::new(&maps, trap, config).unwrap();
        assert!(matches!(engine.base(1e-3), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn wrong_trap_is_reported() {
        let maps = fixtures::example_4_6().instantiate(0.5);
        let trap = Ball::new(Vector::from_slice(&[100.0]), 1.0);
        assert_eq!(compute_attractor(&maps, &trap, 1e-2, 0), Err(Error::NotTrapping));
    }
}

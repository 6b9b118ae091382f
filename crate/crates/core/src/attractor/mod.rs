//! Outer approximations of attractors: trapping balls, grid covers,
//! chaos-game samples, Hausdorff distances and convex hulls.
//!
//! Grid operations support d ∈ {1, 2}. Cells live on a global lattice
//! anchored at `origin`: cell `(i, j)` is `[i·h, (i+1)·h] × [j·h, (j+1)·h]`
//! shifted by the origin. In 1-D the second index is always 0.

pub mod chaos;
pub mod code;
pub mod cover;
pub mod hull;
pub mod io;
pub mod metric;
pub mod trap;

use serde::Serialize;

use crate::linalg::Vector;

pub use chaos::chaos_game;
pub use code::WordCode;
pub use cover::{compute_attractor, CoverConfig, CoverEngine};
pub use hull::{convex_hull, Hull};
pub use metric::{hausdorff, PointCloud};
pub use trap::{instance_trap, trapping_ball};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub center: Vector,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vector, radius: f64) -> Self {
        assert!(radius > 0.0, "ball radius must be positive");
        Self { center, radius }
    }

    pub fn contains(&self, p: &Vector, slack: f64) -> bool {
        (*p - self.center).norm() <= self.radius + slack
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }
}

/// A finite set of closed grid cells. `cells` is sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxCover {
    pub dim: usize,
    pub origin: [f64; 2],
    pub cell: f64,
    pub level: u32,
    pub cells: Vec<[i64; 2]>,
    /// Every point of every cell is within this distance of the attractor
    /// (when the cover came from the Hutchinson fixpoint; 0 otherwise).
    pub slack: f64,
}

impl BoxCover {
    /// Builds a cover from arbitrary cells; sorts and dedups.
    pub fn from_cells(dim: usize, cell: f64, mut cells: Vec<[i64; 2]>) -> Self {
        assert!(dim == 1 || dim == 2, "grid covers support d ∈ {{1, 2}}");
        cells.sort_unstable();
        cells.dedup();
        if dim == 1 {
            assert!(cells.iter().all(|c| c[1] == 0), "1-D cells must have second index 0");
        }
        Self { dim, origin: [0.0, 0.0], cell, level: 0, cells, slack: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Lower-left and upper-right corners of a cell.
    pub fn cell_bounds(&self, c: [i64; 2]) -> ([f64; 2], [f64; 2]) {
        let h = self.cell;
        let lo = [self.origin[0] + c[0] as f64 * h, self.origin[1] + c[1] as f64 * h];
        let hi = [lo[0] + h, if self.dim == 1 { lo[1] } else { lo[1] + h }];
        (lo, hi)
    }

    pub fn center_of(&self, c: [i64; 2]) -> [f64; 2] {
        let (lo, hi) = self.cell_bounds(c);
        [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])]
    }

    pub fn centers(&self) -> Vec<[f64; 2]> {
        self.cells.iter().map(|&c| self.center_of(c)).collect()
    }

    /// Corners of every cell (2 per cell in 1-D, 4 in 2-D).
    pub fn corners_of(&self, c: [i64; 2]) -> Vec<[f64; 2]> {
        let (lo, hi) = self.cell_bounds(c);
        if self.dim == 1 {
            vec![lo, hi]
        } else {
            vec![lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]]
        }
    }

    pub fn contains_cell(&self, c: [i64; 2]) -> bool {
        self.cells.binary_search(&c).is_ok()
    }

    /// Whether a point lies in some closed cell (boundary tolerance `tol`).
    pub fn contains_point(&self, p: [f64; 2], tol: f64) -> bool {
        let h = self.cell;
        let fx = (p[0] - self.origin[0]) / h;
        let fy = (p[1] - self.origin[1]) / h;
        let e = tol / h;
        let xs = ((fx - e).floor() as i64)..=((fx + e).floor() as i64);
        let ys: Vec<i64> = if self.dim == 1 {
            if (p[1] - self.origin[1]).abs() > tol {
                return false;
            }
            vec![0]
        } else {
            (((fy - e).floor() as i64)..=((fy + e).floor() as i64)).collect()
        };
        xs.into_iter().any(|i| ys.iter().any(|&j| self.contains_cell([i, j])))
    }

    /// Index bounding box `(min, max)` inclusive.
    pub fn index_bounds(&self) -> Option<([i64; 2], [i64; 2])> {
        let first = self.cells.first()?;
        let mut lo = *first;
        let mut hi = *first;
        for c in &self.cells {
            for k in 0..2 {
                lo[k] = lo[k].min(c[k]);
                hi[k] = hi[k].max(c[k]);
            }
        }
        Some((lo, hi))
    }

    /// Union of cells as the 2^k-times finer lattice would see it.
    pub fn children(&self) -> Vec<[i64; 2]> {
        let mut out = Vec::with_capacity(self.cells.len() * if self.dim == 1 { 2 } else { 4 });
        for c in &self.cells {
            if self.dim == 1 {
                out.push([2 * c[0], 0]);
                out.push([2 * c[0] + 1, 0]);
            } else {
                for dx in 0..2 {
                    for dy in 0..2 {
                        out.push([2 * c[0] + dx, 2 * c[1] + dy]);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Total length/area of the cells.
    pub fn measure(&self) -> f64 {
        self.cells.len() as f64 * self.cell.powi(self.dim as i32)
    }
}

/// A finite point set, e.g. from the chaos game. Points are stored as
/// `[x, y]` with `y = 0` in 1-D.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointSample {
    pub dim: usize,
    pub points: Vec<[f64; 2]>,
    pub seed: u64,
    pub weights: Vec<f64>,
}

impl PointSample {
    pub fn new(dim: usize, points: Vec<[f64; 2]>) -> Self {
        Self { dim, points, seed: 0, weights: Vec::new() }
    }
}

pub(crate) fn to_xy(v: &Vector) -> [f64; 2] {
    v.xy()
}

pub(crate) fn from_xy(dim: usize, p: [f64; 2]) -> Vector {
    Vector::from_slice(&p[..dim])
}

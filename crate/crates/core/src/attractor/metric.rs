//! Hausdorff distance between finite planar point sets.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{BoxCover, PointSample};
use crate::error::{Error, Result};

/// Anything that can be viewed as a finite point set.
pub trait PointCloud {
    fn dim(&self) -> usize;
    fn cloud(&self) -> Vec<[f64; 2]>;
}

impl PointCloud for BoxCover {
    fn dim(&self) -> usize {
        self.dim
    }
    /// Cell centres.
    fn cloud(&self) -> Vec<[f64; 2]> {
        self.centers()
    }
}

impl PointCloud for PointSample {
    fn dim(&self) -> usize {
        self.dim
    }
    fn cloud(&self) -> Vec<[f64; 2]> {
        self.points.clone()
    }
}

impl PointCloud for Vec<[f64; 2]> {
    fn dim(&self) -> usize {
        2
    }
    fn cloud(&self) -> Vec<[f64; 2]> {
        self.clone()
    }
}

/// Bucket grid for nearest-neighbour queries.
struct Buckets<'a> {
    points: &'a [[f64; 2]],
    size: f64,
    lo: [i64; 2],
    hi: [i64; 2],
    map: HashMap<[i64; 2], Vec<u32>>,
}

impl<'a> Buckets<'a> {
    fn new(points: &'a [[f64; 2]]) -> Self {
        let (mut min, mut max) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        let extent = (max[0] - min[0]).max(max[1] - min[1]);
        let mut size = extent / (points.len() as f64).sqrt().max(1.0);
        if !(size > 0.0) {
            size = 1.0;
        }
        let mut map: HashMap<[i64; 2], Vec<u32>> = HashMap::new();
        let key = |p: &[f64; 2]| [(p[0] / size).floor() as i64, (p[1] / size).floor() as i64];
        let (mut lo, mut hi) = ([i64::MAX; 2], [i64::MIN; 2]);
        for (i, p) in points.iter().enumerate() {
            let k = key(p);
            for d in 0..2 {
                lo[d] = lo[d].min(k[d]);
                hi[d] = hi[d].max(k[d]);
            }
            map.entry(k).or_default().push(i as u32);
        }
        Buckets { points, size, lo, hi, map }
    }

    fn visit(&self, key: [i64; 2], q: [f64; 2], best: &mut f64) {
        if let Some(ids) = self.map.get(&key) {
            for &i in ids {
                let p = self.points[i as usize];
                *best = best.min((p[0] - q[0]).hypot(p[1] - q[1]));
            }
        }
    }

    /// Distance from `q` to the nearest stored point.
    fn nearest(&self, q: [f64; 2]) -> f64 {
        let k = [(q[0] / self.size).floor() as i64, (q[1] / self.size).floor() as i64];
        let reach = (0..2)
            .map(|d| (k[d] - self.lo[d]).abs().max((k[d] - self.hi[d]).abs()))
            .max()
            .unwrap();
        // ring r starts where the grid begins, if q is outside it
        let start = (0..2)
            .map(|d| (self.lo[d] - k[d]).max(k[d] - self.hi[d]).max(0))
            .max()
            .unwrap();
        let mut best = f64::INFINITY;
        for r in start..=reach {
            // points in ring r are at least (r − 1)·size away
            if best <= (r - 1) as f64 * self.size {
                break;
            }
            if r == 0 {
                self.visit(k, q, &mut best);
                continue;
            }
            for i in -r..=r {
                self.visit([k[0] + i, k[1] - r], q, &mut best);
                self.visit([k[0] + i, k[1] + r], q, &mut best);
            }
            for j in -r + 1..r {
                self.visit([k[0] - r, k[1] + j], q, &mut best);
                self.visit([k[0] + r, k[1] + j], q, &mut best);
            }
        }
        best
    }
}

/// `max_{a∈A} min_{b∈B} |a − b|`.
pub fn directed_hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let buckets = Buckets::new(b);
    Ok(a.par_iter().map(|q| buckets.nearest(*q)).reduce(|| 0.0, f64::max))
}

/// Symmetric Hausdorff distance between two finite sets.
pub fn hausdorff(a: &dyn PointCloud, b: &dyn PointCloud) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let (pa, pb) = (a.cloud(), b.cloud());
    Ok(directed_hausdorff(&pa, &pb)?.max(directed_hausdorff(&pb, &pa)?))
}

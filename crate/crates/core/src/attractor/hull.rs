//! Convex hulls of covers and samples.

use serde::Serialize;

use super::{BoxCover, PointSample};
use crate::error::{Error, Result};

/// Interval in 1-D, counter-clockwise polygon in 2-D. Degenerate polygons
/// have one or two vertices.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Hull {
    Interval { lo: f64, hi: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
}

/// Points whose hull is wanted.
pub trait HullInput {
    fn dim(&self) -> usize;
    fn hull_points(&self) -> Vec<[f64; 2]>;
}

impl HullInput for BoxCover {
    fn dim(&self) -> usize {
        self.dim
    }
    /// Corners of the leftmost and rightmost cell in every row (outer hull).
    fn hull_points(&self) -> Vec<[f64; 2]> {
        let mut out = Vec::new();
        let mut k = 0;
        while k < self.cells.len() {
            // cells sorted by (i, j): group by column i, take extreme rows
            let i = self.cells[k][0];
            let mut m = k;
            while m < self.cells.len() && self.cells[m][0] == i {
                m += 1;
            }
            out.extend(self.corners_of(self.cells[k]));
            out.extend(self.corners_of(self.cells[m - 1]));
            k = m;
        }
        out
    }
}

impl HullInput for PointSample {
    fn dim(&self) -> usize {
        self.dim
    }
    fn hull_points(&self) -> Vec<[f64; 2]> {
        self.points.clone()
    }
}

impl HullInput for Vec<[f64; 2]> {
    fn dim(&self) -> usize {
        2
    }
    fn hull_points(&self) -> Vec<[f64; 2]> {
        self.clone()
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    if len2 == 0.0 {
        return dist(p, a);
    }
    let s = (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0);
    dist(p, [a[0] + s * d[0], a[1] + s * d[1]])
}

/// Andrew's monotone chain; drops points within 1e−12 (relative) of a hull edge.
pub fn polygon_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let scale = pts.iter().fold(0.0f64, |m, p| m.max(p[0].abs()).max(p[1].abs())).max(1e-300);
    let eps = 1e-12 * scale * scale;
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], *p) <= eps {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        // all points collinear: keep the two extremes
        return vec![pts[0], *pts.last().unwrap()];
    }
    hull
}

pub fn convex_hull(input: &dyn HullInput) -> Result<Hull> {
    let pts = input.hull_points();
    if pts.is_empty() {
        return Err(Error::EmptyInput);
    }
    if input.dim() == 1 {
        let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        return Ok(Hull::Interval { lo, hi });
    }
    Ok(Hull::Polygon { vertices: polygon_hull(&pts) })
}

impl Hull {
    pub fn vertices(&self) -> Vec<[f64; 2]> {
        match self {
            Hull::Interval { lo, hi } => vec![[*lo, 0.0], [*hi, 0.0]],
            Hull::Polygon { vertices } => vertices.clone(),
        }
    }

    /// Distance from `p` to the hull (0 inside).
    pub fn distance(&self, p: [f64; 2]) -> f64 {
        match self {
            Hull::Interval { lo, hi } => {
                let dx = if p[0] < *lo { lo - p[0] } else if p[0] > *hi { p[0] - hi } else { 0.0 };
                dx.hypot(p[1])
            }
            Hull::Polygon { vertices: v } => match v.len() {
                1 => dist(p, v[0]),
                2 => segment_distance(p, v[0], v[1]),
                n => {
                    let inside = (0..n).all(|k| cross(v[k], v[(k + 1) % n], p) >= 0.0);
                    if inside {
                        0.0
                    } else {
                        (0..n).map(|k| segment_distance(p, v[k], v[(k + 1) % n])).fold(f64::INFINITY, f64::min)
                    }
                }
            },
        }
    }

    /// How far `self` sticks out of `other`: `max_{v ∈ self} d(v, other)`.
    pub fn excess_over(&self, other: &Hull) -> f64 {
        self.vertices().iter().map(|v| other.distance(*v)).fold(0.0, f64::max)
    }

    /// Hausdorff distance between the two convex sets.
    pub fn hausdorff(&self, other: &Hull) -> f64 {
        self.excess_over(other).max(other.excess_over(self))
    }

    pub fn area(&self) -> f64 {
        match self {
            Hull::Interval { .. } => 0.0,
            Hull::Polygon { vertices: v } => {
                let n = v.len();
                0.5 * (0..n).map(|k| v[k][0] * v[(k + 1) % n][1] - v[(k + 1) % n][0] * v[k][1]).sum::<f64>()
            }
        }
    }
}

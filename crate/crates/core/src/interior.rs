//! Interior certificates: the measure bound (empty interior), ball
//! coverings `B ⊆ F^n(B)` (non-empty interior) and the rotation-orbit cone
//! bound for planar semi-linear similarity families.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::attractor::{to_xy, trapping_ball, Ball, BoxCover, CoverConfig, CoverEngine};
use crate::classify::{classify, default_samples, is_semi_linear, scaling_data, CLASSIFY_TOL};
use crate::error::{Error, Result};
use crate::family::{AffineMap, OneParamFamily};
use crate::linalg::{min_singular_value, Vector};

/// Largest number of word images a certificate may enumerate.
pub const MAX_WORD_IMAGES: usize = 10_000_000;
pub const MAX_DEPTH: usize = 8;
/// Squares examined per certificate before giving up (returns false).
const MAX_SQUARES: usize = 4_000_000;
const CONE_MARGIN: f64 = 1e-9;
/// Orbits longer than this are not simulated.
const MAX_ORBIT: usize = 1 << 20;

/// `t_m = (Σ|det L_i|)^{−1/d}`: below it every attractor has measure zero.
pub fn measure_zero_threshold(family: &OneParamFamily) -> f64 {
    let total: f64 = family.members.iter().map(|m| m.f.l.det().abs()).sum();
    total.powf(-1.0 / family.dim as f64)
}

/// Images of a ball under all words of length `n`, as inscribed balls
/// `(centre, σ_min(L_σ)·r)`.
fn image_balls(instance: &[AffineMap], ball: &Ball, n: usize) -> Result<Vec<([f64; 2], f64)>> {
    let count = (instance.len() as f64).powi(n as i32);
    if count > MAX_WORD_IMAGES as f64 {
        return Err(Error::BudgetExceeded(format!("{count} word images at depth {n}")));
    }
    let mut level = vec![AffineMap::identity(ball.center.dim())];
    for _ in 0..n {
        level = level.par_iter().flat_map_iter(|w| instance.iter().map(move |m| w.compose(m))).collect();
    }
    Ok(level
        .par_iter()
        .map(|w| (to_xy(&w.apply(&ball.center)), min_singular_value(&w.l) * ball.radius))
        .collect())
}

/// Largest distance from `p` to a point of `D(c1, r1) ∩ D(c2, r2)`.
fn lens_reach(c1: [f64; 2], r1: f64, c2: [f64; 2], r2: f64, p: [f64; 2]) -> f64 {
    let dist = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
    let d = dist(c1, c2);
    if d + r1 <= r2 {
        return dist(p, c1) + r1;
    }
    if d + r2 <= r1 {
        return dist(p, c2) + r2;
    }
    // the far point of each circle counts if it lies in the other disk
    let far = |c: [f64; 2], r: f64| {
        let v = [c[0] - p[0], c[1] - p[1]];
        let n = v[0].hypot(v[1]);
        if n == 0.0 {
            None
        } else {
            Some([c[0] + r * v[0] / n, c[1] + r * v[1] / n])
        }
    };
    let mut best: f64 = 0.0;
    for (c, r, oc, or) in [(c1, r1, c2, r2), (c2, r2, c1, r1)] {
        match far(c, r) {
            Some(q) if dist(q, oc) <= or => best = best.max(dist(p, c) + r),
            Some(_) => {}
            // p at the centre: nothing in D(c, r) is farther than r
            None => best = best.max(r),
        }
    }
    // circle intersection points
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h2 = r1 * r1 - a * a;
    if h2 >= 0.0 {
        let h = h2.sqrt();
        let u = [(c2[0] - c1[0]) / d, (c2[1] - c1[1]) / d];
        let m = [c1[0] + a * u[0], c1[1] + a * u[1]];
        for sgn in [-1.0, 1.0] {
            let q = [m[0] - sgn * h * u[1], m[1] + sgn * h * u[0]];
            best = best.max(dist(p, q));
        }
    }
    best
}

#[derive(Clone, Copy)]
struct Square {
    c: [f64; 2],
    half: f64,
}

/// True only if every point of `ball` lies in some inscribed image ball at
/// depth `n`; then `ball ⊆ F^n(ball)`, hence `ball ⊆ A`.
///
/// The ball's bounding box is split into `subdivision`² squares and refined
/// adaptively; a square is covered when its circumscribed disk fits in one
/// image ball, and refinement stops when square diameters drop below a
/// quarter of the smallest image radius.
pub fn ball_certificate(instance: &[AffineMap], ball: &Ball, n: usize, subdivision: usize) -> Result<bool> {
    let dim = ball.center.dim();
    if dim > 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    if n == 0 || n > MAX_DEPTH {
        return Err(Error::InvalidArgument(format!("depth must be in 1..={MAX_DEPTH}, got {n}")));
    }
    let balls = image_balls(instance, ball, n)?;
    let r_min = balls.iter().map(|b| b.1).fold(f64::INFINITY, f64::min);
    if !(r_min > 0.0) {
        return Ok(false);
    }
    let c = to_xy(&ball.center);
    let r = ball.radius;
    let floor = r_min / 4.0;
    // rounding allowance so isometric images of the ball count as covering it
    let round = 1e-12 * ball.radius;
    let k = subdivision.max(1);
    let half0 = r / k as f64;
    let diam = |s: &Square| if dim == 1 { 2.0 * s.half } else { 2.0 * s.half * std::f64::consts::SQRT_2 };
    let reach = |s: &Square| if dim == 1 { s.half } else { s.half * std::f64::consts::SQRT_2 };
    let dist = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);

    let mut level: Vec<(Square, Vec<u32>)> = Vec::new();
    let all: Vec<u32> = (0..balls.len() as u32).collect();
    let ys = if dim == 1 { 1 } else { k };
    for i in 0..k {
        for j in 0..ys {
            let sc = [c[0] - r + (2 * i + 1) as f64 * half0, if dim == 1 { c[1] } else { c[1] - r + (2 * j + 1) as f64 * half0 }];
            level.push((Square { c: sc, half: half0 }, all.clone()));
        }
    }
    let mut examined = 0usize;
    while !level.is_empty() {
        examined += level.len();
        if examined > MAX_SQUARES {
            return Ok(false);
        }
        // each square: skip if outside the ball, done if covered, else split
        let next: Option<Vec<(Square, Vec<u32>)>> = level
            .par_iter()
            .map(|(s, cand)| {
                let rho = reach(s);
                if dist(s.c, c) - rho > r {
                    return Some(Vec::new());
                }
                let near: Vec<u32> = cand.iter().copied().filter(|&b| dist(s.c, balls[b as usize].0) - rho < balls[b as usize].1).collect();
                if near.iter().any(|&b| {
                    let (p, rb) = balls[b as usize];
                    if dim == 1 {
                        let lo = (s.c[0] - s.half).max(c[0] - r);
                        let hi = (s.c[0] + s.half).min(c[0] + r);
                        lo >= p[0] - rb - round && hi <= p[0] + rb + round
                    } else {
                        lens_reach(s.c, rho, c, r, p) <= rb + round
                    }
                }) {
                    return Some(Vec::new());
                }
                if near.is_empty() || diam(s) < floor {
                    return None;
                }
                let h = 0.5 * s.half;
                let kids: Vec<Square> = if dim == 1 {
                    vec![Square { c: [s.c[0] - h, s.c[1]], half: h }, Square { c: [s.c[0] + h, s.c[1]], half: h }]
                } else {
                    [[-h, -h], [h, -h], [-h, h], [h, h]].iter().map(|d| Square { c: [s.c[0] + d[0], s.c[1] + d[1]], half: h }).collect()
                };
                Some(kids.into_iter().map(|q| (q, near.clone())).collect())
            })
            .collect::<Option<Vec<Vec<_>>>>()
            .map(|v| v.into_iter().flatten().collect());
        match next {
            Some(v) => level = v,
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// Smallest depth `n ≤ max_n` at which [`ball_certificate`] succeeds.
pub fn certify_ball(instance: &[AffineMap], ball: &Ball, max_n: usize, subdivision: usize) -> Result<Option<usize>> {
    for n in 1..=max_n.min(MAX_DEPTH) {
        match ball_certificate(instance, ball, n, subdivision) {
            Ok(true) => return Ok(Some(n)),
            Ok(false) => {}
            Err(Error::BudgetExceeded(_)) if n > 1 => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Chebyshev distance (in cells) from each cell to the nearest cell outside
/// the cover; cells with a missing neighbour have distance 1.
pub fn distance_transform(cover: &BoxCover) -> Vec<u32> {
    let cells = &cover.cells;
    let mut d = vec![0u32; cells.len()];
    let nbrs = |c: [i64; 2]| -> Vec<[i64; 2]> {
        if cover.dim == 1 {
            vec![[c[0] - 1, 0], [c[0] + 1, 0]]
        } else {
            (-1..=1).flat_map(|dx| (-1..=1).map(move |dy| [c[0] + dx, c[1] + dy])).filter(|n| *n != c).collect()
        }
    };
    let mut frontier = Vec::new();
    for (k, &c) in cells.iter().enumerate() {
        if nbrs(c).iter().any(|n| cells.binary_search(n).is_err()) {
            d[k] = 1;
            frontier.push(k);
        }
    }
    let mut dist = 1;
    while !frontier.is_empty() {
        dist += 1;
        let mut next = Vec::new();
        for k in frontier {
            for n in nbrs(cells[k]) {
                if let Ok(m) = cells.binary_search(&n) {
                    if d[m] == 0 {
                        d[m] = dist;
                        next.push(m);
                    }
                }
            }
        }
        frontier = next;
    }
    d
}

/// Candidate balls: centred at the deepest cell of the distance transform,
/// radius half the distance to the outside, then larger and smaller tries.
pub fn candidate_balls(cover: &BoxCover) -> Vec<Ball> {
    if cover.is_empty() {
        return Vec::new();
    }
    let d = distance_transform(cover);
    let (best, depth) = d.iter().enumerate().fold((0, 0), |acc, (k, v)| if *v > acc.1 { (k, *v) } else { acc });
    let centre = cover.center_of(cover.cells[best]);
    let reach = (depth as f64 - 0.5) * cover.cell;
    [0.5, 0.75, 0.9, 0.3]
        .iter()
        .map(|f| Ball::new(Vector::from_slice(&centre[..cover.dim]), f * reach))
        .collect()
}

// ---------------------------------------------------------------------------
// Cone bound

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeParams {
    pub epsilon: f64,
    pub theta: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub s: f64,
    /// `(1−ε)^{1/(M+1)}·t₀`: every t above it has `t^{M+1} > 1−ε`.
    pub tau: f64,
    /// Rotation angle of the isometry and its distance to p/q, q ≤ 64.
    pub phi: f64,
    pub rational_distance: f64,
    /// `p = g_{t₀}(q₀) − q₀` and `r = |p|`.
    pub p: Vec<f64>,
    pub r: f64,
    pub rotation_member: usize,
    pub contraction_member: usize,
}

/// `2(1−ε)cos θ − 1 − (1−ε)²(1−s²)`; positive when the cone inequality holds.
pub fn cone_slack(epsilon: f64, theta: f64, s: f64) -> f64 {
    let e = 1.0 - epsilon;
    2.0 * e * theta.cos() - 1.0 - e * e * (1.0 - s * s)
}

/// `min_{q ≤ 64} |x − p/q|`.
pub fn rational_distance(x: f64) -> f64 {
    (1..=64).map(|q| (x - (x * q as f64).round() / q as f64).abs()).fold(f64::INFINITY, f64::min)
}

/// For each θ (any order), the smallest M such that `{kφ mod 2π : 0 ≤ k ≤ M}`
/// has every angular gap ≤ θ, or `None` past [`MAX_ORBIT`].
pub fn orbit_density_steps(phi: f64, thetas: &[f64]) -> Vec<Option<usize>> {
    let mut order: Vec<usize> = (0..thetas.len()).collect();
    order.sort_by(|a, b| thetas[*b].total_cmp(&thetas[*a]));
    let mut out = vec![None; thetas.len()];
    let key = |a: f64| a.to_bits();
    let mut points: BTreeSet<u64> = BTreeSet::new();
    let mut gaps: BTreeMap<u64, usize> = BTreeMap::new();
    points.insert(key(0.0));
    gaps.insert(key(TAU), 1);
    let mut next = 0;
    for m in 0..=MAX_ORBIT {
        if m > 0 {
            let a = (m as f64 * phi).rem_euclid(TAU);
            let ka = key(a);
            if points.insert(ka) {
                let lo = f64::from_bits(*points.range(..ka).next_back().unwrap());
                let hi = points.range(ka + 1..).next().map(|b| f64::from_bits(*b)).unwrap_or(TAU);
                let old = key(hi - lo);
                if let Some(c) = gaps.get_mut(&old) {
                    *c -= 1;
                    if *c == 0 {
                        gaps.remove(&old);
                    }
                }
                *gaps.entry(key(a - lo)).or_default() += 1;
                *gaps.entry(key(hi - a)).or_default() += 1;
            }
        }
        let max_gap = f64::from_bits(*gaps.keys().next_back().unwrap());
        while next < order.len() && max_gap <= thetas[order[next]] {
            out[order[next]] = Some(m);
            next += 1;
        }
        if next == order.len() {
            break;
        }
    }
    out
}

/// The (ε, θ) grid searched by [`nonempty_threshold_bound_2d`].
fn cone_grid() -> (Vec<f64>, Vec<f64>) {
    let logspace = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        (0..n).map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (n - 1) as f64).exp()).collect()
    };
    (logspace(1e-6, 0.5, 64), logspace(1e-3, FRAC_PI_2 * 0.999, 64))
}

/// Threshold τ < t₀ above which A_t has non-empty interior, from a maximal
/// ratio rotation whose angle passes the irrationality proxy and a
/// contracting member with a different fixed point.
pub fn nonempty_threshold_bound_2d(family: &OneParamFamily) -> Result<ConeParams> {
    let na = |m: &str| Error::NotApplicable(m.to_string());
    if family.dim != 2 {
        return Err(na("cone bound needs d = 2"));
    }
    let (ratios, argmax) = scaling_data(family).map_err(|_| na("not a similarity family"))?;
    let t0 = 1.0 / ratios[argmax];
    let c = classify(family, &default_samples(2, 0.5 * t0));
    if !c.is_semi_linear || c.is_linear || !is_semi_linear(family) {
        return Err(na("family must be semi-linear and not linear"));
    }
    let r_max = ratios[argmax];
    let top = |i: usize| ratios[i] >= r_max * (1.0 - CLASSIFY_TOL);
    let rotation = (0..family.len())
        .filter(|&i| top(i))
        .filter_map(|i| {
            let l = family.members[i].f.l.scale(1.0 / r_max);
            (l.det() > 0.0).then(|| (i, l.get(1, 0).atan2(l.get(0, 0))))
        })
        .map(|(i, phi)| (i, phi, rational_distance(phi / PI)))
        .find(|x| x.2 > 1e-6)
        .ok_or_else(|| na("no maximal-ratio rotation by an irrational multiple of π (proxy q ≤ 64, 1e-6)"))?;
    let (iso, phi, rdist) = rotation;
    let q0 = family.members[iso].q;
    let scale = 1.0 + q0.norm();
    let (contraction, s) = (0..family.len())
        .filter(|&i| !top(i) && (family.members[i].q - q0).norm() > CLASSIFY_TOL * scale)
        .map(|i| (i, ratios[i] / r_max))
        .fold(None, |best: Option<(usize, f64)>, x| if best.map_or(true, |b| x.1 > b.1) { Some(x) } else { best })
        .ok_or_else(|| na("no member with ratio below the maximum and a different fixed point"))?;

    let (eps_grid, theta_grid) = cone_grid();
    let steps = orbit_density_steps(phi, &theta_grid);
    let mut best: Option<(f64, f64, f64, usize)> = None;
    for &eps in &eps_grid {
        for (ti, &theta) in theta_grid.iter().enumerate() {
            let Some(m) = steps[ti] else { continue };
            if cone_slack(eps, theta, s) < CONE_MARGIN {
                continue;
            }
            let tau = (1.0 - eps).powf(1.0 / (m as f64 + 1.0));
            if best.map_or(true, |b| tau < b.0) {
                best = Some((tau, eps, theta, m));
            }
        }
    }
    let (tau, epsilon, theta, m) = best.ok_or(Error::NoFeasibleCone)?;
    let g = family.members[contraction].at(t0);
    let p = g.apply(&q0) - q0;
    Ok(ConeParams {
        epsilon,
        theta,
        m,
        s,
        tau: tau * t0,
        phi,
        rational_distance: rdist,
        p: p.to_vec(),
        r: p.norm(),
        rotation_member: iso,
        contraction_member: contraction,
    })
}

// ---------------------------------------------------------------------------
// Scans

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Interior {
    EmptyCertified,
    NonEmptyCertified,
    Unknown,
}

impl Interior {
    pub fn as_str(&self) -> &'static str {
        match self {
            Interior::EmptyCertified => "empty-certified",
            Interior::NonEmptyCertified => "nonempty-certified",
            Interior::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InteriorCertificate {
    MeasureBound { t_m: f64 },
    Ball { center: Vec<f64>, radius: f64, depth: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InteriorStatus {
    pub t: f64,
    pub status: Interior,
    pub certificate: Option<InteriorCertificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InteriorScan {
    pub rows: Vec<InteriorStatus>,
    pub measure_threshold: f64,
    /// Bracket for t₂ (empty below, non-empty above), assuming tameness.
    pub t2_bracket: Option<(f64, f64)>,
    pub assumes_tame: bool,
    /// An empty certificate above a non-empty one: the family is not tame.
    pub inconsistency: Option<String>,
}

pub const DEFAULT_SUBDIVISION: usize = 4;

/// Interior status of `A_t` for a single `t`.
pub fn interior_status(family: &OneParamFamily, t: f64, cell: f64, max_n: usize) -> Result<InteriorStatus> {
    let t_m = measure_zero_threshold(family);
    if t < t_m {
        return Ok(InteriorStatus { t, status: Interior::EmptyCertified, certificate: Some(InteriorCertificate::MeasureBound { t_m }) });
    }
    let maps = family.instantiate(t);
    let trap = trapping_ball(family, t)?;
    let cover = CoverEngine::new(&maps, trap, CoverConfig::default())?.cover(cell)?;
    for ball in candidate_balls(&cover) {
        if let Some(n) = certify_ball(&maps, &ball, max_n, DEFAULT_SUBDIVISION)? {
            return Ok(InteriorStatus {
                t,
                status: Interior::NonEmptyCertified,
                certificate: Some(InteriorCertificate::Ball { center: ball.center.to_vec(), radius: ball.radius, depth: n }),
            });
        }
    }
    Ok(InteriorStatus { t, status: Interior::Unknown, certificate: None })
}

pub fn interior_scan(family: &OneParamFamily, t_grid: &[f64], cell: f64, max_n: usize) -> Result<InteriorScan> {
    let rows: Vec<InteriorStatus> = t_grid
        .par_iter()
        .map(|&t| interior_status(family, t, cell, max_n))
        .collect::<Result<Vec<_>>>()?;
    let tame = scaling_data(family).is_ok() && is_semi_linear(family);
    let mut t2_bracket = None;
    let mut inconsistency = None;
    if tame {
        let last_empty = rows.iter().filter(|r| r.status == Interior::EmptyCertified).map(|r| r.t).fold(None, |m: Option<f64>, t| Some(m.map_or(t, |m| m.max(t))));
        let first_full = rows.iter().filter(|r| r.status == Interior::NonEmptyCertified).map(|r| r.t).fold(None, |m: Option<f64>, t| Some(m.map_or(t, |m| m.min(t))));
        if let (Some(e), Some(f)) = (last_empty, first_full) {
            if e > f {
                inconsistency = Some(format!("empty interior certified at t = {e} above non-empty at t = {f}"));
            } else {
                t2_bracket = Some((e, f));
            }
        }
    }
    Ok(InteriorScan { rows, measure_threshold: measure_zero_threshold(family), t2_bracket, assumes_tame: tame, inconsistency })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::Matrix;
    use rand_core::{RngCore, SeedableRng};

    #[test]
    fn measure_thresholds() {
        assert!((measure_zero_threshold(&fixtures::example_1_1()) - 1.16f64.powf(-0.5)).abs() < 1e-12);
        assert!((measure_zero_threshold(&fixtures::example_4_6()) - 0.5).abs() < 1e-15);
        let eq4 = fixtures::eq4(std::f64::consts::FRAC_PI_4);
        assert!((measure_zero_threshold(&eq4) - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rotation_about_centre_certifies_at_depth_one() {
        let c = Vector::from_slice(&[1.0, 2.0]);
        let l = Matrix::rotation_scaling(1.0, 0.3);
        let map = AffineMap::new(l, c - l.mul_vec(&c));
        assert!(ball_certificate(&[map], &Ball::new(c, 0.5), 1, 4).unwrap());
        let shifted = AffineMap::new(l, c - l.mul_vec(&c) + Vector::from_slice(&[0.01, 0.0]));
        assert!(!ball_certificate(&[shifted], &Ball::new(c, 0.5), 1, 4).unwrap());
    }

    #[test]
    fn interval_certificate_in_one_dimension() {
        // {0.6x, 0.6x + 0.4} has attractor [0, 1]; [0.1, 0.9] maps onto
        // [0.06, 0.54] ∪ [0.46, 0.94]
        let maps = vec![
            AffineMap::new(Matrix::scalar(1, 0.6), Vector::zeros(1)),
            AffineMap::new(Matrix::scalar(1, 0.6), Vector::from_slice(&[0.4])),
        ];
        let ball = Ball::new(Vector::from_slice(&[0.5]), 0.4);
        assert_eq!(certify_ball(&maps, &ball, 8, 4).unwrap(), Some(1));
        let outside = Ball::new(Vector::from_slice(&[0.9]), 0.3);
        assert_eq!(certify_ball(&maps, &outside, 8, 4).unwrap(), None);
    }

    #[test]
    fn budget_is_enforced() {
        let maps = fixtures::example_1_1().instantiate(0.5);
        let many: Vec<AffineMap> = (0..8).map(|k| maps[k % 2]).collect();
        let ball = Ball::new(Vector::zeros(2), 1.0);
        assert!(matches!(ball_certificate(&many, &ball, 8, 4), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn eq4_interior_ball() {
        let phi = std::f64::consts::FRAC_PI_4;
        let fam = fixtures::eq4(phi);
        let s = interior_status(&fam, 0.9, 1.0 / 128.0, 8).unwrap();
        assert_eq!(s.status, Interior::NonEmptyCertified, "{s:?}");
        // Monte Carlo: sampled points of the ball lie in the cover (cell slack)
        let Some(InteriorCertificate::Ball { center, radius, .. }) = s.certificate else { panic!() };
        let maps = fam.instantiate(0.9);
        let cell = 1.0 / 128.0;
        let cover = crate::attractor::compute_attractor(&maps, &trapping_ball(&fam, 0.9).unwrap(), cell, 0).unwrap();
        let mut rng = rand_pcg::Lcg64Xsh32::seed_from_u64(5);
        let mut u = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        for _ in 0..100_000 {
            let (a, r) = (TAU * u(), radius * u().sqrt());
            let p = [center[0] + r * a.cos(), center[1] + r * a.sin()];
            assert!(cover.contains_point(p, cell), "{p:?} outside cover");
        }
    }

    #[test]
    fn orbit_steps_match_direct_simulation() {
        let phi = 1.0;
        let thetas = [1.0, 0.5, 0.2, 0.05];
        let steps = orbit_density_steps(phi, &thetas);
        for (theta, m) in thetas.iter().zip(steps) {
            let m = m.unwrap();
            let gap = |m: usize| {
                let mut a: Vec<f64> = (0..=m).map(|k| (k as f64 * phi).rem_euclid(TAU)).collect();
                a.sort_by(f64::total_cmp);
                let mut g = TAU - a[a.len() - 1] + a[0];
                for w in a.windows(2) {
                    g = g.max(w[1] - w[0]);
                }
                g
            };
            assert!(gap(m) <= *theta);
            assert!(m == 0 || gap(m - 1) > *theta);
        }
    }

    #[test]
    fn cone_bound_cases() {
        let one = fixtures::rotation_pair("rot1", 1.0, 0.4);
        let p = nonempty_threshold_bound_2d(&one).unwrap();
        assert!(cone_slack(p.epsilon, p.theta, p.s) >= 1e-9);
        assert!((p.tau - (1.0 - p.epsilon).powf(1.0 / (p.m as f64 + 1.0))).abs() < 1e-15);
        // must not undercut the measure bound (1 + 0.4²)^{−1/2}
        assert!(p.tau < 1.0 && p.tau >= measure_zero_threshold(&one), "{p:?}");
        assert!(matches!(nonempty_threshold_bound_2d(&fixtures::example_1_1()), Err(Error::NotApplicable(_))));
        let iso = fixtures::rotation_pair("iso", 1.0, 1.0);
        assert!(matches!(nonempty_threshold_bound_2d(&iso), Err(Error::NotApplicable(_))));
        // s = 1: 2(1−ε)cos θ > 1 for small ε, θ
        assert!(cone_slack(1e-3, 1e-2, 1.0) > 0.0);
        assert!(cone_slack(0.3, 1.2, 1.0) < 0.0);
    }

    #[test]
    fn distance_transform_of_square() {
        let cells: Vec<[i64; 2]> = (0..7).flat_map(|i| (0..7).map(move |j| [i, j])).collect();
        let cover = BoxCover::from_cells(2, 1.0, cells);
        let d = distance_transform(&cover);
        assert_eq!(d.iter().max(), Some(&4));
        let balls = candidate_balls(&cover);
        assert_eq!(balls[0].center.as_slice(), &[3.5, 3.5]);
        assert!((balls[0].radius - 1.75).abs() < 1e-12);
    }

    #[test]
    fn tiny_t_is_empty() {
        for fam in fixtures::all() {
            let s = interior_status(&fam, 0.01, 0.1, 1).unwrap();
            assert_eq!(s.status, Interior::EmptyCertified, "{}", fam.name);
        }
    }
}

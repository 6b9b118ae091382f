//! Invariant checks on random 2-D families, shared by the property suite
//! and the acceptance run.
#![allow(dead_code)]

use ifslab_core::attractor::{chaos_game, trapping_ball, BoxCover, CoverConfig, CoverEngine};
use ifslab_core::scan::{family_scan, Analyses};
use ifslab_core::topology::{components, strongly_disconnected, weak_components, SeparationWitness};
use ifslab_core::{jsr_bounds, FamilyMember, Matrix, OneParamFamily, Vector};
use rand_core::{RngCore, SeedableRng};
use rand_pcg::Pcg64;

pub type Check = Result<(), String>;

/// Parameter at which the cover checks run.
pub const T_CHECK: f64 = 0.9;
/// Cells across the trap diameter.
pub const CELLS_ACROSS: f64 = 128.0;

fn uniform(rng: &mut Pcg64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Two or three members; each `L = R(θ)·diag(σ₁, ±σ₂)·R(ψ)` with singular
/// values in [0.2, 0.95], `a` and `q` in [−1, 1]².
pub fn random_family(seed: u64) -> OneParamFamily {
    let mut rng = Pcg64::seed_from_u64(seed);
    let n = 2 + (rng.next_u64() % 2) as usize;
    let members = (0..n)
        .map(|_| {
            let (th, ps) = (uniform(&mut rng, 0.0, std::f64::consts::TAU), uniform(&mut rng, 0.0, std::f64::consts::TAU));
            let s1 = uniform(&mut rng, 0.2, 0.95);
            let s2 = uniform(&mut rng, 0.2, 0.95) * if rng.next_u64() % 4 == 0 { -1.0 } else { 1.0 };
            let l = Matrix::rotation_scaling(1.0, th) * Matrix::diag(&[s1, s2]) * Matrix::rotation_scaling(1.0, ps);
            let a = Vector::from_slice(&[uniform(&mut rng, -1.0, 1.0), uniform(&mut rng, -1.0, 1.0)]);
            let q = Vector::from_slice(&[uniform(&mut rng, -1.0, 1.0), uniform(&mut rng, -1.0, 1.0)]);
            FamilyMember::new(l, a, q)
        })
        .collect();
    OneParamFamily::new(format!("random-{seed}"), members).unwrap()
}

pub fn cover_of(family: &OneParamFamily, t: f64) -> (CoverEngine, BoxCover) {
    let trap = trapping_ball(family, t).unwrap();
    let engine = CoverEngine::new(&family.instantiate(t), trap, CoverConfig::default()).unwrap();
    let cover = engine.cover(trap.diameter() / CELLS_ACROSS).unwrap();
    (engine, cover)
}

/// lower ≤ upper at every depth; lower never drops and upper never rises
/// as the depth grows.
pub fn jsr_ordering(family: &OneParamFamily) -> Check {
    let parts = family.linear_parts();
    let mut prev: Option<(f64, f64)> = None;
    for depth in 1..=8 {
        let b = jsr_bounds(&parts, depth).map_err(|e| e.to_string())?;
        if !(b.lower <= b.upper) {
            return Err(format!("depth {depth}: lower {} > upper {}", b.lower, b.upper));
        }
        if let Some((lo, hi)) = prev {
            if b.lower < lo || b.upper > hi {
                return Err(format!("depth {depth}: [{}, {}] not inside [{lo}, {hi}]", b.lower, b.upper));
            }
        }
        prev = Some((b.lower, b.upper));
    }
    Ok(())
}

pub fn fixed_points_contained(family: &OneParamFamily, cover: &BoxCover) -> Check {
    for (i, m) in family.members.iter().enumerate() {
        let p = m.fixed_point(T_CHECK).map_err(|e| e.to_string())?;
        if !cover.contains_point(p.xy(), 1e-9 * cover.cell) {
            return Err(format!("fixed point of member {i} at {:?} outside the cover", p.xy()));
        }
    }
    Ok(())
}

/// Weak components partition the cells, each is a union of connected
/// components, and no line splits any of them.
pub fn weak_partition(cover: &BoxCover) -> Check {
    let weak = weak_components(cover).map_err(|e| e.to_string())?;
    let mut all: Vec<[i64; 2]> = weak.iter().flatten().copied().collect();
    all.sort_unstable();
    if all != cover.cells {
        return Err("weak components do not partition the cover".into());
    }
    let owner = |c: &[i64; 2]| weak.iter().position(|w| w.binary_search(c).is_ok()).unwrap();
    for comp in components(cover).map_err(|e| e.to_string())?.components {
        let k = owner(&comp[0]);
        if comp.iter().any(|c| owner(c) != k) {
            return Err("a connected component is split between weak components".into());
        }
    }
    for w in &weak {
        let sub = BoxCover::from_cells(cover.dim, cover.cell, w.clone());
        if strongly_disconnected(&sub).map_err(|e| e.to_string())?.is_some() {
            return Err(format!("a weak component of {} cells is separable", w.len()));
        }
    }
    Ok(())
}

/// The eight lattice symmetries of the square grid, as integer matrices.
const SYMMETRIES: [[[i64; 2]; 2]; 8] = [
    [[1, 0], [0, 1]],
    [[0, -1], [1, 0]],
    [[-1, 0], [0, -1]],
    [[0, 1], [-1, 0]],
    [[1, 0], [0, -1]],
    [[-1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1], [-1, 0]],
];

fn apply(m: &[[i64; 2]; 2], x: [f64; 2]) -> [f64; 2] {
    [m[0][0] as f64 * x[0] + m[0][1] as f64 * x[1], m[1][0] as f64 * x[0] + m[1][1] as f64 * x[1]]
}

/// Whether the strip of half-width `margin` around the line misses every
/// cell, with cells on both sides.
pub fn witness_valid(cover: &BoxCover, w: &SeparationWitness) -> bool {
    let tol = 1e-9 * cover.cell;
    let (mut below, mut above) = (0, 0);
    for &c in &cover.cells {
        let proj: Vec<f64> = cover.corners_of(c).iter().map(|p| w.normal[0] * p[0] + w.normal[1] * p[1]).collect();
        let lo = proj.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = proj.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi <= w.offset - w.margin + tol {
            below += 1;
        } else if lo >= w.offset + w.margin - tol {
            above += 1;
        } else {
            return false;
        }
    }
    below > 0 && above > 0
}

/// Maps the cover by `x ↦ s·M·x + v·h'` (M a grid symmetry, h' = s·h,
/// v an integer shift), which sends cells to cells exactly. The witness of
/// the image must have the scaled margin, and the mapped witness must
/// separate the image.
pub fn witness_equivariance(cover: &BoxCover) -> Check {
    let w = strongly_disconnected(cover).map_err(|e| e.to_string())?;
    for (k, m) in SYMMETRIES.iter().enumerate() {
        for (s, v) in [(1.0, [0i64, 0]), (2.0, [3, -5]), (0.5, [-7, 2])] {
            let h = cover.cell * s;
            let cells = cover
                .cells
                .iter()
                .map(|c| {
                    let centre = apply(m, [c[0] as f64 + 0.5, c[1] as f64 + 0.5]);
                    [(centre[0] - 0.5).round() as i64 + v[0], (centre[1] - 0.5).round() as i64 + v[1]]
                })
                .collect();
            let image = BoxCover::from_cells(cover.dim, h, cells);
            let w2 = strongly_disconnected(&image).map_err(|e| e.to_string())?;
            match (&w, &w2) {
                (None, None) => {}
                (Some(a), Some(b)) => {
                    if (b.margin - s * a.margin).abs() > 1e-9 * h.max(b.margin) {
                        return Err(format!("symmetry {k}, scale {s}: margin {} vs {}", b.margin, s * a.margin));
                    }
                    let n = apply(m, a.normal);
                    let shift = [v[0] as f64 * h, v[1] as f64 * h];
                    let mapped = SeparationWitness {
                        normal: n,
                        offset: s * a.offset + n[0] * shift[0] + n[1] * shift[1],
                        margin: s * a.margin,
                        side_counts: a.side_counts,
                    };
                    if !witness_valid(&image, &mapped) {
                        return Err(format!("symmetry {k}, scale {s}: mapped witness does not separate the image"));
                    }
                }
                _ => return Err(format!("symmetry {k}, scale {s}: separability changed")),
            }
        }
    }
    if let Some(a) = &w {
        if !witness_valid(cover, a) {
            return Err("witness does not separate the cover".into());
        }
    }
    Ok(())
}

/// One more sweep of the operator re-covers every cell, exact images of
/// cell corners stay in the cover, and chaos-game orbit points (points of
/// the attractor) lie in it.
pub fn sweep_soundness(engine: &CoverEngine, cover: &BoxCover, seed: u64) -> Check {
    let tol = 1e-9 * cover.cell;
    let swept = engine.sweep(cover);
    if let Some(c) = cover.cells.iter().find(|c| swept.binary_search(c).is_err()) {
        return Err(format!("cell {c:?} not re-covered by one sweep"));
    }
    for &c in cover.cells.iter().step_by(11) {
        for corner in cover.corners_of(c) {
            for m in &engine.code().maps {
                let img = m.apply(&Vector::from_slice(&corner)).xy();
                if !cover.contains_point(img, tol) {
                    return Err(format!("corner image {img:?} outside the cover"));
                }
            }
        }
    }
    let sample = chaos_game(engine.maps(), 2000, &[], seed).map_err(|e| e.to_string())?;
    if let Some(p) = sample.points.iter().find(|p| !cover.contains_point(**p, tol)) {
        return Err(format!("orbit point {p:?} outside the cover"));
    }
    Ok(())
}

pub const SCAN_GRID: [f64; 3] = [0.3, 0.6, 0.9];

/// `family_scan` JSON is byte-identical under 1, 2 and 8 worker threads.
pub fn scan_reproducible(family: &OneParamFamily) -> Check {
    let trap = trapping_ball(family, SCAN_GRID[2]).map_err(|e| e.to_string())?;
    let cell = trap.diameter() / 64.0;
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| family_scan(family, &SCAN_GRID, Analyses::all(), cell)).map(|r| r.to_json()).map_err(|e| e.to_string())
    };
    let one = run(1)?;
    for threads in [2, 8] {
        if run(threads)? != one {
            return Err(format!("family_scan output differs with {threads} threads"));
        }
    }
    Ok(())
}

/// All checks on one family.
pub fn check_family(seed: u64) -> Vec<(&'static str, Check)> {
    let family = random_family(seed);
    let (engine, cover) = cover_of(&family, T_CHECK);
    vec![
        ("jsr ordering/monotonicity", jsr_ordering(&family)),
        ("fixed-point containment", fixed_points_contained(&family, &cover)),
        ("weak-component partition", weak_partition(&cover)),
        ("separation witness equivariance", witness_equivariance(&cover)),
        ("outer-cover sweep soundness", sweep_soundness(&engine, &cover, seed)),
        ("family_scan thread reproducibility", scan_reproducible(&family)),
    ]
}

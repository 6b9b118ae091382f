//! Linear / quasi-linear / semi-linear / similarity / bounded / degenerate
//! classification of a family.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::OneParamFamily;
use crate::linalg::{eigenspace, eigenvalues, Matrix, Vector};

/// Relative tolerance for the algebraic identities tested here.
pub const CLASSIFY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub is_similarity: bool,
    pub is_linear: bool,
    pub is_quasi_linear: bool,
    pub is_semi_linear: bool,
    pub is_bounded: bool,
    pub is_degenerate: TriState,
    /// Similarity ratios in member order; empty unless `is_similarity`.
    pub scaling_ratios: Vec<f64>,
}

/// A witness `W = p + span(basis)` for a degenerate family.
#[derive(Clone, Debug, PartialEq)]
pub struct Degeneracy {
    pub status: TriState,
    pub point: Option<Vector>,
    pub basis: Vec<Vector>,
}

fn close(a: &Vector, b: &Vector, tol: f64) -> bool {
    (*a - *b).max_abs() <= tol * (1.0 + a.max_abs().max(b.max_abs()))
}

/// Ratio r when `LᵀL = r²I` within tolerance.
pub fn similarity_ratio(l: &Matrix) -> Option<f64> {
    let g = l.transpose() * *l;
    let d = l.dim() as f64;
    let r2 = g.det().abs().powf(1.0 / d);
    if g.approx_eq(&Matrix::scalar(l.dim(), r2), CLASSIFY_TOL * r2.max(f64::MIN_POSITIVE)) {
        Some(r2.sqrt())
    } else {
        None
    }
}

pub fn is_semi_linear(family: &OneParamFamily) -> bool {
    family.members.iter().all(|m| {
        let r = m.f.apply(&m.q);
        r.max_abs() <= CLASSIFY_TOL * (1.0 + m.f.l.max_abs() * m.q.max_abs() + m.f.a.max_abs())
    })
}

fn all_offsets_equal(family: &OneParamFamily) -> bool {
    let q0 = family.members[0].q;
    family.members.iter().all(|m| close(&m.q, &q0, CLASSIFY_TOL))
}

fn quasi_linear_on(family: &OneParamFamily, t_samples: &[f64]) -> bool {
    let mut checked = 0;
    for &t in t_samples {
        let fps: std::result::Result<Vec<Vector>, _> = family.members.iter().map(|m| m.fixed_point(t)).collect();
        let Ok(fps) = fps else { continue };
        if !fps.iter().all(|p| close(p, &fps[0], CLASSIFY_TOL)) {
            return false;
        }
        checked += 1;
    }
    checked > 0
}

/// `2d + 3` sample points spread over `(0, t_hi)`.
pub fn default_samples(dim: usize, t_hi: f64) -> Vec<f64> {
    let n = 2 * dim + 3;
    (1..=n).map(|k| t_hi * k as f64 / (n + 1) as f64).collect()
}

/// Ratios and index of the (first) maximum.
pub fn scaling_data(family: &OneParamFamily) -> Result<(Vec<f64>, usize)> {
    let ratios: Option<Vec<f64>> = family.members.iter().map(|m| similarity_ratio(&m.f.l)).collect();
    let ratios = ratios.ok_or(Error::NotSimilarity)?;
    let argmax = ratios
        .iter()
        .enumerate()
        .fold(0, |best, (i, r)| if *r > ratios[best] { i } else { best });
    Ok((ratios, argmax))
}

/// Index of the unique member with maximal ratio, if there is one.
pub fn unique_max_ratio(ratios: &[f64]) -> Option<usize> {
    let max = ratios.iter().copied().fold(f64::MIN, f64::max);
    let top: Vec<usize> = (0..ratios.len()).filter(|&i| ratios[i] >= max * (1.0 - CLASSIFY_TOL)).collect();
    (top.len() == 1).then(|| top[0])
}

pub fn classify(family: &OneParamFamily, t_samples: &[f64]) -> Classification {
    let semi = is_semi_linear(family);
    let linear = semi && all_offsets_equal(family);
    let quasi = linear || quasi_linear_on(family, t_samples);
    let ratios = scaling_data(family).map(|(r, _)| r).ok();
    let is_similarity = ratios.is_some();
    let is_bounded = semi && ratios.as_deref().and_then(unique_max_ratio).is_some();
    let is_degenerate = if family.dim <= 3 { detect_degenerate(family).map(|d| d.status).unwrap_or(TriState::Unknown) } else { TriState::Unknown };
    Classification {
        is_similarity,
        is_linear: linear,
        is_quasi_linear: quasi,
        is_semi_linear: semi,
        is_bounded,
        is_degenerate,
        scaling_ratios: ratios.unwrap_or_default(),
    }
}

fn parallel(u: &Vector, dir: &Vector, tol: f64) -> bool {
    let along = dir.scale(u.dot(dir) / dir.dot(dir));
    (*u - along).norm() <= tol * (1.0 + u.norm())
}

fn orthogonal(u: &Vector, normal: &Vector, tol: f64) -> bool {
    u.dot(&normal.normalized()).abs() <= tol * (1.0 + u.norm())
}

/// Real eigenvectors of `m`; the flag is false when an eigenspace of
/// dimension ≥ 2 made the candidate list incomplete.
fn candidate_directions(m: &Matrix) -> (Vec<Vector>, bool) {
    let mut out = Vec::new();
    let mut complete = true;
    for e in eigenvalues(m) {
        if !e.is_real(1e-9) {
            continue;
        }
        let space = eigenspace(m, e.re, 1e-9);
        if space.len() == 1 {
            out.push(space[0]);
        } else {
            complete = false;
        }
    }
    (out, complete)
}

/// Searches for a proper affine subspace `W = p + V` with every `q_i ∈ W`,
/// `L_i V ⊆ V` and `f_i(W) ⊆ V`.
pub fn detect_degenerate(family: &OneParamFamily) -> Result<Degeneracy> {
    let d = family.dim;
    if d > 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    let none = |status| Degeneracy { status, point: None, basis: vec![] };
    if d == 1 {
        return Ok(none(TriState::No));
    }
    let tol = CLASSIFY_TOL;
    let p = family.members[0].q;
    // Vectors that must lie in V: offset differences and f_i(p).
    let required: Vec<Vector> = family
        .members
        .iter()
        .flat_map(|m| [m.q - p, m.f.apply(&p)])
        .filter(|u| u.max_abs() > tol * (1.0 + p.max_abs()))
        .collect();
    if required.is_empty() {
        return Ok(Degeneracy { status: TriState::Yes, point: Some(p), basis: vec![] });
    }
    let mats: Vec<Matrix> = family.linear_parts();
    let non_scalar: Vec<&Matrix> = mats.iter().filter(|m| !m.is_scalar(tol)).collect();

    // Lines: V = span(v), v a common eigenvector.
    let mut complete = true;
    let mut dirs: Vec<Vector> = Vec::new();
    if non_scalar.is_empty() {
        dirs.push(required[0]);
    } else {
        for m in &non_scalar {
            let (c, ok) = candidate_directions(m);
            complete &= ok;
            dirs.extend(c);
        }
    }
    for v in &dirs {
        let invariant = mats.iter().all(|m| parallel(&m.mul_vec(v), v, 1e-8));
        if invariant && required.iter().all(|u| parallel(u, v, 1e-8)) {
            return Ok(Degeneracy { status: TriState::Yes, point: Some(p), basis: vec![v.normalized()] });
        }
    }
    if d == 2 {
        // Every 1-D invariant subspace of a non-scalar 2×2 matrix is an
        // eigenline; with all-scalar parts V is forced by `required`.
        return Ok(none(if complete { TriState::No } else { TriState::Unknown }));
    }

    // Planes in 3-D: V = n^⊥ with n an eigenvector of every L_iᵀ.
    let mut normals: Vec<Vector> = Vec::new();
    let mut plane_complete = true;
    if non_scalar.is_empty() {
        let a = required[0];
        match required.iter().map(|u| a.cross(u)).find(|c| c.norm() > 1e-8 * (1.0 + a.norm() * a.norm())) {
            Some(n) => normals.push(n),
            None => {
                let helper = if a[0].abs() < 0.9 * a.norm() { Vector::unit(3, 0) } else { Vector::unit(3, 1) };
                normals.push(a.cross(&helper));
            }
        }
    } else {
        for m in &non_scalar {
            let (c, ok) = candidate_directions(&m.transpose());
            plane_complete &= ok;
            normals.extend(c);
        }
    }
    for n in &normals {
        let invariant = mats.iter().all(|m| parallel(&m.transpose().mul_vec(n), n, 1e-8));
        if invariant && required.iter().all(|u| orthogonal(u, n, 1e-8)) {
            let n = n.normalized();
            let helper = if n[0].abs() < 0.9 { Vector::unit(3, 0) } else { Vector::unit(3, 1) };
            let u = n.cross(&helper).normalized();
            let w = n.cross(&u).normalized();
            return Ok(Degeneracy { status: TriState::Yes, point: Some(p), basis: vec![u, w] });
        }
    }
    Ok(none(if complete && plane_complete { TriState::No } else { TriState::Unknown }))
}

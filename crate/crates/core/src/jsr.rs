//! Joint spectral radius bounds and the existence threshold t₀ = 1/ρ(F).

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::scaling_data;
use crate::error::{Error, Result};
use crate::family::OneParamFamily;
use crate::linalg::{spectral_norm, Matrix};

pub use crate::linalg::spectral_radius;

pub const DEFAULT_DEPTH: usize = 10;
pub const MAX_DEPTH: usize = 20;

/// A word `i₁ i₂ ⋯ i_k` over member indices (0-based). `L_σ = L_{i₁} ⋯ L_{i_k}`.
pub type Word = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JsrBounds {
    pub lower: f64,
    pub upper: f64,
    pub depth: usize,
    pub witness_word: Word,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Threshold {
    pub t0_lo: f64,
    pub t0_hi: f64,
    pub exact: bool,
    pub bounds: Option<JsrBounds>,
}

/// Evaluates `L_σ`.
pub fn word_matrix(parts: &[Matrix], word: &[usize]) -> Matrix {
    word.iter().fold(Matrix::identity(parts[0].dim()), |acc, &i| acc * parts[i])
}

#[derive(Clone, Debug)]
struct Partial {
    lower: f64,
    witness: Word,
    /// `upper_at[ℓ-1]` ≥ max over length-ℓ words of ‖L_σ‖.
    upper_at: Vec<f64>,
}

impl Partial {
    fn new(depth: usize) -> Self {
        Self { lower: 0.0, witness: Vec::new(), upper_at: vec![0.0; depth] }
    }

    fn offer_lower(&mut self, value: f64, word: &[usize]) {
        let tie = (value - self.lower).abs() <= 1e-12 * self.lower;
        if (value > self.lower && !tie) || (tie && word < self.witness.as_slice()) || self.witness.is_empty() {
            self.lower = value;
            self.witness = word.to_vec();
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        if !other.witness.is_empty() {
            self.offer_lower(other.lower, &other.witness);
        }
        for (a, b) in self.upper_at.iter_mut().zip(other.upper_at) {
            *a = a.max(b);
        }
        self
    }
}

struct Search<'a> {
    parts: &'a [Matrix],
    depth: usize,
    max_norm: f64,
    /// Pruning threshold, fixed before the parallel phase so the visited
    /// set does not depend on scheduling.
    prune_below: f64,
}

impl Search<'_> {
    /// Whether no extension of a word of length `k` and norm `n` can beat `prune_below`.
    fn prunable(&self, k: usize, n: f64) -> bool {
        (0..=self.depth - k).all(|j| (n * self.max_norm.powi(j as i32)).powf(1.0 / (k + j) as f64) <= self.prune_below)
    }

    fn visit(&self, word: &mut Word, m: Matrix, acc: &mut Partial) {
        let k = word.len();
        let n = spectral_norm(&m);
        acc.offer_lower(spectral_radius(&m).powf(1.0 / k as f64), word);
        if self.prunable(k, n) {
            // Everything below is bounded by n·max_norm^j.
            for j in 0..=self.depth - k {
                let b = n * self.max_norm.powi(j as i32);
                acc.upper_at[k + j - 1] = acc.upper_at[k + j - 1].max(b);
            }
            return;
        }
        acc.upper_at[k - 1] = acc.upper_at[k - 1].max(n);
        if k == self.depth {
            return;
        }
        for i in 0..self.parts.len() {
            word.push(i);
            self.visit(word, m * self.parts[i], acc);
            word.pop();
        }
    }
}

/// Bounds on ρ(F) from words of length ≤ `max_depth` (clamped to [`MAX_DEPTH`]).
///
/// `lower = max ρ(L_σ)^{1/|σ|}`, `upper = min_ℓ (max_{|σ|=ℓ} ‖L_σ‖₂)^{1/ℓ}`. Pruned
/// subtrees contribute the bound `‖L_σ‖·max‖L_i‖^j`, which never exceeds the
/// current lower bound raised to the length, so pruning does not change
/// either endpoint.
pub fn jsr_bounds(parts: &[Matrix], max_depth: usize) -> Result<JsrBounds> {
    if max_depth < 1 {
        return Err(Error::DepthTooSmall);
    }
    if parts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let depth = max_depth.min(MAX_DEPTH);
    let max_norm = parts.iter().map(spectral_norm).fold(0.0, f64::max);

    // Exhaustive seed up to length 3 gives a deterministic pruning threshold.
    let seed_depth = depth.min(3);
    let seed = Search { parts, depth: seed_depth, max_norm, prune_below: -1.0 };
    let mut seeded = Partial::new(seed_depth);
    seed.visit_roots(&mut seeded);

    let search = Search { parts, depth, max_norm, prune_below: seeded.lower };
    let result = (0..parts.len())
        .into_par_iter()
        .map(|i| {
            let mut acc = Partial::new(depth);
            search.visit(&mut vec![i], parts[i], &mut acc);
            acc
        })
        .reduce(|| Partial::new(depth), Partial::merge);

    let upper = result
        .upper_at
        .iter()
        .enumerate()
        .map(|(l, n)| n.powf(1.0 / (l + 1) as f64))
        .fold(f64::INFINITY, f64::min);
    Ok(JsrBounds { lower: result.lower, upper: upper.max(result.lower), depth, witness_word: result.witness })
}

impl Search<'_> {
    fn visit_roots(&self, acc: &mut Partial) {
        for i in 0..self.parts.len() {
            self.visit(&mut vec![i], self.parts[i], acc);
        }
    }
}

/// `t₀ = 1/ρ(F)`: exact for similarity families, otherwise `[1/upper, 1/lower]`.
pub fn t0_threshold(family: &OneParamFamily, max_depth: usize) -> Result<Threshold> {
    if max_depth < 1 {
        return Err(Error::DepthTooSmall);
    }
    if let Ok((ratios, argmax)) = scaling_data(family) {
        let t0 = 1.0 / ratios[argmax];
        return Ok(Threshold { t0_lo: t0, t0_hi: t0, exact: true, bounds: None });
    }
    let b = jsr_bounds(&family.linear_parts(), max_depth)?;
    Ok(Threshold { t0_lo: 1.0 / b.upper, t0_hi: 1.0 / b.lower, exact: false, bounds: Some(b) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    /// Unpruned enumeration, the oracle for the pruned search.
    fn brute(parts: &[Matrix], depth: usize) -> (f64, f64) {
        let mut lower: f64 = 0.0;
        let mut upper = f64::INFINITY;
        let mut level: Vec<Matrix> = vec![Matrix::identity(parts[0].dim())];
        for l in 1..=depth {
            level = level.iter().flat_map(|m| parts.iter().map(move |p| *m * *p)).collect();
            let mut max_n: f64 = 0.0;
            for m in &level {
                lower = lower.max(spectral_radius(m).powf(1.0 / l as f64));
                max_n = max_n.max(spectral_norm(m));
            }
            upper = upper.min(max_n.powf(1.0 / l as f64));
        }
        (lower, upper)
    }

    #[test]
    fn single_matrix() {
        let m = Matrix::from_rows(&[[0.6, 0.9], [0.0, 0.5]]).unwrap();
        let b = jsr_bounds(&[m], 1).unwrap();
        assert_eq!(b.lower, spectral_radius(&m));
        let deep = jsr_bounds(&[m], 20).unwrap();
        assert_eq!(deep.lower, spectral_radius(&m));
        assert!(deep.upper < b.upper && deep.upper >= deep.lower);
    }

    #[test]
    fn example_1_1_collapses_at_depth_one() {
        let parts = fixtures::example_1_1().linear_parts();
        let b = jsr_bounds(&parts, 1).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-15 && (b.upper - 1.0).abs() < 1e-15);
        assert_eq!(b.witness_word, vec![0]);
        let t = t0_threshold(&fixtures::example_1_1(), DEFAULT_DEPTH).unwrap();
        assert!(t.exact);
        assert_eq!(t.t0_lo, 1.0);
        assert_eq!(t.t0_hi, 1.0);
    }

    #[test]
    fn example_6_3_brackets_one() {
        let parts = fixtures::example_6_3().linear_parts();
        assert_eq!(jsr_bounds(&parts, 1).unwrap().lower, 1.0);
        let b = jsr_bounds(&parts, 12).unwrap();
        let (lo, hi) = brute(&parts, 12);
        assert_eq!(b.lower, lo);
        assert_eq!(b.upper, hi);
        assert!(b.lower <= 1.0 && 1.0 <= b.upper);
    }

    #[test]
    fn example_4_6_exact() {
        let t = t0_threshold(&fixtures::example_4_6(), DEFAULT_DEPTH).unwrap();
        assert!(t.exact && t.t0_lo == 1.0);
    }

    #[test]
    fn ties_pick_lexicographically_smallest() {
        // both rotations have radius 1; every word ties
        let q = Matrix::rotation_scaling(1.0, FRAC_PI_4);
        let b = jsr_bounds(&[q, q], 4).unwrap();
        assert_eq!(b.witness_word, vec![0]);
    }

    #[test]
    fn depth_too_small() {
        assert_eq!(jsr_bounds(&[Matrix::identity(2)], 0), Err(Error::DepthTooSmall));
    }

    fn arb_parts() -> impl Strategy<Value = Vec<Matrix>> {
        proptest::collection::vec(proptest::collection::vec(-1.0..1.0f64, 4), 2..=3)
            .prop_map(|ms| ms.iter().map(|m| Matrix::from_rows(&[[m[0], m[1]], [m[2], m[3]]]).unwrap()).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn pruned_equals_brute(parts in arb_parts(), depth in 1usize..7) {
            let b = jsr_bounds(&parts, depth).unwrap();
            let (lo, hi) = brute(&parts, depth);
            prop_assert!((b.lower - lo).abs() <= 1e-12 * (1.0 + lo));
            prop_assert!((b.upper - hi).abs() <= 1e-12 * (1.0 + hi));
        }

        #[test]
        fn ordering_and_monotonicity(parts in arb_parts()) {
            let mut prev: Option<JsrBounds> = None;
            for d in 1..=8 {
                let b = jsr_bounds(&parts, d).unwrap();
                prop_assert!(b.lower <= b.upper);
                if let Some(p) = prev {
                    prop_assert!(b.lower >= p.lower && b.upper <= p.upper);
                }
                prev = Some(b);
            }
        }

        #[test]
        fn scale_equivariance(parts in arb_parts(), c in 0.1..5.0f64) {
            let b = jsr_bounds(&parts, 6).unwrap();
            let scaled: Vec<Matrix> = parts.iter().map(|m| m.scale(c)).collect();
            let s = jsr_bounds(&scaled, 6).unwrap();
            prop_assert!((s.lower - c * b.lower).abs() <= 1e-9 * c * (1.0 + b.lower));
            prop_assert!((s.upper - c * b.upper).abs() <= 1e-9 * c * (1.0 + b.upper));
        }

        #[test]
        fn random_affine_pair_brackets_depth_12_estimate(parts in proptest::collection::vec(proptest::collection::vec(-1.0..1.0f64, 4), 2)) {
            let parts: Vec<Matrix> = parts.iter().map(|m| Matrix::from_rows(&[[m[0], m[1]], [m[2], m[3]]]).unwrap()).collect();
            prop_assume!(parts.iter().all(|m| m.det().abs() > 1e-3));
            let members = parts.iter().map(|l| crate::family::FamilyMember::new(*l, crate::linalg::Vector::from_slice(&[0.3, 0.1]), crate::linalg::Vector::from_slice(&[1.0, 0.0]))).collect();
            let fam = OneParamFamily::new("r", members).unwrap();
            let t = t0_threshold(&fam, DEFAULT_DEPTH).unwrap();
            let (lo12, _) = brute(&parts, 12);
            let est = 1.0 / lo12;
            prop_assert!(t.t0_lo <= est * (1.0 + 1e-12) && est <= t.t0_hi * (1.0 + 1e-12));
        }
    }
}

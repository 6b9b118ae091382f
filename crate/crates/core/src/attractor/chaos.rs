//! Chaos-game sampling.
//!
//! The generator is PCG32 (`Lcg64Xsh32`: a 64-bit LCG with an xorshift
//! output permutation) seeded with `seed_from_u64`. Uniform floats take the
//! top 53 bits of `next_u64`, so samples are identical on every platform.

use rand_core::{RngCore, SeedableRng};
use rand_pcg::Lcg64Xsh32;

use super::{to_xy, PointSample};
use crate::error::{Error, Result};
use crate::family::AffineMap;
use crate::linalg::Vector;

pub const BURN_IN: usize = 100;

/// Uniform float in [0, 1) from the top 53 bits.
fn unit_f64(rng: &mut Lcg64Xsh32) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Normalises weights; empty means uniform.
fn normalise(weights: &[f64], n: usize) -> Result<Vec<f64>> {
    if weights.is_empty() {
        return Ok(vec![1.0 / n as f64; n]);
    }
    if weights.len() != n {
        return Err(Error::InvalidArgument(format!("{} weights for {n} maps", weights.len())));
    }
    if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(Error::InvalidArgument("weights must be positive".into()));
    }
    let total: f64 = weights.iter().sum();
    Ok(weights.iter().map(|w| w / total).collect())
}

/// Weights giving the first map probability `p` and sharing the rest evenly.
pub fn first_map_weights(n: usize, p: f64) -> Vec<f64> {
    let mut w = vec![(1.0 - p) / (n - 1) as f64; n];
    w[0] = p;
    w
}

/// Orbit of `n` points after a burn-in of 100 steps, started at the first
/// map's fixed point (or the origin when it has none).
pub fn chaos_game(instance: &[AffineMap], n: usize, weights: &[f64], seed: u64) -> Result<PointSample> {
    let first = instance.first().ok_or(Error::EmptyInput)?;
    if n == 0 {
        return Err(Error::InvalidArgument("sample size must be at least 1".into()));
    }
    let w = normalise(weights, instance.len())?;
    let mut cumulative = Vec::with_capacity(w.len());
    let mut acc = 0.0;
    for x in &w {
        acc += x;
        cumulative.push(acc);
    }
    let mut rng = Lcg64Xsh32::seed_from_u64(seed);
    let mut x = first.fixed_point().unwrap_or_else(|| Vector::zeros(first.dim()));
    let mut points = Vec::with_capacity(n);
    for step in 0..BURN_IN + n {
        let u = unit_f64(&mut rng);
        let k = cumulative.iter().position(|c| u < *c).unwrap_or(instance.len() - 1);
        x = instance[k].apply(&x);
        if step >= BURN_IN {
            points.push(to_xy(&x));
        }
    }
    Ok(PointSample { dim: first.dim(), points, seed, weights: w })
}

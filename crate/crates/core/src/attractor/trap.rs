//! Trapping balls: balls that contain the attractor and are mapped into
//! themselves.

use super::Ball;
use crate::classify::{classify, default_samples, scaling_data, unique_max_ratio};
use crate::error::{Error, Result};
use crate::family::{AffineMap, OneParamFamily};
use crate::linalg::{spectral_norm, Vector};

/// Deepest word length tried when single maps do not contract.
pub const MAX_TRAP_DEPTH: usize = 12;
const WORD_LIMIT: usize = 1 << 20;
const INFLATE: f64 = 1.01;

fn centroid(points: &[Vector], dim: usize) -> Vector {
    if points.is_empty() {
        return Vector::zeros(dim);
    }
    points.iter().fold(Vector::zeros(dim), |acc, p| acc + *p).scale(1.0 / points.len() as f64)
}

fn finish(center: Vector, r: f64) -> Ball {
    Ball::new(center, (r * INFLATE).max(1e-9 * (1.0 + center.norm())))
}

/// Ball `B` around the centroid of the fixed points with `f_σ(B) ⊆ B` for
/// every word of the smallest length m ≤ 12 whose products all contract
/// (m = 1 gives `F(B) ⊆ B`). In every case the attractor lies in `B`.
pub fn instance_trap(maps: &[AffineMap]) -> Result<Ball> {
    let dim = maps.first().ok_or(Error::EmptyInput)?.dim();
    let fps: Vec<Vector> = maps.iter().filter_map(|m| m.fixed_point()).collect();
    let c = centroid(&fps, dim);
    let mut level: Vec<AffineMap> = vec![AffineMap::identity(dim)];
    for _depth in 1..=MAX_TRAP_DEPTH {
        if level.len() * maps.len() > WORD_LIMIT {
            break;
        }
        level = level.iter().flat_map(|w| maps.iter().map(move |m| w.compose(m))).collect();
        let mut r: f64 = 0.0;
        let mut ok = true;
        for w in &level {
            let s = spectral_norm(&w.l);
            if s >= 1.0 {
                ok = false;
                break;
            }
            r = r.max((w.apply(&c) - c).norm() / (1.0 - s));
        }
        if ok {
            return Ok(finish(c, r));
        }
    }
    Err(Error::NoContractiveDepth)
}

/// Trapping ball for `F_t`.
///
/// At t = 0 the maps are constant and the ball is centred at the centroid
/// of the offsets with radius `max|q_i − c| + 1`. Bounded families at
/// `t ≤ t₀` get the t-uniform ball centred at the special fixed point.
/// Everything else uses [`instance_trap`].
pub fn trapping_ball(family: &OneParamFamily, t: f64) -> Result<Ball> {
    if t == 0.0 {
        let qs: Vec<Vector> = family.members.iter().map(|m| m.q).collect();
        let c = centroid(&qs, family.dim);
        let r = qs.iter().map(|q| (*q - c).norm()).fold(0.0, f64::max);
        return Ok(Ball::new(c, r + 1.0));
    }
    if let Some(b) = bounded_trap(family, t) {
        return Ok(b);
    }
    instance_trap(&family.instantiate(t))
}

/// Ball valid for every `t ∈ [0, t₀]` of a bounded family: with ratios
/// normalised so t₀ = 1 and coordinates centred at the special fixed point
/// q*, `R > max_i max(|(I − L_i)p_i|, |p_i|)/(1 − r_i)` over the non-special
/// members, `p_i = q_i − q*`.
pub fn bounded_trap(family: &OneParamFamily, t: f64) -> Option<Ball> {
    let (ratios, _) = scaling_data(family).ok()?;
    let special = unique_max_ratio(&ratios)?;
    let c = classify(family, &default_samples(family.dim, 0.5 / ratios[special]));
    if !c.is_bounded {
        return None;
    }
    let t0 = 1.0 / ratios[special];
    if t > t0 * (1.0 + 1e-12) {
        return None;
    }
    let q_star = family.members[special].q;
    let mut r: f64 = 0.0;
    for (i, m) in family.members.iter().enumerate() {
        if i == special {
            continue;
        }
        let p = m.q - q_star;
        let l = m.f.l.scale(t0);
        let moved = p - l.mul_vec(&p);
        r = r.max(moved.norm().max(p.norm()) / (1.0 - ratios[i] * t0));
    }
    Some(if r == 0.0 { Ball::new(q_star, 1.0) } else { Ball::new(q_star, r * INFLATE + 1e-9) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    /// Maps sampled boundary points and checks they stay inside.
    fn check_invariant(ball: &Ball, maps: &[AffineMap]) {
        let d = ball.center.dim();
        let dirs: Vec<Vector> = if d == 1 {
            vec![Vector::from_slice(&[1.0]), Vector::from_slice(&[-1.0])]
        } else {
            (0..64).map(|k| {
                let a = k as f64 * std::f64::consts::TAU / 64.0;
                Vector::from_slice(&[a.cos(), a.sin()])
            }).collect()
        };
        for m in maps {
            for u in &dirs {
                let p = ball.center + u.scale(ball.radius);
                assert!(ball.contains(&m.apply(&p), 1e-12), "image escapes ball");
            }
        }
    }

    #[test]
    fn example_4_6_contains_interval() {
        let b = trapping_ball(&fixtures::example_4_6(), 0.5).unwrap();
        assert!(b.contains(&Vector::from_slice(&[3.0]), 0.0));
        assert!(b.contains(&Vector::from_slice(&[-3.0]), 0.0));
        check_invariant(&b, &fixtures::example_4_6().instantiate(0.5));
    }

    #[test]
    fn bounded_line_at_t0() {
        let f = fixtures::bounded_line();
        let b = trapping_ball(&f, 1.0).unwrap();
        assert_eq!(b.center[0], 1.0);
        for x in [0.0, 0.5, 1.0] {
            assert!(b.contains(&Vector::from_slice(&[x]), 0.0));
        }
        for t in [0.2, 0.9, 1.0] {
            check_invariant(&b, &f.instantiate(t));
        }
    }

    #[test]
    fn bounded_planar_families_are_uniform() {
        for f in [fixtures::example_8_9(0.4), fixtures::example_8_10(0.4), fixtures::example_8_11(0.4), fixtures::example_1_1()] {
            let b = trapping_ball(&f, 1.0).unwrap();
            for t in [0.3, 0.99, 1.0] {
                check_invariant(&b, &f.instantiate(t));
            }
        }
    }

    #[test]
    fn zero_parameter_ball() {
        let f = fixtures::example_6_3();
        let b = trapping_ball(&f, 0.0).unwrap();
        let c = Vector::from_slice(&[0.5, 0.5]);
        assert_eq!(b.center, c);
        assert!((b.radius - (0.5f64.hypot(0.5) + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn non_contracting_single_maps_use_words() {
        // L = [[0, 2], [0.1, 0]]: norm 2, but L² = 0.2·I
        let l = crate::linalg::Matrix::from_rows(&[[0.0, 2.0], [0.1, 0.0]]).unwrap();
        let maps = vec![
            AffineMap::new(l, Vector::from_slice(&[0.0, 0.0])),
            AffineMap::new(l, Vector::from_slice(&[1.0, 0.0])),
        ];
        let b = instance_trap(&maps).unwrap();
        for m in &maps {
            assert!(b.contains(&m.fixed_point().unwrap(), 0.0));
        }
        let expanding = vec![AffineMap::new(crate::linalg::Matrix::scalar(1, 1.5), Vector::zeros(1))];
        assert_eq!(instance_trap(&expanding), Err(Error::NoContractiveDepth));
    }
}

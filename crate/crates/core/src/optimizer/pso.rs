//! PSO position/velocity dynamics: inertia-weighted velocity update,
//! integer rounding of positions, and the shrink (SHR) boundary repair that
//! drags an out-of-bounds particle back along its line of movement.

use rand::Rng;

use crate::scalar::{s, Scalar};

use super::SwarmConfig;

/// Linearly decaying inertia weight at iteration `t` of `cfg.iterations`:
/// `w_max` at t = 0 down to `w_min` at t = ITR.
pub fn inertia_weight<S: Scalar>(t: usize, cfg: &SwarmConfig<S>) -> S {
    if cfg.iterations == 0 {
        return cfg.w_max;
    }
    let frac = s::<S>(t as f64 / cfg.iterations as f64);
    cfg.w_max - frac * (cfg.w_max - cfg.w_min)
}

/// One velocity/position update. Draws the two fresh uniform coefficients
/// from `rng`, clamps each velocity coordinate to `±bound`, rounds the new
/// position to integers and SHR-repairs it into `[1, bound]` if needed.
/// Returns the repaired position and the new velocity.
pub fn update_position<S: Scalar, R: Rng>(
    position: &[u32],
    velocity: &[S],
    pbest: &[u32],
    gbest: &[u32],
    w: S,
    cfg: &SwarmConfig<S>,
    bound: u32,
    rng: &mut R,
) -> (Vec<u32>, Vec<S>) {
    let r1 = s::<S>(rng.gen::<f64>());
    let r2 = s::<S>(rng.gen::<f64>());
    let clamp = s::<S>(bound as f64);

    let mut new_velocity = Vec::with_capacity(position.len());
    let mut raw = Vec::with_capacity(position.len());
    for i in 0..position.len() {
        let x = s::<S>(position[i] as f64);
        let pb = s::<S>(pbest[i] as f64);
        let gb = s::<S>(gbest[i] as f64);
        let mut v = w * velocity[i] + cfg.c1 * r1 * (pb - x) + cfg.c2 * r2 * (gb - x);
        if v > clamp {
            v = clamp;
        } else if v < -clamp {
            v = -clamp;
        }
        new_velocity.push(v);
        raw.push((x + v).round().to_i64().unwrap_or(0));
    }
    (shr_repair::<S>(&raw, position, bound), new_velocity)
}

/// Shrink repair: if `x_new` is inside `[1, bound]` it is returned as is;
/// otherwise the particle is pulled back along the segment from `x_old`
/// (which must be in bounds) toward `x_new` by the largest factor that puts
/// every coordinate inside the box, then rounded.
pub fn shr_repair<S: Scalar>(x_new: &[i64], x_old: &[u32], bound: u32) -> Vec<u32> {
    debug_assert_eq!(x_new.len(), x_old.len());
    let lo = 1i64;
    let hi = bound as i64;
    let in_bounds = x_new.iter().all(|&x| lo <= x && x <= hi);
    if in_bounds {
        return x_new.iter().map(|&x| x as u32).collect();
    }

    let mut alpha = S::one();
    for (&nv, &ov) in x_new.iter().zip(x_old) {
        let ov = ov as i64;
        let delta = nv - ov;
        let cap = if nv > hi {
            s::<S>((hi - ov) as f64) / s::<S>(delta as f64)
        } else if nv < lo {
            s::<S>((ov - lo) as f64) / s::<S>(-delta as f64)
        } else {
            continue;
        };
        alpha = alpha.min(cap);
    }
    alpha = alpha.max(S::zero());

    x_new
        .iter()
        .zip(x_old)
        .map(|(&nv, &ov)| {
            let moved = s::<S>(ov as f64) + alpha * s::<S>((nv - ov as i64) as f64);
            let r = moved.round().to_i64().unwrap_or(lo).clamp(lo, hi);
            r as u32
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::{SwarmConfig, Variant};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(iterations: usize) -> SwarmConfig<f64> {
        SwarmConfig {
            iterations,
            ..SwarmConfig::new(100.0, Variant::Cedces, 0)
        }
    }

    #[test]
    fn inertia_spans_w_max_to_w_min() {
        let c = cfg(1000);
        assert_eq!(inertia_weight(0, &c), 1.4);
        assert_eq!(inertia_weight(1000, &c), 0.4);
        assert!((inertia_weight(500, &c) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn stationary_particle_stays_put() {
        // Zero velocity with pbest = gbest = x cancels every term.
        let c = cfg(10);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = vec![3, 5, 7];
        let (nx, nv) = update_position(&x, &[0.0; 3], &x, &x, 1.4, &c, 10, &mut rng);
        assert_eq!(nx, x);
        assert!(nv.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unit_inertia_preserves_velocity_and_rounds_position() {
        // x = [1], v = [0.6], pbest = gbest = x, w = 1: the cognitive and
        // social terms vanish, so v' = 0.6 and x' = round(1.6) = 2.
        let c = cfg(10);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (nx, nv) = update_position(&[1], &[0.6], &[1], &[1], 1.0, &c, 10, &mut rng);
        assert_eq!(nx, vec![2]);
        assert_eq!(nv, vec![0.6]);
    }

    #[test]
    fn shr_identity_when_in_bounds() {
        assert_eq!(shr_repair::<f64>(&[3, 9], &[2, 8], 10), vec![3, 9]);
    }

    #[test]
    fn shr_pulls_back_to_boundary_along_the_line() {
        // alpha = (10 - 5) / (12 - 5) = 5/7 lands exactly on the boundary.
        assert_eq!(shr_repair::<f64>(&[12], &[5], 10), vec![10]);
        // The same alpha applies to every coordinate:
        // round(5 + 5/7 * 1) = round(5.71) = 6.
        assert_eq!(shr_repair::<f64>(&[12, 6], &[5, 5], 10), vec![10, 6]);
    }

    #[test]
    fn shr_handles_lower_bound_and_extremes() {
        assert_eq!(shr_repair::<f64>(&[-4, 3], &[2, 3], 10), vec![1, 3]);
        // Starting on the boundary with an outward move collapses to alpha 0.
        assert_eq!(shr_repair::<f64>(&[15], &[10], 10), vec![10]);
        assert_eq!(shr_repair::<f64>(&[-3], &[1], 10), vec![1]);
    }

    proptest::proptest! {
        #[test]
        fn shr_result_is_always_in_bounds(
            old in proptest::collection::vec(1u32..=20, 1..6),
            delta in proptest::collection::vec(-60i64..60, 1..6),
        ) {
            let n = old.len().min(delta.len());
            let old = &old[..n];
            let new: Vec<i64> = old.iter().zip(&delta[..n]).map(|(&o, &d)| o as i64 + d).collect();
            let repaired = shr_repair::<f64>(&new, old, 20);
            proptest::prop_assert!(repaired.iter().all(|&x| (1..=20).contains(&x)));
        }
    }
}

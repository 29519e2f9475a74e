//! Genetic operators layered on the swarm: binary tournament selection,
//! single- and two-point crossover, and single-coordinate mutation.

use rand::Rng;

use crate::scalar::Scalar;

use super::fitness::{deb_cmp, Fitness};

/// Two winners of independent binary tournaments judged on personal-best
/// fitness. Contestants are drawn without replacement and the second
/// tournament excludes the first winner, so the winners are distinct.
pub fn tournament_select<S: Scalar, R: Rng>(
    pbest_fitness: &[Fitness<S>],
    rng: &mut R,
) -> (usize, usize) {
    let n = pbest_fitness.len();
    assert!(n >= 2, "tournament needs at least two particles");
    let first = binary_tournament(pbest_fitness, None, n, rng);
    let second = binary_tournament(pbest_fitness, Some(first), n, rng);
    (first, second)
}

fn binary_tournament<S: Scalar, R: Rng>(
    pbest_fitness: &[Fitness<S>],
    exclude: Option<usize>,
    n: usize,
    rng: &mut R,
) -> usize {
    let draw = |rng: &mut R| -> usize {
        loop {
            let i = rng.gen_range(0..n);
            if Some(i) != exclude {
                return i;
            }
        }
    };
    let a = draw(rng);
    let candidates = n - exclude.map(|_| 1).unwrap_or(0);
    if candidates < 2 {
        return a;
    }
    let b = loop {
        let b = draw(rng);
        if b != a {
            break b;
        }
    };
    if deb_cmp(&pbest_fitness[b], &pbest_fitness[a]) == std::cmp::Ordering::Less {
        b
    } else {
        a
    }
}

/// Single-point crossover: a random cut `k` in `1..=n` keeps `a[..k]` and
/// appends `b[k..]`.
pub fn single_point_crossover<R: Rng>(a: &[u32], b: &[u32], rng: &mut R) -> Vec<u32> {
    debug_assert_eq!(a.len(), b.len());
    let k = rng.gen_range(1..=a.len());
    let mut child = a[..k].to_vec();
    child.extend_from_slice(&b[k..]);
    child
}

/// Two-point crossover: the segment between two random cuts comes from `b`.
pub fn two_point_crossover<R: Rng>(a: &[u32], b: &[u32], rng: &mut R) -> Vec<u32> {
    debug_assert_eq!(a.len(), b.len());
    let k1 = rng.gen_range(1..=a.len());
    let k2 = rng.gen_range(1..=a.len());
    let (lo, hi) = if k1 <= k2 { (k1, k2) } else { (k2, k1) };
    let mut child = a[..lo].to_vec();
    child.extend_from_slice(&b[lo..hi]);
    child.extend_from_slice(&a[hi..]);
    child
}

/// Sets one random coordinate to a uniform random instance id in
/// `[1, pool_size]` (possibly its current value).
pub fn mutate<R: Rng>(x: &mut [u32], pool_size: u32, rng: &mut R) {
    let k = rng.gen_range(0..x.len());
    x[k] = rng.gen_range(1..=pool_size);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::money::Money;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fit(tec: f64, feasible: bool) -> Fitness<f64> {
        Fitness {
            tec: Money::from_dollars(tec),
            tet: 10.0,
            feasible,
        }
    }

    #[test]
    fn swarm_of_two_selects_both() {
        let fits = vec![fit(1.0, true), fit(2.0, true)];
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b) = tournament_select(&fits, &mut rng);
            assert_ne!(a, b);
            assert_eq!([a, b].iter().copied().min(), Some(0));
        }
    }

    #[test]
    fn feasible_cheap_beats_infeasible() {
        let fits = vec![fit(1.0, true), fit(0.5, false)];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (first, _) = tournament_select(&fits, &mut rng);
        assert_eq!(first, 0);
    }

    #[test]
    fn selection_is_seed_deterministic() {
        let fits = vec![fit(3.0, true), fit(1.0, true), fit(2.0, false), fit(0.5, true)];
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(tournament_select(&fits, &mut a), tournament_select(&fits, &mut b));
    }

    #[test]
    fn crossover_of_identical_parents_is_identity() {
        let a = vec![4, 4, 4, 4];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(single_point_crossover(&a, &a, &mut rng), a);
    }

    #[test]
    fn crossover_at_fixed_cut() {
        // Cut k = 2 over [1,1,1,1] and [2,2,2,2] yields [1,1,2,2]; find a
        // seed that draws k = 2 by checking the prefix property instead of
        // pinning RNG internals: every child must be a prefix of a followed
        // by a suffix of b.
        let a = vec![1, 1, 1, 1];
        let b = vec![2, 2, 2, 2];
        let mut seen_k2 = false;
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let child = single_point_crossover(&a, &b, &mut rng);
            let k = child.iter().take_while(|&&x| x == 1).count();
            assert!(child[k..].iter().all(|&x| x == 2));
            assert!(k >= 1);
            if k == 2 {
                assert_eq!(child, vec![1, 1, 2, 2]);
                seen_k2 = true;
            }
        }
        assert!(seen_k2);
    }

    #[test]
    fn full_cut_returns_first_parent() {
        let a = vec![1, 2, 3];
        let b = vec![4, 5, 6];
        for seed in 0..200 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let child = single_point_crossover(&a, &b, &mut rng);
            if child == a {
                return; // k = n observed
            }
        }
        panic!("cut at n never observed");
    }

    #[test]
    fn two_point_swaps_a_middle_segment() {
        let a = vec![1, 1, 1, 1, 1];
        let b = vec![2, 2, 2, 2, 2];
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let child = two_point_crossover(&a, &b, &mut rng);
            // Pattern must be a-segment, b-segment, a-segment.
            let s: Vec<_> = child.iter().collect();
            let first_b = s.iter().position(|&&x| x == 2);
            if let Some(lo) = first_b {
                let hi = s.iter().rposition(|&&x| x == 2).unwrap() + 1;
                assert!(child[lo..hi].iter().all(|&x| x == 2));
            }
        }
    }

    #[test]
    fn mutation_changes_at_most_one_coordinate() {
        let original = vec![5, 5, 5, 5, 5, 5];
        for seed in 0..50 {
            let mut x = original.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            mutate(&mut x, 9, &mut rng);
            let diffs = x.iter().zip(&original).filter(|(a, b)| a != b).count();
            assert!(diffs <= 1);
            assert!(x.iter().all(|&v| (1..=9).contains(&v)));
        }
    }

    #[test]
    fn mutation_with_single_slot_pool_is_identity() {
        let mut x = vec![1, 1, 1];
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        mutate(&mut x, 1, &mut rng);
        assert_eq!(x, vec![1, 1, 1]);
    }
}

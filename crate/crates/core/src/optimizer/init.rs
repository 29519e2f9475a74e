//! Deadline-aware greedy initialization of particle positions.
//!
//! Tasks are visited in a random topological order. For every pool instance
//! the task's start time is computed by waiting on predecessors (their
//! finish times temporarily absorb the would-be transfer time), then the
//! candidate's lease-extension cost is priced: a fresh instance pays
//! boot + MET under its billing scheme, a reused one pays the increase of
//! its lease bill when extended to cover start + MET. The cheapest
//! candidate that keeps start + MET within the (reduced) deadline wins;
//! when none qualifies, the least-violating one does. After the choice the
//! predecessors' finish times and leases absorb the realized transfers, and
//! the task is booked with execution time only (its own outbound transfers
//! are unknown until its successors are placed).

use rand::Rng;

use crate::cloud::{lease_cost, MultiCloudSystem, Placement};
use crate::money::Money;
use crate::scalar::Scalar;
use crate::workflow::TaskGraph;

use super::met::MetTable;
use super::SwarmConfig;
use crate::schedule::ResourcePool;

pub fn heuristic_init<S: Scalar, R: Rng>(
    g: &TaskGraph<S>,
    sys: &MultiCloudSystem<S>,
    pool: &ResourcePool,
    met: &MetTable<S>,
    cfg: &SwarmConfig<S>,
    rng: &mut R,
) -> Vec<u32> {
    let n = g.len();
    let effective_deadline = cfg.init_deadline_factor * cfg.deadline;
    let order = g.random_topological_order(rng);

    let mut finish = vec![S::zero(); n];
    let mut assigned: Vec<usize> = vec![usize::MAX; n];
    let mut used = vec![false; pool.len()];
    let mut lease_start = vec![S::zero(); pool.len()];
    let mut lease_finish = vec![S::zero(); pool.len()];

    let comm = |from_slot: usize, to_slot: usize, volume: S| -> S {
        if from_slot == to_slot {
            return S::zero();
        }
        let kf = pool.slot(from_slot).provider;
        let kt = pool.slot(to_slot).provider;
        let placement = if kf == kt {
            Placement::SameCloud(kf)
        } else {
            Placement::CrossCloud(kf, kt)
        };
        sys.comm_time(volume, placement).expect("pool providers valid")
    };

    for &v in &order {
        let mut best_feasible: Option<(Money, usize, S)> = None;
        let mut best_violation: Option<(S, usize, S)> = None;

        for r in 0..pool.len() {
            let slot = pool.slot(r);
            let vm = pool.vm_spec(sys, r);
            let billing = &sys.providers()[slot.provider].billing;
            let met_here = met.get(v, sys.flat_type_index(slot.provider, slot.vm_type));

            let mut start = S::zero();
            for (j, edge) in g.predecessors(v) {
                let t = comm(assigned[j], r, edge.volume_gb);
                start = start.max(finish[j] + t);
            }

            let (start, extension_cost) = if used[r] {
                let start = start.max(lease_finish[r]);
                let committed = lease_cost(lease_finish[r] - lease_start[r], vm, billing);
                let projected = lease_cost(start + met_here - lease_start[r], vm, billing);
                (start, projected - committed)
            } else {
                let start = start.max(vm.boot_time);
                (start, lease_cost(vm.boot_time + met_here, vm, billing))
            };

            let completion = start + met_here;
            if completion <= effective_deadline {
                if best_feasible
                    .map(|(c, _, _)| extension_cost < c)
                    .unwrap_or(true)
                {
                    best_feasible = Some((extension_cost, r, start));
                }
            } else {
                let violation = completion - effective_deadline;
                if best_violation.map(|(w, _, _)| violation < w).unwrap_or(true) {
                    best_violation = Some((violation, r, start));
                }
            }
        }

        let r = match (best_feasible, best_violation) {
            (Some((_, r, _)), _) => r,
            (None, Some((_, r, _))) => r,
            (None, None) => unreachable!("pool is never empty"),
        };

        // Realize: predecessor finish times and leases absorb the transfer
        // to this task's instance, then the task is booked.
        let vm = pool.vm_spec(sys, r);
        for (j, edge) in g.predecessors(v) {
            let t = comm(assigned[j], r, edge.volume_gb);
            finish[j] += t;
            let uj = assigned[j];
            lease_finish[uj] = lease_finish[uj].max(finish[j]);
        }
        let mut start = S::zero();
        for (j, _) in g.predecessors(v) {
            start = start.max(finish[j]);
        }
        if used[r] {
            start = start.max(lease_finish[r]);
        } else {
            start = start.max(vm.boot_time);
            lease_start[r] = start - vm.boot_time;
            used[r] = true;
        }
        finish[v] = start + g.task(v).weight / vm.capacity;
        lease_finish[r] = finish[v];
        assigned[v] = r;
    }

    assigned.iter().map(|&r| r as u32 + 1).collect()
}

/// Uniform random position, the baseline initialization.
pub fn random_init<R: Rng>(n: usize, pool_size: u32, rng: &mut R) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(1..=pool_size)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::{
        BillingKind, BracketConfig, ProviderConfig, SystemConfig, TransferConfig, VmTypeConfig,
    };
    use crate::optimizer::{met_table, SwarmConfig, Variant};
    use crate::workflow::graph_from_weights;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Two single-type providers of different brands: a slow cheap one and a
    /// fast expensive one, both per-minute billed with 10 s boot.
    fn toy_two_type_system() -> crate::cloud::MultiCloudSystem<f64> {
        let provider = |name: &str, brand: &str, capacity: f64, rate: f64| ProviderConfig {
            name: name.into(),
            brand: brand.into(),
            center: "c0".into(),
            billing: BillingKind::PerMinute,
            internal_bandwidth_mbps: 20.0,
            vm_types: vec![VmTypeConfig {
                name: format!("{name}-vm"),
                capacity,
                boot_time_s: 10.0,
                rate,
                initial_block_price: 0.0,
            }],
            transfer: TransferConfig {
                across_centers_per_gb: 0.0,
                across_clouds: vec![BracketConfig { up_to_gb: None, rate_per_gb: 0.1 }],
            },
        };
        SystemConfig {
            external_bandwidth_mbps: 100.0,
            external_links: vec![],
            providers: vec![
                provider("slow", "alpha", 2.0, 0.001),
                provider("fast", "beta", 8.0, 0.01),
            ],
        }
        .build()
        .unwrap()
    }

    fn cfg(deadline: f64) -> SwarmConfig<f64> {
        SwarmConfig::new(deadline, Variant::Cedces, 0)
    }

    #[test]
    fn single_task_picks_the_cheaper_feasible_instance() {
        let g = graph_from_weights::<f64>(&[8.0], &[]).unwrap();
        let sys = toy_two_type_system();
        let pool = ResourcePool::build(&g, &sys);
        let met = met_table(&g, &sys);
        // Both instances finish far within the deadline; the slow one costs
        // 0.001/min vs 0.01/min, so it wins.
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = heuristic_init(&g, &sys, &pool, &met, &cfg(1000.0), &mut rng);
        assert_eq!(x, vec![1]);
    }

    #[test]
    fn zero_deadline_falls_back_to_least_violation() {
        let g = graph_from_weights::<f64>(&[80.0, 80.0], &[(1, 2, 0.0)]).unwrap();
        let sys = toy_two_type_system();
        let pool = ResourcePool::build(&g, &sys);
        let met = met_table(&g, &sys);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = heuristic_init(&g, &sys, &pool, &met, &cfg(0.0), &mut rng);
        // Every entry is a valid 1-based pool index; least violation means
        // the fast instance (MET 10+10 vs 40+40 on slow).
        assert_eq!(x.len(), 2);
        assert!(x.iter().all(|&u| (1..=pool.len() as u32).contains(&u)));
        assert_eq!(x, vec![2, 2]);
    }

    #[test]
    fn diamond_golden_trace_on_toy_system() {
        // Hand trace; both random middle orders give the same position.
        // Weights (0, 32, 16, 0); slow MET per task (16, 16, 8, 0); pool =
        // [slow#0, slow#1, fast#0, fast#1]; deadline 90 -> effective 81.
        //
        // entry: fresh candidates start at boot 10; slow completion
        // 10+16=26 <= 81, cost lease(10+16)=1 min x 0.001; fast costs 0.01
        // -> slow#0. Lease [0, 10], ft 10.
        // t2: slow#0 reused: start max(10, lft 10)=10, completion 26 <= 81,
        // extension lease(26)-lease(10) = 0 beats any fresh lease
        // -> slow#0, ft 26.
        // t3: slow#0: start max(10, lft 26)=26, completion 34 <= 81,
        // extension lease(34)-lease(26)=0 (still one billing minute);
        // slow#1 fresh would cost 0.001 -> slow#0, ft 34.
        // exit: both preds on slow#0, start 34, MET 0, extension 0
        // -> slow#0.
        let g = graph_from_weights::<f64>(
            &[0.0, 32.0, 16.0, 0.0],
            &[(1, 2, 0.0), (1, 3, 0.0), (2, 4, 0.0), (3, 4, 0.0)],
        )
        .unwrap();
        let sys = toy_two_type_system();
        let pool = ResourcePool::build(&g, &sys);
        assert_eq!(pool.len(), 4);
        let met = met_table(&g, &sys);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = heuristic_init(&g, &sys, &pool, &met, &cfg(90.0), &mut rng);
        assert_eq!(x, vec![1, 1, 1, 1]);
    }

    #[test]
    fn tight_deadline_moves_work_to_the_fast_instance() {
        // Same diamond; deadline 25 (effective 22.5) rules out every slow
        // candidate for the entry (boot 10 + MET 16 = 26 > 22.5), so the
        // whole workflow lands on the fast type, whose slots are pool
        // indices 3 and 4.
        let g = graph_from_weights::<f64>(
            &[0.0, 32.0, 16.0, 0.0],
            &[(1, 2, 0.0), (1, 3, 0.0), (2, 4, 0.0), (3, 4, 0.0)],
        )
        .unwrap();
        let sys = toy_two_type_system();
        let pool = ResourcePool::build(&g, &sys);
        let met = met_table(&g, &sys);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = heuristic_init(&g, &sys, &pool, &met, &cfg(25.0), &mut rng);
        assert_eq!(x, vec![3, 3, 3, 3]);
    }

    #[test]
    fn init_is_deterministic_per_seed() {
        let g = graph_from_weights::<f64>(
            &[0.0, 32.0, 16.0, 0.0],
            &[(1, 2, 0.1), (1, 3, 0.2), (2, 4, 0.0), (3, 4, 0.1)],
        )
        .unwrap();
        let sys = toy_two_type_system();
        let pool = ResourcePool::build(&g, &sys);
        let met = met_table(&g, &sys);
        let a = heuristic_init(
            &g, &sys, &pool, &met, &cfg(50.0),
            &mut ChaCha8Rng::seed_from_u64(7),
        );
        let b = heuristic_init(
            &g, &sys, &pool, &met, &cfg(50.0),
            &mut ChaCha8Rng::seed_from_u64(7),
        );
        assert_eq!(a, b);
    }

    #[test]
    fn generous_deadline_takes_cheapest_extension_each_step() {
        // With the deadline effectively infinite every candidate is
        // feasible, so each task must land on an argmin of the
        // lease-extension cost at its turn.
        let g = graph_from_weights::<f64>(
            &[0.0, 32.0, 16.0, 0.0],
            &[(1, 2, 0.0), (1, 3, 0.0), (2, 4, 0.0), (3, 4, 0.0)],
        )
        .unwrap();
        let sys = toy_two_type_system();
        let pool = ResourcePool::build(&g, &sys);
        let met = met_table(&g, &sys);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = heuristic_init(&g, &sys, &pool, &met, &cfg(1e9), &mut rng);
        // All four tasks share one slow instance: reuse extensions are free
        // within the first billing minute and every fresh lease costs money.
        assert_eq!(x, vec![1, 1, 1, 1]);
    }
}

//! Particle-to-schedule mapping.
//!
//! Tasks are walked in index order (a topological order by construction).
//! Each task starts no earlier than its predecessors' finish times; its
//! processing time is its execution time plus the sum of its outbound
//! transfer times, so every successor waits for all of the producer's
//! transfers. Reusing an instance serializes after the instance's current
//! lease finish; first use waits for boot and opens the lease. Cross-cloud
//! edges add the sender's per-GB transfer charge; the lease bill is one
//! charge per used instance over its full lease span.

use crate::cloud::{lease_cost, MultiCloudSystem, Placement};
use crate::error::DecodeError;
use crate::money::Money;
use crate::scalar::Scalar;
use crate::workflow::TaskGraph;

use super::{Assignment, Lease, ResourcePool, Schedule};

/// Decoder knobs.
#[derive(Clone, Copy, Debug, Default)]
pub struct DecodeOptions {
    /// Re-home the virtual entry/exit tasks onto a neighbor's instance before
    /// decoding (the entry to its lowest-indexed successor, the exit to its
    /// highest-indexed predecessor), so zero-weight virtuals never open a
    /// lease of their own.
    pub pin_virtual_tasks: bool,
}

/// Decodes `position` against a freshly built pool. Entries are 1-based pool
/// indices; decoding never repairs an out-of-range entry.
pub fn decode<S: Scalar>(
    position: &[u32],
    g: &TaskGraph<S>,
    sys: &MultiCloudSystem<S>,
) -> Result<Schedule<S>, DecodeError> {
    let pool = ResourcePool::build(g, sys);
    decode_with_pool(position, g, sys, &pool, DecodeOptions::default())
}

pub fn decode_with_pool<S: Scalar>(
    position: &[u32],
    g: &TaskGraph<S>,
    sys: &MultiCloudSystem<S>,
    pool: &ResourcePool,
    opts: DecodeOptions,
) -> Result<Schedule<S>, DecodeError> {
    let n = g.len();
    if position.len() != n {
        return Err(DecodeError::PositionLength {
            got: position.len(),
            expected: n,
        });
    }
    for (i, &u) in position.iter().enumerate() {
        if u < 1 || u as usize > pool.len() {
            return Err(DecodeError::PositionOutOfRange {
                index: i,
                value: u,
                pool_size: pool.len(),
            });
        }
    }

    let mut instance_of: Vec<usize> = position.iter().map(|&u| u as usize - 1).collect();
    if opts.pin_virtual_tasks && n >= 2 {
        if let Some((first_succ, _)) = g.successors(g.entry()).min_by_key(|&(v, _)| v) {
            instance_of[g.entry()] = instance_of[first_succ];
        }
        if let Some((last_pred, _)) = g.predecessors(g.exit()).max_by_key(|&(v, _)| v) {
            instance_of[g.exit()] = instance_of[last_pred];
        }
    }

    let mut finish = vec![S::zero(); n];
    let mut lease_start: Vec<Option<S>> = vec![None; pool.len()];
    let mut lease_finish = vec![S::zero(); pool.len()];
    let mut assignments = Vec::with_capacity(n);
    let mut tec = Money::ZERO;

    for v in 0..n {
        let u = instance_of[v];
        let slot = pool.slot(u);
        let vm = pool.vm_spec(sys, u);
        let exec = g.task(v).weight / vm.capacity;

        let mut start = S::zero();
        for (p, _) in g.predecessors(v) {
            start = start.max(finish[p]);
        }

        let mut transfer = S::zero();
        for (w, edge) in g.successors(v) {
            let u2 = instance_of[w];
            if u2 == u {
                continue;
            }
            let slot2 = pool.slot(u2);
            if slot2.provider != slot.provider {
                let placement = Placement::CrossCloud(slot.provider, slot2.provider);
                transfer += sys
                    .comm_time(edge.volume_gb, placement)
                    .expect("pool providers are valid");
                tec += sys
                    .transfer_cost(edge.volume_gb, slot.provider, slot2.provider)
                    .expect("pool providers are valid");
            } else {
                transfer += sys
                    .comm_time(edge.volume_gb, Placement::SameCloud(slot.provider))
                    .expect("pool providers are valid");
            }
        }
        let processing = exec + transfer;

        match lease_start[u] {
            Some(_) => {
                start = start.max(lease_finish[u]);
            }
            None => {
                start = start.max(vm.boot_time);
                lease_start[u] = Some(start - vm.boot_time);
            }
        }
        let end = start + processing;
        finish[v] = end;
        lease_finish[u] = end;
        assignments.push(Assignment {
            task: v,
            instance: u,
            start,
            finish: end,
        });
    }

    let tet = finish[n - 1];
    let mut leases = Vec::new();
    for u in 0..pool.len() {
        if let Some(lst) = lease_start[u] {
            let vm = pool.vm_spec(sys, u);
            let billing = &sys.providers()[pool.slot(u).provider].billing;
            tec += lease_cost(lease_finish[u] - lst, vm, billing);
            leases.push(Lease {
                instance: u,
                start: lst,
                finish: lease_finish[u],
            });
        }
    }

    Ok(Schedule {
        pool: pool.clone(),
        assignments,
        leases,
        tec,
        tet,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::default_testbed;
    use crate::money::Money;
    use crate::workflow::graph_from_weights;

    fn chain_zero_weights() -> TaskGraph<f64> {
        graph_from_weights(&[0.0, 0.0, 0.0], &[(1, 2, 0.0), (2, 3, 0.0)]).unwrap()
    }

    #[test]
    fn zero_weight_chain_on_one_ma_instance_bills_two_minutes() {
        // Hand trace: the first task waits for the 97 s boot, the lease runs
        // 0..97, everything else is instantaneous, and two started minutes
        // are billed at the B2MS rate.
        let g = chain_zero_weights();
        let sys = default_testbed::<f64>();
        let position = vec![1, 1, 1];
        let sch = decode(&position, &g, &sys).unwrap();
        assert_eq!(sch.assignments[0].start, 97.0);
        assert_eq!(sch.tet, 97.0);
        assert_eq!(sch.leases.len(), 1);
        assert_eq!(sch.leases[0].start, 0.0);
        assert_eq!(sch.leases[0].finish, 97.0);
        assert_eq!(sch.tec, Money::from_dollars(0.003));
    }

    #[test]
    fn instance_reuse_serializes_independent_tasks() {
        // Two independent weight-60 tasks wrapped with virtuals, all mapped
        // to one capacity-1... the testbed's smallest VM has capacity 2, so
        // use weights 120 to keep 60 s execution each.
        let g = crate::workflow::TaskGraph::<f64>::wrap(
            vec![
                crate::workflow::Task { weight: 120.0, label: None },
                crate::workflow::Task { weight: 120.0, label: None },
            ],
            vec![],
        )
        .unwrap();
        let sys = default_testbed::<f64>();
        let sch = decode(&vec![1; 4], &g, &sys).unwrap();
        assert_eq!(sch.assignments[1].start, 97.0);
        assert_eq!(sch.assignments[1].finish, 157.0);
        assert_eq!(sch.assignments[2].start, 157.0);
        assert_eq!(sch.assignments[2].finish, 217.0);
        assert_eq!(sch.tet, 217.0);
    }

    #[test]
    fn cross_cloud_edge_adds_transfer_time_and_bracket_charge() {
        // 100 megabits between MA-east and AWS-east: 5 s at 20 Mbps... the
        // default external bandwidth is 100 Mbps, so force the comparison by
        // checking against the computed comm_time; the volume sits in the
        // free AWS/MA bracket so no transfer charge applies.
        let vol = 100.0 / crate::cloud::MEGABITS_PER_GB;
        let g = graph_from_weights::<f64>(&[2.0, 2.0], &[(1, 2, vol)]).unwrap();
        let sys = default_testbed::<f64>();
        let pool = ResourcePool::build(&g, &sys);
        // Slot 1 is MA-east/B2MS, slot 9 is AWS-east/m1.small (1-based).
        let ma_only = decode(&vec![1, 1], &g, &sys).unwrap();
        let split = decode(&vec![1, 9], &g, &sys).unwrap();
        assert_eq!(pool.slot(8).provider, 2);
        // Producer's finish gains the 1 s cross-cloud transfer (100 Mb at
        // 100 Mbps), and the consumer waits for it.
        assert_eq!(
            split.assignments[0].finish,
            ma_only.assignments[0].finish + 1.0
        );
        assert!(split.assignments[1].start >= split.assignments[0].finish);
        // Free bracket: no money moves, but the second lease bills an hour.
        let lease_sum: Money = split
            .leases
            .iter()
            .map(|l| {
                let vm = pool.vm_spec(&sys, l.instance);
                let billing = &sys.providers()[pool.slot(l.instance).provider].billing;
                lease_cost(l.finish - l.start, vm, billing)
            })
            .sum();
        assert_eq!(split.tec, lease_sum);
    }

    #[test]
    fn single_instance_placement_has_no_transfers() {
        let g = graph_from_weights::<f64>(
            &[0.0, 8.0, 12.0, 0.0],
            &[(1, 2, 0.5), (1, 3, 0.5), (2, 4, 0.5), (3, 4, 0.5)],
        )
        .unwrap();
        let sys = default_testbed::<f64>();
        let sch = decode(&vec![3, 3, 3, 3], &g, &sys).unwrap();
        // capacity of slot 3 (1-based) = MA-east B4MS = 4.
        assert_eq!(sch.tet, 97.0 + 8.0 / 4.0 + 12.0 / 4.0);
    }

    #[test]
    fn out_of_range_position_is_rejected_not_repaired() {
        let g = chain_zero_weights();
        let sys = default_testbed::<f64>();
        assert!(matches!(
            decode(&vec![0, 1, 1], &g, &sys),
            Err(DecodeError::PositionOutOfRange { index: 0, .. })
        ));
        assert!(matches!(
            decode(&vec![1, 1, 999], &g, &sys),
            Err(DecodeError::PositionOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            decode(&vec![1, 1], &g, &sys),
            Err(DecodeError::PositionLength { .. })
        ));
    }

    #[test]
    fn decode_is_deterministic() {
        let g = graph_from_weights::<f64>(
            &[0.0, 30.0, 40.0, 0.0],
            &[(1, 2, 0.1), (1, 3, 0.2), (2, 4, 0.0), (3, 4, 0.3)],
        )
        .unwrap();
        let sys = default_testbed::<f64>();
        let pos = vec![5, 17, 29, 41];
        let a = decode(&pos, &g, &sys).unwrap();
        let b = decode(&pos, &g, &sys).unwrap();
        assert_eq!(a.tec, b.tec);
        assert_eq!(a.tet, b.tet);
        assert_eq!(
            crate::schedule::schedule_to_text(&a),
            crate::schedule::schedule_to_text(&b)
        );
    }

    #[test]
    fn pinning_virtuals_moves_them_onto_neighbor_instances() {
        let g = graph_from_weights::<f64>(
            &[0.0, 30.0, 0.0],
            &[(1, 2, 0.0), (2, 3, 0.0)],
        )
        .unwrap();
        let sys = default_testbed::<f64>();
        let pool = ResourcePool::build(&g, &sys);
        let pinned = decode_with_pool(
            &[2, 7, 13],
            &g,
            &sys,
            &pool,
            DecodeOptions { pin_virtual_tasks: true },
        )
        .unwrap();
        assert_eq!(pinned.assignments[0].instance, 6);
        assert_eq!(pinned.assignments[2].instance, 6);
        assert_eq!(pinned.leases.len(), 1);
    }
}

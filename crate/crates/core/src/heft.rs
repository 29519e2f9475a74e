//! HEFT list scheduling, used purely as a time yardstick: `Min(G)` is the
//! HEFT makespan of a workflow on the system, and deadlines are set as
//! multiples of it. Money is ignored here.
//!
//! One candidate instance per VM type (no replication). Tasks are ranked by
//! upward rank (mean execution over all types plus, per successor, mean
//! communication plus the successor's rank) and placed on the instance
//! minimizing earliest finish time with insertion-based gap filling. Each
//! instance boots once before its first task, mirroring the decoder.

use crate::cloud::{MultiCloudSystem, Placement};
use crate::scalar::{s, Scalar};
use crate::workflow::TaskGraph;

/// Upward rank per task: mean exec across all VM types, plus the maximum
/// over successors of mean comm plus the successor's rank.
pub fn heft_ranks<S: Scalar>(g: &TaskGraph<S>, sys: &MultiCloudSystem<S>) -> Vec<S> {
    let n = g.len();
    let types: Vec<(usize, usize)> = sys.vm_types().map(|(k, t, _)| (k, t)).collect();
    let n_types = types.len();

    let mean_inv_capacity = {
        let sum: S = sys
            .vm_types()
            .fold(S::zero(), |acc, (_, _, vm)| acc + S::one() / vm.capacity);
        sum / s::<S>(n_types as f64)
    };

    // Mean of 1/bandwidth over all ordered pairs of distinct candidate
    // instances: internal bandwidth inside a provider, external across.
    let mean_inv_bandwidth = {
        let mut sum = S::zero();
        let mut count = 0usize;
        for &(ka, _) in &types {
            for &(kb, _) in &types {
                count += 1;
                let bw = if ka == kb {
                    sys.providers()[ka].internal_bandwidth_mbps
                } else {
                    sys.external_bandwidth(ka, kb)
                };
                sum += S::one() / bw;
            }
        }
        // Exclude the self-pair count but not per-pair terms: a pair of
        // distinct same-type instances still communicates internally.
        sum / s::<S>(count as f64)
    };

    let mut rank = vec![S::zero(); n];
    for v in (0..n).rev() {
        let mean_exec = g.task(v).weight * mean_inv_capacity;
        let mut best = S::zero();
        for (w, edge) in g.successors(v) {
            let mean_comm = edge.volume_gb * s::<S>(crate::cloud::MEGABITS_PER_GB) * mean_inv_bandwidth;
            best = best.max(mean_comm + rank[w]);
        }
        rank[v] = mean_exec + best;
    }
    rank
}

/// `Min(G)`: the HEFT makespan of `g` on `sys`. Deterministic.
pub fn heft_makespan<S: Scalar>(g: &TaskGraph<S>, sys: &MultiCloudSystem<S>) -> S {
    let n = g.len();
    let types: Vec<(usize, usize)> = sys.vm_types().map(|(k, t, _)| (k, t)).collect();
    let ranks = heft_ranks(g, sys);

    // Decreasing rank with ascending-index tie break; ranks never increase
    // along an edge, so this order is topological.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        ranks[b]
            .partial_cmp(&ranks[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    let mut placement: Vec<usize> = vec![usize::MAX; n];
    let mut finish = vec![S::zero(); n];
    // Occupied intervals per candidate instance, kept sorted by start.
    let mut busy: Vec<Vec<(S, S)>> = vec![Vec::new(); types.len()];

    for &v in &order {
        let mut best: Option<(S, S, usize)> = None;
        for (c, &(k, t)) in types.iter().enumerate() {
            let vm = &sys.providers()[k].vm_types[t];
            let mut ready = S::zero();
            for (p, edge) in g.predecessors(v) {
                let pc = placement[p];
                let comm = if pc == c {
                    S::zero()
                } else {
                    let kp = types[pc].0;
                    let pl = if kp == k {
                        Placement::SameCloud(k)
                    } else {
                        Placement::CrossCloud(kp, k)
                    };
                    sys.comm_time(edge.volume_gb, pl).expect("valid providers")
                };
                ready = ready.max(finish[p] + comm);
            }
            let lower = ready.max(vm.boot_time);
            let duration = g.task(v).weight / vm.capacity;
            let start = earliest_fit(&busy[c], lower, duration);
            let eft = start + duration;
            if best.map(|(b, _, _)| eft < b).unwrap_or(true) {
                best = Some((eft, start, c));
            }
        }
        let (eft, start, c) = best.expect("at least one VM type");
        placement[v] = c;
        finish[v] = eft;
        let pos = busy[c]
            .binary_search_by(|probe| probe.0.partial_cmp(&start).unwrap())
            .unwrap_or_else(|e| e);
        busy[c].insert(pos, (start, eft));
    }

    finish[n - 1]
}

/// Earliest start >= `lower` such that `[start, start + duration)` fits in a
/// gap of the sorted interval list.
fn earliest_fit<S: Scalar>(busy: &[(S, S)], lower: S, duration: S) -> S {
    let mut candidate = lower;
    for &(start, end) in busy {
        if candidate + duration <= start {
            return candidate;
        }
        candidate = candidate.max(end);
    }
    candidate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::default_testbed;
    use crate::workflow::graph_from_weights;

    #[test]
    fn single_task_runs_on_fastest_type_after_boot() {
        let g = graph_from_weights::<f64>(&[10.0], &[]).unwrap();
        let sys = default_testbed::<f64>();
        assert_eq!(heft_makespan(&g, &sys), 97.0 + 10.0 / 16.0);
    }

    #[test]
    fn two_task_chain_shares_the_fastest_instance() {
        // With a positive edge volume, any split placement pays
        // communication, so both tasks end on one capacity-16 instance.
        let g = graph_from_weights::<f64>(&[16.0, 16.0], &[(1, 2, 0.01)]).unwrap();
        let sys = default_testbed::<f64>();
        assert_eq!(heft_makespan(&g, &sys), 97.0 + 1.0 + 1.0);
    }

    #[test]
    fn ranks_decrease_along_edges() {
        let g = graph_from_weights::<f64>(
            &[0.0, 30.0, 40.0, 0.0],
            &[(1, 2, 0.1), (1, 3, 0.2), (2, 4, 0.05), (3, 4, 0.0)],
        )
        .unwrap();
        let sys = default_testbed::<f64>();
        let ranks = heft_ranks(&g, &sys);
        for e in g.edges() {
            assert!(ranks[e.from] >= ranks[e.to]);
        }
        // Exit rank is its own mean exec; zero weight means zero rank.
        assert_eq!(ranks[3], 0.0);
    }

    #[test]
    fn weight_scaling_scales_exec_component_with_zero_boot() {
        let mut cfg = crate::cloud::default_testbed_config();
        for p in &mut cfg.providers {
            for v in &mut p.vm_types {
                v.boot_time_s = 0.0;
            }
        }
        let sys: MultiCloudSystem<f64> = cfg.build().unwrap();
        let g1 = graph_from_weights::<f64>(
            &[0.0, 30.0, 40.0, 0.0],
            &[(1, 2, 0.0), (1, 3, 0.0), (2, 4, 0.0), (3, 4, 0.0)],
        )
        .unwrap();
        let g2 = graph_from_weights::<f64>(
            &[0.0, 90.0, 120.0, 0.0],
            &[(1, 2, 0.0), (1, 3, 0.0), (2, 4, 0.0), (3, 4, 0.0)],
        )
        .unwrap();
        let m1 = heft_makespan(&g1, &sys);
        let m2 = heft_makespan(&g2, &sys);
        assert!((m2 - 3.0 * m1).abs() < 1e-9);
    }

    #[test]
    fn makespan_positive_for_positive_weights_and_deterministic() {
        let g = graph_from_weights::<f64>(
            &[0.0, 5.0, 9.0, 0.0],
            &[(1, 2, 0.01), (1, 3, 0.02), (2, 4, 0.0), (3, 4, 0.0)],
        )
        .unwrap();
        let sys = default_testbed::<f64>();
        let a = heft_makespan(&g, &sys);
        assert!(a > 0.0);
        assert_eq!(a, heft_makespan(&g, &sys));
    }
}

//! Independent schedule verification: re-derives every start, finish, lease
//! and cost from the task-to-instance mapping alone and reports mismatches
//! against the stored schedule. Violations are data, not errors.

use std::fmt;

use crate::cloud::{lease_cost, MultiCloudSystem, Placement};
use crate::money::Money;
use crate::scalar::Scalar;
use crate::workflow::TaskGraph;

use super::Schedule;

/// Relative tolerance for time comparisons.
const TIME_RTOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub enum Violation<S> {
    /// Mapping does not cover exactly the workflow's tasks in index order.
    MappingShape { detail: String },
    /// `start > finish` on a task.
    NegativeInterval { task: usize },
    /// A task starts before a predecessor finishes.
    Precedence { edge: (usize, usize), slack: S },
    /// Stored start differs from the re-derived one.
    StartMismatch { task: usize, stored: S, derived: S },
    /// Stored finish differs from start + re-derived processing time.
    FinishMismatch { task: usize, stored: S, derived: S },
    /// Two tasks overlap on one instance.
    InstanceOverlap { instance: usize, tasks: (usize, usize) },
    /// Stored leases differ from the per-instance task envelopes.
    LeaseMismatch { instance: usize, detail: String },
    /// Stored TEC differs from the recomputed exact cost.
    TecMismatch { stored: Money, derived: Money },
    /// Stored TET differs from the exit task's finish time.
    TetMismatch { stored: S, derived: S },
}

impl<S: fmt::Display> fmt::Display for Violation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MappingShape { detail } => write!(f, "mapping shape: {detail}"),
            Violation::NegativeInterval { task } => {
                write!(f, "task {} finishes before it starts", task + 1)
            }
            Violation::Precedence { edge, slack } => write!(
                f,
                "task {} starts {slack} before predecessor {} finishes",
                edge.1 + 1,
                edge.0 + 1
            ),
            Violation::StartMismatch { task, stored, derived } => write!(
                f,
                "task {}: stored start {stored}, derived {derived}",
                task + 1
            ),
            Violation::FinishMismatch { task, stored, derived } => write!(
                f,
                "task {}: stored finish {stored}, derived {derived}",
                task + 1
            ),
            Violation::InstanceOverlap { instance, tasks } => write!(
                f,
                "instance {}: tasks {} and {} overlap",
                instance + 1,
                tasks.0 + 1,
                tasks.1 + 1
            ),
            Violation::LeaseMismatch { instance, detail } => {
                write!(f, "instance {}: {detail}", instance + 1)
            }
            Violation::TecMismatch { stored, derived } => {
                write!(f, "stored TEC {stored}, derived {derived}")
            }
            Violation::TetMismatch { stored, derived } => {
                write!(f, "stored TET {stored}, derived {derived}")
            }
        }
    }
}

fn close<S: Scalar>(a: S, b: S) -> bool {
    let diff = (a - b).abs().to_f64().unwrap_or(f64::INFINITY);
    let scale = a.abs().max(b.abs()).to_f64().unwrap_or(0.0).max(1.0);
    diff <= TIME_RTOL * scale
}

/// Checks `s` against the workflow and system it claims to schedule.
/// Returns an empty list iff the schedule is internally consistent.
pub fn verify_schedule<S: Scalar>(
    s: &Schedule<S>,
    g: &TaskGraph<S>,
    sys: &MultiCloudSystem<S>,
) -> Vec<Violation<S>> {
    let mut out = Vec::new();
    let n = g.len();

    if s.assignments.len() != n {
        out.push(Violation::MappingShape {
            detail: format!("{} assignments for {} tasks", s.assignments.len(), n),
        });
        return out;
    }
    for (v, a) in s.assignments.iter().enumerate() {
        if a.task != v {
            out.push(Violation::MappingShape {
                detail: format!("assignment {v} maps task {}", a.task + 1),
            });
            return out;
        }
        if a.instance >= s.pool.len() {
            out.push(Violation::MappingShape {
                detail: format!("task {} mapped to instance outside the pool", v + 1),
            });
            return out;
        }
    }

    for a in &s.assignments {
        if a.start > a.finish {
            out.push(Violation::NegativeInterval { task: a.task });
        }
    }

    for e in g.edges() {
        let pred_finish = s.assignments[e.from].finish;
        let start = s.assignments[e.to].start;
        if start < pred_finish && !close(start, pred_finish) {
            out.push(Violation::Precedence {
                edge: (e.from, e.to),
                slack: pred_finish - start,
            });
        }
    }

    // Re-derive processing times from placements (execution plus the sum of
    // outbound transfer times), then starts from predecessor finishes plus
    // boot/serialization on each instance in assignment order.
    let mut derived_finish = vec![S::zero(); n];
    let mut first_on_instance: Vec<Option<usize>> = vec![None; s.pool.len()];
    let mut last_finish: Vec<S> = vec![S::zero(); s.pool.len()];
    let mut prev_task_on_instance: Vec<Option<usize>> = vec![None; s.pool.len()];
    let mut derived_tec = Money::ZERO;

    for v in 0..n {
        let a = &s.assignments[v];
        let u = a.instance;
        let slot = s.pool.slot(u);
        let vm = s.pool.vm_spec(sys, u);

        let mut transfer = S::zero();
        for (w, edge) in g.successors(v) {
            let u2 = s.assignments[w].instance;
            if u2 == u {
                continue;
            }
            let slot2 = s.pool.slot(u2);
            let placement = if slot2.provider == slot.provider {
                Placement::SameCloud(slot.provider)
            } else {
                derived_tec += sys
                    .transfer_cost(edge.volume_gb, slot.provider, slot2.provider)
                    .unwrap_or(Money::ZERO);
                Placement::CrossCloud(slot.provider, slot2.provider)
            };
            transfer += sys.comm_time(edge.volume_gb, placement).unwrap_or(S::zero());
        }
        let processing = g.task(v).weight / vm.capacity + transfer;

        let mut expected_start = S::zero();
        for (p, _) in g.predecessors(v) {
            expected_start = expected_start.max(derived_finish[p]);
        }
        match first_on_instance[u] {
            None => {
                expected_start = expected_start.max(vm.boot_time);
                first_on_instance[u] = Some(v);
            }
            Some(_) => {
                expected_start = expected_start.max(last_finish[u]);
                if a.start < last_finish[u] && !close(a.start, last_finish[u]) {
                    out.push(Violation::InstanceOverlap {
                        instance: u,
                        tasks: (prev_task_on_instance[u].unwrap_or(0), v),
                    });
                }
            }
        }
        if !close(a.start, expected_start) {
            out.push(Violation::StartMismatch {
                task: v,
                stored: a.start,
                derived: expected_start,
            });
        }
        let expected_finish = expected_start + processing;
        if !close(a.finish, expected_finish) {
            out.push(Violation::FinishMismatch {
                task: v,
                stored: a.finish,
                derived: expected_finish,
            });
        }
        derived_finish[v] = expected_finish;
        last_finish[u] = expected_finish;
        prev_task_on_instance[u] = Some(v);
    }

    // Leases: one per used instance, boot-to-last-finish, billed whole.
    let mut expected_leases: Vec<(usize, S, S)> = Vec::new();
    for u in 0..s.pool.len() {
        if let Some(first) = first_on_instance[u] {
            let vm = s.pool.vm_spec(sys, u);
            let start = s.assignments[first].start - vm.boot_time;
            expected_leases.push((u, start, last_finish[u]));
            let billing = &sys.providers()[s.pool.slot(u).provider].billing;
            derived_tec += lease_cost(last_finish[u] - start, vm, billing);
        }
    }
    if s.leases.len() != expected_leases.len() {
        out.push(Violation::LeaseMismatch {
            instance: 0,
            detail: format!(
                "{} leases stored, {} instances used",
                s.leases.len(),
                expected_leases.len()
            ),
        });
    } else {
        for (lease, (u, start, finish)) in s.leases.iter().zip(&expected_leases) {
            if lease.instance != *u {
                out.push(Violation::LeaseMismatch {
                    instance: *u,
                    detail: format!("lease order: expected instance {}", *u + 1),
                });
            } else if !close(lease.start, *start) || !close(lease.finish, *finish) {
                out.push(Violation::LeaseMismatch {
                    instance: *u,
                    detail: format!(
                        "stored [{}, {}], derived [{start}, {finish}]",
                        lease.start, lease.finish
                    ),
                });
            }
        }
    }

    if s.tec != derived_tec {
        out.push(Violation::TecMismatch {
            stored: s.tec,
            derived: derived_tec,
        });
    }
    let derived_tet = derived_finish[n - 1];
    if !close(s.tet, derived_tet) {
        out.push(Violation::TetMismatch {
            stored: s.tet,
            derived: derived_tet,
        });
    }
    out
}

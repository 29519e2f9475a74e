//! Particles, resource pools, timed-and-priced schedules, and an
//! independent schedule verifier.

mod decode;
mod text;
mod verify;

pub use decode::{decode, decode_with_pool, DecodeOptions};
pub use text::schedule_to_text;
pub use verify::{verify_schedule, Violation};

use crate::cloud::{MultiCloudSystem, VmTypeSpec};
use crate::money::Money;
use crate::scalar::Scalar;
use crate::workflow::TaskGraph;

/// One leasable VM-instance slot a particle position can index into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoolSlot {
    pub provider: usize,
    pub vm_type: usize,
    pub replica: usize,
}

/// The finite set of instance slots: every VM type of the system replicated
/// once per member of the maximum-parallelizable-task set, in deterministic
/// provider-major, type-minor, replica-minor order.
#[derive(Clone, Debug)]
pub struct ResourcePool {
    slots: Vec<PoolSlot>,
    parallel_set_size: usize,
}

impl ResourcePool {
    pub fn build<S: Scalar>(g: &TaskGraph<S>, sys: &MultiCloudSystem<S>) -> ResourcePool {
        let replicas = g.max_parallel_tasks().len();
        let mut slots = Vec::with_capacity(sys.vm_type_count() * replicas);
        for (provider, vm_type, _) in sys.vm_types() {
            for replica in 0..replicas {
                slots.push(PoolSlot {
                    provider,
                    vm_type,
                    replica,
                });
            }
        }
        ResourcePool {
            slots,
            parallel_set_size: replicas,
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slot(&self, index: usize) -> PoolSlot {
        self.slots[index]
    }

    pub fn slots(&self) -> &[PoolSlot] {
        &self.slots
    }

    /// Size of the maximum-parallelizable-task set the pool was built for.
    pub fn parallel_set_size(&self) -> usize {
        self.parallel_set_size
    }

    pub fn vm_spec<'a, S: Scalar>(&self, sys: &'a MultiCloudSystem<S>, index: usize) -> &'a VmTypeSpec<S> {
        let slot = self.slots[index];
        &sys.providers()[slot.provider].vm_types[slot.vm_type]
    }
}

/// One task placement: where the task ran and when (finish includes the
/// task's outbound transfer time).
#[derive(Clone, Copy, Debug)]
pub struct Assignment<S> {
    pub task: usize,
    /// 0-based pool slot index.
    pub instance: usize,
    pub start: S,
    pub finish: S,
}

/// Paid interval during which one instance is held, from pre-boot start to
/// the last finish of its tasks.
#[derive(Clone, Copy, Debug)]
pub struct Lease<S> {
    pub instance: usize,
    pub start: S,
    pub finish: S,
}

/// A fully timed, fully priced schedule.
#[derive(Clone, Debug)]
pub struct Schedule<S> {
    pub pool: ResourcePool,
    /// Task placements in processing (topological index) order.
    pub assignments: Vec<Assignment<S>>,
    /// Leases of the instances actually used, in instance-index order.
    pub leases: Vec<Lease<S>>,
    /// Total execution cost: lease charges plus cross-cloud transfer charges.
    pub tec: Money,
    /// Total execution time: finish time of the exit task.
    pub tet: S,
}

impl<S: Scalar> Schedule<S> {
    pub fn assignment(&self, task: usize) -> &Assignment<S> {
        &self.assignments[task]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::default_testbed;
    use crate::workflow::graph_from_weights;

    #[test]
    fn pool_replicates_each_type_once_per_parallel_task() {
        let sys = default_testbed::<f64>();
        // Diamond: parallel set size 2, so 24 types become 48 slots.
        let g = graph_from_weights::<f64>(
            &[0.0, 1.0, 1.0, 0.0],
            &[(1, 2, 0.0), (1, 3, 0.0), (2, 4, 0.0), (3, 4, 0.0)],
        )
        .unwrap();
        let pool = ResourcePool::build(&g, &sys);
        assert_eq!(pool.parallel_set_size(), 2);
        assert_eq!(pool.len(), 48);

        // Chain: parallel set size 1, one slot per type.
        let chain = graph_from_weights::<f64>(&[1.0, 1.0], &[(1, 2, 0.0)]).unwrap();
        let pool = ResourcePool::build(&chain, &sys);
        assert_eq!(pool.len(), 24);
    }

    #[test]
    fn pool_order_is_provider_major_type_minor_replica_minor() {
        let sys = default_testbed::<f64>();
        let g = graph_from_weights::<f64>(
            &[0.0, 1.0, 1.0, 0.0],
            &[(1, 2, 0.0), (1, 3, 0.0), (2, 4, 0.0), (3, 4, 0.0)],
        )
        .unwrap();
        let pool = ResourcePool::build(&g, &sys);
        assert_eq!(pool.slot(0), PoolSlot { provider: 0, vm_type: 0, replica: 0 });
        assert_eq!(pool.slot(1), PoolSlot { provider: 0, vm_type: 0, replica: 1 });
        assert_eq!(pool.slot(2), PoolSlot { provider: 0, vm_type: 1, replica: 0 });
        assert_eq!(pool.slot(47), PoolSlot { provider: 5, vm_type: 3, replica: 1 });
    }
}

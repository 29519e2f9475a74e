//! Maximum execution time (MET): for each task and VM type, the longest
//! execution time from the task to the exit along any path, assuming every
//! task on the path runs on that single VM type. Communication is excluded
//! because the path shares one instance. Used to bound deadline feasibility
//! during initialization.

use crate::cloud::MultiCloudSystem;
use crate::scalar::Scalar;
use crate::workflow::TaskGraph;

/// Dense (task, VM type) table of MET values; types use the system's flat
/// provider-major, type-minor index.
#[derive(Clone, Debug)]
pub struct MetTable<S> {
    n_types: usize,
    values: Vec<S>,
}

impl<S: Scalar> MetTable<S> {
    pub fn get(&self, task: usize, flat_type: usize) -> S {
        self.values[task * self.n_types + flat_type]
    }

    pub fn type_count(&self) -> usize {
        self.n_types
    }
}

pub fn met_table<S: Scalar>(g: &TaskGraph<S>, sys: &MultiCloudSystem<S>) -> MetTable<S> {
    let n = g.len();
    let capacities: Vec<S> = sys.vm_types().map(|(_, _, vm)| vm.capacity).collect();
    let n_types = capacities.len();
    let mut values = vec![S::zero(); n * n_types];

    for v in (0..n).rev() {
        for (t, &capacity) in capacities.iter().enumerate() {
            let exec = g.task(v).weight / capacity;
            let tail = g
                .successors(v)
                .map(|(w, _)| values[w * n_types + t])
                .fold(None::<S>, |acc, m| Some(acc.map_or(m, |a| a.max(m))));
            values[v * n_types + t] = match tail {
                Some(tail) => exec + tail,
                None => exec,
            };
        }
    }
    MetTable { n_types, values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::default_testbed;
    use crate::workflow::graph_from_weights;

    #[test]
    fn exit_met_is_its_own_exec_time() {
        let g = graph_from_weights::<f64>(&[4.0, 8.0], &[(1, 2, 0.0)]).unwrap();
        let sys = default_testbed::<f64>();
        let met = met_table(&g, &sys);
        for t in 0..met.type_count() {
            let capacity = sys.vm_types().nth(t).unwrap().2.capacity;
            assert_eq!(met.get(1, t), 8.0 / capacity);
        }
    }

    #[test]
    fn chain_met_accumulates_along_the_path() {
        // Weights (0, 10, 0) on a capacity-2 type: MET at the entry is 5.
        let g = graph_from_weights::<f64>(&[0.0, 10.0, 0.0], &[(1, 2, 0.0), (2, 3, 0.0)]).unwrap();
        let sys = default_testbed::<f64>();
        let met = met_table(&g, &sys);
        // Flat type 0 is MA-east B2MS with capacity 2.
        assert_eq!(met.get(0, 0), 5.0);
        assert_eq!(met.get(1, 0), 5.0);
        assert_eq!(met.get(2, 0), 0.0);
    }

    #[test]
    fn diamond_met_is_longest_path() {
        // All weights 6; on a capacity-3 type each hop is 2 and the longest
        // path has three tasks, so MET at the entry is 6. The testbed has no
        // capacity-3 type, so build a one-off system.
        let mut cfg = crate::cloud::default_testbed_config();
        cfg.providers.truncate(1);
        cfg.providers[0].vm_types.truncate(1);
        cfg.providers[0].vm_types[0].capacity = 3.0;
        let sys: MultiCloudSystem<f64> = cfg.build().unwrap();
        let g = graph_from_weights::<f64>(
            &[6.0, 6.0, 6.0, 6.0],
            &[(1, 2, 0.0), (1, 3, 0.0), (2, 4, 0.0), (3, 4, 0.0)],
        )
        .unwrap();
        let met = met_table(&g, &sys);
        assert_eq!(met.get(0, 0), 6.0);
    }
}

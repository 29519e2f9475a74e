//! Layered random DAG generator for property tests and synthetic benchmarks.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::scalar::{s, Scalar};
use crate::workflow::{Task, TaskGraph};

/// Shape and weight ranges for [`layered_dag`].
#[derive(Clone, Debug)]
pub struct LayeredDagConfig {
    pub layers: usize,
    pub min_width: usize,
    pub max_width: usize,
    /// Probability of each extra edge between consecutive layers, beyond the
    /// one guaranteed parent per task.
    pub edge_density: f64,
    /// Task weight range in compute units.
    pub weight_range: (f64, f64),
    /// Edge data volume range in GB.
    pub volume_range_gb: (f64, f64),
}

impl Default for LayeredDagConfig {
    fn default() -> Self {
        LayeredDagConfig {
            layers: 4,
            min_width: 1,
            max_width: 4,
            edge_density: 0.3,
            weight_range: (10.0, 200.0),
            volume_range_gb: (0.0, 0.05),
        }
    }
}

/// Generates a layered random DAG, wrapped with virtual entry/exit tasks.
/// Every non-first-layer task gets at least one parent in the previous
/// layer, so layer index equals topological level. Deterministic per seed.
pub fn layered_dag<S: Scalar>(cfg: &LayeredDagConfig, seed: u64) -> TaskGraph<S> {
    assert!(cfg.layers >= 1 && cfg.min_width >= 1 && cfg.max_width >= cfg.min_width);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let widths: Vec<usize> = (0..cfg.layers)
        .map(|_| rng.gen_range(cfg.min_width..=cfg.max_width))
        .collect();
    let mut first_of_layer = vec![0usize];
    for w in &widths {
        let last = *first_of_layer.last().unwrap();
        first_of_layer.push(last + w);
    }
    let n = *first_of_layer.last().unwrap();

    let mut tasks = Vec::with_capacity(n);
    for _ in 0..n {
        let w = rng.gen_range(cfg.weight_range.0..=cfg.weight_range.1);
        tasks.push(Task {
            weight: s::<S>(w),
            label: None,
        });
    }

    let vol = |rng: &mut ChaCha8Rng| -> S {
        s::<S>(rng.gen_range(cfg.volume_range_gb.0..=cfg.volume_range_gb.1))
    };
    let mut edges: Vec<(usize, usize, S)> = Vec::new();
    for layer in 1..cfg.layers {
        let prev = first_of_layer[layer - 1]..first_of_layer[layer];
        let cur = first_of_layer[layer]..first_of_layer[layer + 1];
        for t in cur {
            let parent = rng.gen_range(prev.clone());
            let volume = vol(&mut rng);
            edges.push((parent, t, volume));
            for p in prev.clone() {
                if p != parent && rng.gen_bool(cfg.edge_density) {
                    let volume = vol(&mut rng);
                    edges.push((p, t, volume));
                }
            }
        }
    }

    TaskGraph::wrap(tasks, edges).expect("generated DAG is valid")
}

//! Workflow graphs: DAGs of tasks with compute weights on nodes and data
//! volumes (GB) on edges.
//!
//! Graphs are kept in a canonical form: task indices `0..n` are a topological
//! order, task `0` is the unique entry and task `n-1` the unique exit. The
//! DAX loader and the synthetic generator wrap arbitrary DAGs into this form
//! by adding zero-weight virtual entry/exit tasks and reindexing;
//! [`TaskGraph::new`] validates graphs that are already canonical.

mod dax;
mod synth;
mod text;

pub use dax::{load_dax, load_dax_str, DaxOptions};
pub use synth::{layered_dag, LayeredDagConfig};
pub use text::{load_text, load_text_str, to_text};

use rand::Rng;

use crate::error::WorkflowError;
use crate::scalar::Scalar;

/// One workflow task.
#[derive(Clone, Debug)]
pub struct Task<S> {
    /// Computation amount in abstract compute units; a capacity-`c` VM runs
    /// the task in `weight / c` seconds. Zero for virtual entry/exit tasks.
    pub weight: S,
    /// Source name from the input file, if any (e.g. a DAX job id).
    pub label: Option<String>,
}

/// A directed data-dependency edge. `from < to` always holds.
#[derive(Clone, Copy, Debug)]
pub struct Edge<S> {
    pub from: usize,
    pub to: usize,
    /// Output volume transferred from `from` to `to`, in GB.
    pub volume_gb: S,
}

/// Immutable workflow DAG in canonical form.
#[derive(Clone, Debug)]
pub struct TaskGraph<S> {
    tasks: Vec<Task<S>>,
    edges: Vec<Edge<S>>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl<S: Scalar> TaskGraph<S> {
    /// Builds a graph from tasks and edges already in canonical form.
    ///
    /// Requirements: at least one task; every edge has `from < to` (so the
    /// index order is topological), no self-loops or duplicates; task `0` is
    /// the only task without predecessors and task `n-1` the only one without
    /// successors; weights and volumes are non-negative.
    pub fn new(tasks: Vec<Task<S>>, edges: Vec<Edge<S>>) -> Result<Self, WorkflowError> {
        if tasks.is_empty() {
            return Err(WorkflowError::Validation("graph has no tasks".into()));
        }
        let n = tasks.len();
        for (i, t) in tasks.iter().enumerate() {
            if t.weight < S::zero() {
                return Err(WorkflowError::Validation(format!(
                    "task {} has negative weight",
                    i + 1
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for e in &edges {
            if e.from >= n || e.to >= n {
                return Err(WorkflowError::Validation(format!(
                    "edge ({}, {}) references a task outside 1..={n}",
                    e.from + 1,
                    e.to + 1
                )));
            }
            if e.from == e.to {
                return Err(WorkflowError::Validation(format!(
                    "self-loop on task {}",
                    e.from + 1
                )));
            }
            if e.from > e.to {
                return Err(WorkflowError::Validation(format!(
                    "edge ({}, {}) goes against the index order; task indices must be topological",
                    e.from + 1,
                    e.to + 1
                )));
            }
            if !seen.insert((e.from, e.to)) {
                return Err(WorkflowError::Validation(format!(
                    "duplicate edge ({}, {})",
                    e.from + 1,
                    e.to + 1
                )));
            }
            if e.volume_gb < S::zero() {
                return Err(WorkflowError::Validation(format!(
                    "edge ({}, {}) has negative volume",
                    e.from + 1,
                    e.to + 1
                )));
            }
        }
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for (idx, e) in edges.iter().enumerate() {
            succ[e.from].push(idx);
            pred[e.to].push(idx);
        }
        for v in 1..n {
            if pred[v].is_empty() {
                return Err(WorkflowError::Validation(format!(
                    "task {} has no predecessor; only the entry task may be a source",
                    v + 1
                )));
            }
        }
        for v in 0..n.saturating_sub(1) {
            if succ[v].is_empty() {
                return Err(WorkflowError::Validation(format!(
                    "task {} has no successor; only the exit task may be a sink",
                    v + 1
                )));
            }
        }
        Ok(TaskGraph {
            tasks,
            edges,
            succ,
            pred,
        })
    }

    /// Wraps an arbitrary DAG into canonical form: adds a zero-weight virtual
    /// entry with zero-volume edges to every source and a virtual exit fed by
    /// every sink, then reindexes tasks topologically (deterministically, by
    /// original index among ready tasks).
    pub fn wrap(tasks: Vec<Task<S>>, edges: Vec<(usize, usize, S)>) -> Result<Self, WorkflowError> {
        let n = tasks.len();
        if n == 0 {
            return Err(WorkflowError::Validation("graph has no tasks".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &(f, t, _) in &edges {
            if f >= n || t >= n {
                return Err(WorkflowError::Validation(format!(
                    "edge ({f}, {t}) references a task outside the graph"
                )));
            }
            if f == t {
                return Err(WorkflowError::Validation(format!("self-loop on task {f}")));
            }
            if !seen.insert((f, t)) {
                return Err(WorkflowError::Validation(format!("duplicate edge ({f}, {t})")));
            }
        }

        // Kahn's algorithm; ready tasks processed in ascending original index
        // so the relabeling is deterministic.
        let mut indeg = vec![0usize; n];
        let mut adj = vec![Vec::new(); n];
        for &(f, t, _) in &edges {
            indeg[t] += 1;
            adj[f].push(t);
        }
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            order.push(v);
            for &w in &adj[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        if order.len() != n {
            return Err(WorkflowError::Cycle);
        }

        // new index = position in `order`, shifted by 1 for the virtual entry
        let mut new_of = vec![0usize; n];
        for (pos, &v) in order.iter().enumerate() {
            new_of[v] = pos + 1;
        }

        let mut new_tasks = Vec::with_capacity(n + 2);
        new_tasks.push(Task {
            weight: S::zero(),
            label: None,
        });
        for &v in &order {
            new_tasks.push(tasks[v].clone());
        }
        new_tasks.push(Task {
            weight: S::zero(),
            label: None,
        });

        let mut new_edges: Vec<Edge<S>> = edges
            .iter()
            .map(|&(f, t, vol)| Edge {
                from: new_of[f],
                to: new_of[t],
                volume_gb: vol,
            })
            .collect();
        let mut has_pred = vec![false; n + 2];
        let mut has_succ = vec![false; n + 2];
        for e in &new_edges {
            has_pred[e.to] = true;
            has_succ[e.from] = true;
        }
        for v in 1..=n {
            if !has_pred[v] {
                new_edges.push(Edge {
                    from: 0,
                    to: v,
                    volume_gb: S::zero(),
                });
            }
            if !has_succ[v] {
                new_edges.push(Edge {
                    from: v,
                    to: n + 1,
                    volume_gb: S::zero(),
                });
            }
        }
        new_edges.sort_by_key(|e| (e.from, e.to));
        TaskGraph::new(new_tasks, new_edges)
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn task(&self, v: usize) -> &Task<S> {
        &self.tasks[v]
    }

    pub fn tasks(&self) -> &[Task<S>] {
        &self.tasks
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    pub fn entry(&self) -> usize {
        0
    }

    pub fn exit(&self) -> usize {
        self.tasks.len() - 1
    }

    /// Outgoing edges of `v` as `(successor, edge)` pairs.
    pub fn successors(&self, v: usize) -> impl Iterator<Item = (usize, &Edge<S>)> {
        self.succ[v].iter().map(move |&i| (self.edges[i].to, &self.edges[i]))
    }

    /// Incoming edges of `v` as `(predecessor, edge)` pairs.
    pub fn predecessors(&self, v: usize) -> impl Iterator<Item = (usize, &Edge<S>)> {
        self.pred[v].iter().map(move |&i| (self.edges[i].from, &self.edges[i]))
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.pred[v].len()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.succ[v].len()
    }

    /// Topological level of every task: 0 for the entry, otherwise
    /// `1 + max` over predecessors, computed by a breadth-first sweep of the
    /// index order.
    pub fn top_levels(&self) -> Vec<u32> {
        let mut level = vec![0u32; self.len()];
        for v in 1..self.len() {
            level[v] = self
                .predecessors(v)
                .map(|(p, _)| level[p] + 1)
                .max()
                .unwrap_or(0);
        }
        level
    }

    /// A uniformly seeded random topological order: repeatedly picks a random
    /// ready (in-degree zero) task, so every topological order has nonzero
    /// probability. Deterministic for a fixed RNG state.
    pub fn random_topological_order<R: Rng>(&self, rng: &mut R) -> Vec<usize> {
        let n = self.len();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.in_degree(v)).collect();
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while !ready.is_empty() {
            let pick = rng.gen_range(0..ready.len());
            let v = ready.swap_remove(pick);
            order.push(v);
            for (w, _) in self.successors(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(w);
                }
            }
        }
        debug_assert_eq!(order.len(), n);
        order
    }

    /// Reachability closure: `desc[v]` has bit `u` set iff a directed path
    /// `v -> u` exists.
    fn descendants(&self) -> BitMatrix {
        let n = self.len();
        let mut m = BitMatrix::new(n);
        for v in (0..n).rev() {
            for (w, _) in self.successors(v) {
                m.set(v, w);
                m.or_row_into(w, v);
            }
        }
        m
    }

    /// The set of tasks that can execute in parallel: all tasks of the most
    /// populated topological level (smallest such level on ties), then every
    /// lower-level task, in increasing level order, that shares no
    /// ancestor/descendant relation with the set so far. The result is an
    /// antichain, though not necessarily a maximum one.
    pub fn max_parallel_tasks(&self) -> Vec<usize> {
        let n = self.len();
        let levels = self.top_levels();
        let max_level = *levels.iter().max().unwrap() as usize;
        let mut width = vec![0usize; max_level + 1];
        for &l in &levels {
            width[l as usize] += 1;
        }
        let busiest = width
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(l, _)| l as u32)
            .unwrap();

        let desc = self.descendants();
        let mut members: Vec<usize> = (0..n).filter(|&v| levels[v] == busiest).collect();
        // Union of the members' descendant / ancestor sets, for O(1) checks.
        let mut reach_down = BitRow::new(n);
        let mut reach_up = BitRow::new(n);
        for &v in &members {
            reach_down.or(desc.row(v));
            for u in 0..n {
                if desc.get(u, v) {
                    reach_up.set(u);
                }
            }
        }

        let mut candidates: Vec<usize> = (0..n).filter(|&v| levels[v] < busiest).collect();
        candidates.sort_by_key(|&v| (levels[v], v));
        for v in candidates {
            if reach_down.get(v) || reach_up.get(v) {
                continue;
            }
            members.push(v);
            reach_down.or(desc.row(v));
            for u in 0..n {
                if desc.get(u, v) {
                    reach_up.set(u);
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// True if a directed path `a -> b` or `b -> a` exists.
    pub fn depends(&self, a: usize, b: usize) -> bool {
        let desc = self.descendants();
        desc.get(a, b) || desc.get(b, a)
    }
}

/// Single bitset row over task indices.
struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    fn new(n: usize) -> Self {
        BitRow {
            words: vec![0; n.div_ceil(64)],
        }
    }
    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
    fn or(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a |= b;
        }
    }
}

/// Dense n x n reachability bitmap.
struct BitMatrix {
    n_words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let n_words = n.div_ceil(64);
        BitMatrix {
            n_words,
            bits: vec![0; n * n_words],
        }
    }
    fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.n_words + col / 64] |= 1 << (col % 64);
    }
    fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.n_words + col / 64] >> (col % 64) & 1 == 1
    }
    fn row(&self, row: usize) -> &[u64] {
        &self.bits[row * self.n_words..(row + 1) * self.n_words]
    }
    /// `row(dst) |= row(src)`.
    fn or_row_into(&mut self, src: usize, dst: usize) {
        for w in 0..self.n_words {
            let v = self.bits[src * self.n_words + w];
            self.bits[dst * self.n_words + w] |= v;
        }
    }
}

/// Test/fixture helper: builds a canonical graph from weights and
/// `(from, to, volume)` edges given with 1-based task ids.
pub fn graph_from_weights<S: Scalar>(
    weights: &[f64],
    edges: &[(usize, usize, f64)],
) -> Result<TaskGraph<S>, WorkflowError> {
    let tasks = weights
        .iter()
        .map(|&w| Task {
            weight: crate::scalar::s(w),
            label: None,
        })
        .collect();
    let edges = edges
        .iter()
        .map(|&(f, t, vol)| Edge {
            from: f - 1,
            to: t - 1,
            volume_gb: crate::scalar::s(vol),
        })
        .collect();
    TaskGraph::new(tasks, edges)
}

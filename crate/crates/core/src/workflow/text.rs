//! Plain-text adjacency format for workflow fixtures.
//!
//! Line grammar (whitespace separated, `#` starts a comment, blank lines
//! ignored):
//!
//! ```text
//! <id> <weight>              one line per task, ids 1..n in order
//! <from> <to> <volume_gb>    one line per edge, after all tasks
//! ```
//!
//! The file describes the graph literally (no virtual wrapping): task ids
//! must already be a topological order with task 1 the unique entry and task
//! n the unique exit.

use std::path::Path;

use crate::error::WorkflowError;
use crate::scalar::Scalar;
use crate::workflow::{Edge, Task, TaskGraph};

pub fn load_text<S: Scalar>(path: &Path) -> Result<TaskGraph<S>, WorkflowError> {
    load_text_str(&std::fs::read_to_string(path)?)
}

pub fn load_text_str<S: Scalar>(content: &str) -> Result<TaskGraph<S>, WorkflowError> {
    let mut tasks: Vec<Task<S>> = Vec::new();
    let mut edges: Vec<Edge<S>> = Vec::new();
    for (lineno, raw) in content.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| -> Result<f64, WorkflowError> {
            s.parse::<f64>().map_err(|_| {
                WorkflowError::Format(format!("line {}: bad number `{s}`", lineno + 1))
            })
        };
        match fields.as_slice() {
            [id, weight] => {
                if !edges.is_empty() {
                    return Err(WorkflowError::Format(format!(
                        "line {}: task line after edge lines",
                        lineno + 1
                    )));
                }
                let id = num(id)? as usize;
                if id != tasks.len() + 1 {
                    return Err(WorkflowError::Format(format!(
                        "line {}: expected task id {} but found {id}",
                        lineno + 1,
                        tasks.len() + 1
                    )));
                }
                tasks.push(Task {
                    weight: crate::scalar::s(num(weight)?),
                    label: None,
                });
            }
            [from, to, volume] => {
                let from = num(from)? as usize;
                let to = num(to)? as usize;
                if from == 0 || to == 0 {
                    return Err(WorkflowError::Format(format!(
                        "line {}: task ids are 1-based",
                        lineno + 1
                    )));
                }
                edges.push(Edge {
                    from: from - 1,
                    to: to - 1,
                    volume_gb: crate::scalar::s(num(volume)?),
                });
            }
            _ => {
                return Err(WorkflowError::Format(format!(
                    "line {}: expected `id weight` or `from to volume_gb`",
                    lineno + 1
                )));
            }
        }
    }
    TaskGraph::new(tasks, edges)
}

/// Renders a graph in the adjacency format; `load_text_str` of the output
/// reproduces the graph.
pub fn to_text<S: Scalar>(g: &TaskGraph<S>) -> String {
    let mut out = String::new();
    for (i, t) in g.tasks().iter().enumerate() {
        out.push_str(&format!("{} {}\n", i + 1, t.weight));
    }
    for e in g.edges() {
        out.push_str(&format!("{} {} {}\n", e.from + 1, e.to + 1, e.volume_gb));
    }
    out
}

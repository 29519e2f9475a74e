//! Loader for the Pegasus DAX XML subset produced by the synthetic workflow
//! generators (Epigenomics, LIGO, Montage, ...).
//!
//! Recognized structure: `<job id runtime>` elements carrying
//! `<uses file link size>` children, plus `<child ref><parent ref/></child>`
//! dependency elements. Everything else (transformation catalogs, file
//! registration flags) is ignored.

use std::collections::HashMap;
use std::path::Path;

use crate::error::WorkflowError;
use crate::scalar::{s, Scalar};
use crate::workflow::{Task, TaskGraph};

const BYTES_PER_GB: f64 = (1u64 << 30) as f64;

/// Knobs for mapping DAX attributes onto graph quantities.
#[derive(Clone, Debug)]
pub struct DaxOptions {
    /// Compute units per second of declared runtime: a task's weight is
    /// `runtime * reference_capacity`, so a capacity-1 VM reproduces the
    /// declared runtime.
    pub reference_capacity: f64,
}

impl Default for DaxOptions {
    fn default() -> Self {
        DaxOptions {
            reference_capacity: 1.0,
        }
    }
}

pub fn load_dax<S: Scalar>(path: &Path, opts: &DaxOptions) -> Result<TaskGraph<S>, WorkflowError> {
    load_dax_str(&std::fs::read_to_string(path)?, opts)
}

pub fn load_dax_str<S: Scalar>(xml: &str, opts: &DaxOptions) -> Result<TaskGraph<S>, WorkflowError> {
    let doc = roxmltree::Document::parse(xml)
        .map_err(|e| WorkflowError::Format(format!("XML parse error: {e}")))?;

    struct Job {
        runtime: f64,
        // file name -> produced bytes
        outputs: HashMap<String, f64>,
        inputs: Vec<String>,
    }

    let mut ids: Vec<String> = Vec::new();
    let mut jobs: HashMap<String, Job> = HashMap::new();
    let mut deps: Vec<(String, String)> = Vec::new();

    for node in doc.root_element().children().filter(|n| n.is_element()) {
        match node.tag_name().name() {
            "job" => {
                let id = node
                    .attribute("id")
                    .ok_or_else(|| WorkflowError::Format("job without id".into()))?
                    .to_string();
                let runtime: f64 = node
                    .attribute("runtime")
                    .unwrap_or("0")
                    .parse()
                    .map_err(|_| {
                        WorkflowError::Format(format!("job {id}: bad runtime attribute"))
                    })?;
                if runtime < 0.0 {
                    return Err(WorkflowError::Format(format!("job {id}: negative runtime")));
                }
                let mut job = Job {
                    runtime,
                    outputs: HashMap::new(),
                    inputs: Vec::new(),
                };
                for uses in node.children().filter(|n| n.has_tag_name("uses")) {
                    let file = uses
                        .attribute("file")
                        .ok_or_else(|| {
                            WorkflowError::Format(format!("job {id}: uses without file"))
                        })?
                        .to_string();
                    let size: f64 = uses.attribute("size").unwrap_or("0").parse().map_err(|_| {
                        WorkflowError::Format(format!("job {id}: bad size for file {file}"))
                    })?;
                    match uses.attribute("link") {
                        Some("output") => {
                            job.outputs.insert(file, size);
                        }
                        Some("input") => job.inputs.push(file),
                        _ => {}
                    }
                }
                if jobs.insert(id.clone(), job).is_some() {
                    return Err(WorkflowError::Format(format!("duplicate job id {id}")));
                }
                ids.push(id);
            }
            "child" => {
                let child = node
                    .attribute("ref")
                    .ok_or_else(|| WorkflowError::Format("child without ref".into()))?;
                for parent in node.children().filter(|n| n.has_tag_name("parent")) {
                    let parent = parent
                        .attribute("ref")
                        .ok_or_else(|| WorkflowError::Format("parent without ref".into()))?;
                    deps.push((parent.to_string(), child.to_string()));
                }
            }
            _ => {}
        }
    }

    let index_of: HashMap<&str, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();

    // Volume of a dependency edge: total bytes of files the parent produces
    // and the child consumes. Several shared files sum into one edge.
    let mut edges: Vec<(usize, usize, S)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (parent, child) in &deps {
        let pi = *index_of
            .get(parent.as_str())
            .ok_or_else(|| WorkflowError::UnknownJob(parent.clone()))?;
        let ci = *index_of
            .get(child.as_str())
            .ok_or_else(|| WorkflowError::UnknownJob(child.clone()))?;
        if !seen.insert((pi, ci)) {
            continue;
        }
        let pjob = &jobs[parent.as_str()];
        let cjob = &jobs[child.as_str()];
        let bytes: f64 = cjob
            .inputs
            .iter()
            .filter_map(|f| pjob.outputs.get(f))
            .sum();
        edges.push((pi, ci, s::<S>(bytes / BYTES_PER_GB)));
    }

    let tasks: Vec<Task<S>> = ids
        .iter()
        .map(|id| Task {
            weight: s::<S>(jobs[id.as_str()].runtime * opts.reference_capacity),
            label: Some(id.clone()),
        })
        .collect();

    TaskGraph::wrap(tasks, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_single_job_becomes_three_node_chain() {
        let xml = r#"<?xml version="1.0" encoding="UTF-8"?>
<adag xmlns="http://pegasus.isi.edu/schema/DAX" version="2.1" name="t" jobCount="1">
  <job id="ID00000" name="solo" runtime="12.5"/>
</adag>"#;
        let g: TaskGraph<f64> = load_dax_str(xml, &DaxOptions::default()).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.task(0).weight, 0.0);
        assert_eq!(g.task(1).weight, 12.5);
        assert_eq!(g.task(2).weight, 0.0);
        assert_eq!(g.edges().len(), 2);
        assert!(g.edges().iter().all(|e| e.volume_gb == 0.0));
    }

    #[test]
    fn shared_file_size_becomes_edge_volume() {
        let two_gb = 2u64 << 30;
        let xml = format!(
            r#"<adag name="t">
  <job id="A" name="a" runtime="1">
    <uses file="x.dat" link="output" size="{two_gb}"/>
  </job>
  <job id="B" name="b" runtime="1">
    <uses file="x.dat" link="input" size="{two_gb}"/>
  </job>
  <child ref="B"><parent ref="A"/></child>
</adag>"#
        );
        let g: TaskGraph<f64> = load_dax_str(&xml, &DaxOptions::default()).unwrap();
        assert_eq!(g.len(), 4);
        let inner: Vec<_> = g
            .edges()
            .iter()
            .filter(|e| e.from != g.entry() && e.to != g.exit())
            .collect();
        assert_eq!(inner.len(), 1);
        assert_eq!(inner[0].volume_gb, 2.0);
    }

    #[test]
    fn dependency_on_undeclared_job_is_an_error() {
        let xml = r#"<adag name="t">
  <job id="A" name="a" runtime="1"/>
  <child ref="B"><parent ref="A"/></child>
</adag>"#;
        match load_dax_str::<f64>(xml, &DaxOptions::default()) {
            Err(WorkflowError::UnknownJob(id)) => assert_eq!(id, "B"),
            other => panic!("expected UnknownJob, got {other:?}"),
        }
    }

    #[test]
    fn cyclic_dependencies_are_an_error() {
        let xml = r#"<adag name="t">
  <job id="A" name="a" runtime="1"/>
  <job id="B" name="b" runtime="1"/>
  <child ref="B"><parent ref="A"/></child>
  <child ref="A"><parent ref="B"/></child>
</adag>"#;
        assert!(matches!(
            load_dax_str::<f64>(xml, &DaxOptions::default()),
            Err(WorkflowError::Cycle)
        ));
    }

    #[test]
    fn malformed_xml_is_a_format_error() {
        assert!(matches!(
            load_dax_str::<f64>("<adag><job id=", &DaxOptions::default()),
            Err(WorkflowError::Format(_))
        ));
    }
}

//! Experiment harness behind the `cedces` binary: beta sweeps over
//! workflows, per-run result rows, summary statistics, and CSV output.

pub mod experiment;

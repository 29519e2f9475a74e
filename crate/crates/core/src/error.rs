//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised while loading or validating a workflow graph.
#[derive(Debug, Error)]
pub enum WorkflowError {
    #[error("i/o error reading workflow: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed workflow file: {0}")]
    Format(String),
    #[error("dependency references undeclared job `{0}`")]
    UnknownJob(String),
    #[error("workflow graph is not acyclic")]
    Cycle,
    #[error("invalid workflow graph: {0}")]
    Validation(String),
}

/// Errors raised while building or querying a multi-cloud system.
#[derive(Debug, Error)]
pub enum SystemError {
    #[error("i/o error reading system config: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed system config: {0}")]
    Format(String),
    #[error("unknown provider index {0}")]
    UnknownProvider(usize),
    #[error("invalid system: {0}")]
    Validation(String),
}

/// Errors raised when mapping a particle position to a schedule.
#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("position has {got} entries but the workflow has {expected} tasks")]
    PositionLength { got: usize, expected: usize },
    #[error("position entry {index} is {value}, outside [1, {pool_size}]")]
    PositionOutOfRange {
        index: usize,
        value: u32,
        pool_size: usize,
    },
}

/// Errors raised by the optimizer driver.
#[derive(Debug, Error)]
pub enum OptimizerError {
    #[error("invalid swarm configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

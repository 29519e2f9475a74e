//! Simulation of deadline-constrained scientific-workflow scheduling on a
//! priced multi-cloud system.
//!
//! The crate models workflow DAGs ([`workflow`]), provider catalogs with
//! per-minute/per-hour/hybrid billing and per-GB transfer pricing
//! ([`cloud`]), the particle-position-to-schedule decoder plus an
//! independent schedule verifier ([`schedule`]), the CEDCES evolutionary
//! scheduler with PSO baselines ([`optimizer`]), and the HEFT makespan used
//! to calibrate deadlines ([`heft`]).
//!
//! All time-like math is generic over [`scalar::Scalar`] (`f32` or `f64`);
//! money is exact micro-dollar arithmetic ([`money::Money`]) throughout.

pub mod cloud;
pub mod error;
pub mod heft;
pub mod money;
pub mod optimizer;
pub mod scalar;
pub mod schedule;
pub mod workflow;

pub use money::Money;
pub use scalar::Scalar;

/// Concrete `f64` instantiations used by the CLI and most callers.
pub type DefaultTaskGraph = workflow::TaskGraph<f64>;
pub type DefaultSystem = cloud::MultiCloudSystem<f64>;
pub type DefaultSchedule = schedule::Schedule<f64>;
pub type DefaultSwarmConfig = optimizer::SwarmConfig<f64>;

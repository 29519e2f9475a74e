//! The CEDCES metaheuristic and its baseline variants: a particle swarm
//! over instance-assignment vectors with deadline-aware greedy
//! initialization, shrink boundary repair, Deb-rule constrained fitness,
//! and per-iteration crossover/mutation.

mod fitness;
mod genetic;
mod init;
mod met;
mod pso;
mod report;

pub use fitness::{compare_fitness, deb_cmp, is_fitter, Fitness};
pub use genetic::{mutate, single_point_crossover, tournament_select, two_point_crossover};
pub use init::{heuristic_init, random_init};
pub use met::{met_table, MetTable};
pub use pso::{inertia_weight, shr_repair, update_position};
pub use report::RunReport;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::OptimizerError;
use crate::scalar::{s, Scalar};
use crate::schedule::{decode_with_pool, DecodeOptions, ResourcePool, Schedule};
use crate::workflow::TaskGraph;
use crate::cloud::MultiCloudSystem;

/// Which scheduler to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Greedy deadline-aware initialization plus single-point crossover.
    Cedces,
    /// Uniform random initialization, otherwise the same loop.
    RandomInitPso,
    /// Uniform random initialization with two-point crossover; a rough
    /// stand-in for the adaptive PSO+GA hybrid it is named after, not a
    /// reimplementation.
    AdpsogaLike,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Cedces => "cedces",
            Variant::RandomInitPso => "pso",
            Variant::AdpsogaLike => "adpsoga",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(v: &str) -> Result<Self, Self::Err> {
        match v {
            "cedces" => Ok(Variant::Cedces),
            "pso" | "random-init-pso" => Ok(Variant::RandomInitPso),
            "adpsoga" | "adpsoga-like" => Ok(Variant::AdpsogaLike),
            other => Err(format!("unknown algorithm variant `{other}`")),
        }
    }
}

/// Swarm parameters. Defaults follow the standard profile: 100 particles,
/// 1000 iterations, c1 = c2 = 2, inertia from 1.4 down to 0.4, and a 0.9
/// deadline reduction during initialization.
#[derive(Clone, Debug)]
pub struct SwarmConfig<S> {
    pub num_particles: usize,
    pub iterations: usize,
    pub c1: S,
    pub c2: S,
    pub w_max: S,
    pub w_min: S,
    /// Deadline in seconds; feasibility means TET within it.
    pub deadline: S,
    /// Fraction of the deadline given to the greedy initializer.
    pub init_deadline_factor: S,
    pub seed: u64,
    pub variant: Variant,
    /// Evaluate particles in parallel. Runs are bit-identical either way.
    pub parallel: bool,
    pub decode_options: DecodeOptions,
}

impl<S: Scalar> SwarmConfig<S> {
    pub fn new(deadline: S, variant: Variant, seed: u64) -> Self {
        SwarmConfig {
            num_particles: 100,
            iterations: 1000,
            c1: s(2.0),
            c2: s(2.0),
            w_max: s(1.4),
            w_min: s(0.4),
            deadline,
            init_deadline_factor: s(0.9),
            seed,
            variant,
            parallel: false,
            decode_options: DecodeOptions::default(),
        }
    }

    fn validate(&self) -> Result<(), OptimizerError> {
        if self.num_particles < 2 {
            return Err(OptimizerError::Config(
                "at least two particles required".into(),
            ));
        }
        if !(self.init_deadline_factor > S::zero() && self.init_deadline_factor <= S::one()) {
            return Err(OptimizerError::Config(
                "init_deadline_factor must be in (0, 1]".into(),
            ));
        }
        if !(self.w_max >= self.w_min && self.w_min > S::zero()) {
            return Err(OptimizerError::Config(
                "inertia bounds must satisfy w_max >= w_min > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Everything a finished run exposes.
#[derive(Clone, Debug)]
pub struct RunOutput<S> {
    pub schedule: Schedule<S>,
    pub best_position: Vec<u32>,
    pub best_fitness: Fitness<S>,
    pub report: RunReport<S>,
}

struct ParticleState<S> {
    position: Vec<u32>,
    velocity: Vec<S>,
    pbest_position: Vec<u32>,
    pbest_fitness: Fitness<S>,
    rng: ChaCha8Rng,
}

/// Runs the configured variant to completion and returns the decoded
/// global-best schedule. Bit-reproducible for a fixed seed, including in
/// parallel evaluation mode: every particle owns a seed-derived substream
/// and the global-best reduction folds in particle index order.
pub fn run<S: Scalar>(
    g: &TaskGraph<S>,
    sys: &MultiCloudSystem<S>,
    cfg: &SwarmConfig<S>,
) -> Result<RunOutput<S>, OptimizerError> {
    cfg.validate()?;
    let pool = ResourcePool::build(g, sys);
    let bound = pool.len() as u32;
    let met = met_table(g, sys);
    let n = g.len();

    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    let particle_seeds: Vec<u64> = (0..cfg.num_particles).map(|_| master.gen()).collect();
    let mut ops_rng = ChaCha8Rng::seed_from_u64(master.gen());

    let evaluate = |position: &[u32]| -> Result<Fitness<S>, OptimizerError> {
        let schedule = decode_with_pool(position, g, sys, &pool, cfg.decode_options)?;
        Ok(Fitness::of(&schedule, cfg.deadline))
    };

    let init_particle = |seed: u64| -> Result<ParticleState<S>, OptimizerError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let position = match cfg.variant {
            Variant::Cedces => heuristic_init(g, sys, &pool, &met, cfg, &mut rng),
            Variant::RandomInitPso | Variant::AdpsogaLike => random_init(n, bound, &mut rng),
        };
        let half_span = bound as f64 / 10.0;
        let velocity: Vec<S> = (0..n)
            .map(|_| s::<S>(rng.gen_range(-half_span..=half_span)))
            .collect();
        let fitness = evaluate(&position)?;
        Ok(ParticleState {
            pbest_position: position.clone(),
            pbest_fitness: fitness,
            position,
            velocity,
            rng,
        })
    };

    let mut particles: Vec<ParticleState<S>> = if cfg.parallel {
        particle_seeds
            .par_iter()
            .map(|&seed| init_particle(seed))
            .collect::<Result<_, _>>()?
    } else {
        particle_seeds
            .iter()
            .map(|&seed| init_particle(seed))
            .collect::<Result<_, _>>()?
    };

    let mut gbest_position = particles[0].pbest_position.clone();
    let mut gbest_fitness = particles[0].pbest_fitness;
    for p in &particles[1..] {
        if is_fitter(&p.pbest_fitness, &gbest_fitness) {
            gbest_fitness = p.pbest_fitness;
            gbest_position = p.pbest_position.clone();
        }
    }

    let mut trajectory = Vec::with_capacity(cfg.iterations + 1);
    trajectory.push((gbest_fitness.tec, gbest_fitness.tet));

    for t in 0..cfg.iterations {
        let w = inertia_weight(t, cfg);

        // Synchronous sweep: every particle moves against the same global
        // best, so parallel and serial evaluation agree bit for bit.
        let sweep = |p: &mut ParticleState<S>| -> Result<(), OptimizerError> {
            let (position, velocity) = update_position(
                &p.position,
                &p.velocity,
                &p.pbest_position,
                &gbest_position,
                w,
                cfg,
                bound,
                &mut p.rng,
            );
            p.position = position;
            p.velocity = velocity;
            let fitness = evaluate(&p.position)?;
            if is_fitter(&fitness, &p.pbest_fitness) {
                p.pbest_fitness = fitness;
                p.pbest_position = p.position.clone();
            }
            Ok(())
        };
        if cfg.parallel {
            particles
                .par_iter_mut()
                .map(sweep)
                .collect::<Result<Vec<_>, _>>()?;
        } else {
            for p in particles.iter_mut() {
                sweep(p)?;
            }
        }
        for p in &particles {
            if is_fitter(&p.pbest_fitness, &gbest_fitness) {
                gbest_fitness = p.pbest_fitness;
                gbest_position = p.pbest_position.clone();
            }
        }

        // One crossover per iteration: the child replaces the particle with
        // the least fit personal best, keeps that particle's velocity, and
        // restarts its personal best from the child position.
        let pbest_fitnesses: Vec<Fitness<S>> =
            particles.iter().map(|p| p.pbest_fitness).collect();
        let (a, b) = tournament_select(&pbest_fitnesses, &mut ops_rng);
        let child = match cfg.variant {
            Variant::AdpsogaLike => two_point_crossover(
                &particles[a].position,
                &particles[b].position,
                &mut ops_rng,
            ),
            _ => single_point_crossover(
                &particles[a].position,
                &particles[b].position,
                &mut ops_rng,
            ),
        };
        // Least fit pbest; ties keep the earliest particle.
        let worst = pbest_fitnesses
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| match deb_cmp(x, y) {
                std::cmp::Ordering::Equal => std::cmp::Ordering::Greater,
                ord => ord,
            })
            .map(|(i, _)| i)
            .unwrap();
        let child_fitness = evaluate(&child)?;
        let p = &mut particles[worst];
        p.position = child.clone();
        p.pbest_position = child;
        p.pbest_fitness = child_fitness;
        if is_fitter(&child_fitness, &gbest_fitness) {
            gbest_fitness = child_fitness;
            gbest_position = p.pbest_position.clone();
        }

        // One mutation per iteration; the mutated position is evaluated on
        // the next sweep, not here.
        let victim = ops_rng.gen_range(0..particles.len());
        mutate(&mut particles[victim].position, bound, &mut ops_rng);

        trajectory.push((gbest_fitness.tec, gbest_fitness.tet));
    }

    let schedule = decode_with_pool(&gbest_position, g, sys, &pool, cfg.decode_options)?;
    let report = RunReport {
        variant: cfg.variant,
        seed: cfg.seed,
        deadline: cfg.deadline,
        trajectory,
        final_fitness: gbest_fitness,
    };
    Ok(RunOutput {
        schedule,
        best_position: gbest_position,
        best_fitness: gbest_fitness,
        report,
    })
}

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use cedces_cli::experiment::{
    load_workflow, run_experiment, workflow_name, write_outputs, ExperimentConfig, SwarmParams,
};
use cedces_core::cloud::{default_testbed, MultiCloudSystem, SystemConfig};
use cedces_core::heft::heft_makespan;
use cedces_core::optimizer::{run, SwarmConfig, Variant};
use cedces_core::schedule::{schedule_to_text, DecodeOptions};

#[derive(Parser)]
#[command(
    name = "cedces",
    about = "Deadline-constrained workflow scheduling on priced multi-cloud systems",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SystemArg {
    /// Multi-cloud system description (TOML); defaults to the built-in
    /// six-provider testbed.
    #[arg(long)]
    system: Option<PathBuf>,
}

impl SystemArg {
    fn load(&self) -> Result<MultiCloudSystem<f64>> {
        match &self.system {
            None => Ok(default_testbed()),
            Some(path) => {
                let cfg = SystemConfig::load(path)
                    .with_context(|| format!("loading system {}", path.display()))?;
                Ok(cfg.build()?)
            }
        }
    }
}

#[derive(Args)]
struct SwarmArgs {
    /// Particles per swarm.
    #[arg(long, default_value_t = 30)]
    num: usize,
    /// Swarm iterations.
    #[arg(long, default_value_t = 200)]
    itr: usize,
    /// Use the full experimental profile (100 particles, 1000 iterations).
    #[arg(long)]
    paper_scale: bool,
    /// Pin the virtual entry/exit tasks to a neighbor's instance.
    #[arg(long)]
    pin_virtual_tasks: bool,
}

impl SwarmArgs {
    fn params(&self) -> SwarmParams {
        if self.paper_scale {
            SwarmParams::paper_scale()
        } else {
            SwarmParams {
                num_particles: self.num,
                iterations: self.itr,
                ..SwarmParams::desk_scale()
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sweep beta deadline factors over workflows and algorithms, writing
    /// runs.csv, summary.csv and the best schedules.
    Bench {
        /// Workflow files (.xml/.dax for DAX, anything else as the
        /// adjacency text format). Repeatable.
        #[arg(long = "workflow", required = true)]
        workflows: Vec<PathBuf>,
        #[command(flatten)]
        system: SystemArg,
        /// Deadline factors: D = beta * Min(G).
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 1.5, 2.0, 5.0, 8.0, 15.0])]
        beta: Vec<f64>,
        /// Repetitions per cell; run r uses seed base_seed + r.
        #[arg(long, default_value_t = 10)]
        reps: u32,
        /// Algorithms to compare: cedces, pso, adpsoga.
        #[arg(long = "algo", value_delimiter = ',', default_values_t = vec![Variant::Cedces, Variant::RandomInitPso])]
        algos: Vec<Variant>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output directory.
        #[arg(long, default_value = "bench-out")]
        out: PathBuf,
        /// Run cells sequentially instead of on the thread pool.
        #[arg(long)]
        serial: bool,
        #[command(flatten)]
        swarm: SwarmArgs,
    },
    /// Schedule one workflow once and print cost/makespan.
    Schedule {
        #[arg(long)]
        workflow: PathBuf,
        #[command(flatten)]
        system: SystemArg,
        /// Algorithm variant.
        #[arg(long, default_value_t = Variant::Cedces)]
        algo: Variant,
        /// Deadline factor over the HEFT makespan (ignored with --deadline).
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        /// Absolute deadline in seconds.
        #[arg(long)]
        deadline: Option<f64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the schedule in the line-oriented text format.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the run report (per-iteration global best).
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        swarm: SwarmArgs,
    },
    /// Print Min(G), the HEFT makespan of a workflow on the system.
    MinMakespan {
        #[arg(long)]
        workflow: PathBuf,
        #[command(flatten)]
        system: SystemArg,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Bench {
            workflows,
            system,
            beta,
            reps,
            algos,
            seed,
            out,
            serial,
            swarm,
        } => {
            let sys = system.load()?;
            let cfg = ExperimentConfig {
                workflows,
                betas: beta,
                repetitions: reps,
                variants: algos,
                base_seed: seed,
                swarm: swarm.params(),
                pin_virtual_tasks: swarm.pin_virtual_tasks,
                parallel: !serial,
            };
            let output = run_experiment(&cfg, &sys)?;
            let summary = write_outputs(&output, &out)?;
            println!("wrote {} runs to {}", output.rows.len(), out.display());
            for c in &summary.cells {
                println!(
                    "{} beta {} {}: mean TEC {:.6}, mean TET {:.3}, feasible {}/{}",
                    c.workflow, c.beta, c.variant, c.mean_tec, c.mean_tet, c.feasible_runs, c.runs
                );
            }
            for imp in &summary.improvements {
                if let Some(pct) = imp.improvement_pct {
                    println!(
                        "{} beta {}: {} vs {} cost improvement {:.2}%",
                        imp.workflow, imp.beta, imp.a, imp.b, pct
                    );
                }
            }
            Ok(())
        }
        Command::Schedule {
            workflow,
            system,
            algo,
            beta,
            deadline,
            seed,
            out,
            report,
            swarm,
        } => {
            let sys = system.load()?;
            let g = load_workflow(&workflow)?;
            let d = match deadline {
                Some(d) => d,
                None => beta * heft_makespan(&g, &sys),
            };
            let params = swarm.params();
            let mut cfg = SwarmConfig::new(d, algo, seed);
            cfg.num_particles = params.num_particles;
            cfg.iterations = params.iterations;
            cfg.init_deadline_factor = params.init_deadline_factor;
            cfg.decode_options = DecodeOptions {
                pin_virtual_tasks: swarm.pin_virtual_tasks,
            };
            let result = run(&g, &sys, &cfg)?;
            println!(
                "{} {}: tec {} tet {} deadline {} feasible {}",
                workflow_name(&workflow),
                algo,
                result.schedule.tec,
                result.schedule.tet,
                d,
                result.best_fitness.feasible
            );
            if let Some(path) = out {
                std::fs::write(&path, schedule_to_text(&result.schedule))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if let Some(path) = report {
                std::fs::write(&path, result.report.to_text())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(())
        }
        Command::MinMakespan { workflow, system } => {
            let sys = system.load()?;
            let g = load_workflow(&workflow)?;
            println!("{}", heft_makespan(&g, &sys));
            Ok(())
        }
    }
}

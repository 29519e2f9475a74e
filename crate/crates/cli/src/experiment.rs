//! Batch experiment protocol: for every (workflow, variant, beta,
//! repetition) cell the deadline is beta times the workflow's HEFT makespan,
//! the variant runs once with a repetition-derived seed, and the result
//! lands in one row. Rows are sorted before writing so parallel and serial
//! execution produce identical CSVs.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use cedces_core::cloud::MultiCloudSystem;
use cedces_core::heft::heft_makespan;
use cedces_core::money::Money;
use cedces_core::optimizer::{run, SwarmConfig, Variant};
use cedces_core::schedule::{schedule_to_text, verify_schedule, DecodeOptions};
use cedces_core::workflow::{load_dax, load_text, DaxOptions, TaskGraph};

/// Swarm knobs shared by every cell of an experiment.
#[derive(Clone, Copy, Debug)]
pub struct SwarmParams {
    pub num_particles: usize,
    pub iterations: usize,
    pub c1: f64,
    pub c2: f64,
    pub w_max: f64,
    pub w_min: f64,
    pub init_deadline_factor: f64,
}

impl SwarmParams {
    /// Desk-scale profile: quick enough for CI sweeps.
    pub fn desk_scale() -> Self {
        SwarmParams {
            num_particles: 30,
            iterations: 200,
            c1: 2.0,
            c2: 2.0,
            w_max: 1.4,
            w_min: 0.4,
            init_deadline_factor: 0.9,
        }
    }

    /// Full profile: 100 particles for 1000 iterations.
    pub fn paper_scale() -> Self {
        SwarmParams {
            num_particles: 100,
            iterations: 1000,
            ..Self::desk_scale()
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub workflows: Vec<PathBuf>,
    pub betas: Vec<f64>,
    pub repetitions: u32,
    pub variants: Vec<Variant>,
    pub base_seed: u64,
    pub swarm: SwarmParams,
    pub pin_virtual_tasks: bool,
    /// Run independent cells on the rayon pool.
    pub parallel: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.workflows.is_empty() {
            bail!("no workflows given");
        }
        if self.repetitions < 1 {
            bail!("repetitions must be at least 1");
        }
        if self.betas.iter().any(|&b| b <= 0.0) {
            bail!("beta values must be positive");
        }
        if self.variants.is_empty() {
            bail!("no algorithm variants given");
        }
        Ok(())
    }
}

/// One (workflow, variant, beta, repetition) outcome.
#[derive(Clone, Debug)]
pub struct ResultRow {
    pub workflow: String,
    pub n: usize,
    pub variant: Variant,
    pub beta: f64,
    pub seed: u64,
    pub tec: Money,
    pub tet: f64,
    pub deadline: f64,
    pub feasible: bool,
    /// `max(0, (tet - deadline) / deadline) * 100`.
    pub overshoot_pct: f64,
    pub wall_clock_s: f64,
}

/// Loads a workflow by extension: `.xml`/`.dax` as DAX, anything else as the
/// plain-text adjacency format.
pub fn load_workflow(path: &Path) -> Result<TaskGraph<f64>> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    let g = if ext == "xml" || ext == "dax" {
        load_dax(path, &DaxOptions::default())
    } else {
        load_text(path)
    };
    g.with_context(|| format!("loading workflow {}", path.display()))
}

pub fn workflow_name(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("workflow")
        .to_string()
}

/// Best schedules per (workflow, variant, beta), keyed for file output.
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub best_schedules: Vec<(String, Variant, f64, String)>,
}

pub fn run_experiment(
    cfg: &ExperimentConfig,
    sys: &MultiCloudSystem<f64>,
) -> Result<ExperimentOutput> {
    cfg.validate()?;

    let mut workflows = Vec::new();
    for path in &cfg.workflows {
        let g = load_workflow(path)?;
        let min_makespan = heft_makespan(&g, sys);
        workflows.push((workflow_name(path), g, min_makespan));
    }

    struct Cell {
        wf: usize,
        variant: Variant,
        beta: f64,
        rep: u32,
    }
    let mut cells = Vec::new();
    for (wf, _) in workflows.iter().enumerate() {
        for &variant in &cfg.variants {
            for &beta in &cfg.betas {
                for rep in 0..cfg.repetitions {
                    cells.push(Cell { wf, variant, beta, rep });
                }
            }
        }
    }

    let run_cell = |cell: &Cell| -> Result<(ResultRow, String)> {
        let (name, g, min_makespan) = &workflows[cell.wf];
        let deadline = cell.beta * min_makespan;
        let seed = cfg.base_seed + cell.rep as u64;
        let mut swarm = SwarmConfig::new(deadline, cell.variant, seed);
        swarm.num_particles = cfg.swarm.num_particles;
        swarm.iterations = cfg.swarm.iterations;
        swarm.c1 = cfg.swarm.c1;
        swarm.c2 = cfg.swarm.c2;
        swarm.w_max = cfg.swarm.w_max;
        swarm.w_min = cfg.swarm.w_min;
        swarm.init_deadline_factor = cfg.swarm.init_deadline_factor;
        swarm.decode_options = DecodeOptions {
            pin_virtual_tasks: cfg.pin_virtual_tasks,
        };

        let started = Instant::now();
        let out = run(g, sys, &swarm)?;
        let wall_clock_s = started.elapsed().as_secs_f64();

        let violations = verify_schedule(&out.schedule, g, sys);
        if !violations.is_empty() {
            bail!(
                "schedule failed verification for {name} {} beta {}: {}",
                cell.variant,
                cell.beta,
                violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            );
        }

        let tet = out.schedule.tet;
        let overshoot_pct = ((tet - deadline) / deadline).max(0.0) * 100.0;
        Ok((
            ResultRow {
                workflow: name.clone(),
                n: g.len(),
                variant: cell.variant,
                beta: cell.beta,
                seed,
                tec: out.schedule.tec,
                tet,
                deadline,
                feasible: tet <= deadline,
                overshoot_pct,
                wall_clock_s,
            },
            schedule_to_text(&out.schedule),
        ))
    };

    let outcomes: Vec<(ResultRow, String)> = if cfg.parallel {
        cells.par_iter().map(run_cell).collect::<Result<_>>()?
    } else {
        cells.iter().map(run_cell).collect::<Result<_>>()?
    };

    let mut rows: Vec<ResultRow> = Vec::with_capacity(outcomes.len());
    let mut best: std::collections::BTreeMap<(String, String, String), (ResultRow, String)> =
        std::collections::BTreeMap::new();
    for (row, text) in outcomes {
        let key = (
            row.workflow.clone(),
            row.variant.to_string(),
            row.beta.to_string(),
        );
        let better = match best.get(&key) {
            None => true,
            // Same ordering the optimizer uses: feasible beats infeasible,
            // then cost, then time.
            Some((incumbent, _)) => {
                cedces_core::optimizer::is_fitter(&fitness_of(&row), &fitness_of(incumbent))
            }
        };
        if better {
            best.insert(key, (row.clone(), text));
        }
        rows.push(row);
    }

    rows.sort_by(|a, b| {
        (&a.workflow, ordered(a.beta), a.variant.to_string(), a.seed).cmp(&(
            &b.workflow,
            ordered(b.beta),
            b.variant.to_string(),
            b.seed,
        ))
    });

    let best_schedules = best
        .into_values()
        .map(|(row, text)| (row.workflow.clone(), row.variant, row.beta, text))
        .collect();

    Ok(ExperimentOutput { rows, best_schedules })
}

fn fitness_of(row: &ResultRow) -> cedces_core::optimizer::Fitness<f64> {
    cedces_core::optimizer::Fitness {
        tec: row.tec,
        tet: row.tet,
        feasible: row.feasible,
    }
}

fn ordered(x: f64) -> ordered_key::OrderedF64 {
    ordered_key::OrderedF64(x)
}

mod ordered_key {
    /// Total order on finite floats for sorting keys.
    #[derive(PartialEq, PartialOrd)]
    pub struct OrderedF64(pub f64);
    impl Eq for OrderedF64 {}
    #[allow(clippy::derive_ord_xor_partial_ord)]
    impl Ord for OrderedF64 {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.partial_cmp(other).unwrap_or(std::cmp::Ordering::Equal)
        }
    }
}

/// Per-cell means plus pairwise improvements.
#[derive(Clone, Debug)]
pub struct Summary {
    pub cells: Vec<SummaryCell>,
    pub improvements: Vec<Improvement>,
}

#[derive(Clone, Debug)]
pub struct SummaryCell {
    pub workflow: String,
    pub beta: f64,
    pub variant: Variant,
    pub runs: usize,
    pub feasible_runs: usize,
    pub mean_tec: f64,
    pub mean_tet: f64,
    /// Mean overshoot among infeasible runs; 0 when every run met the
    /// deadline.
    pub mean_overshoot_pct: f64,
}

/// Relative cost improvement of `a` over `b`:
/// `(tec_b - tec_a) / tec_b * 100`.
#[derive(Clone, Debug)]
pub struct Improvement {
    pub workflow: String,
    pub beta: f64,
    pub a: Variant,
    pub b: Variant,
    pub improvement_pct: Option<f64>,
}

pub fn summarize(rows: &[ResultRow]) -> Summary {
    assert!(!rows.is_empty(), "summarize needs at least one row");
    struct Acc {
        cell: SummaryCell,
        tec_micros: i64,
    }
    let mut accs: Vec<Acc> = Vec::new();
    for row in rows {
        let found = accs.iter_mut().find(|a| {
            a.cell.workflow == row.workflow
                && a.cell.beta == row.beta
                && a.cell.variant == row.variant
        });
        let acc = match found {
            Some(a) => a,
            None => {
                accs.push(Acc {
                    cell: SummaryCell {
                        workflow: row.workflow.clone(),
                        beta: row.beta,
                        variant: row.variant,
                        runs: 0,
                        feasible_runs: 0,
                        mean_tec: 0.0,
                        mean_tet: 0.0,
                        mean_overshoot_pct: 0.0,
                    },
                    tec_micros: 0,
                });
                accs.last_mut().unwrap()
            }
        };
        acc.cell.runs += 1;
        acc.cell.feasible_runs += row.feasible as usize;
        acc.tec_micros += row.tec.micros();
        acc.cell.mean_tet += row.tet;
        acc.cell.mean_overshoot_pct += row.overshoot_pct;
    }
    let mut cells: Vec<SummaryCell> = accs
        .into_iter()
        .map(|mut a| {
            let c = &mut a.cell;
            c.mean_tec = a.tec_micros as f64 / c.runs as f64 / 1e6;
            c.mean_tet /= c.runs as f64;
            let infeasible = c.runs - c.feasible_runs;
            c.mean_overshoot_pct = if infeasible == 0 {
                0.0
            } else {
                // Overshoot is zero exactly on feasible rows, so the sum is
                // entirely from infeasible ones.
                c.mean_overshoot_pct / infeasible as f64
            };
            a.cell
        })
        .collect();
    cells.sort_by(|a, b| {
        (&a.workflow, ordered(a.beta), a.variant.to_string()).cmp(&(
            &b.workflow,
            ordered(b.beta),
            b.variant.to_string(),
        ))
    });

    let mut improvements = Vec::new();
    let mut groups: Vec<(String, f64)> = cells
        .iter()
        .map(|c| (c.workflow.clone(), c.beta))
        .collect();
    groups.dedup();
    for (wf, beta) in groups {
        let group: Vec<&SummaryCell> = cells
            .iter()
            .filter(|c| c.workflow == wf && c.beta == beta)
            .collect();
        for a in &group {
            for b in &group {
                if a.variant == b.variant {
                    continue;
                }
                let improvement_pct = if b.mean_tec == 0.0 {
                    None
                } else {
                    Some((b.mean_tec - a.mean_tec) / b.mean_tec * 100.0)
                };
                improvements.push(Improvement {
                    workflow: wf.clone(),
                    beta,
                    a: a.variant,
                    b: b.variant,
                    improvement_pct,
                });
            }
        }
    }

    Summary { cells, improvements }
}

pub const RUNS_CSV_HEADER: &str =
    "workflow,n,variant,beta,seed,tec,tet,deadline,feasible,overshoot_pct,wall_clock_s";

pub fn write_runs_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    w.write_record(RUNS_CSV_HEADER.split(','))?;
    for r in rows {
        w.write_record([
            r.workflow.as_str(),
            &r.n.to_string(),
            &r.variant.to_string(),
            &r.beta.to_string(),
            &r.seed.to_string(),
            &r.tec.to_string(),
            &r.tet.to_string(),
            &r.deadline.to_string(),
            &r.feasible.to_string(),
            &r.overshoot_pct.to_string(),
            &r.wall_clock_s.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub const SUMMARY_CSV_HEADER: &str =
    "workflow,beta,variant,runs,feasible_runs,mean_tec,mean_tet,mean_overshoot_pct";

pub fn write_summary_csv(summary: &Summary, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    w.write_record(SUMMARY_CSV_HEADER.split(','))?;
    for c in &summary.cells {
        w.write_record([
            c.workflow.as_str(),
            &c.beta.to_string(),
            &c.variant.to_string(),
            &c.runs.to_string(),
            &c.feasible_runs.to_string(),
            &c.mean_tec.to_string(),
            &c.mean_tet.to_string(),
            &c.mean_overshoot_pct.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes runs.csv, summary.csv and the serialized best schedules under
/// `out_dir`, returning the summary.
pub fn write_outputs(output: &ExperimentOutput, out_dir: &Path) -> Result<Summary> {
    fs::create_dir_all(out_dir)?;
    write_runs_csv(&output.rows, &out_dir.join("runs.csv"))?;
    let summary = summarize(&output.rows);
    write_summary_csv(&summary, &out_dir.join("summary.csv"))?;
    let sched_dir = out_dir.join("schedules");
    fs::create_dir_all(&sched_dir)?;
    for (wf, variant, beta, text) in &output.best_schedules {
        let file = sched_dir.join(format!("{wf}_{variant}_beta{beta}.txt"));
        fs::write(file, text)?;
    }
    Ok(summary)
}

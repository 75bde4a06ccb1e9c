//! `swarmplan` command-line front end.
//!
//! Exit codes: 0 success, 1 configuration or input error, 2 infeasible run.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use swarmplan::harness::{
    self, normalized_hypervolumes, run_engine, summarize, Engine, ExperimentPlan, RunResult,
};
use swarmplan::moo::WoaParams;
use swarmplan::{load_scenario, predeploy, save_scenario, Deployment, Error, Result, Scenario, ScenarioConfig};

#[derive(Parser)]
#[command(name = "swarmplan", version, about = "Multi-swarm UAV data-collection planner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random scenario and write it as TOML.
    Generate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Place swarms and hover candidates; writes a JSON deployment.
    Predeploy {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Existing scenario file instead of generating one.
        #[arg(long)]
        scenario_file: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Optimize one instance with one engine; writes archive and trajectory.
    Optimize {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        scenario_file: Option<PathBuf>,
        /// Existing deployment instead of running pre-deployment.
        #[arg(long)]
        deployment: Option<PathBuf>,
        #[arg(long, default_value = "ins-woa")]
        engine: Engine,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep GU counts and seeds over one or more engines at equal budget.
    Compare {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Replication seeds.
        #[arg(long = "seed", value_delimiter = ',', default_value = "1,2,3,4,5")]
        seeds: Vec<u64>,
        /// GU counts to sweep.
        #[arg(long, value_delimiter = ',')]
        users: Vec<usize>,
        #[arg(long)]
        swarms: Option<usize>,
        #[arg(long)]
        tuavs: Option<usize>,
        #[arg(long = "engine", value_delimiter = ',', default_value = "ins-woa,nsga2")]
        engines: Vec<Engine>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rebuild the summary document of a previous `compare` or `optimize` output directory.
    Report {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// TOML config with parameter overrides.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    users: Option<usize>,
    #[arg(long)]
    swarms: Option<usize>,
    #[arg(long)]
    tuavs: Option<usize>,
}

#[derive(Args)]
struct SearchArgs {
    /// Evaluation cap per run.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, default_value_t = 30)]
    population: usize,
    #[arg(long, default_value_t = 50)]
    iterations: usize,
}

impl SearchArgs {
    fn woa(&self, seed: u64) -> WoaParams {
        WoaParams {
            population: self.population,
            iterations: self.iterations,
            seed,
            ..WoaParams::default()
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<ScenarioConfig> {
    path.map_or_else(|| Ok(ScenarioConfig::default()), ScenarioConfig::load)
}

fn config_with(path: Option<&Path>, users: Option<usize>, swarms: Option<usize>, tuavs: Option<usize>) -> Result<ScenarioConfig> {
    let mut cfg = load_config(path)?;
    if let Some(u) = users {
        cfg.users = u;
    }
    if let Some(s) = swarms {
        cfg.swarms = s;
    }
    if let Some(t) = tuavs {
        cfg.tuavs = t;
    }
    Ok(cfg)
}

impl ScenarioArgs {
    fn build(&self, file: Option<&Path>) -> Result<Scenario> {
        match file {
            Some(f) => load_scenario(f),
            None => config_with(self.config.as_deref(), self.users, self.swarms, self.tuavs)?.generate(self.seed),
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { scenario, out } => {
            let s = scenario.build(None)?;
            save_scenario(&s, &out)?;
            println!("wrote {} GUs to {}", s.gus.len(), out.display());
        }
        Command::Predeploy {
            scenario,
            scenario_file,
            out,
        } => {
            let s = scenario.build(scenario_file.as_deref())?;
            let d = predeploy(&s)?;
            d.save(&out)?;
            println!(
                "{} swarms (sizes {:?}), {} hover candidates -> {}",
                d.swarm_sites.len(),
                d.swarm_sizes,
                d.total_candidates(),
                out.display()
            );
        }
        Command::Optimize {
            scenario,
            scenario_file,
            deployment,
            engine,
            search,
            out,
        } => {
            let s = scenario.build(scenario_file.as_deref())?;
            let d = match deployment {
                Some(p) => Deployment::load(p)?,
                None => predeploy(&s)?,
            };
            let start = Instant::now();
            let archive = run_engine(&s, &d, engine, &search.woa(scenario.seed), search.budget)?;
            let wall = start.elapsed().as_secs_f64();
            let hv = normalized_hypervolumes(&[&archive])?[0];
            let record = summarize(engine, s.gus.len(), scenario.seed, &archive, hv, wall);
            let result = RunResult { record, archive };
            let runs = out.join("runs");
            std::fs::create_dir_all(&runs).map_err(|e| Error::Config(format!("{}: {e}", runs.display())))?;
            harness::export_run(&runs, &result, &d)?;
            harness::write_summary(&out, std::slice::from_ref(&result))?;
            let r = &result.record;
            println!(
                "{engine}: {} members, {} evaluations, compromise f1={:.1} J f2={:.4} J f3={:.4} s",
                r.archive_size, r.evaluations, r.compromise_teu, r.compromise_aeg, r.compromise_adg
            );
            if result.archive.all_infeasible {
                return Err(Error::Infeasible("no archive member satisfies all constraints".into()));
            }
        }
        Command::Compare {
            config,
            seeds,
            users,
            swarms,
            tuavs,
            engines,
            search,
            out,
        } => {
            let plan = ExperimentPlan {
                config: config_with(config.as_deref(), None, swarms, tuavs)?,
                users,
                engines,
                seeds,
                woa: search.woa(0),
                budget: search.budget,
                out: out.clone(),
            };
            let results = harness::run(&plan)?;
            for r in &results {
                let r = &r.record;
                println!(
                    "{:8} U={:<4} seed={:<3} evals={:<6} |A|={:<3} HV={:.4} time={:.2}s",
                    r.engine.name(),
                    r.users,
                    r.seed,
                    r.evaluations,
                    r.archive_size,
                    r.hypervolume,
                    r.wall_time_s
                );
            }
            println!("summary written to {}", out.display());
            if results.iter().any(|r| r.archive.all_infeasible) {
                return Err(Error::Infeasible("at least one run found no feasible plan".into()));
            }
        }
        Command::Report { out } => {
            let results = harness::load_results(&out)?;
            let report = harness::report(&results)?;
            harness::write_report(&out, &report)?;
            for row in &report.series {
                println!(
                    "{:8} U={:<4} runs={} TEU={:.1} AEG={:.4} ADG={:.4}",
                    row.engine.name(),
                    row.users,
                    row.runs,
                    row.mean_min_teu,
                    row.mean_min_aeg,
                    row.mean_min_adg
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

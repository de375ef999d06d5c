use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use super::config_file::RunConfig;
use super::output::{write_replications, write_summary};
use super::scenario::{run_scenario, summarize, ScenarioSpec};
use crate::error::{Error, Result};
use crate::sim::{
    FirstDoseCurve, SimConfig, DEFAULT_CAMPAIGN_DAYS, DEFAULT_COVERAGE, DEFAULT_MIDPOINT,
    DEFAULT_SCALE,
};

#[derive(Debug, Parser)]
#[command(
    name = "linksim",
    version,
    about = "Record-linkage error simulation for vaccine-safety analyses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario grid and write replications.csv, summary.csv and run_meta.toml.
    Run(RunArgs),
    /// Print a logistic-ramp first-dose curve as `day,probability` CSV.
    Curve(CurveArgs),
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// TOML run configuration; defaults to the full-size study.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Master seed (overrides the config file).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
    /// Replications per scenario (overrides the config file).
    #[arg(long)]
    reps: Option<usize>,
    /// Comma-separated missing-match proportions (overrides the config file).
    #[arg(long, value_delimiter = ',')]
    scenarios: Option<Vec<f64>>,
    /// Suppress progress lines.
    #[arg(long)]
    quiet: bool,
}

#[derive(Debug, clap::Args)]
struct CurveArgs {
    #[arg(long, default_value_t = DEFAULT_CAMPAIGN_DAYS)]
    days: usize,
    #[arg(long, default_value_t = DEFAULT_COVERAGE)]
    coverage: f64,
    #[arg(long, default_value_t = DEFAULT_MIDPOINT)]
    midpoint: f64,
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    scale: f64,
}

/// Parses `args` (including the program name) and runs the command. Returns the process
/// exit status.
pub fn cli_run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => run(&args),
        Command::Curve(args) => {
            FirstDoseCurve::logistic_ramp(args.days, args.coverage, args.midpoint, args.scale)
                .map(|curve| print!("{}", curve.to_csv()))
        }
    };
    match outcome {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn run(args: &RunArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(reps) = args.reps {
        config.reps = reps;
    }
    if let Some(grid) = &args.scenarios {
        config.p_missing_match = grid.clone();
    }
    let sim = config.sim_config()?;
    let scenarios = config.scenarios()?;
    if args.threads == Some(0) {
        return Err(Error::InvalidConfig("--threads must be at least 1".into()));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;

    fs::create_dir_all(&args.out).map_err(|source| Error::Io {
        path: args.out.clone(),
        source,
    })?;

    let started = Instant::now();
    let mut results = Vec::new();
    for scenario in &scenarios {
        let scenario_started = Instant::now();
        let rows = pool.install(|| run_scenario(&sim, scenario, config.ties.into()))?;
        if !args.quiet {
            let failed = rows.iter().filter(|r| !r.converged).count();
            println!(
                "scenario {}/{}: missing {:.1}%, false {:.4}%: {} replications in {:.1}s ({} non-converged fits)",
                scenario.id + 1,
                scenarios.len(),
                scenario.errors.p_missing_match * 100.0,
                scenario.errors.p_false_match * 100.0,
                scenario.replications,
                scenario_started.elapsed().as_secs_f64(),
                failed,
            );
        }
        results.extend(rows);
    }

    let summaries = summarize(&results, sim.rr_vacc, config.alpha);
    write_replications(create(&args.out.join("replications.csv"))?, &results)?;
    write_summary(create(&args.out.join("summary.csv"))?, &summaries)?;
    fs::write(
        args.out.join("run_meta.toml"),
        run_meta(&config, &sim, &scenarios),
    )
    .map_err(|source| Error::Io {
        path: args.out.join("run_meta.toml"),
        source,
    })?;
    if !args.quiet {
        println!(
            "wrote {} in {:.1}s",
            args.out.display(),
            started.elapsed().as_secs_f64()
        );
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn run_meta(config: &RunConfig, sim: &SimConfig, scenarios: &[ScenarioSpec]) -> String {
    let curve = config
        .first_dose_curve
        .as_ref()
        .map_or_else(|| "bundled".to_string(), |p| p.display().to_string());
    format!(
        "# Conventions used in summary.csv and replications.csv\n\
         bias_definition = \"mean(estimate - true_rr)\"\n\
         mse_definition = \"mean((estimate - true_rr)^2)\"\n\
         power_definition = \"share of converged fits with p_value < alpha\"\n\
         estimate_scale = \"ratio\"\n\
         se_scale = \"log\"\n\
         non_converged = \"excluded from bias, mse and power; counted in n_failed\"\n\
         no_exposed_events = \"converged with estimate 0, infinite se_log and p_value 1 (issue estimate_at_zero)\"\n\
         seed_rule = \"replication_seed = mix(mix(mix(seed) ^ scenario_id) ^ replication), mix = SplitMix64\"\n\
         \n\
         true_rr = {}\n\
         alpha = {}\n\
         seed = {}\n\
         reps = {}\n\
         scenarios = {}\n\
         n_sim = {}\n\
         n_days = {}\n\
         campaign_start_day = {}\n\
         d_risk = {}\n\
         d_immune = {}\n\
         p_event_year = {}\n\
         first_dose_curve = \"{}\"\n\
         ties = \"{:?}\"\n",
        sim.rr_vacc,
        config.alpha,
        config.seed,
        config.reps,
        scenarios.len(),
        sim.n_sim,
        sim.n_days,
        sim.campaign_start_day,
        sim.d_risk,
        sim.d_immune,
        sim.p_event_year,
        curve,
        config.ties,
    )
}

//! Thin command-line front end over the library: single benchmark runs,
//! robustness sweeps, point evaluation, and packing runs.
//!
//! Exit code is 0 on success and nonzero on any configuration or run error.
//! Sweep parallelism comes from the `SPGD_THREADS` environment variable
//! (default: available parallelism).

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use spgd::harness::{self, ExperimentConfig, THREADS_ENV};
use spgd::optim::{self, Algorithm};
use spgd::packing::{
    load_scenario, run_packing_gd, run_packing_spgd, write_final_scene, write_history_csv,
};
use spgd::{bench, presets};

#[derive(Parser)]
#[command(
    name = "spgd",
    version,
    about = "Perturbed gradient descent: benchmark solvers and a 3D packing demo"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Benchmark functions: single runs, robustness sweeps, point values.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// 3D component packing on sphere-decomposed rigid bodies.
    #[command(subcommand)]
    Pack(PackCommand),
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Run one solver on one benchmark from its reference start point.
    Run(BenchRun),
    /// Multi-start comparison sweep driven by a JSON experiment config.
    Robustness(BenchRobustness),
    /// Print a benchmark's value at a point.
    Eval(BenchEval),
}

#[derive(Args)]
struct BenchRun {
    /// Benchmark name: peaks, ackley, easom, levy13, quartic1d.
    #[arg(long)]
    function: String,
    /// Solver: gd, pgd, spgd, sa.
    #[arg(long)]
    algo: Algorithm,
    /// Preset collection holding the solver parameters.
    #[arg(long, default_value = presets::REFERENCE)]
    preset: String,
    /// Directory for result.json and trace.csv; without it the result JSON
    /// goes to stdout and no trace is recorded.
    #[arg(long, value_name = "DIR")]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct BenchRobustness {
    /// Experiment config JSON (function, algorithms, trials, seed, ...).
    #[arg(long)]
    config: PathBuf,
    /// Directory for report.json and report.csv.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Also write one trace.csv per (algorithm, trial) under OUT/traces/.
    #[arg(long)]
    traces: bool,
}

#[derive(Args)]
struct BenchEval {
    /// Benchmark name: peaks, ackley, easom, levy13, quartic1d.
    #[arg(long)]
    function: String,
    /// Comma-separated coordinates, e.g. `--at 0.5,-1.2` (one value for 1D).
    #[arg(long, allow_hyphen_values = true)]
    at: String,
}

#[derive(Subcommand)]
enum PackCommand {
    /// Pack a scenario file's components and write the run artifacts.
    Run(PackRun),
}

/// Packing ships the perturbed solver and its plain-descent baseline.
#[derive(Clone, Copy, ValueEnum)]
enum PackAlgo {
    Spgd,
    Gd,
}

#[derive(Args)]
struct PackRun {
    /// Scenario JSON: weights, component shapes/poses, solver config.
    #[arg(long)]
    scenario: PathBuf,
    /// Solver: spgd or gd.
    #[arg(long, value_enum)]
    algo: PackAlgo,
    /// Directory for history.csv and final_scene.json.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Bench(BenchCommand::Run(args)) => bench_run(&args),
        Command::Bench(BenchCommand::Robustness(args)) => bench_robustness(&args),
        Command::Bench(BenchCommand::Eval(args)) => bench_eval(&args),
        Command::Pack(PackCommand::Run(args)) => pack_run(&args),
    }
}

fn bench_run(args: &BenchRun) -> Result<()> {
    let fixture = bench::fixture(&args.function)?;
    let cfg = presets::lookup(&args.preset, &args.function)?.config(args.algo);
    let record_trace = args.trace.is_some();
    let result = optim::run(
        &cfg,
        fixture.objective.as_ref(),
        &fixture.x0,
        None,
        record_trace,
    )?;

    let summary = serde_json::to_string_pretty(&result)?;
    match &args.trace {
        None => println!("{summary}"),
        Some(dir) => {
            fs::create_dir_all(dir)
                .with_context(|| format!("creating trace directory {}", dir.display()))?;
            write_text(&dir.join("result.json"), &format!("{summary}\n"))?;
            let csv = result
                .trace_csv_string()
                .expect("trace recording was requested for this run");
            write_text(&dir.join("trace.csv"), &csv)?;
            println!(
                "{} {}: best_f {} after {} evaluations ({:?}); wrote result.json and trace.csv to {}",
                args.function,
                args.algo,
                result.best_f,
                result.fn_evals,
                result.termination,
                dir.display()
            );
        }
    }
    Ok(())
}

fn bench_robustness(args: &BenchRobustness) -> Result<()> {
    let text = fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let cfg: ExperimentConfig = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", args.config.display()))?;

    let trace_dir = args.traces.then(|| args.out.join("traces"));
    let report = harness::run_experiment(&cfg, trace_dir.as_deref())?;
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating report directory {}", args.out.display()))?;
    harness::write_report(&report, &args.out)?;

    print!("{}", harness::report_csv(&report));
    eprintln!(
        "wrote report.json and report.csv to {} ({} threads via {THREADS_ENV})",
        args.out.display(),
        harness::thread_count(),
    );
    Ok(())
}

fn bench_eval(args: &BenchEval) -> Result<()> {
    let fixture = bench::fixture(&args.function)?;
    let point = parse_point(&args.at)?;
    let dim = fixture.objective.dimension();
    if point.len() != dim {
        bail!(
            "{} takes {dim} coordinate(s), got {} in `{}`",
            args.function,
            point.len(),
            args.at
        );
    }
    println!("{}", fixture.objective.value(&point));
    Ok(())
}

fn pack_run(args: &PackRun) -> Result<()> {
    let scenario = load_scenario(&args.scenario)?;
    let (problem, cfg) = scenario.build()?;
    let result = match args.algo {
        PackAlgo::Spgd => run_packing_spgd(&problem, &cfg)?,
        PackAlgo::Gd => run_packing_gd(&problem, &cfg)?,
    };

    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating output directory {}", args.out.display()))?;
    let history_path = args.out.join("history.csv");
    let mut history = fs::File::create(&history_path)
        .with_context(|| format!("creating {}", history_path.display()))?;
    write_history_csv(&mut history, &result.history)?;
    let scene_path = args.out.join("final_scene.json");
    let mut scene = fs::File::create(&scene_path)
        .with_context(|| format!("creating {}", scene_path.display()))?;
    write_final_scene(&mut scene, &problem, &result.final_poses)?;

    println!(
        "{}: best loss {:.6}, best bounding volume {:.6}, {} history rows, {:?} after {:.1} ms; \
         wrote history.csv and final_scene.json to {}",
        scenario.name,
        result.best_loss,
        result.best_volume,
        result.history.len(),
        result.termination,
        result.wall_time_ms,
        args.out.display()
    );
    Ok(())
}

fn parse_point(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<f64>()
                .with_context(|| format!("invalid coordinate `{part}`"))
        })
        .collect()
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

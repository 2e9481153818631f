use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use musikc_core::harness::{also_sik, emit_csv, emit_plot_data, run_experiment};
use musikc_core::{BasisKind, ErrorMetric, ExperimentConfig};

#[derive(Parser)]
#[command(name = "musikc", version, about = "Sparse-grid kernel collocation convergence runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a built-in problem over a range of levels and print the table.
    Run(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    problem: String,
    /// mq or gauss
    #[arg(long, default_value = "mq")]
    basis: BasisKind,
    /// Shape constant C in c_i = C 2^{-l_i}.
    #[arg(long = "C", default_value_t = 2.0)]
    shape_constant: f64,
    /// Inclusive level range, e.g. 2..8.
    #[arg(long, value_parser = parse_levels)]
    levels: (u32, u32),
    /// max or rms; defaults to rms for time-dependent problems.
    #[arg(long)]
    metric: Option<ErrorMetric>,
    /// Solve each level independently instead of by residual correction.
    #[arg(long)]
    sik: bool,
    #[arg(long)]
    test_points: Option<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also print `nodes error` pairs to stdout.
    #[arg(long)]
    plot_data: bool,
}

fn parse_levels(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected <n0>..<nmax>, got `{s}`"))?;
    let n0 = a.trim().parse().map_err(|e| format!("bad n0 `{a}`: {e}"))?;
    let n_max = b.trim().parse().map_err(|e| format!("bad nmax `{b}`: {e}"))?;
    Ok((n0, n_max))
}

fn run(args: RunArgs) -> anyhow::Result<bool> {
    let (n0, n_max) = args.levels;
    let mut config =
        ExperimentConfig::for_problem(&args.problem, args.basis, args.shape_constant, n0, n_max)?;
    if let Some(m) = args.metric {
        config.metric = m;
    }
    if let Some(n) = args.test_points {
        config.test_points = n;
    }
    config.extrapolate = !args.sik;
    let rows = if args.sik { also_sik(&config)? } else { run_experiment(&config)? };

    match &args.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            emit_csv(&rows, BufWriter::new(file))?;
        }
        None => emit_csv(&rows, io::stdout().lock())?,
    }
    if args.plot_data {
        let mut out = io::stdout().lock();
        if args.out.is_none() {
            writeln!(out)?;
        }
        emit_plot_data(&rows, out)?;
    }
    let failed = rows.iter().find(|r| r.failed());
    if let Some(r) = failed {
        eprintln!("level {} failed", r.level);
    }
    Ok(failed.is_none())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

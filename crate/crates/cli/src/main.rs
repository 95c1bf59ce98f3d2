use std::fs::File;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use fairwpt::ehmodel::{fit_linear, fit_log, read_samples_csv, rmse};
use fairwpt_cli::config::split_pair;
use fairwpt_cli::{parse_config, run_matrix, ExperimentMatrix};

#[derive(Parser)]
#[command(name = "fairwpt", version, about = "Fair wireless power transfer simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scheme, or the full scheme matrix with --matrix.
    Run(RunArgs),
    /// Fit the logarithmic and linear rectifier models to measured samples.
    Fit {
        /// CSV with input and output power columns; a header row is optional.
        #[arg(long)]
        samples: PathBuf,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    /// Flat key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for the CSV files.
    #[arg(long, short, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// ssep | round_robin
    #[arg(long)]
    selector: Option<String>,
    /// crpm | trpm | epd | lcrpm | ltrpm
    #[arg(long)]
    allocator: Option<String>,
    /// log | linear
    #[arg(long)]
    eh_model: Option<String>,
    /// Walk step in metres. Repeat with --matrix to sweep several.
    #[arg(long)]
    walk_step: Vec<f64>,
    #[arg(long)]
    iterations: Option<usize>,
    /// Any configuration key, as key=value. May be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Run all eight reference schemes instead of the configured one.
    #[arg(long)]
    matrix: bool,
}

fn run(args: RunArgs) -> Result<()> {
    let mut overrides: Vec<(String, String)> = Vec::new();
    for s in &args.set {
        let Some((k, v)) = split_pair(s) else {
            bail!("--set expects KEY=VALUE, got `{s}`");
        };
        overrides.push((k.into(), v.into()));
    }
    let flags = [
        ("seed", args.seed.map(|v| v.to_string())),
        ("selector", args.selector.clone()),
        ("allocator", args.allocator.clone()),
        ("eh_model", args.eh_model.clone()),
        ("iterations", args.iterations.map(|v| v.to_string())),
    ];
    overrides.extend(flags.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))));
    if let [w] = args.walk_step[..] {
        overrides.push(("walk_step".into(), w.to_string()));
    } else if !args.walk_step.is_empty() && !args.matrix {
        bail!("several --walk-step values need --matrix");
    }

    let cfg = parse_config(args.config.as_deref(), &overrides)?;
    let walks = if args.walk_step.is_empty() {
        vec![cfg.walk_step]
    } else {
        args.walk_step.clone()
    };
    let matrix = if args.matrix {
        ExperimentMatrix::paper(cfg, &walks)?
    } else {
        ExperimentMatrix::single(cfg)?
    };
    let report = run_matrix(&matrix, &args.out)?;
    for (c, trace) in &report.traces {
        let s = fairwpt::metrics(trace)?;
        println!("{:<32} min {:.6e} J  total {:.6e} J", c.label(), s.final_min, s.final_total);
    }
    println!("wrote {} files to {}", report.files.len(), args.out.display());
    Ok(())
}

fn fit(samples: PathBuf) -> Result<()> {
    let file = File::open(&samples).with_context(|| format!("opening {}", samples.display()))?;
    let data = read_samples_csv(file)?;
    let log = fit_log(&data)?;
    let lin = fit_linear(&data)?;
    println!("log:    a = {:.6e}  b = {:.6e}  c = {:.6e}  rmse = {:.4e}", log.a, log.b, log.c, rmse(|x| log.output(x), &data)?);
    println!("linear: h = {:.6e}  rmse = {:.4e}", lin.h, rmse(|x| lin.output(x, log.c), &data)?);
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => run(args),
        Command::Fit { samples } => fit(samples),
    }
}

mod commands;
mod error;
mod output;
mod scenario;

use clap::{Args, Parser, Subcommand};
use error::CliError;
use output::Format;
use scenario::Scenario;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "halfspace", version, about = "Elastic wave fields above a rigid plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plane-wave incidence: incident + reflected field on a grid.
    Reflect(RunArgs),
    /// Upward propagation of a periodic trace to a set of heights.
    Propagate(RunArgs),
    /// Point force above the plane via the half-space Green tensor.
    Greens(RunArgs),
    /// Spectral beam incidence: incident + reflected field on a grid.
    Beam(RunArgs),
    /// Runs the built-in validation suite and writes report.json.
    Validate(RunArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Reflect(_) => "reflect",
            Command::Propagate(_) => "propagate",
            Command::Greens(_) => "greens",
            Command::Beam(_) => "beam",
            Command::Validate(_) => "validate",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Reflect(a) | Command::Propagate(a) | Command::Greens(a) | Command::Beam(a) | Command::Validate(a) => a,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (`key = value` lines); defaults apply when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Output directory, created on success.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "binary")]
    format: Format,
    /// Worker threads (defaults to the number of cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides quadrature.tolerance from the scenario.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Overrides seed from the scenario.
    #[arg(long)]
    seed: Option<u64>,
}

fn load(args: &RunArgs) -> Result<Scenario, CliError> {
    let text = match &args.scenario {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read scenario {}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut s = Scenario::parse(&text)?;
    if let Some(t) = args.tolerance {
        s.tolerance = Some(t);
    }
    if let Some(seed) = args.seed {
        s.seed = seed;
    }
    s.validate()?;
    Ok(s)
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let start = Instant::now();
    let args = cli.command.args();
    let scenario = load(args)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Invariant(format!("thread pool: {e}")))?;
    let product = pool.install(|| match cli.command {
        Command::Reflect(_) => commands::reflect(&scenario),
        Command::Propagate(_) => commands::propagate_cmd(&scenario),
        Command::Greens(_) => commands::greens(&scenario),
        Command::Beam(_) => commands::beam(&scenario),
        Command::Validate(_) => commands::validate(&scenario),
    })?;

    let mut files = Vec::new();
    let mut all_pass = true;
    if let Some(records) = &product.records {
        let name = format!("{}.{}", scenario.quantity.name(), args.format.extension());
        log::info!("{} records → {name}", records.len());
        files.push((name, output::encode(records, args.format)));
    }
    if let Some(report) = &product.report {
        all_pass = report.all_pass();
        let text = serde_json::to_string_pretty(report).map_err(|e| CliError::Invariant(e.to_string()))?;
        files.push(("report.json".to_string(), text.into_bytes()));
    }
    let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
    let metadata = json!({
        "subcommand": cli.command.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "scenario": scenario.entries,
        "seed": scenario.seed,
        "quadrature": {
            "tolerance": scenario.tolerance,
            "max_panels": scenario.max_panels,
        },
        "medium": { "lambda": scenario.lambda, "mu": scenario.mu, "omega": scenario.omega },
        "quantity": scenario.quantity.name(),
        "format": args.format.name(),
        "record_layout": "x1 x2 x3 re(u1) im(u1) re(u2) im(u2) re(u3) im(u3), f64 little-endian in binary",
        "records": product.records.as_ref().map(Vec::len),
        "details": product.info,
        "files": names,
        "wall_time_seconds": start.elapsed().as_secs_f64(),
    });
    let meta = serde_json::to_string_pretty(&metadata).map_err(|e| CliError::Invariant(e.to_string()))?;
    files.push(("metadata.json".to_string(), meta.into_bytes()));
    output::write_all(&args.out, &files)?;
    Ok(all_pass)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("validation checks failed; see report.json");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

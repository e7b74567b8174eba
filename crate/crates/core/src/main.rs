use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use symplecta::report::{emit_report, load_config, run_suite, OutputFormat, SuiteName};

/// Theorem-checking suites for dominating scalar products on symplectic
/// spaces and the lattice Klein-Gordon testbed.
///
/// Exit codes: 0 all hard checks passed, 1 at least one hard check failed,
/// 2 configuration error. Stdout carries only the summary block; full
/// reports and plot tables go to files when `--out` is set.
#[derive(Parser)]
#[command(name = "symplecta", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct RunArgs {
    /// JSON configuration file (defaults apply when omitted).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here; plot-ready CSV side tables land next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Polarizator, scaled-family and purification checks.
    Core(RunArgs),
    /// Adjoint-pair norm bounds and the three-line estimate.
    Continuity(RunArgs),
    /// The two counterexample scenarios.
    Gallery(RunArgs),
    /// Lattice Klein-Gordon: energy, vacuum, evolution, cutoff norms.
    Kg(RunArgs),
    /// Quasifree dictionary and local subspace probes.
    Probe(RunArgs),
    /// Every suite in sequence.
    All(RunArgs),
    /// Run whichever suite the config file names.
    Run(RunArgs),
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "json" => Ok(OutputFormat::Json),
        "csv" => Ok(OutputFormat::Csv),
        other => Err(format!("unsupported output format: {other}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (suite, args) = match cli.command {
        Command::Core(a) => (Some(SuiteName::Core), a),
        Command::Continuity(a) => (Some(SuiteName::Continuity), a),
        Command::Gallery(a) => (Some(SuiteName::Gallery), a),
        Command::Kg(a) => (Some(SuiteName::Kg), a),
        Command::Probe(a) => (Some(SuiteName::Probe), a),
        Command::All(a) => (Some(SuiteName::All), a),
        Command::Run(a) => (None, a),
    };

    if let Some(threads) = thread_cap() {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let mut config = match args.config.as_deref().map(load_config).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(suite) = suite {
        config.suite = suite;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = args.out {
        config.output = Some(out);
    }
    if let Some(format) = args.format {
        config.format = format;
    }
    if let Err(e) = config.validate() {
        eprintln!("config error: {e}");
        return ExitCode::from(2);
    }

    let output = match run_suite(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };

    if let Some(path) = &config.output {
        let bytes = match emit_report(&output.report, config.format) {
            Ok(b) => b,
            Err(e) => {
                eprintln!("emit error: {e}");
                return ExitCode::from(2);
            }
        };
        if let Err(e) = std::fs::write(path, bytes) {
            eprintln!("write error ({}): {e}", path.display());
            return ExitCode::from(2);
        }
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "report".into());
        for table in &output.aux {
            let side = path.with_file_name(format!("{stem}_{}", table.name));
            if let Err(e) = std::fs::write(&side, table.content.as_bytes()) {
                eprintln!("write error ({}): {e}", side.display());
                return ExitCode::from(2);
            }
        }
    }

    print!("{}", output.report.summary_block());
    if output.report.all_hard_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// SYMPLECTA_THREADS caps suite parallelism.
fn thread_cap() -> Option<usize> {
    std::env::var("SYMPLECTA_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
}

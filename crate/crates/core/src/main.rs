use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quantumness::experiments::{self, RawConfig, SweepKind, SweepResult};
use quantumness::Error;

#[derive(Parser)]
#[command(name = "quantumness", version, about = "Commutator quantumness of a noisy quantum walk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Φ_Δ(t) at fixed t over a range of lags (columns delta,mu,phi)
    DeltaSweep(RunArgs),
    /// Φ_Δ(t) over time for several noise strengths (columns t,mu,phi)
    NoiseSweep(RunArgs),
    /// Noise sweep plus the ratio to the noiseless walk (columns t,mu,phi,phi_rel)
    RelativeSweep(RunArgs),
    /// Position distributions P(x) (columns t,x,p)
    Distribution(RunArgs),
    /// Run the built-in invariant suite
    Validate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Args)]
struct RunArgs {
    /// key=value config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    steps: Option<usize>,
    /// Coin angle in radians
    #[arg(long)]
    alpha: Option<f64>,
    /// Noise strength, or a comma-separated list for sweeps
    #[arg(long)]
    mu: Option<String>,
    /// Lag; for delta-sweep a list such as `0..10` or `0,2,4`
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn overrides(raw: &mut RawConfig, args: &RunArgs, kind: SweepKind) -> Result<(), Error> {
    if let Some(steps) = args.steps {
        raw.insert("walk.steps", steps.to_string())?;
    }
    if let Some(alpha) = args.alpha {
        raw.insert("walk.alpha", alpha.to_string())?;
    }
    if let Some(seed) = args.seed {
        raw.insert("walk.seed", seed.to_string())?;
    }
    if let Some(mu) = &args.mu {
        if kind == SweepKind::Distribution {
            raw.insert("walk.mu", mu.clone())?;
        } else {
            raw.insert("sweep.mus", mu.clone())?;
        }
    }
    if let Some(delta) = &args.delta {
        if kind == SweepKind::Delta {
            raw.insert("sweep.deltas", delta.clone())?;
        } else {
            raw.insert("sweep.delta", delta.clone())?;
        }
    }
    if let Some(out) = &args.out {
        raw.insert("output.path", out.display().to_string())?;
    }
    Ok(())
}

fn write_result(result: &SweepResult, path: Option<&Path>) -> Result<(), Error> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            result.write_csv(&mut w)?;
            w.flush()?;
        }
        None => result.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn snapshot_path(out: &Path, mu: f64) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.dist_mu{mu}.csv"))
}

fn run_sweep(args: &RunArgs, kind: SweepKind) -> Result<(), Error> {
    let Format::Csv = args.format;
    let mut raw = match &args.config {
        Some(path) => RawConfig::load(path)?,
        None => RawConfig::default(),
    };
    overrides(&mut raw, args, kind)?;
    let cfg = raw.build(kind)?;
    let result = experiments::run(&cfg)?;
    write_result(&result, cfg.output_path.as_deref())?;
    if cfg.emit_distributions {
        let out = cfg
            .output_path
            .as_deref()
            .ok_or_else(|| Error::Config("output.emit_distributions needs an output path".into()))?;
        for (mu, snapshot) in experiments::distribution_snapshots(&cfg)? {
            write_result(&snapshot, Some(&snapshot_path(out, mu)))?;
        }
    }
    Ok(())
}

fn validate(seed: u64) -> Result<bool, Error> {
    let outcomes = experiments::run_invariant_suite(seed);
    let mut stdout = io::stdout().lock();
    for o in &outcomes {
        writeln!(stdout, "{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail)?;
    }
    Ok(outcomes.iter().all(|o| o.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::DeltaSweep(a) => run_sweep(a, SweepKind::Delta).map(|_| true),
        Command::NoiseSweep(a) => run_sweep(a, SweepKind::Noise).map(|_| true),
        Command::RelativeSweep(a) => run_sweep(a, SweepKind::Relative).map(|_| true),
        Command::Distribution(a) => run_sweep(a, SweepKind::Distribution).map(|_| true),
        Command::Validate { seed } => validate(*seed),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: invariant suite failed");
            ExitCode::from(1)
        }
        Err(e @ (Error::Config(_) | Error::InvalidInput(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

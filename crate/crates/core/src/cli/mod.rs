//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or config error,
//! 3 runtime failure. Logs go to stderr; data goes to files (or stdout for
//! `bound`).

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::harness::{aggregate, run_experiment, scalability_sweep, TimingRow};
use crate::rbmle::{theoretical_c_alpha_min, theoretical_regret_bound, BoundParams, BoundVariant};
use crate::verify::Suite;

use config::{ConfigFile, Overrides};
use output::{
    content_hash, curves_csv, summary_csv, timing_csv, write_manifest, RunManifest, CSV_SCHEMA_VERSION, LAYOUT,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "banditlab", version, about = "RBMLE bandit experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment and write summary, curves, timing and manifest files.
    Run(RunArgs),
    /// Run numerical property suites.
    Verify(VerifyArgs),
    /// Print minimum bias constants and regret-bound curves as CSV.
    Bound(BoundArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub horizon: Option<u64>,
    /// Comma-separated policy ids or names.
    #[arg(long, value_delimiter = ',')]
    pub policies: Option<Vec<String>>,
    #[arg(long, env = "BANDITLAB_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SuiteArg {
    Lemmas,
    Equivalence,
    Kstar,
    Concentration,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: SuiteArg,
    #[arg(long, default_value_t = 20240601)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    ExpFamily,
    Gaussian,
    SubExponential,
    AdaptiveGaussian,
    All,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub variant: VariantArg,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    /// Bias constant for the bound curves; defaults to each variant's minimum.
    #[arg(long)]
    pub c_alpha: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 10.0)]
    pub rho: f64,
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    run_cli(std::env::args_os())
}

pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Run(a) => cmd_run(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Bound(a) => cmd_bound(&a, &mut std::io::stdout().lock()),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. } | Error::Json(_) | Error::InvalidParameter { .. } | Error::Domain { .. } => EXIT_USAGE,
        _ => EXIT_RUNTIME,
    }
}

fn report(e: &Error) -> i32 {
    eprintln!("error: {e}");
    exit_code(e)
}

pub fn cmd_run(args: &RunArgs) -> i32 {
    let file = match ConfigFile::load(&args.config) {
        Ok(f) => f,
        Err(e) => return report(&e),
    };
    let overrides = Overrides {
        seed: args.seed,
        trials: args.trials,
        horizon: args.horizon,
        policies: args.policies.clone(),
        workers: args.workers,
    };
    let config = match file.resolve(&overrides) {
        Ok(c) => c,
        Err(e) => return report(&e),
    };
    if let Some(w) = args.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return EXIT_USAGE;
        }
    }
    match execute_run(&args.config, &args.out, &file, config) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => EXIT_RUNTIME,
                other => exit_code(&other).max(EXIT_RUNTIME),
            }
        }
    }
}

fn execute_run(
    config_path: &Path,
    out: &Path,
    file: &ConfigFile,
    config: crate::harness::ExperimentConfig,
) -> crate::Result<()> {
    std::fs::create_dir_all(out)?;
    let raw = std::fs::read(config_path)?;
    let recorded = crate::harness::ExperimentConfig {
        workers: None,
        ..config.clone()
    };
    let manifest = RunManifest {
        tool: "banditlab",
        version: env!("CARGO_PKG_VERSION"),
        csv_schema_version: CSV_SCHEMA_VERSION,
        config_hash: content_hash(&raw),
        seed: config.seed,
        resolved_config: &recorded,
        sweep_arms: file.sweep_arms.as_deref(),
        layout: &LAYOUT,
    };
    write_manifest(out, &manifest)?;
    eprintln!(
        "running {} policies x {} trials, horizon {}, {} arms",
        config.policies.len(),
        config.trials,
        config.horizon,
        config.instance.n_arms()
    );

    let results = run_experiment(&config)?;
    let stats = aggregate(&results);
    std::fs::write(out.join(LAYOUT.summary), summary_csv(&stats))?;
    std::fs::write(out.join(LAYOUT.curves), curves_csv(&results))?;

    let mut timing: Vec<TimingRow> = Vec::new();
    if config.timing_mode {
        for s in &stats {
            if let Some(t) = &s.timing {
                timing.push(TimingRow {
                    policy: s.policy.clone(),
                    n_arms: config.instance.n_arms(),
                    mean_us: t.mean_us(),
                    std_us: t.std_us(),
                });
            }
        }
    }
    if let Some(arms) = &file.sweep_arms {
        eprintln!("timing sweep over {arms:?} arms");
        timing.extend(scalability_sweep(&config, arms)?);
    }
    std::fs::write(out.join(LAYOUT.timing), timing_csv(&timing))?;

    for s in &stats {
        eprintln!("{:<16} mean regret {:>12.3}  std {:>10.3}", s.policy, s.mean, s.std);
    }
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs) -> i32 {
    let suites: Vec<Suite> = match args.suite {
        SuiteArg::Lemmas => vec![Suite::Lemmas],
        SuiteArg::Equivalence => vec![Suite::Equivalence],
        SuiteArg::Kstar => vec![Suite::Kstar],
        SuiteArg::Concentration => vec![Suite::Concentration],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let mut ok = true;
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    for suite in suites {
        let report = suite.run(args.seed);
        ok &= report.passed();
        let _ = write!(lock, "{report}");
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

pub const BOUND_HEADER: &str = "variant,t,c_alpha_min,c_alpha,bound,status";

fn status_of(e: &Error) -> String {
    match e {
        Error::Degenerate { .. } => "degenerate".to_string(),
        Error::InvalidParameter { name: "sigma", .. } => "not_applicable".to_string(),
        other => format!("error: {}", other.to_string().replace(',', ";")),
    }
}

/// Writes one CSV row per checkpoint and variant.
pub fn cmd_bound(args: &BoundArgs, out: &mut dyn Write) -> i32 {
    let file = match ConfigFile::load(&args.config) {
        Ok(f) => f,
        Err(e) => return report(&e),
    };
    let instance = match file.instance.instance() {
        Ok(i) => i,
        Err(e) => return report(&e),
    };
    let checkpoints = file
        .checkpoints
        .clone()
        .unwrap_or_else(|| crate::harness::default_checkpoints(file.horizon));
    let variants: Vec<BoundVariant> = match args.variant {
        VariantArg::ExpFamily => vec![BoundVariant::ExpFamily],
        VariantArg::Gaussian => vec![BoundVariant::Gaussian],
        VariantArg::SubExponential => vec![BoundVariant::SubExponential],
        VariantArg::AdaptiveGaussian => vec![BoundVariant::AdaptiveGaussian],
        VariantArg::All => BoundVariant::ALL.to_vec(),
    };
    let params = BoundParams {
        kappa: args.kappa,
        rho: args.rho,
        ..BoundParams::default()
    };
    let spec = instance.family;
    let means = &instance.means;

    let mut text = format!("{BOUND_HEADER}\n");
    for variant in variants {
        let c_min = theoretical_c_alpha_min(&spec, means, args.epsilon, variant, &params);
        let c_alpha = match (args.c_alpha, &c_min) {
            (Some(c), _) => Ok(c),
            (None, Ok(c)) => Ok(*c),
            (None, Err(e)) => Err(status_of(e)),
        };
        let c_min_text = c_min
            .as_ref()
            .map(|&c| output::float(c))
            .unwrap_or_else(|_| "nan".into());
        for &t in &checkpoints {
            let (c_text, bound_text, status) = match &c_alpha {
                Err(status) => ("nan".to_string(), "nan".to_string(), status.clone()),
                Ok(c) => match theoretical_regret_bound(&spec, means, *c, args.epsilon, t as f64, variant, &params) {
                    Ok(b) => {
                        let status = match &c_min {
                            Ok(_) => "ok".to_string(),
                            Err(e) => format!("c_alpha_min {}", status_of(e)),
                        };
                        (output::float(*c), output::float(b), status)
                    }
                    Err(e) => (output::float(*c), "nan".to_string(), status_of(&e)),
                },
            };
            text.push_str(&format!(
                "{},{t},{c_min_text},{c_text},{bound_text},{status}\n",
                variant.name()
            ));
        }
    }
    match out.write_all(text.as_bytes()) {
        Ok(()) => EXIT_OK,
        Err(e) => report(&Error::Io(e)),
    }
}

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cts_core::experiment::{
    format_checks, run, verify, CheckConfig, ExitStatus, PolicySpec, RunConfig, RunOptions,
    SeedRange,
};
use cts_core::model::{reward, MeanVector, ProblemInstance, ProblemKind};
use cts_core::oracle::{solve, OracleConfig};
use cts_core::policy::PolicyKind;
use cts_core::suite::{generate, InstanceGenerator};
use cts_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Environment variable that overrides the output directory of `run`.
const OUT_DIR_ENV: &str = "CTS_OUT_DIR";

#[derive(Parser)]
#[command(name = "cts", version, about = "Combinatorial Thompson sampling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (instance, policy, seed) episode of a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides CTS_OUT_DIR and the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; results do not depend on this.
        #[arg(long)]
        jobs: Option<usize>,
        /// Replace the configured policies (repeatable).
        #[arg(long = "policy")]
        policies: Vec<PolicyKind>,
        /// Posterior variance scale of cts_gaussian, applied to every policy entry.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        horizon: Option<usize>,
        /// `A..B`, `A..=B` or a single seed.
        #[arg(long)]
        seeds: Option<SeedRange>,
        #[arg(long)]
        trace_posteriors: bool,
        #[arg(long, value_enum)]
        checkers: Option<Switch>,
    },
    /// Run the smoothness, reduction and trigger-frequency checkers on instance files.
    Verify {
        #[arg(required = true)]
        instances: Vec<PathBuf>,
        #[arg(long, default_value_t = CheckConfig::default().smoothness_trials)]
        smoothness_trials: usize,
        #[arg(long, default_value_t = CheckConfig::default().reduction_trials)]
        reduction_trials: usize,
        #[arg(long, default_value_t = CheckConfig::default().trigger_steps)]
        trigger_steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a random instance file.
    Gen {
        kind: ProblemKind,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the oracle once and print its action and decomposition trace.
    Solve {
        instance: PathBuf,
        /// JSON array of means, or `true` for the instance means.
        #[arg(long, default_value = "true")]
        mu: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(ExitStatus::of_error(e).code() as u8)
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn status(s: ExitStatus) -> ExitCode {
    ExitCode::from(s.code() as u8)
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    config: &Path,
    out: Option<PathBuf>,
    jobs: Option<usize>,
    policies: Vec<PolicyKind>,
    beta: Option<f64>,
    horizon: Option<usize>,
    seeds: Option<SeedRange>,
    trace_posteriors: bool,
    checkers: Option<Switch>,
) -> Result<ExitStatus, Error> {
    let mut cfg = RunConfig::load(config)?;
    if !policies.is_empty() {
        cfg.policies = policies.into_iter().map(PolicySpec::new).collect();
    }
    if let Some(b) = beta {
        for p in &mut cfg.policies {
            p.beta = b;
        }
    }
    if let Some(h) = horizon {
        cfg.horizon = h;
    }
    if let Some(s) = seeds {
        cfg.seeds = s;
    }
    if trace_posteriors {
        cfg.trace_posteriors = true;
    }
    if let Some(c) = checkers {
        cfg.checkers = matches!(c, Switch::On);
    }
    if jobs == Some(0) {
        return Err(Error::Config("--jobs must be at least 1".into()));
    }
    let out_dir = out.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from));
    let opts = RunOptions {
        out_dir,
        jobs,
        base_dir: config.parent().map(Path::to_path_buf),
    };
    let report = run(&cfg, &opts)?;
    log::info!(
        "{} episodes written to {}",
        report.episodes,
        report.out_dir.display()
    );
    if !report.checks.is_empty() {
        emit(&format_checks(&report.checks));
    }
    Ok(report.status)
}

fn cmd_solve(path: &Path, mu: &str, seed: u64) -> Result<(), Error> {
    let instance = ProblemInstance::load(path)?;
    let mu = if mu == "true" {
        instance.means().clone()
    } else {
        let text = std::fs::read_to_string(mu)?;
        let mu: MeanVector = serde_json::from_str(&text)?;
        mu.ensure_len(instance.n_arms())?;
        mu
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = solve(&instance, &mu, &OracleConfig::default(), &mut rng)?;
    let value = reward(&instance, &out.action, &mu)?;
    let doc = serde_json::json!({
        "action": out.action,
        "reward": value,
        "trace": out.trace,
    });
    emit(&(serde_json::to_string_pretty(&doc)? + "\n"));
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            jobs,
            policies,
            beta,
            horizon,
            seeds,
            trace_posteriors,
            checkers,
        } => match cmd_run(&config, out, jobs, policies, beta, horizon, seeds, trace_posteriors, checkers) {
            Ok(s) => status(s),
            Err(e) => fail(&e),
        },
        Command::Verify {
            instances,
            smoothness_trials,
            reduction_trials,
            trigger_steps,
            seed,
        } => {
            let cfg = CheckConfig {
                smoothness_trials,
                reduction_trials,
                trigger_steps,
                seed,
                ..CheckConfig::default()
            };
            match verify(&instances, &OracleConfig::default(), &cfg) {
                Ok(rows) => {
                    emit(&format_checks(&rows));
                    if rows.iter().all(|r| r.passed()) {
                        status(ExitStatus::Ok)
                    } else {
                        status(ExitStatus::CheckFailed)
                    }
                }
                Err(e) => fail(&e),
            }
        }
        Command::Gen {
            kind,
            size,
            k,
            seed,
            density,
            out,
        } => {
            let gen = InstanceGenerator {
                k,
                density,
                ..InstanceGenerator::new(kind, size, seed)
            };
            let result = generate(&gen).and_then(|inst| {
                let json = inst.to_json() + "\n";
                match out {
                    Some(p) => std::fs::write(p, json).map_err(Error::from),
                    None => {
                        emit(&json);
                        Ok(())
                    }
                }
            });
            match result {
                Ok(()) => status(ExitStatus::Ok),
                Err(e) => fail(&e),
            }
        }
        Command::Solve { instance, mu, seed } => match cmd_solve(&instance, &mu, seed) {
            Ok(()) => status(ExitStatus::Ok),
            Err(e) => fail(&e),
        },
    }
}

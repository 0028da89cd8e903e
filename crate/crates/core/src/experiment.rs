//! Batch driver: runs every (instance, policy, seed) episode, writes the
//! ledgers and diagnostics, and runs the checkers.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::report::{emit_csv, write_table};
use crate::harness::{
    bound_diagnostics, check_reduce2exact, random_means, Benchmark, BoundDiagnostics, RegretLedger,
};
use crate::model::{
    check_smoothness, triggering_probabilities, Action, MeanVector, Problem, ProblemInstance,
    UnitVectorAssignment,
};
use crate::oracle::{cascade, solve, OracleConfig, SpreadEstimator};
use crate::policy::{default_beta, random_action, Episode, EpisodeConfig, InitMode, PolicyKind};
use crate::suite::{generate, trigger_frequencies, InstanceGenerator};

/// Process exit status; larger values win when several events occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    Ok = 0,
    CheckFailed = 1,
    ConfigError = 2,
    IoError = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::Io(_) => ExitStatus::IoError,
            _ => ExitStatus::ConfigError,
        }
    }
}

/// Seeds `A..B` (half-open), `A..=B` (inclusive) or a single seed `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedRange {
    pub start: u64,
    pub end: u64,
}

impl SeedRange {
    pub fn seeds(&self) -> impl Iterator<Item = u64> {
        self.start..self.end
    }

    pub fn len(&self) -> usize {
        (self.end - self.start) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

impl FromStr for SeedRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |x: &str| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("bad seed `{x}` in `{s}`")))
        };
        let (start, end) = if let Some((a, b)) = s.split_once("..=") {
            (num(a)?, num(b)?.checked_add(1).ok_or_else(|| Error::Config("seed overflow".into()))?)
        } else if let Some((a, b)) = s.split_once("..") {
            (num(a)?, num(b)?)
        } else {
            let a = num(s)?;
            (a, a + 1)
        };
        if end <= start {
            return Err(Error::Config(format!("seed range `{s}` is empty")));
        }
        Ok(SeedRange { start, end })
    }
}

impl fmt::Display for SeedRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl TryFrom<String> for SeedRange {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SeedRange> for String {
    fn from(r: SeedRange) -> String {
        r.to_string()
    }
}

impl Serialize for SeedRange {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SeedRange {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    Path(PathBuf),
    Generated { generate: InstanceGenerator },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub policy: PolicyKind,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default)]
    pub init_mode: InitMode,
}

impl PolicySpec {
    pub fn new(policy: PolicyKind) -> Self {
        PolicySpec {
            policy,
            beta: default_beta(),
            init_mode: InitMode::default(),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PolicyEntry {
    Name(PolicyKind),
    Spec(PolicySpec),
}

fn policies_de<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<PolicySpec>, D::Error> {
    Ok(Vec::<PolicyEntry>::deserialize(d)?
        .into_iter()
        .map(|e| match e {
            PolicyEntry::Name(p) => PolicySpec::new(p),
            PolicyEntry::Spec(s) => s,
        })
        .collect())
}

fn default_policies() -> Vec<PolicySpec> {
    vec![PolicySpec::new(PolicyKind::CtsBeta)]
}

/// Budgets of the checkers run by `run` and `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckConfig {
    pub smoothness_trials: usize,
    pub reduction_trials: usize,
    pub trigger_steps: usize,
    /// Random actions whose trigger frequencies are tested, besides the oracle's.
    pub trigger_actions: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            smoothness_trials: 1000,
            reduction_trials: 200,
            trigger_steps: 20_000,
            trigger_actions: 3,
            seed: 0,
        }
    }
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub instances: Vec<InstanceSource>,
    #[serde(default = "default_policies", deserialize_with = "policies_de")]
    pub policies: Vec<PolicySpec>,
    pub horizon: usize,
    pub seeds: SeedRange,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default = "yes")]
    pub checkers: bool,
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub trace_posteriors: bool,
    #[serde(default)]
    pub checks: CheckConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        RunConfig::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("seed range is empty".into()));
        }
        if self.instances.is_empty() {
            return Err(Error::Config("no instances given".into()));
        }
        if self.policies.is_empty() {
            return Err(Error::Config("no policies given".into()));
        }
        if let Some(p) = self
            .policies
            .iter()
            .find(|p| p.policy == PolicyKind::CtsGaussian && !(p.beta > 1.0))
        {
            return Err(Error::Config(format!("beta = {} must exceed 1", p.beta)));
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        Ok(())
    }
}

/// Loads every instance source; relative paths are resolved against `base`.
pub fn load_instances(sources: &[InstanceSource], base: &Path) -> Result<Vec<ProblemInstance>> {
    sources
        .iter()
        .map(|s| match s {
            InstanceSource::Path(p) => {
                let path = if p.is_absolute() { p.clone() } else { base.join(p) };
                ProblemInstance::load(&path).map_err(|e| match e {
                    Error::Io(io) => Error::Io(std::io::Error::new(
                        io.kind(),
                        format!("{}: {io}", path.display()),
                    )),
                    other => other,
                })
            }
            InstanceSource::Generated { generate: g } => generate(g),
        })
        .collect()
}

/// Result of one checker on one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub instance: String,
    pub check: String,
    pub trials: usize,
    pub failures: usize,
    /// Largest `lhs − rhs` (or normalized deviation) observed.
    pub worst: f64,
    pub skipped: bool,
}

impl CheckRow {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn verdict(&self) -> &'static str {
        if self.skipped {
            "skip"
        } else if self.passed() {
            "pass"
        } else {
            "FAIL"
        }
    }
}

fn seed_for(label: &str, base: u64) -> u64 {
    // FNV-1a so the checker streams depend only on the instance contents
    label.bytes().fold(0xcbf2_9ce4_8422_2325 ^ base, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn random_unit_vectors<R: Rng + ?Sized>(vertices: usize, rank: usize, rng: &mut R) -> UnitVectorAssignment {
    let rows: Vec<Vec<f64>> = (0..vertices)
        .map(|_| loop {
            let v: Vec<f64> = (0..rank).map(|_| StandardNormal.sample(&mut *rng)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                break v.into_iter().map(|x| x / norm).collect();
            }
        })
        .collect();
    UnitVectorAssignment::from_rows(&rows)
}

/// Random action for the checkers; Max-Cut alternates deterministic cuts and
/// random cut distributions.
pub fn random_check_action<R: Rng + ?Sized>(instance: &ProblemInstance, rng: &mut R) -> Action {
    if let Problem::MaxCut { vertices, .. } = instance.problem() {
        if rng.random::<bool>() {
            return Action::CutDistribution(random_unit_vectors(*vertices, 3, rng));
        }
    }
    random_action(instance, rng)
}

/// Random means for the smoothness check. OIM edges with true probability
/// 0 stay at 0, since the smoothness constant only covers the support.
pub fn random_check_means<R: Rng + ?Sized>(instance: &ProblemInstance, rng: &mut R) -> MeanVector {
    let mut mu = random_means(instance, rng);
    if let Problem::Oim { .. } = instance.problem() {
        for (m, &star) in mu.0.iter_mut().zip(instance.means().as_slice()) {
            if star <= 0.0 {
                *m = 0.0;
            }
        }
    }
    mu
}

fn oim_too_large(instance: &ProblemInstance) -> bool {
    matches!(instance.problem(), Problem::Oim { vertices, edges, .. } if !cascade::is_enumerable(*vertices, edges))
}

fn checker_oracle(instance: &ProblemInstance, base: &OracleConfig) -> OracleConfig {
    let mut cfg = *base;
    if let Problem::Oim { vertices, edges, .. } = instance.problem() {
        if cascade::is_enumerable(*vertices, edges) {
            cfg.spread = SpreadEstimator::Exact;
        }
    }
    cfg
}

pub fn check_smoothness_trials(instance: &ProblemInstance, label: &str, cfg: &CheckConfig) -> Result<CheckRow> {
    let mut row = CheckRow {
        instance: label.to_string(),
        check: "smoothness".into(),
        trials: cfg.smoothness_trials,
        failures: 0,
        worst: f64::NEG_INFINITY,
        skipped: oim_too_large(instance),
    };
    if row.skipped {
        row.trials = 0;
        return Ok(row);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(label, cfg.seed ^ 1));
    for _ in 0..cfg.smoothness_trials {
        let a = random_check_action(instance, &mut rng);
        let mu = random_check_means(instance, &mut rng);
        let mu2 = random_check_means(instance, &mut rng);
        let c = check_smoothness(instance, &a, &mu, &mu2)?;
        row.worst = row.worst.max(c.lhs - c.rhs);
        if !c.holds {
            row.failures += 1;
        }
    }
    Ok(row)
}

pub fn check_reduction_trials(
    instance: &ProblemInstance,
    bench: &Benchmark,
    label: &str,
    oracle: &OracleConfig,
    cfg: &CheckConfig,
) -> Result<CheckRow> {
    let mut row = CheckRow {
        instance: label.to_string(),
        check: "reduce2exact".into(),
        trials: cfg.reduction_trials,
        failures: 0,
        worst: f64::NEG_INFINITY,
        skipped: oim_too_large(instance),
    };
    if row.skipped {
        row.trials = 0;
        return Ok(row);
    }
    let oracle = checker_oracle(instance, oracle);
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(label, cfg.seed ^ 2));
    for trial in 0..cfg.reduction_trials {
        // the first trial feeds the oracle the true means
        let theta = if trial == 0 {
            instance.means().clone()
        } else {
            random_means(instance, &mut rng)
        };
        let out = solve(instance, &theta, &oracle, &mut rng)?;
        let c = check_reduce2exact(instance, &out.trace, bench)?;
        row.worst = row.worst.max(c.lhs - c.rhs);
        if !c.holds {
            row.failures += 1;
        }
    }
    Ok(row)
}

/// Compares empirical trigger frequencies with the exact probabilities,
/// allowing 4 binomial standard errors per arm.
pub fn check_trigger_frequencies(
    instance: &ProblemInstance,
    label: &str,
    oracle: &OracleConfig,
    cfg: &CheckConfig,
) -> Result<CheckRow> {
    let mut row = CheckRow {
        instance: label.to_string(),
        check: "trigger_frequency".into(),
        trials: 0,
        failures: 0,
        worst: f64::NEG_INFINITY,
        skipped: oim_too_large(instance) || cfg.trigger_steps == 0,
    };
    if row.skipped {
        return Ok(row);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(label, cfg.seed ^ 3));
    let mut actions = vec![solve(instance, instance.means(), &checker_oracle(instance, oracle), &mut rng)?.action];
    actions.extend((0..cfg.trigger_actions).map(|_| random_check_action(instance, &mut rng)));
    let steps = cfg.trigger_steps as f64;
    for a in &actions {
        let p = triggering_probabilities(instance, a, instance.means())?;
        let f = trigger_frequencies(instance, a, cfg.trigger_steps, &mut rng)?;
        for (&p, &f) in p.iter().zip(&f) {
            row.trials += 1;
            let se = (p * (1.0 - p) / steps).sqrt();
            let dev = (f - p).abs() - 4.0 * se;
            row.worst = row.worst.max(dev);
            if dev > 1e-12 {
                row.failures += 1;
            }
        }
    }
    Ok(row)
}

/// Runs the three checkers on one instance.
pub fn verify_instance(
    instance: &ProblemInstance,
    label: &str,
    oracle: &OracleConfig,
    cfg: &CheckConfig,
) -> Result<Vec<CheckRow>> {
    let bench = Benchmark::new(instance)?;
    Ok(vec![
        check_smoothness_trials(instance, label, cfg)?,
        check_reduction_trials(instance, &bench, label, oracle, cfg)?,
        check_trigger_frequencies(instance, label, oracle, cfg)?,
    ])
}

/// Formats check rows as an aligned pass/fail table.
pub fn format_checks(rows: &[CheckRow]) -> String {
    let width = rows.iter().map(|r| r.instance.len()).max().unwrap_or(8).max(8);
    let mut out = format!(
        "{:<width$}  {:<18}  {:>7}  {:>8}  {:>12}  verdict\n",
        "instance", "check", "trials", "failures", "worst"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<width$}  {:<18}  {:>7}  {:>8}  {:>12.3e}  {}\n",
            r.instance,
            r.check,
            r.trials,
            r.failures,
            r.worst,
            r.verdict()
        ));
    }
    out
}

fn check_table_rows(rows: &[CheckRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.instance.clone(),
                r.check.clone(),
                r.trials.to_string(),
                r.failures.to_string(),
                r.worst.to_string(),
                r.verdict().to_string(),
            ]
        })
        .collect()
}

pub const CHECK_HEADER: [&str; 6] = ["instance", "check", "trials", "failures", "worst", "verdict"];

/// Outcome of [`run`].
#[derive(Debug, Clone)]
pub struct RunReport {
    pub status: ExitStatus,
    pub out_dir: PathBuf,
    pub episodes: usize,
    pub checks: Vec<CheckRow>,
}

/// Per-run overrides that do not change results.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    /// Directory relative instance paths are resolved against.
    pub base_dir: Option<PathBuf>,
}

struct EpisodeResult {
    ledger: RegretLedger,
    posterior: Vec<Vec<String>>,
}

fn run_one(
    instance: &ProblemInstance,
    label: &str,
    bench: &Benchmark,
    spec: &PolicySpec,
    seed: u64,
    cfg: &RunConfig,
) -> Result<EpisodeResult> {
    let ep_cfg = EpisodeConfig {
        horizon: cfg.horizon,
        seed,
        policy: spec.policy,
        beta: spec.beta,
        init_mode: spec.init_mode,
        oracle: cfg.oracle,
        trace_theta: false,
    };
    let mut ep = Episode::new(instance, bench, ep_cfg)?;
    let mut gaps = Vec::with_capacity(cfg.horizon);
    let mut sampled = Vec::with_capacity(cfg.horizon);
    let mut posterior = Vec::new();
    for _ in 0..cfg.horizon {
        let rec = ep.round()?;
        gaps.push(rec.gap);
        sampled.push(rec.sampled_gap);
        if cfg.trace_posteriors {
            for r in ep.posterior_rows() {
                posterior.push(vec![
                    label.to_string(),
                    spec.policy.to_string(),
                    seed.to_string(),
                    r.t.to_string(),
                    r.arm.to_string(),
                    r.a.to_string(),
                    r.b.to_string(),
                ]);
            }
        }
    }
    Ok(EpisodeResult {
        ledger: RegretLedger {
            problem: instance.kind(),
            instance: label.to_string(),
            policy: spec.policy,
            seed,
            gaps,
            sampled_gaps: sampled,
        },
        posterior,
    })
}

/// Runs all episodes of `cfg` and writes:
/// `ledger.csv`, `diagnostics.json`, `plot/*.csv`, `summary.csv`,
/// `checks.csv` (when checkers are on) and `posteriors.csv` (when traced).
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<RunReport> {
    cfg.validate()?;
    let base = opts.base_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let instances = load_instances(&cfg.instances, &base)?;
    let labels: Vec<String> = instances.iter().map(ProblemInstance::fingerprint).collect();
    let benches = instances
        .iter()
        .map(Benchmark::new)
        .collect::<Result<Vec<_>>>()?;
    let out_dir = opts
        .out_dir
        .clone()
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("results"));

    let mut tasks = Vec::new();
    for i in 0..instances.len() {
        for (p, _) in cfg.policies.iter().enumerate() {
            for seed in cfg.seeds.seeds() {
                tasks.push((i, p, seed));
            }
        }
    }
    let jobs = opts.jobs.or(cfg.jobs).unwrap_or(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let mut results: Vec<EpisodeResult> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(i, p, seed)| {
                run_one(&instances[i], &labels[i], &benches[i], &cfg.policies[p], seed, cfg)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    results.sort_by(|a, b| {
        (&a.ledger.instance, a.ledger.policy, a.ledger.seed).cmp(&(
            &b.ledger.instance,
            b.ledger.policy,
            b.ledger.seed,
        ))
    });

    let mut diagnostics: BTreeMap<String, BoundDiagnostics> = BTreeMap::new();
    for (inst, label) in instances.iter().zip(&labels) {
        diagnostics.insert(label.clone(), bound_diagnostics(inst)?);
    }
    let ledgers: Vec<RegretLedger> = results.iter().map(|r| r.ledger.clone()).collect();
    emit_csv(&ledgers, &diagnostics, &out_dir)?;

    let mut summary = Vec::new();
    let mut groups: BTreeMap<(String, PolicyKind), Vec<f64>> = BTreeMap::new();
    for l in &ledgers {
        groups
            .entry((l.instance.clone(), l.policy))
            .or_default()
            .push(l.gaps.iter().sum());
    }
    for ((label, policy), finals) in &groups {
        let n = finals.len() as f64;
        let mean = finals.iter().sum::<f64>() / n;
        let var = if finals.len() > 1 {
            finals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        summary.push(vec![
            label.clone(),
            policy.to_string(),
            finals.len().to_string(),
            cfg.horizon.to_string(),
            mean.to_string(),
            (var / n).sqrt().to_string(),
        ]);
    }
    write_table(
        &out_dir.join("summary.csv"),
        &["instance", "policy", "episodes", "horizon", "mean_regret", "stderr"],
        &summary,
    )?;

    if cfg.trace_posteriors {
        let rows: Vec<Vec<String>> = results.iter().flat_map(|r| r.posterior.clone()).collect();
        write_table(
            &out_dir.join("posteriors.csv"),
            &["instance", "policy", "seed", "t", "arm", "a", "b"],
            &rows,
        )?;
    }

    let mut checks = Vec::new();
    if cfg.checkers {
        for (inst, label) in instances.iter().zip(&labels) {
            checks.extend(verify_instance(inst, label, &cfg.oracle, &cfg.checks)?);
        }
        write_table(&out_dir.join("checks.csv"), &CHECK_HEADER, &check_table_rows(&checks))?;
    }
    let status = if checks.iter().all(CheckRow::passed) {
        ExitStatus::Ok
    } else {
        ExitStatus::CheckFailed
    };
    Ok(RunReport {
        status,
        out_dir,
        episodes: results.len(),
        checks,
    })
}

/// Loads each instance file and runs the checkers on it.
pub fn verify(paths: &[PathBuf], oracle: &OracleConfig, cfg: &CheckConfig) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for path in paths {
        let instance = ProblemInstance::load(path)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| instance.fingerprint());
        rows.extend(verify_instance(&instance, &label, oracle, cfg)?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_range_forms() {
        assert_eq!("0..3".parse::<SeedRange>().unwrap().len(), 3);
        assert_eq!("2..=4".parse::<SeedRange>().unwrap().seeds().collect::<Vec<_>>(), vec![2, 3, 4]);
        assert_eq!("7".parse::<SeedRange>().unwrap().seeds().collect::<Vec<_>>(), vec![7]);
        assert!("5..5".parse::<SeedRange>().is_err());
        assert!("a..b".parse::<SeedRange>().is_err());
    }

    #[test]
    fn config_parses_policy_names_and_specs() {
        let cfg = RunConfig::parse(
            r#"{"instances": [{"generate": {"kind": "pmc", "size": 3, "seed": 1}}],
                "policies": ["cts_beta", {"policy": "cts_gaussian", "beta": 3.0}],
                "horizon": 5, "seeds": "0..2"}"#,
        )
        .unwrap();
        assert_eq!(cfg.policies.len(), 2);
        assert_eq!(cfg.policies[1].beta, 3.0);
        assert!(cfg.checkers);
    }

    #[test]
    fn unknown_config_field_rejected() {
        let err = RunConfig::parse(r#"{"instances": [], "horizon": 1, "seeds": "0", "colour": 1}"#);
        assert!(matches!(err, Err(Error::Parse(_))));
    }

    #[test]
    fn zero_horizon_rejected() {
        let err = RunConfig::parse(
            r#"{"instances": [{"generate": {"kind": "pmc", "size": 3}}], "horizon": 0, "seeds": "0"}"#,
        );
        assert!(matches!(err, Err(Error::Config(_))));
    }
}

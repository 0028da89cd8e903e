//! CSV and JSON output of regret ledgers and diagnostics.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::scaling::mean_curve;
use super::{BoundDiagnostics, RegretLedger};
use crate::error::{Error, Result};

pub const LEDGER_FILE: &str = "ledger.csv";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.json";
pub const PLOT_DIR: &str = "plot";

pub const LEDGER_HEADER: [&str; 8] = [
    "problem",
    "instance",
    "policy",
    "seed",
    "t",
    "gap",
    "cum_regret",
    "sampled_gap",
];

fn csv_err(e: ::csv::Error) -> Error {
    match e.into_kind() {
        ::csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Roughly 40 log-spaced rounds plus the horizon.
pub fn plot_checkpoints(horizon: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..=40)
        .map(|j| (horizon as f64).powf(j as f64 / 40.0).round() as usize)
        .filter(|&t| t >= 1 && t <= horizon)
        .collect();
    out.push(horizon);
    out.sort_unstable();
    out.dedup();
    out
}

/// Files written by [`emit_csv`].
#[derive(Debug, Clone, PartialEq)]
pub struct EmittedFiles {
    pub ledger: PathBuf,
    pub diagnostics: PathBuf,
    pub plots: Vec<PathBuf>,
}

/// Writes the per-round ledger, the diagnostics of each instance and one
/// plot-data file (`t, mean_regret, stderr`) per instance and policy.
/// Ledgers are written sorted by `(instance, policy, seed)`.
pub fn emit_csv(
    ledgers: &[RegretLedger],
    diagnostics: &BTreeMap<String, BoundDiagnostics>,
    dir: &Path,
) -> Result<EmittedFiles> {
    fs::create_dir_all(dir)?;
    let mut sorted: Vec<&RegretLedger> = ledgers.iter().collect();
    sorted.sort_by(|a, b| {
        (&a.instance, a.policy, a.seed).cmp(&(&b.instance, b.policy, b.seed))
    });

    let ledger_path = dir.join(LEDGER_FILE);
    let mut w = ::csv::Writer::from_path(&ledger_path).map_err(csv_err)?;
    w.write_record(LEDGER_HEADER).map_err(csv_err)?;
    for l in &sorted {
        let (problem, policy, seed) = (l.problem.to_string(), l.policy.to_string(), l.seed.to_string());
        let mut cum = 0.0;
        for (i, (&gap, &sampled)) in l.gaps.iter().zip(&l.sampled_gaps).enumerate() {
            cum += gap;
            w.write_record([
                problem.as_str(),
                l.instance.as_str(),
                policy.as_str(),
                seed.as_str(),
                &(i + 1).to_string(),
                &gap.to_string(),
                &cum.to_string(),
                &sampled.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;

    let diagnostics_path = dir.join(DIAGNOSTICS_FILE);
    fs::write(
        &diagnostics_path,
        serde_json::to_string_pretty(diagnostics)? + "\n",
    )?;

    let mut groups: BTreeMap<(String, String), Vec<RegretLedger>> = BTreeMap::new();
    for l in &sorted {
        groups
            .entry((l.instance.clone(), l.policy.to_string()))
            .or_default()
            .push((*l).clone());
    }
    let plot_dir = dir.join(PLOT_DIR);
    let mut plots = Vec::new();
    if !groups.is_empty() {
        fs::create_dir_all(&plot_dir)?;
    }
    for ((instance, policy), group) in &groups {
        let horizon = group.iter().map(RegretLedger::horizon).min().unwrap_or(0);
        if horizon == 0 {
            continue;
        }
        let ts = plot_checkpoints(horizon);
        let (means, errs) = mean_curve(group, &ts)?;
        let path = plot_dir.join(format!("{instance}__{policy}.csv"));
        let mut w = ::csv::Writer::from_path(&path).map_err(csv_err)?;
        w.write_record(["t", "mean_regret", "stderr"]).map_err(csv_err)?;
        for ((t, m), e) in ts.iter().zip(&means).zip(&errs) {
            w.write_record([t.to_string(), m.to_string(), e.to_string()])
                .map_err(csv_err)?;
        }
        w.flush()?;
        plots.push(path);
    }
    Ok(EmittedFiles {
        ledger: ledger_path,
        diagnostics: diagnostics_path,
        plots,
    })
}

/// Writes `header` and `rows` to `path`.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut w = ::csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

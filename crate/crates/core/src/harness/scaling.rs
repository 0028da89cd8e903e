//! Shape diagnostics for cumulative regret curves.

use serde::{Deserialize, Serialize};

use super::RegretLedger;
use crate::error::{Error, Result};

/// Fewest episodes a fit is computed from.
pub const MIN_SEEDS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub checkpoints: Vec<usize>,
    /// Mean cumulative regret at each checkpoint.
    pub mean_regret: Vec<f64>,
    /// Standard error of the mean at each checkpoint.
    pub stderr: Vec<f64>,
    /// `R(t_{i+1}) / R(t_i)` for consecutive checkpoints.
    pub ratios: Vec<f64>,
    /// R² of the least-squares fit of mean regret against `ln t`.
    pub log_fit_r2: f64,
}

/// Coefficient of determination of the least-squares line `y ≈ a + b·ln t`.
pub fn log_fit_r2(ts: &[usize], ys: &[f64]) -> f64 {
    let n = ts.len() as f64;
    let xs: Vec<f64> = ts.iter().map(|&t| (t as f64).ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if syy == 0.0 {
        return 1.0;
    }
    if sxx == 0.0 {
        return 0.0;
    }
    sxy * sxy / (sxx * syy)
}

/// Mean and standard error of cumulative regret at `checkpoints` (1-based
/// round indices) over the episodes in `ledgers`.
pub fn mean_curve(ledgers: &[RegretLedger], checkpoints: &[usize]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut means = Vec::with_capacity(checkpoints.len());
    let mut errs = Vec::with_capacity(checkpoints.len());
    let cumulative: Vec<Vec<f64>> = ledgers.iter().map(RegretLedger::cumulative).collect();
    for &t in checkpoints {
        if t == 0 {
            return Err(Error::Config("checkpoints are 1-based round indices".into()));
        }
        let values = cumulative
            .iter()
            .map(|c| {
                c.get(t - 1).copied().ok_or_else(|| {
                    Error::Config(format!("checkpoint {t} beyond horizon {}", c.len()))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        means.push(mean);
        errs.push((var / n).sqrt());
    }
    Ok((means, errs))
}

pub fn scaling_fit(ledgers: &[RegretLedger], checkpoints: &[usize]) -> Result<ScalingFit> {
    if ledgers.len() < MIN_SEEDS {
        return Err(Error::InsufficientSeeds {
            need: MIN_SEEDS,
            got: ledgers.len(),
        });
    }
    if checkpoints.len() < 2 {
        return Err(Error::Config("need at least two checkpoints".into()));
    }
    let (mean_regret, stderr) = mean_curve(ledgers, checkpoints)?;
    let ratios = mean_regret.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(ScalingFit {
        checkpoints: checkpoints.to_vec(),
        log_fit_r2: log_fit_r2(checkpoints, &mean_regret),
        mean_regret,
        stderr,
        ratios,
    })
}

/// Geometric checkpoints `base · 2^{j/per_octave}` for `j` in `from..=to`, rounded.
pub fn geometric_checkpoints(base: f64, per_octave: i32, from: i32, to: i32) -> Vec<usize> {
    let mut out: Vec<usize> = (from..=to)
        .map(|j| (base * 2f64.powf(j as f64 / per_octave as f64)).round() as usize)
        .filter(|&t| t > 0)
        .collect();
    out.dedup();
    out
}

//! Multi-seed runs with median and interquartile range of each metric.

use std::fs;
use std::path::Path;

use eqcm_core::metrics::MetricsReport;
use serde::Serialize;

use crate::artifacts::write_artifacts;
use crate::config::{ExperimentConfig, SeedAxis};
use crate::error::{RunError, RunResult};
use crate::pipeline::run_experiment;

/// Linear-interpolation quantile of sorted data (`q` in `[0, 1]`).
pub fn quantile(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Some(sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub median: Option<f64>,
    pub q1: Option<f64>,
    pub q3: Option<f64>,
    pub iqr: Option<f64>,
    /// Seeds where the metric was defined.
    pub n: usize,
}

/// Summary over the defined values; undefined entries are skipped.
pub fn summarize(values: impl IntoIterator<Item = Option<f64>>) -> Summary {
    let mut v: Vec<f64> = values.into_iter().flatten().collect();
    v.sort_by(f64::total_cmp);
    let q1 = quantile(&v, 0.25);
    let q3 = quantile(&v, 0.75);
    Summary {
        median: quantile(&v, 0.5),
        q1,
        q3,
        iqr: q1.zip(q3).map(|(a, b)| b - a),
        n: v.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedResult {
    pub offset: u64,
    pub goe_seed: Option<u64>,
    pub split_seed: u64,
    pub train: MetricsReport,
    pub test: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub seeds: Vec<SeedResult>,
    pub train_accuracy: Summary,
    pub train_balanced_accuracy: Summary,
    pub test_accuracy: Summary,
    pub test_balanced_accuracy: Summary,
    pub test_fn_zero: usize,
}

impl SweepReport {
    fn from_seeds(seeds: Vec<SeedResult>) -> Self {
        Self {
            train_accuracy: summarize(seeds.iter().map(|s| s.train.accuracy)),
            train_balanced_accuracy: summarize(seeds.iter().map(|s| s.train.balanced_accuracy)),
            test_accuracy: summarize(seeds.iter().map(|s| s.test.accuracy)),
            test_balanced_accuracy: summarize(seeds.iter().map(|s| s.test.balanced_accuracy)),
            test_fn_zero: seeds.iter().filter(|s| s.test.counts.fn_ == 0).count(),
            seeds,
        }
    }
}

/// Runs `k` configs with the seeds on `axis` shifted by `0..k`.
/// With `out`, each run writes its artifacts into `out/seed_<i>/` and the
/// summary goes to `out/sweep.json`.
pub fn run_sweep(cfg: &ExperimentConfig, axis: SeedAxis, k: u64, out: Option<&Path>) -> RunResult<SweepReport> {
    if k == 0 {
        return Err(RunError::Config("--seeds must be at least 1".into()));
    }
    let mut seeds = Vec::new();
    for i in 0..k {
        let c = cfg.offset_seeds(axis, i);
        let r = run_experiment(&c)?;
        if let Some(dir) = out {
            write_artifacts(&r, &dir.join(format!("seed_{i}")))?;
        }
        seeds.push(SeedResult {
            offset: i,
            goe_seed: c.goe_seed(),
            split_seed: c.dataset.split_seed,
            train: r.train.metrics,
            test: r.test.metrics,
        });
    }
    let report = SweepReport::from_seeds(seeds);
    if let Some(dir) = out {
        let path = dir.join("sweep.json");
        fs::write(&path, serde_json::to_string_pretty(&report)? + "\n").map_err(|e| RunError::io(&path, e))?;
    }
    Ok(report)
}

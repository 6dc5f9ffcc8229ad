//! CSV and JSON outputs of a run.
//!
//! Everything except `timings.json` is a deterministic function of the
//! config, so two runs of one config write byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use eqcm_core::quantum::{Hamiltonian, HamiltonianKind};
use serde::Serialize;
use serde_json::json;

use crate::error::{RunError, RunResult};
use crate::pipeline::{RunReport, SampleRecord, SplitReport};

/// Per-class counts of `y` over equal-width bins of `[-r, r]`, where `r`
/// is the largest `|y|` of the split (1 when every `y` is 0).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub positive: Vec<u64>,
    pub negative: Vec<u64>,
}

pub fn histogram(samples: &[SampleRecord], t_plus: f64, bins: usize) -> Option<Histogram> {
    if samples.is_empty() || bins == 0 {
        return None;
    }
    let mut r = samples.iter().fold(0.0f64, |m, s| m.max(s.y.abs()));
    if r == 0.0 {
        r = 1.0;
    }
    let width = 2.0 * r / bins as f64;
    let edges = (0..=bins).map(|i| -r + i as f64 * width).collect();
    let mut positive = vec![0; bins];
    let mut negative = vec![0; bins];
    for s in samples {
        // The top edge belongs to the last bin.
        let k = (((s.y + r) / width) as usize).min(bins - 1);
        if s.truth == t_plus {
            positive[k] += 1;
        } else {
            negative[k] += 1;
        }
    }
    Some(Histogram {
        edges,
        positive,
        negative,
    })
}

/// Histogram CSV for one split, or `None` when the split is empty.
pub fn emit_histograms(report: &RunReport, bins: usize) -> Vec<(&'static str, Option<String>)> {
    let t_plus = report.dataset.t_plus;
    [("train", &report.train), ("test", &report.test)]
        .into_iter()
        .map(|(name, split)| (name, histogram(&split.samples, t_plus, bins).map(|h| histogram_csv(&h))))
        .collect()
}

fn histogram_csv(h: &Histogram) -> String {
    let mut out = String::from("bin_lo,bin_hi,positive,negative\n");
    for i in 0..h.positive.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            h.edges[i],
            h.edges[i + 1],
            h.positive[i],
            h.negative[i]
        ));
    }
    out
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}

fn samples_csv(split: &SplitReport) -> RunResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["word", "z", "y", "prediction", "truth"])?;
    for s in &split.samples {
        w.write_record([
            s.word.clone(),
            join(&s.z),
            s.y.to_string(),
            s.prediction.to_string(),
            s.truth.to_string(),
        ])?;
    }
    finish(w)
}

fn features_csv(split: &SplitReport, labels: &[String], fingerprint: &str) -> RunResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["word".to_string(), "target".to_string()];
    header.extend(labels.iter().cloned());
    w.write_record(&header)?;
    for s in &split.samples {
        let mut row = vec![s.word.clone(), s.truth.to_string()];
        row.extend(s.features.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    Ok(format!("# family_fingerprint={fingerprint}\n{}", finish(w)?))
}

fn weights_csv(labels: &[String], weights: &[f64]) -> RunResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "label", "w"])?;
    for (i, (l, v)) in labels.iter().zip(weights).enumerate() {
        w.write_record([i.to_string(), l.clone(), v.to_string()])?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> RunResult<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| RunError::Config(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn hamiltonian_json(h: &Hamiltonian) -> RunResult<String> {
    let kind: &HamiltonianKind = h.kind();
    let d = h.dim();
    let m = h.matrix();
    let re: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| m[(i, j)].re).collect()).collect();
    let im: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| m[(i, j)].im).collect()).collect();
    Ok(serde_json::to_string(
        &json!({"provenance": kind, "dim": d, "re": re, "im": im}),
    )?)
}

fn pretty<T: Serialize>(v: &T) -> RunResult<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Writes every artifact into `dir` and returns the file names written.
pub fn write_artifacts(report: &RunReport, dir: &Path) -> RunResult<Vec<String>> {
    fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
    let fp = report.model.family_fingerprint.to_string();
    let labels = &report.family_labels;
    let mut files: Vec<(String, String)> = Vec::new();
    let mut notes: Vec<String> = Vec::new();

    files.push(("config.json".into(), report.config.to_pretty_json()? + "\n"));
    files.push((
        "dataset.json".into(),
        pretty(&json!({
            "split_seed": report.dataset.seed,
            "t_plus": report.dataset.t_plus,
            "t_minus": report.dataset.t_minus,
            "positive_tag": report.dataset.positive_tag,
            "negative_tag": report.dataset.negative_tag,
            "sources": report.sources,
            "train": report.dataset.train,
            "test": report.dataset.test,
        }))?,
    ));
    match &report.partition {
        Some(p) => files.push(("partition.json".into(), pretty(p)?)),
        None => notes.push("consonant-vowel encoder: no fitted partition".into()),
    }
    let weights: Vec<_> = labels
        .iter()
        .zip(&report.model.weights)
        .enumerate()
        .map(|(i, (l, w))| json!({"index": i, "label": l, "w": w}))
        .collect();
    files.push((
        "model.json".into(),
        pretty(&json!({"lambda": report.model.lambda, "family_fingerprint": fp, "weights": weights}))?,
    ));
    files.push(("weights.csv".into(), weights_csv(labels, &report.model.weights)?));
    for (name, split) in [("train", &report.train), ("test", &report.test)] {
        files.push((format!("features_{name}.csv"), features_csv(split, labels, &fp)?));
        files.push((format!("samples_{name}.csv"), samples_csv(split)?));
    }
    files.push((
        "metrics.json".into(),
        pretty(&json!({"train": report.train.metrics, "test": report.test.metrics}))?,
    ));
    for (name, csv) in emit_histograms(report, report.config.histogram_bins) {
        match csv {
            Some(c) => files.push((format!("histogram_{name}.csv"), c)),
            None => notes.push(format!("{name} split is empty: no histogram written")),
        }
    }
    if report.config.dump_hamiltonian {
        files.push(("hamiltonian.json".into(), hamiltonian_json(&report.reservoir)? + "\n"));
    }
    let mut names: Vec<String> = files.iter().map(|(n, _)| n.clone()).collect();
    names.push("report.json".into());
    files.push((
        "report.json".into(),
        pretty(&json!({
            "task": report.config.task,
            "family_fingerprint": fp,
            "fit_inputs": report.fit_inputs,
            "train": report.train.metrics,
            "test": report.test.metrics,
            "artifacts": names,
            "notes": notes,
        }))?,
    ));
    files.push(("timings.json".into(), pretty(&report.timings)?));

    let mut written = Vec::new();
    for (name, body) in files {
        let path: PathBuf = dir.join(&name);
        fs::write(&path, body).map_err(|e| RunError::io(&path, e))?;
        written.push(name);
    }
    Ok(written)
}

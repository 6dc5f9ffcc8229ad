//! Scoring of an arbitrary predictions file.

use std::path::Path;

use eqcm_core::metrics::{confusion, derived_metrics, MetricsReport};

use crate::error::{RunError, RunResult};

/// Reads `prediction` and `truth` columns (by header name) and scores them.
///
/// Labels are compared as text. Without `positive`, the label that is
/// numerically larger (or lexically larger, when not numeric) is positive.
pub fn metrics_from_csv(path: &Path, positive: Option<&str>) -> RunResult<MetricsReport> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => match e.into_kind() {
                csv::ErrorKind::Io(io) => RunError::io(path, io),
                _ => unreachable!(),
            },
            _ => RunError::Csv(e),
        })?;
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| RunError::Config(format!("{}: missing column {name:?}", path.display())))
    };
    let (pi, ti) = (col("prediction")?, col("truth")?);
    let mut preds = Vec::new();
    let mut truths = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        preds.push(rec[pi].trim().to_string());
        truths.push(rec[ti].trim().to_string());
    }
    let mut labels: Vec<&String> = preds.iter().chain(&truths).collect();
    labels.sort_by(|a, b| match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => x.total_cmp(&y),
        _ => a.cmp(b),
    });
    labels.dedup();
    let (pos, neg) = match (positive, labels.as_slice()) {
        (_, l) if l.len() > 2 => {
            return Err(RunError::Config(format!("more than two labels: {l:?}")));
        }
        (Some(p), l) => {
            let other = l.iter().find(|x| x.as_str() != p).map(|s| s.to_string());
            (p.to_string(), other.unwrap_or_default())
        }
        (None, [a, b]) => (b.to_string(), a.to_string()),
        (None, _) => {
            return Err(RunError::Config(
                "cannot tell the classes apart; pass --positive".into(),
            ));
        }
    };
    Ok(derived_metrics(&confusion(&preds, &truths, &pos, &neg)?))
}

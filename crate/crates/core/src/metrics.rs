//! Binary confusion matrix and the rates derived from it.

use alloc::format;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub fp: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fn_ + self.fp + self.tn
    }

    /// `N₊ = TP + FN`.
    pub fn positives(&self) -> u64 {
        self.tp + self.fn_
    }

    /// `N₋ = TN + FP`.
    pub fn negatives(&self) -> u64 {
        self.tn + self.fp
    }

    /// Same predictions scored with the other class taken as positive.
    pub fn swap_classes(&self) -> Self {
        Self {
            tp: self.tn,
            fn_: self.fp,
            fp: self.fn_,
            tn: self.tp,
        }
    }
}

/// Tallies predictions against truths; `positive` and `negative` are the
/// only admissible labels.
pub fn confusion<T: PartialEq + fmt::Debug>(
    predictions: &[T],
    truths: &[T],
    positive: &T,
    negative: &T,
) -> Result<ConfusionMatrix> {
    if predictions.len() != truths.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: truths.len(),
        });
    }
    let is_pos = |l: &T| -> Result<bool> {
        if l == positive {
            Ok(true)
        } else if l == negative {
            Ok(false)
        } else {
            Err(Error::UnknownLabel(format!("{l:?}")))
        }
    };
    let mut cm = ConfusionMatrix::default();
    for (p, t) in predictions.iter().zip(truths) {
        match (is_pos(p)?, is_pos(t)?) {
            (true, true) => cm.tp += 1,
            (false, true) => cm.fn_ += 1,
            (true, false) => cm.fp += 1,
            (false, false) => cm.tn += 1,
        }
    }
    Ok(cm)
}

use core::fmt;

/// Every rate is `None` when its denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub counts: ConfusionMatrix,
    pub accuracy: Option<f64>,
    pub balanced_accuracy: Option<f64>,
    /// Positive predictive value.
    pub precision: Option<f64>,
    /// Negative predictive value.
    pub npv: Option<f64>,
    /// Recall / sensitivity.
    pub tpr: Option<f64>,
    /// Specificity.
    pub tnr: Option<f64>,
    pub fpr: Option<f64>,
    pub fnr: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn derived_metrics(cm: &ConfusionMatrix) -> MetricsReport {
    let tpr = ratio(cm.tp, cm.positives());
    let tnr = ratio(cm.tn, cm.negatives());
    let balanced_accuracy = match (tpr, tnr) {
        (Some(a), Some(b)) => Some(0.5 * (a + b)),
        _ => None,
    };
    MetricsReport {
        counts: *cm,
        accuracy: ratio(cm.tp + cm.tn, cm.total()),
        balanced_accuracy,
        precision: ratio(cm.tp, cm.tp + cm.fp),
        npv: ratio(cm.tn, cm.tn + cm.fn_),
        tpr,
        tnr,
        fpr: ratio(cm.fp, cm.fp + cm.tn),
        fnr: ratio(cm.fn_, cm.fn_ + cm.tp),
    }
}

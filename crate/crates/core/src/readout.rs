//! Ridge-regression readout and the sign decision rule.

use alloc::string::ToString;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{FeatureVector, Fingerprint};

/// Rows are feature vectors of the training samples, all from one family.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    rows: DMatrix<f64>,
    targets: DVector<f64>,
    fingerprint: Fingerprint,
}

impl DesignMatrix {
    pub fn new(features: &[FeatureVector], targets: &[f64]) -> Result<Self> {
        if features.len() != targets.len() {
            return Err(Error::LengthMismatch {
                left: features.len(),
                right: targets.len(),
            });
        }
        let first = features.first().ok_or(Error::Empty("design matrix"))?;
        let cols = first.len();
        for f in features {
            if f.family_fingerprint != first.family_fingerprint {
                return Err(Error::FingerprintMismatch {
                    expected: first.family_fingerprint.to_string(),
                    found: f.family_fingerprint.to_string(),
                });
            }
            if f.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: f.len(),
                });
            }
        }
        let rows = DMatrix::from_fn(features.len(), cols, |r, c| features[r].values[c]);
        Ok(Self {
            rows,
            targets: DVector::from_column_slice(targets),
            fingerprint: first.family_fingerprint,
        })
    }

    /// Raw matrix form, for problems that do not come from a feature family.
    pub fn from_matrix(rows: DMatrix<f64>, targets: DVector<f64>, fingerprint: Fingerprint) -> Result<Self> {
        if rows.nrows() != targets.len() {
            return Err(Error::LengthMismatch {
                left: rows.nrows(),
                right: targets.len(),
            });
        }
        if rows.nrows() == 0 {
            return Err(Error::Empty("design matrix"));
        }
        Ok(Self {
            rows,
            targets,
            fingerprint,
        })
    }

    pub fn rows(&self) -> &DMatrix<f64> {
        &self.rows
    }

    pub fn targets(&self) -> &DVector<f64> {
        &self.targets
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.fingerprint
    }

    /// `‖Xw − t‖² + λ‖w‖²`.
    pub fn ridge_loss(&self, w: &DVector<f64>, lambda: f64) -> f64 {
        let r = &self.rows * w - &self.targets;
        r.norm_squared() + lambda * w.norm_squared()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutModel {
    pub weights: Vec<f64>,
    pub lambda: f64,
    pub family_fingerprint: Fingerprint,
}

/// Solves `(XᵀX + λI) w = Xᵀt` by Cholesky factorization.
pub fn fit_ridge(design: &DesignMatrix, lambda: f64) -> Result<ReadoutModel> {
    if !lambda.is_finite() {
        return Err(Error::NonFinite("lambda"));
    }
    if lambda <= 0.0 {
        return Err(Error::OutOfRange {
            what: "lambda",
            value: lambda,
        });
    }
    if design.rows.iter().chain(design.targets.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("design matrix"));
    }
    let x = &design.rows;
    let mut gram = x.transpose() * x;
    for i in 0..gram.nrows() {
        gram[(i, i)] += lambda;
    }
    let rhs = x.transpose() * &design.targets;
    let chol = gram.cholesky().ok_or(Error::NotPositiveDefinite)?;
    let w = chol.solve(&rhs);
    if w.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("weights"));
    }
    Ok(ReadoutModel {
        weights: w.iter().copied().collect(),
        lambda,
        family_fingerprint: design.fingerprint,
    })
}

/// `y = w · x`.
pub fn deliberative_index(model: &ReadoutModel, x: &FeatureVector) -> Result<f64> {
    if model.family_fingerprint != x.family_fingerprint {
        return Err(Error::FingerprintMismatch {
            expected: model.family_fingerprint.to_string(),
            found: x.family_fingerprint.to_string(),
        });
    }
    if model.weights.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: model.weights.len(),
            found: x.len(),
        });
    }
    Ok(model.weights.iter().zip(&x.values).map(|(w, v)| w * v).sum())
}

/// `t₊` when `y > 0`, otherwise `t₋` (so `y = 0` goes negative).
pub fn decide(y: f64, t_plus: f64, t_minus: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::NonFinite("deliberative index"));
    }
    Ok(if y > 0.0 { t_plus } else { t_minus })
}

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scoring::loss::{as_f64, sigmoid, LossData};

/// An integer scoring system: `score = intercept + sum of points for the
/// features that are present`, predicting positive when `score > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoringSystem {
    pub intercept: i64,
    pub coefficients: Vec<i64>,
    pub feature_names: Vec<String>,
    pub lambda: Rational,
}

impl ScoringSystem {
    pub fn new(intercept: i64, coefficients: Vec<i64>, feature_names: Vec<String>, lambda: Rational) -> Result<Self> {
        if coefficients.len() != feature_names.len() {
            return Err(Error::LengthMismatch {
                expected: feature_names.len(),
                found: coefficients.len(),
            });
        }
        Ok(ScoringSystem {
            intercept,
            coefficients,
            feature_names,
            lambda,
        })
    }

    pub fn zeros(ds: &Dataset, lambda: Rational) -> Self {
        ScoringSystem {
            intercept: 0,
            coefficients: vec![0; ds.p()],
            feature_names: ds.feature_names().iter().map(|s| s.to_string()).collect(),
            lambda,
        }
    }

    /// Builds a system from a vector with the intercept first.
    pub(crate) fn from_vector(b: &[i64], ds: &Dataset, lambda: Rational) -> Self {
        ScoringSystem {
            intercept: b[0],
            coefficients: b[1..].to_vec(),
            feature_names: ds.feature_names().iter().map(|s| s.to_string()).collect(),
            lambda,
        }
    }

    /// Intercept first, then coefficients.
    pub fn vector(&self) -> Vec<i64> {
        std::iter::once(self.intercept).chain(self.coefficients.iter().copied()).collect()
    }

    pub fn p(&self) -> usize {
        self.coefficients.len()
    }

    /// Nonzero coefficients, intercept excluded.
    pub fn sparsity(&self) -> usize {
        self.coefficients.iter().filter(|&&c| c != 0).count()
    }

    pub fn score(&self, row: &[bool]) -> Result<i64> {
        if row.len() != self.p() {
            return Err(Error::LengthMismatch {
                expected: self.p(),
                found: row.len(),
            });
        }
        Ok(self.intercept
            + row
                .iter()
                .zip(&self.coefficients)
                .filter(|(&x, _)| x)
                .map(|(_, &c)| c)
                .sum::<i64>())
    }

    /// Predicted probability of the positive label.
    pub fn risk(&self, row: &[bool]) -> Result<f64> {
        Ok(sigmoid(self.score(row)? as f64))
    }

    pub fn predict(&self, row: &[bool]) -> Result<bool> {
        Ok(self.score(row)? > 0)
    }

    pub fn penalty(&self) -> f64 {
        self.lambda.to_f64() * self.sparsity() as f64
    }

    /// Smallest and largest score any row can reach.
    pub fn score_range(&self) -> (i64, i64) {
        let lo = self.coefficients.iter().filter(|&&c| c < 0).sum::<i64>();
        let hi = self.coefficients.iter().filter(|&&c| c > 0).sum::<i64>();
        (self.intercept + lo, self.intercept + hi)
    }
}

/// Average logistic loss of `system` on `ds` plus `lambda * sparsity`.
pub fn logistic_objective(system: &ScoringSystem, ds: &Dataset) -> Result<f64> {
    if system.p() != ds.p() {
        return Err(Error::LengthMismatch {
            expected: ds.p(),
            found: system.p(),
        });
    }
    let data = LossData::new(ds);
    Ok(data.loss(&as_f64(&system.vector())) + system.penalty())
}

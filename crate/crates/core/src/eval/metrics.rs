use std::fmt;

use serde::Serialize;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::model::Classifier;
use crate::rational::Rational;

/// Confusion counts; every rate is an exact fraction of them. A rate whose
/// denominator is zero is reported as 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConfusionReport {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

fn rate(num: u64, den: u64) -> Rational {
    if den == 0 {
        Rational::zero()
    } else {
        Rational::new(num as i64, den as i64).expect("nonzero denominator")
    }
}

impl ConfusionReport {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn positives(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> u64 {
        self.tn + self.fp
    }

    pub fn errors(&self) -> u64 {
        self.fp + self.fn_
    }

    pub fn accuracy(&self) -> Rational {
        rate(self.tp + self.tn, self.total())
    }

    pub fn tpr(&self) -> Rational {
        rate(self.tp, self.positives())
    }

    pub fn fnr(&self) -> Rational {
        rate(self.fn_, self.positives())
    }

    pub fn fpr(&self) -> Rational {
        rate(self.fp, self.negatives())
    }

    pub fn tnr(&self) -> Rational {
        rate(self.tn, self.negatives())
    }

    fn add(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, false) => self.tn += 1,
            (false, true) => self.fn_ += 1,
        }
    }

    /// Counts plus each rate as a fraction string and a float.
    pub fn to_json(&self) -> serde_json::Value {
        let r = |v: Rational| serde_json::json!({ "exact": v.to_string(), "value": v.to_f64() });
        serde_json::json!({
            "tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn_,
            "accuracy": r(self.accuracy()),
            "tpr": r(self.tpr()),
            "fpr": r(self.fpr()),
            "tnr": r(self.tnr()),
            "fnr": r(self.fnr()),
        })
    }
}

impl fmt::Display for ConfusionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TP={} FP={} TN={} FN={} acc={:.4} TPR={:.4} FPR={:.4} TNR={:.4} FNR={:.4}",
            self.tp,
            self.fp,
            self.tn,
            self.fn_,
            self.accuracy().to_f64(),
            self.tpr().to_f64(),
            self.fpr().to_f64(),
            self.tnr().to_f64(),
            self.fnr().to_f64()
        )
    }
}

pub fn confusion_from_predictions(predictions: &[bool], labels: &[bool]) -> Result<ConfusionReport> {
    if predictions.len() != labels.len() {
        return Err(Error::LengthMismatch {
            expected: labels.len(),
            found: predictions.len(),
        });
    }
    let mut report = ConfusionReport::default();
    for (&p, &y) in predictions.iter().zip(labels) {
        report.add(p, y);
    }
    Ok(report)
}

pub fn confusion(model: &dyn Classifier, ds: &Dataset) -> Result<ConfusionReport> {
    confusion_from_predictions(&model.predict_dataset(ds)?, &ds.labels())
}

/// Fraction of positions where the two prediction vectors differ.
pub fn disagreement_from_predictions(a: &[bool], b: &[bool]) -> Result<Rational> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let differ = a.iter().zip(b).filter(|(x, y)| x != y).count() as u64;
    Ok(rate(differ, a.len() as u64))
}

pub fn disagreement(a: &dyn Classifier, b: &dyn Classifier, ds: &Dataset) -> Result<Rational> {
    disagreement_from_predictions(&a.predict_dataset(ds)?, &b.predict_dataset(ds)?)
}

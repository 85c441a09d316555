use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::eval::metrics::{confusion_from_predictions, disagreement_from_predictions, ConfusionReport};
use crate::eval::predictions::PredictionFile;
use crate::eval::split::Split;
use crate::model::{AnyModel, Classifier};
use crate::rational::Rational;

/// One percentage point of test accuracy.
pub const DEFAULT_MARGIN: Rational = Rational::new_reduced(1, 100);

/// Where a candidate's predictions come from.
#[derive(Clone, Debug, PartialEq)]
pub enum Predictor {
    Model(AnyModel),
    /// Externally produced predictions, keyed by row of the full dataset.
    Predictions(PredictionFile),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub name: String,
    pub predictor: Predictor,
    /// Interpretable models are compared against the rest (the baselines).
    pub interpretable: bool,
    /// Training objective, when the model came with one.
    pub objective: Option<f64>,
}

impl Candidate {
    pub fn model(name: impl Into<String>, model: AnyModel, interpretable: bool) -> Self {
        Candidate {
            name: name.into(),
            predictor: Predictor::Model(model),
            interpretable,
            objective: None,
        }
    }

    pub fn predictions(name: impl Into<String>, file: PredictionFile) -> Self {
        Candidate {
            name: name.into(),
            predictor: Predictor::Predictions(file),
            interpretable: false,
            objective: None,
        }
    }

    fn kind(&self) -> &'static str {
        match &self.predictor {
            Predictor::Model(m) => m.kind(),
            Predictor::Predictions(_) => "predictions",
        }
    }

    fn predict_rows(&self, rows: &[usize], subset: &Dataset) -> Result<Option<Vec<bool>>> {
        match &self.predictor {
            Predictor::Model(m) => m.predict_dataset(subset).map(Some),
            Predictor::Predictions(f) => Ok(f.covers(rows).then(|| f.for_rows(rows)).transpose()?),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelRow {
    pub name: String,
    pub kind: &'static str,
    pub interpretable: bool,
    pub size: Option<usize>,
    pub objective: Option<f64>,
    /// Absent for external predictions that do not cover the training rows.
    pub train: Option<ConfusionReport>,
    pub test: ConfusionReport,
    /// Test accuracy minus the best interpretable test accuracy (or the
    /// best overall when no candidate is interpretable).
    pub test_delta: Rational,
    pub test_predictions: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairDisagreement {
    pub a: usize,
    pub b: usize,
    pub fraction: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ModelRow>,
    /// Test-set disagreement for every pair of candidates.
    pub disagreements: Vec<PairDisagreement>,
    pub best_interpretable: Option<usize>,
    pub best_baseline: Option<usize>,
    pub margin: Rational,
    /// Best baseline test accuracy minus best interpretable test accuracy.
    pub gap: Option<Rational>,
    /// Set when `gap` exceeds `margin`.
    pub flagged: bool,
    pub split: Split,
}

fn best(rows: &[ModelRow], keep: impl Fn(&ModelRow) -> bool) -> Option<usize> {
    rows.iter()
        .enumerate()
        .filter(|(_, r)| keep(r))
        .fold(None, |acc: Option<usize>, (i, r)| match acc {
            Some(j) if rows[j].test.accuracy() >= r.test.accuracy() => Some(j),
            _ => Some(i),
        })
}

fn diff(a: Rational, b: Rational) -> Rational {
    Rational::from(a.ratio() - b.ratio())
}

/// Evaluates every candidate on the same split of `ds`. Ties for "best" go
/// to the earlier candidate.
pub fn compare(candidates: &[Candidate], ds: &Dataset, split: &Split, margin: Rational) -> Result<ComparisonReport> {
    if candidates.len() < 2 {
        return Err(Error::InvalidParameter("a comparison needs at least two models".into()));
    }
    if margin.is_negative() {
        return Err(Error::InvalidParameter(format!("margin must be non-negative, got {margin}")));
    }
    let train_ds = ds.select_rows(&split.train);
    let test_ds = ds.select_rows(&split.test);
    let train_labels = train_ds.labels();
    let test_labels = test_ds.labels();
    let mut rows = Vec::with_capacity(candidates.len());
    for c in candidates {
        let test_predictions = c
            .predict_rows(&split.test, &test_ds)?
            .ok_or_else(|| Error::InvalidParameter(format!("`{}` has no prediction for some test rows", c.name)))?;
        let train = c
            .predict_rows(&split.train, &train_ds)?
            .map(|p| confusion_from_predictions(&p, &train_labels))
            .transpose()?;
        let size = match &c.predictor {
            Predictor::Model(m) => Some(m.size()),
            Predictor::Predictions(_) => None,
        };
        rows.push(ModelRow {
            name: c.name.clone(),
            kind: c.kind(),
            interpretable: c.interpretable,
            size,
            objective: c.objective,
            train,
            test: confusion_from_predictions(&test_predictions, &test_labels)?,
            test_delta: Rational::zero(),
            test_predictions,
        });
    }
    let best_interpretable = best(&rows, |r| r.interpretable);
    let best_baseline = best(&rows, |r| !r.interpretable);
    let reference = best_interpretable.or(best(&rows, |_| true)).expect("at least two rows");
    let reference_accuracy = rows[reference].test.accuracy();
    for r in &mut rows {
        r.test_delta = diff(r.test.accuracy(), reference_accuracy);
    }
    let mut disagreements = Vec::new();
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            disagreements.push(PairDisagreement {
                a,
                b,
                fraction: disagreement_from_predictions(&rows[a].test_predictions, &rows[b].test_predictions)?,
            });
        }
    }
    let gap = match (best_interpretable, best_baseline) {
        (Some(i), Some(b)) => Some(diff(rows[b].test.accuracy(), rows[i].test.accuracy())),
        _ => None,
    };
    let flagged = gap.is_some_and(|g| g > margin);
    Ok(ComparisonReport {
        rows,
        disagreements,
        best_interpretable,
        best_baseline,
        margin,
        gap,
        flagged,
        split: split.clone(),
    })
}

fn pct(r: Rational) -> String {
    format!("{:.2}", 100.0 * r.to_f64())
}

impl ComparisonReport {
    pub fn verdict(&self) -> String {
        match (self.best_interpretable, self.best_baseline, self.gap) {
            (Some(i), Some(b), Some(gap)) => {
                let (ni, nb) = (&self.rows[i].name, &self.rows[b].name);
                if self.flagged {
                    format!(
                        "FLAG: baseline `{nb}` beats interpretable `{ni}` by {} points of test accuracy (margin {})",
                        pct(gap),
                        pct(self.margin)
                    )
                } else {
                    format!(
                        "ok: interpretable `{ni}` is within {} points of baseline `{nb}` (difference {})",
                        pct(self.margin),
                        pct(gap)
                    )
                }
            }
            _ => "no interpretable/baseline pair to compare".to_string(),
        }
    }

    /// Plain-text table, one line per candidate, then pairwise disagreement.
    pub fn render(&self) -> String {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max(5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "train rows {}, test rows {}, seed {}",
            self.split.train.len(),
            self.split.test.len(),
            self.split.seed
        );
        let _ = writeln!(
            out,
            "{:width$}  {:14}  {:13}  {:>4}  {:>9}  {:>8}  {:>6}  {:>6}  {:>6}  {:>6}  {:>7}",
            "model", "kind", "role", "size", "train acc", "test acc", "TPR", "FPR", "TNR", "FNR", "delta"
        );
        for r in &self.rows {
            let size = r.size.map_or("-".to_string(), |s| s.to_string());
            let train = r.train.map_or("-".to_string(), |t| pct(t.accuracy()));
            let t = &r.test;
            let role = if r.interpretable { "interpretable" } else { "baseline" };
            let _ = writeln!(
                out,
                "{:width$}  {:14}  {:13}  {:>4}  {:>9}  {:>8}  {:>6}  {:>6}  {:>6}  {:>6}  {:>7}",
                r.name,
                r.kind,
                role,
                size,
                train,
                pct(t.accuracy()),
                pct(t.tpr()),
                pct(t.fpr()),
                pct(t.tnr()),
                pct(t.fnr()),
                pct(r.test_delta)
            );
        }
        if !self.disagreements.is_empty() {
            let _ = writeln!(out, "\ntest disagreement:");
            for d in &self.disagreements {
                let _ = writeln!(
                    out,
                    "  {} vs {}: {} ({})",
                    self.rows[d.a].name,
                    self.rows[d.b].name,
                    pct(d.fraction),
                    d.fraction
                );
            }
        }
        let _ = writeln!(out, "\n{}", self.verdict());
        out
    }

    pub fn to_json(&self) -> Value {
        let exact = |v: Rational| json!({ "exact": v.to_string(), "value": v.to_f64() });
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "kind": r.kind,
                    "interpretable": r.interpretable,
                    "size": r.size,
                    "objective": r.objective,
                    "train": r.train.map(|t| t.to_json()),
                    "test": r.test.to_json(),
                    "test_delta": exact(r.test_delta),
                })
            })
            .collect();
        let disagreements: Vec<Value> = self
            .disagreements
            .iter()
            .map(|d| json!({ "a": self.rows[d.a].name, "b": self.rows[d.b].name, "fraction": exact(d.fraction) }))
            .collect();
        json!({
            "kind": "comparison",
            "version": crate::VERSION,
            "schema": crate::SCHEMA_VERSION,
            "seed": self.split.seed,
            "train_rows": self.split.train.len(),
            "test_rows": self.split.test.len(),
            "models": rows,
            "disagreements": disagreements,
            "best_interpretable": self.best_interpretable.map(|i| &self.rows[i].name),
            "best_baseline": self.best_baseline.map(|i| &self.rows[i].name),
            "margin": exact(self.margin),
            "gap": self.gap.map(exact),
            "flagged": self.flagged,
            "verdict": self.verdict(),
        })
    }
}

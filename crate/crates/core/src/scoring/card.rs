//! Score-card text and JSON export.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scoring::lattice::{CoefficientBounds, ScoringCertificate};
use crate::scoring::loss::sigmoid;
use crate::scoring::system::ScoringSystem;

pub const SCORING_KIND: &str = "scoring_system";

/// Training facts printed with a score card.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingSummary {
    pub objective: f64,
    pub loss: f64,
    pub optimal: bool,
    pub gap: f64,
    pub bounds: CoefficientBounds,
    #[serde(default)]
    pub sparsity_cap: Option<usize>,
}

impl From<&ScoringCertificate> for TrainingSummary {
    fn from(c: &ScoringCertificate) -> Self {
        TrainingSummary {
            objective: c.objective,
            loss: c.loss,
            optimal: c.optimal,
            gap: c.gap,
            bounds: c.bounds,
            sparsity_cap: c.sparsity_cap,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointsDoc {
    pub feature: String,
    pub index: usize,
    pub points: i64,
}

impl ScoringCertificate {
    /// JSON export; `wall_time` is omitted when `include_wall_time` is false
    /// so that runs can be compared byte for byte.
    pub fn to_json(&self, include_wall_time: bool) -> serde_json::Value {
        let mut v = serde_json::json!({
            "schema_version": crate::SCHEMA_VERSION,
            "kind": "scoring_certificate",
            "toolkit_version": crate::VERSION,
            "optimal": self.optimal,
            "objective": self.objective,
            "loss": self.loss,
            "gap": self.gap,
            "tolerance": self.tolerance,
            "lambda": self.system.lambda,
            "bounds": self.bounds,
            "sparsity_cap": self.sparsity_cap,
            "baseline_objective": self.baseline_objective,
            "model": ScoringDoc::new(&self.system, Some(self.into())),
            "stats": self.stats,
        });
        if include_wall_time {
            v["wall_time_secs"] = serde_json::json!(self.wall_time.as_secs_f64());
        }
        v
    }
}

/// JSON form of a scoring system. Only nonzero coefficients are listed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoringDoc {
    pub schema_version: u32,
    pub kind: String,
    pub features: Vec<String>,
    pub intercept: i64,
    pub points: Vec<PointsDoc>,
    pub lambda: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub training: Option<TrainingSummary>,
}

impl ScoringDoc {
    pub fn new(system: &ScoringSystem, training: Option<TrainingSummary>) -> Self {
        ScoringDoc {
            schema_version: crate::SCHEMA_VERSION,
            kind: SCORING_KIND.into(),
            features: system.feature_names.clone(),
            intercept: system.intercept,
            points: system
                .coefficients
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(j, &c)| PointsDoc {
                    feature: system.feature_names[j].clone(),
                    index: j,
                    points: c,
                })
                .collect(),
            lambda: system.lambda,
            training,
        }
    }

    pub fn to_model(&self) -> Result<ScoringSystem> {
        if self.kind != SCORING_KIND {
            return Err(Error::InvalidParameter(format!(
                "expected a {SCORING_KIND} document, found `{}`",
                self.kind
            )));
        }
        let mut coefficients = vec![0; self.features.len()];
        for p in &self.points {
            if p.index >= self.features.len() || self.features[p.index] != p.feature {
                return Err(Error::UnknownFeature(p.feature.clone()));
            }
            coefficients[p.index] = p.points;
        }
        ScoringSystem::new(self.intercept, coefficients, self.features.clone(), self.lambda)
    }
}

/// Renders a printed score card: one line per feature with its
/// points, a SCORE line, and a score-to-risk table.
pub fn render_card(system: &ScoringSystem, training: Option<&TrainingSummary>) -> String {
    let terms: Vec<(usize, &str, i64)> = system
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| (j, system.feature_names[j].as_str(), c))
        .collect();
    let width = terms.iter().map(|t| t.1.len()).max().unwrap_or(0).max(12);
    let mut out = String::new();
    for (row, (_, name, points)) in terms.iter().enumerate() {
        let plural = if points.abs() == 1 { "point" } else { "points" };
        let lead = if row == 0 { "  " } else { "+ " };
        out.push_str(&format!(
            "{:>2}. {:<width$}  {:>3} {:<6}  {lead}...\n",
            row + 1,
            name,
            points,
            plural
        ));
    }
    if terms.is_empty() {
        out.push_str("(no features)\n");
    }
    let intercept = match system.intercept {
        0 => String::new(),
        v if v > 0 => format!(" + {v}"),
        v => format!(" - {}", -v),
    };
    out.push_str(&format!(
        "{:>width$}  SCORE = sum of points above{intercept}\n",
        "",
        width = width + 4
    ));
    out.push_str("\nSCORE  RISK\n");
    let (lo, hi) = system.score_range();
    for s in lo..=hi {
        out.push_str(&format!("{:>5}  {:>5.1}%\n", s, 100.0 * sigmoid(s as f64)));
    }
    out.push_str("\npredict positive when SCORE > 0\n");
    out.push_str(&format!("lambda {}", system.lambda));
    if let Some(t) = training {
        out.push_str(&format!(
            ", coefficients in [{}, {}], intercept in [{}, {}]",
            t.bounds.coef_min, t.bounds.coef_max, t.bounds.intercept_min, t.bounds.intercept_max
        ));
        if let Some(cap) = t.sparsity_cap {
            out.push_str(&format!(", at most {cap} terms"));
        }
        out.push_str(&format!(
            "\ntraining objective {:.6} (loss {:.6}), {}\n",
            t.objective,
            t.loss,
            if t.optimal {
                "certified optimal".to_string()
            } else {
                format!("not proven optimal, gap {:.3e}", t.gap)
            }
        ));
    } else {
        out.push('\n');
    }
    out
}

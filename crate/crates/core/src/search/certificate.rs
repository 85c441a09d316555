use std::time::Duration;

use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use crate::rational::{fraction_string, ratio_to_f64, Rational};
use crate::rules::json::RuleListDoc;
use crate::rules::{LabelNames, ObjectiveValue, RuleList};

/// Prefixes discarded, by the rule that discarded them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PruneCounts {
    pub hierarchical: u64,
    pub lookahead: u64,
    pub equivalent_points: u64,
    pub support: u64,
    pub accurate_support: u64,
    pub empty_capture: u64,
    pub symmetry: u64,
}

impl PruneCounts {
    pub fn total(&self) -> u64 {
        self.hierarchical
            + self.lookahead
            + self.equivalent_points
            + self.support
            + self.accurate_support
            + self.empty_capture
            + self.symmetry
    }
}

/// The incumbent objective after `expansions` prefixes were expanded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncumbentEvent {
    pub expansions: u64,
    pub objective: String,
    #[serde(skip)]
    pub units: u128,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub children_evaluated: u64,
    pub nodes_queued: u64,
    pub max_queue: usize,
    pub pruned: PruneCounts,
    pub incumbent_trace: Vec<IncumbentEvent>,
}

/// Bounds recorded for one evaluated prefix (with `trace` on).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub rules: Vec<usize>,
    pub bounds: super::BoundBreakdown,
}

/// What a search proved.
///
/// With `optimal` set, no rule list over the antecedent universe with at
/// most `max_rules` rules has a smaller objective than `objective`, and
/// `model` is the first optimal list in (length, lexicographic) order.
/// Otherwise `gap` bounds how far `objective` may be from optimal.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub objective: ObjectiveValue,
    pub model: RuleList,
    /// Indices of the model's rules in the antecedent universe.
    pub antecedents: Vec<usize>,
    pub optimal: bool,
    pub gap: Ratio<i128>,
    pub lambda: Rational,
    pub max_rules: usize,
    pub universe_size: usize,
    pub stats: SearchStats,
    pub wall_time: Duration,
    pub features: Vec<String>,
    pub trace: Vec<TraceEntry>,
}

impl Certificate {
    pub fn render_model(&self, labels: &LabelNames) -> String {
        let names: Vec<&str> = self.features.iter().map(String::as_str).collect();
        self.model.render(&names, labels)
    }

    pub fn model_doc(&self) -> RuleListDoc {
        RuleListDoc::new(&self.model, &self.features, Some(self.lambda), Some(&self.objective))
    }

    /// JSON export; `wall_time` is omitted when `include_wall_time` is false
    /// so that runs can be compared byte for byte.
    pub fn to_json(&self, include_wall_time: bool) -> Value {
        let mut v = json!({
            "schema_version": crate::SCHEMA_VERSION,
            "kind": "rule_list_certificate",
            "toolkit_version": crate::VERSION,
            "optimal": self.optimal,
            "objective": self.objective,
            "gap": { "value": fraction_string(&self.gap), "decimal": ratio_to_f64(&self.gap) },
            "lambda": self.lambda,
            "max_rules": self.max_rules,
            "universe_size": self.universe_size,
            "antecedents": self.antecedents,
            "model": self.model_doc(),
            "stats": self.stats,
        });
        if include_wall_time {
            v["wall_time_secs"] = json!(self.wall_time.as_secs_f64());
        }
        v
    }
}

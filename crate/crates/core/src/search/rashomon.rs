use std::time::{Duration, Instant};

use num_rational::Ratio;
use serde_json::{json, Value};

use crate::data::{Antecedent, Dataset};
use crate::error::Result;
use crate::par;
use crate::rational::{fraction_string, Rational};
use crate::rules::json::RuleListDoc;
use crate::rules::{objective, LabelNames, ObjectiveValue, RuleList};
use crate::search::certificate::SearchStats;
use crate::search::config::SearchConfig;
use crate::search::engine::{check_inputs, run, Mode, Universe};

#[derive(Clone, Debug, PartialEq)]
pub struct RashomonModel {
    pub antecedents: Vec<usize>,
    pub model: RuleList,
    pub objective: ObjectiveValue,
}

/// Every rule list within `epsilon` of the optimal objective, best first
/// (ties by length, then antecedent order).
#[derive(Clone, Debug, PartialEq)]
pub struct RashomonSet {
    pub models: Vec<RashomonModel>,
    pub optimum: Ratio<i128>,
    pub epsilon: Rational,
    pub threshold: Ratio<i128>,
    pub lambda: Rational,
    pub max_rules: usize,
    /// More than `max_models` lists qualified; `models` holds the first ones
    /// found.
    pub truncated: bool,
    /// False when a search budget stopped either phase early. The optimum
    /// is then only an upper bound and `models` may hold extra lists.
    pub complete: bool,
    pub features: Vec<String>,
    pub stats: SearchStats,
    pub wall_time: Duration,
}

impl RashomonSet {
    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn contains(&self, antecedents: &[usize]) -> bool {
        self.models.iter().any(|m| m.antecedents == antecedents)
    }

    pub fn render(&self, labels: &LabelNames) -> String {
        let names: Vec<&str> = self.features.iter().map(String::as_str).collect();
        let mut out = format!(
            "{} models with objective <= {} (optimum {}, epsilon {}){}\n",
            self.models.len(),
            fraction_string(&self.threshold),
            fraction_string(&self.optimum),
            self.epsilon,
            if self.truncated { ", truncated" } else { "" },
        );
        for (i, m) in self.models.iter().enumerate() {
            out.push_str(&format!("\n# model {} objective {}\n", i + 1, m.objective));
            out.push_str(&m.model.render(&names, labels));
        }
        out
    }

    pub fn to_json(&self, include_wall_time: bool) -> Value {
        let models: Vec<Value> = self
            .models
            .iter()
            .map(|m| {
                json!({
                    "antecedents": m.antecedents,
                    "objective": m.objective,
                    "model": RuleListDoc::new(&m.model, &self.features, Some(self.lambda), Some(&m.objective)),
                })
            })
            .collect();
        let mut v = json!({
            "schema_version": crate::SCHEMA_VERSION,
            "kind": "rashomon_set",
            "toolkit_version": crate::VERSION,
            "optimum": fraction_string(&self.optimum),
            "epsilon": self.epsilon,
            "threshold": fraction_string(&self.threshold),
            "lambda": self.lambda,
            "max_rules": self.max_rules,
            "truncated": self.truncated,
            "complete": self.complete,
            "count": self.models.len(),
            "models": models,
            "stats": self.stats,
        });
        if include_wall_time {
            v["wall_time_secs"] = json!(self.wall_time.as_secs_f64());
        }
        v
    }
}

pub(crate) fn enumerate_in(
    ds: &Dataset,
    ants: &[Antecedent],
    uni: &Universe<'_>,
    cfg: &SearchConfig,
) -> Result<RashomonSet> {
    let started = Instant::now();
    let (best, listed) = par::with_threads(cfg.threads, || {
        let best = run(ds, uni, cfg, Mode::Optimize);
        let listed = best.incumbent.as_ref().map(|inc| {
            let threshold = inc.units + best.scale.epsilon_units(cfg.epsilon);
            (threshold, run(ds, uni, cfg, Mode::Enumerate { threshold }))
        });
        (best, listed)
    });
    let Some(inc) = best.incumbent else {
        return Err(crate::Error::Infeasible(
            "no rule list within the length limit satisfies the constraints".into(),
        ));
    };
    let (threshold, listed) = listed.expect("an incumbent implies an enumeration run");
    let scale = best.scale;

    let mut found = listed.found;
    found.sort_by(|a, b| (a.1, a.0.len(), &a.0).cmp(&(b.1, b.0.len(), &b.0)));
    let mut models = Vec::with_capacity(found.len());
    for (rules, units) in found {
        let antecedents: Vec<usize> = rules.iter().map(|&r| r as usize).collect();
        let model = RuleList::with_majority_labels(
            antecedents.iter().map(|&r| ants[r].conjunction.clone()).collect(),
            ds,
        )?;
        let objective = objective(&model, ds, cfg.lambda);
        debug_assert_eq!(objective.value(), scale.to_ratio(units));
        models.push(RashomonModel {
            antecedents,
            model,
            objective,
        });
    }
    Ok(RashomonSet {
        models,
        optimum: scale.to_ratio(inc.units),
        epsilon: cfg.epsilon,
        threshold: scale.to_ratio(threshold),
        lambda: cfg.lambda,
        max_rules: cfg.max_rules,
        truncated: listed.truncated,
        complete: best.optimal && listed.optimal,
        features: ds.feature_names().iter().map(|s| s.to_string()).collect(),
        stats: listed.stats,
        wall_time: started.elapsed(),
    })
}

/// Every rule list over `ants` with at most `cfg.max_rules` rules whose
/// objective is within `cfg.epsilon` of the optimum.
///
/// Only bound pruning is used while listing: the support and symmetry
/// prunes keep some optimal list but may drop near-optimal ones.
pub fn enumerate_rashomon(
    ds: &Dataset,
    ants: &[Antecedent],
    cfg: &SearchConfig,
) -> Result<RashomonSet> {
    check_inputs(ds, ants, cfg)?;
    enumerate_in(ds, ants, &Universe::unconstrained(ants), cfg)
}

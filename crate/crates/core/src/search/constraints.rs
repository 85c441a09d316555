use std::collections::BTreeSet;
use std::time::Instant;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::data::{Antecedent, Dataset};
use crate::error::{Error, Result};
use crate::par;
use crate::rational::{fraction_string, ratio_to_f64};
use crate::search::certificate::Certificate;
use crate::search::config::SearchConfig;
use crate::search::engine::{certificate, check_inputs, run, Mode, Universe};
use crate::search::rashomon::{enumerate_in, RashomonSet};

/// Features a model may not use, and features it must use somewhere.
///
/// Names match either a binarized feature or a source column; a column
/// name covers every feature derived from it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureConstraints {
    #[serde(default)]
    pub forbid: Vec<String>,
    #[serde(default)]
    pub require: Vec<String>,
}

impl FeatureConstraints {
    pub fn is_empty(&self) -> bool {
        self.forbid.is_empty() && self.require.is_empty()
    }

    pub(crate) fn universe<'a>(&self, ds: &Dataset, ants: &'a [Antecedent]) -> Result<Universe<'a>> {
        let mut forbidden = BTreeSet::new();
        for name in &self.forbid {
            forbidden.extend(ds.resolve(name)?);
        }
        let mut required: Vec<(&str, Vec<usize>)> = Vec::new();
        for name in &self.require {
            let group = ds.resolve(name)?;
            if !required.iter().any(|(_, g)| *g == group) {
                required.push((name, group));
            }
        }
        if required.len() > 64 {
            return Err(Error::InvalidParameter(
                "at most 64 distinct required features are supported".into(),
            ));
        }
        let allowed: Vec<bool> = ants
            .iter()
            .map(|a| !a.conjunction.features().any(|f| forbidden.contains(&f)))
            .collect();
        let req_masks: Vec<u64> = ants
            .iter()
            .map(|a| {
                required.iter().enumerate().fold(0u64, |mask, (g, (_, group))| {
                    if group.iter().any(|&f| a.conjunction.uses_feature(f)) {
                        mask | 1 << g
                    } else {
                        mask
                    }
                })
            })
            .collect();
        for (g, (name, _)) in required.iter().enumerate() {
            let covered = req_masks.iter().zip(&allowed).any(|(m, &ok)| ok && m & (1 << g) != 0);
            if !covered {
                return Err(Error::Infeasible(format!(
                    "no allowed antecedent uses required feature {name:?}"
                )));
            }
        }
        let req_all = if required.is_empty() {
            0
        } else {
            u64::MAX >> (64 - required.len())
        };
        Ok(Universe {
            ants,
            allowed,
            req_masks,
            req_all,
        })
    }
}

/// A constrained optimum next to the unconstrained one.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstrainedCertificate {
    pub certificate: Certificate,
    pub constraints: FeatureConstraints,
    pub unconstrained: Certificate,
}

impl ConstrainedCertificate {
    /// Objective lost by imposing the constraints (never negative when both
    /// searches finished).
    pub fn gap_vs_unconstrained(&self) -> Ratio<i128> {
        self.certificate.objective.value() - self.unconstrained.objective.value()
    }

    pub fn to_json(&self, include_wall_time: bool) -> Value {
        let mut v = self.certificate.to_json(include_wall_time);
        let gap = self.gap_vs_unconstrained();
        v["constraints"] = json!(self.constraints);
        v["unconstrained"] = json!({
            "objective": self.unconstrained.objective,
            "optimal": self.unconstrained.optimal,
            "antecedents": self.unconstrained.antecedents,
            "gap": { "value": fraction_string(&gap), "decimal": ratio_to_f64(&gap) },
        });
        v
    }
}

/// The optimal list among those that avoid every forbidden feature and use
/// every required one, with its gap to the unconstrained optimum.
pub fn resolve_with_constraints(
    ds: &Dataset,
    ants: &[Antecedent],
    cfg: &SearchConfig,
    constraints: &FeatureConstraints,
) -> Result<ConstrainedCertificate> {
    check_inputs(ds, ants, cfg)?;
    let uni = constraints.universe(ds, ants)?;
    let started = Instant::now();
    let outcome = par::with_threads(cfg.threads, || run(ds, &uni, cfg, Mode::Optimize));
    let constrained = certificate(ds, ants, cfg, outcome, started)?;
    let unconstrained = if constraints.is_empty() {
        constrained.clone()
    } else {
        crate::search::solve(ds, ants, cfg)?
    };
    Ok(ConstrainedCertificate {
        certificate: constrained,
        constraints: constraints.clone(),
        unconstrained,
    })
}

/// [`enumerate_rashomon`](crate::search::enumerate_rashomon) restricted to
/// lists that satisfy `constraints`; the optimum is the constrained one.
pub fn enumerate_rashomon_constrained(
    ds: &Dataset,
    ants: &[Antecedent],
    cfg: &SearchConfig,
    constraints: &FeatureConstraints,
) -> Result<RashomonSet> {
    check_inputs(ds, ants, cfg)?;
    let uni = constraints.universe(ds, ants)?;
    enumerate_in(ds, ants, &uni, cfg)
}

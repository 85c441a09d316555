//! Recourse query documents and their rendering.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::data::FeatureInfo;
use crate::error::{Error, Result};
use crate::recourse::cost::CostModel;
use crate::recourse::search::{Counterfactual, RecourseQuery};
use crate::rules::LabelNames;

/// An instance given either as a 0/1 vector or as feature name -> 0/1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceDoc {
    Vector(Vec<u8>),
    Named(BTreeMap<String, u8>),
}

/// Query file format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryDoc {
    pub instance: InstanceDoc,
    /// Defaults to the opposite of the current prediction.
    #[serde(default)]
    pub target: Option<u8>,
    /// Feature (or source column) -> flip cost; unlisted features cost 1.
    #[serde(default)]
    pub costs: BTreeMap<String, f64>,
    #[serde(default)]
    pub immutable: Vec<String>,
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
}

fn bit(v: u8, what: &str) -> Result<bool> {
    match v {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(Error::InvalidParameter(format!("{what} must be 0 or 1, got {v}"))),
    }
}

fn resolve(features: &[FeatureInfo], name: &str) -> Result<Vec<usize>> {
    let found: Vec<usize> = features
        .iter()
        .enumerate()
        .filter(|(_, f)| f.name == name || f.column == name)
        .map(|(j, _)| j)
        .collect();
    if found.is_empty() {
        Err(Error::UnknownFeature(name.to_string()))
    } else {
        Ok(found)
    }
}

impl QueryDoc {
    pub fn instance(&self, features: &[FeatureInfo]) -> Result<Vec<bool>> {
        match &self.instance {
            InstanceDoc::Vector(v) => {
                if v.len() != features.len() {
                    return Err(Error::LengthMismatch {
                        expected: features.len(),
                        found: v.len(),
                    });
                }
                v.iter().map(|&b| bit(b, "instance value")).collect()
            }
            InstanceDoc::Named(map) => {
                let mut row = vec![None; features.len()];
                for (name, &v) in map {
                    let j = features
                        .iter()
                        .position(|f| f.name == *name)
                        .ok_or_else(|| Error::UnknownFeature(name.clone()))?;
                    row[j] = Some(bit(v, name)?);
                }
                row.iter()
                    .zip(features)
                    .map(|(v, f)| {
                        v.ok_or_else(|| Error::InvalidParameter(format!("instance is missing feature `{}`", f.name)))
                    })
                    .collect()
            }
        }
    }

    /// Builds the search query; `prediction` is the model's current output,
    /// used when no target is given.
    pub fn to_query(&self, features: &[FeatureInfo], groups: Vec<Vec<usize>>, prediction: bool) -> Result<RecourseQuery> {
        let instance = self.instance(features)?;
        let mut costs = CostModel::uniform(features.len());
        for (name, &c) in &self.costs {
            for j in resolve(features, name)? {
                if c.is_infinite() {
                    costs.freeze(j);
                } else {
                    costs.set_cost(j, c)?;
                }
            }
        }
        for name in &self.immutable {
            for j in resolve(features, name)? {
                costs.freeze(j);
            }
        }
        let target = match self.target {
            Some(t) => bit(t, "target")?,
            None => !prediction,
        };
        let mut query = RecourseQuery::new(instance, target, costs);
        if let Some(b) = self.budget {
            query.budget = b;
        }
        query.groups = groups;
        Ok(query)
    }
}

fn describe(features: &[FeatureInfo], feature: usize, value: bool) -> String {
    let name = &features[feature].name;
    if value {
        name.clone()
    } else {
        format!("not {name}")
    }
}

/// `If you had <flips>, the prediction would change to <target>.`
pub fn narrative(cf: &Counterfactual, features: &[FeatureInfo], labels: &LabelNames) -> String {
    let target = labels.get(cf.prediction);
    if cf.flips.is_empty() {
        return format!("The prediction is already {target}.");
    }
    let parts: Vec<String> = cf.flips.iter().map(|f| describe(features, f.feature, f.value)).collect();
    let list = match parts.as_slice() {
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
        [] => unreachable!(),
    };
    format!("If you had {list}, the prediction would change to {target}.")
}

/// Caveats for flips of features cut from numeric columns, one per
/// column: sibling features of that column may have to change too.
pub fn warnings(cf: &Counterfactual, features: &[FeatureInfo]) -> Vec<String> {
    let mut by_column: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for f in &cf.flips {
        let info = &features[f.feature];
        if info.is_derived() {
            by_column.entry(info.column.as_str()).or_default().push(info.name.as_str());
        }
    }
    by_column
        .into_iter()
        .map(|(column, names)| {
            let list = names.iter().map(|n| format!("`{n}`")).collect::<Vec<_>>().join(", ");
            format!("{list} derived from column `{column}`; other features of `{column}` may have to change with it")
        })
        .collect()
}

pub fn counterfactual_json(cf: &Counterfactual, features: &[FeatureInfo], labels: &LabelNames) -> Value {
    let flips: Vec<Value> = cf
        .flips
        .iter()
        .map(|f| {
            json!({
                "feature": features[f.feature].name,
                "index": f.feature,
                "from": u8::from(!f.value),
                "to": u8::from(f.value),
            })
        })
        .collect();
    json!({
        "flips": flips,
        "cost": cf.cost,
        "prediction": u8::from(cf.prediction),
        "narrative": narrative(cf, features, labels),
        "warnings": warnings(cf, features),
    })
}

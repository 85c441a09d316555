//! Versioned JSON documents for rule lists and DNF models.

use serde::{Deserialize, Serialize};

use crate::data::{Condition, Conjunction};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::rules::{DnfModel, ObjectiveValue, Rule, RuleList};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionDoc {
    pub feature: String,
    pub index: usize,
    pub value: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleDoc {
    pub conditions: Vec<ConditionDoc>,
    pub prediction: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleListDoc {
    pub schema_version: u32,
    pub kind: String,
    pub features: Vec<String>,
    pub rules: Vec<RuleDoc>,
    pub default: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DnfDoc {
    pub schema_version: u32,
    pub kind: String,
    pub features: Vec<String>,
    pub conjunctions: Vec<Vec<ConditionDoc>>,
}

pub const RULE_LIST_KIND: &str = "rule_list";
pub const DNF_KIND: &str = "dnf";

fn conditions_doc(c: &Conjunction, names: &[String]) -> Vec<ConditionDoc> {
    c.conditions()
        .iter()
        .map(|cd| ConditionDoc {
            feature: names[cd.feature].clone(),
            index: cd.feature,
            value: cd.value,
        })
        .collect()
}

fn conjunction_from_doc(docs: &[ConditionDoc], names: &[String]) -> Result<Conjunction> {
    let conds = docs
        .iter()
        .map(|d| match names.get(d.index) {
            Some(n) if *n == d.feature => Ok(Condition::new(d.index, d.value)),
            _ => Err(Error::UnknownFeature(format!("{} (index {})", d.feature, d.index))),
        })
        .collect::<Result<Vec<_>>>()?;
    Conjunction::new(conds)
        .ok_or_else(|| Error::InvalidParameter("conjunction repeats a feature".into()))
}

fn label_bit(v: u8) -> Result<bool> {
    match v {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(Error::InvalidParameter(format!("label must be 0 or 1, got {v}"))),
    }
}

impl RuleListDoc {
    pub fn new(
        model: &RuleList,
        features: &[String],
        lambda: Option<Rational>,
        objective: Option<&ObjectiveValue>,
    ) -> Self {
        RuleListDoc {
            schema_version: crate::SCHEMA_VERSION,
            kind: RULE_LIST_KIND.into(),
            features: features.to_vec(),
            rules: model
                .rules()
                .iter()
                .map(|r| RuleDoc {
                    conditions: conditions_doc(&r.antecedent, features),
                    prediction: r.prediction as u8,
                })
                .collect(),
            default: model.default_label() as u8,
            lambda,
            objective: objective.map(|o| serde_json::to_value(o).expect("objective serializes")),
        }
    }

    pub fn to_model(&self) -> Result<RuleList> {
        if self.kind != RULE_LIST_KIND {
            return Err(Error::InvalidParameter(format!("expected a rule list, got `{}`", self.kind)));
        }
        let rules = self
            .rules
            .iter()
            .map(|r| {
                Ok(Rule {
                    antecedent: conjunction_from_doc(&r.conditions, &self.features)?,
                    prediction: label_bit(r.prediction)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        RuleList::new(rules, label_bit(self.default)?, self.features.len())
    }
}

impl DnfDoc {
    pub fn new(model: &DnfModel, features: &[String]) -> Self {
        DnfDoc {
            schema_version: crate::SCHEMA_VERSION,
            kind: DNF_KIND.into(),
            features: features.to_vec(),
            conjunctions: model
                .conjunctions()
                .iter()
                .map(|c| conditions_doc(c, features))
                .collect(),
        }
    }

    pub fn to_model(&self) -> Result<DnfModel> {
        if self.kind != DNF_KIND {
            return Err(Error::InvalidParameter(format!("expected a dnf model, got `{}`", self.kind)));
        }
        let conjs = self
            .conjunctions
            .iter()
            .map(|c| conjunction_from_doc(c, &self.features))
            .collect::<Result<Vec<_>>>()?;
        DnfModel::new(conjs, self.features.len())
    }
}

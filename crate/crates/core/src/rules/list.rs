use crate::data::{Conjunction, Dataset};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub antecedent: Conjunction,
    pub prediction: bool,
}

/// Ordered if-then-else classifier over binary features.
///
/// The first rule whose antecedent holds decides the label; rows matched
/// by no rule get `default`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RuleList {
    rules: Vec<Rule>,
    default: bool,
    n_features: usize,
}

/// Display names for the two labels in rendered models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelNames {
    pub negative: String,
    pub positive: String,
}

impl Default for LabelNames {
    fn default() -> Self {
        LabelNames {
            negative: "0".into(),
            positive: "1".into(),
        }
    }
}

impl LabelNames {
    pub fn new(negative: impl Into<String>, positive: impl Into<String>) -> Self {
        LabelNames {
            negative: negative.into(),
            positive: positive.into(),
        }
    }

    pub fn get(&self, label: bool) -> &str {
        if label {
            &self.positive
        } else {
            &self.negative
        }
    }
}

impl RuleList {
    /// Fails if two rules share an antecedent or a condition names a feature
    /// outside `0..n_features`.
    pub fn new(rules: Vec<Rule>, default: bool, n_features: usize) -> Result<Self> {
        for (i, r) in rules.iter().enumerate() {
            if let Some(f) = r.antecedent.max_feature() {
                if f >= n_features {
                    return Err(Error::LengthMismatch {
                        expected: n_features,
                        found: f + 1,
                    });
                }
            }
            if rules[..i].iter().any(|q| q.antecedent == r.antecedent) {
                return Err(Error::InvalidParameter(format!(
                    "antecedent of rule {} repeats an earlier rule",
                    i + 1
                )));
            }
        }
        Ok(RuleList {
            rules,
            default,
            n_features,
        })
    }

    pub fn empty(default: bool, n_features: usize) -> Self {
        RuleList {
            rules: Vec::new(),
            default,
            n_features,
        }
    }

    /// Builds a list from antecedents alone, choosing each rule's label as
    /// the majority of the rows it captures and the default as the majority
    /// of the rows no rule captures (ties predict 0).
    pub fn with_majority_labels(antecedents: Vec<Conjunction>, ds: &Dataset) -> Result<Self> {
        let mut remaining = crate::BitVector::ones(ds.n());
        let mut rules = Vec::with_capacity(antecedents.len());
        for a in antecedents {
            let captured = a.support(ds).and(&remaining);
            let pos = captured.and_count(ds.label());
            let neg = captured.count_ones() - pos;
            rules.push(Rule {
                antecedent: a,
                prediction: super::majority(pos, neg),
            });
            remaining.and_not_assign(&captured);
        }
        let pos = remaining.and_count(ds.label());
        let neg = remaining.count_ones() - pos;
        RuleList::new(rules, super::majority(pos, neg), ds.p())
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn default_label(&self) -> bool {
        self.default
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// Number of rules; the default does not count.
    pub fn size(&self) -> usize {
        self.rules.len()
    }

    /// Index of the rule that fires on `row`, `None` for the default.
    pub fn firing_rule(&self, row: &[bool]) -> Result<Option<usize>> {
        self.check(row)?;
        Ok(self.rules.iter().position(|r| r.antecedent.matches(row)))
    }

    pub fn predict(&self, row: &[bool]) -> Result<bool> {
        Ok(match self.firing_rule(row)? {
            Some(i) => self.rules[i].prediction,
            None => self.default,
        })
    }

    fn check(&self, row: &[bool]) -> Result<()> {
        if row.len() != self.n_features {
            return Err(Error::LengthMismatch {
                expected: self.n_features,
                found: row.len(),
            });
        }
        Ok(())
    }

    /// Renders the model as
    ///
    /// ```text
    /// IF <antecedent> THEN predict <label>
    /// ELSE IF <antecedent> THEN predict <label>
    /// ELSE predict <label>
    /// ```
    pub fn render(&self, feature_names: &[&str], labels: &LabelNames) -> String {
        let mut out = String::new();
        for (i, r) in self.rules.iter().enumerate() {
            let kw = if i == 0 { "IF" } else { "ELSE IF" };
            out.push_str(&format!(
                "{kw} {} THEN predict {}\n",
                r.antecedent.render(feature_names),
                labels.get(r.prediction)
            ));
        }
        if self.rules.is_empty() {
            out.push_str(&format!("predict {}\n", labels.get(self.default)));
        } else {
            out.push_str(&format!("ELSE predict {}\n", labels.get(self.default)));
        }
        out
    }
}

//! Uniform-cost search over sets of feature flips.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Classifier;
use crate::recourse::cost::CostModel;

/// Setting `feature` to `value` (the opposite of its current value).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Flip {
    pub feature: usize,
    pub value: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterfactual {
    /// Sorted by feature.
    pub flips: Vec<Flip>,
    pub cost: f64,
    pub prediction: bool,
}

impl Counterfactual {
    pub fn features(&self) -> Vec<usize> {
        self.flips.iter().map(|f| f.feature).collect()
    }

    pub fn apply(&self, instance: &[bool]) -> Vec<bool> {
        let mut row = instance.to_vec();
        for f in &self.flips {
            row[f.feature] = f.value;
        }
        row
    }
}

/// Everything a recourse search needs besides the model.
#[derive(Clone, Debug, PartialEq)]
pub struct RecourseQuery {
    pub instance: Vec<bool>,
    pub target: bool,
    pub costs: CostModel,
    /// Most flips allowed.
    pub budget: usize,
    /// One-hot groups: a group holding one active feature must still hold
    /// exactly one afterwards, and no group may end with two.
    pub groups: Vec<Vec<usize>>,
    /// Frontier sets explored before giving up.
    pub max_states: usize,
}

impl RecourseQuery {
    pub fn new(instance: Vec<bool>, target: bool, costs: CostModel) -> Self {
        let budget = instance.len();
        RecourseQuery {
            instance,
            target,
            costs,
            budget,
            groups: Vec::new(),
            max_states: 5_000_000,
        }
    }

    fn validate(&self, model: &dyn Classifier) -> Result<()> {
        let p = self.instance.len();
        if p != model.n_features() {
            return Err(Error::LengthMismatch {
                expected: model.n_features(),
                found: p,
            });
        }
        if self.costs.p() != p {
            return Err(Error::LengthMismatch {
                expected: p,
                found: self.costs.p(),
            });
        }
        if self.budget > p {
            return Err(Error::InvalidParameter(format!(
                "flip budget {} exceeds the {p} features",
                self.budget
            )));
        }
        if let Some(&j) = self.groups.iter().flatten().find(|&&j| j >= p) {
            return Err(Error::LengthMismatch {
                expected: p,
                found: j + 1,
            });
        }
        Ok(())
    }

    fn consistent(&self, flipped: &[usize]) -> bool {
        self.groups.iter().all(|g| {
            let before = g.iter().filter(|&&j| self.instance[j]).count();
            let after = g
                .iter()
                .filter(|&&j| self.instance[j] != flipped.contains(&j))
                .count();
            after <= 1 && (before != 1 || after == 1)
        })
    }
}

struct State {
    cost: f64,
    features: Vec<usize>,
}

impl State {
    fn key(&self) -> (f64, usize, &[usize]) {
        (self.cost, self.features.len(), &self.features)
    }
}

impl PartialEq for State {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for State {}
impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.key(), other.key());
        a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(b.2))
    }
}

/// Calls `visit` on every flip set that reaches the target, cheapest first
/// (ties: fewer flips, then smaller feature indices), until it returns
/// false. Costs are summed in feature order.
fn search(
    model: &dyn Classifier,
    query: &RecourseQuery,
    mut visit: impl FnMut(Counterfactual) -> bool,
) -> Result<()> {
    query.validate(model)?;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(State {
        cost: 0.0,
        features: Vec::new(),
    }));
    let mut explored = 0usize;
    while let Some(Reverse(state)) = heap.pop() {
        explored += 1;
        if explored > query.max_states {
            return Err(Error::InvalidParameter(format!(
                "recourse search explored {} flip sets without finishing; lower the budget",
                query.max_states
            )));
        }
        if query.consistent(&state.features) {
            let mut row = query.instance.clone();
            for &j in &state.features {
                row[j] = !row[j];
            }
            let prediction = model.predict(&row)?;
            if prediction == query.target {
                let cf = Counterfactual {
                    flips: state
                        .features
                        .iter()
                        .map(|&j| Flip {
                            feature: j,
                            value: row[j],
                        })
                        .collect(),
                    cost: state.cost,
                    prediction,
                };
                if !visit(cf) {
                    return Ok(());
                }
            }
        }
        if state.features.len() >= query.budget {
            continue;
        }
        let start = state.features.last().map_or(0, |&j| j + 1);
        for j in start..query.instance.len() {
            if let Some(c) = query.costs.cost(j) {
                let mut features = state.features.clone();
                features.push(j);
                heap.push(Reverse(State {
                    cost: state.cost + c,
                    features,
                }));
            }
        }
    }
    Ok(())
}

/// The cheapest set of at most `query.budget` flips that makes `model`
/// predict `query.target`, or `None` if there is none. An instance already
/// at the target gets the empty set.
pub fn min_cost_counterfactual(model: &dyn Classifier, query: &RecourseQuery) -> Result<Option<Counterfactual>> {
    let mut found = None;
    search(model, query, |cf| {
        found = Some(cf);
        false
    })?;
    Ok(found)
}

/// The `k` cheapest distinct flip sets reaching the target, in
/// nondecreasing cost order. With `irredundant`, sets that contain a
/// cheaper successful set are skipped.
pub fn enumerate_counterfactuals(
    model: &dyn Classifier,
    query: &RecourseQuery,
    k: usize,
    irredundant: bool,
) -> Result<Vec<Counterfactual>> {
    let mut out: Vec<Counterfactual> = Vec::new();
    let mut successes: Vec<Vec<usize>> = Vec::new();
    if k == 0 {
        return Ok(out);
    }
    search(model, query, |cf| {
        let features = cf.features();
        if irredundant {
            // every proper subset sorts earlier, so it was seen already
            let redundant = successes.iter().any(|s| s.iter().all(|j| features.contains(j)));
            successes.push(features);
            if redundant {
                return true;
            }
        }
        out.push(cf);
        out.len() < k
    })?;
    Ok(out)
}

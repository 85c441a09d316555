use serde::Serialize;

use crate::data::{Condition, Conjunction};
use crate::error::Result;
use crate::rules::DnfModel;

/// Why a DNF model predicted what it did for one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DnfExplanation {
    pub prediction: bool,
    /// Index and conjunction of the smallest satisfied term, when positive.
    pub satisfied: Option<(usize, Conjunction)>,
    /// For a negative prediction, the failed conditions of every term.
    pub unmet: Vec<(usize, Vec<Condition>)>,
}

/// For a positive prediction, the satisfied conjunction with the fewest
/// conditions (ties: lexicographically smallest); for a negative one, what
/// each conjunction is missing.
pub fn local_explanation_dnf(model: &DnfModel, instance: &[bool]) -> Result<DnfExplanation> {
    let prediction = model.predict(instance)?;
    let terms = model.conjunctions();
    let satisfied = terms
        .iter()
        .enumerate()
        .filter(|(_, c)| c.matches(instance))
        .min_by(|a, b| (a.1.cardinality(), a.1, a.0).cmp(&(b.1.cardinality(), b.1, b.0)))
        .map(|(i, c)| (i, c.clone()));
    let unmet = if prediction {
        Vec::new()
    } else {
        terms.iter().enumerate().map(|(i, c)| (i, c.unmet(instance))).collect()
    };
    Ok(DnfExplanation {
        prediction,
        satisfied,
        unmet,
    })
}

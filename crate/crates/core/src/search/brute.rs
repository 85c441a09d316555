//! Exhaustive rule-list enumeration, the reference the search is checked
//! against. Only usable on tiny universes: the number of lists grows like
//! `m^max_rules`.

use num_rational::Ratio;

use crate::data::{Antecedent, Dataset};
use crate::error::Result;
use crate::rational::Rational;
use crate::rules::{objective_naive, ObjectiveValue, RuleList};

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluated {
    pub antecedents: Vec<usize>,
    pub model: RuleList,
    pub objective: ObjectiveValue,
}

/// Every sequence of distinct indices from `universe` with at most
/// `max_rules` entries, shortest first, then lexicographic.
pub fn all_lists(universe: &[usize], max_rules: usize) -> Vec<Vec<usize>> {
    let mut sorted = universe.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_rules.min(sorted.len()) {
        let mut next = Vec::new();
        for prefix in &layer {
            for &r in &sorted {
                if !prefix.contains(&r) {
                    let mut seq = prefix.clone();
                    seq.push(r);
                    next.push(seq);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Objective of every list over the antecedents `keep` accepts, scored
/// row by row with majority labels.
pub fn evaluate_where(
    ds: &Dataset,
    ants: &[Antecedent],
    lambda: Rational,
    max_rules: usize,
    keep: impl Fn(&[usize]) -> bool,
) -> Result<Vec<Evaluated>> {
    let universe: Vec<usize> = (0..ants.len()).collect();
    let mut out = Vec::new();
    for seq in all_lists(&universe, max_rules) {
        if !keep(&seq) {
            continue;
        }
        let model = RuleList::with_majority_labels(
            seq.iter().map(|&r| ants[r].conjunction.clone()).collect(),
            ds,
        )?;
        let objective = objective_naive(&model, ds, lambda);
        out.push(Evaluated {
            antecedents: seq,
            model,
            objective,
        });
    }
    Ok(out)
}

pub fn evaluate_all(
    ds: &Dataset,
    ants: &[Antecedent],
    lambda: Rational,
    max_rules: usize,
) -> Result<Vec<Evaluated>> {
    evaluate_where(ds, ants, lambda, max_rules, |_| true)
}

/// The first list with the smallest objective, in the order of
/// [`all_lists`].
pub fn best(lists: &[Evaluated]) -> Option<&Evaluated> {
    lists.iter().fold(None, |acc: Option<&Evaluated>, e| match acc {
        Some(b) if b.objective.value() <= e.objective.value() => Some(b),
        _ => Some(e),
    })
}

/// Lists whose objective is within `epsilon` of the best.
pub fn within(lists: &[Evaluated], epsilon: Rational) -> Vec<&Evaluated> {
    let Some(b) = best(lists) else {
        return Vec::new();
    };
    let limit = b.objective.value() + epsilon.wide();
    lists.iter().filter(|e| e.objective.value() <= limit).collect()
}

pub fn optimum(
    ds: &Dataset,
    ants: &[Antecedent],
    lambda: Rational,
    max_rules: usize,
) -> Result<(Vec<usize>, Ratio<i128>)> {
    let lists = evaluate_all(ds, ants, lambda, max_rules)?;
    let b = best(&lists).expect("the empty list is always present");
    Ok((b.antecedents.clone(), b.objective.value()))
}

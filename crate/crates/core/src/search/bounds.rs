//! Lower bounds and candidate pruning for rule-list prefixes.
//!
//! Objectives are compared in integer units of `1 / (n * lambda_den)`: an
//! error costs `lambda_den` units and a rule costs `lambda_num * n` units.

use std::collections::HashMap;

use num_rational::Ratio;

use crate::bitvec::BitVector;
use crate::data::{Antecedent, Dataset};
use crate::rational::Rational;
use crate::rules::majority;

/// Integer scaling of the objective for a fixed `n` and `lambda`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Scale {
    pub n: u64,
    pub error_cost: u128,
    pub rule_cost: u128,
}

impl Scale {
    pub fn new(n: usize, lambda: Rational) -> Self {
        assert!(!lambda.is_negative(), "lambda must be non-negative");
        Scale {
            n: n as u64,
            error_cost: lambda.denom() as u128,
            rule_cost: lambda.numer() as u128 * n as u128,
        }
    }

    #[inline]
    pub fn units(&self, errors: u64, rules: usize) -> u128 {
        errors as u128 * self.error_cost + rules as u128 * self.rule_cost
    }

    pub fn to_ratio(&self, units: u128) -> Ratio<i128> {
        Ratio::new(units as i128, self.n as i128 * self.error_cost as i128)
    }

    /// `floor(eps * n * lambda_den)`; an objective within `eps` of the
    /// optimum is within this many units.
    pub fn epsilon_units(&self, eps: Rational) -> u128 {
        assert!(!eps.is_negative(), "epsilon must be non-negative");
        let num = eps.numer() as u128 * self.n as u128 * self.error_cost;
        num / eps.denom() as u128
    }

    /// True when a rule capturing `count` new rows cannot pay its penalty,
    /// i.e. `count < lambda * n`.
    #[inline]
    pub fn below_support(&self, count: usize) -> bool {
        (count as u128) * self.error_cost < self.rule_cost
    }
}

/// Rows that any model must misclassify because they share every feature
/// value with rows of the opposite, majority label.
///
/// Each group of identical rows contributes its minority-label rows; ties
/// mark the positive rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalentPoints {
    pub minority: BitVector,
}

impl EquivalentPoints {
    pub fn from_columns<'a>(
        columns: impl IntoIterator<Item = &'a BitVector>,
        label: &BitVector,
    ) -> Self {
        let n = label.len();
        let cols: Vec<&BitVector> = columns.into_iter().collect();
        let words = cols.len().div_ceil(64).max(1);
        let mut groups: HashMap<Vec<u64>, (Vec<usize>, Vec<usize>)> = HashMap::new();
        for i in 0..n {
            let mut sig = vec![0u64; words];
            for (j, c) in cols.iter().enumerate() {
                if c.get(i) {
                    sig[j / 64] |= 1 << (j % 64);
                }
            }
            let entry = groups.entry(sig).or_default();
            if label.get(i) {
                entry.0.push(i);
            } else {
                entry.1.push(i);
            }
        }
        let mut minority = BitVector::zeros(n);
        for (pos, neg) in groups.values() {
            let rows = if majority(pos.len(), neg.len()) { neg } else { pos };
            if pos.is_empty() || neg.is_empty() {
                continue;
            }
            for &i in rows {
                minority.set(i, true);
            }
        }
        EquivalentPoints { minority }
    }

    pub fn from_dataset(ds: &Dataset) -> Self {
        Self::from_columns(ds.columns(), ds.label())
    }

    /// Unavoidable errors among rows not in `captured`.
    #[inline]
    pub fn uncaptured_mass(&self, captured: &BitVector) -> usize {
        self.minority.and_not_count(captured)
    }
}

/// A rule-list prefix: antecedent indices in order, with majority labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefix {
    pub rules: Vec<usize>,
    pub captured: BitVector,
    /// Misclassified rows among `captured`.
    pub errors: u64,
    /// Positives among `captured`.
    pub captured_positives: u64,
}

impl Prefix {
    pub fn empty(n: usize) -> Self {
        Prefix {
            rules: Vec::new(),
            captured: BitVector::zeros(n),
            errors: 0,
            captured_positives: 0,
        }
    }

    pub fn new(rules: &[usize], ants: &[Antecedent], ds: &Dataset) -> Self {
        let mut p = Prefix::empty(ds.n());
        for &r in rules {
            p = p.extend(r, ants, ds.label());
        }
        p
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn extend(&self, rule: usize, ants: &[Antecedent], label: &BitVector) -> Prefix {
        let new = ants[rule].support.and_not(&self.captured);
        let count = new.count_ones();
        let pos = new.and_count(label);
        let mut rules = self.rules.clone();
        rules.push(rule);
        Prefix {
            rules,
            captured: self.captured.or(&new),
            errors: self.errors + pos.min(count - pos) as u64,
            captured_positives: self.captured_positives + pos as u64,
        }
    }

    /// Errors of the default rule on uncaptured rows.
    pub fn default_errors(&self, label: &BitVector) -> u64 {
        let n = label.len() as u64;
        let rest = n - self.captured.count_ones() as u64;
        let pos = label.count_ones() as u64 - self.captured_positives;
        pos.min(rest - pos)
    }
}

/// Individual lower bounds for a prefix, as exact fractions.
///
/// `hierarchical` and `equivalent_points` bound every completion including
/// the prefix itself; `lookahead` and `combined_extension` bound only
/// strict extensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundBreakdown {
    pub hierarchical: u128,
    pub lookahead: u128,
    pub equivalent_points: u128,
    pub combined_extension: u128,
}

impl BoundBreakdown {
    pub fn compute(prefix: &Prefix, eq: &EquivalentPoints, scale: &Scale) -> Self {
        let hierarchical = scale.units(prefix.errors, prefix.len());
        let eq_mass = eq.uncaptured_mass(&prefix.captured) as u128 * scale.error_cost;
        BoundBreakdown {
            hierarchical,
            lookahead: hierarchical + scale.rule_cost,
            equivalent_points: hierarchical + eq_mass,
            combined_extension: hierarchical + eq_mass + scale.rule_cost,
        }
    }
}

/// Lower bound on the objective of every rule list that starts with
/// `prefix` (the prefix itself included): the larger of the hierarchical
/// and equivalent-points bounds. Equivalence classes are rows identical on
/// every dataset feature.
pub fn lower_bound(prefix: &Prefix, ds: &Dataset, lambda: Rational) -> Ratio<i128> {
    let scale = Scale::new(ds.n(), lambda);
    let eq = EquivalentPoints::from_dataset(ds);
    let b = BoundBreakdown::compute(prefix, &eq, &scale);
    scale.to_ratio(b.hierarchical.max(b.equivalent_points))
}

/// Candidate next rules after `prefix` that can still appear in an optimal
/// list: not already used, capturing at least one new row, and capturing at
/// least `lambda * n` new rows.
pub fn prune_rules(
    ants: &[Antecedent],
    prefix: &Prefix,
    lambda: Rational,
    ds: &Dataset,
) -> Vec<usize> {
    let scale = Scale::new(ds.n(), lambda);
    (0..ants.len())
        .filter(|r| !prefix.rules.contains(r))
        .filter(|&r| {
            let c = ants[r].support.and_not_count(&prefix.captured);
            c > 0 && !scale.below_support(c)
        })
        .collect()
}

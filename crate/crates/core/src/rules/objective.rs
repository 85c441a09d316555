use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bitvec::BitVector;
use crate::data::Dataset;
use crate::rational::{fraction_string, ratio_to_f64, Rational};
use crate::rules::RuleList;

/// Majority label with ties going to 0.
#[inline]
pub fn majority(positives: usize, negatives: usize) -> bool {
    positives > negatives
}

/// `errors / n + lambda * size`, held exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ObjectiveValue {
    pub errors: u64,
    pub size: u64,
    pub n: u64,
    pub lambda: Rational,
}

impl ObjectiveValue {
    pub fn new(errors: u64, size: u64, n: u64, lambda: Rational) -> Self {
        assert!(n > 0, "objective needs at least one row");
        assert!(errors <= n, "more errors than rows");
        ObjectiveValue {
            errors,
            size,
            n,
            lambda,
        }
    }

    pub fn value(&self) -> Ratio<i128> {
        Ratio::new(self.errors as i128, self.n as i128) + self.lambda.wide() * (self.size as i128)
    }

    pub fn error_rate(&self) -> Ratio<i128> {
        Ratio::new(self.errors as i128, self.n as i128)
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.value())
    }
}

impl PartialOrd for ObjectiveValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.value().cmp(&other.value()))
    }
}

impl fmt::Display for ObjectiveValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (= {}/{} + {} x {})",
            fraction_string(&self.value()),
            self.errors,
            self.n,
            self.lambda,
            self.size
        )
    }
}

impl Serialize for ObjectiveValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ObjectiveValue", 6)?;
        st.serialize_field("value", &fraction_string(&self.value()))?;
        st.serialize_field("decimal", &self.to_f64())?;
        st.serialize_field("errors", &self.errors)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("size", &self.size)?;
        st.serialize_field("lambda", &self.lambda)?;
        st.end()
    }
}

/// Scores `model` on `ds` with bit-vector capture sets.
pub fn objective(model: &RuleList, ds: &Dataset, lambda: Rational) -> ObjectiveValue {
    let label = ds.label();
    let mut remaining = BitVector::ones(ds.n());
    let mut errors = 0usize;
    for rule in model.rules() {
        let captured = rule.antecedent.support(ds).and(&remaining);
        errors += if rule.prediction {
            captured.and_not_count(label)
        } else {
            captured.and_count(label)
        };
        remaining.and_not_assign(&captured);
    }
    errors += if model.default_label() {
        remaining.and_not_count(label)
    } else {
        remaining.and_count(label)
    };
    ObjectiveValue::new(errors as u64, model.size() as u64, ds.n() as u64, lambda)
}

/// Row-by-row version of [`objective`].
pub fn objective_naive(model: &RuleList, ds: &Dataset, lambda: Rational) -> ObjectiveValue {
    let labels = ds.labels();
    let errors = (0..ds.n())
        .filter(|&i| model.predict(&ds.row(i)).expect("model matches dataset") != labels[i])
        .count();
    ObjectiveValue::new(errors as u64, model.size() as u64, ds.n() as u64, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Condition, Conjunction};
    use crate::rules::Rule;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn default_only_error_rate() {
        let labels: Vec<bool> = (0..10).map(|i| i < 3).collect();
        let rows = vec![vec![false]; 10];
        let ds = Dataset::from_rows(&["x"], &rows, &labels).unwrap();
        for lambda in [r(0, 1), r(1, 100), r(7, 3)] {
            let v = objective(&RuleList::empty(false, 1), &ds, lambda);
            assert_eq!(v.value(), Ratio::new(3, 10));
            assert_eq!(v.errors, 3);
        }
    }

    #[test]
    fn one_percent_per_rule() {
        let v = ObjectiveValue::new(0, 3, 1000, r(1, 100));
        assert_eq!(v.value(), Ratio::new(3, 100));
        // a rule pays for itself only by removing at least 1% error
        let with = ObjectiveValue::new(10, 1, 1000, r(1, 100));
        let without = ObjectiveValue::new(20, 0, 1000, r(1, 100));
        assert_eq!(with.value(), without.value());
        assert!(ObjectiveValue::new(11, 1, 1000, r(1, 100)) > without);
    }

    #[test]
    fn six_row_toy_matches_manual_count() {
        // x0: 1 1 1 0 0 0 ; y: 1 1 0 0 0 1
        let rows: Vec<Vec<bool>> = [1, 1, 1, 0, 0, 0].iter().map(|&b| vec![b == 1]).collect();
        let labels = [true, true, false, false, false, true];
        let ds = Dataset::from_rows(&["x0"], &rows, &labels).unwrap();
        let model = RuleList::new(
            vec![Rule { antecedent: Conjunction::single(0, true), prediction: true }],
            false,
            1,
        )
        .unwrap();
        let v = objective(&model, &ds, r(1, 10));
        // row 2 (x0=1, y=0) and row 5 (x0=0, y=1) are wrong
        assert_eq!(v.errors, 2);
        assert_eq!(v.value(), Ratio::new(2, 6) + Ratio::new(1, 10));
        assert_eq!(v, objective_naive(&model, &ds, r(1, 10)));
    }

    #[test]
    fn serializes_exact_and_decimal() {
        let v = ObjectiveValue::new(1, 2, 4, r(1, 100));
        let j = serde_json::to_value(v).unwrap();
        assert_eq!(j["value"], "27/100");
        assert_eq!(j["lambda"], "1/100");
        assert!((j["decimal"].as_f64().unwrap() - 0.27).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn bitvector_objective_matches_rows(
            rows in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 3), 1..70),
            labels_seed in any::<u64>(),
            specs in proptest::collection::vec((0usize..3, any::<bool>(), 0usize..3, any::<bool>(), any::<bool>()), 0..4),
            default in any::<bool>(),
        ) {
            let labels: Vec<bool> = (0..rows.len()).map(|i| (labels_seed >> (i % 64)) & 1 == 1).collect();
            let ds = Dataset::from_rows(&["a", "b", "c"], &rows, &labels).unwrap();
            let mut rules: Vec<Rule> = Vec::new();
            for (f, v, g, w, pred) in specs {
                let mut conds = vec![Condition::new(f, v)];
                if g != f { conds.push(Condition::new(g, w)); }
                let a = Conjunction::new(conds).unwrap();
                if rules.iter().all(|x| x.antecedent != a) {
                    rules.push(Rule { antecedent: a, prediction: pred });
                }
            }
            let model = RuleList::new(rules, default, 3).unwrap();
            let lambda = r(1, 50);
            let v = objective(&model, &ds, lambda);
            prop_assert_eq!(v, objective_naive(&model, &ds, lambda));
            prop_assert!(v.errors <= ds.n() as u64);
        }
    }
}

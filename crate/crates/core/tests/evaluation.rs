mod common;

use std::collections::BTreeMap;
use std::path::PathBuf;

use common::random_dataset;
use lucid_core::data::{Conjunction, Dataset};
use lucid_core::eval::{
    compare, confusion, confusion_from_predictions, disagreement, split, split_dataset, Candidate,
    PredictionFile, DEFAULT_MARGIN,
};
use lucid_core::model::{AnyModel, Classifier};
use lucid_core::rules::{Rule, RuleList};
use lucid_core::Rational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn labelled(n: usize, positives: usize) -> Dataset {
    let rows: Vec<Vec<bool>> = (0..n).map(|i| vec![i % 2 == 0, i % 3 == 0]).collect();
    let labels: Vec<bool> = (0..n).map(|i| i < positives).collect();
    Dataset::from_rows(&["even", "third"], &rows, &labels).unwrap()
}

fn r(num: i64, den: i64) -> Rational {
    Rational::new(num, den).unwrap()
}

#[test]
fn stratified_half_split() {
    let ds = labelled(100, 30);
    let s = split(&ds, 0.5, 7).unwrap();
    let test_pos = s.test.iter().filter(|&&i| ds.label().get(i)).count();
    assert!((14..=16).contains(&test_pos), "{test_pos}");
    assert_eq!(s, split(&ds, 0.5, 7).unwrap());
    assert_ne!(s, split(&ds, 0.5, 8).unwrap());
    let mut all: Vec<usize> = s.train.iter().chain(&s.test).copied().collect();
    all.sort_unstable();
    assert_eq!(all, (0..100).collect::<Vec<_>>());
}

#[test]
fn split_preserves_row_multiset() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let ds = random_dataset(&mut rng, 57, 4);
    let (train, test) = split_dataset(&ds, 0.3, 1).unwrap();
    let count = |rows: Vec<(Vec<bool>, bool)>| {
        let mut m = BTreeMap::new();
        for row in rows {
            *m.entry(row).or_insert(0) += 1;
        }
        m
    };
    let rows_of = |d: &Dataset| (0..d.n()).map(|i| (d.row(i), d.label().get(i))).collect::<Vec<_>>();
    let mut both = rows_of(&train);
    both.extend(rows_of(&test));
    assert_eq!(count(both), count(rows_of(&ds)));
}

#[test]
fn split_errors() {
    let ds = labelled(10, 1);
    assert!(split(&ds, 0.5, 0).is_err());
    let ds = labelled(10, 5);
    assert!(split(&ds, 0.0, 0).is_err());
    assert!(split(&ds, 1.0, 0).is_err());
}

fn even_list() -> RuleList {
    RuleList::new(
        vec![Rule {
            antecedent: Conjunction::single(0, true),
            prediction: true,
        }],
        false,
        2,
    )
    .unwrap()
}

#[test]
fn toy_confusion_matches_manual_tally() {
    // rows 0..8, labels: first 4 positive; model: positive iff even
    let ds = labelled(8, 4);
    let c = confusion(&even_list(), &ds).unwrap();
    // even rows 0,2 positive (TP), 4,6 negative (FP); odd 1,3 positive (FN), 5,7 (TN)
    assert_eq!((c.tp, c.fp, c.tn, c.fn_), (2, 2, 2, 2));
    assert_eq!(c.accuracy(), r(1, 2));
    assert_eq!(c.tpr(), r(1, 2));

    let truth = confusion_from_predictions(&ds.labels(), &ds.labels()).unwrap();
    assert_eq!((truth.tpr(), truth.fpr()), (Rational::from_integer(1), Rational::zero()));
    let zero = confusion(&RuleList::empty(false, 2), &ds).unwrap();
    assert_eq!((zero.tpr(), zero.fpr()), (Rational::zero(), Rational::zero()));
}

#[test]
fn disagreement_by_rows() {
    let ds = labelled(10, 5);
    let a = even_list();
    let b = RuleList::new(
        vec![Rule {
            antecedent: Conjunction::single(1, true),
            prediction: true,
        }],
        false,
        2,
    )
    .unwrap();
    let pa = a.predict_dataset(&ds).unwrap();
    let pb = b.predict_dataset(&ds).unwrap();
    let differ = pa.iter().zip(&pb).filter(|(x, y)| x != y).count() as i64;
    assert_eq!(disagreement(&a, &b, &ds).unwrap(), r(differ, 10));
    assert_eq!(disagreement(&a, &a, &ds).unwrap(), Rational::zero());
    let not_a = RuleList::new(
        vec![Rule {
            antecedent: Conjunction::single(0, true),
            prediction: false,
        }],
        true,
        2,
    )
    .unwrap();
    assert_eq!(disagreement(&a, &not_a, &ds).unwrap(), Rational::from_integer(1));
}

#[test]
fn same_model_twice_has_zero_deltas() {
    let mut rng = ChaCha8Rng::seed_from_u64(72);
    let ds = random_dataset(&mut rng, 80, 3);
    let s = split(&ds, 0.25, 3).unwrap();
    let m = AnyModel::RuleList(even_list_for(3));
    let cands = vec![Candidate::model("a", m.clone(), true), Candidate::model("b", m, false)];
    let report = compare(&cands, &ds, &s, DEFAULT_MARGIN).unwrap();
    assert!(report.rows.iter().all(|row| row.test_delta.is_zero()));
    assert_eq!(report.gap, Some(Rational::zero()));
    assert!(!report.flagged);
    assert!(report.disagreements[0].fraction.is_zero());
}

fn even_list_for(p: usize) -> RuleList {
    RuleList::new(
        vec![Rule {
            antecedent: Conjunction::single(0, true),
            prediction: true,
        }],
        false,
        p,
    )
    .unwrap()
}

#[test]
fn deltas_recomputed_from_raw_predictions() {
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    let ds = random_dataset(&mut rng, 120, 4);
    let s = split(&ds, 0.3, 11).unwrap();
    let labels = ds.labels();
    // an external "model" that is right on every row but a few
    let predictions: BTreeMap<usize, bool> = (0..ds.n()).map(|i| (i, if i % 9 == 0 { !labels[i] } else { labels[i] })).collect();
    let file = PredictionFile {
        path: PathBuf::from("oracle.csv"),
        predictions,
    };
    let cands = vec![
        Candidate::model("list", AnyModel::RuleList(even_list_for(4)), true),
        Candidate::model("empty", AnyModel::RuleList(RuleList::empty(true, 4)), true),
        Candidate::predictions("external", file.clone()),
    ];
    let report = compare(&cands, &ds, &s, DEFAULT_MARGIN).unwrap();
    let test_labels: Vec<bool> = s.test.iter().map(|&i| labels[i]).collect();
    let acc = |p: &[bool]| {
        let right = p.iter().zip(&test_labels).filter(|(a, b)| a == b).count() as i64;
        r(right, test_labels.len() as i64)
    };
    let raw: Vec<Vec<bool>> = vec![
        s.test.iter().map(|&i| ds.row(i)[0]).collect(),
        vec![true; s.test.len()],
        s.test.iter().map(|&i| file.predictions[&i]).collect(),
    ];
    let accs: Vec<Rational> = raw.iter().map(|p| acc(p)).collect();
    let best_interp = accs[0].max(accs[1]);
    for (row, a) in report.rows.iter().zip(&accs) {
        assert_eq!(row.test.accuracy(), *a);
        assert_eq!(row.test_delta, Rational::from(a.ratio() - best_interp.ratio()));
    }
    assert_eq!(report.gap, Some(Rational::from(accs[2].ratio() - best_interp.ratio())));
    assert!(report.flagged);
    assert!(report.render().contains("FLAG"));
    assert_eq!(report.to_json()["flagged"], true);

    let partial = PredictionFile {
        path: PathBuf::from("partial.csv"),
        predictions: s.test.iter().map(|&i| (i, true)).collect(),
    };
    let cands = vec![
        Candidate::model("list", AnyModel::RuleList(even_list_for(4)), true),
        Candidate::predictions("partial", partial),
    ];
    let report = compare(&cands, &ds, &s, DEFAULT_MARGIN).unwrap();
    assert!(report.rows[1].train.is_none());
}

#[test]
fn compare_needs_two_and_full_test_coverage() {
    let ds = labelled(20, 10);
    let s = split(&ds, 0.5, 0).unwrap();
    let one = vec![Candidate::model("a", AnyModel::RuleList(even_list()), true)];
    assert!(compare(&one, &ds, &s, DEFAULT_MARGIN).is_err());
    let empty = PredictionFile {
        path: PathBuf::from("none.csv"),
        predictions: BTreeMap::new(),
    };
    let cands = vec![one[0].clone(), Candidate::predictions("x", empty)];
    assert!(compare(&cands, &ds, &s, DEFAULT_MARGIN).is_err());
}

proptest! {
    #[test]
    fn counts_and_rates_are_consistent(pairs in proptest::collection::vec((any::<bool>(), any::<bool>()), 1..200)) {
        let (p, y): (Vec<bool>, Vec<bool>) = pairs.into_iter().unzip();
        let c = confusion_from_predictions(&p, &y).unwrap();
        prop_assert_eq!(c.total() as usize, p.len());
        let one = Rational::from_integer(1);
        prop_assert!(c.accuracy() >= Rational::zero() && c.accuracy() <= one);
        if c.positives() > 0 {
            prop_assert_eq!(Rational::from(c.tpr().ratio() + c.fnr().ratio()), one);
        }
        if c.negatives() > 0 {
            prop_assert_eq!(Rational::from(c.fpr().ratio() + c.tnr().ratio()), one);
        }
    }

    #[test]
    fn disagreement_is_symmetric(pairs in proptest::collection::vec((any::<bool>(), any::<bool>()), 1..200)) {
        let (a, b): (Vec<bool>, Vec<bool>) = pairs.into_iter().unzip();
        use lucid_core::eval::disagreement_from_predictions as d;
        prop_assert_eq!(d(&a, &b).unwrap(), d(&b, &a).unwrap());
        prop_assert!(d(&a, &a).unwrap().is_zero());
    }
}

mod common;

use common::{brute_force_recourse, random_recourse_case};
use lucid_core::data::{Conjunction, Condition};
use lucid_core::model::Classifier;
use lucid_core::recourse::{
    enumerate_counterfactuals, local_explanation_dnf, min_cost_counterfactual, CostModel, RecourseQuery,
};
use lucid_core::rules::DnfModel;
use lucid_core::scoring::ScoringSystem;
use lucid_core::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn min_cost_matches_subset_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut feasible = 0;
    for _ in 0..150 {
        let p = rng.gen_range(1..=15);
        let case = random_recourse_case(&mut rng, p);
        let oracle = brute_force_recourse(&case.model, &case.query);
        let found = min_cost_counterfactual(&case.model, &case.query).unwrap();
        match (oracle.first(), found) {
            (None, None) => {}
            (Some((cost, features)), Some(cf)) => {
                feasible += 1;
                assert_eq!(cf.cost, *cost);
                assert_eq!(&cf.features(), features);
                let row = cf.apply(&case.query.instance);
                assert_eq!(case.model.predict(&row).unwrap(), case.query.target);
                assert!(cf.features().iter().all(|&j| !case.query.costs.is_immutable(j)));
            }
            (a, b) => panic!("oracle {a:?} vs search {b:?}"),
        }
    }
    assert!(feasible > 50, "too few feasible cases: {feasible}");
}

#[test]
fn enumeration_matches_sorted_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    for _ in 0..80 {
        let p = rng.gen_range(1..=12);
        let case = random_recourse_case(&mut rng, p);
        let k = rng.gen_range(1..=20);
        let oracle = brute_force_recourse(&case.model, &case.query);
        let listed = enumerate_counterfactuals(&case.model, &case.query, k, false).unwrap();
        assert_eq!(listed.len(), k.min(oracle.len()));
        for (cf, (cost, features)) in listed.iter().zip(&oracle) {
            assert_eq!(cf.cost, *cost);
            assert_eq!(&cf.features(), features);
        }
        let first = enumerate_counterfactuals(&case.model, &case.query, 1, false).unwrap();
        assert_eq!(first.first(), min_cost_counterfactual(&case.model, &case.query).unwrap().as_ref());
    }
}

#[test]
fn irredundant_enumeration_skips_supersets() {
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    for _ in 0..60 {
        let p = rng.gen_range(1..=10);
        let case = random_recourse_case(&mut rng, p);
        let oracle = brute_force_recourse(&case.model, &case.query);
        let minimal: Vec<&Vec<usize>> = oracle
            .iter()
            .map(|(_, f)| f)
            .filter(|f| !oracle.iter().any(|(_, g)| g.len() < f.len() && g.iter().all(|j| f.contains(j))))
            .collect();
        let listed = enumerate_counterfactuals(&case.model, &case.query, usize::MAX, true).unwrap();
        let got: Vec<Vec<usize>> = listed.iter().map(|cf| cf.features()).collect();
        assert_eq!(got.iter().collect::<Vec<_>>(), minimal);
    }
}

#[test]
fn already_at_target_gives_empty_flips() {
    let model = ScoringSystem::new(1, vec![2, -1], vec!["a".into(), "b".into()], Rational::zero()).unwrap();
    let query = RecourseQuery::new(vec![false, false], true, CostModel::uniform(2));
    let cf = min_cost_counterfactual(&model, &query).unwrap().unwrap();
    assert!(cf.flips.is_empty());
    assert_eq!(cf.cost, 0.0);
}

#[test]
fn single_dominant_flip() {
    // score = -3 + 5*a + 1*b + 2*c; flipping `a` alone crosses the threshold
    let names = vec!["a".into(), "b".into(), "c".into()];
    let model = ScoringSystem::new(-3, vec![5, 1, 2], names, Rational::zero()).unwrap();
    let query = RecourseQuery::new(vec![false; 3], true, CostModel::uniform(3));
    let cf = min_cost_counterfactual(&model, &query).unwrap().unwrap();
    assert_eq!(cf.features(), vec![0]);
    assert!(cf.flips[0].value);
}

#[test]
fn disjoint_single_flips_in_cost_order() {
    let model = DnfModel::new(vec![Conjunction::single(0, true), Conjunction::single(1, true)], 2).unwrap();
    let query = RecourseQuery::new(vec![false, false], true, CostModel::new(vec![5.0, 2.0], []).unwrap());
    let listed = enumerate_counterfactuals(&model, &query, 2, false).unwrap();
    let costs: Vec<f64> = listed.iter().map(|cf| cf.cost).collect();
    assert_eq!(costs, vec![2.0, 5.0]);
}

#[test]
fn infeasible_is_none() {
    let model = DnfModel::new(vec![Conjunction::of_features(&[0, 1]).unwrap()], 3).unwrap();
    let mut query = RecourseQuery::new(vec![false; 3], true, CostModel::new(vec![1.0; 3], [1]).unwrap());
    assert_eq!(min_cost_counterfactual(&model, &query).unwrap(), None);
    query.costs = CostModel::uniform(3);
    query.budget = 1;
    assert_eq!(min_cost_counterfactual(&model, &query).unwrap(), None);
    query.budget = 2;
    assert_eq!(min_cost_counterfactual(&model, &query).unwrap().unwrap().features(), vec![0, 1]);
}

#[test]
fn one_hot_groups_stay_one_hot() {
    // categories 0,1,2 of one column; positive iff category 2
    let model = DnfModel::new(vec![Conjunction::single(2, true)], 3).unwrap();
    let mut query = RecourseQuery::new(vec![true, false, false], true, CostModel::uniform(3));
    query.groups = vec![vec![0, 1, 2]];
    let cf = min_cost_counterfactual(&model, &query).unwrap().unwrap();
    assert_eq!(cf.features(), vec![0, 2]);
}

#[test]
fn bad_queries() {
    let model = DnfModel::new(vec![Conjunction::single(0, true)], 2).unwrap();
    let query = RecourseQuery::new(vec![false; 3], true, CostModel::uniform(3));
    assert!(min_cost_counterfactual(&model, &query).is_err());
    let mut query = RecourseQuery::new(vec![false; 2], true, CostModel::uniform(2));
    query.budget = 3;
    assert!(min_cost_counterfactual(&model, &query).is_err());
    assert!(CostModel::new(vec![-1.0], []).is_err());
}

// deny if (short history AND >=1 bad trade) OR (>=4 bad trades)
// OR (recent delinquency AND high delinquent share)
fn loan_model() -> DnfModel {
    let terms = vec![
        Conjunction::of_features(&[0, 1]).unwrap(),
        Conjunction::single(2, true),
        Conjunction::of_features(&[3, 4]).unwrap(),
    ];
    DnfModel::new(terms, 5).unwrap()
}

#[test]
fn loan_explanations() {
    let model = loan_model();
    let e = local_explanation_dnf(&model, &[false, true, true, false, false]).unwrap();
    assert_eq!(e.satisfied, Some((1, Conjunction::single(2, true))));

    let e = local_explanation_dnf(&model, &[true, true, true, true, true]).unwrap();
    assert_eq!(e.satisfied.unwrap().0, 1);

    let e = local_explanation_dnf(&model, &[true, false, false, true, false]).unwrap();
    assert!(!e.prediction);
    assert_eq!(e.satisfied, None);
    assert_eq!(e.unmet[2].1, vec![Condition::new(4, true)]);
}

#[test]
fn explanations_are_valid_on_random_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    for _ in 0..200 {
        let p = rng.gen_range(2..=8);
        let case = random_recourse_case(&mut rng, p);
        let lucid_core::model::AnyModel::Dnf(model) = case.model else { continue };
        let row = &case.query.instance;
        let e = local_explanation_dnf(&model, row).unwrap();
        let satisfied: Vec<(usize, &Conjunction)> =
            model.conjunctions().iter().enumerate().filter(|(_, c)| c.matches(row)).collect();
        assert_eq!(e.prediction, !satisfied.is_empty());
        let best = satisfied.iter().min_by_key(|(i, c)| (c.cardinality(), *c, *i));
        assert_eq!(e.satisfied.as_ref().map(|(i, c)| (*i, c)), best.map(|(i, c)| (*i, *c)));
    }
}

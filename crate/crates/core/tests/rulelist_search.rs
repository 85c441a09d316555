mod common;

use common::*;
use lucid_core::data::{Antecedent, Conjunction, Dataset};
use lucid_core::search::brute::{self, Evaluated};
use lucid_core::search::{
    enumerate_rashomon, enumerate_rashomon_constrained, resolve_with_constraints, solve,
    BoundToggles, FeatureConstraints, QueueDiscipline, Scale, SearchConfig,
};
use lucid_core::{Error, Rational};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(lambda: Rational, max_rules: usize) -> SearchConfig {
    SearchConfig {
        max_rules,
        ..SearchConfig::with_lambda(lambda)
    }
}

fn all_singletons(ds: &Dataset) -> Vec<Antecedent> {
    (0..ds.p())
        .flat_map(|j| [true, false].map(|v| Antecedent::new(Conjunction::single(j, v), ds)))
        .collect()
}

#[test]
fn all_negative_labels_give_empty_list() {
    let rows = vec![vec![true, false], vec![false, true], vec![true, true]];
    let ds = Dataset::from_rows(&["a", "b"], &rows, &[false, false, false]).unwrap();
    let cert = solve(&ds, &all_singletons(&ds), &config(rational("0"), 3)).unwrap();
    assert!(cert.optimal);
    assert_eq!(cert.model.size(), 0);
    assert!(!cert.model.default_label());
    assert_eq!(cert.objective.value(), Ratio::from_integer(0));
}

#[test]
fn large_lambda_gives_empty_list() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ds = random_dataset(&mut rng, 40, 5);
    let ants = random_antecedents(&mut rng, &ds, 10);
    for lambda in ["1", "3/2"] {
        let cert = solve(&ds, &ants, &config(rational(lambda), 3)).unwrap();
        assert_eq!(cert.model.size(), 0);
        assert!(cert.optimal);
    }
}

#[test]
fn matches_brute_force_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let inst = random_rule_instance(&mut rng, 50, 10);
        let cfg = config(inst.lambda, 3);
        let cert = solve(&inst.ds, &inst.ants, &cfg).unwrap();
        let (seq, value) = brute::optimum(&inst.ds, &inst.ants, inst.lambda, 3).unwrap();
        assert!(cert.optimal);
        assert_eq!(cert.objective.value(), value);
        assert_eq!(cert.antecedents, seq, "tie-break must pick the first optimal list");
    }
}

#[test]
fn every_traced_bound_is_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..25 {
        let inst = random_rule_instance(&mut rng, 30, 8);
        let cfg = SearchConfig {
            trace: true,
            ..config(inst.lambda, 3)
        };
        let cert = solve(&inst.ds, &inst.ants, &cfg).unwrap();
        let lists = brute::evaluate_all(&inst.ds, &inst.ants, inst.lambda, 3).unwrap();
        let scale = Scale::new(inst.ds.n(), inst.lambda);
        assert!(!cert.trace.is_empty());
        for entry in &cert.trace {
            let completions: Vec<&Evaluated> =
                lists.iter().filter(|e| e.antecedents.starts_with(&entry.rules)).collect();
            let best = completions.iter().map(|e| e.objective.value()).min().unwrap();
            let b = entry.bounds;
            assert!(scale.to_ratio(b.hierarchical) <= best);
            assert!(scale.to_ratio(b.equivalent_points) <= best);
            let strict = completions
                .iter()
                .filter(|e| e.antecedents.len() > entry.rules.len())
                .map(|e| e.objective.value())
                .min();
            if let Some(strict) = strict {
                assert!(scale.to_ratio(b.lookahead) <= strict);
                assert!(scale.to_ratio(b.combined_extension) <= strict);
            }
        }
    }
}

#[test]
fn pruning_toggles_do_not_change_the_answer() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let inst = random_rule_instance(&mut rng, 40, 9);
        let full = solve(&inst.ds, &inst.ants, &config(inst.lambda, 3)).unwrap();
        for bounds in [
            BoundToggles::hierarchical_only(),
            BoundToggles {
                symmetry: false,
                ..BoundToggles::default()
            },
            BoundToggles {
                support: false,
                ..BoundToggles::default()
            },
        ] {
            let cfg = SearchConfig {
                bounds,
                ..config(inst.lambda, 3)
            };
            let other = solve(&inst.ds, &inst.ants, &cfg).unwrap();
            assert_eq!(other.objective, full.objective);
            assert_eq!(other.antecedents, full.antecedents);
        }
        let bfs = SearchConfig {
            queue: QueueDiscipline::BreadthFirst,
            ..config(inst.lambda, 3)
        };
        assert_eq!(solve(&inst.ds, &inst.ants, &bfs).unwrap().antecedents, full.antecedents);
        let hier = SearchConfig {
            bounds: BoundToggles::hierarchical_only(),
            ..config(inst.lambda, 3)
        };
        let h = solve(&inst.ds, &inst.ants, &hier).unwrap();
        assert!(h.stats.nodes_expanded >= full.stats.nodes_expanded);
    }
}

#[test]
fn certificate_does_not_depend_on_thread_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let inst = random_rule_instance(&mut rng, 60, 10);
        let one = solve(&inst.ds, &inst.ants, &SearchConfig { threads: 1, ..config(inst.lambda, 3) }).unwrap();
        let four = solve(&inst.ds, &inst.ants, &SearchConfig { threads: 4, ..config(inst.lambda, 3) }).unwrap();
        assert_eq!(one.to_json(false), four.to_json(false));
    }
}

#[test]
fn incumbent_never_increases() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let inst = random_rule_instance(&mut rng, 60, 10);
        let cert = solve(&inst.ds, &inst.ants, &config(inst.lambda, 3)).unwrap();
        let units: Vec<u128> = cert.stats.incumbent_trace.iter().map(|e| e.units).collect();
        assert!(units.windows(2).all(|w| w[1] <= w[0]));
        assert!(!units.is_empty());
    }
}

#[test]
fn expansion_budget_reports_gap() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let ds = random_dataset(&mut rng, 60, 6);
    let ants = random_antecedents(&mut rng, &ds, 20);
    let lambda = rational("0.005");
    let exact = solve(&ds, &ants, &config(lambda, 3)).unwrap();
    let cfg = SearchConfig {
        max_expansions: Some(1),
        batch_size: 1,
        ..config(lambda, 3)
    };
    let cut = solve(&ds, &ants, &cfg).unwrap();
    assert!(!cut.optimal);
    assert!(cut.objective.value() >= exact.objective.value());
    assert!(cut.objective.value() - cut.gap <= exact.objective.value());
    let tiny = SearchConfig {
        mem_budget: Some(1),
        ..config(lambda, 3)
    };
    assert!(!solve(&ds, &ants, &tiny).unwrap().optimal);
}

#[test]
fn rejects_bad_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let ds = random_dataset(&mut rng, 20, 3);
    assert!(matches!(solve(&ds, &[], &config(rational("0"), 2)), Err(Error::InvalidParameter(_))));
    let ants = random_antecedents(&mut rng, &ds, 3);
    let twice = vec![ants[0].clone(), ants[0].clone()];
    assert!(solve(&ds, &twice, &config(rational("0"), 2)).is_err());
    let neg = SearchConfig::with_lambda(rational("-1/2"));
    assert!(solve(&ds, &ants, &neg).is_err());
}

fn brute_rashomon(inst: &RuleInstance, eps: &str, max_rules: usize) -> Vec<Vec<usize>> {
    let lists = brute::evaluate_all(&inst.ds, &inst.ants, inst.lambda, max_rules).unwrap();
    let mut v: Vec<Vec<usize>> =
        brute::within(&lists, rational(eps)).into_iter().map(|e| e.antecedents.clone()).collect();
    v.sort();
    v
}

#[test]
fn rashomon_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for i in 0..30 {
        let inst = random_rule_instance(&mut rng, 30, 8);
        let eps = ["0", "0.02", "0.05"][i % 3];
        let cfg = SearchConfig {
            epsilon: rational(eps),
            ..config(inst.lambda, 3)
        };
        let set = enumerate_rashomon(&inst.ds, &inst.ants, &cfg).unwrap();
        assert!(set.complete && !set.truncated);
        let mut got: Vec<Vec<usize>> = set.models.iter().map(|m| m.antecedents.clone()).collect();
        got.sort();
        assert_eq!(got, brute_rashomon(&inst, eps, 3));
        let (_, opt) = brute::optimum(&inst.ds, &inst.ants, inst.lambda, 3).unwrap();
        assert_eq!(set.optimum, opt);
        assert!(set.models.iter().all(|m| m.objective.value() <= set.threshold));
    }
}

#[test]
fn rashomon_with_huge_epsilon_lists_everything() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let ds = random_dataset(&mut rng, 25, 4);
    let ants = random_antecedents(&mut rng, &ds, 4);
    let cfg = SearchConfig {
        epsilon: rational("2"),
        ..config(rational("0.01"), 4)
    };
    let set = enumerate_rashomon(&ds, &ants, &cfg).unwrap();
    // 1 + 4 + 12 + 24 + 24
    assert_eq!(set.len(), 65);
    let small = SearchConfig { max_models: 10, ..cfg };
    let cut = enumerate_rashomon(&ds, &ants, &small).unwrap();
    assert!(cut.truncated);
    assert_eq!(cut.len(), 10);
}

#[test]
fn forbidding_the_optimal_feature_matches_restricted_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut checked = 0;
    for _ in 0..40 {
        let inst = random_rule_instance(&mut rng, 40, 8);
        let cfg = config(inst.lambda, 3);
        let free = solve(&inst.ds, &inst.ants, &cfg).unwrap();
        let Some(&first) = free.antecedents.first() else { continue };
        let feature = inst.ants[first].conjunction.features().next().unwrap();
        let name = inst.ds.feature_names()[feature].to_string();
        let constraints = FeatureConstraints {
            forbid: vec![name],
            require: vec![],
        };
        let got = resolve_with_constraints(&inst.ds, &inst.ants, &cfg, &constraints).unwrap();
        assert!(got.certificate.antecedents.iter().all(|&a| !inst.ants[a].conjunction.uses_feature(feature)));
        let lists = brute::evaluate_where(&inst.ds, &inst.ants, inst.lambda, 3, |seq| {
            seq.iter().all(|&a| !inst.ants[a].conjunction.uses_feature(feature))
        })
        .unwrap();
        let best = brute::best(&lists).unwrap();
        assert_eq!(got.certificate.objective.value(), best.objective.value());
        assert_eq!(got.certificate.antecedents, best.antecedents);
        assert!(got.gap_vs_unconstrained() >= Ratio::from_integer(0));
        checked += 1;
    }
    assert!(checked > 10);
}

#[test]
fn required_features_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..30 {
        let inst = random_rule_instance(&mut rng, 40, 8);
        let cfg = config(inst.lambda, 3);
        let feature = inst.ants[0].conjunction.features().next().unwrap();
        let constraints = FeatureConstraints {
            forbid: vec![],
            require: vec![inst.ds.feature_names()[feature].to_string()],
        };
        let got = resolve_with_constraints(&inst.ds, &inst.ants, &cfg, &constraints).unwrap();
        let uses = |seq: &[usize]| seq.iter().any(|&a| inst.ants[a].conjunction.uses_feature(feature));
        assert!(uses(&got.certificate.antecedents));
        let lists = brute::evaluate_where(&inst.ds, &inst.ants, inst.lambda, 3, uses).unwrap();
        let best = brute::best(&lists).unwrap();
        assert_eq!(got.certificate.antecedents, best.antecedents);

        let eps = SearchConfig { epsilon: rational("0.03"), ..cfg };
        let set = enumerate_rashomon_constrained(&inst.ds, &inst.ants, &eps, &constraints).unwrap();
        let mut want: Vec<Vec<usize>> =
            brute::within(&lists, rational("0.03")).into_iter().map(|e| e.antecedents.clone()).collect();
        want.sort();
        let mut have: Vec<Vec<usize>> = set.models.iter().map(|m| m.antecedents.clone()).collect();
        have.sort();
        assert_eq!(have, want);
    }
}

#[test]
fn empty_constraints_reproduce_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let inst = random_rule_instance(&mut rng, 50, 10);
    let cfg = config(inst.lambda, 3);
    let plain = solve(&inst.ds, &inst.ants, &cfg).unwrap();
    let c = resolve_with_constraints(&inst.ds, &inst.ants, &cfg, &FeatureConstraints::default()).unwrap();
    assert_eq!(c.certificate.to_json(false), plain.to_json(false));
    assert_eq!(c.gap_vs_unconstrained(), Ratio::from_integer(0));
}

#[test]
fn constraint_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let ds = random_dataset(&mut rng, 30, 4);
    let ants = vec![Antecedent::new(Conjunction::single(0, true), &ds)];
    let cfg = config(rational("0.01"), 2);
    let unknown = FeatureConstraints {
        forbid: vec!["nope".into()],
        require: vec![],
    };
    assert!(matches!(
        resolve_with_constraints(&ds, &ants, &cfg, &unknown),
        Err(Error::UnknownFeature(_))
    ));
    let infeasible = FeatureConstraints {
        forbid: vec![],
        require: vec!["f3".into()],
    };
    assert!(matches!(
        resolve_with_constraints(&ds, &ants, &cfg, &infeasible),
        Err(Error::Infeasible(_))
    ));
    let clash = FeatureConstraints {
        forbid: vec!["f0".into()],
        require: vec!["f0".into()],
    };
    assert!(matches!(
        resolve_with_constraints(&ds, &ants, &cfg, &clash),
        Err(Error::Infeasible(_))
    ));
}

//! End-to-end acceptance checks. Run with
//! `cargo test -p lucid-core --test acceptance`; prints one line per check
//! and fails if any check fails.

mod common;

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use lucid_core::data::{binarize, load_csv, mine_antecedents, BinarizationConfig, MiningConfig};
use lucid_core::eval::{confusion, split};
use lucid_core::model::Classifier;
use lucid_core::recourse::min_cost_counterfactual;
use lucid_core::scoring::brute::exhaustive_lattice;
use lucid_core::scoring::{
    round_logreg_baseline, solve_lattice, CoefficientBounds, LatticeConfig, LossData,
};
use lucid_core::search::brute::{self, Evaluated};
use lucid_core::search::{enumerate_rashomon, solve, Scale, SearchConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rule_config(lambda: lucid_core::Rational, threads: usize) -> SearchConfig {
    SearchConfig {
        max_rules: 3,
        threads,
        ..SearchConfig::with_lambda(lambda)
    }
}

fn rule_instances() -> Vec<RuleInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE);
    (0..200).map(|_| random_rule_instance(&mut rng, 60, 10)).collect()
}

/// Certificates for the 200 rule-list instances, as JSON without wall time.
fn rule_certificates(instances: &[RuleInstance], threads: usize) -> Vec<Value> {
    instances
        .iter()
        .map(|inst| solve(&inst.ds, &inst.ants, &rule_config(inst.lambda, threads)).unwrap().to_json(false))
        .collect()
}

fn rule_optimality(instances: &[RuleInstance]) -> Outcome {
    let started = Instant::now();
    for (i, inst) in instances.iter().enumerate() {
        let cert = solve(&inst.ds, &inst.ants, &rule_config(inst.lambda, 0)).map_err(|e| e.to_string())?;
        let (_, best) = brute::optimum(&inst.ds, &inst.ants, inst.lambda, 3).map_err(|e| e.to_string())?;
        check(cert.optimal, format!("instance {i} not certified"))?;
        check(
            cert.objective.value() == best,
            format!("instance {i}: {} vs brute force {best}", cert.objective),
        )?;
    }
    let took = started.elapsed();
    check(took < Duration::from_secs(300), format!("took {took:.1?}"))?;
    Ok(format!("{} instances equal brute force, {took:.1?}", instances.len()))
}

fn bound_soundness(instances: &[RuleInstance]) -> Outcome {
    let mut checked = 0usize;
    for (i, inst) in instances.iter().enumerate() {
        let cfg = SearchConfig {
            trace: true,
            ..rule_config(inst.lambda, 0)
        };
        let cert = solve(&inst.ds, &inst.ants, &cfg).map_err(|e| e.to_string())?;
        let lists = brute::evaluate_all(&inst.ds, &inst.ants, inst.lambda, 3).map_err(|e| e.to_string())?;
        let scale = Scale::new(inst.ds.n(), inst.lambda);
        for entry in &cert.trace {
            let completions: Vec<&Evaluated> =
                lists.iter().filter(|e| e.antecedents.starts_with(&entry.rules)).collect();
            let best = completions.iter().map(|e| e.objective.value()).min().unwrap();
            let strict = completions
                .iter()
                .filter(|e| e.antecedents.len() > entry.rules.len())
                .map(|e| e.objective.value())
                .min();
            let b = entry.bounds;
            let mut sound = scale.to_ratio(b.hierarchical) <= best && scale.to_ratio(b.equivalent_points) <= best;
            // the lookahead bounds only speak about proper extensions
            if let Some(strict) = strict {
                sound &= scale.to_ratio(b.lookahead) <= strict && scale.to_ratio(b.combined_extension) <= strict;
            }
            check(sound, format!("instance {i}, prefix {:?}: bound above best completion", entry.rules))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} traced prefixes, 0 violations"))
}

fn scoring_instances() -> Vec<(lucid_core::data::Dataset, LatticeConfig)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5C0E);
    (0..100)
        .map(|_| {
            let n = rng.gen_range(20..=200);
            let p = rng.gen_range(1..=3);
            let ds = random_scoring_dataset(&mut rng, n, p);
            let lambda = ["0", "0.001", "0.01", "0.05"][rng.gen_range(0..4)];
            let cfg = LatticeConfig {
                bounds: CoefficientBounds::coefficients(-5, 5),
                ..LatticeConfig::with_lambda(rational(lambda))
            };
            (ds, cfg)
        })
        .collect()
}

fn scoring_certificates(instances: &[(lucid_core::data::Dataset, LatticeConfig)], threads: usize) -> Vec<Value> {
    instances
        .iter()
        .map(|(ds, cfg)| {
            let cfg = LatticeConfig { threads, ..cfg.clone() };
            solve_lattice(ds, &cfg).unwrap().to_json(false)
        })
        .collect()
}

fn scoring_optimality(instances: &[(lucid_core::data::Dataset, LatticeConfig)]) -> Outcome {
    let mut worst = 0.0f64;
    for (i, (ds, cfg)) in instances.iter().enumerate() {
        let cert = solve_lattice(ds, cfg).map_err(|e| e.to_string())?;
        let oracle = exhaustive_lattice(ds, cfg, 1_000_000).map_err(|e| e.to_string())?;
        let diff = (cert.objective - oracle.objective).abs();
        worst = worst.max(diff);
        check(diff <= 1e-9, format!("instance {i}: {} vs exhaustive {}", cert.objective, oracle.objective))?;
        let baseline = cert.baseline_objective.ok_or(format!("instance {i}: no baseline"))?;
        check(baseline >= cert.objective - 1e-12, format!("instance {i}: baseline {baseline} below optimum"))?;
    }
    Ok(format!("{} instances, max |diff| {worst:.1e}, baseline never better", instances.len()))
}

fn gradients() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6AD);
    let h = 1e-5;
    let mut worst = 0.0f64;
    for pair in 0..1000 {
        let p = rng.gen_range(1..=6);
        let n = rng.gen_range(5..=80);
        let ds = random_scoring_dataset(&mut rng, n, p);
        let data = LossData::new(&ds);
        let b: Vec<f64> = (0..=p).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let (_, g) = data.loss_and_gradient(&b);
        for j in 0..=p {
            let fd = central_difference(&ds, &b, j, h);
            let rel = (g[j] - fd).abs() / g[j].abs().max(fd.abs()).max(f64::MIN_POSITIVE);
            worst = worst.max(rel);
            check(rel <= 1e-6, format!("pair {pair}, coordinate {j}: analytic {:e} vs {fd:e}", g[j]))?;
        }
    }
    Ok(format!("1000 pairs, max relative error {worst:.1e}"))
}

fn rashomon_instances() -> Vec<(RuleInstance, &'static str)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xEA5);
    (0..50)
        .map(|i| (random_rule_instance(&mut rng, 30, 8), ["0", "0.02", "0.05"][i % 3]))
        .collect()
}

fn rashomon_config(inst: &RuleInstance, eps: &str, threads: usize) -> SearchConfig {
    SearchConfig {
        epsilon: rational(eps),
        ..rule_config(inst.lambda, threads)
    }
}

fn rashomon_sets(instances: &[(RuleInstance, &str)], threads: usize) -> Vec<Value> {
    instances
        .iter()
        .map(|(inst, eps)| {
            enumerate_rashomon(&inst.ds, &inst.ants, &rashomon_config(inst, eps, threads)).unwrap().to_json(false)
        })
        .collect()
}

fn rashomon_membership(instances: &[(RuleInstance, &str)]) -> Outcome {
    let mut total = 0;
    for (i, (inst, eps)) in instances.iter().enumerate() {
        let set = enumerate_rashomon(&inst.ds, &inst.ants, &rashomon_config(inst, eps, 0)).map_err(|e| e.to_string())?;
        check(set.complete && !set.truncated, format!("instance {i}: incomplete enumeration"))?;
        let mut got: Vec<Vec<usize>> = set.models.iter().map(|m| m.antecedents.clone()).collect();
        got.sort();
        let lists = brute::evaluate_all(&inst.ds, &inst.ants, inst.lambda, 3).map_err(|e| e.to_string())?;
        let mut want: Vec<Vec<usize>> =
            brute::within(&lists, rational(eps)).into_iter().map(|e| e.antecedents.clone()).collect();
        want.sort();
        check(got == want, format!("instance {i} (epsilon {eps}): {} listed, {} expected", got.len(), want.len()))?;
        total += got.len();
    }
    Ok(format!("{} instances, {total} member lists, all identical", instances.len()))
}

fn recourse_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x2EC);
    let mut feasible = 0;
    for i in 0..100 {
        let p = rng.gen_range(2..=15);
        let case = random_recourse_case(&mut rng, p);
        let found = min_cost_counterfactual(&case.model, &case.query).map_err(|e| e.to_string())?;
        let oracle = brute_force_recourse(&case.model, &case.query);
        match (found, oracle.first()) {
            (None, None) => {}
            (Some(cf), Some((best, _))) => {
                check((cf.cost - best).abs() <= 1e-9, format!("case {i}: cost {} vs subset minimum {best}", cf.cost))?;
                let row = cf.apply(&case.query.instance);
                let flipped = case.model.predict(&row).map_err(|e| e.to_string())?;
                check(flipped == case.query.target, format!("case {i}: counterfactual misses the target"))?;
                feasible += 1;
            }
            (found, oracle) => {
                return Err(format!(
                    "case {i}: search found {}, enumeration found {}",
                    found.is_some(),
                    oracle.is_some()
                ))
            }
        }
    }
    Ok(format!("100 cases ({feasible} feasible) match 2^p enumeration"))
}

const BROWARD_LAMBDAS: [&str; 3] = ["0.01", "0.0025", "0.001"];

fn broward() -> Outcome {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let config = BinarizationConfig::load(data.join("broward.cfg")).map_err(|e| e.to_string())?;
    let raw = load_csv(data.join("broward_two_year.csv"), "two_year_recid", "1").map_err(|e| e.to_string())?;
    let ds = binarize(&raw, &config).map_err(|e| e.to_string())?;
    let s = split(&ds, 0.3, 1).map_err(|e| e.to_string())?;
    let (train, test) = (ds.select_rows(&s.train), ds.select_rows(&s.test));

    let baseline = round_logreg_baseline(&train, &CoefficientBounds::coefficients(-10, 10), lucid_core::Rational::zero())
        .map_err(|e| e.to_string())?;
    let base_acc = confusion(&baseline.system, &test).map_err(|e| e.to_string())?.accuracy().to_f64();

    let ants = mine_antecedents(
        &train,
        &MiningConfig {
            max_cardinality: 2,
            min_support: 0.05,
            include_negations: true,
        },
    )
    .map_err(|e| e.to_string())?;
    check(ants.len() <= 300, format!("{} antecedents mined", ants.len()))?;

    let mut best: Option<(f64, &str, usize)> = None;
    for lambda in BROWARD_LAMBDAS {
        let cfg = SearchConfig {
            max_rules: 4,
            ..SearchConfig::with_lambda(rational(lambda))
        };
        let started = Instant::now();
        let cert = solve(&train, &ants, &cfg).map_err(|e| e.to_string())?;
        let took = started.elapsed();
        check(took < Duration::from_secs(600), format!("lambda {lambda} took {took:.1?}"))?;
        if !cert.optimal || cert.model.size() > 4 {
            continue;
        }
        let acc = confusion(&cert.model, &test).map_err(|e| e.to_string())?.accuracy().to_f64();
        if best.map_or(true, |(a, _, _)| acc > a) {
            best = Some((acc, lambda, cert.model.size()));
        }
    }
    let (acc, lambda, size) = best.ok_or("no certified list of at most 4 rules")?;
    let gap_pp = 100.0 * (base_acc - acc);
    check(
        gap_pp <= 1.0,
        format!("best list {:.2}% vs rounded logistic {:.2}% ({gap_pp:.2} pp)", 100.0 * acc, 100.0 * base_acc),
    )?;
    Ok(format!(
        "{} antecedents; lambda {lambda}, {size} rules: test accuracy {:.2}% vs rounded logistic {:.2}% ({gap_pp:+.2} pp)",
        ants.len(),
        100.0 * acc,
        100.0 * base_acc
    ))
}

fn determinism(rules: &[RuleInstance], scoring: &[(lucid_core::data::Dataset, LatticeConfig)], sets: &[(RuleInstance, &str)]) -> Outcome {
    let pairs = [
        ("rule lists", rule_certificates(rules, 1), rule_certificates(rules, 8)),
        ("scoring systems", scoring_certificates(scoring, 1), scoring_certificates(scoring, 8)),
        ("rashomon sets", rashomon_sets(sets, 1), rashomon_sets(sets, 8)),
    ];
    for (what, one, eight) in &pairs {
        for (i, (a, b)) in one.iter().zip(eight).enumerate() {
            let (a, b) = (serde_json::to_vec(a).unwrap(), serde_json::to_vec(b).unwrap());
            check(a == b, format!("{what} instance {i} differs between 1 and 8 threads"))?;
        }
    }
    Ok("1 and 8 threads give byte-identical JSON".into())
}

fn main() -> ExitCode {
    let rules = rule_instances();
    let scoring = scoring_instances();
    let sets = rashomon_instances();
    let checks: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 rule-list optimality", Box::new(|| rule_optimality(&rules))),
        ("2 bound soundness", Box::new(|| bound_soundness(&rules))),
        ("3 scoring optimality", Box::new(|| scoring_optimality(&scoring))),
        ("4 gradient check", Box::new(gradients)),
        ("5 rashomon membership", Box::new(|| rashomon_membership(&sets))),
        ("6 recourse optimality", Box::new(recourse_optimality)),
        ("7 broward accuracy", Box::new(broward)),
        ("8 determinism", Box::new(|| determinism(&rules, &scoring, &sets))),
    ];
    let mut failed = 0;
    for (name, run) in &checks {
        let started = Instant::now();
        let outcome = run();
        let took = started.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{took:.1?}]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{took:.1?}]");
            }
        }
    }
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

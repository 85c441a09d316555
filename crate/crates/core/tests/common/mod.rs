#![allow(dead_code)]

use lucid_core::data::{Antecedent, Conjunction, Condition, Dataset};
use lucid_core::Rational;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn rational(s: &str) -> Rational {
    s.parse().unwrap()
}

/// Random binary rows whose label leans on the first two features.
pub fn random_dataset(rng: &mut impl Rng, n: usize, p: usize) -> Dataset {
    let rows: Vec<Vec<bool>> = (0..n)
        .map(|_| (0..p).map(|_| rng.gen_bool(0.5)).collect())
        .collect();
    let labels: Vec<bool> = rows
        .iter()
        .map(|r| {
            let signal = (r[0] && !r[1.min(p - 1)]) || (p > 2 && r[2]);
            if rng.gen_bool(0.2) {
                !signal
            } else {
                signal
            }
        })
        .collect();
    let names: Vec<String> = (0..p).map(|j| format!("f{j}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Dataset::from_rows(&refs, &rows, &labels).unwrap()
}

/// Up to `m` distinct conjunctions of one or two conditions.
pub fn random_antecedents(rng: &mut impl Rng, ds: &Dataset, m: usize) -> Vec<Antecedent> {
    let p = ds.p();
    let mut pool = Vec::new();
    for a in 0..p {
        for va in [true, false] {
            pool.push(Conjunction::single(a, va));
            for b in a + 1..p {
                for vb in [true, false] {
                    pool.push(Conjunction::new(vec![Condition::new(a, va), Condition::new(b, vb)]).unwrap());
                }
            }
        }
    }
    pool.shuffle(rng);
    pool.truncate(m);
    pool.into_iter().map(|c| Antecedent::new(c, ds)).collect()
}

pub const LAMBDAS: [&str; 4] = ["0", "0.005", "0.01", "0.05"];

pub struct RuleInstance {
    pub ds: Dataset,
    pub ants: Vec<Antecedent>,
    pub lambda: Rational,
}

pub fn random_rule_instance(rng: &mut impl Rng, max_n: usize, max_ants: usize) -> RuleInstance {
    let n = rng.gen_range(8..=max_n);
    let p = rng.gen_range(3..=6);
    let ds = random_dataset(rng, n, p);
    let m = rng.gen_range(1..=max_ants);
    let ants = random_antecedents(rng, &ds, m);
    let lambda = rational(LAMBDAS[rng.gen_range(0..LAMBDAS.len())]);
    RuleInstance { ds, ants, lambda }
}

/// Random rows for scoring tests: each feature shifts the log-odds by a
/// random weight.
pub fn random_scoring_dataset(rng: &mut impl Rng, n: usize, p: usize) -> Dataset {
    let weights: Vec<f64> = (0..p).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let bias = rng.gen_range(-1.0..1.0);
    let rows: Vec<Vec<bool>> = (0..n)
        .map(|_| (0..p).map(|_| rng.gen_bool(0.5)).collect())
        .collect();
    let labels: Vec<bool> = rows
        .iter()
        .map(|r| {
            let s: f64 = bias + r.iter().zip(&weights).filter(|(x, _)| **x).map(|(_, w)| w).sum::<f64>();
            rng.gen_bool(1.0 / (1.0 + (-s).exp()))
        })
        .collect();
    let names: Vec<String> = (0..p).map(|j| format!("x{j}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Dataset::from_rows(&refs, &rows, &labels).unwrap()
}

/// Per-row logistic loss with labels mapped to +-1, no compression.
pub fn naive_logistic_loss(ds: &Dataset, b: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..ds.n() {
        let row = ds.row(i);
        let s = b[0] + row.iter().zip(&b[1..]).filter(|(x, _)| **x).map(|(_, c)| c).sum::<f64>();
        let y = if ds.label().get(i) { 1.0 } else { -1.0 };
        let z: f64 = -y * s;
        total += if z > 0.0 { z + (-z).exp().ln_1p() } else { z.exp().ln_1p() };
    }
    total / ds.n() as f64
}

/// `(L(b + h e_j) - L(b - h e_j)) / 2h`, with each row's loss difference
/// taken as `log1p(sigmoid(lo) * expm1(hi - lo))` so the subtraction of two
/// nearly equal losses never happens.
pub fn central_difference(ds: &Dataset, b: &[f64], j: usize, h: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..ds.n() {
        let row = ds.row(i);
        let x = if j == 0 { true } else { row[j - 1] };
        if !x {
            continue;
        }
        let s = b[0] + row.iter().zip(&b[1..]).filter(|(x, _)| **x).map(|(_, c)| c).sum::<f64>();
        let y = if ds.label().get(i) { 1.0 } else { -1.0 };
        let (hi, lo) = (-y * (s + h), -y * (s - h));
        let sigmoid = if lo >= 0.0 { 1.0 / (1.0 + (-lo).exp()) } else { lo.exp() / (1.0 + lo.exp()) };
        total += (sigmoid * (hi - lo).exp_m1()).ln_1p();
    }
    total / ds.n() as f64 / (2.0 * h)
}

pub struct RecourseCase {
    pub model: lucid_core::model::AnyModel,
    pub query: lucid_core::recourse::RecourseQuery,
}

fn random_conjunction(rng: &mut impl Rng, p: usize) -> Conjunction {
    let mut features: Vec<usize> = (0..p).collect();
    features.shuffle(rng);
    let len = rng.gen_range(1..=3.min(p));
    Conjunction::new(features[..len].iter().map(|&j| Condition::new(j, rng.gen_bool(0.5))).collect()).unwrap()
}

/// A random rule list, DNF or scoring system over `p` features with a
/// random instance, target, costs (some zero, some immutable), budget and,
/// sometimes, one-hot groups.
pub fn random_recourse_case(rng: &mut impl Rng, p: usize) -> RecourseCase {
    use lucid_core::model::AnyModel;
    use lucid_core::recourse::{CostModel, RecourseQuery};
    use lucid_core::rules::{DnfModel, Rule, RuleList};
    use lucid_core::scoring::ScoringSystem;

    let model = match rng.gen_range(0..3) {
        0 => {
            let mut rules: Vec<Rule> = Vec::new();
            for _ in 0..rng.gen_range(1..=5) {
                let antecedent = random_conjunction(rng, p);
                if rules.iter().all(|r| r.antecedent != antecedent) {
                    rules.push(Rule { antecedent, prediction: rng.gen_bool(0.5) });
                }
            }
            AnyModel::RuleList(RuleList::new(rules, rng.gen_bool(0.5), p).unwrap())
        }
        1 => {
            let mut terms: Vec<Conjunction> = Vec::new();
            for _ in 0..rng.gen_range(1..=4) {
                let c = random_conjunction(rng, p);
                if !terms.contains(&c) {
                    terms.push(c);
                }
            }
            AnyModel::Dnf(DnfModel::new(terms, p).unwrap())
        }
        _ => {
            let coefficients: Vec<i64> = (0..p)
                .map(|_| if rng.gen_bool(0.6) { rng.gen_range(-5..=5) } else { 0 })
                .collect();
            let names = (0..p).map(|j| format!("f{j}")).collect();
            AnyModel::Scoring(ScoringSystem::new(rng.gen_range(-6..=6), coefficients, names, rational("0")).unwrap())
        }
    };
    let instance: Vec<bool> = (0..p).map(|_| rng.gen_bool(0.5)).collect();
    let costs: Vec<f64> = (0..p)
        .map(|_| match rng.gen_range(0..4) {
            0 => 1.0,
            1 => 0.0,
            2 => rng.gen_range(1..=5) as f64,
            _ => rng.gen_range(0.0..3.0),
        })
        .collect();
    let immutable: Vec<usize> = (0..p).filter(|_| rng.gen_bool(0.15)).collect();
    let mut query = RecourseQuery::new(instance, rng.gen_bool(0.5), CostModel::new(costs, immutable).unwrap());
    query.budget = rng.gen_range(0..=p);
    if p >= 3 && rng.gen_bool(0.3) {
        let start = rng.gen_range(0..p - 2);
        query.groups.push((start..start + 3).collect());
    }
    RecourseCase { model, query }
}

/// Every admissible flip set reaching the target, sorted by (cost, size,
/// features). Costs are summed in feature order.
pub fn brute_force_recourse(
    model: &dyn lucid_core::model::Classifier,
    query: &lucid_core::recourse::RecourseQuery,
) -> Vec<(f64, Vec<usize>)> {
    let p = query.instance.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << p) {
        let flipped: Vec<usize> = (0..p).filter(|j| mask >> j & 1 == 1).collect();
        if flipped.len() > query.budget || flipped.iter().any(|&j| query.costs.is_immutable(j)) {
            continue;
        }
        let mut row = query.instance.clone();
        for &j in &flipped {
            row[j] = !row[j];
        }
        let one_hot_ok = query.groups.iter().all(|g| {
            let before = g.iter().filter(|&&j| query.instance[j]).count();
            let after = g.iter().filter(|&&j| row[j]).count();
            after <= 1 && (before != 1 || after == 1)
        });
        if !one_hot_ok || model.predict(&row).unwrap() != query.target {
            continue;
        }
        let cost = flipped.iter().map(|&j| query.costs.cost(j).unwrap()).fold(0.0, |a, c| a + c);
        out.push((cost, flipped));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.len().cmp(&b.1.len())).then(a.1.cmp(&b.1)));
    out
}

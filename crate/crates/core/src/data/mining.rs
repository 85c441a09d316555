use std::collections::HashMap;

use crate::bitvec::BitVector;
use crate::data::antecedent::{Antecedent, Condition, Conjunction};
use crate::data::dataset::Dataset;
use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, Debug, PartialEq)]
pub struct MiningConfig {
    pub max_cardinality: usize,
    /// Both the support and its complement must cover at least this fraction.
    pub min_support: f64,
    /// Also mine `feature == 0` conditions.
    pub include_negations: bool,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            max_cardinality: 2,
            min_support: 0.01,
            include_negations: true,
        }
    }
}

#[inline]
fn frequent(count: usize, n: usize, min_support: f64) -> bool {
    count as f64 / n as f64 >= min_support
}

/// All conjunctions of up to `max_cardinality` conditions whose support and
/// complement support both reach `min_support`.
///
/// Among conjunctions with identical support only the one with the fewest
/// conditions (then lexicographically first) is kept. Output is sorted by
/// cardinality, then lexicographically.
pub fn mine_antecedents(ds: &Dataset, cfg: &MiningConfig) -> Result<Vec<Antecedent>> {
    if cfg.max_cardinality == 0 {
        return Err(Error::InvalidParameter("max cardinality must be at least 1".into()));
    }
    if !(cfg.min_support > 0.0 && cfg.min_support < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "min support must be in (0, 1), got {}",
            cfg.min_support
        )));
    }
    let n = ds.n();
    let singles: Vec<Condition> = (0..ds.p())
        .flat_map(|j| {
            let neg = cfg.include_negations.then_some(Condition::new(j, false));
            std::iter::once(Condition::new(j, true)).chain(neg)
        })
        .collect();

    let condition_bits = |c: &Condition| -> BitVector {
        if c.value {
            ds.column(c.feature).clone()
        } else {
            ds.column(c.feature).not()
        }
    };
    let single_bits: Vec<BitVector> = par::map(&singles, condition_bits);

    let found: Vec<Vec<(Vec<Condition>, BitVector)>> = par::map_range(0..singles.len(), |i| {
        let mut out = Vec::new();
        let mut stack = vec![singles[i]];
        extend(
            &singles,
            &single_bits,
            i,
            &single_bits[i],
            &mut stack,
            cfg,
            n,
            &mut out,
        );
        out
    });

    // keep the smallest, then lexicographically first, conjunction per support
    let mut best: HashMap<BitVector, Vec<Condition>> = HashMap::new();
    for (conds, support) in found.into_iter().flatten() {
        match best.get_mut(&support) {
            Some(existing) => {
                if (conds.len(), &conds) < (existing.len(), &*existing) {
                    *existing = conds;
                }
            }
            None => {
                best.insert(support, conds);
            }
        }
    }
    let mut out: Vec<Antecedent> = best
        .into_iter()
        .map(|(support, conds)| Antecedent {
            conjunction: Conjunction::new(conds).expect("mined conditions use distinct features"),
            support,
        })
        .collect();
    out.sort_by(|a, b| {
        (a.cardinality(), &a.conjunction).cmp(&(b.cardinality(), &b.conjunction))
    });
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    singles: &[Condition],
    single_bits: &[BitVector],
    last: usize,
    support: &BitVector,
    stack: &mut Vec<Condition>,
    cfg: &MiningConfig,
    n: usize,
    out: &mut Vec<(Vec<Condition>, BitVector)>,
) {
    let count = support.count_ones();
    // supersets can only shrink the support
    if !frequent(count, n, cfg.min_support) {
        return;
    }
    if frequent(n - count, n, cfg.min_support) {
        out.push((stack.clone(), support.clone()));
    }
    if stack.len() == cfg.max_cardinality {
        return;
    }
    let last_feature = singles[last].feature;
    for next in last + 1..singles.len() {
        if singles[next].feature == last_feature {
            continue;
        }
        let child = support.and(&single_bits[next]);
        stack.push(singles[next]);
        extend(singles, single_bits, next, &child, stack, cfg, n, out);
        stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_ds(seed: u64, n: usize, p: usize) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<bool>> = (0..n)
            .map(|_| (0..p).map(|_| rng.gen_bool(0.4)).collect())
            .collect();
        let labels: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let names: Vec<String> = (0..p).map(|j| format!("f{j}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        Dataset::from_rows(&names, &rows, &labels).unwrap()
    }

    /// Every conjunction of at most two conditions, evaluated row by row,
    /// filtered and deduplicated by the same rules.
    fn brute_force(ds: &Dataset, min_support: f64) -> Vec<(Vec<Condition>, Vec<bool>)> {
        let rows = ds.rows();
        let n = ds.n();
        let mut cands: Vec<Vec<Condition>> = Vec::new();
        for a in 0..ds.p() {
            for va in [false, true] {
                cands.push(vec![Condition::new(a, va)]);
                for b in a + 1..ds.p() {
                    for vb in [false, true] {
                        cands.push(vec![Condition::new(a, va), Condition::new(b, vb)]);
                    }
                }
            }
        }
        let mut kept: Vec<(Vec<Condition>, Vec<bool>)> = Vec::new();
        for c in cands {
            let sup: Vec<bool> = rows.iter().map(|r| c.iter().all(|x| r[x.feature] == x.value)).collect();
            let k = sup.iter().filter(|&&b| b).count();
            if (k as f64 / n as f64) < min_support || ((n - k) as f64 / n as f64) < min_support {
                continue;
            }
            kept.push((c, sup));
        }
        let mut out: Vec<(Vec<Condition>, Vec<bool>)> = Vec::new();
        for (c, sup) in &kept {
            let better = kept
                .iter()
                .any(|(d, s)| s == sup && (d.len(), d) < (c.len(), c));
            if !better {
                out.push((c.clone(), sup.clone()));
            }
        }
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out
    }

    #[test]
    fn matches_brute_force_on_random_data() {
        for seed in 0..20 {
            let ds = random_ds(seed, 40, 5);
            let cfg = MiningConfig {
                max_cardinality: 2,
                min_support: 0.05,
                include_negations: true,
            };
            let got: Vec<(Vec<Condition>, Vec<bool>)> = mine_antecedents(&ds, &cfg)
                .unwrap()
                .into_iter()
                .map(|a| (a.conjunction.conditions().to_vec(), a.support.to_bools()))
                .collect();
            assert_eq!(got, brute_force(&ds, 0.05), "seed {seed}");
        }
    }

    #[test]
    fn rare_feature_excluded() {
        let rows: Vec<Vec<bool>> = (0..20).map(|i| vec![i < 2, i % 2 == 0]).collect();
        let labels = vec![false; 20];
        let ds = Dataset::from_rows(&["rare", "half"], &rows, &labels).unwrap();
        let cfg = MiningConfig {
            max_cardinality: 1,
            min_support: 0.5,
            include_negations: false,
        };
        let ants = mine_antecedents(&ds, &cfg).unwrap();
        assert_eq!(ants.len(), 1);
        assert_eq!(ants[0].conjunction, Conjunction::single(1, true));
    }

    #[test]
    fn identical_columns_dedup_to_first() {
        let rows: Vec<Vec<bool>> = (0..10).map(|i| vec![i % 3 == 0, i % 3 == 0]).collect();
        let ds = Dataset::from_rows(&["a", "b"], &rows, &vec![false; 10]).unwrap();
        let cfg = MiningConfig {
            max_cardinality: 2,
            min_support: 0.1,
            include_negations: false,
        };
        let ants = mine_antecedents(&ds, &cfg).unwrap();
        assert_eq!(ants.len(), 1);
        assert_eq!(ants[0].conjunction, Conjunction::single(0, true));
    }

    #[test]
    fn invariants_hold() {
        let ds = random_ds(99, 120, 8);
        let cfg = MiningConfig {
            max_cardinality: 3,
            min_support: 0.1,
            include_negations: true,
        };
        let ants = mine_antecedents(&ds, &cfg).unwrap();
        assert!(!ants.is_empty());
        for a in &ants {
            let k = a.support.count_ones() as f64 / ds.n() as f64;
            assert!(k >= 0.1 && 1.0 - k >= 0.1);
            assert_eq!(a.support, a.conjunction.support(&ds));
            assert!((1..=3).contains(&a.cardinality()));
        }
        let again = mine_antecedents(&ds, &cfg).unwrap();
        assert_eq!(ants, again);
    }

    #[test]
    fn bad_parameters() {
        let ds = random_ds(1, 10, 2);
        let mut cfg = MiningConfig::default();
        cfg.min_support = 0.0;
        assert!(mine_antecedents(&ds, &cfg).is_err());
        cfg.min_support = 0.1;
        cfg.max_cardinality = 0;
        assert!(mine_antecedents(&ds, &cfg).is_err());
    }
}

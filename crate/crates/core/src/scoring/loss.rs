//! Average logistic loss over binary rows, compressed to distinct patterns.

use std::collections::BTreeMap;

use crate::data::Dataset;
use crate::par;

/// Patterns per parallel chunk. Partial sums are always added in chunk
/// order, so totals do not depend on the thread count.
const CHUNK: usize = 1024;

/// `log(1 + exp(z))` without overflow for large `|z|`.
#[inline]
pub fn log1p_exp(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// `1 / (1 + exp(-z))`.
#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Distinct feature patterns of a dataset with their label counts.
///
/// Coefficient vectors passed to this type put the intercept first:
/// `b[0]` is the intercept and `b[j + 1]` multiplies feature `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LossData {
    p: usize,
    n: f64,
    /// Row-major `0/1` patterns, `p` entries each.
    patterns: Vec<f64>,
    positives: Vec<f64>,
    negatives: Vec<f64>,
}

impl LossData {
    pub fn new(ds: &Dataset) -> Self {
        let mut counts: BTreeMap<Vec<bool>, (u64, u64)> = BTreeMap::new();
        for i in 0..ds.n() {
            let e = counts.entry(ds.row(i)).or_default();
            if ds.label().get(i) {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
        let p = ds.p();
        let mut patterns = Vec::with_capacity(counts.len() * p);
        let mut positives = Vec::with_capacity(counts.len());
        let mut negatives = Vec::with_capacity(counts.len());
        for (row, (pos, neg)) in counts {
            patterns.extend(row.iter().map(|&b| if b { 1.0 } else { 0.0 }));
            positives.push(pos as f64);
            negatives.push(neg as f64);
        }
        LossData {
            p,
            n: ds.n() as f64,
            patterns,
            positives,
            negatives,
        }
    }

    /// Number of features (coefficient vectors have `p + 1` entries).
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn distinct_patterns(&self) -> usize {
        self.positives.len()
    }

    #[inline]
    fn score(&self, u: usize, b: &[f64]) -> f64 {
        let x = &self.patterns[u * self.p..(u + 1) * self.p];
        b[0] + x.iter().zip(&b[1..]).map(|(x, b)| x * b).sum::<f64>()
    }

    fn chunked<T: Send>(&self, f: impl Fn(std::ops::Range<usize>) -> T + Sync + Send) -> Vec<T> {
        let u = self.distinct_patterns();
        let chunks = u.div_ceil(CHUNK).max(1);
        if chunks == 1 {
            return vec![f(0..u)];
        }
        par::map_range(0..chunks, |c| f(c * CHUNK..((c + 1) * CHUNK).min(u)))
    }

    pub fn loss(&self, b: &[f64]) -> f64 {
        assert_eq!(b.len(), self.p + 1, "coefficient length");
        let parts = self.chunked(|range| {
            range
                .map(|u| {
                    let s = self.score(u, b);
                    let mut acc = 0.0;
                    if self.positives[u] > 0.0 {
                        acc += self.positives[u] * log1p_exp(-s);
                    }
                    if self.negatives[u] > 0.0 {
                        acc += self.negatives[u] * log1p_exp(s);
                    }
                    acc
                })
                .sum::<f64>()
        });
        parts.iter().sum::<f64>() / self.n
    }

    /// Loss and its gradient with respect to `b` (intercept first).
    pub fn loss_and_gradient(&self, b: &[f64]) -> (f64, Vec<f64>) {
        assert_eq!(b.len(), self.p + 1, "coefficient length");
        let d = self.p + 1;
        let parts = self.chunked(|range| {
            let mut loss = 0.0;
            let mut grad = vec![0.0; d];
            for u in range {
                let s = self.score(u, b);
                let (pos, neg) = (self.positives[u], self.negatives[u]);
                if pos > 0.0 {
                    loss += pos * log1p_exp(-s);
                }
                if neg > 0.0 {
                    loss += neg * log1p_exp(s);
                }
                // d/ds of the two loss terms
                let w = neg * sigmoid(s) - pos * sigmoid(-s);
                grad[0] += w;
                let x = &self.patterns[u * self.p..(u + 1) * self.p];
                for (g, &xj) in grad[1..].iter_mut().zip(x) {
                    *g += w * xj;
                }
            }
            (loss, grad)
        });
        let mut loss = 0.0;
        let mut grad = vec![0.0; d];
        for (l, g) in parts {
            loss += l;
            for (a, b) in grad.iter_mut().zip(g) {
                *a += b;
            }
        }
        grad.iter_mut().for_each(|g| *g /= self.n);
        (loss / self.n, grad)
    }
}

pub(crate) fn as_f64(b: &[i64]) -> Vec<f64> {
    b.iter().map(|&v| v as f64).collect()
}

//! Exhaustive lattice scan, the reference the lattice search is checked
//! against.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::par;
use crate::scoring::lattice::LatticeConfig;
use crate::scoring::loss::{as_f64, LossData};

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeOptimum {
    /// Intercept first.
    pub coefficients: Vec<i64>,
    pub objective: f64,
    pub points: u64,
}

/// Evaluates every admissible lattice point. Refuses boxes with more than
/// `max_points` points.
pub fn exhaustive_lattice(ds: &Dataset, cfg: &LatticeConfig, max_points: u64) -> Result<LatticeOptimum> {
    let (lo, hi) = cfg.root_box(ds.p())?;
    let d = lo.len();
    let widths: Vec<u64> = (0..d).map(|j| (hi[j] - lo[j] + 1) as u64).collect();
    let total = widths
        .iter()
        .try_fold(1u64, |acc, &w| acc.checked_mul(w))
        .filter(|&t| t <= max_points)
        .ok_or_else(|| Error::InvalidParameter(format!("lattice has more than {max_points} points")))?;
    let cap = cfg.sparsity_cap.unwrap_or(ds.p());
    let lambda = cfg.lambda.to_f64();
    let data = LossData::new(ds);
    let point = |mut i: u64| -> Vec<i64> {
        let mut b = vec![0; d];
        for j in (0..d).rev() {
            b[j] = lo[j] + (i % widths[j]) as i64;
            i /= widths[j];
        }
        b
    };
    let values = par::map_range(0..total as usize, |i| {
        let b = point(i as u64);
        let nnz = b[1..].iter().filter(|&&v| v != 0).count();
        (nnz <= cap).then(|| data.loss(&as_f64(&b)) + lambda * nnz as f64)
    });
    let (i, objective) = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .ok_or_else(|| Error::Infeasible("no lattice point satisfies the sparsity cap".into()))?;
    Ok(LatticeOptimum {
        coefficients: point(i as u64),
        objective,
        points: total,
    })
}

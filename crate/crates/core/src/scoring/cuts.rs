//! Affine minorants of the logistic loss.

use std::collections::HashMap;

use crate::scoring::loss::{as_f64, LossData};

/// `loss(b) >= value + gradient . (b - anchor)` for every `b`, with
/// equality at `anchor`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cut {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub anchor: Vec<i64>,
    /// `value - gradient . anchor`, so the cut at `b` is `offset + gradient . b`.
    offset: f64,
}

impl Cut {
    pub fn new(anchor: &[i64], data: &LossData) -> Self {
        let (value, gradient) = data.loss_and_gradient(&as_f64(anchor));
        let offset = value - gradient.iter().zip(anchor).map(|(g, &a)| g * a as f64).sum::<f64>();
        Cut {
            value,
            gradient,
            anchor: anchor.to_vec(),
            offset,
        }
    }

    #[inline]
    pub fn at(&self, b: &[f64]) -> f64 {
        self.offset + self.gradient.iter().zip(b).map(|(g, x)| g * x).sum::<f64>()
    }

    #[inline]
    pub(crate) fn at_int(&self, b: &[i64]) -> f64 {
        self.offset + self.gradient.iter().zip(b).map(|(g, &x)| g * x as f64).sum::<f64>()
    }

    /// Minimum of the cut over the box `[lo, hi]` and a vertex attaining it.
    pub(crate) fn box_min(&self, lo: &[i64], hi: &[i64]) -> (f64, Vec<i64>) {
        let vertex: Vec<i64> = self
            .gradient
            .iter()
            .zip(lo.iter().zip(hi))
            .map(|(&g, (&l, &h))| if g > 0.0 { l } else { h })
            .collect();
        (self.at_int(&vertex), vertex)
    }
}

/// Append-only set of cuts, at most one per anchor.
#[derive(Clone, Debug, Default)]
pub struct CutPool {
    cuts: Vec<Cut>,
    anchors: HashMap<Vec<i64>, usize>,
}

impl CutPool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn has_anchor(&self, anchor: &[i64]) -> bool {
        self.anchors.contains_key(anchor)
    }

    /// Adds the cut at `anchor` unless one is already there; returns its index.
    pub fn add(&mut self, anchor: &[i64], data: &LossData) -> usize {
        if let Some(&i) = self.anchors.get(anchor) {
            return i;
        }
        self.cuts.push(Cut::new(anchor, data));
        self.anchors.insert(anchor.to_vec(), self.cuts.len() - 1);
        self.cuts.len() - 1
    }

    /// Largest cut value at `b`, floored at zero since the loss is
    /// non-negative.
    pub fn envelope(&self, b: &[f64]) -> f64 {
        self.cuts.iter().map(|c| c.at(b)).fold(0.0, f64::max)
    }
}

/// Returns `pool` with the cut at `anchor` added.
pub fn add_cut(mut pool: CutPool, anchor: &[i64], data: &LossData) -> CutPool {
    pool.add(anchor, data);
    pool
}

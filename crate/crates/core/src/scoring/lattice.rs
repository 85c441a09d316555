//! Branch-and-bound over integer coefficient boxes with a shared pool of
//! loss cuts.
//!
//! A box's lower bound is the minimum of the cut envelope over the box
//! plus `lambda` times the number of coefficients the box forces to be
//! nonzero. For large boxes the envelope minimum is bounded from below
//! through the dual of `min_b max_k cut_k(b)`: any convex combination of
//! cuts, minimized over the box, is a valid bound. Boxes with few lattice
//! points are solved exactly by evaluating the envelope at every point and
//! cutting at its argmin until the envelope is tight there.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::par;
use crate::rational::Rational;
use crate::scoring::baseline::round_logreg_baseline;
use crate::scoring::cuts::CutPool;
use crate::scoring::loss::{as_f64, LossData};
use crate::scoring::system::ScoringSystem;

/// Integer ranges for the intercept and for every feature coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientBounds {
    pub intercept_min: i64,
    pub intercept_max: i64,
    pub coef_min: i64,
    pub coef_max: i64,
}

impl Default for CoefficientBounds {
    fn default() -> Self {
        CoefficientBounds {
            intercept_min: -20,
            intercept_max: 20,
            coef_min: -10,
            coef_max: 10,
        }
    }
}

impl CoefficientBounds {
    pub fn coefficients(coef_min: i64, coef_max: i64) -> Self {
        CoefficientBounds {
            coef_min,
            coef_max,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.intercept_min > self.intercept_max || self.coef_min > self.coef_max {
            return Err(Error::InvalidParameter(format!(
                "empty coefficient range: intercept [{}, {}], coefficients [{}, {}]",
                self.intercept_min, self.intercept_max, self.coef_min, self.coef_max
            )));
        }
        let limit = 1 << 20;
        if [self.intercept_min, self.intercept_max, self.coef_min, self.coef_max]
            .iter()
            .any(|v| v.abs() > limit)
        {
            return Err(Error::InvalidParameter(format!(
                "coefficient bounds must lie within +-{limit}"
            )));
        }
        Ok(())
    }
}

/// Allowed sign of one coefficient.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    #[default]
    Any,
    NonNegative,
    NonPositive,
    Zero,
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "any" | "*" => Ok(Sign::Any),
            "+" | ">=0" | "nonnegative" => Ok(Sign::NonNegative),
            "-" | "<=0" | "nonpositive" => Ok(Sign::NonPositive),
            "0" | "=0" | "zero" => Ok(Sign::Zero),
            other => Err(Error::InvalidParameter(format!(
                "unknown sign `{other}` (expected any, +, - or 0)"
            ))),
        }
    }
}

/// Parses `name:sign` pairs separated by commas. A source column name
/// applies the sign to every feature derived from it.
pub fn parse_signs(text: &str, ds: &Dataset) -> Result<Vec<Sign>> {
    let mut signs = vec![Sign::Any; ds.p()];
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, sign) = item.rsplit_once(':').ok_or_else(|| {
            Error::InvalidParameter(format!("expected `feature:sign`, got `{item}`"))
        })?;
        let sign: Sign = sign.parse()?;
        for j in ds.resolve(name.trim())? {
            signs[j] = sign;
        }
    }
    Ok(signs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeConfig {
    pub lambda: Rational,
    pub bounds: CoefficientBounds,
    /// One entry per feature; empty means no sign constraints.
    pub signs: Vec<Sign>,
    /// Most nonzero feature coefficients allowed.
    pub sparsity_cap: Option<usize>,
    pub max_nodes: u64,
    /// Approximate byte budget for open boxes and cuts.
    pub mem_budget: Option<usize>,
    /// Boxes with at most this many lattice points are solved exactly.
    pub exhaustive_limit: u64,
    /// Boxes whose bound is within this of the incumbent are closed.
    pub tolerance: f64,
    pub threads: usize,
    /// Extra starting points, intercept first.
    pub warm_starts: Vec<Vec<i64>>,
    /// Seed the incumbent with the rounded logistic-regression baseline.
    pub seed_with_baseline: bool,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig {
            lambda: Rational::new(1, 100).expect("valid"),
            bounds: CoefficientBounds::default(),
            signs: Vec::new(),
            sparsity_cap: None,
            max_nodes: 200_000,
            mem_budget: None,
            exhaustive_limit: 4096,
            tolerance: 1e-10,
            threads: 0,
            warm_starts: Vec::new(),
            seed_with_baseline: true,
        }
    }
}

impl LatticeConfig {
    pub fn with_lambda(lambda: Rational) -> Self {
        LatticeConfig {
            lambda,
            ..Self::default()
        }
    }

    /// The root box, intercept first, after applying signs.
    pub(crate) fn root_box(&self, p: usize) -> Result<(Vec<i64>, Vec<i64>)> {
        if self.lambda.is_negative() {
            return Err(Error::InvalidParameter("lambda must be non-negative".into()));
        }
        self.bounds.validate()?;
        if !self.signs.is_empty() && self.signs.len() != p {
            return Err(Error::LengthMismatch {
                expected: p,
                found: self.signs.len(),
            });
        }
        let b = &self.bounds;
        let mut lo = vec![b.intercept_min];
        let mut hi = vec![b.intercept_max];
        for j in 0..p {
            let (mut l, mut h) = (b.coef_min, b.coef_max);
            match self.signs.get(j).copied().unwrap_or_default() {
                Sign::Any => {}
                Sign::NonNegative => l = l.max(0),
                Sign::NonPositive => h = h.min(0),
                Sign::Zero => (l, h) = (0, 0),
            }
            if l > h {
                return Err(Error::InvalidParameter(format!(
                    "sign constraint on feature {j} leaves no value in [{}, {}]",
                    b.coef_min, b.coef_max
                )));
            }
            lo.push(l);
            hi.push(h);
        }
        Ok((lo, hi))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScoringStats {
    pub nodes_expanded: u64,
    pub nodes_pruned: u64,
    pub exhaustive_nodes: u64,
    pub points_evaluated: u64,
    pub cuts: usize,
    pub incumbent_updates: u64,
}

/// The result of a lattice search.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoringCertificate {
    pub system: ScoringSystem,
    /// `loss + lambda * sparsity` of `system`.
    pub objective: f64,
    pub loss: f64,
    pub optimal: bool,
    /// Upper bound on `objective - optimum`; at most `tolerance` when optimal.
    pub gap: f64,
    pub bounds: CoefficientBounds,
    pub sparsity_cap: Option<usize>,
    pub tolerance: f64,
    pub baseline_objective: Option<f64>,
    pub stats: ScoringStats,
    pub wall_time: Duration,
}

struct Node {
    lo: Vec<i64>,
    hi: Vec<i64>,
    bound: f64,
    id: u64,
    /// Cuts that carried the parent's bound.
    cuts: Vec<usize>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // max-heap: the smallest bound, then the oldest node, comes out first
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.total_cmp(&self.bound).then(other.id.cmp(&self.id))
    }
}

#[derive(Clone, Debug)]
struct Incumbent {
    objective: f64,
    loss: f64,
    b: Vec<i64>,
}

/// Rounds of bound tightening per large box before branching.
const BOUND_ROUNDS: usize = 3;
/// Cuts kept for the dual ascent in a large box.
const DUAL_CUTS: usize = 48;
const DUAL_STEPS: usize = 40;
/// Cuts (besides those anchored inside) used to seed an exhaustive box.
const SEED_CUTS: usize = 16;
/// Newest cuts every box considers on top of its parent's.
const RECENT_CUTS: usize = 256;
const POLISH_SWEEPS: usize = 50;

struct Solver<'a> {
    data: &'a LossData,
    lambda: f64,
    cap: usize,
    tol: f64,
    root_lo: Vec<i64>,
    root_hi: Vec<i64>,
    pool: CutPool,
    incumbent: Option<Incumbent>,
    polished: HashSet<Vec<i64>>,
    stats: ScoringStats,
}

fn nnz(b: &[i64]) -> usize {
    b[1..].iter().filter(|&&v| v != 0).count()
}

fn forced_nonzero(lo: &[i64], hi: &[i64]) -> usize {
    (1..lo.len()).filter(|&j| lo[j] > 0 || hi[j] < 0).count()
}

impl Solver<'_> {
    fn feasible(&self, b: &[i64]) -> bool {
        nnz(b) <= self.cap
            && b.iter()
                .zip(self.root_lo.iter().zip(&self.root_hi))
                .all(|(v, (l, h))| l <= v && v <= h)
    }

    fn penalty(&self, b: &[i64]) -> f64 {
        self.lambda * nnz(b) as f64
    }

    fn consider(&mut self, b: &[i64], loss: f64) {
        if !self.feasible(b) {
            return;
        }
        let objective = loss + self.penalty(b);
        let better = match &self.incumbent {
            None => true,
            Some(inc) => {
                objective < inc.objective - 1e-12
                    || (objective <= inc.objective + 1e-12 && (nnz(b), b) < (nnz(&inc.b), inc.b.as_slice()))
            }
        };
        if better {
            self.stats.incumbent_updates += 1;
            self.incumbent = Some(Incumbent {
                objective,
                loss,
                b: b.to_vec(),
            });
        }
    }

    /// Adds a cut at `b` and offers `b` as an incumbent.
    fn visit(&mut self, b: &[i64]) -> (f64, usize) {
        let idx = self.pool.add(b, self.data);
        let loss = self.pool.cuts()[idx].value;
        self.stats.points_evaluated += 1;
        self.consider(b, loss);
        (loss, idx)
    }

    /// Integer coordinate descent from `start`: moves one coefficient at a
    /// time to its best value in range while the objective drops, then
    /// visits the result.
    fn polish(&mut self, start: &[i64]) {
        if !self.feasible(start) || !self.polished.insert(start.to_vec()) {
            return;
        }
        let objective = |b: &[i64]| self.data.loss(&as_f64(b)) + self.penalty(b);
        let mut b = start.to_vec();
        let mut best = objective(&b);
        for _ in 0..POLISH_SWEEPS {
            let mut improved = false;
            for j in 0..b.len() {
                let current = b[j];
                let mut choice = current;
                let mut cand = b.clone();
                for v in self.root_lo[j]..=self.root_hi[j] {
                    if v == current {
                        continue;
                    }
                    cand[j] = v;
                    if !self.feasible(&cand) {
                        continue;
                    }
                    let value = objective(&cand);
                    if value < best - 1e-12 {
                        best = value;
                        choice = v;
                    }
                }
                if choice != current {
                    b[j] = choice;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        self.polished.insert(b.clone());
        self.visit(&b);
    }

    /// Polishes the incumbent unless that was already done.
    fn polish_incumbent(&mut self) {
        if let Some(b) = self.incumbent.as_ref().map(|i| i.b.clone()) {
            if !self.polished.contains(&b) {
                self.polish(&b);
            }
        }
    }

    /// The node's inherited cuts plus the newest ones.
    fn candidates(&self, inherited: &[usize]) -> Vec<usize> {
        let len = self.pool.len();
        let mut out: Vec<usize> = inherited.to_vec();
        out.extend(len.saturating_sub(RECENT_CUTS)..len);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn incumbent_value(&self) -> f64 {
        self.incumbent.as_ref().map_or(f64::INFINITY, |i| i.objective)
    }

    fn closes(&self, bound: f64) -> bool {
        bound >= self.incumbent_value() - self.tol
    }

    /// Lower bound on the envelope of the `candidates` cuts over
    /// `[lo, hi]`, a vertex worth cutting at next, and the cuts that
    /// carried the bound.
    fn envelope_bound(&self, lo: &[i64], hi: &[i64], candidates: &[usize]) -> (f64, Vec<i64>, Vec<usize>) {
        let cuts = self.pool.cuts();
        if candidates.is_empty() {
            return (0.0, lo.to_vec(), Vec::new());
        }
        let singles: Vec<(f64, Vec<i64>)> = candidates.iter().map(|&k| cuts[k].box_min(lo, hi)).collect();
        let mut ranked: Vec<usize> = (0..candidates.len()).collect();
        ranked.sort_by(|&a, &b| singles[b].0.total_cmp(&singles[a].0).then(a.cmp(&b)));
        ranked.truncate(DUAL_CUTS);
        let (mut best, mut best_vertex) = singles[ranked[0]].clone();
        let order: Vec<usize> = ranked.iter().map(|&i| candidates[i]).collect();
        if order.len() > 1 {
            let d = lo.len();
            let m = order.len();
            let mut weights = vec![0.5 / (m - 1) as f64; m];
            weights[0] = 0.5;
            for step in 0..DUAL_STEPS {
                let mut g = vec![0.0; d];
                for (w, &k) in weights.iter().zip(&order) {
                    for (gj, cj) in g.iter_mut().zip(&cuts[k].gradient) {
                        *gj += w * cj;
                    }
                }
                let vertex: Vec<i64> = (0..d).map(|j| if g[j] > 0.0 { lo[j] } else { hi[j] }).collect();
                let values: Vec<f64> = order.iter().map(|&k| cuts[k].at_int(&vertex)).collect();
                let phi: f64 = weights.iter().zip(&values).map(|(w, v)| w * v).sum();
                if phi > best {
                    best = phi;
                    best_vertex = vertex;
                }
                let hi_v = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lo_v = values.iter().copied().fold(f64::INFINITY, f64::min);
                let range = hi_v - lo_v;
                if range <= 1e-15 {
                    break;
                }
                // exponentiated-gradient ascent on the simplex
                let eta = 2.0 / ((step + 1) as f64).sqrt() / range;
                let mut total = 0.0;
                for (w, v) in weights.iter_mut().zip(&values) {
                    *w *= (eta * (v - hi_v)).exp();
                    total += *w;
                }
                weights.iter_mut().for_each(|w| *w /= total);
            }
        }
        (best.max(0.0), best_vertex, order)
    }

    /// Solves a small box exactly. Returns the box minimum, or a bound at
    /// least as large as the incumbent if the box cannot improve on it.
    fn solve_small(&mut self, lo: &[i64], hi: &[i64], candidates: &[usize]) -> f64 {
        self.stats.exhaustive_nodes += 1;
        let d = lo.len();
        let widths: Vec<i64> = (0..d).map(|j| hi[j] - lo[j] + 1).collect();
        let count = widths.iter().product::<i64>() as usize;
        let point = |mut i: usize| -> Vec<i64> {
            let mut b = vec![0; d];
            for j in (0..d).rev() {
                let w = widths[j] as usize;
                b[j] = lo[j] + (i % w) as i64;
                i /= w;
            }
            b
        };
        let points: Vec<Vec<i64>> = (0..count).map(point).collect();
        let penalty: Vec<f64> = points
            .iter()
            .map(|b| if nnz(b) <= self.cap { self.penalty(b) } else { f64::INFINITY })
            .collect();

        let center: Vec<f64> = (0..d).map(|j| (lo[j] + hi[j]) as f64 / 2.0).collect();
        let cuts = self.pool.cuts();
        let mut seeds: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&k| cuts[k].anchor.iter().enumerate().all(|(j, &a)| lo[j] <= a && a <= hi[j]))
            .collect();
        let mut outside: Vec<(f64, usize)> = candidates.iter().map(|&k| (cuts[k].at(&center), k)).collect();
        outside.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        seeds.extend(outside.iter().take(SEED_CUTS).map(|&(_, k)| k));
        seeds.sort_unstable();
        seeds.dedup();
        let mut envelope: Vec<f64> = par::map(&points, |b| {
            seeds.iter().map(|&k| cuts[k].at_int(b)).fold(0.0, f64::max)
        });

        loop {
            let Some((value, i)) = par::argmin_range(0..count, |i| {
                penalty[i].is_finite().then(|| envelope[i] + penalty[i])
            }) else {
                return f64::INFINITY;
            };
            if self.closes(value) {
                return value;
            }
            let b = points[i].clone();
            let (loss, idx) = self.visit(&b);
            if loss <= envelope[i] + 1e-12 {
                return value;
            }
            let cut = &self.pool.cuts()[idx];
            let updated: Vec<f64> = par::map_range(0..count, |t| envelope[t].max(cut.at_int(&points[t])));
            envelope = updated;
            envelope[i] = loss;
        }
    }

    fn run(&mut self, max_nodes: u64, mem_budget: Option<usize>, exhaustive_limit: u64) -> (bool, f64) {
        let d = self.root_lo.len();
        let mut heap = BinaryHeap::new();
        let mut next_id = 0u64;
        heap.push(Node {
            lo: self.root_lo.clone(),
            hi: self.root_hi.clone(),
            bound: 0.0,
            id: next_id,
            cuts: Vec::new(),
        });
        let node_bytes = d * 16 + 64;
        let cut_bytes = d * 24 + 96;
        while let Some(mut node) = heap.pop() {
            self.polish_incumbent();
            if self.closes(node.bound) {
                // best-first: every remaining box is at least this large
                self.stats.nodes_pruned += 1 + heap.len() as u64;
                heap.clear();
                break;
            }
            if self.stats.nodes_expanded >= max_nodes
                || mem_budget.is_some_and(|m| heap.len() * node_bytes + self.pool.len() * cut_bytes > m)
            {
                heap.push(node);
                break;
            }
            self.stats.nodes_expanded += 1;

            let mut forced = forced_nonzero(&node.lo, &node.hi);
            if forced > self.cap {
                self.stats.nodes_pruned += 1;
                continue;
            }
            if forced == self.cap {
                for j in 1..d {
                    if node.lo[j] <= 0 && node.hi[j] >= 0 {
                        node.lo[j] = 0;
                        node.hi[j] = 0;
                    }
                }
                forced = forced_nonzero(&node.lo, &node.hi);
            }
            let points = (0..d).try_fold(1u64, |acc, j| acc.checked_mul((node.hi[j] - node.lo[j] + 1) as u64));
            if points.is_some_and(|p| p <= exhaustive_limit) {
                let candidates = self.candidates(&node.cuts);
                let value = self.solve_small(&node.lo, &node.hi, &candidates);
                if self.closes(value) {
                    self.stats.nodes_pruned += 1;
                }
                continue;
            }

            let center: Vec<i64> = (0..d).map(|j| (node.lo[j] + node.hi[j]).div_euclid(2)).collect();
            self.visit(&center);
            let penalty = self.lambda * forced as f64;
            let mut bound = node.bound;
            let mut closed = false;
            let mut carried = Vec::new();
            for _ in 0..BOUND_ROUNDS {
                let candidates = self.candidates(&node.cuts);
                let (envelope, vertex, top) = self.envelope_bound(&node.lo, &node.hi, &candidates);
                carried = top;
                bound = bound.max(envelope + penalty);
                if self.closes(bound) {
                    closed = true;
                    break;
                }
                if self.pool.has_anchor(&vertex) {
                    break;
                }
                self.visit(&vertex);
            }
            if closed {
                self.stats.nodes_pruned += 1;
                continue;
            }
            let j = (0..d)
                .max_by(|&a, &b| {
                    (node.hi[a] - node.lo[a]).cmp(&(node.hi[b] - node.lo[b])).then(b.cmp(&a))
                })
                .expect("at least the intercept");
            let mid = node.lo[j] + (node.hi[j] - node.lo[j]).div_euclid(2);
            let mut left_hi = node.hi.clone();
            left_hi[j] = mid;
            let mut right_lo = node.lo.clone();
            right_lo[j] = mid + 1;
            next_id += 1;
            heap.push(Node {
                lo: node.lo.clone(),
                hi: left_hi,
                bound,
                id: next_id,
                cuts: carried.clone(),
            });
            next_id += 1;
            heap.push(Node {
                lo: right_lo,
                hi: node.hi,
                bound,
                id: next_id,
                cuts: carried,
            });
        }
        let floor = heap.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
        let optimal = heap.is_empty();
        let gap = if optimal {
            0.0
        } else {
            (self.incumbent_value() - floor).max(0.0)
        };
        (optimal, gap)
    }
}

/// The fitted coefficients scaled so the largest feature coefficient has
/// each integer magnitude the box allows, rounded and clamped.
fn scaled_roundings(fit: &[f64], lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let largest = fit[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if largest <= 1e-12 {
        return Vec::new();
    }
    let top = (1..lo.len()).map(|j| lo[j].abs().max(hi[j].abs())).max().unwrap_or(0);
    let mut out: Vec<Vec<i64>> = (1..=top)
        .map(|t| {
            let scale = t as f64 / largest;
            fit.iter()
                .enumerate()
                .map(|(j, &c)| ((c * scale).round() as i64).clamp(lo[j], hi[j]))
                .collect()
        })
        .collect();
    out.dedup();
    out
}

/// Finds integer coefficients minimizing average logistic loss plus
/// `lambda * (nonzero coefficients)` within the configured box, signs and
/// sparsity cap.
///
/// Running out of nodes or memory is not an error: the certificate has
/// `optimal == false` and a positive gap.
pub fn solve_lattice(ds: &Dataset, cfg: &LatticeConfig) -> Result<ScoringCertificate> {
    let started = Instant::now();
    let (root_lo, root_hi) = cfg.root_box(ds.p())?;
    let cap = cfg.sparsity_cap.unwrap_or(ds.p());
    if forced_nonzero(&root_lo, &root_hi) > cap {
        return Err(Error::Infeasible(format!(
            "coefficient bounds force more than {cap} nonzero coefficients"
        )));
    }
    let data = LossData::new(ds);
    let lambda = cfg.lambda.to_f64();
    let baseline = if cfg.seed_with_baseline {
        Some(round_logreg_baseline(ds, &cfg.bounds, cfg.lambda)?)
    } else {
        None
    };

    let (box_lo, box_hi) = (root_lo.clone(), root_hi.clone());
    par::with_threads(cfg.threads, || {
        let mut solver = Solver {
            data: &data,
            lambda,
            cap,
            tol: cfg.tolerance,
            root_lo,
            root_hi,
            pool: CutPool::new(),
            incumbent: None,
            polished: HashSet::new(),
            stats: ScoringStats::default(),
        };
        let d = ds.p() + 1;
        let clamp = |b: &[i64]| -> Vec<i64> {
            (0..d).map(|j| b[j].clamp(box_lo[j], box_hi[j])).collect()
        };
        solver.visit(&clamp(&vec![0; d]));
        // best intercept-only model, by a scan of the intercept range
        let zero_features = clamp(&vec![0; d]);
        let intercept = (box_lo[0]..=box_hi[0])
            .map(|v| {
                let mut b = zero_features.clone();
                b[0] = v;
                (data.loss(&as_f64(&b)), v)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.abs().cmp(&b.1.abs())).then(a.1.cmp(&b.1)))
            .map(|(_, v)| v)
            .unwrap_or(0);
        let mut b = zero_features;
        b[0] = intercept;
        solver.visit(&b);
        solver.polish(&b);
        if let Some(base) = &baseline {
            solver.visit(&clamp(&base.system.vector()));
            for start in scaled_roundings(&base.fit.coefficients, &box_lo, &box_hi) {
                solver.polish(&start);
            }
        }
        for start in &cfg.warm_starts {
            if start.len() == d {
                solver.visit(&clamp(start));
                solver.polish(&clamp(start));
            }
        }

        let (optimal, gap) = solver.run(cfg.max_nodes, cfg.mem_budget, cfg.exhaustive_limit);
        solver.stats.cuts = solver.pool.len();
        let inc = solver.incumbent.clone().ok_or_else(|| {
            Error::Infeasible("no coefficient vector satisfies the sparsity cap and signs".into())
        })?;
        let baseline_objective = baseline.as_ref().map(|base| {
            let b = base.system.vector();
            data.loss(&as_f64(&b)) + lambda * nnz(&b) as f64
        });
        if let (Some(bo), Some(base)) = (baseline_objective, &baseline) {
            if solver.feasible(&base.system.vector()) {
                assert!(inc.objective <= bo + 1e-9, "certified objective above the baseline");
            }
        }
        log::info!(
            "lattice search: {} boxes, {} cuts, objective {:.6}, optimal={optimal}",
            solver.stats.nodes_expanded,
            solver.stats.cuts,
            inc.objective
        );
        Ok(ScoringCertificate {
            system: ScoringSystem::from_vector(&inc.b, ds, cfg.lambda),
            objective: inc.objective,
            loss: inc.loss,
            optimal,
            gap: if optimal { 0.0 } else { gap },
            bounds: cfg.bounds,
            sparsity_cap: cfg.sparsity_cap,
            tolerance: cfg.tolerance,
            baseline_objective,
            stats: solver.stats,
            wall_time: started.elapsed(),
        })
    })
}

/// Default regularization path; on typical data it walks model sizes from
/// one or two terms up to about nine.
pub const DEFAULT_LAMBDA_PATH: [&str; 7] = ["0.05", "0.02", "0.01", "0.005", "0.0025", "0.001", "0.0005"];

/// Solves once per `lambda`, warm-starting each solve from the previous
/// optimum.
pub fn lambda_path(ds: &Dataset, cfg: &LatticeConfig, lambdas: &[Rational]) -> Result<Vec<ScoringCertificate>> {
    let mut out: Vec<ScoringCertificate> = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let mut step = LatticeConfig {
            lambda,
            ..cfg.clone()
        };
        if let Some(prev) = out.last() {
            step.warm_starts.push(prev.system.vector());
        }
        out.push(solve_lattice(ds, &step)?);
    }
    Ok(out)
}

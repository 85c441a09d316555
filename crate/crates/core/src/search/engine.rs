//! Synchronous-parallel best-first branch-and-bound over rule-list prefixes.
//!
//! Each round pops up to `batch_size` prefixes, evaluates all of their
//! children in parallel, then merges the results in queue order. The merge
//! is the only place the incumbent, the queue and the symmetry memo change,
//! so a run does the same work for any thread count.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use crate::bitvec::BitVector;
use crate::data::{Antecedent, Dataset};
use crate::error::{Error, Result};
use crate::par;
use crate::rules::{objective, RuleList};
use crate::search::bounds::{BoundBreakdown, EquivalentPoints, Scale};
use crate::search::certificate::{Certificate, IncumbentEvent, SearchStats, TraceEntry};
use crate::search::config::{QueueDiscipline, SearchConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    Optimize,
    /// Keep every list whose objective is at most `threshold` units.
    Enumerate { threshold: u128 },
}

/// The antecedents a search may use, and feature-coverage requirements.
pub(crate) struct Universe<'a> {
    pub ants: &'a [Antecedent],
    pub allowed: Vec<bool>,
    /// Bit `g` set when the antecedent covers requirement group `g`.
    pub req_masks: Vec<u64>,
    pub req_all: u64,
}

impl<'a> Universe<'a> {
    pub fn unconstrained(ants: &'a [Antecedent]) -> Self {
        Universe {
            ants,
            allowed: vec![true; ants.len()],
            req_masks: vec![0; ants.len()],
            req_all: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PruneKind {
    Hierarchical,
    Lookahead,
    EquivalentPoints,
    Support,
    AccurateSupport,
    EmptyCapture,
    Symmetry,
}

struct Node {
    rules: Vec<u32>,
    captured: BitVector,
    errors: u64,
    cap_pos: u64,
    covered: u64,
    bounds: BoundBreakdown,
    ext_bound: u128,
}

impl Node {
    fn bytes(&self) -> usize {
        std::mem::size_of::<Node>() + self.rules.len() * 4 + self.captured.words().len() * 8 + 32
    }
}

struct Entry {
    key: (u128, u128),
    node: Node,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.key, &self.node.rules).cmp(&(other.key, &other.node.rules))
    }
}

struct MemoEntry {
    prefix_cost: u128,
    len: usize,
    rules: Vec<u32>,
}

enum ChildOutcome {
    Pruned(PruneKind, Option<(Vec<u32>, BoundBreakdown)>),
    Child { node: Node, objective: Option<u128> },
}

#[derive(Clone, Debug)]
pub(crate) struct Incumbent {
    pub units: u128,
    pub rules: Vec<u32>,
}

impl Incumbent {
    fn beaten_by(&self, units: u128, rules: &[u32]) -> bool {
        (units, rules.len(), rules) < (self.units, self.rules.len(), self.rules.as_slice())
    }
}

pub(crate) struct Outcome {
    pub incumbent: Option<Incumbent>,
    pub optimal: bool,
    pub gap_units: u128,
    pub stats: SearchStats,
    pub trace: Vec<TraceEntry>,
    pub found: Vec<(Vec<u32>, u128)>,
    pub truncated: bool,
    pub scale: Scale,
}

struct Ctx<'a> {
    uni: &'a Universe<'a>,
    label: &'a BitVector,
    total_pos: u64,
    n: u64,
    scale: Scale,
    eq: EquivalentPoints,
    cfg: &'a SearchConfig,
    mode: Mode,
}

impl Ctx<'_> {
    fn optimize(&self) -> bool {
        self.mode == Mode::Optimize
    }

    fn default_errors(&self, captured_count: u64, cap_pos: u64) -> u64 {
        let rest = self.n - captured_count;
        let pos = self.total_pos - cap_pos;
        pos.min(rest - pos)
    }

    fn make_node(&self, rules: Vec<u32>, captured: BitVector, errors: u64, cap_pos: u64, covered: u64) -> (Node, Option<u128>) {
        let hierarchical = self.scale.units(errors, rules.len());
        let eq_mass = self.eq.uncaptured_mass(&captured) as u128 * self.scale.error_cost;
        let bounds = BoundBreakdown {
            hierarchical,
            lookahead: hierarchical + self.scale.rule_cost,
            equivalent_points: hierarchical + eq_mass,
            combined_extension: hierarchical + eq_mass + self.scale.rule_cost,
        };
        let t = self.cfg.bounds;
        let ext_bound = hierarchical
            + if t.lookahead { self.scale.rule_cost } else { 0 }
            + if t.equivalent_points { eq_mass } else { 0 };
        let objective = (covered == self.uni.req_all).then(|| {
            let d = self.default_errors(captured.count_ones() as u64, cap_pos);
            self.scale.units(errors + d, rules.len())
        });
        (
            Node {
                rules,
                captured,
                errors,
                cap_pos,
                covered,
                bounds,
                ext_bound,
            },
            objective,
        )
    }

    fn expand(&self, node: &Node) -> Vec<ChildOutcome> {
        let ants = self.uni.ants;
        let mut out = Vec::new();
        for r in 0..ants.len() {
            if !self.uni.allowed[r] || node.rules.contains(&(r as u32)) {
                continue;
            }
            let support = &ants[r].support;
            let count = support.and_not_count(&node.captured);
            let pos = BitVector::and_and_not_count(support, self.label, &node.captured);
            let neg = count - pos;
            let opens_requirement = self.uni.req_masks[r] & !node.covered != 0;
            let prunable = self.optimize() && self.cfg.bounds.support && !opens_requirement;
            let pruned = if !prunable {
                None
            } else if count == 0 {
                Some(PruneKind::EmptyCapture)
            } else if self.scale.below_support(count) {
                Some(PruneKind::Support)
            } else if self.scale.below_support(pos.max(neg)) {
                Some(PruneKind::AccurateSupport)
            } else {
                None
            };
            if let (Some(kind), false) = (pruned, self.cfg.trace) {
                out.push(ChildOutcome::Pruned(kind, None));
                continue;
            }
            let mut rules = node.rules.clone();
            rules.push(r as u32);
            let (child, objective) = self.make_node(
                rules,
                node.captured.or(support),
                node.errors + pos.min(neg) as u64,
                node.cap_pos + pos as u64,
                node.covered | self.uni.req_masks[r],
            );
            match pruned {
                Some(kind) => out.push(ChildOutcome::Pruned(kind, Some((child.rules, child.bounds)))),
                None => out.push(ChildOutcome::Child { node: child, objective }),
            }
        }
        out
    }

    /// `Ok` if some strict extension of `node` could still matter.
    fn extension_check(&self, node: &Node, incumbent: Option<&Incumbent>) -> std::result::Result<(), PruneKind> {
        let keeps = |bound: u128| -> bool {
            match self.mode {
                Mode::Enumerate { threshold } => bound <= threshold,
                Mode::Optimize => match incumbent {
                    None => true,
                    Some(inc) => match bound.cmp(&inc.units) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => {
                            // ties only help if an extension sorts first
                            let len = node.rules.len();
                            match (len + 1).cmp(&inc.rules.len()) {
                                Ordering::Less => true,
                                Ordering::Greater => false,
                                Ordering::Equal => node.rules.as_slice() <= &inc.rules[..len],
                            }
                        }
                    },
                },
            }
        };
        let t = self.cfg.bounds;
        let b = &node.bounds;
        if !keeps(b.hierarchical) {
            return Err(PruneKind::Hierarchical);
        }
        if t.lookahead && !keeps(b.lookahead) {
            return Err(PruneKind::Lookahead);
        }
        if !keeps(node.ext_bound) {
            return Err(PruneKind::EquivalentPoints);
        }
        Ok(())
    }

    fn entry(&self, node: Node) -> Entry {
        let len = node.rules.len() as u128;
        let key = match self.cfg.queue {
            QueueDiscipline::BestFirst => (node.ext_bound, len),
            QueueDiscipline::BreadthFirst => (len, node.ext_bound),
        };
        Entry { key, node }
    }
}

fn count(stats: &mut SearchStats, kind: PruneKind) {
    let p = &mut stats.pruned;
    match kind {
        PruneKind::Hierarchical => p.hierarchical += 1,
        PruneKind::Lookahead => p.lookahead += 1,
        PruneKind::EquivalentPoints => p.equivalent_points += 1,
        PruneKind::Support => p.support += 1,
        PruneKind::AccurateSupport => p.accurate_support += 1,
        PruneKind::EmptyCapture => p.empty_capture += 1,
        PruneKind::Symmetry => p.symmetry += 1,
    }
}

fn memo_dominates(e: &MemoEntry, node: &Node) -> bool {
    let len = node.rules.len();
    let cost = node.bounds.hierarchical;
    e.len <= len
        && e.prefix_cost <= cost
        && (e.len, e.prefix_cost, e.rules.as_slice()) < (len, cost, node.rules.as_slice())
}

pub(crate) fn run(ds: &Dataset, uni: &Universe<'_>, cfg: &SearchConfig, mode: Mode) -> Outcome {
    let n = ds.n();
    let scale = Scale::new(n, cfg.lambda);
    let allowed_supports = uni
        .ants
        .iter()
        .zip(&uni.allowed)
        .filter(|(_, &ok)| ok)
        .map(|(a, _)| &a.support);
    let ctx = Ctx {
        uni,
        label: ds.label(),
        total_pos: ds.positives() as u64,
        n: n as u64,
        scale,
        eq: EquivalentPoints::from_columns(allowed_supports, ds.label()),
        cfg,
        mode,
    };

    let mut stats = SearchStats::default();
    let mut trace = Vec::new();
    let mut found: Vec<(Vec<u32>, u128)> = Vec::new();
    let mut truncated = false;
    let mut incumbent: Option<Incumbent> = None;
    let mut queue: BinaryHeap<Reverse<Entry>> = BinaryHeap::new();
    let mut memo: HashMap<(BitVector, u64), MemoEntry> = HashMap::new();
    let mut bytes = 0usize;
    let use_memo = ctx.optimize() && cfg.bounds.symmetry;

    let (root, root_obj) = ctx.make_node(Vec::new(), BitVector::zeros(n), 0, 0, 0);
    if cfg.trace {
        trace.push(TraceEntry {
            rules: Vec::new(),
            bounds: root.bounds,
        });
    }
    stats.children_evaluated += 1;
    if let Some(obj) = root_obj {
        match mode {
            Mode::Optimize => {
                incumbent = Some(Incumbent {
                    units: obj,
                    rules: Vec::new(),
                });
                stats.incumbent_trace.push(IncumbentEvent {
                    expansions: 0,
                    objective: crate::rational::fraction_string(&scale.to_ratio(obj)),
                    units: obj,
                });
            }
            Mode::Enumerate { threshold } => {
                if obj <= threshold {
                    found.push((Vec::new(), obj));
                }
            }
        }
    }
    if cfg.max_rules > 0 {
        match ctx.extension_check(&root, incumbent.as_ref()) {
            Ok(()) => {
                bytes += root.bytes();
                queue.push(Reverse(ctx.entry(root)));
                stats.nodes_queued += 1;
            }
            Err(kind) => count(&mut stats, kind),
        }
    }

    let mut stopped = false;
    'search: while !queue.is_empty() {
        if cfg.max_expansions.is_some_and(|m| stats.nodes_expanded >= m)
            || cfg.mem_budget.is_some_and(|m| bytes > m)
        {
            stopped = true;
            break;
        }
        let mut batch = Vec::with_capacity(cfg.batch_size);
        while batch.len() < cfg.batch_size {
            let Some(Reverse(entry)) = queue.pop() else { break };
            let node = entry.node;
            bytes = bytes.saturating_sub(node.bytes());
            if use_memo {
                if let Some(e) = memo.get(&(node.captured.clone(), node.covered)) {
                    if memo_dominates(e, &node) {
                        count(&mut stats, PruneKind::Symmetry);
                        continue;
                    }
                }
            }
            if let Err(kind) = ctx.extension_check(&node, incumbent.as_ref()) {
                count(&mut stats, kind);
                continue;
            }
            batch.push(node);
        }
        if batch.is_empty() {
            continue;
        }
        stats.nodes_expanded += batch.len() as u64;
        let results: Vec<Vec<ChildOutcome>> = par::map(&batch, |node| ctx.expand(node));

        let mut children = Vec::new();
        for outcome in results.into_iter().flatten() {
            stats.children_evaluated += 1;
            match outcome {
                ChildOutcome::Pruned(kind, traced) => {
                    count(&mut stats, kind);
                    if let Some((rules, bounds)) = traced {
                        trace.push(TraceEntry {
                            rules: rules.iter().map(|&r| r as usize).collect(),
                            bounds,
                        });
                    }
                }
                ChildOutcome::Child { node, objective } => {
                    if cfg.trace {
                        trace.push(TraceEntry {
                            rules: node.rules.iter().map(|&r| r as usize).collect(),
                            bounds: node.bounds,
                        });
                    }
                    if let Some(obj) = objective {
                        match mode {
                            Mode::Optimize => {
                                if incumbent.as_ref().map_or(true, |inc| inc.beaten_by(obj, &node.rules)) {
                                    stats.incumbent_trace.push(IncumbentEvent {
                                        expansions: stats.nodes_expanded,
                                        objective: crate::rational::fraction_string(&scale.to_ratio(obj)),
                                        units: obj,
                                    });
                                    incumbent = Some(Incumbent {
                                        units: obj,
                                        rules: node.rules.clone(),
                                    });
                                }
                            }
                            Mode::Enumerate { threshold } => {
                                if obj <= threshold {
                                    if found.len() >= cfg.max_models {
                                        truncated = true;
                                        stopped = true;
                                        break 'search;
                                    }
                                    found.push((node.rules.clone(), obj));
                                }
                            }
                        }
                    }
                    children.push(node);
                }
            }
        }

        for node in children {
            if node.rules.len() >= cfg.max_rules {
                continue;
            }
            if let Err(kind) = ctx.extension_check(&node, incumbent.as_ref()) {
                count(&mut stats, kind);
                continue;
            }
            if use_memo {
                let key = (node.captured.clone(), node.covered);
                match memo.get_mut(&key) {
                    Some(e) if memo_dominates(e, &node) => {
                        count(&mut stats, PruneKind::Symmetry);
                        continue;
                    }
                    Some(e) => {
                        if e.len >= node.rules.len() && e.prefix_cost >= node.bounds.hierarchical {
                            e.len = node.rules.len();
                            e.prefix_cost = node.bounds.hierarchical;
                            e.rules = node.rules.clone();
                        }
                    }
                    None => {
                        bytes += node.bytes();
                        memo.insert(
                            key,
                            MemoEntry {
                                prefix_cost: node.bounds.hierarchical,
                                len: node.rules.len(),
                                rules: node.rules.clone(),
                            },
                        );
                    }
                }
            }
            bytes += node.bytes();
            queue.push(Reverse(ctx.entry(node)));
            stats.nodes_queued += 1;
        }
        stats.max_queue = stats.max_queue.max(queue.len());
    }

    let gap_units = match (&incumbent, stopped) {
        (Some(inc), true) => {
            let floor = queue.iter().map(|Reverse(e)| e.node.ext_bound).min().unwrap_or(inc.units);
            inc.units.saturating_sub(floor)
        }
        _ => 0,
    };
    Outcome {
        incumbent,
        optimal: !stopped,
        gap_units,
        stats,
        trace,
        found,
        truncated,
        scale,
    }
}

pub(crate) fn check_inputs(ds: &Dataset, ants: &[Antecedent], cfg: &SearchConfig) -> Result<()> {
    cfg.validate()?;
    if ants.is_empty() {
        return Err(Error::InvalidParameter("antecedent list is empty".into()));
    }
    if ants.len() > u32::MAX as usize {
        return Err(Error::InvalidParameter("too many antecedents".into()));
    }
    if let Some(a) = ants.iter().find(|a| a.support.len() != ds.n()) {
        return Err(Error::LengthMismatch {
            expected: ds.n(),
            found: a.support.len(),
        });
    }
    let mut seen = std::collections::HashSet::new();
    for a in ants {
        if a.conjunction.max_feature().is_some_and(|f| f >= ds.p()) {
            return Err(Error::InvalidParameter(format!(
                "antecedent {} refers to a feature outside the dataset",
                a.conjunction.render(&ds.feature_names())
            )));
        }
        if !seen.insert(&a.conjunction) {
            return Err(Error::InvalidParameter(format!(
                "antecedent {} appears twice",
                a.conjunction.render(&ds.feature_names())
            )));
        }
    }
    Ok(())
}

pub(crate) fn certificate(
    ds: &Dataset,
    ants: &[Antecedent],
    cfg: &SearchConfig,
    outcome: Outcome,
    started: Instant,
) -> Result<Certificate> {
    let Some(inc) = outcome.incumbent else {
        return Err(Error::Infeasible(if outcome.optimal {
            "no rule list within the length limit satisfies the constraints".into()
        } else {
            "search budget exhausted before any feasible rule list was found".into()
        }));
    };
    let antecedents: Vec<usize> = inc.rules.iter().map(|&r| r as usize).collect();
    let model = RuleList::with_majority_labels(
        antecedents.iter().map(|&r| ants[r].conjunction.clone()).collect(),
        ds,
    )?;
    let value = objective(&model, ds, cfg.lambda);
    assert_eq!(
        outcome.scale.to_ratio(inc.units),
        value.value(),
        "incremental and direct objectives disagree"
    );
    Ok(Certificate {
        objective: value,
        model,
        antecedents,
        optimal: outcome.optimal,
        gap: outcome.scale.to_ratio(outcome.gap_units),
        lambda: cfg.lambda,
        max_rules: cfg.max_rules,
        universe_size: ants.len(),
        stats: outcome.stats,
        wall_time: started.elapsed(),
        features: ds.feature_names().iter().map(|s| s.to_string()).collect(),
        trace: outcome.trace,
    })
}

/// Finds an optimal rule list over `ants` with at most `cfg.max_rules`
/// rules, minimizing `errors / n + lambda * rules`.
///
/// Budget exhaustion is not an error: the certificate comes back with
/// `optimal == false` and a gap.
pub fn solve(ds: &Dataset, ants: &[Antecedent], cfg: &SearchConfig) -> Result<Certificate> {
    check_inputs(ds, ants, cfg)?;
    let started = Instant::now();
    let uni = Universe::unconstrained(ants);
    let outcome = par::with_threads(cfg.threads, || run(ds, &uni, cfg, Mode::Optimize));
    log::info!(
        "rule list search: {} expanded, {} pruned, optimal={}",
        outcome.stats.nodes_expanded,
        outcome.stats.pruned.total(),
        outcome.optimal
    );
    certificate(ds, ants, cfg, outcome, started)
}

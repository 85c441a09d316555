//! Certifiably optimal rule lists.
//!
//! [`solve`] runs best-first branch-and-bound over rule-list prefixes,
//! [`enumerate_rashomon`] lists every model within `epsilon` of the optimum
//! and [`resolve_with_constraints`] re-solves with forbidden or required
//! features. [`brute`] holds the exhaustive reference enumerator.

mod bounds;
pub mod brute;
mod certificate;
mod config;
mod constraints;
mod engine;
mod rashomon;

pub use bounds::{lower_bound, prune_rules, BoundBreakdown, EquivalentPoints, Prefix, Scale};
pub use certificate::{Certificate, IncumbentEvent, PruneCounts, SearchStats, TraceEntry};
pub use config::{BoundToggles, QueueDiscipline, SearchConfig};
pub use constraints::{
    enumerate_rashomon_constrained, resolve_with_constraints, ConstrainedCertificate,
    FeatureConstraints,
};
pub use engine::solve;
pub use rashomon::{enumerate_rashomon, RashomonModel, RashomonSet};

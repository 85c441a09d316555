//! Sparse integer scoring systems.
//!
//! [`solve_lattice`] minimizes average logistic loss plus `lambda` per
//! nonzero coefficient over a bounded integer lattice, certifying the
//! result with branch-and-bound on cutting-plane envelopes.
//! [`round_logreg_baseline`] is the rounded logistic regression it is
//! compared against, and [`brute`] the exhaustive reference.

mod baseline;
pub mod brute;
mod card;
mod cuts;
mod lattice;
mod loss;
mod system;

pub use baseline::{fit_logistic, round_logreg_baseline, Baseline, LogisticFit};
pub use card::{render_card, PointsDoc, ScoringDoc, TrainingSummary, SCORING_KIND};
pub use cuts::{add_cut, Cut, CutPool};
pub use lattice::{
    lambda_path, parse_signs, solve_lattice, CoefficientBounds, LatticeConfig, ScoringCertificate,
    ScoringStats, Sign, DEFAULT_LAMBDA_PATH,
};
pub use loss::{log1p_exp, sigmoid, LossData};
pub use system::{logistic_objective, ScoringSystem};

//! Certifiably optimal sparse interpretable models.
//!
//! `lucid_core` trains rule lists and integer scoring systems to global
//! optimality over binarized data, and answers downstream queries on the
//! resulting models: enumeration of near-optimal models, minimum-cost
//! counterfactuals, single-conjunction explanations, and side-by-side
//! comparison against baselines.
//!
//! The pipeline is:
//!
//! 1. [`data`] loads a CSV, binarizes it into packed bit-vector columns
//!    and mines candidate antecedents.
//! 2. [`search`] runs best-first branch-and-bound over rule-list prefixes
//!    and returns a [`search::Certificate`]; [`scoring`] does the same for
//!    integer coefficient lattices with cutting planes.
//! 3. [`recourse`] and [`eval`] consume the trained models.
//!
//! With the default `parallel` feature, data-parallel inner loops run on
//! rayon; disabling it gives a sequential build with identical results.

pub mod bitvec;
pub mod data;
pub mod error;
pub mod model;
pub mod eval;
pub mod par;
pub mod rational;
pub mod recourse;
pub mod rules;
pub mod scoring;
pub mod search;

pub use bitvec::BitVector;
pub use error::{Error, Result};
pub use rational::Rational;

/// Version string embedded in every exported JSON document.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Schema version of the JSON documents written by this crate.
pub const SCHEMA_VERSION: u32 = 1;

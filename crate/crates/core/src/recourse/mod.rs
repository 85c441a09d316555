//! Counterfactual queries and local explanations for trained models.
//!
//! Counterfactuals work on binarized features: a flip sets one feature to
//! the opposite value, at a per-feature cost.

mod cost;
mod explain;
mod query;
mod search;

pub use cost::CostModel;
pub use explain::{local_explanation_dnf, DnfExplanation};
pub use query::{counterfactual_json, narrative, warnings, InstanceDoc, QueryDoc};
pub use search::{enumerate_counterfactuals, min_cost_counterfactual, Counterfactual, Flip, RecourseQuery};

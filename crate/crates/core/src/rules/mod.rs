//! Rule lists, DNF models and the regularized misclassification objective.

mod dnf;
pub mod json;
mod list;
mod objective;

pub use dnf::DnfModel;
pub use list::{LabelNames, Rule, RuleList};
pub use objective::{majority, objective, objective_naive, ObjectiveValue};

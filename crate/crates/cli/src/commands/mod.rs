pub mod binarize;
pub mod brute;
pub mod compare;
pub mod counterfactual;
pub mod riskslim;
pub mod rulelist;

use lucid_core::data::Dataset;
use lucid_core::eval::confusion;
use lucid_core::model::Classifier;
use serde_json::{json, Value};

/// How a command finished, short of an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Done,
    /// A search budget ran out; outputs hold the best model and its gap.
    Gap,
    /// The query has no answer.
    Infeasible,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Done => 0,
            Status::Gap => 3,
            Status::Infeasible => 4,
        }
    }
}

pub(crate) fn mib(budget: Option<usize>) -> Option<usize> {
    budget.map(|m| m.saturating_mul(1 << 20))
}

/// Train and (when held out) test confusion reports.
pub(crate) fn evaluation(model: &dyn Classifier, train: &Dataset, test: Option<&Dataset>) -> anyhow::Result<Value> {
    let train = confusion(model, train)?;
    let test = test.map(|t| confusion(model, t)).transpose()?;
    Ok(json!({
        "train": train.to_json(),
        "test": test.map(|t| t.to_json()),
    }))
}

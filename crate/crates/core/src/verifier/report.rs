use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one seeded randomized property run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub samples_run: usize,
    pub passed: bool,
    pub max_residual: f64,
    pub first_counterexample: Option<Value>,
    pub seed: u64,
}

impl PropertyReport {
    /// One line of line-delimited JSON.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report fields always serialize")
    }
}

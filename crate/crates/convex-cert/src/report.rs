//! The machine-readable report document emitted by the CLI.
//!
//! JSON output is deterministic for a fixed run spec and seed except for
//! the `timing_ms` field; counterexample coordinates are serialized as
//! JSON numbers using the shortest lossless decimal form, so they parse
//! back to the identical f64 bits.

use serde::{Deserialize, Serialize};

use crate::checker::{AxiomSuiteReport, IdentitySuiteReport, Verdict};
use crate::conditions::ConditionId;
use crate::estimate::{DagReport, LEstimate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpecEcho {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fn_spec: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cond: Option<ConditionId>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l: Option<f64>,
    pub seed: u64,
    pub n_samples: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub box_override: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha_strategy: Option<String>,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSection {
    pub cond: ConditionId,
    pub l: f64,
    pub holds: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub run_spec: RunSpecEcho,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub axioms: Option<AxiomSuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub identities: Option<IdentitySuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub check: Option<CheckSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l_estimate: Option<LEstimate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dag: Option<DagReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    pub timing_ms: f64,
}

impl ReportDocument {
    pub fn new(run_spec: RunSpecEcho) -> Self {
        ReportDocument {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            run_spec,
            axioms: None,
            identities: None,
            check: None,
            l_estimate: None,
            dag: None,
            error: None,
            timing_ms: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

//! The single tolerance authority: every "does this instance satisfy the
//! inequality" decision goes through [`ToleranceMode::accept`].

use serde::{Deserialize, Serialize};

/// Mixed absolute/relative acceptance: a residual passes when
/// `residual <= abs_tol + rel_tol * scale`, where `scale` is
/// max(1, |lhs|, |rhs|) of the inequality being checked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceMode {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for ToleranceMode {
    fn default() -> Self {
        ToleranceMode {
            abs_tol: 1e-9,
            rel_tol: 1e-7,
        }
    }
}

impl ToleranceMode {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        assert!(abs_tol > 0.0 && rel_tol > 0.0, "tolerances must be positive");
        ToleranceMode { abs_tol, rel_tol }
    }

    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale.max(1.0)
    }

    pub fn accept(&self, residual: f64, scale: f64) -> bool {
        residual <= self.threshold(scale)
    }
}

//! Inequality ledger records shared by pipelines and the CLI.
//!
//! Every bound a run encounters is recorded as `(id, lhs, rhs, met)` —
//! no silent checks. Ids are stable strings so ledgers diff cleanly
//! across runs and implementations.

use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct IneqRecord {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub met: bool,
}

impl IneqRecord {
    pub fn new(id: &str, lhs: f64, rhs: f64, met: bool) -> Self {
        IneqRecord {
            id: id.to_string(),
            lhs,
            rhs,
            met,
        }
    }

    /// Record `lhs <= rhs` with an additive tolerance.
    pub fn leq(id: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        IneqRecord::new(id, lhs, rhs, lhs <= rhs + tol)
    }

    /// Record `lhs >= rhs` with an additive tolerance.
    pub fn geq(id: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        IneqRecord::new(id, lhs, rhs, lhs >= rhs - tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_applies_on_the_slack_side() {
        assert!(IneqRecord::leq("x", 1.0 + 1e-12, 1.0, 1e-9).met);
        assert!(!IneqRecord::leq("x", 1.1, 1.0, 1e-9).met);
        assert!(IneqRecord::geq("x", 1.0 - 1e-12, 1.0, 1e-9).met);
    }
}

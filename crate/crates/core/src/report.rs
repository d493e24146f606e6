//! Machine-readable verification reports.
//!
//! Every record follows one rule: pass iff lhs <= rhs * (1 + tol).
//! Inequality checks put the dominated quantity in lhs and the dominating
//! one in rhs with tol as the relative slack; "X within tol of Y" checks
//! put the relative deviation in lhs and the allowed tolerance in rhs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::io::write_atomic;
use crate::spectra::SchattenExponent;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nnz: Option<usize>,
}

impl CheckRecord {
    pub fn bounded(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        CheckRecord {
            name: name.into(),
            lhs,
            rhs,
            tol,
            pass: lhs <= rhs * (1.0 + tol),
            nnz: None,
        }
    }

    pub fn with_nnz(mut self, nnz: usize) -> Self {
        self.nnz = Some(nnz);
        self
    }
}

/// Identifies the instance a report talks about.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub case_id: u8,
    pub n: usize,
    pub k: u32,
    pub p: SchattenExponent,
    pub q: SchattenExponent,
    pub eps: f64,
    pub eps_threshold: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub instance: Option<InstanceSummary>,
    pub checks: Vec<CheckRecord>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(
        instance: Option<InstanceSummary>,
        checks: Vec<CheckRecord>,
        warnings: Vec<String>,
    ) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        VerificationReport {
            instance,
            checks,
            warnings,
            pass,
        }
    }

    pub fn find(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        write_atomic(path, json.as_bytes())
    }
}

//! Numerical thresholds used across the pipeline.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Environment variable holding tolerance overrides as a JSON object
/// (or a path to a file containing one).
pub const TOL_OVERRIDES_ENV: &str = "QAEL_TOL_OVERRIDES";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Hermiticity, relative to `max(1, ||A||_F)`.
    pub tol_herm: f64,
    /// Trace deviation from one for density matrices.
    pub tol_trace: f64,
    /// Most negative eigenvalue accepted as positive semidefinite.
    pub tol_psd: f64,
    /// Relative eigenvalue cutoff of the PSD pseudo-inverse.
    pub rel_tol_pinv: f64,
    /// Zero-eigenvalue threshold, relative to `max(1, ||L||_F)`.
    pub tol_zero: f64,
    /// Eigenvalue threshold defining the support of the steady state.
    pub tol_support: f64,
    /// Choi eigenvalues below `tol_cut * lambda_max` are discarded.
    pub tol_cut: f64,
    /// Residual of the fast generator on slow matrix units.
    pub tol_dfs: f64,
    /// Maximal `||M S0 - lambda S0||_F` for Kraus operators on the DFS.
    pub tol_kraus_scalar: f64,
    /// Jump operators below `tol_jump_drop * scale` are dropped.
    pub tol_jump_drop: f64,
    /// Relative Gram eigenvalue cutoff used when consolidating jumps.
    pub tol_consolidate: f64,
    /// Relative spread under which Choi eigenvalues count as degenerate.
    pub tol_degenerate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_herm: 1e-9,
            tol_trace: 1e-9,
            tol_psd: 1e-9,
            rel_tol_pinv: 1e-10,
            tol_zero: 1e-9,
            tol_support: 1e-9,
            tol_cut: 1e-10,
            tol_dfs: 1e-9,
            tol_kraus_scalar: 1e-6,
            tol_jump_drop: 1e-12,
            tol_consolidate: 1e-10,
            tol_degenerate: 1e-6,
        }
    }
}

impl Tolerances {
    /// Apply key/value overrides; unknown keys are rejected.
    pub fn merged(&self, overrides: &Map<String, Value>) -> Result<Tolerances> {
        let mut base = match serde_json::to_value(self) {
            Ok(Value::Object(m)) => m,
            _ => unreachable!("tolerances serialize to an object"),
        };
        for (k, v) in overrides {
            base.insert(k.clone(), v.clone());
        }
        let merged: Tolerances = serde_json::from_value(Value::Object(base))
            .map_err(|e| Error::Schema(format!("tolerance overrides: {e}")))?;
        merged.validate()?;
        Ok(merged)
    }

    pub fn merged_json(&self, text: &str) -> Result<Tolerances> {
        match serde_json::from_str::<Value>(text) {
            Ok(Value::Object(m)) => self.merged(&m),
            Ok(_) => Err(Error::Schema(
                "tolerance overrides must be a JSON object".into(),
            )),
            Err(e) => Err(Error::Schema(format!("tolerance overrides: {e}"))),
        }
    }

    /// Defaults with the overrides from [`TOL_OVERRIDES_ENV`], if set.
    pub fn from_env() -> Result<Tolerances> {
        match std::env::var(TOL_OVERRIDES_ENV) {
            Ok(s) if !s.trim().is_empty() => {
                let text = if s.trim_start().starts_with('{') {
                    s
                } else {
                    std::fs::read_to_string(&s).map_err(|source| Error::Io {
                        path: s.clone(),
                        source,
                    })?
                };
                Tolerances::default().merged_json(&text)
            }
            _ => Ok(Tolerances::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let v = serde_json::to_value(self).expect("serializable");
        if let Value::Object(m) = v {
            for (k, x) in m {
                let x = x.as_f64().unwrap_or(f64::NAN);
                if !(x.is_finite() && x >= 0.0) {
                    return Err(Error::Schema(format!(
                        "tolerance {k} must be a nonnegative finite number"
                    )));
                }
            }
        }
        Ok(())
    }
}

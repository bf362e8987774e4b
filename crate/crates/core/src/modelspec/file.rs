use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::builtins;
use super::eval::{evaluate, Env};
use super::parser::parse_expression;
use crate::error::{Error, Result};
use crate::operators::{LindbladGenerator, Operator};
use crate::scalar::Real;
use crate::tolerances::Tolerances;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub name: String,
    pub dim: usize,
}

fn zero_expr() -> String {
    "0".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    #[serde(default = "zero_expr")]
    pub hamiltonian: String,
    #[serde(default)]
    pub jumps: Vec<String>,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        GeneratorSpec {
            hamiltonian: zero_expr(),
            jumps: Vec::new(),
        }
    }
}

/// JSON model container.
///
/// `options` holds tolerance overrides (keys of [`Tolerances`]) plus an
/// optional free-form `metadata` entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub factors: Vec<Factor>,
    #[serde(default)]
    pub symbols: BTreeMap<String, String>,
    pub fast: GeneratorSpec,
    #[serde(default)]
    pub slow: GeneratorSpec,
    pub epsilon: f64,
    #[serde(default)]
    pub options: serde_json::Map<String, serde_json::Value>,
}

#[derive(Clone, Debug)]
pub struct LoadedModel<T: Real> {
    pub fast: LindbladGenerator<T>,
    pub slow: LindbladGenerator<T>,
    pub epsilon: T,
    pub tolerances: Tolerances,
    pub metadata: serde_json::Value,
    pub factors: Vec<Factor>,
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("model file serializes")
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    fn check_schema(&self) -> Result<()> {
        if self.factors.is_empty() {
            return Err(Error::Schema("at least one factor is required".into()));
        }
        for f in &self.factors {
            if f.dim == 0 {
                return Err(Error::Schema(format!(
                    "factor '{}' has dimension 0",
                    f.name
                )));
            }
        }
        for name in self.symbols.keys() {
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Schema(format!("invalid symbol name '{name}'")));
            }
            if builtins::is_reserved(name) {
                return Err(Error::Schema(format!(
                    "symbol '{name}' shadows a reserved name"
                )));
            }
        }
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(Error::Schema(format!(
                "epsilon must be finite and >= 0, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    /// Tolerances from `base` overridden by this file's options.
    pub fn tolerances(&self, base: &Tolerances) -> Result<Tolerances> {
        let mut over = self.options.clone();
        over.remove("metadata");
        base.merged(&over)
    }

    pub fn eval_operator<T: Real>(&self, src: &str, what: &str) -> Result<Operator<T>> {
        let ast = parse_expression(src).map_err(|e| {
            log::debug!("parse failure in {what}");
            Error::Parse(e)
        })?;
        let env = Env {
            symbols: &self.symbols,
            dim: self.dim(),
        };
        let v = evaluate(&ast, &env).map_err(|e| match e {
            Error::Eval(m) => Error::Eval(format!("{what}: {m}")),
            Error::DimensionMismatch {
                context,
                expected,
                found,
            } => Error::DimensionMismatch {
                context: format!("{what}: {context}"),
                expected,
                found,
            },
            other => other,
        })?;
        let op = v.into_operator(self.dim()).map_err(|e| match e {
            Error::DimensionMismatch {
                expected, found, ..
            } => Error::dims(what.to_string(), expected, found),
            other => other,
        })?;
        if !op.is_finite() {
            return Err(Error::NonFinite(what.to_string()));
        }
        Ok(op.cast())
    }

    fn generator<T: Real>(
        &self,
        spec: &GeneratorSpec,
        which: &str,
        tol: &Tolerances,
    ) -> Result<LindbladGenerator<T>> {
        let h = self.eval_operator::<T>(&spec.hamiltonian, &format!("{which}.hamiltonian"))?;
        let jumps = spec
            .jumps
            .iter()
            .enumerate()
            .map(|(k, s)| self.eval_operator::<T>(s, &format!("{which}.jumps[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        h.require_hermitian(&format!("{which}.hamiltonian"), tol.tol_herm)?;
        LindbladGenerator::with_tolerance(h, jumps, tol.tol_herm)
    }

    /// Evaluate everything. Accepts `epsilon == 0`; [`load_model`] does not.
    pub fn build<T: Real>(&self, base: &Tolerances) -> Result<LoadedModel<T>> {
        self.check_schema()?;
        let tolerances = self.tolerances(base)?;
        let fast = self.generator(&self.fast, "fast", &tolerances)?;
        let slow = self.generator(&self.slow, "slow", &tolerances)?;
        Ok(LoadedModel {
            fast,
            slow,
            epsilon: T::of(self.epsilon),
            tolerances,
            metadata: self
                .options
                .get("metadata")
                .cloned()
                .unwrap_or(serde_json::Value::Null),
            factors: self.factors.clone(),
        })
    }
}

/// Read, parse and evaluate a model file. Requires `epsilon > 0`.
pub fn load_model<T: Real>(path: impl AsRef<Path>, base: &Tolerances) -> Result<LoadedModel<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file = ModelFile::from_json(&text)?;
    if !(file.epsilon > 0.0) {
        return Err(Error::Schema(format!(
            "epsilon must be > 0, got {}",
            file.epsilon
        )));
    }
    file.build(base)
}

//! Run configuration for `kk-run`, stored as TOML.
//!
//! ```toml
//! phi = "power:2"
//! length = 200
//! seed = 7
//! eps = [1.0, 0.1]
//! tol = 1e-3
//! output = "records.csv"
//!
//! [base]
//! source = "diagonal"
//! blocks = [{ dim = 2, weight = 1.0 }]
//! diagonals = [[1.0, 1.0]]
//!
//! [family]
//! kind = "spike_perturbation"
//! amplitudes = { rule = "power", coefficient = 1.0, exponent = 0.25 }
//! traces = { rule = "power", coefficient = 1.0, exponent = -6.0 }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{operator_json::parse_operator, phi_spec::parse_phi, SchemaError};
use crate::harness::{FamilyKind, SequenceFamily};
use crate::operator::{random_operator, AlgebraShape, BlockOperator, BlockSpec, Ensemble};
use crate::orlicz::OrliczFunction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum BaseSpec {
    Diagonal { blocks: Vec<BlockSpec>, diagonals: Vec<Vec<f64>> },
    Random { blocks: Vec<BlockSpec>, ensemble: Ensemble, seed: u64 },
    /// Operator JSON document; relative paths resolve against the config file.
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub phi: String,
    pub length: usize,
    pub seed: u64,
    pub eps: Vec<f64>,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub base: BaseSpec,
    pub family: FamilyKind,
}

fn err(path: &str, message: impl Into<String>) -> SchemaError {
    SchemaError { path: path.into(), message: message.into() }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, SchemaError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| err("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, SchemaError> {
        let text = std::fs::read_to_string(path).map_err(|e| err("config", format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        let dir = path.parent().unwrap_or(Path::new("."));
        if let BaseSpec::File { path: p } = &mut cfg.base {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        if let Some(out) = &mut cfg.output {
            if out.is_relative() {
                *out = dir.join(&*out);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is representable in TOML")
    }

    pub fn validate(&self) -> Result<(), SchemaError> {
        parse_phi(&self.phi)?;
        if self.length == 0 {
            return Err(err("length", "must be positive"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(err("tol", format!("{} must be positive", self.tol)));
        }
        if self.eps.is_empty() {
            return Err(err("eps", "at least one ε is required"));
        }
        if let Some(i) = self.eps.iter().position(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(err(&format!("eps[{i}]"), "must be positive"));
        }
        match &self.base {
            BaseSpec::Diagonal { blocks, .. } | BaseSpec::Random { blocks, .. } => {
                AlgebraShape::new(blocks.clone()).map_err(|e| err("base.blocks", e.to_string()))?;
            }
            BaseSpec::File { .. } => {}
        }
        Ok(())
    }

    pub fn orlicz(&self) -> Result<OrliczFunction, SchemaError> {
        parse_phi(&self.phi)
    }

    pub fn base_operator(&self) -> Result<BlockOperator, SchemaError> {
        match &self.base {
            BaseSpec::Diagonal { blocks, diagonals } => {
                let shape = AlgebraShape::new(blocks.clone()).map_err(|e| err("base.blocks", e.to_string()))?;
                BlockOperator::from_real_diagonals(&shape, diagonals).map_err(|e| err("base.diagonals", e.to_string()))
            }
            BaseSpec::Random { blocks, ensemble, seed } => {
                let shape = AlgebraShape::new(blocks.clone()).map_err(|e| err("base.blocks", e.to_string()))?;
                random_operator(&shape, ensemble, *seed).map_err(|e| err("base.ensemble", e.to_string()))
            }
            BaseSpec::File { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| err("base.path", format!("cannot read {}: {e}", path.display())))?;
                parse_operator(&text)
            }
        }
    }

    pub fn sequence_family(&self) -> Result<SequenceFamily, SchemaError> {
        Ok(SequenceFamily::new(self.family.clone(), self.base_operator()?, self.length, self.seed))
    }
}

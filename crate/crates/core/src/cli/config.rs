//! Space-specification files.
//!
//! ```toml
//! m = 3
//! seed = 7
//! tol = 1e-12
//!
//! [[modules]]
//! type = "d1"
//! mult = 1
//! ```
//!
//! Instead of `modules`, a file may list `generators` as `m` square
//! matrices given row by row.

use std::path::Path;

use serde::Deserialize;

use crate::clifford_algebra::{CliffordSpec, IrrepKind};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModuleEntry {
    #[serde(rename = "type")]
    pub kind: IrrepKind,
    #[serde(default = "one")]
    pub mult: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub m: usize,
    #[serde(default)]
    pub modules: Vec<ModuleEntry>,
    pub generators: Option<Vec<Vec<Vec<f64>>>>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

impl SpaceConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SpaceConfig = toml::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?;
        if let Some(tol) = cfg.tol {
            if !(tol > 0.0) {
                return Err(Error::InvalidInput(format!("config: tol must be positive, got {tol}")));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_spec(&self) -> Result<CliffordSpec> {
        match (&self.generators, self.modules.is_empty()) {
            (Some(_), false) => Err(Error::InvalidInput("config: give either modules or generators, not both".into())),
            (None, true) => Err(Error::InvalidInput("config: no modules or generators".into())),
            (None, false) => {
                let mods: Vec<(IrrepKind, usize)> = self.modules.iter().map(|e| (e.kind, e.mult)).collect();
                Ok(CliffordSpec::tagged(self.m, &mods))
            }
            (Some(gens), true) => {
                if gens.len() != self.m {
                    return Err(Error::DimensionMismatch { expected: self.m, got: gens.len() });
                }
                let mats = gens
                    .iter()
                    .map(|rows| {
                        let n = rows.len();
                        if rows.iter().any(|r| r.len() != n) {
                            return Err(Error::InvalidGenerators("generator matrix is not square".into()));
                        }
                        Ok(Matrix::from_fn(n, n, |i, j| rows[i][j]))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(CliffordSpec::explicit(mats))
            }
        }
    }
}

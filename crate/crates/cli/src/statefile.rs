//! JSON state files.
//!
//! ```json
//! {"version": 1, "d": 2, "kind": "pure",
//!  "data": [[0.7071067811865476, 0], [0, 0], [0, 0], [0.7071067811865476, 0]],
//!  "label": "bell"}
//! ```
//!
//! Complex numbers are `[re, im]` pairs. Pure data is the d² amplitudes of
//! ψ in the |m⟩⊗|k⟩ basis (index m·d + k); mixed data is the d² rows of ρ.

use std::path::Path;

use serde::{Deserialize, Serialize};
use spinchsh_core::{pure_state, Complex64, ComplexMatrix, QuantumState, Tolerances};

use crate::error::{CliError, CliResult};

pub const STATE_FILE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateData {
    Pure(Vec<[f64; 2]>),
    Mixed(Vec<Vec<[f64; 2]>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub version: u32,
    pub d: usize,
    pub kind: StateKind,
    pub data: StateData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn to_complex(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect()
}

fn to_pairs(zs: &[Complex64]) -> Vec<[f64; 2]> {
    zs.iter().map(|z| [z.re, z.im]).collect()
}

impl StateFile {
    /// Writes ρ as a mixed-kind file.
    pub fn from_state(state: &QuantumState) -> Self {
        let rho = state.density();
        let rows = (0..rho.rows())
            .map(|i| to_pairs(&rho.as_slice()[i * rho.cols()..(i + 1) * rho.cols()]))
            .collect();
        Self {
            version: STATE_FILE_VERSION,
            d: state.dim(),
            kind: StateKind::Mixed,
            data: StateData::Mixed(rows),
            label: state.label().map(str::to_owned),
        }
    }

    pub fn from_amplitudes(d: usize, psi: &[Complex64], label: Option<String>) -> Self {
        Self {
            version: STATE_FILE_VERSION,
            d,
            kind: StateKind::Pure,
            data: StateData::Pure(to_pairs(psi)),
            label,
        }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Unreadable(format!("state file: {e}")))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Unreadable(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Checks the declared shape and builds a validated state.
    pub fn to_state(&self) -> CliResult<QuantumState> {
        if self.version != STATE_FILE_VERSION {
            return Err(CliError::Invalid(format!(
                "unsupported state file version {} (expected {STATE_FILE_VERSION})",
                self.version
            )));
        }
        if self.d < 2 {
            return Err(CliError::Invalid(format!("d = {} is below 2", self.d)));
        }
        let n = self.d * self.d;
        let state = match (&self.kind, &self.data) {
            (StateKind::Pure, StateData::Pure(v)) => {
                if v.len() != n {
                    return Err(CliError::Invalid(format!(
                        "pure data needs {n} amplitudes, found {}",
                        v.len()
                    )));
                }
                let psi = to_complex(v);
                let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
                if (norm_sqr - 1.0).abs() > Tolerances::DEFAULT.trace {
                    return Err(CliError::Invalid(format!(
                        "amplitudes are not unit-norm (norm² = {norm_sqr})"
                    )));
                }
                pure_state(&psi, self.d)?
            }
            (StateKind::Mixed, StateData::Mixed(rows)) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::Invalid(format!(
                        "mixed data needs a {n}×{n} matrix"
                    )));
                }
                let flat: Vec<Complex64> = rows.iter().flat_map(|r| to_complex(r)).collect();
                QuantumState::from_density(self.d, ComplexMatrix::from_row_major(n, n, flat)?)?
            }
            (kind, _) => {
                return Err(CliError::Invalid(format!(
                    "data layout does not match kind {kind:?}"
                )))
            }
        };
        Ok(match &self.label {
            Some(l) => state.with_label(l.clone()),
            None => state,
        })
    }
}

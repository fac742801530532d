//! On-disk JSON formats `umeb-state/1` and `umeb-basis/1`.
//!
//! Amplitudes are `[re, im]` pairs in row-major `i·d' + j` order. Numbers are
//! written as shortest round-trip decimals, so writing and re-reading a file
//! reproduces every amplitude bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use umeb_core::{BasisSet, BipartiteState, Complex64};

use crate::CliError;

pub const STATE_TAG: &str = "umeb-state/1";
pub const BASIS_TAG: &str = "umeb-basis/1";

/// Norm errors up to this are accepted as is.
pub const NORM_EXACT_TOL: f64 = 1e-9;
/// Norm errors above [`NORM_EXACT_TOL`] and up to this are renormalized
/// with a warning; anything larger is rejected.
pub const NORM_LOAD_TOL: f64 = 1e-6;
/// Gram deviation accepted when a loaded basis must be orthonormal.
pub const ORTHONORMAL_LOAD_TOL: f64 = 1e-6;

pub type Amplitudes = Vec<[f64; 2]>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub format: String,
    pub d: usize,
    pub dprime: usize,
    pub amplitudes: Amplitudes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisFile {
    pub format: String,
    pub d: usize,
    pub dprime: usize,
    pub states: Vec<Amplitudes>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub me_flags: Option<Vec<bool>>,
}

/// A decoded value plus the warnings raised while decoding it.
#[derive(Debug)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orthonormality {
    Enforce,
    Skip,
}

fn pairs(amps: &[Complex64]) -> Amplitudes {
    amps.iter().map(|z| [z.re, z.im]).collect()
}

impl StateFile {
    pub fn from_state(psi: &BipartiteState) -> Self {
        Self {
            format: STATE_TAG.into(),
            d: psi.d(),
            dprime: psi.dprime(),
            amplitudes: pairs(psi.amplitudes()),
        }
    }

    pub fn into_state(self) -> Result<Loaded<BipartiteState>, CliError> {
        if self.format != STATE_TAG {
            return Err(CliError::Format(format!(
                "expected format \"{STATE_TAG}\", found \"{}\"",
                self.format
            )));
        }
        let mut warnings = Vec::new();
        let state = decode_state(self.d, self.dprime, &self.amplitudes, "state", &mut warnings)?;
        Ok(Loaded { value: state, warnings })
    }
}

impl BasisFile {
    pub fn from_basis(basis: &BasisSet) -> Self {
        Self {
            format: BASIS_TAG.into(),
            d: basis.d(),
            dprime: basis.dprime(),
            states: basis.states().iter().map(|s| pairs(s.amplitudes())).collect(),
            labels: basis.labels().map(<[String]>::to_vec),
            me_flags: Some(basis.me_flags().to_vec()),
        }
    }

    pub fn into_basis(self, check: Orthonormality) -> Result<Loaded<BasisSet>, CliError> {
        if self.format != BASIS_TAG {
            return Err(CliError::Format(format!(
                "expected format \"{BASIS_TAG}\", found \"{}\"",
                self.format
            )));
        }
        let mut warnings = Vec::new();
        let states = self
            .states
            .iter()
            .enumerate()
            .map(|(k, amps)| decode_state(self.d, self.dprime, amps, &format!("member {k}"), &mut warnings))
            .collect::<Result<Vec<_>, _>>()?;
        let basis = match self.me_flags {
            Some(flags) => BasisSet::with_flags(self.d, self.dprime, states, self.labels, flags),
            None => BasisSet::new(self.d, self.dprime, states, self.labels),
        }
        .map_err(|e| CliError::Format(e.to_string()))?;
        if check == Orthonormality::Enforce {
            let err = basis.orthonormality_error();
            if err > ORTHONORMAL_LOAD_TOL {
                return Err(CliError::Format(format!(
                    "basis is not orthonormal (Gram deviation {err:.3e} > {ORTHONORMAL_LOAD_TOL:e})"
                )));
            }
        }
        Ok(Loaded { value: basis, warnings })
    }
}

fn decode_state(
    d: usize,
    dprime: usize,
    amps: &[[f64; 2]],
    what: &str,
    warnings: &mut Vec<String>,
) -> Result<BipartiteState, CliError> {
    if amps.len() != d * dprime {
        return Err(CliError::Format(format!(
            "{what}: expected {} amplitudes for {d}x{dprime}, got {}",
            d * dprime,
            amps.len()
        )));
    }
    let z: Vec<Complex64> = amps.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
    let norm = z.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let err = (norm - 1.0).abs();
    let state = if err <= NORM_EXACT_TOL {
        BipartiteState::new(d, dprime, z)
    } else if err <= NORM_LOAD_TOL {
        warnings.push(format!("{what}: norm {norm} renormalized"));
        BipartiteState::normalized(d, dprime, z)
    } else {
        return Err(CliError::Format(format!(
            "{what}: norm {norm} is not within {NORM_LOAD_TOL:e} of 1"
        )));
    };
    state.map_err(|e| CliError::Format(format!("{what}: {e}")))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    // serialization of these plain structs cannot fail
    serde_json::to_string_pretty(value).expect("JSON serialization")
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, format!("{text}\n")).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_basis(path: &Path, check: Orthonormality) -> Result<Loaded<BasisSet>, CliError> {
    read_json::<BasisFile>(path)?.into_basis(check)
}

pub fn write_basis(path: &Path, basis: &BasisSet) -> Result<(), CliError> {
    write_text(path, &to_json(&BasisFile::from_basis(basis)))
}

pub fn read_state(path: &Path) -> Result<Loaded<BipartiteState>, CliError> {
    read_json::<StateFile>(path)?.into_state()
}

pub fn write_state(path: &Path, psi: &BipartiteState) -> Result<(), CliError> {
    write_text(path, &to_json(&StateFile::from_state(psi)))
}

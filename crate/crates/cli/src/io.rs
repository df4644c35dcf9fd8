//! JSON file formats and stdin/stdout plumbing.
//!
//! Every float is written with 17 significant digits (`{:.16e}`) so a
//! write/read cycle reproduces it bit for bit.

use std::fs;
use std::io::{self, Read, Write};

use ccrlab::linalg::{c64, CMatrix, CVector, HermitianOperator, StateVector, Subspace, C64};
use ccrlab::pairs::{CanonicalSolution, Provenance};
use ccrlab::ToleranceConfig;
use serde::ser::Error as _;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;
use serde_json::{Map, Value};

use crate::error::CliError;

/// A float serialized with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(transparent)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("non-finite value {}", self.0)));
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(S::Error::custom)?;
        raw.serialize(s)
    }
}

/// `[re, im]`.
pub type Complex = [Num; 2];

pub fn complex(z: C64) -> Complex {
    [Num(z.re), Num(z.im)]
}

pub fn from_complex(z: &Complex) -> C64 {
    c64(z[0].0, z[1].0)
}

pub fn vector(v: &CVector) -> Vec<Complex> {
    v.iter().map(|&z| complex(z)).collect()
}

pub fn from_vector(v: &[Complex]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(from_complex))
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Vec<Complex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Map<String, Value>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        let entries = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| complex(m[(r, c)])).collect();
        Self { dim: n, entries, metadata: None }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, CliError> {
        if self.entries.len() != self.dim * self.dim {
            return Err(CliError::Format(format!(
                "matrix file has {} entries, expected dim^2 = {}",
                self.entries.len(),
                self.dim * self.dim
            )));
        }
        let n = self.dim;
        Ok(CMatrix::from_fn(n, n, |r, c| from_complex(&self.entries[r * n + c])))
    }

    pub fn to_hermitian(&self, tol: &ToleranceConfig) -> Result<HermitianOperator, CliError> {
        Ok(HermitianOperator::new(self.to_matrix()?, tol)?)
    }
}

/// A canonical solution with its domain basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    #[serde(rename = "A")]
    pub a: MatrixFile,
    #[serde(rename = "B")]
    pub b: MatrixFile,
    pub c: Complex,
    pub domain_basis: Vec<Vec<Complex>>,
    pub provenance: String,
    pub hbar: Num,
}

impl SolutionFile {
    pub fn from_solution(sol: &CanonicalSolution) -> Self {
        Self {
            a: MatrixFile::from_matrix(sol.a().matrix()),
            b: MatrixFile::from_matrix(sol.b().matrix()),
            c: complex(sol.c()),
            domain_basis: sol.domain().vectors().map(|v| vector(v.amplitudes())).collect(),
            provenance: sol.provenance().to_string(),
            hbar: Num(sol.hbar()),
        }
    }

    /// Reassembles and re-verifies the stored relation.
    pub fn to_solution(&self, tol: &ToleranceConfig) -> Result<CanonicalSolution, CliError> {
        let a = self.a.to_hermitian(tol)?;
        let b = self.b.to_hermitian(tol)?;
        let n = a.dim();
        if self.domain_basis.is_empty() {
            return Err(CliError::Format("solution file has an empty domain basis".into()));
        }
        if let Some(bad) = self.domain_basis.iter().find(|v| v.len() != n) {
            return Err(CliError::Format(format!("domain vector of length {}, expected {n}", bad.len())));
        }
        let cols: Vec<CVector> = self.domain_basis.iter().map(|v| from_vector(v)).collect();
        let domain = Subspace::from_orthonormal(CMatrix::from_columns(&cols), tol)?;
        let provenance: Provenance = self.provenance.parse()?;
        Ok(CanonicalSolution::from_parts(a, b, from_complex(&self.c), domain, self.hbar.0, provenance, tol)?)
    }
}

/// A state vector; rejected unless unit norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub amplitudes: Vec<Complex>,
}

impl StateFile {
    pub fn to_state(&self, tol: &ToleranceConfig) -> Result<StateVector, CliError> {
        Ok(StateVector::new(from_vector(&self.amplitudes), tol)?)
    }
}

/// Reads a whole file, or stdin for `-`.
pub fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &str) -> Result<T, CliError> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{path}: {e}")))
}

/// Writes to a file, or stdout for `-`.
pub fn write_output(path: &str, content: &str) -> Result<(), CliError> {
    if path == "-" {
        let mut out = io::stdout().lock();
        out.write_all(content.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Io(format!("stdout: {e}")))
    } else {
        fs::write(path, content).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &str, value: &T) -> Result<(), CliError> {
    write_output(path, &to_json(value)?)
}

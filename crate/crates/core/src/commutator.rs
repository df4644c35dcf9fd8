//! Commutator analysis: classification of every essentially canonical
//! relation of a pair and constructive factorization `C = [A, B]`.

use crate::error::{Error, Result};
use crate::linalg::{
    c64, commutator_of, complete_basis, eigh, frobenius, max_norm, normal_eigen, trace, CMatrix, CVector,
    HermitianOperator, NormalSpectrum, StateVector, Subspace, C64, I,
};
use crate::tolerance::ToleranceConfig;

/// Relative trace bound for "traceless".
const TRACE_TOL: f64 = 1e-10;

/// `AB - BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: a.ncols() });
    }
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: b.nrows() });
    }
    Ok(commutator_of(a, b))
}

/// One eigenvalue cluster of `[A, B]`.
#[derive(Debug, Clone)]
pub struct Relation {
    pub c: C64,
    pub domain: Subspace,
    /// `false` for the kernel (`c = 0`).
    pub essentially_canonical: bool,
}

#[derive(Debug, Clone)]
pub struct RelationReport {
    pub commutator: CMatrix,
    /// Sorted by `Im c` descending, then by domain dimension descending.
    pub relations: Vec<Relation>,
    /// `|sum_k c_k dim_k|`, zero up to rounding since `C` is traceless.
    pub trace_residual: f64,
}

impl RelationReport {
    pub fn nonzero(&self) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(|r| r.essentially_canonical)
    }

    /// Relation whose `c` is within `tol` of `c`.
    pub fn find(&self, c: C64, tol: f64) -> Option<&Relation> {
        self.relations.iter().find(|r| (r.c - c).norm() <= tol)
    }

    pub fn max_nonzero_dim(&self) -> usize {
        self.nonzero().map(|r| r.domain.dim()).max().unwrap_or(0)
    }
}

/// Eigen-decomposes `C = [A, B]` through the Hermitian matrix `iC` and
/// returns one relation per eigenvalue cluster.
pub fn classify(a: &HermitianOperator, b: &HermitianOperator, tol: &ToleranceConfig) -> Result<RelationReport> {
    let comm = commutator(a.matrix(), b.matrix())?;
    let norm = frobenius(&comm);
    if norm <= tol.ccr * a.norm() * b.norm() {
        return Err(Error::CommutingPair { norm });
    }
    let ic = HermitianOperator::new(&comm * I, &ToleranceConfig { hermiticity: 1e-10, ..*tol })?;
    let spec = eigh(&ic, tol);
    let zero_gap = spec.cluster_tol.max(tol.ccr * norm);
    let mut relations: Vec<Relation> = spec
        .distinct_values()
        .into_iter()
        .enumerate()
        .map(|(j, lambda)| {
            // iC v = lambda v  =>  C v = -i lambda v.
            let essentially_canonical = lambda.abs() > zero_gap;
            let c = if essentially_canonical { c64(0.0, -lambda) } else { c64(0.0, 0.0) };
            Relation { c, domain: spec.cluster_space(j), essentially_canonical }
        })
        .collect();
    relations.sort_by(|x, y| y.c.im.total_cmp(&x.c.im).then(y.domain.dim().cmp(&x.domain.dim())));
    let trace_residual = relations.iter().map(|r| r.c * r.domain.dim() as f64).sum::<C64>().norm();
    Ok(RelationReport { commutator: comm, relations, trace_residual })
}

fn check_traceless(c: &CMatrix) -> Result<f64> {
    let norm = frobenius(c);
    let tr = trace(c).norm();
    if tr > TRACE_TOL * norm {
        return Err(Error::NotTraceless { trace: tr });
    }
    Ok(norm)
}

/// Unitary `W = V F` with `V` the eigenvectors in `spectrum` and `F` the
/// discrete Fourier matrix `F_jk = N^(-1/2) exp(2 pi i j k / N)`; the diagonal
/// of `W^H C W` vanishes.
pub fn dft_zero_diagonal(c: &CMatrix, spectrum: &NormalSpectrum, tol: &ToleranceConfig) -> Result<CMatrix> {
    let n = c.nrows();
    if !c.is_square() || spectrum.dim() != n || spectrum.eigenvectors.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: n, found: spectrum.dim() });
    }
    let norm = check_traceless(c)?;
    let v = &spectrum.eigenvectors;
    let lam = CMatrix::from_diagonal(&CVector::from_column_slice(&spectrum.eigenvalues));
    let deviation = frobenius(&(c * v - v * lam));
    if deviation > tol.spectral.max(1e-10) * norm.max(1.0) {
        return Err(Error::NotNormal { deviation });
    }
    Ok(v * dft_matrix(n))
}

/// `dft_zero_diagonal` with the eigenbasis computed by [`normal_eigen`].
pub fn zero_diagonal_frame(c: &CMatrix, tol: &ToleranceConfig) -> Result<CMatrix> {
    check_traceless(c)?;
    let spectrum = normal_eigen(c, tol)?;
    dft_zero_diagonal(c, &spectrum, tol)
}

pub fn dft_matrix(n: usize) -> CMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |j, k| {
        let angle = 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
        C64::from_polar(scale, angle)
    })
}

/// `(A, B)` with `[A, B] = C`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub a: CMatrix,
    pub b: CMatrix,
    /// Zero-diagonal frame `W` in which `B` is diagonal.
    pub frame: CMatrix,
    /// `||[A,B] - C||_F / ||C||_F`.
    pub residual: f64,
}

impl Factorization {
    /// Hermitian wrappers; succeeds when `C` was anti-Hermitian.
    pub fn hermitian_pair(&self, tol: &ToleranceConfig) -> Result<(HermitianOperator, HermitianOperator)> {
        let relaxed = ToleranceConfig { hermiticity: tol.hermiticity.max(1e-10), ..*tol };
        Ok((HermitianOperator::new(self.a.clone(), &relaxed)?, HermitianOperator::new(self.b.clone(), &relaxed)?))
    }
}

/// Writes a nonzero traceless normal `C` as `[A, B]`.
///
/// In the zero-diagonal frame `W`: `B' = diag(b_values)`,
/// `A'_ss' = C'_ss' / (B_s' - B_s)` off the diagonal and `A'_ss = a_s`; both
/// are then rotated back by `W`. Anti-Hermitian `C` gives Hermitian `A`, `B`.
pub fn factorize(c: &CMatrix, b_values: &[f64], a_values: &[f64], tol: &ToleranceConfig) -> Result<Factorization> {
    let n = c.nrows();
    if !c.is_square() {
        return Err(Error::DimensionMismatch { expected: n, found: c.ncols() });
    }
    if b_values.len() != n || a_values.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: if b_values.len() != n { b_values.len() } else { a_values.len() } });
    }
    if max_norm(c) == 0.0 {
        return Err(Error::TrivialMatrix);
    }
    let norm = check_traceless(c)?;
    let scale = b_values.iter().map(|x| x.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for (i, &x) in b_values.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::InvalidInput("b_values must be finite".into()));
        }
        if b_values[..i].iter().any(|&y| (x - y).abs() <= 1e-12 * scale) {
            return Err(Error::RepeatedBValue(x));
        }
    }
    let w = zero_diagonal_frame(c, tol)?;
    let rotated = w.adjoint() * c * &w;
    let a_prime = CMatrix::from_fn(n, n, |s, t| {
        if s == t {
            c64(a_values[s], 0.0)
        } else {
            rotated[(s, t)] / (b_values[t] - b_values[s])
        }
    });
    let b_prime = crate::linalg::diagonal(b_values);
    let a = &w * a_prime * w.adjoint();
    let b = &w * b_prime * w.adjoint();
    let residual = frobenius(&(commutator_of(&a, &b) - c)) / norm;
    Ok(Factorization { a, b, frame: w, residual })
}

/// A commutator having `phi` as an eigenvector, with its factorization.
#[derive(Debug, Clone)]
pub struct StateCommutator {
    pub commutator: CMatrix,
    pub factorization: Factorization,
}

/// `C = c|phi><phi| - c|phi_2><phi_2|` for some `phi_2` orthogonal to `phi`,
/// factorized with the given `b_values` and `a = 0`.
pub fn commutator_fixing_state(phi: &StateVector, c: C64, b_values: &[f64], tol: &ToleranceConfig) -> Result<StateCommutator> {
    let mut eigenvalues = vec![c64(0.0, 0.0); phi.dim()];
    eigenvalues[0] = c;
    if phi.dim() > 1 {
        eigenvalues[1] = -c;
    }
    commutator_fixing_state_with(phi, &eigenvalues, b_values, tol)
}

/// As [`commutator_fixing_state`] with an explicit spectrum: `eigenvalues[0]`
/// belongs to `phi`, the rest to an orthonormal completion. The list must sum
/// to zero and contain a second nonzero entry.
pub fn commutator_fixing_state_with(
    phi: &StateVector,
    eigenvalues: &[C64],
    b_values: &[f64],
    tol: &ToleranceConfig,
) -> Result<StateCommutator> {
    let n = phi.dim();
    if n < 2 {
        return Err(Error::InvalidInput("a commutator needs dimension at least 2".into()));
    }
    if eigenvalues.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: eigenvalues.len() });
    }
    if eigenvalues[0].norm() == 0.0 {
        return Err(Error::ZeroEigenvalueRequested);
    }
    let scale = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if eigenvalues.iter().sum::<C64>().norm() > TRACE_TOL * scale {
        return Err(Error::NotTraceless { trace: eigenvalues.iter().sum::<C64>().norm() });
    }
    let q = complete_basis(phi.amplitudes());
    let comm = &q * CMatrix::from_diagonal(&CVector::from_column_slice(eigenvalues)) * q.adjoint();
    let a_values = vec![0.0; n];
    let factorization = factorize(&comm, b_values, &a_values, tol)?;
    Ok(StateCommutator { commutator: comm, factorization })
}

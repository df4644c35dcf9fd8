use rand::Rng;
use rand_distr::StandardNormal;

use super::{c64, fix_phase, frobenius, inner, max_norm, vec_norm, CMatrix, CVector, C64};
use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;

/// Amplitudes below this are treated as zero when fixing phases.
const PHASE_THRESHOLD: f64 = 1e-10;

/// A square complex matrix certified Hermitian at construction.
///
/// The stored matrix is the exact Hermitian part `(M + M^H)/2` of the input, so
/// downstream eigensolvers see a structurally Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        if matrix.nrows() == 0 {
            return Err(Error::InvalidInput("operator dimension must be at least 1".into()));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        let deviation = max_norm(&(&matrix - matrix.adjoint()));
        if deviation > tol.hermiticity * max_norm(&matrix) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrized(matrix))
    }

    /// Real diagonal operator `sum_k values[k] |k><k|`.
    pub fn diagonal(values: &[f64]) -> Self {
        Self { matrix: super::diagonal(values) }
    }

    fn symmetrized(matrix: CMatrix) -> Self {
        let adj = matrix.adjoint();
        Self { matrix: (matrix + adj) * c64(0.5, 0.0) }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn norm(&self) -> f64 {
        frobenius(&self.matrix)
    }

    /// `U^H M U`; Hermiticity is preserved for any square `U`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self::symmetrized(u.adjoint() * &self.matrix * u)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { matrix: &self.matrix * c64(factor, 0.0) }
    }

    /// `<phi|M|phi>`, real for Hermitian `M`.
    pub fn expectation(&self, phi: &StateVector) -> f64 {
        inner(phi.amplitudes(), &(&self.matrix * phi.amplitudes())).re
    }
}

/// A unit-norm vector in `C^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: CVector,
}

impl StateVector {
    /// Accepts `amps` only if it already has unit norm within `tol.norm`.
    pub fn new(amps: CVector, tol: &ToleranceConfig) -> Result<Self> {
        let norm = vec_norm(&amps);
        if amps.is_empty() || (norm - 1.0).abs() > tol.norm {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Scales `amps` to unit norm.
    pub fn normalized(amps: CVector) -> Result<Self> {
        let norm = vec_norm(&amps);
        if amps.is_empty() || !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps: amps / c64(norm, 0.0) })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amps = CVector::zeros(dim);
        amps[k] = c64(1.0, 0.0);
        Self { amps }
    }

    pub fn from_slice(amps: &[C64]) -> Result<Self> {
        Self::normalized(CVector::from_column_slice(amps))
    }

    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        loop {
            let v = CVector::from_fn(dim, |_, _| c64(rng.sample(StandardNormal), rng.sample(StandardNormal)));
            if let Ok(s) = Self::normalized(v) {
                return s;
            }
        }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn overlap(&self, other: &StateVector) -> C64 {
        inner(&self.amps, &other.amps)
    }

    /// Applies a unitary; the result is renormalized to absorb rounding.
    pub fn evolved(&self, u: &CMatrix) -> Self {
        Self::normalized(u * &self.amps).expect("unitary image of a unit vector is nonzero")
    }
}

/// A subspace of `C^N` held as an orthonormal basis (the columns of an
/// `N x k` matrix, `k` may be zero).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: CMatrix,
}

impl Subspace {
    pub fn empty(ambient: usize) -> Self {
        Self { basis: CMatrix::zeros(ambient, 0) }
    }

    /// Wraps columns that are already orthonormal within `tol.norm`.
    pub fn from_orthonormal(basis: CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let gram = basis.adjoint() * &basis;
        let k = basis.ncols();
        let dev = max_norm(&(gram - CMatrix::identity(k, k)));
        if dev > tol.norm.max(1e-14 * k as f64) {
            return Err(Error::InvalidInput(format!("basis is not orthonormal (Gram deviation {dev:e})")));
        }
        Ok(Self { basis })
    }

    /// Builds a deterministic orthonormal basis for the span of `columns`.
    ///
    /// The basis depends only on the spanned subspace, not on the particular
    /// spanning set: it is obtained by pivoted Gram-Schmidt on the columns of
    /// the orthogonal projector, followed by phase fixing (first amplitude real
    /// positive). Directions with weight below `rank_tol` are dropped.
    pub fn from_spanning(columns: &CMatrix, rank_tol: f64) -> Self {
        let n = columns.nrows();
        let q = orthonormalize(columns, rank_tol);
        if q.ncols() == 0 {
            return Self::empty(n);
        }
        let mut residual = &q * q.adjoint();
        let mut chosen: Vec<CVector> = Vec::with_capacity(q.ncols());
        for _ in 0..q.ncols() {
            let (j, best) = (0..n)
                .map(|j| (j, vec_norm(&residual.column(j).into_owned())))
                .fold((0, -1.0), |acc, x| if x.1 > acc.1 + 1e-12 { x } else { acc });
            if best <= 1e-8 {
                break;
            }
            let v = residual.column(j).into_owned() / c64(best, 0.0);
            residual -= &v * (v.adjoint() * &residual);
            chosen.push(v);
        }
        // Re-orthonormalize for full working precision before fixing phases.
        let stacked = CMatrix::from_columns(&chosen);
        let mut basis = orthonormalize(&stacked, 1e-8);
        for mut col in basis.column_iter_mut() {
            let mut v = col.clone_owned();
            fix_phase(&mut v, PHASE_THRESHOLD);
            col.copy_from(&v);
        }
        Self { basis }
    }

    pub fn from_states(states: &[StateVector], rank_tol: f64) -> Self {
        let cols: Vec<CVector> = states.iter().map(|s| s.amplitudes().clone()).collect();
        Self::from_spanning(&CMatrix::from_columns(&cols), rank_tol)
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn vector(&self, j: usize) -> StateVector {
        StateVector { amps: self.basis.column(j).into_owned() }
    }

    pub fn vectors(&self) -> impl Iterator<Item = StateVector> + '_ {
        (0..self.dim()).map(|j| self.vector(j))
    }

    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// `||v - P v||`, the distance of `v` from the subspace.
    pub fn distance(&self, v: &CVector) -> f64 {
        let coeffs = self.basis.adjoint() * v;
        vec_norm(&(v - &self.basis * coeffs))
    }

    /// Norm of the orthogonal projection of `v` onto the subspace.
    pub fn projection_norm(&self, v: &CVector) -> f64 {
        vec_norm(&(self.basis.adjoint() * v))
    }

    pub fn contains(&self, v: &CVector, tol: f64) -> bool {
        self.distance(v) <= tol
    }

    /// Largest principal angle between two subspaces of equal dimension;
    /// `pi/2` when dimensions differ.
    pub fn max_principal_angle(&self, other: &Subspace) -> f64 {
        if self.dim() != other.dim() || self.ambient_dim() != other.ambient_dim() {
            return std::f64::consts::FRAC_PI_2;
        }
        if self.dim() == 0 {
            return 0.0;
        }
        // sin(theta_max) = ||(I - P_other) Q_self||_2; accurate for small angles.
        let residual = &self.basis - &other.basis * (other.basis.adjoint() * &self.basis);
        let smax = residual.singular_values().iter().copied().fold(0.0, f64::max);
        smax.min(1.0).asin()
    }

    /// A normalized random combination of the basis vectors.
    pub fn random_state<R: Rng + ?Sized>(&self, rng: &mut R) -> StateVector {
        assert!(self.dim() > 0, "cannot sample from an empty subspace");
        let coeffs = StateVector::random(self.dim(), rng);
        StateVector::normalized(&self.basis * coeffs.amplitudes()).expect("orthonormal combination is nonzero")
    }

    /// Image of the subspace under a unitary map.
    pub fn mapped(&self, u: &CMatrix) -> Subspace {
        Subspace::from_spanning(&(u * &self.basis), 1e-8)
    }
}

/// Unitary whose first column is `v` (normalized), completed with the
/// standard basis.
pub fn complete_basis(v: &CVector) -> CMatrix {
    let n = v.len();
    let mut cols = vec![v.clone()];
    cols.extend((0..n).map(|k| {
        let mut e = CVector::zeros(n);
        e[k] = c64(1.0, 0.0);
        e
    }));
    orthonormalize(&CMatrix::from_columns(&cols), 1e-8)
}

/// Modified Gram-Schmidt with one reorthogonalization pass; columns whose
/// remaining norm falls below `rank_tol` (relative to the largest input
/// column) are dropped.
fn orthonormalize(columns: &CMatrix, rank_tol: f64) -> CMatrix {
    let n = columns.nrows();
    let scale = columns
        .column_iter()
        .map(|c| vec_norm(&c.into_owned()))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return CMatrix::zeros(n, 0);
    }
    let mut out: Vec<CVector> = Vec::new();
    for col in columns.column_iter() {
        let mut v = col.into_owned();
        for _ in 0..2 {
            for q in &out {
                let p = inner(q, &v);
                v -= q * p;
            }
        }
        let nv = vec_norm(&v);
        if nv > rank_tol * scale {
            out.push(v / c64(nv, 0.0));
        }
    }
    if out.is_empty() {
        CMatrix::zeros(n, 0)
    } else {
        CMatrix::from_columns(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{rngs::StdRng, SeedableRng};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn hermitian_rejects_asymmetric() {
        let m = CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]);
        assert!(matches!(HermitianOperator::new(m, &tol()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn hermitian_rejects_non_square() {
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(HermitianOperator::new(m, &tol()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn state_requires_unit_norm() {
        let v = CVector::from_column_slice(&[c64(1.0, 0.0), c64(1.0, 0.0)]);
        assert!(matches!(StateVector::new(v.clone(), &tol()), Err(Error::NotNormalized { .. })));
        let s = StateVector::normalized(v).unwrap();
        assert!((vec_norm(s.amplitudes()) - 1.0).abs() < 1e-15);
        assert!(StateVector::normalized(CVector::zeros(3)).is_err());
    }

    #[test]
    fn spanning_basis_is_independent_of_spanning_set() {
        let mut rng = StdRng::seed_from_u64(7);
        let a = StateVector::random(5, &mut rng);
        let b = StateVector::random(5, &mut rng);
        let s1 = Subspace::from_states(&[a.clone(), b.clone()], 1e-10);
        let mix1 = StateVector::normalized(a.amplitudes() * c64(0.3, 1.1) + b.amplitudes() * c64(-2.0, 0.5)).unwrap();
        let mix2 = StateVector::normalized(a.amplitudes() * c64(1.0, -0.2) - b.amplitudes()).unwrap();
        let s2 = Subspace::from_states(&[mix1, mix2], 1e-10);
        assert_eq!(s1.dim(), 2);
        assert!((s1.basis() - s2.basis()).iter().all(|z| z.norm() < 1e-10));
        let gram = s1.basis().adjoint() * s1.basis();
        assert!(max_norm(&(gram - CMatrix::identity(2, 2))) < 1e-14);
    }

    #[test]
    fn spanning_drops_dependent_columns() {
        let v = CVector::from_column_slice(&[c64(1.0, 0.0), c64(-1.0, 0.0), c64(0.0, 0.0)]);
        let cols = CMatrix::from_columns(&[v.clone(), v * c64(0.0, 2.0)]);
        let s = Subspace::from_spanning(&cols, 1e-10);
        assert_eq!(s.dim(), 1);
        let b = s.vector(0);
        assert!((b.amplitudes()[0] - c64(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn principal_angles() {
        let e = |k| StateVector::basis(3, k);
        let s12 = Subspace::from_states(&[e(0), e(1)], 1e-10);
        let s12b = Subspace::from_states(&[e(1), e(0)], 1e-10);
        let s13 = Subspace::from_states(&[e(0), e(2)], 1e-10);
        assert!(s12.max_principal_angle(&s12b) < 1e-12);
        assert!((s12.max_principal_angle(&s13) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}

//! Random matrices for tests, demos and the CLI `--seed` paths.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c64, trace, CMatrix, CVector, HermitianOperator, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex Ginibre matrix with standard normal entries.
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

/// GUE-like Hermitian matrix `(G + G^H)/2`.
pub fn hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianOperator {
    let g = ginibre(n, rng);
    let h = (&g + g.adjoint()) * c64(0.5, 0.0);
    HermitianOperator::new(h, &Default::default()).expect("symmetrized matrix is Hermitian")
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the diagonal phases
/// of `R` divided out.
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(n, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

/// Random normal traceless matrix `V diag(lambda) V^H` with Haar `V` and
/// complex Gaussian eigenvalues shifted to sum to zero.
pub fn normal_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let mut lam: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
    let mean = lam.iter().sum::<C64>() / c64(n as f64, 0.0);
    lam.iter_mut().for_each(|z| *z -= mean);
    let v = unitary(n, rng);
    let m = &v * CMatrix::from_diagonal(&CVector::from_vec(lam)) * v.adjoint();
    let t = trace(&m) / c64(n as f64, 0.0);
    m - CMatrix::identity(n, n) * t
}

/// Random anti-Hermitian traceless matrix, i.e. a commutator of some
/// Hermitian pair.
pub fn anti_hermitian_traceless<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let h = hermitian(n, rng).into_matrix();
    let t = trace(&h) / c64(n as f64, 0.0);
    (h - CMatrix::identity(n, n) * t) * c64(0.0, 1.0)
}

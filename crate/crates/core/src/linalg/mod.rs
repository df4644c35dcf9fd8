//! Dense complex linear algebra with certified structure.
//!
//! Everything here works on `nalgebra` dynamic matrices of `Complex64`. The
//! newtypes in [`types`] carry the structural guarantees (Hermiticity, unit
//! norm, orthonormal bases) that the rest of the crate relies on.

mod spectral;
mod types;

pub use spectral::{eigenspace, eigh, evolve, evolve_spectral, normal_eigen, NormalSpectrum, SpectralData};
pub use types::{complete_basis, HermitianOperator, StateVector, Subspace};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn vec_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<u|v>`, conjugate-linear in the first argument.
pub fn inner(u: &CVector, v: &CVector) -> C64 {
    u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// `AB - BA`.
pub fn commutator_of(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn trace(m: &CMatrix) -> C64 {
    (0..m.nrows().min(m.ncols())).map(|k| m[(k, k)]).sum()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn diagonal(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(values.len(), values.iter().map(|&x| c64(x, 0.0))))
}

/// The three Pauli matrices `(sigma_x, sigma_y, sigma_z)`.
pub fn pauli() -> (CMatrix, CMatrix, CMatrix) {
    let o = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    let sx = CMatrix::from_row_slice(2, 2, &[o, one, one, o]);
    let sy = CMatrix::from_row_slice(2, 2, &[o, -I, I, o]);
    let sz = CMatrix::from_row_slice(2, 2, &[one, o, o, -one]);
    (sx, sy, sz)
}

/// Rotates the phase of `v` so its first amplitude above `threshold` in
/// magnitude is real and positive.
pub fn fix_phase(v: &mut CVector, threshold: f64) {
    if let Some(z) = v.iter().copied().find(|z| z.norm() > threshold) {
        let phase = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= phase);
    }
}

use nalgebra::SymmetricEigen;

use super::{c64, frobenius, HermitianOperator, Subspace, CMatrix, CVector, C64, I};
use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;

/// Eigen-decomposition of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
    /// Index groups of (numerically) degenerate eigenvalues, in ascending order.
    pub clusters: Vec<Vec<usize>>,
    /// Absolute gap used to form `clusters`.
    pub cluster_tol: f64,
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Mean eigenvalue of each cluster, ascending.
    pub fn distinct_values(&self) -> Vec<f64> {
        self.clusters
            .iter()
            .map(|c| c.iter().map(|&k| self.eigenvalues[k]).sum::<f64>() / c.len() as f64)
            .collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.clusters.iter().any(|c| c.len() > 1)
    }

    /// Orthonormal basis of the eigenspace of cluster `c`.
    pub fn cluster_space(&self, c: usize) -> Subspace {
        let cols: Vec<CVector> = self.clusters[c].iter().map(|&k| self.eigenvectors.column(k).into_owned()).collect();
        Subspace::from_spanning(&CMatrix::from_columns(&cols), 1e-8)
    }

    /// `||H - V diag(lambda) V^H||_F`.
    pub fn reconstruction_residual(&self, h: &CMatrix) -> f64 {
        frobenius(&(h - self.reconstruct()))
    }

    pub fn reconstruct(&self) -> CMatrix {
        let lam = super::diagonal(&self.eigenvalues);
        &self.eigenvectors * lam * self.eigenvectors.adjoint()
    }

    /// `max(|lambda_max|, |lambda_min|)`, the spectral norm.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// Largest minus smallest eigenvalue.
    pub fn spread(&self) -> f64 {
        match (self.eigenvalues.first(), self.eigenvalues.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0.0,
        }
    }
}

/// Hermitian eigensolve with ascending eigenvalues and degeneracy clustering
/// at `tol.cluster * ||H||` (spectral norm).
pub fn eigh(h: &HermitianOperator, tol: &ToleranceConfig) -> SpectralData {
    let eig = SymmetricEigen::new(h.matrix().clone());
    let n = h.dim();
    let mut v = eig.eigenvectors;
    let mut d = v.adjoint() * h.matrix() * &v;
    jacobi_polish(&mut d, &mut v);
    let raw: Vec<f64> = (0..n).map(|k| d[(k, k)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| raw[k]).collect();
    let cols: Vec<CVector> = order.iter().map(|&k| v.column(k).into_owned()).collect();
    let eigenvectors = CMatrix::from_columns(&cols);
    let scale = eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let cluster_tol = tol.cluster * scale;
    let clusters = cluster_sorted(&eigenvalues, cluster_tol);
    SpectralData { eigenvalues, eigenvectors, clusters, cluster_tol }
}

/// Cyclic complex Jacobi sweeps on a nearly diagonal Hermitian `d`,
/// accumulating rotations into `v`.
///
/// The QR-based solver can leave off-diagonal mass near `1e-10 ||H||`; a
/// sweep or two brings it to roundoff.
fn jacobi_polish(d: &mut CMatrix, v: &mut CMatrix) {
    let n = d.nrows();
    let scale = frobenius(d).max(f64::MIN_POSITIVE);
    for _ in 0..10 {
        let off: f64 = (0..n).flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q))).map(|(p, q)| d[(p, q)].norm_sqr()).sum();
        if off.sqrt() <= 0.01 * f64::EPSILON * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = d[(p, q)];
                let mag = b.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // J = diag(1, e^*) R with R the real Jacobi rotation of the
                // phase-stripped block.
                let e = b / mag;
                let theta = (d[(q, q)].re - d[(p, p)].re) / (2.0 * mag);
                let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let jpp = c64(c, 0.0);
                let jpq = c64(s, 0.0);
                let jqp = -e.conj() * s;
                let jqq = e.conj() * c;
                for k in 0..n {
                    let (x, y) = (d[(k, p)], d[(k, q)]);
                    d[(k, p)] = x * jpp + y * jqp;
                    d[(k, q)] = x * jpq + y * jqq;
                    let (x, y) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = x * jpp + y * jqp;
                    v[(k, q)] = x * jpq + y * jqq;
                }
                for k in 0..n {
                    let (x, y) = (d[(p, k)], d[(q, k)]);
                    d[(p, k)] = jpp.conj() * x + jqp.conj() * y;
                    d[(q, k)] = jpq.conj() * x + jqq.conj() * y;
                }
                d[(p, q)] = c64(0.0, 0.0);
                d[(q, p)] = c64(0.0, 0.0);
            }
        }
    }
}

/// Chains consecutive sorted values whose gap is at most `gap`.
fn cluster_sorted(values: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (k, &v) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(c) if v - values[*c.last().unwrap()] <= gap => c.push(k),
            _ => clusters.push(vec![k]),
        }
    }
    clusters
}

/// Eigen-decomposition of a normal matrix: complex eigenvalues with a unitary
/// eigenvector matrix.
#[derive(Debug, Clone)]
pub struct NormalSpectrum {
    pub eigenvalues: Vec<C64>,
    pub eigenvectors: CMatrix,
}

impl NormalSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

fn normality_defect(m: &CMatrix) -> f64 {
    frobenius(&(m.adjoint() * m - m * m.adjoint()))
}

fn check_normal(m: &CMatrix, rel_tol: f64) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let norm = frobenius(m);
    let deviation = normality_defect(m);
    if deviation > rel_tol * norm * norm {
        return Err(Error::NotNormal { deviation });
    }
    Ok(())
}

/// Diagonalizes a normal matrix by simultaneously diagonalizing its commuting
/// Hermitian parts `(M + M^H)/2` and `(M - M^H)/2i`.
pub fn normal_eigen(m: &CMatrix, tol: &ToleranceConfig) -> Result<NormalSpectrum> {
    check_normal(m, tol.spectral)?;
    let n = m.nrows();
    let half = c64(0.5, 0.0);
    let re_part = HermitianOperator::new((m + m.adjoint()) * half, tol)?;
    let im_part = (m - m.adjoint()) * (half / I);
    let re_spec = eigh(&re_part, tol);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut cols: Vec<CVector> = Vec::with_capacity(n);
    for cluster in &re_spec.clusters {
        let block: Vec<CVector> = cluster.iter().map(|&k| re_spec.eigenvectors.column(k).into_owned()).collect();
        let v = CMatrix::from_columns(&block);
        let re_mean = cluster.iter().map(|&k| re_spec.eigenvalues[k]).sum::<f64>() / cluster.len() as f64;
        let projected = v.adjoint() * &im_part * &v;
        let sub = eigh(&HermitianOperator::new(projected, &ToleranceConfig { hermiticity: 1e-8, ..*tol })?, tol);
        for (j, &im) in sub.eigenvalues.iter().enumerate() {
            eigenvalues.push(c64(re_mean, im));
            cols.push(&v * sub.eigenvectors.column(j));
        }
    }
    Ok(NormalSpectrum { eigenvalues, eigenvectors: CMatrix::from_columns(&cols) })
}

/// Orthonormal basis of `{v : ||M v - lambda v|| <= tol ||M||_F}` for a normal
/// matrix `M`, obtained from the right singular vectors of `M - lambda I`.
/// The subspace may be empty.
pub fn eigenspace(m: &CMatrix, lambda: C64, tol: f64) -> Result<Subspace> {
    check_normal(m, tol)?;
    let n = m.nrows();
    let shifted = m - CMatrix::identity(n, n) * lambda;
    let threshold = tol * frobenius(m);
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let cols: Vec<CVector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= threshold)
        .map(|(k, _)| v_t.row(k).adjoint())
        .collect();
    if cols.is_empty() {
        return Ok(Subspace::empty(n));
    }
    Ok(Subspace::from_spanning(&CMatrix::from_columns(&cols), 1e-8))
}

/// `exp(-i H t / hbar)`.
pub fn evolve(h: &HermitianOperator, t: f64, hbar: f64, tol: &ToleranceConfig) -> Result<CMatrix> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::NonPositiveValue(hbar));
    }
    Ok(evolve_spectral(&eigh(h, tol), t, hbar))
}

/// `exp(-i H t / hbar)` from a precomputed decomposition of `H`.
pub fn evolve_spectral(spec: &SpectralData, t: f64, hbar: f64) -> CMatrix {
    let phases = CVector::from_iterator(spec.dim(), spec.eigenvalues.iter().map(|&e| C64::from_polar(1.0, -e * t / hbar)));
    let v = &spec.eigenvectors;
    let mut scaled = v.clone();
    for (mut col, p) in scaled.column_iter_mut().zip(phases.iter()) {
        col *= *p;
    }
    scaled * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_norm, pauli, vec_norm};
    use crate::sample;
    use rand::{rngs::StdRng, SeedableRng};
    use std::f64::consts::FRAC_PI_2;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn eigh_residual_is_at_roundoff() {
        // The unpolished QR solver misses this bound on several of these.
        let mut rng = StdRng::seed_from_u64(3);
        for n in 2..=12 {
            for _ in 0..40 {
                let h = sample::hermitian(n, &mut rng);
                let s = eigh(&h, &tol());
                let lam = CMatrix::from_diagonal(&CVector::from_iterator(n, s.eigenvalues.iter().map(|&x| c64(x, 0.0))));
                let residual = frobenius(&(h.matrix() * &s.eigenvectors - &s.eigenvectors * lam));
                assert!(residual <= 1e-13 * h.norm().max(1.0), "n = {n}: {residual:e}");
                let gram = s.eigenvectors.adjoint() * &s.eigenvectors - CMatrix::identity(n, n);
                assert!(frobenius(&gram) <= 1e-13);
            }
        }
    }

    #[test]
    fn eigh_of_diagonal() {
        let spec = eigh(&HermitianOperator::diagonal(&[2.0, 1.0]), &tol());
        assert_eq!(spec.eigenvalues, vec![1.0, 2.0]);
        assert!((spec.eigenvectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((spec.eigenvectors[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigh_of_sigma_x() {
        let (sx, _, _) = pauli();
        let spec = eigh(&HermitianOperator::new(sx, &tol()).unwrap(), &tol());
        assert!((spec.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((spec.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigh_reconstructs_random_hermitian() {
        // Oracle: explicit reconstruction V diag(lambda) V^H.
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let h = sample::hermitian(6, &mut rng);
            let spec = eigh(&h, &tol());
            assert!(spec.reconstruction_residual(h.matrix()) <= 1e-10);
            let gram = spec.eigenvectors.adjoint() * &spec.eigenvectors;
            assert!(max_norm(&(gram - CMatrix::identity(6, 6))) <= 1e-12);
            assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            for k in 0..6 {
                let v = spec.eigenvectors.column(k).into_owned();
                let r = vec_norm(&(h.matrix() * &v - &v * c64(spec.eigenvalues[k], 0.0)));
                assert!(r <= 1e-10 * h.norm());
            }
        }
    }

    #[test]
    fn clusters_group_degenerate_levels() {
        let spec = eigh(&HermitianOperator::diagonal(&[1.0, 0.0, 1.0, 3.0, 1.0 + 1e-12]), &tol());
        assert_eq!(spec.clusters, vec![vec![0], vec![1, 2, 3], vec![4]]);
        assert!(spec.is_degenerate());
        let vals = spec.distinct_values();
        assert!((vals[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenspace_picks_requested_eigenvalue() {
        let c = c64(0.0, 1.3);
        let m = CMatrix::from_diagonal(&CVector::from_column_slice(&[c64(0.0, 0.0), c64(0.0, 0.0), c, -c]));
        let s = eigenspace(&m, c, 1e-10).unwrap();
        assert_eq!(s.dim(), 1);
        assert!((s.vector(0).amplitudes()[2] - c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eigenspace_of_identity_is_everything() {
        let s = eigenspace(&CMatrix::identity(3, 3), c64(1.0, 0.0), 1e-10).unwrap();
        assert_eq!(s.dim(), 3);
    }

    #[test]
    fn eigenspace_two_by_two_by_hand() {
        // [[0,-i],[-i,0]] has characteristic polynomial lambda^2 + 1; for
        // lambda = +i the kernel of [[-i,-i],[-i,-i]] is spanned by (1,-1).
        let m = CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), -I, -I, c64(0.0, 0.0)]);
        let s = eigenspace(&m, I, 1e-10).unwrap();
        assert_eq!(s.dim(), 1);
        let v = s.vector(0);
        let r = 0.5f64.sqrt();
        assert!((v.amplitudes()[0] - c64(r, 0.0)).norm() < 1e-14);
        assert!((v.amplitudes()[1] - c64(-r, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eigenspace_empty_and_non_normal() {
        let m = CMatrix::identity(2, 2);
        assert!(eigenspace(&m, c64(2.0, 0.0), 1e-10).unwrap().is_empty());
        let nilpotent = CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        assert!(matches!(eigenspace(&nilpotent, c64(0.0, 0.0), 1e-10), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn normal_eigen_diagonalizes() {
        let mut rng = StdRng::seed_from_u64(3);
        for n in 2..7 {
            let m = sample::normal_matrix(n, &mut rng);
            let spec = normal_eigen(&m, &tol()).unwrap();
            let v = &spec.eigenvectors;
            let lam = CMatrix::from_diagonal(&CVector::from_column_slice(&spec.eigenvalues));
            assert!(frobenius(&(&m * v - v * lam)) < 1e-10 * frobenius(&m));
            assert!(max_norm(&(v.adjoint() * v - CMatrix::identity(n, n))) < 1e-12);
        }
    }

    #[test]
    fn evolve_zero_time_is_identity() {
        let mut rng = StdRng::seed_from_u64(5);
        let h = sample::hermitian(4, &mut rng);
        let u = evolve(&h, 0.0, 1.0, &tol()).unwrap();
        assert!(max_norm(&(u - CMatrix::identity(4, 4))) < 1e-14);
    }

    #[test]
    fn evolve_sigma_z_quarter_turn() {
        let (_, _, sz) = pauli();
        let u = evolve(&HermitianOperator::new(sz, &tol()).unwrap(), FRAC_PI_2, 1.0, &tol()).unwrap();
        assert!((u[(0, 0)] - C64::from_polar(1.0, -FRAC_PI_2)).norm() < 1e-15);
        assert!((u[(1, 1)] - C64::from_polar(1.0, FRAC_PI_2)).norm() < 1e-15);
        assert!(u[(0, 1)].norm() < 1e-15 && u[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn evolve_is_unitary_and_invertible() {
        // Oracle: unitarity residual ||U^H U - I||_F.
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..10 {
            let h = sample::hermitian(5, &mut rng);
            let t: f64 = rand::Rng::gen_range(&mut rng, -10.0..10.0);
            let u = evolve(&h, t, 0.7, &tol()).unwrap();
            assert!(frobenius(&(u.adjoint() * &u - CMatrix::identity(5, 5))) <= 1e-12);
            let back = evolve(&h, -t, 0.7, &tol()).unwrap();
            assert!(frobenius(&(&u * back - CMatrix::identity(5, 5))) <= 1e-10);
        }
    }

    #[test]
    fn evolve_rejects_bad_hbar() {
        let h = HermitianOperator::diagonal(&[0.0, 1.0]);
        assert!(evolve(&h, 1.0, 0.0, &tol()).is_err());
        assert!(evolve(&h, 1.0, -1.0, &tol()).is_err());
    }
}

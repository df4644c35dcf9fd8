use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix, C64};

/// Distinct eigenvalues `B_1 < ... < B_L` of `B` with multiplicities `M_s`.
///
/// Basis index `k` of `C^N` corresponds to the label `(s, r)` with levels
/// laid out consecutively: `|1,1>, ..., |1,M_1>, |2,1>, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSpec {
    values: Vec<f64>,
    multiplicities: Vec<usize>,
}

impl SpectrumSpec {
    pub fn new(values: Vec<f64>, multiplicities: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if values.len() != multiplicities.len() {
            return Err(Error::DimensionMismatch { expected: values.len(), found: multiplicities.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("spectrum values must be finite".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("spectrum values must be strictly increasing".into()));
        }
        if multiplicities.contains(&0) {
            return Err(Error::InvalidInput("multiplicities must be positive".into()));
        }
        Ok(Self { values, multiplicities })
    }

    pub fn nondegenerate(values: Vec<f64>) -> Result<Self> {
        let m = vec![1; values.len()];
        Self::new(values, m)
    }

    /// `0, 1, ..., n-1`.
    pub fn equally_spaced(n: usize) -> Self {
        Self::nondegenerate((0..n).map(|k| k as f64).collect()).expect("integers are increasing")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Number of distinct levels `L`.
    pub fn levels(&self) -> usize {
        self.values.len()
    }

    /// Hilbert-space dimension `N = sum M_s`.
    pub fn dim(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 1)
    }

    /// `(s, r)` label of basis index `k`, both zero-based.
    pub fn label(&self, k: usize) -> (usize, usize) {
        let mut offset = 0;
        for (s, &m) in self.multiplicities.iter().enumerate() {
            if k < offset + m {
                return (s, k - offset);
            }
            offset += m;
        }
        panic!("basis index {k} out of range for dimension {}", self.dim());
    }

    /// Basis index of label `(s, r)`, both zero-based.
    pub fn index(&self, s: usize, r: usize) -> usize {
        assert!(r < self.multiplicities[s], "degeneracy index out of range");
        self.multiplicities[..s].iter().sum::<usize>() + r
    }

    /// Level `s` of each basis index.
    pub fn level_of_index(&self) -> Vec<usize> {
        self.multiplicities
            .iter()
            .enumerate()
            .flat_map(|(s, &m)| std::iter::repeat_n(s, m))
            .collect()
    }

    /// Diagonal of `B` in the labelled basis.
    pub fn expanded_values(&self) -> Vec<f64> {
        self.level_of_index().into_iter().map(|s| self.values[s]).collect()
    }
}

/// Parameters of the characteristic form of `A`, indexed by basis index.
///
/// The setters keep `alpha` antisymmetric, `beta` and `block_b` Hermitian;
/// entries of `alpha` and `beta` inside a level and of `block_b` across
/// levels are ignored by the builders.
#[derive(Debug, Clone, PartialEq)]
pub struct PairParams {
    alpha: DMatrix<f64>,
    beta: CMatrix,
    diag_a: Vec<f64>,
    block_b: CMatrix,
    hbar: f64,
}

impl PairParams {
    /// `alpha = 0`, `beta = 1/sqrt(M_s M_s')`, `a = 0`, `b = 0`, `hbar = 1`.
    pub fn defaults(spec: &SpectrumSpec) -> Self {
        let n = spec.dim();
        let levels = spec.level_of_index();
        let m = spec.multiplicities();
        let beta = CMatrix::from_fn(n, n, |k, l| c64(1.0 / ((m[levels[k]] * m[levels[l]]) as f64).sqrt(), 0.0));
        Self {
            alpha: DMatrix::zeros(n, n),
            beta,
            diag_a: vec![0.0; n],
            block_b: CMatrix::zeros(n, n),
            hbar: 1.0,
        }
    }

    /// Builds from full tables, checking the symmetry relations.
    pub fn from_tables(alpha: DMatrix<f64>, beta: CMatrix, diag_a: Vec<f64>, block_b: CMatrix, hbar: f64) -> Result<Self> {
        let n = diag_a.len();
        for (rows, cols) in [alpha.shape(), beta.shape(), block_b.shape()] {
            if rows != n || cols != n {
                return Err(Error::DimensionMismatch { expected: n, found: rows.max(cols) });
            }
        }
        let p = Self { alpha, beta, diag_a, block_b, hbar };
        p.check_symmetry()?;
        p.check_hbar()?;
        Ok(p)
    }

    pub fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = hbar;
        self
    }

    pub fn with_diag_a(mut self, a: Vec<f64>) -> Self {
        self.diag_a = a;
        self
    }

    /// Sets `alpha_kl = value`, `alpha_lk = -value`.
    pub fn set_alpha(&mut self, k: usize, l: usize, value: f64) {
        self.alpha[(k, l)] = value;
        self.alpha[(l, k)] = -value;
    }

    /// Sets `beta_kl = value`, `beta_lk = conj(value)`.
    pub fn set_beta(&mut self, k: usize, l: usize, value: C64) {
        self.beta[(k, l)] = value;
        self.beta[(l, k)] = value.conj();
    }

    /// Sets the intra-level term `b_kl = value`, `b_lk = conj(value)`.
    pub fn set_block_b(&mut self, k: usize, l: usize, value: C64) {
        self.block_b[(k, l)] = value;
        self.block_b[(l, k)] = value.conj();
    }

    /// Same `alpha` on every pair `k < l`.
    pub fn with_uniform_alpha(mut self, value: f64) -> Self {
        let n = self.diag_a.len();
        for k in 0..n {
            for l in k + 1..n {
                self.set_alpha(k, l, value);
            }
        }
        self
    }

    /// Multiplies `beta` on every pair by the real factor `value`.
    pub fn with_beta_scale(mut self, value: f64) -> Self {
        self.beta *= c64(value, 0.0);
        self
    }

    pub fn alpha(&self) -> &DMatrix<f64> {
        &self.alpha
    }

    pub fn beta(&self) -> &CMatrix {
        &self.beta
    }

    pub fn diag_a(&self) -> &[f64] {
        &self.diag_a
    }

    pub fn block_b(&self) -> &CMatrix {
        &self.block_b
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.diag_a.len()
    }

    fn check_hbar(&self) -> Result<()> {
        if self.hbar.is_finite() && self.hbar > 0.0 {
            Ok(())
        } else {
            Err(Error::NonPositiveValue(self.hbar))
        }
    }

    fn check_symmetry(&self) -> Result<()> {
        let n = self.dim();
        for k in 0..n {
            for l in k..n {
                let da = self.alpha[(k, l)] + self.alpha[(l, k)];
                if da.abs() > 1e-12 * (1.0 + self.alpha[(k, l)].abs()) {
                    return Err(Error::InvalidInput(format!("alpha is not antisymmetric at ({k},{l})")));
                }
                for (name, t) in [("beta", &self.beta), ("block_b", &self.block_b)] {
                    let d = (t[(k, l)] - t[(l, k)].conj()).norm();
                    if d > 1e-12 * (1.0 + t[(k, l)].norm()) {
                        return Err(Error::InvalidInput(format!("{name} is not Hermitian-symmetric at ({k},{l})")));
                    }
                }
            }
        }
        if self.diag_a.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("diag_a must be finite".into()));
        }
        Ok(())
    }

    pub(crate) fn check_against(&self, spec: &SpectrumSpec) -> Result<()> {
        if self.dim() != spec.dim() {
            return Err(Error::DimensionMismatch { expected: spec.dim(), found: self.dim() });
        }
        self.check_hbar()?;
        self.check_symmetry()
    }
}

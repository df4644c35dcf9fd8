//! Construction of canonical and essentially canonical pairs `(A, B)`.
//!
//! Every builder produces `A` in the characteristic form
//! `A_kl = beta_kl * i hbar * exp(i alpha_kl) / (B_k - B_l)` between distinct
//! levels of `B`, then certifies the result by eigensolving `[A, B]`: the
//! canonical domain is whatever the eigensolver returns at `c = i hbar`.

mod catalog;
mod spectrum;

pub use catalog::{catalog_3d, CatalogParams, CatalogRelation, CatalogResult, Family};
pub use spectrum::{PairParams, SpectrumSpec};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{c64, commutator_of, eigenspace, frobenius, vec_norm, CMatrix, HermitianOperator, Subspace, C64, I};
use crate::tolerance::ToleranceConfig;

/// How a [`CanonicalSolution`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Nondegenerate,
    Degenerate,
    Projection,
    Catalog(Family),
    Remapped,
    /// Built from an arbitrary Hermitian pair (classification, factorization, file input).
    Assembled,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Nondegenerate => f.write_str("nondegenerate-nd"),
            Provenance::Degenerate => f.write_str("degenerate-nd"),
            Provenance::Projection => f.write_str("projection"),
            Provenance::Catalog(fam) => write!(f, "catalog-3d:{fam}"),
            Provenance::Remapped => f.write_str("remapped"),
            Provenance::Assembled => f.write_str("assembled"),
        }
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "nondegenerate-nd" => Provenance::Nondegenerate,
            "degenerate-nd" => Provenance::Degenerate,
            "projection" => Provenance::Projection,
            "remapped" => Provenance::Remapped,
            "assembled" => Provenance::Assembled,
            other => match other.strip_prefix("catalog-3d:") {
                Some(fam) => Provenance::Catalog(fam.parse()?),
                None => return Err(Error::InvalidInput(format!("unknown provenance '{other}'"))),
            },
        })
    }
}

/// A pair `(A, B)` with a nonempty eigenspace of `[A, B]` at eigenvalue `c`.
#[derive(Debug, Clone)]
pub struct CanonicalSolution {
    a: HermitianOperator,
    b: HermitianOperator,
    c: C64,
    domain: Subspace,
    provenance: Provenance,
    hbar: f64,
}

impl CanonicalSolution {
    /// Computes the domain as the eigenspace of `[A, B]` at `c`.
    ///
    /// Fails with `NoCanonicalEigenvalue` when `c` is not an eigenvalue.
    pub fn from_pair(
        a: HermitianOperator,
        b: HermitianOperator,
        c: C64,
        hbar: f64,
        provenance: Provenance,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        check_hbar(hbar)?;
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
        }
        let comm = commutator_of(a.matrix(), b.matrix());
        let domain = eigenspace(&comm, c, tol.ccr)?;
        if domain.is_empty() {
            return Err(Error::NoCanonicalEigenvalue { expected: format_c(c) });
        }
        Ok(Self { a, b, c, domain, provenance, hbar })
    }

    /// Reassembles a solution from stored parts, re-verifying the relation on
    /// every domain basis vector.
    pub fn from_parts(
        a: HermitianOperator,
        b: HermitianOperator,
        c: C64,
        domain: Subspace,
        hbar: f64,
        provenance: Provenance,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        check_hbar(hbar)?;
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
        }
        if domain.ambient_dim() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: domain.ambient_dim() });
        }
        if domain.is_empty() {
            return Err(Error::NoCanonicalEigenvalue { expected: format_c(c) });
        }
        let sol = Self { a, b, c, domain, provenance, hbar };
        let residual = sol.ccr_residual();
        if residual > sol.ccr_bound(tol) {
            return Err(Error::ConstraintViolated(format!(
                "domain vectors violate [A,B]phi = {} phi (residual {residual:e})",
                format_c(c)
            )));
        }
        Ok(sol)
    }

    pub fn a(&self) -> &HermitianOperator {
        &self.a
    }

    pub fn b(&self) -> &HermitianOperator {
        &self.b
    }

    pub fn c(&self) -> C64 {
        self.c
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn commutator(&self) -> CMatrix {
        commutator_of(self.a.matrix(), self.b.matrix())
    }

    /// `max_phi ||[A,B] phi - c phi||` over the domain basis.
    pub fn ccr_residual(&self) -> f64 {
        let comm = self.commutator();
        self.domain
            .vectors()
            .map(|phi| {
                let v = phi.amplitudes();
                vec_norm(&(&comm * v - v * self.c))
            })
            .fold(0.0, f64::max)
    }

    /// `tol.ccr * ||A|| ||B||`.
    pub fn ccr_bound(&self, tol: &ToleranceConfig) -> f64 {
        tol.ccr * self.a.norm() * self.b.norm()
    }

    /// The equivalent solution `(U^H A U, U^H B U, U^H D)`.
    pub fn conjugated(&self, u: &CMatrix) -> Self {
        Self {
            a: self.a.conjugate_by(u),
            b: self.b.conjugate_by(u),
            c: self.c,
            domain: self.domain.mapped(&u.adjoint()),
            provenance: self.provenance,
            hbar: self.hbar,
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveValue(hbar))
    }
}

pub(crate) fn format_c(c: C64) -> String {
    if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("{}{:+}i", c.re, c.im)
    }
}

/// `A` in characteristic form over the eigenbasis of `diag(B)`.
///
/// Between levels `s != s'`: `beta * i hbar * exp(i alpha) / (B_s - B_s')`;
/// within a level: `block_b`; diagonal: `diag_a`.
pub fn characteristic_matrix(spec: &SpectrumSpec, params: &PairParams) -> CMatrix {
    let n = spec.dim();
    let levels = spec.level_of_index();
    let values = spec.expanded_values();
    let hbar = params.hbar();
    CMatrix::from_fn(n, n, |k, l| {
        if k == l {
            c64(params.diag_a()[k], 0.0)
        } else if levels[k] == levels[l] {
            params.block_b()[(k, l)]
        } else {
            let phase = C64::from_polar(1.0, params.alpha()[(k, l)]);
            params.beta()[(k, l)] * I * hbar * phase / (values[k] - values[l])
        }
    })
}

fn build(spec: &SpectrumSpec, params: &PairParams, provenance: Provenance, tol: &ToleranceConfig) -> Result<CanonicalSolution> {
    params.check_against(spec)?;
    let a = HermitianOperator::new(characteristic_matrix(spec, params), tol)?;
    let b = HermitianOperator::diagonal(&spec.expanded_values());
    let hbar = params.hbar();
    CanonicalSolution::from_pair(a, b, I * hbar, hbar, provenance, tol).map_err(|e| match e {
        Error::NoCanonicalEigenvalue { expected } => Error::ConstraintViolated(format!(
            "beta table does not satisfy the characteristic equation: [A,B] has no eigenvalue {expected}"
        )),
        other => other,
    })
}

/// Canonical pair for a nondegenerate `B`; with default parameters the domain
/// is `span{|k> - |l>}` of dimension `N - 1`.
pub fn build_nondegenerate(spec: &SpectrumSpec, params: &PairParams, tol: &ToleranceConfig) -> Result<CanonicalSolution> {
    if !spec.is_nondegenerate() {
        return Err(Error::DegenerateSpectrum);
    }
    if spec.levels() < 2 {
        return Err(Error::PurelyDegenerate);
    }
    build(spec, params, Provenance::Nondegenerate, tol)
}

/// Canonical pair for a `B` with arbitrary multiplicities; needs `L >= 2`.
pub fn build_degenerate(spec: &SpectrumSpec, params: &PairParams, tol: &ToleranceConfig) -> Result<CanonicalSolution> {
    if spec.levels() < 2 {
        return Err(Error::PurelyDegenerate);
    }
    build(spec, params, Provenance::Degenerate, tol)
}

/// `A' = P A P + F` with `P` the projector onto the basis indices in `keep`
/// and `F` the part of `diag(A)` outside `keep`; `B` unchanged. The domain is
/// recomputed at the solution's `c`.
pub fn project_pair(sol: &CanonicalSolution, keep: &[usize], tol: &ToleranceConfig) -> Result<CanonicalSolution> {
    let n = sol.dim();
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.len() < 2 {
        return Err(Error::TooSmall(keep.len()));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= n) {
        return Err(Error::InvalidInput(format!("index {bad} out of range for dimension {n}")));
    }
    let mut inside = vec![false; n];
    keep.iter().for_each(|&k| inside[k] = true);
    let a = sol.a.matrix();
    let projected = CMatrix::from_fn(n, n, |k, l| {
        if (inside[k] && inside[l]) || k == l {
            a[(k, l)]
        } else {
            c64(0.0, 0.0)
        }
    });
    let b = sol.b.matrix();
    let restricted = CMatrix::from_fn(keep.len(), keep.len(), |i, j| b[(keep[i], keep[j])]);
    let spec = crate::linalg::eigh(&HermitianOperator::new(restricted, tol)?, tol);
    if spec.clusters.len() < 2 {
        return Err(Error::ConstraintViolated("B restricted to the kept indices has a single eigenvalue".into()));
    }
    let a_new = HermitianOperator::new(projected, tol)?;
    CanonicalSolution::from_pair(a_new, sol.b.clone(), sol.c, sol.hbar, Provenance::Projection, tol)
}

/// Maps a relation `[A,B] phi = i gamma phi` (real `gamma != 0`) to the
/// canonical pair `(hbar^lambda A / gamma^rho, hbar^(1-lambda) B / gamma^(1-rho))`
/// on the same domain.
pub fn remap_essential_to_canonical(sol: &CanonicalSolution, lambda: f64, rho: f64) -> Result<CanonicalSolution> {
    let c = sol.c;
    if c.norm() == 0.0 || c.re.abs() > 1e-10 * c.norm() {
        return Err(Error::NotHermitianPair(format_c(c)));
    }
    let gamma = c.im;
    let hbar = sol.hbar;
    let fa = hbar.powf(lambda) / real_power(gamma, rho)?;
    let fb = hbar.powf(1.0 - lambda) / real_power(gamma, 1.0 - rho)?;
    Ok(CanonicalSolution {
        a: sol.a.scaled(fa),
        b: sol.b.scaled(fb),
        c: I * hbar,
        domain: sol.domain.clone(),
        provenance: Provenance::Remapped,
        hbar,
    })
}

fn real_power(x: f64, p: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(x.powf(p))
    } else if p.fract() == 0.0 {
        let mag = x.abs().powf(p);
        Ok(if (p as i64) % 2 == 0 { mag } else { -mag })
    } else {
        Err(Error::NonRealScaling(format!("{x}i (exponent {p})")))
    }
}

/// Frobenius distance between two operators, used by equivalence checks.
pub fn operator_distance(a: &HermitianOperator, b: &HermitianOperator) -> f64 {
    frobenius(&(a.matrix() - b.matrix()))
}

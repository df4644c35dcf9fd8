//! Parameter invariant sets of canonical domains under `U(t) = exp(-iHt/hbar)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{eigh, evolve, vec_norm, CMatrix, HermitianOperator, Subspace};
use crate::pairs::CanonicalSolution;
use crate::tolerance::ToleranceConfig;

/// Amplitude below which an eigenprojector is taken to annihilate the domain.
pub const SPECTATOR_TOL: f64 = 1e-10;

/// Controls the commensurability test in [`real_gcd`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcdConfig {
    /// Largest denominator of any ratio, and of their common denominator.
    pub max_denominator: u64,
    /// Relative error allowed between a ratio and its rational approximation.
    pub rel_tol: f64,
    /// Upper bound on `q^2 |r - p/q|` for an accepted convergent `p/q`.
    pub margin: f64,
}

impl Default for GcdConfig {
    fn default() -> Self {
        Self { max_denominator: 1_000_000, rel_tol: 1e-9, margin: 1e-3 }
    }
}

/// First continued-fraction convergent `p/q` of `r > 0` that satisfies the
/// tolerances in `cfg`.
fn rational_approximation(r: f64, cfg: &GcdConfig) -> Option<(u128, u128)> {
    let (mut h_prev, mut h) = (1u128, r.floor() as u128);
    let (mut k_prev, mut k) = (0u128, 1u128);
    let mut x = r - r.floor();
    loop {
        let err = (r - h as f64 / k as f64).abs();
        let accepted = err <= cfg.rel_tol * r && (k as f64).powi(2) * err <= cfg.margin;
        if accepted {
            return Some((h, k));
        }
        if x <= f64::EPSILON * r {
            return None;
        }
        let inv = 1.0 / x;
        let a = inv.floor();
        x = inv - a;
        let a = a as u128;
        let k_next = a.checked_mul(k)?.checked_add(k_prev)?;
        if k_next > cfg.max_denominator as u128 {
            return None;
        }
        let h_next = a.checked_mul(h)?.checked_add(h_prev)?;
        (h_prev, h, k_prev, k) = (h, h_next, k, k_next);
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Largest `d` such that every value is an integer multiple of `d`, or `None`
/// when some ratio is incommensurate at the configured precision.
pub fn real_gcd(values: &[f64], cfg: &GcdConfig) -> Result<Option<f64>> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(&bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::NonPositiveValue(bad));
    }
    if cfg.max_denominator == 0 {
        return Err(Error::InvalidInput("max_denominator must be at least 1".into()));
    }
    let v_min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mut fractions = Vec::with_capacity(values.len());
    for &v in values {
        match rational_approximation(v / v_min, cfg) {
            Some(f) => fractions.push(f),
            None => return Ok(None),
        }
    }
    let mut common = 1u128;
    for &(_, q) in &fractions {
        common = common / gcd_u128(common, q) * q;
        if common > cfg.max_denominator as u128 {
            return Ok(None);
        }
    }
    let g = fractions.iter().fold(common, |acc, &(p, q)| gcd_u128(acc, p * (common / q)));
    Ok(Some(v_min / common as f64 * g as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantKind {
    FullLine,
    Lattice,
    ZeroOnly,
}

impl InvariantKind {
    pub fn name(self) -> &'static str {
        match self {
            InvariantKind::FullLine => "full-line",
            InvariantKind::Lattice => "lattice",
            InvariantKind::ZeroOnly => "zero-only",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSet {
    pub kind: InvariantKind,
    /// `2 pi hbar / generator_gcd`; present iff `Lattice`.
    pub period: Option<f64>,
    pub generator_gcd: Option<f64>,
    /// Eigenvalue clusters of `H` (ascending) whose projector annihilates the domain.
    pub excluded_levels: Vec<usize>,
}

impl InvariantSet {
    /// Whether `t` is in the set as described, without evolving anything.
    pub fn contains_nominal(&self, t: f64, rel_tol: f64) -> bool {
        match (self.kind, self.period) {
            (InvariantKind::FullLine, _) => true,
            (InvariantKind::Lattice, Some(p)) => {
                let n = (t / p).round();
                (t - n * p).abs() <= rel_tol * p.max(t.abs())
            }
            _ => t == 0.0,
        }
    }

    /// The `n`-th lattice point; `0` is always available.
    pub fn point(&self, n: i64) -> Option<f64> {
        match (self.kind, self.period) {
            _ if n == 0 => Some(0.0),
            (InvariantKind::Lattice, Some(p)) => Some(n as f64 * p),
            _ => None,
        }
    }
}

/// Computes the invariant set of `sol`'s domain under `H`.
///
/// Levels of `H` whose eigenprojector annihilates every domain basis vector
/// are excluded. If at most one level remains the domain lies in a single
/// eigenspace of `H` and the set is the full line; otherwise a gcd of the
/// remaining level differences gives a lattice and its absence `{0}`.
pub fn invariant_set(sol: &CanonicalSolution, h: &HermitianOperator, cfg: &GcdConfig, tol: &ToleranceConfig) -> Result<InvariantSet> {
    if h.dim() != sol.dim() {
        return Err(Error::DimensionMismatch { expected: sol.dim(), found: h.dim() });
    }
    let spec = eigh(h, tol);
    let energies = spec.distinct_values();
    let domain = sol.domain();
    let mut excluded = Vec::new();
    let mut active = Vec::new();
    for (j, &e) in energies.iter().enumerate() {
        let level = spec.cluster_space(j);
        let weight = domain
            .vectors()
            .map(|phi| level.projection_norm(phi.amplitudes()))
            .fold(0.0, f64::max);
        if weight <= SPECTATOR_TOL {
            excluded.push(j);
        } else {
            active.push(e);
        }
    }
    if active.len() <= 1 || is_single_eigenvector(domain, h, tol) {
        return Ok(InvariantSet { kind: InvariantKind::FullLine, period: None, generator_gcd: None, excluded_levels: excluded });
    }
    let mut diffs = Vec::new();
    for k in 0..active.len() {
        for l in 0..k {
            diffs.push(active[k] - active[l]);
        }
    }
    Ok(match real_gcd(&diffs, cfg)? {
        Some(g) => InvariantSet {
            kind: InvariantKind::Lattice,
            period: Some(2.0 * PI * sol.hbar() / g),
            generator_gcd: Some(g),
            excluded_levels: excluded,
        },
        None => InvariantSet { kind: InvariantKind::ZeroOnly, period: None, generator_gcd: None, excluded_levels: excluded },
    })
}

fn is_single_eigenvector(domain: &Subspace, h: &HermitianOperator, tol: &ToleranceConfig) -> bool {
    if domain.dim() != 1 {
        return false;
    }
    let phi = domain.vector(0);
    let mean = h.expectation(&phi);
    let v = phi.amplitudes();
    let residual = vec_norm(&(h.matrix() * v - v * crate::linalg::c64(mean, 0.0)));
    residual <= tol.spectral * h.norm().max(f64::MIN_POSITIVE)
}

/// Result of a membership test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub is_member: bool,
    /// Largest distance of `U(t) phi` from the domain over the domain basis.
    pub residual: f64,
}

/// Whether `U(t)` maps the domain into itself.
pub fn check_membership(sol: &CanonicalSolution, h: &HermitianOperator, t: f64, tol: &ToleranceConfig) -> Result<Membership> {
    if h.dim() != sol.dim() {
        return Err(Error::DimensionMismatch { expected: sol.dim(), found: h.dim() });
    }
    let u = evolve(h, t, sol.hbar(), tol)?;
    Ok(subspace_membership(sol.domain(), &u, tol))
}

/// Whether the unitary `u` maps `domain` into itself.
pub fn subspace_membership(domain: &Subspace, u: &CMatrix, tol: &ToleranceConfig) -> Membership {
    let residual = domain
        .vectors()
        .map(|phi| domain.distance(&(u * phi.amplitudes())))
        .fold(0.0, f64::max);
    Membership { is_member: residual <= tol.domain, residual }
}

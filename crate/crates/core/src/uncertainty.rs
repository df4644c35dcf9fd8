//! Uncertainties, the `|c|/2` floor and minimum-uncertainty detection.
//!
//! A domain state saturates the floor iff it is an eigenket of `A - i gamma B`
//! for some real `gamma != 0`. For a relation `[A,B] phi = i hbar phi` such a
//! `gamma` necessarily equals `-hbar / (2 (Delta B)^2)`.

use crate::error::{Error, Result};
use crate::linalg::{c64, inner, vec_norm, CVector, HermitianOperator, StateVector, C64, I};
use crate::pairs::CanonicalSolution;
use crate::tolerance::ToleranceConfig;

/// Residual bound for an eigenket of `A - i gamma B`.
pub const SATURATION_TOL: f64 = 1e-8;
/// Below this `|gamma|` a fit is treated as `gamma = 0`.
pub const GAMMA_FLOOR: f64 = 1e-10;
/// Uncertainties above this count as nonvanishing.
pub const NONVANISHING_TOL: f64 = 1e-10;

/// `(A - <A>) phi`.
fn centered(a: &HermitianOperator, phi: &StateVector) -> CVector {
    let v = phi.amplitudes();
    a.matrix() * v - v * c64(a.expectation(phi), 0.0)
}

/// `Delta_phi A = ||(A - <A>) phi||`, nonnegative by construction.
///
/// `phi` is unit norm by type; mismatched dimensions are rejected.
pub fn uncertainty(a: &HermitianOperator, phi: &StateVector) -> Result<f64> {
    if a.dim() != phi.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: phi.dim() });
    }
    Ok(vec_norm(&centered(a, phi)))
}

/// Least-squares fit of `A phi ~ gamma (i B phi) + mu phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFit {
    /// Optimal complex `gamma`.
    pub gamma: C64,
    pub mu: C64,
    /// Residual at the complex optimum.
    pub residual: f64,
    /// Optimal `gamma` restricted to the real line.
    pub real_gamma: f64,
    /// Residual at the real optimum.
    pub real_residual: f64,
}

impl GammaFit {
    pub fn is_saturating(&self) -> bool {
        self.residual <= SATURATION_TOL && self.gamma.im.abs() <= SATURATION_TOL && self.gamma.norm() > GAMMA_FLOOR
    }
}

/// Minimizes `||(A - i gamma B) phi - mu phi||` over complex `gamma`, `mu`.
///
/// With `y = (A - <A>) phi` and `u = i (B - <B>) phi` the optimum is
/// `gamma = <u, y> / <u, u>`; `mu` then follows from the projection onto `phi`.
pub fn fit_gamma(a: &HermitianOperator, b: &HermitianOperator, phi: &StateVector) -> Result<GammaFit> {
    if a.dim() != phi.dim() || b.dim() != phi.dim() {
        return Err(Error::DimensionMismatch { expected: phi.dim(), found: a.dim().max(b.dim()) });
    }
    let y = centered(a, phi);
    let u = centered(b, phi) * I;
    let uu = inner(&u, &u).re;
    let scale = a.norm().max(b.norm()).max(1.0);
    let (gamma, real_gamma) = if uu.sqrt() <= 1e-14 * scale {
        (c64(0.0, 0.0), 0.0)
    } else {
        let g = inner(&u, &y) / uu;
        (g, g.re)
    };
    let residual = vec_norm(&(&y - &u * gamma));
    let real_residual = vec_norm(&(&y - &u * c64(real_gamma, 0.0)));
    let v = phi.amplitudes();
    let mu = inner(v, &(a.matrix() * v - b.matrix() * v * (I * gamma)));
    Ok(GammaFit { gamma, mu, residual, real_gamma, real_residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport {
    pub delta_a: f64,
    pub delta_b: f64,
    pub product: f64,
    /// `|c| / 2`.
    pub floor: f64,
    pub saturated: bool,
    /// Real fitted `gamma`; present iff `saturated`.
    pub gamma: Option<f64>,
    pub fit: GammaFit,
}

fn require_in_domain(sol: &CanonicalSolution, phi: &StateVector, tol: &ToleranceConfig) -> Result<()> {
    if phi.dim() != sol.dim() {
        return Err(Error::DimensionMismatch { expected: sol.dim(), found: phi.dim() });
    }
    let distance = sol.domain().distance(phi.amplitudes());
    if distance > tol.domain {
        return Err(Error::StateOutsideDomain { distance });
    }
    Ok(())
}

/// Uncertainty product of `sol` on a domain state and the saturation test.
pub fn audit_pair(sol: &CanonicalSolution, phi: &StateVector, tol: &ToleranceConfig) -> Result<UncertaintyReport> {
    require_in_domain(sol, phi, tol)?;
    let delta_a = uncertainty(sol.a(), phi)?;
    let delta_b = uncertainty(sol.b(), phi)?;
    let fit = fit_gamma(sol.a(), sol.b(), phi)?;
    let saturated = fit.is_saturating();
    Ok(UncertaintyReport {
        delta_a,
        delta_b,
        product: delta_a * delta_b,
        floor: sol.c().norm() / 2.0,
        saturated,
        gamma: saturated.then_some(fit.gamma.re),
        fit,
    })
}

/// `true` iff both uncertainties on the domain state exceed
/// [`NONVANISHING_TOL`].
pub fn nonvanishing_check(sol: &CanonicalSolution, phi: &StateVector, tol: &ToleranceConfig) -> Result<bool> {
    require_in_domain(sol, phi, tol)?;
    Ok(uncertainty(sol.a(), phi)? > NONVANISHING_TOL && uncertainty(sol.b(), phi)? > NONVANISHING_TOL)
}

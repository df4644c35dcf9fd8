//! Canonical partners of a Hamiltonian read as clocks.
//!
//! `T(t) = U(t)^H T U(t)` with `U(t) = exp(-i H t / hbar)`. Near points of the
//! time invariant set a domain state sees `T(t + tau) = T(t) +- tau + O(tau^2)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::invariant::subspace_membership;
use crate::linalg::{
    c64, commutator_of, eigenspace, eigh, evolve_spectral, fix_phase, frobenius, identity, vec_norm, CMatrix, CVector,
    HermitianOperator, SpectralData, StateVector, Subspace, C64, I,
};
use crate::pairs::CanonicalSolution;
use crate::tolerance::ToleranceConfig;
use crate::uncertainty::uncertainty;

/// Default half-width of the linear window, in units of `hbar / max gap`.
pub const DEFAULT_WINDOW: f64 = 0.05;
/// `max|tau| ||H|| / hbar` above which a linear fit is flagged.
pub const WIDE_WINDOW: f64 = 0.5;

/// Which eigenvalue of `[T, H]` defines the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClockSign {
    /// `[T, H] phi = +i hbar phi`; `T` advances with `t`.
    PassageTime,
    /// `[T, H] phi = -i hbar phi`; `T` runs backwards.
    TimeOfArrival,
}

impl ClockSign {
    pub fn factor(self) -> f64 {
        match self {
            Self::PassageTime => 1.0,
            Self::TimeOfArrival => -1.0,
        }
    }
}

impl fmt::Display for ClockSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PassageTime => "passage",
            Self::TimeOfArrival => "arrival",
        })
    }
}

impl FromStr for ClockSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "passage" | "+" => Ok(Self::PassageTime),
            "arrival" | "-" => Ok(Self::TimeOfArrival),
            other => Err(Error::InvalidInput(format!("unknown clock sign '{other}' (expected passage or arrival)"))),
        }
    }
}

/// A time operator `T`, a Hamiltonian `H` and the domain where
/// `[T, H] = sign i hbar`.
#[derive(Debug, Clone)]
pub struct ClockConfig {
    t: HermitianOperator,
    h: HermitianOperator,
    hbar: f64,
    sign: ClockSign,
    domain: Subspace,
    spectrum: SpectralData,
}

impl ClockConfig {
    pub fn new(t: HermitianOperator, h: HermitianOperator, hbar: f64, sign: ClockSign, tol: &ToleranceConfig) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::NonPositiveValue(hbar));
        }
        if t.dim() != h.dim() {
            return Err(Error::DimensionMismatch { expected: t.dim(), found: h.dim() });
        }
        let comm = commutator_of(t.matrix(), h.matrix());
        let norm = frobenius(&comm);
        if norm <= tol.ccr * t.norm() * h.norm() {
            return Err(Error::CommutingPair { norm });
        }
        let target = c64(0.0, sign.factor() * hbar);
        let domain = eigenspace(&comm, target, tol.ccr)?;
        if domain.is_empty() {
            return Err(Error::NoCanonicalDomain { expected: format!("{}i{hbar}", if sign.factor() > 0.0 { "+" } else { "-" }) });
        }
        let spectrum = eigh(&h, tol);
        Ok(Self { t, h, hbar, sign, domain, spectrum })
    }

    /// `T = A` and `H = B` of a solution, with its `hbar`.
    pub fn from_solution(sol: &CanonicalSolution, sign: ClockSign, tol: &ToleranceConfig) -> Result<Self> {
        Self::new(sol.a().clone(), sol.b().clone(), sol.hbar(), sign, tol)
    }

    pub fn t(&self) -> &HermitianOperator {
        &self.t
    }

    pub fn h(&self) -> &HermitianOperator {
        &self.h
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn sign(&self) -> ClockSign {
        self.sign
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn spectrum(&self) -> &SpectralData {
        &self.spectrum
    }

    /// Largest energy difference of `H`.
    pub fn max_gap(&self) -> f64 {
        self.spectrum.spread()
    }

    /// `exp(-i H t / hbar)`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        evolve_spectral(&self.spectrum, t, self.hbar)
    }
}

/// `T(t) = U(t)^H T U(t)`.
pub fn heisenberg_t(cfg: &ClockConfig, t: f64) -> HermitianOperator {
    cfg.t.conjugate_by(&cfg.propagator(t))
}

/// `n` equally spaced points on `[-half_width, half_width]`; `n` is forced odd
/// so `tau = 0` is on the grid.
pub fn symmetric_grid(half_width: f64, n: usize) -> Vec<f64> {
    let n = if n.is_multiple_of(2) { n + 1 } else { n.max(1) };
    if n == 1 {
        return vec![0.0];
    }
    let m = (n / 2) as f64;
    (0..n).map(|k| half_width * (k as f64 - m) / m).collect()
}

/// `DEFAULT_WINDOW * hbar / max gap`.
pub fn default_window(cfg: &ClockConfig) -> f64 {
    DEFAULT_WINDOW * cfg.hbar / cfg.max_gap()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClockTrace {
    pub tau_grid: Vec<f64>,
    /// `<phi| T(base + tau) |phi>`.
    pub expectation: Vec<f64>,
    pub delta_t: Vec<f64>,
    pub delta_h: Vec<f64>,
    pub uncertainty_product: Vec<f64>,
    /// `||(T(base + tau) - T(base)) phi -+ tau phi||`.
    pub operator_residual: Vec<f64>,
    pub t0: f64,
    pub base_point: f64,
    pub sign: ClockSign,
    /// `||H|| / hbar`, for window checks.
    pub frequency_scale: f64,
}

/// Evaluates the clock on `phi` around `base_point`.
///
/// `base_point` must map the domain into itself under `U`; otherwise
/// `BasePointNotInvariant`.
pub fn clock_trace(
    cfg: &ClockConfig,
    phi: &StateVector,
    base_point: f64,
    tau_grid: &[f64],
    tol: &ToleranceConfig,
) -> Result<ClockTrace> {
    if phi.dim() != cfg.t.dim() {
        return Err(Error::DimensionMismatch { expected: cfg.t.dim(), found: phi.dim() });
    }
    let distance = cfg.domain.distance(phi.amplitudes());
    if distance > tol.domain {
        return Err(Error::StateOutsideDomain { distance });
    }
    let membership = subspace_membership(&cfg.domain, &cfg.propagator(base_point), tol);
    if !membership.is_member {
        return Err(Error::BasePointNotInvariant { t: base_point, residual: membership.residual });
    }
    let v = phi.amplitudes();
    let base_op = heisenberg_t(cfg, base_point);
    let base_image = base_op.matrix() * v;
    let t0 = base_op.expectation(phi);
    let delta_h = uncertainty(&cfg.h, phi)?;
    let s = cfg.sign.factor();
    let n = tau_grid.len();
    let mut trace = ClockTrace {
        tau_grid: tau_grid.to_vec(),
        expectation: Vec::with_capacity(n),
        delta_t: Vec::with_capacity(n),
        delta_h: vec![delta_h; n],
        uncertainty_product: Vec::with_capacity(n),
        operator_residual: Vec::with_capacity(n),
        t0,
        base_point,
        sign: cfg.sign,
        frequency_scale: cfg.h.norm() / cfg.hbar,
    };
    for &tau in tau_grid {
        let op = heisenberg_t(cfg, base_point + tau);
        let dt = uncertainty(&op, phi)?;
        let drift: CVector = op.matrix() * v - &base_image - v * c64(s * tau, 0.0);
        trace.expectation.push(op.expectation(phi));
        trace.delta_t.push(dt);
        trace.uncertainty_product.push(dt * delta_h);
        trace.operator_residual.push(vec_norm(&drift));
    }
    Ok(trace)
}

/// Linear fit `expectation ~ t0 + slope tau` through the fixed intercept `t0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    /// Largest `|expectation - t0 - slope tau|`.
    pub max_fit_residual: f64,
    /// Largest entry of `operator_residual`.
    pub max_residual: f64,
    /// Largest `operator_residual / tau^2` over `tau != 0`.
    pub quadratic_bound: f64,
    /// `max|tau| ||H|| / hbar`.
    pub window_scale: f64,
    pub window_too_wide: bool,
}

pub fn linearity_fit(trace: &ClockTrace) -> Result<LinearFit> {
    let denom: f64 = trace.tau_grid.iter().map(|t| t * t).sum();
    if denom == 0.0 {
        return Err(Error::InvalidInput("tau grid needs a nonzero point".into()));
    }
    let num: f64 = trace.tau_grid.iter().zip(&trace.expectation).map(|(t, e)| t * (e - trace.t0)).sum();
    let slope = num / denom;
    let max_fit_residual = trace
        .tau_grid
        .iter()
        .zip(&trace.expectation)
        .map(|(t, e)| (e - trace.t0 - slope * t).abs())
        .fold(0.0, f64::max);
    let max_residual = trace.operator_residual.iter().copied().fold(0.0, f64::max);
    let quadratic_bound = trace
        .tau_grid
        .iter()
        .zip(&trace.operator_residual)
        .filter(|(t, _)| **t != 0.0)
        .map(|(t, r)| r / (t * t))
        .fold(0.0, f64::max);
    let max_tau = trace.tau_grid.iter().map(|t| t.abs()).fold(0.0, f64::max);
    let window_scale = max_tau * trace.frequency_scale;
    Ok(LinearFit {
        slope,
        max_fit_residual,
        max_residual,
        quadratic_bound,
        window_scale,
        window_too_wide: window_scale > WIDE_WINDOW,
    })
}

/// `K(t) psi` with `T U(t) psi = U(t) (T + K(t)) psi`, i.e. `K(t) = T(t) - T`.
///
/// In the eigenbasis of `H`, `K_ss' = T_ss' (exp(i (E_s - E_s') t / hbar) - 1)`,
/// which vanishes inside degenerate levels.
pub fn commuting_factor(cfg: &ClockConfig, t: f64, psi: &CVector) -> Result<CVector> {
    if psi.len() != cfg.t.dim() {
        return Err(Error::DimensionMismatch { expected: cfg.t.dim(), found: psi.len() });
    }
    let v = &cfg.spectrum.eigenvectors;
    let e = &cfg.spectrum.eigenvalues;
    let mut k = v.adjoint() * cfg.t.matrix() * v;
    for s in 0..e.len() {
        for r in 0..e.len() {
            k[(s, r)] *= phase_step(e[s] - e[r], t, cfg.hbar);
        }
    }
    Ok(v * (k * (v.adjoint() * psi)))
}

/// The closed form `sum_{s != s'} i hbar psi_s' / (E_s - E_s') (exp(i (E_s - E_s') t / hbar) - 1) |s>`
/// for the characteristic time operator over the eigenbasis of `H`.
///
/// Eigenvectors are phase-fixed so their first significant amplitude is real
/// and positive. Repeated energies give `DegenerateHamiltonian`.
pub fn characteristic_commuting_factor(cfg: &ClockConfig, t: f64, psi: &CVector) -> Result<CVector> {
    if psi.len() != cfg.t.dim() {
        return Err(Error::DimensionMismatch { expected: cfg.t.dim(), found: psi.len() });
    }
    if cfg.spectrum.is_degenerate() {
        return Err(Error::DegenerateHamiltonian);
    }
    let mut v = cfg.spectrum.eigenvectors.clone();
    for mut col in v.column_iter_mut() {
        let mut c = col.clone_owned();
        fix_phase(&mut c, 1e-8);
        col.copy_from(&c);
    }
    let e = &cfg.spectrum.eigenvalues;
    let coeffs = v.adjoint() * psi;
    let mut out = CVector::zeros(psi.len());
    for s in 0..e.len() {
        for r in (0..e.len()).filter(|&r| r != s) {
            let gap = e[s] - e[r];
            out[s] += I * cfg.hbar * coeffs[r] / gap * phase_step(gap, t, cfg.hbar);
        }
    }
    Ok(v * out)
}

/// `||T U(t) psi - U(t) (T + K(t)) psi||`.
pub fn weak_weyl_residual(cfg: &ClockConfig, t: f64, psi: &CVector, k_psi: &CVector) -> Result<f64> {
    if psi.len() != cfg.t.dim() || k_psi.len() != psi.len() {
        return Err(Error::DimensionMismatch { expected: cfg.t.dim(), found: psi.len().max(k_psi.len()) });
    }
    let u = cfg.propagator(t);
    let lhs = cfg.t.matrix() * (&u * psi);
    let rhs = &u * (cfg.t.matrix() * psi + k_psi);
    Ok(vec_norm(&(lhs - rhs)))
}

/// `||T(t) - T - sign t I||_F`; zero for every `t` iff the clock is covariant.
///
/// Traces differ by `N t`, so the defect is at least `sqrt(N) |t|`.
pub fn covariance_defect(cfg: &ClockConfig, t: f64) -> f64 {
    let n = cfg.t.dim();
    let shifted = cfg.t.matrix() + identity(n) * c64(cfg.sign.factor() * t, 0.0);
    frobenius(&(heisenberg_t(cfg, t).into_matrix() - shifted))
}

/// `exp(i gap t / hbar) - 1`.
fn phase_step(gap: f64, t: f64, hbar: f64) -> C64 {
    C64::from_polar(1.0, gap * t / hbar) - c64(1.0, 0.0)
}

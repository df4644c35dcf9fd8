//! Closed-form catalog of every three-dimensional solution family.
//!
//! Families `nondeg-1a`, `nondeg-1b` and `degen` write the off-diagonal
//! entries as `beta * hbar * exp(i alpha) / |B_kl|`; families `nondeg-2x`
//! use the signed `B_kl = B_k - B_l`. The closed-form domains below are
//! written in those conventions and are checked against the commutator.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use super::{characteristic_matrix, format_c, CanonicalSolution, PairParams, Provenance, SpectrumSpec};
use crate::error::{Error, Result};
use crate::linalg::{c64, commutator_of, eigenspace, vec_norm, CMatrix, CVector, HermitianOperator, Subspace, C64, I};
use crate::tolerance::ToleranceConfig;

/// Relative tolerance for the family constraints on `beta` and `alpha`.
const CONSTRAINT_TOL: f64 = 1e-9;
/// Closed-form denominators below this are treated as singular.
const SINGULAR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Nondeg1a,
    Nondeg1b,
    Nondeg2a,
    Nondeg2b,
    Nondeg2c,
    Degen,
}

impl Family {
    pub const ALL: [Family; 6] =
        [Family::Nondeg1a, Family::Nondeg1b, Family::Nondeg2a, Family::Nondeg2b, Family::Nondeg2c, Family::Degen];

    pub fn name(self) -> &'static str {
        match self {
            Family::Nondeg1a => "nondeg-1a",
            Family::Nondeg1b => "nondeg-1b",
            Family::Nondeg2a => "nondeg-2a",
            Family::Nondeg2b => "nondeg-2b",
            Family::Nondeg2c => "nondeg-2c",
            Family::Degen => "degen",
        }
    }

    fn uses_abs_denominator(self) -> bool {
        matches!(self, Family::Nondeg1a | Family::Nondeg1b | Family::Degen)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown family '{s}'")))
    }
}

/// Parameters of a three-dimensional family.
///
/// `alpha` and `beta` are ordered `(12, 13, 23)`. For [`Family::Degen`],
/// `b_values = [B_1, B_2]` with `B_1` doubly degenerate, `beta[0]` is the
/// intra-level entry `A_12` and `alpha[0]` is unused.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogParams {
    pub b_values: Vec<f64>,
    pub alpha: [f64; 3],
    pub beta: [C64; 3],
    pub diag_a: [f64; 3],
    pub hbar: f64,
}

impl CatalogParams {
    /// A valid parameter set for each family.
    pub fn example(family: Family) -> Self {
        let r = 0.5f64.sqrt();
        let zero = c64(0.0, 0.0);
        let (alpha, beta) = match family {
            Family::Nondeg1a => ([1.5 * PI; 3], [c64(1.0, 0.0); 3]),
            Family::Nondeg1b => {
                // |beta|^2 = 2 needs Im(b^3 e^{i theta}) = -1/2.
                let b = (2.0f64 / 3.0).sqrt();
                let theta = (-0.5 / b.powi(3)).asin();
                ([theta, 0.0, 0.0], [c64(b, 0.0); 3])
            }
            Family::Nondeg2a => ([0.0; 3], [zero, c64(r, 0.0), c64(r, 0.0)]),
            Family::Nondeg2b => ([0.0; 3], [c64(r, 0.0), zero, c64(r, 0.0)]),
            Family::Nondeg2c => ([0.0; 3], [c64(r, 0.0), c64(r, 0.0), zero]),
            Family::Degen => ([0.0, 1.5 * PI, 1.5 * PI], [zero, c64(r, 0.0), c64(r, 0.0)]),
        };
        let b_values = if family == Family::Degen { vec![0.0, 1.0] } else { vec![0.0, 1.0, 3.0] };
        Self { b_values, alpha, beta, diag_a: [0.0; 3], hbar: 1.0 }
    }

    fn spec(&self, family: Family) -> Result<SpectrumSpec> {
        match (family, self.b_values.len()) {
            (Family::Degen, 2) => SpectrumSpec::new(self.b_values.clone(), vec![2, 1]),
            (Family::Degen, n) => Err(Error::DimensionMismatch { expected: 2, found: n }),
            (_, 3) => SpectrumSpec::nondegenerate(self.b_values.clone()),
            (_, n) => Err(Error::DimensionMismatch { expected: 3, found: n }),
        }
    }

    fn beta_sq(&self) -> f64 {
        self.beta.iter().map(|b| b.norm_sqr()).sum()
    }

    /// `Im(beta_12 conj(beta_13) beta_23 exp(i(alpha_12 - alpha_13 + alpha_23)))`.
    fn triple_phase(&self) -> f64 {
        let [a12, a13, a23] = self.alpha;
        let [b12, b13, b23] = self.beta;
        (b12 * b13.conj() * b23 * C64::from_polar(1.0, a12 - a13 + a23)).im
    }

    fn check(&self, family: Family) -> Result<()> {
        let violated = |msg: String| Err(Error::FamilyConstraintViolated(format!("{family}: {msg}")));
        let near = |x: f64, y: f64| (x - y).abs() <= CONSTRAINT_TOL * (1.0 + y.abs());
        let is_zero = |z: C64| z.norm() <= CONSTRAINT_TOL;
        let [b12, b13, b23] = self.beta;
        match family {
            Family::Nondeg1a | Family::Nondeg1b => {
                if self.beta.iter().any(|&b| is_zero(b)) {
                    return violated("all of beta_12, beta_13, beta_23 must be nonzero".into());
                }
                let bb = self.beta_sq();
                let im = self.triple_phase();
                if family == Family::Nondeg1a {
                    if !near(bb, 3.0) {
                        return violated(format!("|beta|^2 = 3 required, got {bb}"));
                    }
                    if !near(im, -1.0) {
                        return violated(format!("Im(beta_12 beta_13* beta_23 e^(i(alpha_12-alpha_13+alpha_23))) = -1 required, got {im}"));
                    }
                } else {
                    if near(bb, 3.0) {
                        return violated("|beta|^2 != 3 required (use nondeg-1a)".into());
                    }
                    if bb <= 0.75 {
                        return violated(format!("|beta|^2 > 3/4 required, got {bb}"));
                    }
                    if !near(im, -(bb - 1.0) / 2.0) {
                        return violated(format!(
                            "Im(beta_12 beta_13* beta_23 e^(i(alpha_12-alpha_13+alpha_23))) = -(|beta|^2-1)/2 = {} required, got {im}",
                            -(bb - 1.0) / 2.0
                        ));
                    }
                }
            }
            Family::Nondeg2a | Family::Nondeg2b | Family::Nondeg2c => {
                let (zero, rest, names) = match family {
                    Family::Nondeg2a => (b12, [b13, b23], ("beta_12", "|beta_13|^2 + |beta_23|^2")),
                    Family::Nondeg2b => (b13, [b12, b23], ("beta_13", "|beta_12|^2 + |beta_23|^2")),
                    _ => (b23, [b12, b13], ("beta_23", "|beta_12|^2 + |beta_13|^2")),
                };
                if !is_zero(zero) {
                    return violated(format!("{} = 0 required", names.0));
                }
                let s = rest[0].norm_sqr() + rest[1].norm_sqr();
                if !near(s, 1.0) {
                    return violated(format!("{} = 1 required, got {s}", names.1));
                }
            }
            Family::Degen => {
                let s = b13.norm_sqr() + b23.norm_sqr();
                if !near(s, 1.0) {
                    return violated(format!("|beta_13|^2 + |beta_23|^2 = 1 required, got {s}"));
                }
            }
        }
        Ok(())
    }

    fn pair_params(&self, family: Family, spec: &SpectrumSpec) -> PairParams {
        let shift = if family.uses_abs_denominator() { FRAC_PI_2 } else { -FRAC_PI_2 };
        let mut p = PairParams::defaults(spec).with_hbar(self.hbar).with_diag_a(self.diag_a.to_vec());
        let pairs = [(0, 1), (0, 2), (1, 2)];
        for (j, &(k, l)) in pairs.iter().enumerate() {
            if family == Family::Degen && j == 0 {
                p.set_block_b(k, l, self.beta[0]);
                continue;
            }
            p.set_beta(k, l, self.beta[j]);
            p.set_alpha(k, l, self.alpha[j] + shift);
        }
        p
    }

    /// The listed eigenvalues `c / (i hbar)` of `[A, B]`, in catalog order.
    pub fn relation_values(&self, family: Family) -> Vec<f64> {
        match family {
            Family::Nondeg1a => vec![1.0, -2.0],
            Family::Nondeg1b => {
                let s = (4.0 * self.beta_sq() - 3.0).sqrt();
                vec![1.0, -0.5 * (1.0 + s), -0.5 * (1.0 - s)]
            }
            _ => vec![1.0, -1.0, 0.0],
        }
    }

    /// Closed-form `(c / (i hbar), spanning vectors)` for each relation.
    fn closed_forms(&self, family: Family) -> Result<Vec<(f64, Vec<CVector>)>> {
        let e = |x: f64| C64::from_polar(1.0, x);
        let v = |x: [C64; 3]| CVector::from_column_slice(&x);
        let one = c64(1.0, 0.0);
        let zero = c64(0.0, 0.0);
        let [a12, a13, a23] = self.alpha;
        let [b12, b13, b23] = self.beta;
        let kappa_vector = |kappa: f64| -> Result<CVector> {
            let d2 = I * kappa * b12 * e(a12) - b13 * b23.conj() * e(a13 - a23);
            let d3 = I * kappa * b13 * e(a13) + b12 * b23 * e(a12 + a23);
            if d2.norm() < SINGULAR || d3.norm() < SINGULAR {
                return Err(Error::ConstraintViolated(format!(
                    "closed-form domain of {family} is singular at c = {kappa} i hbar"
                )));
            }
            let k2 = kappa * kappa;
            Ok(v([one, (b13.norm_sqr() - k2) / d2, (b12.norm_sqr() - k2) / d3]))
        };
        Ok(match family {
            Family::Nondeg1a => vec![
                (1.0, vec![v([one, zero, I * b13.conj() * e(-a13)]), v([zero, one, I * b23.conj() * e(-a23)])]),
                (-2.0, vec![kappa_vector(-2.0)?]),
            ],
            Family::Nondeg1b => self
                .relation_values(family)
                .into_iter()
                .map(|kappa| Ok((kappa, vec![kappa_vector(kappa)?])))
                .collect::<Result<_>>()?,
            Family::Nondeg2a => vec![
                (1.0, vec![v([I * b13 * e(a13), I * b23 * e(a23), one])]),
                (-1.0, vec![v([-I * b13 * e(a13), -I * b23 * e(a23), one])]),
                (0.0, vec![v([b23.conj() * e(-a23), -b13.conj() * e(-a13), zero])]),
            ],
            Family::Nondeg2b => vec![
                (1.0, vec![v([I * b12 * e(a12), one, -I * b23.conj() * e(-a23)])]),
                (-1.0, vec![v([-I * b12 * e(a12), one, I * b23.conj() * e(-a23)])]),
                (0.0, vec![v([b23 * e(a23), zero, b12.conj() * e(-a12)])]),
            ],
            Family::Nondeg2c => vec![
                (1.0, vec![v([one, -I * b12.conj() * e(-a12), -I * b13.conj() * e(-a13)])]),
                (-1.0, vec![v([one, I * b12.conj() * e(-a12), I * b13.conj() * e(-a13)])]),
                (0.0, vec![v([zero, b13 * e(a13), -b12 * e(a12)])]),
            ],
            Family::Degen => vec![
                (1.0, vec![v([-I * b13 * e(a13), -I * b23 * e(a23), one])]),
                (-1.0, vec![v([I * b13 * e(a13), I * b23 * e(a23), one])]),
                (0.0, vec![v([b23.conj() * e(-a23), -b13.conj() * e(-a13), zero])]),
            ],
        })
    }
}

/// One relation `[A,B] phi = c phi` of a family.
#[derive(Debug, Clone)]
pub struct CatalogRelation {
    pub c: C64,
    /// Normalized span of the closed-form vectors.
    pub domain: Subspace,
    /// `max ||[A,B] phi - c phi||` over the closed-form basis.
    pub residual: f64,
    /// Largest principal angle between `domain` and the numerical eigenspace.
    pub eigenspace_angle: f64,
    /// `false` for `c = 0` records.
    pub essentially_canonical: bool,
}

#[derive(Debug, Clone)]
pub struct CatalogResult {
    pub family: Family,
    pub a: HermitianOperator,
    pub b: HermitianOperator,
    pub hbar: f64,
    pub relations: Vec<CatalogRelation>,
}

impl CatalogResult {
    /// The solution for relation `idx`; `None` for `c = 0` records.
    pub fn solution(&self, idx: usize, tol: &ToleranceConfig) -> Option<Result<CanonicalSolution>> {
        let rel = self.relations.get(idx)?;
        if !rel.essentially_canonical {
            return None;
        }
        Some(CanonicalSolution::from_parts(
            self.a.clone(),
            self.b.clone(),
            rel.c,
            rel.domain.clone(),
            self.hbar,
            Provenance::Catalog(self.family),
            tol,
        ))
    }
}

/// Instantiates `family` and returns every relation it lists, including the
/// `c = 0` records.
pub fn catalog_3d(family: Family, params: &CatalogParams, tol: &ToleranceConfig) -> Result<CatalogResult> {
    if !(params.hbar.is_finite() && params.hbar > 0.0) {
        return Err(Error::NonPositiveValue(params.hbar));
    }
    let spec = params.spec(family)?;
    params.check(family)?;
    let a = HermitianOperator::new(characteristic_matrix(&spec, &params.pair_params(family, &spec)), tol)?;
    let b = HermitianOperator::diagonal(&spec.expanded_values());
    let comm = commutator_of(a.matrix(), b.matrix());
    let relations = params
        .closed_forms(family)?
        .into_iter()
        .map(|(kappa, vectors)| {
            let c = I * (kappa * params.hbar);
            let domain = Subspace::from_spanning(&CMatrix::from_columns(&vectors), 1e-10);
            let residual = domain
                .vectors()
                .map(|phi| {
                    let x = phi.amplitudes();
                    vec_norm(&(&comm * x - x * c))
                })
                .fold(0.0, f64::max);
            let numeric = eigenspace(&comm, c, tol.ccr)?;
            if numeric.is_empty() {
                return Err(Error::NoCanonicalEigenvalue { expected: format_c(c) });
            }
            Ok(CatalogRelation {
                c,
                eigenspace_angle: domain.max_principal_angle(&numeric),
                domain,
                residual,
                essentially_canonical: kappa.abs() > CONSTRAINT_TOL,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CatalogResult { family, a, b, hbar: params.hbar, relations })
}

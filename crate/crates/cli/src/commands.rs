//! Subcommand implementations. Each returns the text for stdout (if any);
//! summaries go to stderr when stdout carries data.

use std::f64::consts::PI;

use ccrlab::clock::{clock_trace, linearity_fit, symmetric_grid, ClockConfig, ClockSign, DEFAULT_WINDOW};
use ccrlab::commutator::{classify, factorize};
use ccrlab::invariant::{invariant_set, GcdConfig, InvariantKind, InvariantSet};
use ccrlab::linalg::{c64, HermitianOperator, StateVector, C64};
use ccrlab::pairs::{
    build_degenerate, build_nondegenerate, catalog_3d, CanonicalSolution, CatalogParams, Family, PairParams, Provenance,
    SpectrumSpec,
};
use ccrlab::sample;
use ccrlab::uncertainty::audit_pair;
use ccrlab::ToleranceConfig;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use crate::args;
use crate::cli::{
    AuditArgs, BuildArgs, CatalogArgs, ClassifyArgs, ClockArgs, FactorizeArgs, InvariantArgs, StateChoice,
};
use crate::error::CliError;
use crate::io::{self, complex, vector, Complex, MatrixFile, Num, SolutionFile, StateFile};

fn format_c(z: C64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// Writes `text` to `out`; the summary goes to stdout unless stdout is the
/// data channel.
fn emit(out: &str, text: &str, summary: &str) -> Result<(), CliError> {
    io::write_output(out, text)?;
    if out == "-" {
        eprintln!("{summary}");
    } else {
        println!("{summary}");
    }
    Ok(())
}

pub fn build(a: &BuildArgs, tol: &ToleranceConfig) -> Result<(), CliError> {
    let values = args::floats(&a.levels)?;
    let mults = match &a.mults {
        Some(m) => args::counts(m)?,
        None => vec![1; values.len()],
    };
    let spec = SpectrumSpec::new(values, mults)?;
    let n = spec.dim();
    let mut p = PairParams::defaults(&spec).with_hbar(a.hbar);
    if let Some(d) = &a.diag_a {
        let d = args::floats(d)?;
        if d.len() != n {
            return Err(CliError::Format(format!("--diag-a has {} values, dimension is {n}", d.len())));
        }
        p = p.with_diag_a(d);
    }
    let check = |k: usize, l: usize| {
        if k >= n || l >= n {
            Err(CliError::Format(format!("index pair {k}:{l} out of range for dimension {n}")))
        } else {
            Ok(())
        }
    };
    for e in &a.alpha {
        let (k, l, v) = args::indexed(e)?;
        check(k, l)?;
        p.set_alpha(k, l, args::float(v)?);
    }
    for e in &a.beta {
        let (k, l, v) = args::indexed(e)?;
        check(k, l)?;
        p.set_beta(k, l, args::complex(v)?);
    }
    for e in &a.block_b {
        let (k, l, v) = args::indexed(e)?;
        check(k, l)?;
        p.set_block_b(k, l, args::complex(v)?);
    }
    let sol = if spec.is_nondegenerate() { build_nondegenerate(&spec, &p, tol)? } else { build_degenerate(&spec, &p, tol)? };
    let summary = format!(
        "c = {}, domain dim = {}, residual = {:e}",
        format_c(sol.c()),
        sol.domain().dim(),
        sol.ccr_residual()
    );
    emit(&a.out, &io::to_json(&SolutionFile::from_solution(&sol))?, &summary)
}

#[derive(Serialize)]
struct RelationOut {
    c: Complex,
    dim: usize,
    essentially_canonical: bool,
    domain_basis: Vec<Vec<Complex>>,
}

#[derive(Serialize)]
struct ClassifyOut {
    commutator_norm: Num,
    trace_residual: Num,
    relations: Vec<RelationOut>,
}

pub fn classify_cmd(a: &ClassifyArgs, tol: &ToleranceConfig) -> Result<(), CliError> {
    if a.a == "-" && a.b == "-" {
        return Err(CliError::Format("only one of --a and --b can read stdin".into()));
    }
    let ma: MatrixFile = io::read_json(&a.a)?;
    let mb: MatrixFile = io::read_json(&a.b)?;
    let report = classify(&ma.to_hermitian(tol)?, &mb.to_hermitian(tol)?, tol)?;
    let out = ClassifyOut {
        commutator_norm: Num(ccrlab::linalg::frobenius(&report.commutator)),
        trace_residual: Num(report.trace_residual),
        relations: report
            .relations
            .iter()
            .map(|r| RelationOut {
                c: complex(r.c),
                dim: r.domain.dim(),
                essentially_canonical: r.essentially_canonical,
                domain_basis: r.domain.vectors().map(|v| vector(v.amplitudes())).collect(),
            })
            .collect(),
    };
    io::write_json(&a.out, &out)
}

fn read_solution(path: &str, tol: &ToleranceConfig) -> Result<CanonicalSolution, CliError> {
    io::read_json::<SolutionFile>(path)?.to_solution(tol)
}

fn read_hamiltonian(path: Option<&str>, sol: &CanonicalSolution, tol: &ToleranceConfig) -> Result<HermitianOperator, CliError> {
    match path {
        Some(p) => io::read_json::<MatrixFile>(p)?.to_hermitian(tol),
        None => Ok(sol.b().clone()),
    }
}

fn pick_state(choice: &StateChoice, domain: &ccrlab::linalg::Subspace, tol: &ToleranceConfig) -> Result<StateVector, CliError> {
    match (&choice.state, choice.random) {
        (Some(path), _) => io::read_json::<StateFile>(path)?.to_state(tol),
        (None, true) => Ok(domain.random_state(&mut StdRng::seed_from_u64(choice.seed))),
        (None, false) => Ok(domain.vector(0)),
    }
}

pub fn clock(a: &ClockArgs, tol: &ToleranceConfig) -> Result<(), CliError> {
    let sol = read_solution(&a.solution, tol)?;
    let h = read_hamiltonian(a.h.as_deref(), &sol, tol)?;
    let sign: ClockSign = a.sign.parse()?;
    let cfg = ClockConfig::new(sol.a().clone(), h.clone(), sol.hbar(), sign, tol)?;
    // The clock's own relation, so the invariant set refers to its domain.
    let rel = CanonicalSolution::from_pair(
        sol.a().clone(),
        h.clone(),
        c64(0.0, sign.factor() * sol.hbar()),
        sol.hbar(),
        Provenance::Assembled,
        tol,
    )?;
    let set = invariant_set(&rel, &h, &GcdConfig::default(), tol)?;
    let base = base_point(&set, a.base_index, &cfg)?;
    let phi = pick_state(&a.state, cfg.domain(), tol)?;
    let window = a.window.unwrap_or(DEFAULT_WINDOW) * cfg.hbar() / cfg.max_gap();
    let grid = symmetric_grid(window, a.samples);
    let trace = clock_trace(&cfg, &phi, base, &grid, tol)?;
    let fit = linearity_fit(&trace)?;

    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io_err = |e: csv::Error| CliError::Io(e.to_string());
    wtr.write_record(["tau", "expectation", "delta_T", "delta_H", "product"]).map_err(io_err)?;
    for k in 0..grid.len() {
        let row = [
            trace.tau_grid[k],
            trace.expectation[k],
            trace.delta_t[k],
            trace.delta_h[k],
            trace.uncertainty_product[k],
        ];
        wtr.write_record(row.iter().map(|x| format!("{x:.16e}"))).map_err(io_err)?;
    }
    let bytes = wtr.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    let text = String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))?;
    let mut summary = format!(
        "slope = {:+.6} ({sign}), t0 = {:.12}, base point = {base:.12} ({}), window = {window:.6e}, max operator residual = {:.3e}",
        fit.slope,
        trace.t0,
        set.kind.name(),
        fit.max_residual
    );
    if fit.window_too_wide {
        summary.push_str(&format!("\nwarning: window too wide (max|tau| ||H|| / hbar = {:.3})", fit.window_scale));
    }
    emit(&a.csv, &text, &summary)
}

/// `n * period` on a lattice; only `n = 0` on `{0}`. On the full line any
/// point is invariant and `n` steps by `2 pi hbar / max gap`.
fn base_point(set: &InvariantSet, n: i64, cfg: &ClockConfig) -> Result<f64, CliError> {
    match set.kind {
        _ if n == 0 => Ok(0.0),
        InvariantKind::Lattice => Ok(set.point(n).expect("lattice has a period")),
        InvariantKind::FullLine => Ok(n as f64 * 2.0 * PI * cfg.hbar() / cfg.max_gap()),
        InvariantKind::ZeroOnly => Err(CliError::InvariantSet(format!(
            "time invariant set is {{0}} (incommensurate energy gaps); base index {n} is not available"
        ))),
    }
}

#[derive(Serialize)]
struct FactorizeOut {
    residual: Num,
    hermitian: bool,
    #[serde(rename = "A")]
    a: MatrixFile,
    #[serde(rename = "B")]
    b: MatrixFile,
}

pub fn factorize_cmd(a: &FactorizeArgs, tol: &ToleranceConfig) -> Result<(), CliError> {
    let c = match (&a.input, a.random_dim) {
        (Some(path), None) => io::read_json::<MatrixFile>(path)?.to_matrix()?,
        (None, Some(n)) => sample::normal_matrix(n, &mut StdRng::seed_from_u64(a.seed)),
        _ => return Err(CliError::Format("give exactly one of --input or --random-dim".into())),
    };
    let n = c.nrows();
    let b_values = match &a.b_values {
        Some(s) => args::floats(s)?,
        None => (0..n).map(|k| k as f64).collect(),
    };
    let a_values = match &a.a_values {
        Some(s) => args::floats(s)?,
        None => vec![0.0; n],
    };
    let f = factorize(&c, &b_values, &a_values, tol)?;
    let hermitian = f.hermitian_pair(tol).is_ok();
    let out = FactorizeOut { residual: Num(f.residual), hermitian, a: MatrixFile::from_matrix(&f.a), b: MatrixFile::from_matrix(&f.b) };
    io::write_json(&a.out, &out)
}

#[derive(Serialize)]
struct InvariantOut {
    kind: &'static str,
    period: Option<Num>,
    generator_gcd: Option<Num>,
    excluded_levels: Vec<usize>,
}

pub fn invariant_cmd(a: &InvariantArgs, tol: &ToleranceConfig) -> Result<(), CliError> {
    let sol = read_solution(&a.solution, tol)?;
    let h = read_hamiltonian(a.h.as_deref(), &sol, tol)?;
    let cfg = GcdConfig { max_denominator: a.max_denominator, ..GcdConfig::default() };
    let set = invariant_set(&sol, &h, &cfg, tol)?;
    let out = InvariantOut {
        kind: set.kind.name(),
        period: set.period.map(Num),
        generator_gcd: set.generator_gcd.map(Num),
        excluded_levels: set.excluded_levels.clone(),
    };
    io::write_json(&a.out, &out)
}

#[derive(Serialize)]
struct FitOut {
    gamma: Complex,
    mu: Complex,
    residual: Num,
    real_gamma: Num,
    real_residual: Num,
}

#[derive(Serialize)]
struct AuditOut {
    delta_a: Num,
    delta_b: Num,
    product: Num,
    floor: Num,
    saturated: bool,
    gamma: Option<Num>,
    fit: FitOut,
    state: Vec<Complex>,
}

pub fn audit(a: &AuditArgs, tol: &ToleranceConfig) -> Result<(), CliError> {
    let sol = read_solution(&a.solution, tol)?;
    let phi = pick_state(&a.state, sol.domain(), tol)?;
    let r = audit_pair(&sol, &phi, tol)?;
    let out = AuditOut {
        delta_a: Num(r.delta_a),
        delta_b: Num(r.delta_b),
        product: Num(r.product),
        floor: Num(r.floor),
        saturated: r.saturated,
        gamma: r.gamma.map(Num),
        fit: FitOut {
            gamma: complex(r.fit.gamma),
            mu: complex(r.fit.mu),
            residual: Num(r.fit.residual),
            real_gamma: Num(r.fit.real_gamma),
            real_residual: Num(r.fit.real_residual),
        },
        state: vector(phi.amplitudes()),
    };
    io::write_json(&a.out, &out)
}

#[derive(Serialize)]
struct CatalogRelationOut {
    c: Complex,
    dim: usize,
    residual: Num,
    eigenspace_angle: Num,
    essentially_canonical: bool,
    domain_basis: Vec<Vec<Complex>>,
}

#[derive(Serialize)]
struct CatalogOut {
    family: String,
    hbar: Num,
    #[serde(rename = "A")]
    a: MatrixFile,
    #[serde(rename = "B")]
    b: MatrixFile,
    relations: Vec<CatalogRelationOut>,
}

pub fn catalog(a: &CatalogArgs, tol: &ToleranceConfig) -> Result<(), CliError> {
    let family: Family = a.family.parse()?;
    let mut p = CatalogParams::example(family);
    if let Some(b) = &a.b_values {
        p.b_values = args::floats(b)?;
    }
    if let Some(d) = &a.diag_a {
        let d = args::floats(d)?;
        p.diag_a = d.try_into().map_err(|_| CliError::Format("--diag-a needs exactly 3 values".into()))?;
    }
    for e in &a.alpha {
        let (slot, v) = args::pair_slot(e)?;
        p.alpha[slot] = args::float(v)?;
    }
    for e in &a.beta {
        let (slot, v) = args::pair_slot(e)?;
        p.beta[slot] = args::complex(v)?;
    }
    if let Some(h) = a.hbar {
        p.hbar = h;
    }
    let res = catalog_3d(family, &p, tol)?;
    if let Some(path) = &a.solution_out {
        let sol = res
            .solution(a.relation, tol)
            .ok_or_else(|| CliError::Format(format!("relation {} is not an essentially canonical record", a.relation)))??;
        io::write_json(path, &SolutionFile::from_solution(&sol))?;
    }
    let out = CatalogOut {
        family: family.to_string(),
        hbar: Num(res.hbar),
        a: MatrixFile::from_matrix(res.a.matrix()),
        b: MatrixFile::from_matrix(res.b.matrix()),
        relations: res
            .relations
            .iter()
            .map(|r| CatalogRelationOut {
                c: complex(r.c),
                dim: r.domain.dim(),
                residual: Num(r.residual),
                eigenspace_angle: Num(r.eigenspace_angle),
                essentially_canonical: r.essentially_canonical,
                domain_basis: r.domain.vectors().map(|v| vector(v.amplitudes())).collect(),
            })
            .collect(),
    };
    io::write_json(&a.out, &out)
}

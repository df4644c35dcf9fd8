use clap::{Args, Parser, Subcommand};

/// Canonical and essentially canonical operator pairs in finite dimensions.
///
/// Tolerances can be overridden with CCRLAB_TOL="key=value,...", keys:
/// hermiticity, spectral, cluster, norm, ccr, domain. Paths accept "-" for
/// stdin/stdout.
#[derive(Debug, Parser)]
#[command(name = "ccrlab", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a canonical pair for a spectrum of B.
    Build(BuildArgs),
    /// List every eigenvalue relation of [A, B].
    Classify(ClassifyArgs),
    /// Evaluate the clock T(t) of a solution around a time invariant point (CSV).
    Clock(ClockArgs),
    /// Write a traceless matrix as a commutator [A, B].
    Factorize(FactorizeArgs),
    /// Time invariant set of a solution's domain under a Hamiltonian.
    #[command(name = "invariant-set")]
    InvariantSet(InvariantArgs),
    /// Uncertainty product and saturation on a domain state.
    Audit(AuditArgs),
    /// One of the three-dimensional solution families.
    #[command(name = "catalog-3d")]
    Catalog3d(CatalogArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Distinct eigenvalues of B, ascending, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub levels: String,
    /// Multiplicity of each level (default all 1).
    #[arg(long)]
    pub mults: Option<String>,
    /// Phase alpha_kl as k:l=value (repeatable; alpha_lk = -alpha_kl).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Vec<String>,
    /// Weight beta_kl as k:l=re[,im] (repeatable; beta_lk = conj).
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Vec<String>,
    /// Diagonal of A, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub diag_a: Option<String>,
    /// Intra-level entry b_kl as k:l=re[,im] (repeatable).
    #[arg(long, allow_hyphen_values = true)]
    pub block_b: Vec<String>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub hbar: f64,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Matrix file of A.
    #[arg(long)]
    pub a: String,
    /// Matrix file of B.
    #[arg(long)]
    pub b: String,
    #[arg(long, default_value = "-")]
    pub out: String,
}

/// Domain state: a file, a seeded random domain state, or the first domain
/// basis vector.
#[derive(Debug, Args)]
pub struct StateChoice {
    /// State file {"amplitudes": [[re, im], ...]}.
    #[arg(long, conflicts_with = "random")]
    pub state: Option<String>,
    /// Use a random unit vector of the domain.
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ClockArgs {
    #[arg(long)]
    pub solution: String,
    /// Hamiltonian matrix file (default: B of the solution).
    #[arg(long)]
    pub h: Option<String>,
    /// passage (+i hbar) or arrival (-i hbar).
    #[arg(long, default_value = "passage")]
    pub sign: String,
    /// Base point index n; the base point is n times the invariant-set period.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub base_index: i64,
    /// Half-width of the tau window in units of hbar / (max energy gap) [default: 0.05].
    #[arg(long)]
    pub window: Option<f64>,
    /// Number of tau samples (made odd so tau = 0 is included).
    #[arg(long, default_value_t = 41)]
    pub samples: usize,
    #[arg(long, default_value = "-")]
    pub csv: String,
    #[command(flatten)]
    pub state: StateChoice,
}

#[derive(Debug, Args)]
pub struct FactorizeArgs {
    /// Traceless matrix file.
    #[arg(long)]
    pub input: Option<String>,
    /// Factorize a random normal traceless matrix of this size instead.
    #[arg(long)]
    pub random_dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Distinct eigenvalues of B (default 0,1,...,N-1).
    #[arg(long, allow_hyphen_values = true)]
    pub b_values: Option<String>,
    /// Diagonal of A in the zero-diagonal frame (default zeros).
    #[arg(long, allow_hyphen_values = true)]
    pub a_values: Option<String>,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct InvariantArgs {
    #[arg(long)]
    pub solution: String,
    /// Hamiltonian matrix file (default: B of the solution).
    #[arg(long)]
    pub h: Option<String>,
    /// Largest denominator accepted when testing commensurability.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_denominator: u64,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long)]
    pub solution: String,
    #[command(flatten)]
    pub state: StateChoice,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// nondeg-1a, nondeg-1b, nondeg-2a, nondeg-2b, nondeg-2c or degen.
    #[arg(long)]
    pub family: String,
    /// B eigenvalues (3 values; 2 for degen, the first doubly degenerate).
    #[arg(long, allow_hyphen_values = true)]
    pub b_values: Option<String>,
    /// Phase as 12|13|23=value (repeatable).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Vec<String>,
    /// Weight as 12|13|23=re[,im] (repeatable).
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Vec<String>,
    /// Diagonal of A, 3 values.
    #[arg(long, allow_hyphen_values = true)]
    pub diag_a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub hbar: Option<f64>,
    /// Also write the solution of relation --relation to this file.
    #[arg(long)]
    pub solution_out: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub relation: usize,
    #[arg(long, default_value = "-")]
    pub out: String,
}

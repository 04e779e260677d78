use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used by randomized commands unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 20_240_229;

#[derive(Debug, Parser)]
#[command(
    name = "symfam",
    version,
    about = "Symmetric intersecting families: constructions, searches and bounds",
    after_help = "Worker threads: set SYMFAM_THREADS. Residues of Z_n are 0-based; family files are 1-based."
)]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read, check and build family files.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// The cyclic run family and run-length counts.
    #[command(subcommand)]
    Runs(RunsCmd),
    /// Finite-geometry families.
    #[command(subcommand)]
    Geom(GeomCmd),
    /// Difference covers of Z_n.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Sidon sets in Z_n.
    #[command(subcommand)]
    Sidon(SidonCmd),
    /// Bounds on the least k with a symmetric intersecting k-family on [n].
    GBounds {
        n: usize,
        #[arg(long, value_parser = parse_budget)]
        budget: Option<u64>,
    },
    /// Closed-form bound calculators.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Exact rotation-invariant maxima.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Comparison table of run family, oracle, geometry and upper bound.
    Compare(CompareArgs),
}

#[derive(Debug, Subcommand)]
pub enum FamilyCmd {
    /// Check a family file: intersecting, uniform, symmetric.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Build a family and write it as a family file.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
        /// Output file; the document is printed when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BuildKind {
    /// All cyclic translates of a subset of Z_n.
    Translates {
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
    /// The run family F(n,k).
    Runs { n: usize, k: usize },
    /// r-flats of PG(2r,q).
    Pg { r: usize, q: u64 },
    /// r-flats of the dual affine space DA(2r,q).
    Da { r: usize, q: u64 },
    /// Translates of the Singer difference set for q.
    Singer { q: u64 },
    /// Tensor product of two family files.
    Tensor { a: PathBuf, b: PathBuf },
    /// All l-sets containing a member of a uniform family file.
    Extend { input: PathBuf, l: usize },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CountMethod {
    /// Composition counter, plus a full sweep when within budget.
    Auto,
    Sweep,
    Compositions,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RunMode {
    ZeroRunAtLeast,
    NoRunOfLength,
}

#[derive(Debug, Subcommand)]
pub enum RunsCmd {
    /// |F(n,k)| and the nonemptiness criterion.
    Count {
        n: usize,
        k: usize,
        #[arg(long, value_enum, default_value_t = CountMethod::Auto)]
        method: CountMethod,
        #[arg(long, value_parser = parse_budget)]
        budget: Option<u64>,
    },
    /// Write F(n,k) as a family file with the rotation witness.
    Build {
        n: usize,
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The constructive lower bound on |F(n,k)|.
    Bound { n: usize, k: usize },
    /// Exact run-constrained counts against their bounds.
    Constrained {
        n: usize,
        k: usize,
        l: usize,
        #[arg(long, value_enum)]
        mode: RunMode,
    },
}

#[derive(Debug, Subcommand)]
pub enum GeomCmd {
    /// r-flats of PG(2r,q) with a verified collineation witness.
    PgFlats {
        r: usize,
        q: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// r-flats of DA(2r,q) with a verified collineation witness.
    DaFlats {
        r: usize,
        q: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Singer perfect difference set for q.
    Singer {
        q: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Is a uniform intersecting family maximal in its layer?
    Maximal {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_parser = parse_budget)]
        budget: Option<u64>,
    },
    /// Lower bounds on k-sets containing a line of a plane of order q.
    Superset { q: u64, k: u64 },
    /// Gaussian binomial [a choose b]_q.
    Gaussian { a: u64, b: u64, q: u64 },
}

#[derive(Debug, Subcommand)]
pub enum CoverCmd {
    /// Smallest difference cover of Z_n.
    Min {
        n: usize,
        #[arg(long, value_parser = parse_budget)]
        budget: Option<u64>,
        /// Report node counts on stderr while searching.
        #[arg(long)]
        progress: bool,
    },
    /// Is the set a difference cover of Z_n?
    Verify {
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SidonCmd {
    /// Largest Sidon set in Z_n.
    Max {
        n: usize,
        #[arg(long, value_parser = parse_budget)]
        budget: Option<u64>,
    },
    /// Is the set a Sidon set in Z_n?
    Verify {
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// Upper bound on symmetric intersecting k-families for constant c.
    Main {
        n: u64,
        k: u64,
        #[arg(long)]
        c: f64,
        /// Also print the steps of the argument (needs --c0 and --density).
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        c0: Option<f64>,
        #[arg(long)]
        density: Option<f64>,
    },
    /// Threshold bias q for bias p, measure gap eps and constant c0.
    Fk {
        p: f64,
        eps: f64,
        #[arg(long)]
        c0: f64,
        n: u64,
    },
    /// Regime ratio n/((n-2k) log n) and the large-k bound.
    Regime {
        n: u64,
        k: u64,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// The bias k/n + sqrt(2n log(1/phi))/n.
    Friedgut {
        n: u64,
        k: u64,
        #[arg(long, default_value_t = 0.5)]
        phi: f64,
    },
    /// Lower bound on the run family for constants c1, C.
    RunLower {
        n: u64,
        k: u64,
        #[arg(long)]
        c1: f64,
        #[arg(long = "big-c")]
        big_c: f64,
    },
    /// Exact check of the upset-measure inequality for a family file.
    Lemma22 {
        #[arg(long = "in")]
        input: PathBuf,
        /// phi as a fraction, e.g. 1/2.
        #[arg(long, default_value = "1/2")]
        phi: String,
    },
    /// The same check on seeded random uniform families.
    Lemma22Sweep {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
    /// Mean |x ∩ σ(x)| over the rotations of Z_n (random x unless --set).
    Averaging {
        n: usize,
        k: usize,
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCmd {
    /// Maximum intersecting union of rotation orbits of k-subsets of Z_n.
    SCyclic {
        n: usize,
        k: usize,
        /// Write the witness family here.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long, value_parser = parse_budget)]
        budget: Option<u64>,
    },
    /// CSV rows (n, k, s_cyclic, exact_flag) for 1 <= k <= n <= nmax.
    Table {
        nmax: usize,
        #[arg(long, value_parser = parse_budget)]
        budget: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub n_min: usize,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1)]
    pub k_min: usize,
    /// Largest k; defaults to n/2 for each n.
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Only prime n.
    #[arg(long)]
    pub primes_only: bool,
    /// Constant for the upper-bound column; omitted when absent.
    #[arg(long)]
    pub c: Option<f64>,
    /// Node budget per oracle cell.
    #[arg(long, value_parser = parse_budget)]
    pub budget: Option<u64>,
}

/// Accepts plain integers and scientific notation such as `2e9`.
pub fn parse_budget(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f <= u64::MAX as f64 {
        Ok(f as u64)
    } else {
        Err(format!("budget must be a non-negative integer, got {s}"))
    }
}

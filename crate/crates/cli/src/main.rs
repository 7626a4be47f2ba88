use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rmt_lab::rng::DEFAULT_SEED;
use rmt_lab::RmtError;
use thiserror::Error;

mod recipes;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] RmtError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(RmtError::Resource(_)) => 3,
            CliError::Core(RmtError::Convergence(_)) | CliError::Io { .. } => 1,
            CliError::Core(_) | CliError::Input(_) => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "rmt-lab", version, about = "Random matrix experiments: exact enumeration, Monte Carlo and edge statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output file (defaults to `<subcommand>.<csv|json>` in the working directory)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ensemble {
    Gue,
    Goe,
    Ginibre,
    Wigner,
    Wishart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Law {
    Gauss,
    Rademacher,
    Uniform,
    Cauchy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Diagonal {
    Standard,
    Unit,
    Zero,
}

#[derive(Debug, Clone, Args)]
pub struct EnsembleArgs {
    #[arg(long, value_enum, default_value_t = Ensemble::Gue)]
    pub ensemble: Ensemble,
    #[arg(long, default_value_t = 100, value_parser = positive)]
    pub n: usize,
    /// Columns of the Wishart factor (defaults to n)
    #[arg(long, value_parser = positive)]
    pub p: Option<usize>,
    /// Entry law for wigner and wishart
    #[arg(long, value_enum, default_value_t = Law::Gauss)]
    pub law: Law,
    /// GOE diagonal treatment
    #[arg(long, value_enum, default_value_t = Diagonal::Standard)]
    pub diagonal: Diagonal,
    /// Entries of variance 1 instead of 1/N
    #[arg(long)]
    pub unnormalized: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    Semicircle,
    MarchenkoPastur,
    GueKernel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DensityKind {
    Gue,
    Ginibre,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw one matrix; CSV `row,col,re,im`
    Sample {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Empirical spectral histogram against its limit law (the 3000 x 3000 semicircle figure); CSV `bin_left,bin_right,density`
    Esd {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, default_value_t = 1, value_parser = positive)]
        trials: usize,
        #[arg(long, default_value_t = 60, value_parser = positive)]
        bins: usize,
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact finite-N eigenvalue density from the Hermite or Ginibre kernel (the N-bump figures); CSV `x,density` or `re,im,density`
    Density {
        #[arg(long, value_enum, default_value_t = DensityKind::Gue)]
        kind: DensityKind,
        #[arg(long, default_value_t = 5, value_parser = positive)]
        n: usize,
        #[arg(long)]
        unnormalized: bool,
        /// Grid points per axis
        #[arg(long, default_value_t = 401, value_parser = positive)]
        points: usize,
        /// Half-width of the plotted window
        #[arg(long)]
        extent: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Genus expansion of E tr A^m for normalized GUE; JSON
    Moments {
        #[arg(long)]
        m: usize,
        /// Also evaluate the polynomial at this N
        #[arg(long, value_parser = positive)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Density recovered from the Stieltjes transform by inversion; CSV `x,density,exact`
    Stieltjes {
        #[arg(long, value_enum, default_value_t = Measure::Semicircle)]
        measure: Measure,
        /// Marchenko–Pastur ratio
        #[arg(long, default_value_t = 0.5)]
        ratio: f64,
        /// Size for the finite-N GUE kernel measure
        #[arg(long, default_value_t = 5, value_parser = positive)]
        n: usize,
        #[arg(long, default_value_t = -1.9, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.9, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 381, value_parser = positive)]
        grid: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Harer–Zagier coefficients b_k; CSV `k,coefficients` or, with --n, `k,b_k,moment`
    Hz {
        #[arg(long, default_value_t = 10, value_parser = positive)]
        k_max: usize,
        #[arg(long, value_parser = positive)]
        n: Option<usize>,
        /// Report the moment tail bound P(lambda_max >= 2 + t N^{-2/3}) at this t (needs --n)
        #[arg(long)]
        tail: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Tracy–Widom F2 via Painlevé II; CSV `t,F2`, or `x,q` with --q-grid
    TracyWidom {
        #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
        t_min: f64,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        t_max: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        /// Integration step for the Painlevé solver
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Emit the Hastings–McLeod solution q(x) instead of F2
        #[arg(long)]
        q_grid: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Rescaled GUE top eigenvalue N^{2/3}(lambda_max - 2) against F2; CSV `trial,statistic`
    EdgeMc {
        #[arg(long, default_value_t = 200, value_parser = positive)]
        n: usize,
        #[arg(long, default_value_t = 1000, value_parser = positive)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Eigenvalue paths of a Dyson walk (the non-colliding paths figure); CSV `step,lambda_1,...`
    Dyson {
        #[arg(long, value_enum, default_value_t = Ensemble::Gue)]
        ensemble: Ensemble,
        #[arg(long, default_value_t = 15, value_parser = positive)]
        n: usize,
        #[arg(long, default_value_t = 1500, value_parser = positive)]
        steps: usize,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Non-intersecting birth-death walks: Karlin–McGregor determinant vs enumeration; JSON
    Km {
        #[arg(long, default_value_t = 2)]
        horizon: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "2,0")]
        starts: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "2,0")]
        ends: Vec<i64>,
        /// Default up-probability, as a fraction like 1/2
        #[arg(long, default_value = "1/2")]
        p: String,
        /// Site override `site=p`, e.g. `3=1/4`; repeatable
        #[arg(long = "site", allow_hyphen_values = true)]
        sites: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Gessel–Viennot determinant vs disjoint path sum on a DAG; JSON
    Gv {
        /// Catalan lattice of order n (used when --edges is absent)
        #[arg(long, default_value_t = 3)]
        lattice: usize,
        /// Vertex count for --edges
        #[arg(long)]
        vertices: Option<usize>,
        /// Edges `u-v:w`, comma separated, e.g. `0-1:1/2,1-2:1`
        #[arg(long, value_delimiter = ',')]
        edges: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        sources: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        sinks: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// RSK tableaux and longest increasing subsequence of a permutation; JSON
    Rsk {
        /// One-line notation, e.g. 4,2,3,6,5,1,7
        #[arg(long, value_delimiter = ',', conflicts_with = "random")]
        perm: Vec<usize>,
        /// Use a uniform random permutation of this size
        #[arg(long, value_parser = positive)]
        random: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Longest increasing subsequence of random permutations against F2; CSV `trial,length,statistic`
    Bdj {
        #[arg(long, default_value_t = 1000, value_parser = positive)]
        n: usize,
        #[arg(long, default_value_t = 5000, value_parser = positive)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Complex Ginibre eigenvalues (the circular law figure); CSV `trial,re,im`
    Circular {
        #[arg(long, default_value_t = 1000, value_parser = positive)]
        n: usize,
        #[arg(long, default_value_t = 1, value_parser = positive)]
        trials: usize,
        #[arg(long)]
        unnormalized: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Mixed moments of two independent GUE matrices against the free limit; JSON
    Freeness {
        #[arg(long, default_value_t = 300, value_parser = positive)]
        n: usize,
        #[arg(long, default_value_t = 200, value_parser = positive)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    rmt_lab::parallel::init_thread_pool();
    match recipes::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

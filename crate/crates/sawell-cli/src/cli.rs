use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sawell", version, about = "Spectra and SUSY chains of self-adjoint extensions of -d²/dx² on [-a, a]")]
pub struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time-reversal and parity classification plus the ground-state kind.
    Classify {
        #[command(flatten)]
        ext: ExtensionArgs,
        #[command(flatten)]
        roots: RootArgs,
    },
    /// Energy levels below s_max.
    Spectrum {
        #[command(flatten)]
        ext: ExtensionArgs,
        #[command(flatten)]
        roots: RootArgs,
        /// Keep only the lowest `count` levels.
        #[arg(long)]
        count: Option<usize>,
        /// Append finite-element deltas for every level.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        grid: OracleGridArgs,
    },
    /// Lowest roots along a one- or two-angle sweep, as CSV rows.
    Scan(ScanArgs),
    /// Build the partner chain and write samples, energies and residuals.
    Susy {
        #[command(flatten)]
        ext: ExtensionArgs,
        #[command(flatten)]
        roots: RootArgs,
        /// Highest chain order.
        #[arg(long, default_value_t = 2)]
        order: u32,
        /// Sample points per file.
        #[arg(long, default_value_t = 401)]
        points: usize,
        /// Admissible states written per order and partner.
        #[arg(long, default_value_t = 3)]
        states: u32,
        /// Directory for the generated files.
        #[arg(long)]
        output_dir: PathBuf,
    },
    /// Samples or truncated norms of the Legendre functions at z = -i tan θ.
    Legendre {
        #[arg(long, value_enum, default_value_t = LegendreFamily::Q)]
        family: LegendreFamily,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Sample on [-θ_max, θ_max].
        #[arg(long, default_value_t = 1.5)]
        theta_max: f64,
        /// Print truncated norms for these ε instead of samples.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        norm_eps: Vec<f64>,
    },
    /// Finite-element eigenvalues compared with the analytic levels.
    Oracle {
        #[command(flatten)]
        ext: ExtensionArgs,
        #[command(flatten)]
        roots: RootArgs,
        #[command(flatten)]
        grid: OracleGridArgs,
        /// Number of eigenvalues.
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Diagonalize the second partner potential of this chain order instead.
        #[arg(long)]
        partner: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LegendreFamily {
    P,
    Q,
}

#[derive(Debug, Clone, Args)]
pub struct ExtensionArgs {
    /// JSON file with {"psi", "m", "a"} or {"parametrization", "angles", "psi", "a", "n"}.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub psi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub m0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub m1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub m2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub m3: Option<f64>,
    /// Half-width of the interval.
    #[arg(long, default_value_t = 0.5)]
    pub a: f64,
    /// θ0,θ1,θ2
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub theta: Option<Vec<f64>>,
    /// β0,β1 (needs --n)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub beta: Option<Vec<f64>>,
    /// ω0,ω1,ω2
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub omega: Option<Vec<f64>>,
    /// Integer label of the β parametrization.
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<i64>,
    /// Use the textbook extension U = I.
    #[arg(long)]
    pub textbook: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RootArgs {
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(long)]
    pub grid_step: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleGridArgs {
    /// Coarse grid size; the refined grid has 2n - 1 points.
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
    /// Stencil order, 2 or 4.
    #[arg(long = "stencil", default_value_t = 4)]
    pub stencil: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanFamily {
    Theta,
    Beta,
    Omega,
    ParityTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanBranch {
    All,
    Even,
    Odd,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub family: ScanFamily,
    /// Fixed angles of the family (θ0,θ1,θ2 | β0,β1 | ω0,ω1,ω2 | φ1,φ2).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub angles: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub psi: f64,
    #[arg(long, default_value_t = 0.5)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<i64>,
    /// Swept parameter: psi or an angle name (t0, t1, t2, b0, b1, w0, w1, w2, phi1, phi2).
    #[arg(long)]
    pub vary: String,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub vary2: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub from2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub to2: Option<f64>,
    #[arg(long)]
    pub steps2: Option<usize>,
    /// Lowest positive roots per sweep point.
    #[arg(long, default_value_t = 5)]
    pub roots: usize,
    /// Branch filter for the parity-time family.
    #[arg(long, value_enum, default_value_t = ScanBranch::All)]
    pub branch: ScanBranch,
    #[command(flatten)]
    pub root_args: RootArgs,
}

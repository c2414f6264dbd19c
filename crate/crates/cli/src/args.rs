use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ramicalc::Rat;

#[derive(Parser, Debug)]
#[command(
    name = "ramicalc",
    version,
    about = "Exact ramification and Betti-bound calculator"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Add a 6-digit decimal approximation next to rational values in tables.
    #[arg(long, global = true)]
    pub decimal: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the Betti bound polynomials b_0, ..., b_max.
    Bn {
        #[arg(long, default_value_t = 5)]
        max: usize,
    },
    /// Evaluate Betti bounds.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Euler characteristic of a sheaf on a proper curve.
    Gos(GosArgs),
    /// Euler characteristic sandwich on affine space.
    ChiBounds {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_rat)]
        lc: Rat,
        #[arg(long, default_value_t = 1)]
        rank: u64,
    },
    /// Euler characteristic sandwich for an Artin–Schreier twist of conductor m.
    ChiTwisted {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_rat)]
        m: Rat,
        #[arg(long, default_value_t = 1)]
        rank: u64,
    },
    /// Slope and conductor calculus on Galois module data.
    #[command(subcommand)]
    Slopes(SlopesCmd),
    /// Evaluate the admissible function mu_f on a coherent combination.
    Mu {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Also print the torsion divisor on this fiber.
        #[arg(long)]
        fiber: Option<String>,
    },
    /// Assemble bound polynomials for a stratum and evaluate them at mu.
    Assemble {
        #[arg(long)]
        n: usize,
        /// Dimension N of the generic fiber.
        #[arg(long = "fiber-dim")]
        fiber_dim: usize,
        #[arg(long)]
        delta: u64,
        #[arg(long, default_value_t = 0)]
        alpha: u64,
        #[arg(long, value_parser = parse_rat)]
        mu: Rat,
    },
    /// Fold stratum bound families into perverse bounds.
    PerverseFold {
        /// JSON array of families, each an array of coefficient arrays.
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Evaluate the folded sequence at this value.
        #[arg(long, value_parser = parse_rat)]
        at: Option<Rat>,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Largest n in the appendix chain.
        #[arg(long, default_value_t = 8)]
        max: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Random cases per sampled invariant.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Appendix,
    Sharpness,
    Invariants,
    All,
}

#[derive(Args, Debug)]
pub struct AffineArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = parse_rat)]
    pub lc: Rat,
    #[arg(long, default_value_t = 1)]
    pub rank: u64,
}

#[derive(Subcommand, Debug)]
pub enum BoundCmd {
    /// h^i(A^n, L) <= b_i(lc)·rank.
    An(AffineArgs),
    /// h^j_c(A^n, L) <= b_{2n-j}(lc)·rank.
    AnCompact(AffineArgs),
    /// Betti bounds on an affine curve.
    Curve {
        #[arg(long)]
        genus: u64,
        /// Number of points removed from the proper curve.
        #[arg(long)]
        points: u64,
        #[arg(long, value_parser = parse_rat)]
        lc: Rat,
        #[arg(long, default_value_t = 1)]
        rank: u64,
    },
}

#[derive(Args, Debug)]
pub struct GosArgs {
    /// Curve data as JSON; replaces the other flags.
    #[arg(long = "in", value_name = "PATH", conflicts_with_all = ["genus", "rank", "point"])]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub genus: Option<u64>,
    /// Generic rank.
    #[arg(long)]
    pub rank: Option<u64>,
    /// Bad point as `dimtot=Q,rank=K[,label=NAME]`; repeatable.
    #[arg(long)]
    pub point: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum SlopesCmd {
    /// Swan conductor of a module.
    Swan(ModuleIn),
    /// Total dimension of a module.
    Dimtot(ModuleIn),
    /// Conductor and log conductor.
    Conductors(ModuleIn),
    /// Dual module.
    Dual(ModuleIn),
    /// Tensor product of two isoclinic modules with distinct slopes.
    Tensor {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long = "with", value_name = "PATH")]
        with: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Log)]
        mode: ModeArg,
    },
    /// Swan conductor bounds for a twist by a rank-one module.
    TensorBounds {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long = "with", value_name = "PATH")]
        with: PathBuf,
        /// Assert the non-cancellation hypothesis when slopes coincide.
        #[arg(long)]
        assume_non_cancellation: bool,
    },
    /// Artin–Schreier module with pole order m in characteristic p.
    As {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: u64,
        /// Treat the residue field as perfect.
        #[arg(long)]
        perfect: bool,
    },
    /// Conductor of the Artin–Schreier sheaf on the complement of two lines.
    TwoLines {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: u64,
        /// Multiplicity along D of a test curve.
        #[arg(long, requires = "beta")]
        alpha: Option<u64>,
        /// Multiplicity along E of a test curve.
        #[arg(long, requires = "alpha")]
        beta: Option<u64>,
    },
    /// Log conductor bound for a finite direct image.
    PushforwardBound {
        #[arg(long = "lc-trivial", value_parser = parse_rat)]
        lc_trivial: Rat,
        #[arg(long)]
        degree: u64,
        #[arg(long = "lc-e", value_parser = parse_rat)]
        lc_e: Rat,
    },
}

#[derive(Args, Debug)]
pub struct ModuleIn {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Log,
    Nonlog,
}

pub fn parse_rat(s: &str) -> Result<Rat, String> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| format!("not a rational number: {s} ({e})"))
}

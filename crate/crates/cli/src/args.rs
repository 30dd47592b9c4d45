use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stabp3::scalar::parse_q;
use stabp3::{ChernVector, Q};

#[derive(Debug, Parser)]
#[command(name = "stabp3", version, about = "Stability numerics on P^3")]
pub struct Cli {
    /// Config file with `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for enumeration commands.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Floating point comparison tolerance.
    #[arg(long, global = true, value_parser = positive_f64)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

pub fn rational(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

pub fn class(s: &str) -> Result<ChernVector<Q>, String> {
    s.parse().map_err(|e: stabp3::ParseError| e.to_string())
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

/// Comma-separated rationals, kept as one value.
pub type QList = Vec<Q>;

pub fn rational_list(s: &str) -> Result<QList, String> {
    s.split(',').map(rational).collect()
}

#[derive(Debug, Clone, Args)]
pub struct Point {
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    pub alpha: Q,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    pub beta: Q,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    pub a: Q,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    pub b: Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Proxy {
    ClosedForm,
    Bracket,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Central charge and phase of a class.
    Charge {
        #[arg(long, allow_hyphen_values = true, value_parser = class)]
        class: ChernVector<Q>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational, required_unless_present = "coeffs")]
        alpha: Option<Q>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational, required_unless_present = "coeffs")]
        beta: Option<Q>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational, requires = "b")]
        a: Option<Q>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational, requires = "a")]
        b: Option<Q>,
        /// Eight coefficients: real part on (e3,e2,e1,e0), then imaginary part.
        #[arg(long, allow_hyphen_values = true, value_parser = rational_list, conflicts_with_all = ["alpha", "beta", "a", "b"])]
        coeffs: Option<QList>,
        /// Phase window `(k-1, k+1]`.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        shift: i64,
    },
    /// Slopes, trichotomy and Bogomolov-Gieseker checks.
    Bg {
        #[arg(long, allow_hyphen_values = true, value_parser = class)]
        class: ChernVector<Q>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        alpha: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        beta: Q,
        /// Also evaluate Q_K at this K.
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        k: Option<Q>,
    },
    /// Support interval of K for Z^{a,b}_{alpha,beta}.
    Interval {
        #[command(flatten)]
        point: Point,
        /// Exit with status 2 unless the canonical K lies in the interval.
        #[arg(long)]
        require_canonical: bool,
    },
    /// Im(Z' Zbar) along the beta-path with speed c.
    MonotoneForm {
        #[arg(long, allow_hyphen_values = true, value_parser = class)]
        class: ChernVector<Q>,
        #[command(flatten)]
        point: Point,
        #[arg(long, allow_hyphen_values = true, value_parser = rational, default_value = "1")]
        c: Q,
    },
    /// Bracket for Psi(alpha, beta, b).
    Psi {
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        alpha: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        beta: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        b: Q,
        #[arg(long = "box")]
        box_bound: Option<u32>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        window: Option<Q>,
        #[arg(long)]
        steiner: bool,
        #[arg(long)]
        semi_homogeneous: bool,
    },
    /// Membership in the geometric regions.
    Region {
        #[command(flatten)]
        point: Point,
        #[arg(long = "box")]
        box_bound: Option<u32>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        window: Option<Q>,
        #[arg(long, value_enum, default_value_t = Proxy::ClosedForm)]
        proxy: Proxy,
    },
    /// Lattice classes in the kernel of the charge.
    Boundary {
        #[command(flatten)]
        point: Point,
        #[arg(long = "box")]
        box_bound: Option<u32>,
    },
    /// Numerical wall between two classes. CSV columns: beta,alpha.
    Wall {
        #[arg(long, allow_hyphen_values = true, value_parser = class)]
        v: ChernVector<Q>,
        #[arg(long, allow_hyphen_values = true, value_parser = class)]
        w: ChernVector<Q>,
        /// `lo,hi`
        #[arg(long, allow_hyphen_values = true, value_parser = rational_list, default_value = "-3,3")]
        beta_range: QList,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Candidate destabilizing classes.
    Destab {
        #[arg(long, allow_hyphen_values = true, value_parser = class)]
        v: ChernVector<Q>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        alpha: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        beta: Q,
        #[arg(long = "box")]
        box_bound: Option<u32>,
    },
    /// Exceptional collection checks and the algebraic charge.
    Exc {
        /// e.g. `beilinson:0`
        #[arg(long, default_value = "beilinson:0")]
        collection: String,
        /// `i:left` or `i:right`, applied in order.
        #[arg(long)]
        mutate: Vec<String>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational_list, default_value = "1,1,1,1")]
        m: QList,
        #[arg(long, allow_hyphen_values = true, value_parser = rational_list)]
        phi: QList,
    },
    /// Global dimension lower bound from a witness corpus.
    Gldim {
        #[arg(long, allow_hyphen_values = true, value_parser = rational, required_unless_present = "collection")]
        alpha: Option<Q>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational, required_unless_present = "collection")]
        beta: Option<Q>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational, required_unless_present = "collection")]
        a: Option<Q>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational, required_unless_present = "collection")]
        b: Option<Q>,
        /// Witness file, one `kind:params[shift]` per line.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Use the algebraic datum on this collection instead of a geometric point.
        #[arg(long, requires = "phi")]
        collection: Option<String>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational_list, default_value = "1,1,1,1")]
        m: QList,
        #[arg(long, allow_hyphen_values = true, value_parser = rational_list)]
        phi: Option<QList>,
    },
    /// Phase monotonicity along beta -> beta - tc.
    Monotone {
        #[arg(long, allow_hyphen_values = true, value_parser = class)]
        class: ChernVector<Q>,
        #[command(flatten)]
        point: Point,
        #[arg(long, allow_hyphen_values = true, value_parser = rational, default_value = "1")]
        c: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = rational, default_value = "1")]
        t_max: Q,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Large-volume limit of the tilt phase.
    Window {
        #[arg(long, allow_hyphen_values = true, value_parser = class)]
        class: ChernVector<Q>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        beta: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = rational, default_value = "50")]
        alpha_max: Q,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
    },
    /// Witness object details and Ext degrees.
    Witness {
        /// `kind:params[shift]`, e.g. `line:-1[1]` or `point`.
        #[arg(long)]
        kind: String,
        /// Second witness for Ext degrees.
        #[arg(long)]
        with: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Charge { .. } => "charge",
            Command::Bg { .. } => "bg",
            Command::Interval { .. } => "interval",
            Command::MonotoneForm { .. } => "monotone-form",
            Command::Psi { .. } => "psi",
            Command::Region { .. } => "region",
            Command::Boundary { .. } => "boundary",
            Command::Wall { .. } => "wall",
            Command::Destab { .. } => "destab",
            Command::Exc { .. } => "exc",
            Command::Gldim { .. } => "gldim",
            Command::Monotone { .. } => "monotone",
            Command::Window { .. } => "window",
            Command::Witness { .. } => "witness",
        }
    }
}

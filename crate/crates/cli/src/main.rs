//! `heightlab`: arithmetic heights over ℚ(z1, …, zd) from the command line.

mod commands;
mod output;

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use heightlab::archimedean::{MCParams, DEFAULT_SAMPLES};
use heightlab::heights::PolarizationChoice;
use heightlab::northcott::DEFAULT_BUDGET;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "heightlab", version, about = "Arithmetic height functions over finitely generated fields Q(z1, ..., zd)")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,

    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Seed of the Monte Carlo streams
    #[arg(long, global = true, env = "HEIGHTLAB_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Monte Carlo samples (or quadrature nodes for the Nevanlinna proximity term)
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    pub samples: u64,

    /// Samples per batch; batches are the unit of parallel work
    #[arg(long, global = true)]
    pub batch: Option<u64>,

    /// Stop sampling early once the standard error reaches this value
    #[arg(long, global = true)]
    pub target_stderr: Option<f64>,

    /// Emit JSON (the default)
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,

    /// Emit indented human-readable text
    #[arg(long, global = true)]
    pub text: bool,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Largest number of coordinate tuples an enumeration may visit
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

impl Config {
    pub fn params(&self) -> MCParams {
        let mut p = MCParams::new(self.samples, self.seed);
        if let Some(b) = self.batch {
            p = p.with_batch_size(b);
        }
        p.target_stderr = self.target_stderr;
        p
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Polynomial utilities
    #[command(subcommand)]
    Poly(PolyCommand),
    /// Mahler-type measures against the Fubini–Study measure
    #[command(subcommand)]
    Measure(MeasureCommand),
    /// Naive heights of points of projective space and bounded-height enumeration
    #[command(subcommand)]
    Height(HeightCommand),
    /// Canonical heights and torsion on elliptic curves over Q or Q(t)
    #[command(subcommand)]
    Ec(EcCommand),
    /// Arithmetic intersection numbers on products of projective lines
    #[command(subcommand)]
    Arakelov(ArakelovCommand),
    /// Nevanlinna characteristic of a rational function
    #[command(subcommand)]
    Nevanlinna(NevanlinnaCommand),
}

#[derive(Subcommand, Debug)]
pub enum PolyCommand {
    /// Parse a polynomial or rational function in z1..zd and print its canonical form, degrees and coefficient norm
    Parse {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 1)]
        vars: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum MeasureCommand {
    /// v(f) = exp of the Fubini–Study average of log|f| over (P^1)^d; exact by Jensen's formula in one variable
    V {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 1)]
        vars: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum HeightCommand {
    /// Naive height of a point of P^n(Q(z1..zd)): degree part over the divisors at infinity plus the archimedean integral of log max|f_i|
    Point {
        /// arith | geom | nf | aux:<slot>:<c>
        #[arg(long, default_value = "arith")]
        pol: PolArg,
        /// Coordinates, e.g. "[z1^2, 1]"; rational entries are cleared and the point normalized
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 1)]
        vars: usize,
    },
    /// All points of arithmetic height at most M under per-variable degree caps (finite by the Northcott property)
    Enumerate {
        #[arg(long = "M", alias = "m")]
        m: f64,
        #[arg(long, default_value_t = 1)]
        vars: usize,
        /// Projective dimension n
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Degree cap for each variable, e.g. "[1]"
        #[arg(long)]
        caps: String,
        /// Borderline band in standard errors around M
        #[arg(long, default_value_t = heightlab::northcott::DEFAULT_BAND)]
        band: f64,
        /// Override the coefficient bound derived from M
        #[arg(long)]
        coeff_bound: Option<u64>,
    },
}

#[derive(Args, Debug)]
pub struct EcArgs {
    /// "[a1, a2, a3, a4, a6]" or "[a4, a6]"; use t for the function-field variable
    #[arg(long)]
    pub curve: String,
    /// "(x, y)"
    #[arg(long)]
    pub point: String,
    /// arith | geom | nf | aux:<slot>:<c>
    #[arg(long, default_value = "arith")]
    pub pol: PolArg,
    /// Base field: 0 for Q, 1 for Q(t); detected from the input when absent
    #[arg(long)]
    pub vars: Option<usize>,
    #[arg(long, default_value_t = heightlab::elliptic::DEFAULT_TATE_TOL)]
    pub tol: f64,
    /// Largest doubling step (default 12 over Q, 8 over Q(t))
    #[arg(long)]
    pub ncap: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum EcCommand {
    /// Canonical height lim 4^-n h(x(2^n P)) with the convergence table
    CanonicalHeight(EcArgs),
    /// Exact check of m P = O for m up to --mcap, then the canonical height against three times its error
    IsTorsion {
        #[command(flatten)]
        args: EcArgs,
        #[arg(long, default_value_t = heightlab::elliptic::DEFAULT_MCAP)]
        mcap: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum ArakelovCommand {
    /// sigma = deg(c1(O(1)_FS)^2) and e_d = deg(c1(H|Delta_inf)^d) for d = 1..max-d
    Constants {
        #[arg(long, default_value_t = 6)]
        max_d: usize,
        /// Also report e for the auxiliary bundle with scale c
        #[arg(long)]
        c: Option<f64>,
        /// Recompute sigma by Monte Carlo and check it within 4 standard errors
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum NevanlinnaCommand {
    /// T_f(r) = counting term of the poles in |z| < r plus the mean of log+|f| on |z| = r
    #[command(name = "T")]
    T {
        #[arg(long)]
        f: String,
        #[arg(long)]
        r: f64,
    },
}

/// Polarization as given on the command line.
#[derive(Clone, Copy, Debug)]
pub struct PolArg(pub PolarizationChoice);

impl FromStr for PolArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let pol = match s {
            "arith" => PolarizationChoice::Arithmetic,
            "geom" => PolarizationChoice::Geometric,
            "nf" => PolarizationChoice::NumberField,
            _ => {
                let parts: Vec<&str> = s.split(':').collect();
                match parts.as_slice() {
                    ["aux", slot, c] => PolarizationChoice::AuxiliaryA {
                        slot: slot.parse().map_err(|_| format!("bad slot `{slot}`"))?,
                        c: c.parse().map_err(|_| format!("bad scale `{c}`"))?,
                    },
                    _ => return Err(format!("expected arith, geom, nf or aux:<slot>:<c>, got `{s}`")),
                }
            }
        };
        Ok(PolArg(pol))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.config.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not size the worker pool: {e}");
        }
    }
    let text = cli.config.text;
    match commands::run(&cli) {
        Ok(value) => {
            if text {
                print!("{}", output::to_text(&value));
            } else {
                println!("{}", output::to_json(&value));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if text {
                eprintln!("error: {e}");
            } else {
                println!("{}", output::to_json(&json!({"error": e.code(), "detail": e.to_string()})));
            }
            ExitCode::from(1)
        }
    }
}

//! `birzeta`: zeta functions of weighted dual complexes from the command line.
//!
//! Exit status is 0 when everything ran and every check held, 1 when a
//! verification failed, and 2 on bad input.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{Format, Outcome};

/// Fixed default seed for every randomized command.
pub const DEFAULT_SEED: u64 = 20240901;

#[derive(Parser, Debug)]
#[command(name = "birzeta", version, about = "Birational, rational and topological zeta functions")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "BIRZETA_FORMAT", default_value = "text")]
    pub format: Format,
    /// Largest allowed lcm of the multiplicities N in an input complex.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub guard: i64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ZetaKind {
    /// Birational zeta function with class symbols kept.
    Bir,
    /// Birational zeta function after `{Z} -> L^dim Z`.
    Rat,
    /// Motivic zeta function from the open strata classes.
    Motivic,
    /// Topological zeta function in `s`.
    Top,
}

#[derive(Args, Debug)]
pub struct ComplexInput {
    /// Complex JSON file.
    pub file: PathBuf,
    /// Only strata meeting the distinguished subset.
    #[arg(long)]
    pub local: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a zeta function and its normal form.
    Zeta {
        #[command(flatten)]
        input: ComplexInput,
        #[arg(long, value_enum, default_value = "bir")]
        kind: ZetaKind,
    },
    /// Poles of the rational or topological zeta function, with orders.
    Poles {
        #[command(flatten)]
        input: ComplexInput,
        /// Topological instead of rational poles.
        #[arg(long)]
        top: bool,
    },
    /// Series coefficients up to `T^m`; with --check, against dlt valuations.
    Truncate {
        #[command(flatten)]
        input: ComplexInput,
        #[arg(long, short)]
        m: i64,
        #[arg(long)]
        check: bool,
    },
    /// Blow up one component of a stratum (stellar subdivision).
    Subdivide {
        file: PathBuf,
        /// Vertex ids of the cell, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        face: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Whether the new vertex lies over the distinguished subset; by
        /// default it does when the cell does.
        #[arg(long)]
        over_sigma: Option<bool>,
    },
    /// Subdivide a surface complex until it is m-separating.
    Mseparate {
        file: PathBuf,
        #[arg(long, short)]
        m: i64,
    },
    /// Nearby cycles class, minus the limit at T = infinity.
    Nearby {
        #[command(flatten)]
        input: ComplexInput,
    },
    /// Euler characteristic of the dual complex, compared with COUNT of the nearby cycles.
    Euler { file: PathBuf },
    /// Log canonical threshold and the expected pole order there.
    Lct {
        #[command(flatten)]
        input: ComplexInput,
    },
    /// Plane curve germs given by their minimal resolution graph.
    Curve {
        #[command(subcommand)]
        command: CurveCommand,
    },
    /// Worked families with closed forms.
    Example {
        #[command(subcommand)]
        command: ExampleCommand,
    },
    /// Randomized and targeted checks.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum CurveCommand {
    /// Numerics table, dlt model, poles, residue certificates, truncation check.
    Analyze {
        /// Curve graph JSON file or bundled germ name.
        input: String,
        /// Truncation order for the valuation check; default max N + 3.
        #[arg(long, short)]
        m: Option<i64>,
    },
    /// Predicted and actual poles of the topological and birational zeta functions.
    Compare {
        /// Curve graph JSON file or bundled germ name.
        input: String,
    },
    /// List the bundled germs.
    List,
}

#[derive(Subcommand, Debug)]
pub enum ExampleCommand {
    /// Cone over a smooth degree d hypersurface in P^(n-1).
    Cone {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: i64,
        /// Compare the complex with the closed forms and run the S_m sums up to 3d.
        #[arg(long)]
        check: bool,
    },
    /// Hyperplane arrangement by chains of edges.
    Arrangement {
        /// Arrangement JSON file or bundled line arrangement name.
        input: Option<String>,
        /// List bundled line arrangements.
        #[arg(long)]
        list: bool,
        /// For plane arrangements, compare with the blow-up complex and the T^N reading.
        #[arg(long)]
        check: bool,
    },
    /// Sum over log canonical places.
    Skeleton {
        /// JSON list of {"N", "cls", "over_sigma"}; without it the node skeleton.
        file: Option<PathBuf>,
        /// Largest N for the node skeleton.
        #[arg(long, default_value_t = 12)]
        max_n: i64,
        #[arg(long)]
        local: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Telescoping identity and subdivision invariance on random data.
    Identities {
        #[arg(long, default_value_t = 500)]
        random: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Zeta series against quasi-monomial dlt valuations up to T^m.
    MainTheorem {
        #[command(flatten)]
        input: ComplexInput,
        #[arg(long, short)]
        m: i64,
        /// Valuation list JSON; default all quasi-monomial valuations with N <= m.
        #[arg(long)]
        valuations: Option<PathBuf>,
    },
    /// The four numerical relations on curve graphs.
    Numerics {
        /// Curve graph JSON files or bundled germ names; default all bundled.
        inputs: Vec<String>,
        /// Also check this many germs from random blow-up scripts.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Residue certificates against the actual poles.
    Residues {
        /// Curve graph JSON file or bundled germ name.
        input: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(Outcome::Ok(r)) => {
            print!("{}", r.render(cli.format));
            ExitCode::from(0)
        }
        Ok(Outcome::Failed(r)) => {
            print!("{}", r.render(cli.format));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {}", e.0);
            ExitCode::from(2)
        }
    }
}

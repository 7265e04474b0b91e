mod commands;
mod divspec;
mod report;

use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use towercodes::agcodes::DEFAULT_BUDGET;
use towercodes::sxcodes::{DEFAULT_ENUMERATION_BUDGET, DEFAULT_PAIR_BUDGET};

use report::{exit_code_for, is_verification, Emitted, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "towercodes", version, about = "Transitive and self-dual AG codes from a Galois tower")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Output format; bounds tables default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<String>,
    /// Codewords or column subsets an exact minimum-distance search may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub distance_budget: u128,
    /// Largest codebook the nonlinear construction may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    pub enumeration_budget: u128,
    /// Pair comparisons allowed for the nonlinear minimum distance.
    #[arg(long, global = true, default_value_t = DEFAULT_PAIR_BUDGET)]
    pub pair_budget: u128,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cmd {
    /// Places, genus and closure ledger of one tower level.
    #[command(subcommand)]
    Tower(TowerCmd),
    /// Closure report and ledger checks for E_n.
    Closure {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
    },
    #[command(subcommand)]
    Code(CodeCmd),
    #[command(subcommand)]
    Sx(SxCmd),
    #[command(subcommand)]
    Bounds(BoundsCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TowerCmd {
    Analyze {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        level: usize,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeCmd {
    /// C_L(D, G) with D the places over z = 1 and G from a divisor spec.
    Build {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        level: usize,
        /// e.g. `0*A+2*B`, `9*Ginf`; also `D` and `P<i>` for evaluation places.
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
    },
    /// The code C_{a,b} = C_L(D, aA + bB) on E_n with its dual via eta.
    Family {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        selfdual_scale: bool,
    },
    /// Transitivity certificate for a code report written by `code build` or `code family`.
    Certify {
        #[arg(long = "in")]
        input: String,
    },
    /// Tower level and divisor for a target relative distance.
    Plan {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SxCmd {
    /// Nonlinear codebook from H = m0*B (level 0) or m0*Ginf (level 1).
    Build {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m0: i64,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        level: usize,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsCmd {
    /// Curve values on a delta grid.
    Table {
        #[arg(long)]
        q: u64,
        #[arg(long, value_delimiter = ',', default_value = "gv,tvz,sx,selfdual")]
        curves: Vec<String>,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Crossover search and the exact improved and self-dual deltas.
    Summary {
        #[arg(long)]
        q: u64,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyCmd {
    /// The acceptance suite; defined for q = 9.
    All {
        #[arg(long, default_value_t = 9)]
        q: u64,
    },
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("TOWERCODES_THREADS") else {
        return Ok(());
    };
    let n: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => bail!("TOWERCODES_THREADS must be a positive integer, got '{raw}'"),
    };
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads()?;
    let config = RunConfig::new(&cli.opts, &cli.cmd);
    let emitted = match commands::dispatch(&cli.cmd, &config) {
        Ok(e) => e,
        Err(e) => match e.downcast_ref::<towercodes::Error>() {
            Some(lib) if is_verification(lib) => Emitted::failed(lib),
            _ => return Err(e),
        },
    };
    emitted.write(&config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    }
}

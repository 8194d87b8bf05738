//! Command-line front end: matrix analysis, fan resolution, conormal
//! generators, umbrellas, characteristic cycles, and golden-file checks.

mod commands;
mod config;
mod examples;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Format, JobArgs, JobConfig};

#[derive(Parser)]
#[command(name = "gkzcc", version, about = "Characteristic cycles of non-confluent GKZ systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    job: JobArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Non-confluence, p-nondegeneracy, and square reduction.
    Analyze,
    /// Blow up the starting fan until every column pair is good.
    Resolve {
        /// Break ties with a seeded shuffle instead of lexicographically.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Generators and dimension of one local piece of the conormal variety.
    Conormal {
        /// Column subset, e.g. `1,2,3`; empty for the empty set.
        #[arg(long, default_value = "")]
        theta: String,
        #[arg(long, default_value_t = 0)]
        chart: usize,
        #[arg(long)]
        infinity: bool,
    },
    /// Column subsets cut out by supporting functionals.
    Umbrella,
    /// The characteristic cycle over F_p.
    Cc,
    /// Regenerate the worked examples and diff them against golden files.
    Examples {
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Overwrite the golden files.
        #[arg(long)]
        bless: bool,
    },
}

#[derive(Debug)]
pub enum Failure {
    Mismatch(String),
    Malformed(String),
    Precondition(String),
    Inapplicable(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Malformed(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Inapplicable(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Mismatch(m) | Failure::Malformed(m) | Failure::Precondition(m) | Failure::Inapplicable(m) => m,
        }
    }
}

impl From<gkzcc::Error> for Failure {
    fn from(e: gkzcc::Error) -> Self {
        use gkzcc::Error::*;
        let msg = e.to_string();
        match e {
            Nondegeneracy(_) | ReductionLostNonConfluence => Failure::Inapplicable(msg),
            MalformedMatrix(_) | NotPrime(_) | InvalidTheta(_) | InvalidCharacter(_) | InvalidEdge(_)
            | InvalidCone(_) => Failure::Malformed(msg),
            _ => Failure::Precondition(msg),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Command::Examples { golden, bless } = &cli.command {
        let dir = golden.clone().unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden"));
        print!("{}", examples::run(&dir, *bless)?);
        return Ok(());
    }
    let cfg = JobConfig::from_args(&cli.job)?;
    let out = match &cli.command {
        Command::Analyze => commands::analyze(&cfg)?,
        Command::Resolve { seed } => commands::resolve(&cfg, *seed)?,
        Command::Conormal { theta, chart, infinity } => commands::conormal(&cfg, theta, *chart, *infinity)?,
        Command::Umbrella => commands::umbrella_cmd(&cfg)?,
        Command::Cc => commands::cc(&cfg)?,
        Command::Examples { .. } => unreachable!("handled above"),
    };
    let body = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
        Format::Text => out.text,
    };
    match &cfg.output {
        Some(path) => fs::write(path, body).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

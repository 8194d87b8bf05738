use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use gkzcc::cycle::MultiplicityTable;
use gkzcc::fan::GenerableSet;
use gkzcc::matrix::hat;
use gkzcc::{CharacterVector, IntMatrix, Prime, ThetaSubset};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::Failure;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Inputs shared by every subcommand. Values are inline JSON or a path to a
/// JSON file.
#[derive(Args, Debug, Default)]
pub struct JobArgs {
    /// JSON job file; flags given alongside it take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Integer matrix B as rows, e.g. `[[0,0,1]]`.
    #[arg(long, global = true)]
    pub matrix: Option<String>,
    /// Treat --matrix as the hatted matrix A.
    #[arg(long, global = true)]
    pub hatted: bool,
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    /// Character as `{"order": q-1, "exponents": [...]}`.
    #[arg(long = "char", global = true)]
    pub character: Option<String>,
    /// Multiplicities as `[{"theta": [1,2], "mult": 1}, ...]`.
    #[arg(long, global = true)]
    pub mult: Option<String>,
    /// Starting fan as `{"d": 2, "cones": [[[1,0],[0,1]], ...]}`.
    #[arg(long, global = true)]
    pub fan: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    matrix: Option<IntMatrix>,
    #[serde(default)]
    hatted: bool,
    prime: Option<u64>,
    character: Option<CharacterVector>,
    multiplicities: Option<MultiplicityTable>,
    fan: Option<GenerableSet>,
    output: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Debug)]
pub struct JobConfig {
    matrix: Option<IntMatrix>,
    hatted: bool,
    pub prime: Option<Prime>,
    pub character: Option<CharacterVector>,
    pub multiplicities: Option<MultiplicityTable>,
    pub fan: Option<GenerableSet>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

/// Inline JSON when the value starts with `[` or `{`, a file path otherwise.
pub fn load<T: DeserializeOwned>(value: &str, what: &str) -> Result<T, Failure> {
    let trimmed = value.trim_start();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        value.to_string()
    } else {
        read(Path::new(value))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("{what}: {e}")))
}

pub fn prime(p: u64) -> Result<Prime, Failure> {
    Prime::new(p).map_err(|e| Failure::Malformed(e.to_string()))
}

/// `1,2,3`, `[1,2,3]`, or empty for the empty set.
pub fn parse_theta(s: &str, n: usize) -> Result<ThetaSubset, Failure> {
    let body = s.trim().trim_start_matches('[').trim_end_matches(']');
    let members = body
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|e| Failure::Malformed(format!("theta entry {t:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    ThetaSubset::new(members, n).map_err(|e| Failure::Malformed(e.to_string()))
}

impl JobConfig {
    pub fn new(matrix: IntMatrix, hatted: bool, prime: Option<Prime>, character: Option<CharacterVector>) -> Self {
        JobConfig {
            matrix: Some(matrix),
            hatted,
            prime,
            character,
            multiplicities: None,
            fan: None,
            output: None,
            format: Format::Text,
        }
    }

    pub fn from_args(args: &JobArgs) -> Result<Self, Failure> {
        let file: FileConfig = match &args.config {
            Some(path) => {
                serde_json::from_str(&read(path)?).map_err(|e| Failure::Malformed(format!("config: {e}")))?
            }
            None => FileConfig::default(),
        };
        let matrix = match &args.matrix {
            Some(m) => Some(load(m, "matrix")?),
            None => file.matrix,
        };
        let prime = match args.prime.or(file.prime) {
            Some(p) => Some(prime(p)?),
            None => None,
        };
        let character = match &args.character {
            Some(c) => Some(load(c, "character")?),
            None => file.character,
        };
        let multiplicities = match &args.mult {
            Some(m) => Some(load(m, "multiplicities")?),
            None => file.multiplicities,
        };
        let fan = match &args.fan {
            Some(f) => Some(load(f, "fan")?),
            None => file.fan,
        };
        Ok(JobConfig {
            matrix,
            hatted: args.hatted || file.hatted,
            prime,
            character,
            multiplicities,
            fan,
            output: args.out.clone().or(file.output),
            format: args.format.or(file.format).unwrap_or_default(),
        })
    }

    fn raw(&self) -> Result<&IntMatrix, Failure> {
        self.matrix.as_ref().ok_or_else(|| Failure::Malformed("no matrix given".into()))
    }

    /// `A`, hatting `B` unless the input is already hatted.
    pub fn hatted(&self) -> Result<IntMatrix, Failure> {
        let m = self.raw()?;
        Ok(if self.hatted { m.clone() } else { hat(m) })
    }

    /// `B`; hatted input must carry its all-ones row first.
    pub fn unhatted(&self) -> Result<IntMatrix, Failure> {
        let m = self.raw()?;
        if !self.hatted {
            return Ok(m.clone());
        }
        if !m.row(0).iter().all(|x| *x == 1.into()) {
            return Err(Failure::Precondition("hatted input must have an all-ones first row".into()));
        }
        m.rows_from(1).map_err(|_| Failure::Precondition("hatted input needs at least two rows".into()))
    }

    pub fn require_prime(&self) -> Result<Prime, Failure> {
        self.prime.ok_or_else(|| Failure::Precondition("--prime is required".into()))
    }

    pub fn require_character(&self) -> Result<&CharacterVector, Failure> {
        self.character.as_ref().ok_or_else(|| Failure::Precondition("--char is required".into()))
    }
}

use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bounds::{Policy, DEFAULT_GAMMA_TOL};
use crate::error::{Error, Result};
use crate::search::{Quantity, SearchBudget};

/// Largest number of values a single range argument may expand to.
const MAX_RANGE_LEN: usize = 100_000;

#[derive(Debug, Parser)]
#[command(name = "egz", version, about = "Zero-sum constants s(G) and eta(G) of finite Abelian groups")]
pub struct Cli {
    /// Which Property D assumptions count towards the best bounds.
    #[arg(long, global = true, default_value = "registry-only")]
    pub policy: Policy,
    /// Search node budget: an integer or one of small (1e4), medium (1e6), large (1e8).
    #[arg(long, global = true, default_value = "200000000", value_parser = parse_node_budget)]
    pub node_budget: u64,
    /// Wall-clock budget, e.g. 90s, 15m, 2h.
    #[arg(long, global = true, default_value = "15m", value_parser = parse_duration)]
    pub wall_budget: Duration,
    /// Tolerance for the gamma infimum.
    #[arg(long, global = true, default_value_t = DEFAULT_GAMMA_TOL)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Markdown)]
    pub format: OutputFormat,
    /// JSON cache of completed searches.
    #[arg(long, global = true, env = "EGZ_CACHE")]
    pub cache: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every applicable bound on s or eta, with the best ones under the policy.
    Bound {
        group: String,
        #[arg(default_value = "s")]
        quantity: Quantity,
    },
    /// Exact value by exhaustive search.
    Exact {
        group: String,
        #[arg(default_value = "s")]
        quantity: Quantity,
    },
    /// Decide Property D for a homocyclic group.
    Propd { group: String },
    /// Look for a zero-sum subsequence in a sequence file.
    Zerosum {
        file: PathBuf,
        group: String,
        /// Required length (default: the exponent of the group).
        #[arg(long, conflicts_with = "at_most")]
        exactly: Option<u64>,
        /// Any length from 1 up to this.
        #[arg(long)]
        at_most: Option<u64>,
    },
    /// Enclosure of gamma_{k,q}; q defaults to the largest prime power dividing k.
    Gamma { k: u64, q: Option<u64> },
    /// Upper bounds on (Z_k)^n side by side.
    Table {
        /// Values of k: `3`, `2..9`, `3,5,7` or a mix.
        #[arg(long)]
        k: String,
        /// Values of n, same syntax.
        #[arg(long)]
        n: String,
        #[arg(default_value = "s")]
        quantity: Quantity,
        /// Rows beyond this are dropped with a warning.
        #[arg(long, default_value_t = 10_000)]
        max_rows: usize,
        /// Add the slice-rank bound with the non-integer binomial evaluated literally.
        #[arg(long)]
        literal: bool,
    },
    /// Sandwich-check every cached exact value against all bounds.
    Validate { corpus: Option<PathBuf> },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub node_budget: u64,
    pub wall_budget: Duration,
    pub gamma_tolerance: f64,
    pub propd_policy: Policy,
    pub output_format: OutputFormat,
}

impl RunConfig {
    pub fn validate(self) -> Result<Self> {
        if self.node_budget == 0 || self.wall_budget.is_zero() {
            return Err(Error::Domain("budgets must be positive".into()));
        }
        if !(self.gamma_tolerance > 0.0 && self.gamma_tolerance.is_finite()) {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.gamma_tolerance)));
        }
        Ok(self)
    }

    pub fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_nodes: self.node_budget,
            max_wall: self.wall_budget,
        }
    }
}

impl Cli {
    pub fn config(&self) -> Result<RunConfig> {
        RunConfig {
            node_budget: self.node_budget,
            wall_budget: self.wall_budget,
            gamma_tolerance: self.tol,
            propd_policy: self.policy,
            output_format: self.format,
        }
        .validate()
    }
}

pub fn parse_node_budget(s: &str) -> std::result::Result<u64, String> {
    match s {
        "small" => Ok(10_000),
        "medium" => Ok(1_000_000),
        "large" => Ok(100_000_000),
        _ => {
            if let Ok(v) = s.parse::<u64>() {
                return Ok(v);
            }
            match s.parse::<f64>() {
                Ok(v) if v >= 1.0 && v <= u64::MAX as f64 && v.fract() == 0.0 => Ok(v as u64),
                _ => Err(format!("expected a positive integer or small/medium/large, got {s:?}")),
            }
        }
    }
}

pub fn parse_duration(s: &str) -> std::result::Result<Duration, String> {
    let s = s.trim();
    let split = s.find(|c: char| !c.is_ascii_digit() && c != '.').unwrap_or(s.len());
    let (num, unit) = s.split_at(split);
    let v: f64 = num.parse().map_err(|_| format!("bad duration {s:?}"))?;
    let secs = match unit {
        "" | "s" => v,
        "ms" => v / 1000.0,
        "m" | "min" => v * 60.0,
        "h" => v * 3600.0,
        _ => return Err(format!("unknown duration unit {unit:?} in {s:?}")),
    };
    if !(secs > 0.0 && secs.is_finite()) {
        return Err(format!("duration must be positive, got {s:?}"));
    }
    Ok(Duration::from_secs_f64(secs))
}

/// `3`, `1..5` (inclusive), `2,3,7` or combinations such as `1..3,9`; sorted and deduplicated.
pub fn parse_range(s: &str) -> Result<Vec<u64>> {
    let bad = |why: &str| Error::Domain(format!("bad range {s:?}: {why}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|_| bad("expected integers"))?;
                let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad("expected integers"))?;
                if a > b {
                    return Err(bad("empty interval"));
                }
                if (b - a) as usize >= MAX_RANGE_LEN || out.len() + ((b - a) as usize) >= MAX_RANGE_LEN {
                    return Err(bad("too many values"));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad("expected integers"))?),
        }
    }
    if out.is_empty() {
        return Err(bad("no values"));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

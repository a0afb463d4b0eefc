//! The `egz` command-line front end.
//!
//! [`run`] takes the argument list and output streams explicitly so the whole CLI can be
//! driven from tests. Exit status is 0 on success (including budget-limited searches) and 2
//! on any usage, parse or input error.

mod args;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::bounds::{best_bounds_with_known, naslund_gamma, BoundValue, Direction};
use crate::arith::largest_prime_power_divisor;
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::search::{check_property_d_cached, exact_value, find_zero_sum, Cache, Quantity, SearchStatus};
use crate::sequence::{LengthSpec, Sequence};

pub use args::{parse_duration, parse_node_budget, parse_range, Cli, Command, OutputFormat, RunConfig};
pub use report::{
    GammaReport, PropdReport, Report, TableReport, TableRow, ValidateReport, Violation, ZeroSumReport,
    TABLE_COLUMNS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 2;

/// Parse `args` (including the program name) and execute the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli, err) {
        Ok((report, code)) => {
            match report.render(cli.format) {
                Ok(text) => {
                    let _ = write!(out, "{text}");
                    code
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_ERROR
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: &Cli, warn: &mut dyn Write) -> Result<(Report, i32)> {
    let config = cli.config()?;
    let cache_path = cli.cache.clone();
    Ok(match &cli.command {
        Command::Bound { group, quantity } => {
            let g: FiniteAbelianGroup = group.parse()?;
            let known = match &cache_path {
                Some(p) if p.exists() => cached_exact_bounds(&Cache::load(p)?, &g, *quantity)?,
                _ => Vec::new(),
            };
            let best = best_bounds_with_known(&g, *quantity, config.propd_policy, config.gamma_tolerance, &known)?;
            (Report::Bound(best), EXIT_OK)
        }
        Command::Exact { group, quantity } => {
            let g: FiniteAbelianGroup = group.parse()?;
            let mut cache = open_cache(cache_path.as_deref())?;
            let outcome = match cache.get_exact(&g, *quantity)? {
                Some(o) => o,
                None => {
                    let o = exact_value(&g, *quantity, config.budget())?;
                    cache.insert(&o);
                    save_cache(&cache, cache_path.as_deref())?;
                    o
                }
            };
            (Report::Exact(outcome), EXIT_OK)
        }
        Command::Propd { group } => {
            let g: FiniteAbelianGroup = group.parse()?;
            let mut cache = open_cache(cache_path.as_deref())?;
            let verdict = check_property_d_cached(&g, config.budget(), &mut cache)?;
            save_cache(&cache, cache_path.as_deref())?;
            (Report::Propd(PropdReport::from(verdict)), EXIT_OK)
        }
        Command::Zerosum {
            file,
            group,
            exactly,
            at_most,
        } => {
            let g: FiniteAbelianGroup = group.parse()?;
            let text = std::fs::read_to_string(file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
            let seq = Sequence::parse_file(&g, &text)?;
            let target = match (exactly, at_most) {
                (Some(l), None) => LengthSpec::Exactly(*l),
                (None, Some(l)) => LengthSpec::AtMost(*l),
                (None, None) => LengthSpec::Exactly(
                    g.exponent_u64()
                        .ok_or_else(|| Error::TooLarge(g.to_string()))?,
                ),
                (Some(_), Some(_)) => unreachable!("clap rejects both"),
            };
            let witness = find_zero_sum(&seq, target)?;
            (Report::ZeroSum(ZeroSumReport::new(&g, target, witness.as_ref())), EXIT_OK)
        }
        Command::Gamma { k, q } => {
            let q = q.unwrap_or_else(|| largest_prime_power_divisor(*k));
            let g = naslund_gamma(*k, q, config.gamma_tolerance)?;
            (Report::Gamma(g), EXIT_OK)
        }
        Command::Table {
            k,
            n,
            quantity,
            max_rows,
            literal,
        } => {
            let ks = parse_range(k)?;
            let ns = parse_range(n)?;
            let table = TableReport::build(&ks, &ns, *quantity, config.gamma_tolerance, *max_rows, *literal)?;
            if table.truncated {
                let _ = writeln!(
                    warn,
                    "warning: table truncated to {max_rows} rows; raise --max-rows to see the rest"
                );
            }
            (Report::Table(table), EXIT_OK)
        }
        Command::Validate { corpus } => {
            let path = corpus
                .clone()
                .or(cache_path)
                .ok_or_else(|| Error::Cache("no corpus given (pass a path, --cache or set EGZ_CACHE)".into()))?;
            let cache = Cache::load(&path)?;
            let report = ValidateReport::check(&path, &cache, config.propd_policy, config.gamma_tolerance)?;
            for w in &report.warnings {
                let _ = writeln!(warn, "warning: {w}");
            }
            let code = if report.violations.is_empty() { EXIT_OK } else { EXIT_ERROR };
            (Report::Validate(report), code)
        }
    })
}

fn open_cache(path: Option<&Path>) -> Result<Cache> {
    match path {
        Some(p) => Cache::load_or_default(p),
        None => Ok(Cache::default()),
    }
}

fn save_cache(cache: &Cache, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => cache.save(p),
        None => Ok(()),
    }
}

/// Exact cached values as matching lower and upper bounds.
fn cached_exact_bounds(cache: &Cache, group: &FiniteAbelianGroup, quantity: Quantity) -> Result<Vec<BoundValue>> {
    Ok(match cache.get(group, quantity)? {
        Some(o) if o.status == SearchStatus::Exact => [Direction::Lower, Direction::Upper]
            .into_iter()
            .map(|d| BoundValue::exact_search(quantity, group.clone(), d, o.value))
            .collect(),
        Some(o) => vec![BoundValue::exact_search(quantity, group.clone(), Direction::Lower, o.value)],
        None => Vec::new(),
    })
}

/// Default cache location from the environment.
pub fn default_cache_path() -> Option<PathBuf> {
    std::env::var_os("EGZ_CACHE").map(PathBuf::from)
}

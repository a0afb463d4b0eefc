use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::OutputFormat;
use crate::arith::is_prime;
use crate::bounds::{
    best_bounds, generalized_binomial, homocyclic_bounds, thm_main4_bound, BestBounds, BoundValue, Direction,
    GammaResult, Policy,
};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::search::{
    find_zero_sum, Cache, KnownPropertyD, PropertyDVerdict, Quantity, SearchOutcome, SearchStatus, VerdictStatus,
};
use crate::sequence::{LengthSpec, ZeroSumWitness};

/// Upper-bound columns of `table`, in output order. Frozen: scripts index CSV columns by name.
pub const TABLE_COLUMNS: [&str; 10] = [
    "harborth-upper",
    "harborth-exact",
    "slice-rank-floor",
    "slice-rank-amplified",
    "central-binomial",
    "prime-power-lift",
    "odd-modulus-lift",
    "rank3-three-five",
    "primary-central-binomial",
    "naslund",
];

const LITERAL_COLUMN: &str = "slice-rank-literal";

pub type GammaReport = GammaResult;

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)] // built once per invocation
pub enum Report {
    Bound(BestBounds),
    Exact(SearchOutcome),
    Propd(PropdReport),
    ZeroSum(ZeroSumReport),
    Gamma(GammaReport),
    Table(TableReport),
    Validate(ValidateReport),
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => self.json(),
            OutputFormat::Csv => self.csv(),
            OutputFormat::Markdown => Ok(self.markdown()),
        }
    }

    fn json(&self) -> Result<String> {
        let v = match self {
            Report::Bound(r) => serde_json::to_string_pretty(r),
            Report::Exact(r) => serde_json::to_string_pretty(r),
            Report::Propd(r) => serde_json::to_string_pretty(r),
            Report::ZeroSum(r) => serde_json::to_string_pretty(r),
            Report::Gamma(r) => serde_json::to_string_pretty(r),
            Report::Table(r) => serde_json::to_string_pretty(r),
            Report::Validate(r) => serde_json::to_string_pretty(r),
        };
        v.map(|s| s + "\n").map_err(|e| Error::Io(e.to_string()))
    }

    fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut row = |fields: Vec<String>| w.write_record(&fields).map_err(|e| Error::Io(e.to_string()));
        match self {
            Report::Bound(r) => {
                row(strings(["rule", "direction", "value", "granted", "assumptions", "citation"]))?;
                for l in &r.bounds {
                    let b = &l.bound;
                    row(vec![
                        b.rule_name().into(),
                        b.direction.to_string(),
                        b.value.to_string(),
                        l.granted.to_string(),
                        assumption_list(b),
                        b.derivation.citation.clone(),
                    ])?;
                }
            }
            Report::Exact(o) => {
                row(strings([
                    "group",
                    "quantity",
                    "status",
                    "value",
                    "nodes_explored",
                    "elapsed_ms",
                    "extremal_orbits",
                    "symmetry",
                ]))?;
                row(vec![
                    o.group.to_string(),
                    o.quantity.to_string(),
                    format!("{:?}", o.status),
                    o.value.to_string(),
                    o.nodes_explored.to_string(),
                    o.elapsed.as_millis().to_string(),
                    o.extremal_sequences.len().to_string(),
                    o.symmetry.clone(),
                ])?;
            }
            Report::Propd(p) => {
                let v = &p.verdict;
                row(strings(["group", "status", "s_value", "extremal_orbits", "registry", "counterexample"]))?;
                row(vec![
                    v.group.to_string(),
                    format!("{:?}", v.status),
                    v.s_value.map(|s| s.to_string()).unwrap_or_default(),
                    v.extremal_sequences.len().to_string(),
                    registry_text(&v.registry),
                    v.counterexample.as_ref().map(|c| c.to_compact()).unwrap_or_default(),
                ])?;
            }
            Report::ZeroSum(z) => {
                row(strings(["element"]))?;
                for e in &z.witness {
                    row(vec![e.clone()])?;
                }
            }
            Report::Gamma(g) => {
                row(strings(["k", "q", "gamma_upper", "minimizer_x", "tolerance"]))?;
                row(vec![
                    g.k.to_string(),
                    g.q.to_string(),
                    format!("{:?}", g.gamma_upper),
                    format!("{:?}", g.minimizer_x),
                    format!("{:e}", g.tolerance),
                ])?;
            }
            Report::Table(t) => {
                let mut header = strings(["k", "n"]);
                header.extend(t.columns.iter().cloned());
                row(header)?;
                for r in &t.rows {
                    let mut fields = vec![r.k.to_string(), r.n.to_string()];
                    fields.extend(t.columns.iter().map(|c| r.values.get(c).cloned().unwrap_or_default()));
                    row(fields)?;
                }
            }
            Report::Validate(v) => {
                row(strings(["group", "quantity", "exact", "kind", "rule", "bound"]))?;
                for x in &v.violations {
                    row(vec![
                        x.group.clone(),
                        x.quantity.to_string(),
                        x.exact.to_string(),
                        x.kind.clone(),
                        x.bound.as_ref().map(|b| b.rule_name().to_string()).unwrap_or_default(),
                        x.bound.as_ref().map(|b| b.value.to_string()).unwrap_or_default(),
                    ])?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn markdown(&self) -> String {
        let mut s = String::new();
        match self {
            Report::Bound(r) => {
                let _ = writeln!(s, "# {} bounds for {} (policy {})\n", r.quantity, r.group, r.policy);
                let best = |b: &Option<BoundValue>| match b {
                    Some(b) => format!("{} ({})", b.value, b.rule_name()),
                    None => "none".into(),
                };
                let _ = writeln!(s, "best lower: {}", best(&r.best_lower));
                let _ = writeln!(s, "best upper: {}\n", best(&r.best_upper));
                if r.bounds.is_empty() {
                    let _ = writeln!(s, "no applicable bounds");
                    return s;
                }
                let _ = writeln!(s, "| rule | direction | value | granted | assumptions | citation |");
                let _ = writeln!(s, "|---|---|---|---|---|---|");
                for l in &r.bounds {
                    let b = &l.bound;
                    let _ = writeln!(
                        s,
                        "| {} | {} | {} | {} | {} | {} |",
                        b.rule_name(),
                        b.direction,
                        b.value,
                        if l.granted { "yes" } else { "no" },
                        assumption_list(b),
                        b.derivation.citation
                    );
                }
            }
            Report::Exact(o) => {
                let rel = if o.status == SearchStatus::Exact { "=" } else { ">=" };
                let _ = writeln!(s, "{}({}) {rel} {} ({:?})", o.quantity, o.group, o.value, o.status);
                let _ = writeln!(
                    s,
                    "nodes: {}, elapsed: {} ms, symmetry: {}, extremal orbits: {}",
                    o.nodes_explored,
                    o.elapsed.as_millis(),
                    o.symmetry,
                    o.extremal_sequences.len()
                );
                if let Some(e) = &o.extremal_example {
                    let _ = writeln!(s, "extremal example: {}", e.to_compact());
                }
            }
            Report::Propd(p) => {
                let _ = writeln!(s, "{}: {}", p.verdict.group, p.summary);
                if let Some(v) = p.verdict.s_value {
                    let _ = writeln!(s, "s = {v}, extremal orbits: {}", p.verdict.extremal_sequences.len());
                }
                if let Some(c) = &p.verdict.counterexample {
                    let _ = writeln!(s, "counterexample: {}", c.to_compact());
                }
                if let KnownPropertyD::KnownTrue(cases) = &p.verdict.registry {
                    for c in cases {
                        let _ = writeln!(s, "registry {c}: {}", c.citation());
                    }
                }
            }
            Report::ZeroSum(z) => {
                if z.found {
                    for e in &z.witness {
                        let _ = writeln!(s, "{e}");
                    }
                } else {
                    let _ = writeln!(s, "none");
                }
            }
            Report::Gamma(g) => {
                let at = if g.minimizer_x == 1.0 {
                    "x -> 1 boundary".to_string()
                } else {
                    format!("x = {:?}", g.minimizer_x)
                };
                let _ = writeln!(s, "gamma_{{{},{}}} <= {:?} ({at})", g.k, g.q, g.gamma_upper);
            }
            Report::Table(t) => {
                let _ = writeln!(s, "| k | n | {} |", t.columns.join(" | "));
                let _ = writeln!(s, "|---|---|{}", "---|".repeat(t.columns.len()));
                for r in &t.rows {
                    let cells: Vec<&str> = t
                        .columns
                        .iter()
                        .map(|c| r.values.get(c).map(String::as_str).unwrap_or("-"))
                        .collect();
                    let _ = writeln!(s, "| {} | {} | {} |", r.k, r.n, cells.join(" | "));
                }
            }
            Report::Validate(v) => {
                let _ = writeln!(
                    s,
                    "{}: {} exact values, {} comparisons, {} violations",
                    v.corpus,
                    v.exact_values,
                    v.comparisons,
                    v.violations.len()
                );
                for x in &v.violations {
                    let _ = writeln!(s, "\n{}({}) = {}: {}", x.quantity, x.group, x.exact, x.kind);
                    if let Some(b) = &x.bound {
                        let _ = writeln!(s, "```json\n{}\n```", b.to_json());
                    }
                }
            }
        }
        s
    }
}

fn strings<const N: usize>(xs: [&str; N]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn assumption_list(b: &BoundValue) -> String {
    b.assumptions.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("; ")
}

fn registry_text(r: &KnownPropertyD) -> String {
    match r {
        KnownPropertyD::KnownTrue(cases) => {
            let labels: Vec<&str> = cases.iter().map(|c| c.label()).collect();
            let noun = if labels.len() == 1 { "case" } else { "cases" };
            format!("{noun} {}", labels.join(", "))
        }
        KnownPropertyD::Unknown => "not covered".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropdReport {
    pub summary: String,
    pub verdict: PropertyDVerdict,
}

impl From<PropertyDVerdict> for PropdReport {
    fn from(verdict: PropertyDVerdict) -> Self {
        let search = match verdict.status {
            VerdictStatus::Holds => "verified",
            VerdictStatus::Fails => "counterexample found",
            VerdictStatus::Unknown => "search incomplete",
        };
        let clash = if verdict.status == VerdictStatus::Fails && verdict.registry.is_known() {
            "; CONTRADICTS REGISTRY"
        } else {
            ""
        };
        PropdReport {
            summary: format!(
                "{:?} (registry: {}; {search}{clash})",
                verdict.status,
                registry_text(&verdict.registry)
            ),
            verdict,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSumReport {
    pub group: String,
    pub target: String,
    pub found: bool,
    /// Witness elements, one per line of the sequence file format.
    pub witness: Vec<String>,
}

impl ZeroSumReport {
    pub fn new(group: &FiniteAbelianGroup, target: LengthSpec, witness: Option<&ZeroSumWitness>) -> Self {
        let target = match target {
            LengthSpec::Exactly(l) => format!("exactly {l}"),
            LengthSpec::AtMost(l) => format!("at most {l}"),
        };
        ZeroSumReport {
            group: group.to_string(),
            target,
            found: witness.is_some(),
            witness: witness
                .map(|w| w.elements().map(|e| e.to_string()).collect())
                .unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub k: u64,
    pub n: u64,
    pub values: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub quantity: Quantity,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
    pub truncated: bool,
}

impl TableReport {
    pub fn build(ks: &[u64], ns: &[u64], quantity: Quantity, tol: f64, max_rows: usize, literal: bool) -> Result<Self> {
        if let Some(&k) = ks.iter().find(|&&k| k < 2) {
            return Err(Error::Domain(format!("k must be at least 2, got {k}")));
        }
        if ns.contains(&0) {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        let mut columns: Vec<String> = match quantity {
            Quantity::S => TABLE_COLUMNS.iter().map(|c| c.to_string()).collect(),
            Quantity::Eta => vec!["rank3-three-five".to_string()],
        };
        if literal && quantity == Quantity::S {
            columns.insert(3, LITERAL_COLUMN.to_string());
        }
        let mut rows = Vec::new();
        let mut truncated = false;
        'outer: for &k in ks {
            for &n in ns {
                if rows.len() == max_rows {
                    truncated = true;
                    break 'outer;
                }
                let mut bounds = homocyclic_bounds(k, n, quantity, tol)?;
                if quantity == Quantity::S {
                    bounds.push(thm_main4_bound(&FiniteAbelianGroup::homocyclic(k, n as usize)?)?);
                }
                let mut values: BTreeMap<String, String> = bounds
                    .into_iter()
                    .filter(|b| b.direction == Direction::Upper && columns.iter().any(|c| c == b.rule_name()))
                    .map(|b| (b.rule_name().to_string(), b.value.to_string()))
                    .collect();
                if literal && quantity == Quantity::S && is_prime(k) {
                    let top = BigRational::new(BigInt::from(n * (2 * k - 1)), BigInt::from(k));
                    let c = generalized_binomial(&top, n)?;
                    values.insert(LITERAL_COLUMN.into(), format!("{:.3}", (k * (k - 1)) as f64 * c + 1.0));
                }
                rows.push(TableRow { k, n, values });
            }
        }
        Ok(TableReport {
            quantity,
            columns,
            rows,
            truncated,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub group: String,
    pub quantity: Quantity,
    pub exact: u64,
    pub kind: String,
    /// The offending bound with its full derivation, when the violation is a bound.
    pub bound: Option<BoundValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub corpus: String,
    pub policy: Policy,
    pub exact_values: usize,
    pub comparisons: usize,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl ValidateReport {
    /// Sandwich every exact cached value between all granted bounds, and re-check that the
    /// cached extremal sequences avoid the required zero sums.
    pub fn check(path: &Path, cache: &Cache, policy: Policy, tol: f64) -> Result<Self> {
        let mut report = ValidateReport {
            corpus: path.display().to_string(),
            policy,
            exact_values: 0,
            comparisons: 0,
            violations: Vec::new(),
            warnings: Vec::new(),
        };
        let values = cache.exact_values()?;
        if values.is_empty() {
            report.warnings.push("corpus holds no exact values; nothing to check".into());
        }
        for (group, quantity, exact) in values {
            report.exact_values += 1;
            let best = best_bounds(&group, quantity, policy, tol)?;
            for l in best.bounds.iter().filter(|l| l.granted) {
                report.comparisons += 1;
                let b = &l.bound;
                let kind = match b.direction {
                    Direction::Lower if b.value > exact.into() => "lower bound exceeds exact value",
                    Direction::Upper if b.value < exact.into() => "upper bound below exact value",
                    _ => continue,
                };
                report.violations.push(Violation {
                    group: group.to_string(),
                    quantity,
                    exact,
                    kind: kind.into(),
                    bound: Some(b.clone()),
                });
            }
            let exp = group.exponent_u64().ok_or_else(|| Error::TooLarge(group.to_string()))?;
            let target = match quantity {
                Quantity::S => LengthSpec::Exactly(exp),
                Quantity::Eta => LengthSpec::AtMost(exp),
            };
            let outcome = cache.get(&group, quantity)?.expect("listed by exact_values");
            for seq in &outcome.extremal_sequences {
                report.comparisons += 1;
                let kind = if seq.len() + 1 != exact {
                    format!("cached extremal sequence {} has length {}", seq.to_compact(), seq.len())
                } else if find_zero_sum(seq, target)?.is_some() {
                    format!("cached extremal sequence {} has a zero sum", seq.to_compact())
                } else {
                    continue;
                };
                report.violations.push(Violation {
                    group: group.to_string(),
                    quantity,
                    exact,
                    kind,
                    bound: None,
                });
            }
        }
        Ok(report)
    }
}

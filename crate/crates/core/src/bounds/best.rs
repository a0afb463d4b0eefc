//! Aggregation of every applicable rule under a Property D policy.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::*;
use crate::arith::{is_power_of_two, is_prime, prime_power};

/// Which Property D assumptions a caller is willing to grant.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    /// Only unconditional bounds count.
    None,
    /// Assumptions covered by the known Property D families.
    #[default]
    RegistryOnly,
    AssumeAll,
}

impl Policy {
    pub fn grants(self, b: &BoundValue) -> bool {
        match self {
            Policy::None => b.assumptions.is_empty(),
            Policy::RegistryOnly => b.assumptions.iter().all(Assumption::granted_by_registry),
            Policy::AssumeAll => true,
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Policy::None => "none",
            Policy::RegistryOnly => "registry-only",
            Policy::AssumeAll => "assume-all",
        })
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Policy::None),
            "registry-only" | "registry" => Ok(Policy::RegistryOnly),
            "assume-all" | "all" => Ok(Policy::AssumeAll),
            other => Err(Error::Domain(format!("unknown policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListedBound {
    /// Whether the policy grants every assumption of this bound.
    pub granted: bool,
    pub bound: BoundValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestBounds {
    pub group: FiniteAbelianGroup,
    pub quantity: Quantity,
    pub policy: Policy,
    pub best_lower: Option<BoundValue>,
    pub best_upper: Option<BoundValue>,
    /// Sorted by rule name, then direction, then value.
    pub bounds: Vec<ListedBound>,
}

fn is_3a5b(k: u64) -> bool {
    let mut r = k;
    for p in [3, 5] {
        while r.is_multiple_of(p) && r > 1 {
            r /= p;
        }
    }
    k > 1 && r == 1
}

/// Every closed-form bound that applies to `(Z_k)^n`, regardless of assumptions.
pub fn homocyclic_bounds(k: u64, n: u64, quantity: Quantity, tol: f64) -> Result<Vec<BoundValue>> {
    if k < 2 || n == 0 {
        return Err(Error::Domain(format!("need k >= 2 and n >= 1, got k = {k}, n = {n}")));
    }
    let odd = k % 2 == 1;
    let mut out = Vec::new();
    match quantity {
        Quantity::S => {
            out.push(harborth_lower(k, n)?);
            out.push(harborth_upper(k, n)?);
            if is_power_of_two(k) {
                let (lo, hi) = harborth_exact_pow2(k, n)?;
                out.extend([lo, hi]);
            }
            if odd {
                out.push(elsholtz_lower(k, n)?);
                out.push(thm_main3_bound(k, n)?);
                if prime_power(k).is_some() {
                    out.push(thm_main2_bound(k, n)?);
                }
            }
            if is_prime(k) {
                out.push(thm_main_bound(k, n)?);
                out.push(cor_mainc1_bound(k, n)?);
                out.push(cor_mainc2_bound(k, n)?);
            }
            out.push(naslund_bound(k, n, tol)?);
        }
        Quantity::Eta => {}
    }
    if odd && n == 3 {
        out.push(rank3_lower(k, quantity)?);
    }
    if odd && n == 4 {
        out.push(rank4_lower(k, quantity)?);
    }
    if n == 3 && is_3a5b(k) {
        out.push(thm_main5_bound(k, quantity)?);
    }
    Ok(out)
}

/// All applicable bounds on `group`, with the best ones the policy allows.
pub fn best_bounds(group: &FiniteAbelianGroup, quantity: Quantity, policy: Policy, tol: f64) -> Result<BestBounds> {
    best_bounds_with_known(group, quantity, policy, tol, &[])
}

/// As [`best_bounds`], adding caller-supplied bounds (e.g. cached exact values) for `group`.
pub fn best_bounds_with_known(
    group: &FiniteAbelianGroup,
    quantity: Quantity,
    policy: Policy,
    tol: f64,
    known: &[BoundValue],
) -> Result<BestBounds> {
    if group.components().is_empty() {
        return Err(Error::Domain("the trivial group has no bounds".into()));
    }
    let mut all: Vec<BoundValue> = known
        .iter()
        .filter(|b| &b.group == group && b.quantity == quantity)
        .cloned()
        .collect();
    if let Some((k, n)) = group.as_homocyclic() {
        all.extend(homocyclic_bounds(k, n as u64, quantity, tol)?);
    }
    if quantity == Quantity::S {
        all.push(thm_main4_bound(group)?);
        if group.as_elementary().is_none() {
            if let Some(c) = primary_composition(group, policy, tol)? {
                all.push(c);
            }
        }
    }
    all.sort_by(|a, b| {
        (a.rule_name(), a.direction, &a.value).cmp(&(b.rule_name(), b.direction, &b.value))
    });
    let bounds: Vec<ListedBound> = all
        .into_iter()
        .map(|bound| ListedBound {
            granted: policy.grants(&bound),
            bound,
        })
        .collect();
    let granted = |d: Direction| bounds.iter().filter(move |l| l.granted && l.bound.direction == d);
    let best_lower = granted(Direction::Lower).max_by(|a, b| a.bound.value.cmp(&b.bound.value)).map(|l| l.bound.clone());
    let best_upper = granted(Direction::Upper).min_by(|a, b| a.bound.value.cmp(&b.bound.value)).map(|l| l.bound.clone());
    Ok(BestBounds {
        group: group.clone(),
        quantity,
        policy,
        best_lower,
        best_upper,
        bounds,
    })
}

/// Primary composition from the best granted upper bound on each `(Z_p)^{n_j}`.
fn primary_composition(group: &FiniteAbelianGroup, policy: Policy, tol: f64) -> Result<Option<BoundValue>> {
    let mut per_prime = BTreeMap::new();
    for c in group.components() {
        let best = homocyclic_bounds(c.prime, c.rank as u64, Quantity::S, tol)?
            .into_iter()
            .filter(|b| b.direction == Direction::Upper && policy.grants(b))
            .min_by(|a, b| a.value.cmp(&b.value));
        match best {
            Some(b) => {
                per_prime.insert(c.prime, b);
            }
            None => return Ok(None),
        }
    }
    compose_primary(group, &per_prime).map(Some)
}

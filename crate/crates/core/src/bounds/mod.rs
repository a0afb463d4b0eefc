//! Certified lower and upper bounds for `s(G)` and `η(G)`.
//!
//! Every bound is a [`BoundValue`]: an exact integer together with the Property D
//! assumptions it depends on and a derivation tree. [`replay`] re-evaluates a tree from its
//! rule parameters and checks it reproduces the stored value and assumption set.

mod best;
mod compose;
mod counting;
mod formulas;
mod gamma;
pub mod real;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::search::{known_property_d, Quantity};

pub use best::{best_bounds, best_bounds_with_known, homocyclic_bounds, BestBounds, ListedBound, Policy};
pub use compose::{compose_primary, compose_subgroup};
pub use counting::{
    count_monomials_box_capped, count_monomials_total, slice_rank_cap, MonomialConstraint, SliceRankCap,
};
pub use formulas::{
    cor_mainc1_base, cor_mainc1_bound, cor_mainc2_bound, elsholtz_lower, generalized_binomial, harborth_exact_pow2,
    harborth_lower, harborth_upper, rank3_lower, rank4_lower, sondow_zudilin, thm_main2_bound, thm_main3_bound,
    thm_main4_bound, thm_main5_bound, thm_main_bound, SondowZudilin,
};
pub use gamma::{
    gamma_objective, naslund_asymptotic_check, naslund_bound, naslund_gamma, GammaResult, DEFAULT_GAMMA_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
        })
    }
}

/// A hypothesis a bound relies on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Assumption {
    /// The group satisfies Property D.
    PropertyD(FiniteAbelianGroup),
}

impl Assumption {
    pub fn granted_by_registry(&self) -> bool {
        match self {
            Assumption::PropertyD(g) => known_property_d(g).is_known(),
        }
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assumption::PropertyD(g) => write!(f, "PropertyD({g})"),
        }
    }
}

/// The rule that produced a bound, with every parameter needed to re-evaluate it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Rule {
    HarborthLower { k: u64, n: u64 },
    HarborthUpper { k: u64, n: u64 },
    HarborthExact { k: u64, n: u64 },
    ElsholtzLower { k: u64, n: u64 },
    Rank3Lower { k: u64 },
    Rank4Lower { k: u64 },
    /// `p(p−1)·C(n + ⌊n(p−1)/p⌋, n) + 1`.
    SliceRankFloor { p: u64, n: u64 },
    /// `⌊(p−1)·B^n⌋ + 1` with the amplified base `B`.
    SliceRankAmplified { p: u64, n: u64 },
    /// `p(p−1)·C(2n, n) + 1`.
    CentralBinomial { p: u64, n: u64 },
    /// `p(q−1)·C(2n, n) + 1` for `q = p^α`.
    PrimePowerLift { p: u64, alpha: u32, n: u64 },
    /// `rad(k)(k−1)·C(2n, n) + 1` for odd `k`.
    OddModulusLift { k: u64, n: u64 },
    /// Strict `exp(G)·(Σ p_j C(2n_j, n_j) + Σ 1/(p_j − 1))`.
    PrimaryCentralBinomial,
    /// `300k − 299` (s) or `299k − 298` (η) on `(Z_k)^3`, `k = 3^α 5^β`.
    Rank3ThreeFive { k: u64 },
    /// `⌊(k−1)·γ^n⌋ + 1` with `γ` an upward-rounded enclosure of `γ_{k,q}`.
    Naslund { k: u64, n: u64, q: u64, gamma_upper: f64 },
    /// `exp(G/H)·(s(H) − 1) + s(G/H)`; children `[H, G/H]`.
    SubgroupComposition { exp_quotient: u64 },
    /// Strict `exp(G)·Σ s(Z_{p_j}^{n_j})/(p_j − 1)`; one child per prime.
    PrimaryComposition,
    /// A value established by exhaustive search.
    ExactSearch {
        #[serde(with = "decimal")]
        value: BigUint,
    },
    /// A value supplied by the caller.
    Given {
        #[serde(with = "decimal")]
        value: BigUint,
    },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::HarborthLower { .. } => "harborth-lower",
            Rule::HarborthUpper { .. } => "harborth-upper",
            Rule::HarborthExact { .. } => "harborth-exact",
            Rule::ElsholtzLower { .. } => "elsholtz-lower",
            Rule::Rank3Lower { .. } => "rank3-lower",
            Rule::Rank4Lower { .. } => "rank4-lower",
            Rule::SliceRankFloor { .. } => "slice-rank-floor",
            Rule::SliceRankAmplified { .. } => "slice-rank-amplified",
            Rule::CentralBinomial { .. } => "central-binomial",
            Rule::PrimePowerLift { .. } => "prime-power-lift",
            Rule::OddModulusLift { .. } => "odd-modulus-lift",
            Rule::PrimaryCentralBinomial => "primary-central-binomial",
            Rule::Rank3ThreeFive { .. } => "rank3-three-five",
            Rule::Naslund { .. } => "naslund",
            Rule::SubgroupComposition { .. } => "subgroup-composition",
            Rule::PrimaryComposition => "primary-composition",
            Rule::ExactSearch { .. } => "exact-search",
            Rule::Given { .. } => "given",
        }
    }

    /// Literature source of the underlying inequality.
    pub fn citation(&self) -> &'static str {
        match self {
            Rule::HarborthLower { .. } | Rule::HarborthUpper { .. } => "Harborth [H]",
            Rule::HarborthExact { .. } => "Harborth [H], k a power of 2",
            Rule::ElsholtzLower { .. } => "Elsholtz [E]",
            Rule::Rank3Lower { .. } | Rule::Rank4Lower { .. } => "Edel-Elsholtz-Geroldinger-Kubertin-Rackham [EEGKR]",
            Rule::SliceRankFloor { .. } => "slice-rank monomial count under Property D",
            Rule::SliceRankAmplified { .. } => "slice-rank count, Sondow-Zudilin [SZ] and tensor-power amplification",
            Rule::CentralBinomial { .. } => "slice-rank count relaxed to C(2n, n)",
            Rule::PrimePowerLift { .. } => "central-binomial bound lifted along Z_p^n <= Z_q^n via [CDGGS]",
            Rule::OddModulusLift { .. } => "central-binomial bounds lifted prime by prime via [CDGGS]",
            Rule::PrimaryCentralBinomial => "central-binomial bounds combined via [FS]",
            Rule::Rank3ThreeFive { .. } => "odd-modulus lift at n = 3 with Property D of Z_3^3, Z_5^3 [GHST, GT]",
            Rule::Naslund { .. } => "Naslund [N]",
            Rule::SubgroupComposition { .. } => "[CDGGS]",
            Rule::PrimaryComposition => "[FS]",
            Rule::ExactSearch { .. } => "exhaustive search",
            Rule::Given { .. } => "caller supplied",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Derivation {
    #[serde(flatten)]
    pub rule: Rule,
    pub citation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Inputs of a composition rule, or the proof chain a closed form was derived from.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<BoundValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub quantity: Quantity,
    pub group: FiniteAbelianGroup,
    pub direction: Direction,
    #[serde(with = "decimal")]
    pub value: BigUint,
    pub assumptions: BTreeSet<Assumption>,
    pub derivation: Derivation,
}

impl BoundValue {
    pub(crate) fn new(
        quantity: Quantity,
        group: FiniteAbelianGroup,
        direction: Direction,
        value: BigUint,
        rule: Rule,
    ) -> Self {
        BoundValue {
            quantity,
            group,
            direction,
            value,
            assumptions: BTreeSet::new(),
            derivation: Derivation {
                citation: rule.citation().to_string(),
                rule,
                note: None,
                children: Vec::new(),
            },
        }
    }

    pub(crate) fn assuming(mut self, a: impl IntoIterator<Item = Assumption>) -> Self {
        self.assumptions.extend(a);
        self
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.derivation.note = Some(note.into());
        self
    }

    pub(crate) fn with_children(mut self, children: Vec<BoundValue>) -> Self {
        self.derivation.children = children;
        self
    }

    pub fn rule_name(&self) -> &'static str {
        self.derivation.rule.name()
    }

    /// A bound established by exhaustive search (no assumptions).
    pub fn exact_search(quantity: Quantity, group: FiniteAbelianGroup, direction: Direction, value: u64) -> Self {
        BoundValue::new(
            quantity,
            group,
            direction,
            BigUint::from(value),
            Rule::ExactSearch {
                value: BigUint::from(value),
            },
        )
    }

    /// A caller-asserted value, e.g. to feed a composition rule.
    pub fn given(
        quantity: Quantity,
        group: FiniteAbelianGroup,
        direction: Direction,
        value: u64,
        assumptions: impl IntoIterator<Item = Assumption>,
    ) -> Self {
        BoundValue::new(
            quantity,
            group,
            direction,
            BigUint::from(value),
            Rule::Given {
                value: BigUint::from(value),
            },
        )
        .assuming(assumptions)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bound serializes")
    }
}

/// Property D of `(Z_p)^n`.
pub(crate) fn propd(p: u64, n: u64) -> Assumption {
    Assumption::PropertyD(homocyclic(p, n))
}

pub(crate) fn homocyclic(k: u64, n: u64) -> FiniteAbelianGroup {
    FiniteAbelianGroup::homocyclic(k, n as usize).expect("k ≥ 2 and n ≥ 1 are checked by callers")
}

/// Re-evaluate a derivation tree and check that it reproduces every stored value and
/// assumption set.
pub fn replay(b: &BoundValue) -> Result<()> {
    let mismatch = |stored: String, recomputed: String| Error::Replay {
        rule: b.rule_name().to_string(),
        stored,
        recomputed,
    };
    for child in &b.derivation.children {
        replay(child)?;
    }
    let fresh = recompute(b)?;
    if fresh.value != b.value {
        return Err(mismatch(b.value.to_string(), fresh.value.to_string()));
    }
    if fresh.assumptions != b.assumptions {
        let show = |s: &BTreeSet<Assumption>| s.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ");
        return Err(mismatch(show(&b.assumptions), show(&fresh.assumptions)));
    }
    if fresh.direction != b.direction {
        return Err(mismatch(b.direction.to_string(), fresh.direction.to_string()));
    }
    // proof-chain children of a closed form must certify something at least as strong
    if !is_composition(&b.derivation.rule) {
        for child in &b.derivation.children {
            let ok = match b.direction {
                Direction::Upper => child.value <= b.value,
                Direction::Lower => child.value >= b.value,
            };
            if !ok {
                return Err(mismatch(b.value.to_string(), format!("proof chain gives {}", child.value)));
            }
        }
    }
    Ok(())
}

fn is_composition(rule: &Rule) -> bool {
    matches!(rule, Rule::SubgroupComposition { .. } | Rule::PrimaryComposition)
}

/// Evaluate `b`'s rule from scratch (using child values only for composition rules).
fn recompute(b: &BoundValue) -> Result<BoundValue> {
    let q = b.quantity;
    Ok(match &b.derivation.rule {
        Rule::HarborthLower { k, n } => harborth_lower(*k, *n)?,
        Rule::HarborthUpper { k, n } => harborth_upper(*k, *n)?,
        Rule::HarborthExact { k, n } => {
            let (lo, hi) = harborth_exact_pow2(*k, *n)?;
            match b.direction {
                Direction::Lower => lo,
                Direction::Upper => hi,
            }
        }
        Rule::ElsholtzLower { k, n } => elsholtz_lower(*k, *n)?,
        Rule::Rank3Lower { k } => rank3_lower(*k, q)?,
        Rule::Rank4Lower { k } => rank4_lower(*k, q)?,
        Rule::SliceRankFloor { p, n } => thm_main_bound(*p, *n)?,
        Rule::SliceRankAmplified { p, n } => cor_mainc1_bound(*p, *n)?,
        Rule::CentralBinomial { p, n } => cor_mainc2_bound(*p, *n)?,
        Rule::PrimePowerLift { p, alpha, n } => thm_main2_bound(p.pow(*alpha), *n)?,
        Rule::OddModulusLift { k, n } => thm_main3_bound(*k, *n)?,
        Rule::PrimaryCentralBinomial => thm_main4_bound(&b.group)?,
        Rule::Rank3ThreeFive { k } => thm_main5_bound(*k, q)?,
        Rule::Naslund { k, n, q, gamma_upper } => gamma::naslund_replay(*k, *n, *q, *gamma_upper)?,
        Rule::SubgroupComposition { exp_quotient } => match b.derivation.children.as_slice() {
            [h, quotient] => compose_subgroup(h, quotient, *exp_quotient, b.group.clone())?,
            _ => return Err(Error::IncompleteInput("subgroup composition needs two children".into())),
        },
        Rule::PrimaryComposition => {
            let per_prime = b
                .derivation
                .children
                .iter()
                .map(|c| {
                    let p = c.group.components().first().map(|comp| comp.prime).unwrap_or(0);
                    (p, c.clone())
                })
                .collect();
            compose_primary(&b.group, &per_prime)?
        }
        Rule::ExactSearch { value } | Rule::Given { value } => {
            let mut same = b.clone();
            same.value = value.clone();
            same
        }
    })
}

/// Serde helper: big integers as decimal strings.
pub(crate) mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

//! Property D: every sequence over `(Z_k)^n` of length `s − 1` without a zero-sum
//! subsequence of length `k` is `T^{k−1}` for a set `T`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, prime_power};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::search::{exact_s, Cache, Quantity, SearchBudget, SearchOutcome, SearchStatus};
use crate::sequence::Sequence;

/// The published families of groups known to have Property D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PropertyDCase {
    /// `k = 2^α`, any `n`.
    I,
    /// `k = 3`, any `n`.
    Ii,
    /// `n = 1`, any `k`.
    Iii,
    /// `n = 2`, no prime factor of `k` exceeds 7.
    Iv,
    /// `n = 3`, `k = 5^α`.
    V,
    /// `n = 3`, `k = 3^α`.
    Vi,
}

impl PropertyDCase {
    pub const ALL: [PropertyDCase; 6] = [
        PropertyDCase::I,
        PropertyDCase::Ii,
        PropertyDCase::Iii,
        PropertyDCase::Iv,
        PropertyDCase::V,
        PropertyDCase::Vi,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PropertyDCase::I => "i",
            PropertyDCase::Ii => "ii",
            PropertyDCase::Iii => "iii",
            PropertyDCase::Iv => "iv",
            PropertyDCase::V => "v",
            PropertyDCase::Vi => "vi",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            PropertyDCase::I => "k = 2^a, any n",
            PropertyDCase::Ii => "k = 3, any n [H]",
            PropertyDCase::Iii => "n = 1, any k",
            PropertyDCase::Iv => "n = 2, k without prime factors > 7 [ST]",
            PropertyDCase::V => "n = 3, k = 5^a [GHST]",
            PropertyDCase::Vi => "n = 3, k = 3^a [GT]",
        }
    }

    fn applies(self, k: u64, n: usize) -> bool {
        let base = prime_power(k).map(|(p, _)| p);
        match self {
            PropertyDCase::I => base == Some(2),
            PropertyDCase::Ii => k == 3,
            PropertyDCase::Iii => n == 1,
            PropertyDCase::Iv => n == 2 && factorize(k).iter().all(|&(p, _)| p <= 7),
            PropertyDCase::V => n == 3 && base == Some(5),
            PropertyDCase::Vi => n == 3 && base == Some(3),
        }
    }
}

impl fmt::Display for PropertyDCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case {}", self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum KnownPropertyD {
    /// Every matching registry case.
    KnownTrue(Vec<PropertyDCase>),
    Unknown,
}

impl KnownPropertyD {
    pub fn is_known(&self) -> bool {
        matches!(self, KnownPropertyD::KnownTrue(_))
    }
}

/// Registry lookup: non-homocyclic groups are always `Unknown`.
pub fn known_property_d(group: &FiniteAbelianGroup) -> KnownPropertyD {
    let Some((k, n)) = group.as_homocyclic() else {
        return KnownPropertyD::Unknown;
    };
    let cases: Vec<PropertyDCase> = PropertyDCase::ALL
        .into_iter()
        .filter(|c| c.applies(k, n))
        .collect();
    if cases.is_empty() {
        KnownPropertyD::Unknown
    } else {
        KnownPropertyD::KnownTrue(cases)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictStatus {
    Holds,
    Fails,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyDVerdict {
    pub group: FiniteAbelianGroup,
    pub status: VerdictStatus,
    /// `s(G)` when the search completed.
    pub s_value: Option<u64>,
    /// All extremal sequences up to symmetry (when `Holds`, or up to the failure).
    pub extremal_sequences: Vec<Sequence>,
    pub counterexample: Option<Sequence>,
    pub symmetry: String,
    pub registry: KnownPropertyD,
}

/// Decide Property D for `(Z_k)^n` by exhaustive enumeration.
pub fn check_property_d(group: &FiniteAbelianGroup, budget: SearchBudget) -> Result<PropertyDVerdict> {
    check_property_d_cached(group, budget, &mut Cache::default())
}

/// As [`check_property_d`], reusing (and filling) an exact `s` search from `cache`.
pub fn check_property_d_cached(
    group: &FiniteAbelianGroup,
    budget: SearchBudget,
    cache: &mut Cache,
) -> Result<PropertyDVerdict> {
    let (k, _) = group
        .as_homocyclic()
        .ok_or_else(|| Error::NotHomocyclic(group.to_string()))?;
    let outcome = match cache.get_exact(group, Quantity::S)? {
        Some(o) => o,
        None => {
            let o = exact_s(group, budget)?;
            cache.insert(&o);
            o
        }
    };
    Ok(verdict_from_outcome(group, k, outcome))
}

fn verdict_from_outcome(group: &FiniteAbelianGroup, k: u64, outcome: SearchOutcome) -> PropertyDVerdict {
    let registry = known_property_d(group);
    if outcome.status != SearchStatus::Exact {
        return PropertyDVerdict {
            group: group.clone(),
            status: VerdictStatus::Unknown,
            s_value: None,
            extremal_sequences: Vec::new(),
            counterexample: None,
            symmetry: outcome.symmetry,
            registry,
        };
    }
    let counterexample = outcome
        .extremal_sequences
        .iter()
        .find(|s| !s.is_set_power(k - 1))
        .cloned();
    PropertyDVerdict {
        group: group.clone(),
        status: if counterexample.is_some() {
            VerdictStatus::Fails
        } else {
            VerdictStatus::Holds
        },
        s_value: Some(outcome.value),
        extremal_sequences: outcome.extremal_sequences,
        counterexample,
        symmetry: outcome.symmetry,
        registry,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::find_zero_sum;
    use crate::sequence::LengthSpec;

    fn grp(spec: &str) -> FiniteAbelianGroup {
        spec.parse().unwrap()
    }

    #[test]
    fn registry_examples() {
        use PropertyDCase::*;
        assert_eq!(known_property_d(&grp("Z8^5")), KnownPropertyD::KnownTrue(vec![I]));
        assert_eq!(known_property_d(&grp("Z25^3")), KnownPropertyD::KnownTrue(vec![V]));
        assert_eq!(known_property_d(&grp("Z7^4")), KnownPropertyD::Unknown);
        assert_eq!(known_property_d(&grp("Z3")), KnownPropertyD::KnownTrue(vec![Ii, Iii]));
        assert_eq!(known_property_d(&grp("Z4")), KnownPropertyD::KnownTrue(vec![I, Iii]));
        assert_eq!(known_property_d(&grp("Z7^2")), KnownPropertyD::KnownTrue(vec![Iv]));
        assert_eq!(known_property_d(&grp("Z210^2")), KnownPropertyD::KnownTrue(vec![Iv]));
        assert_eq!(known_property_d(&grp("Z11^2")), KnownPropertyD::Unknown);
        assert_eq!(known_property_d(&grp("Z27^3")), KnownPropertyD::KnownTrue(vec![Vi]));
        assert_eq!(known_property_d(&grp("Z15^3")), KnownPropertyD::Unknown);
        assert_eq!(known_property_d(&grp("Z4xZ2")), KnownPropertyD::Unknown);
    }

    #[test]
    fn small_groups_hold() {
        for spec in ["Z2", "Z3", "Z4", "Z5", "Z2^2", "Z3^2"] {
            let v = check_property_d(&grp(spec), SearchBudget::default()).unwrap();
            assert_eq!(v.status, VerdictStatus::Holds, "{spec}");
            assert!(!v.extremal_sequences.is_empty());
        }
    }

    #[test]
    fn rejects_non_homocyclic() {
        assert!(matches!(
            check_property_d(&grp("Z4xZ2"), SearchBudget::default()),
            Err(Error::NotHomocyclic(_))
        ));
    }

    #[test]
    fn exhausted_budget_is_unknown() {
        let v = check_property_d(&grp("Z7^2"), SearchBudget::nodes(50)).unwrap();
        assert_eq!(v.status, VerdictStatus::Unknown);
        assert!(v.registry.is_known());
    }

    #[test]
    fn fails_verdict_carries_a_valid_counterexample() {
        // Planted outcome: an extremal list containing a non-T^{k-1} sequence.
        let g = grp("Z3");
        let bad = Sequence::from_coords(g.clone(), &[&[0], &[0], &[1], &[2]]).unwrap();
        let outcome = SearchOutcome {
            group: g.clone(),
            quantity: Quantity::S,
            status: SearchStatus::Exact,
            value: 5,
            extremal_example: Some(bad.clone()),
            extremal_sequences: vec![bad.clone()],
            symmetry: String::new(),
            nodes_explored: 0,
            elapsed: Default::default(),
        };
        let v = verdict_from_outcome(&g, 3, outcome);
        assert_eq!(v.status, VerdictStatus::Fails);
        assert_eq!(v.counterexample, Some(bad));
    }

    #[test]
    fn cache_is_reused() {
        let g = grp("Z3^2");
        let mut cache = Cache::default();
        let first = check_property_d_cached(&g, SearchBudget::default(), &mut cache).unwrap();
        // a one-node budget would be hopeless without the cached search
        let again = check_property_d_cached(&g, SearchBudget::nodes(1), &mut cache).unwrap();
        assert_eq!(first.status, VerdictStatus::Holds);
        assert_eq!(again.status, VerdictStatus::Holds);
        for s in &again.extremal_sequences {
            assert!(find_zero_sum(s, LengthSpec::Exactly(3)).unwrap().is_none());
        }
    }
}

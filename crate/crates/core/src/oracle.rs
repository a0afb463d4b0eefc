//! Naive reference implementations.
//!
//! Nothing here shares code with the optimized paths beyond group element arithmetic: no
//! dynamic programming, no symmetry, no incremental state. Each routine refuses inputs past
//! a fixed size so that refusals are a deterministic function of the input.

use std::collections::BTreeMap;

use crate::bounds::MonomialConstraint;
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::sequence::{LengthSpec, Sequence, ZeroSumWitness};

pub const ORACLE_MAX_SEQUENCE: u64 = 24;
pub const ORACLE_MAX_GROUP: u64 = 9;
pub const ORACLE_MAX_EXTREMAL: u64 = 10;
pub const ORACLE_MAX_MONOMIAL_SPACE: u128 = 10_000_000;

/// Enumerate every sub-multiset and return the first zero-sum one of admissible length.
pub fn oracle_find_zero_sum(seq: &Sequence, target: LengthSpec) -> Result<Option<ZeroSumWitness>> {
    if seq.len() > ORACLE_MAX_SEQUENCE {
        return Err(Error::OracleScale(format!(
            "sequence length {} exceeds {}",
            seq.len(),
            ORACLE_MAX_SEQUENCE
        )));
    }
    if target.bound() == 0 {
        return Err(Error::InvalidTarget("target length must be at least 1".into()));
    }
    let group = seq.group();
    let distinct: Vec<(&GroupElement, u64)> = seq.multiplicities().iter().map(|(e, &m)| (e, m)).collect();
    let mut choice = vec![0u64; distinct.len()];
    loop {
        let len: u64 = choice.iter().sum();
        if target.admits(len) {
            let mut acc = group.zero();
            for (&(e, _), &c) in distinct.iter().zip(&choice) {
                for _ in 0..c {
                    acc = group.add(&acc, e)?;
                }
            }
            if acc == group.zero() {
                let sub: BTreeMap<GroupElement, u64> = distinct
                    .iter()
                    .zip(&choice)
                    .filter(|(_, &c)| c > 0)
                    .map(|(&(e, _), &c)| (e.clone(), c))
                    .collect();
                return Ok(Some(ZeroSumWitness {
                    sub_multiplicities: sub,
                    length: len,
                }));
            }
        }
        // odometer over 0..=multiplicity
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(None);
            }
            if choice[i] < distinct[i].1 {
                choice[i] += 1;
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

pub fn oracle_exact_s(group: &FiniteAbelianGroup) -> Result<u64> {
    oracle_exact(group, false)
}

pub fn oracle_exact_eta(group: &FiniteAbelianGroup) -> Result<u64> {
    oracle_exact(group, true)
}

/// Smallest `ℓ` such that every multiset of size `ℓ` contains the required zero-sum.
fn oracle_exact(group: &FiniteAbelianGroup, eta: bool) -> Result<u64> {
    let order = group
        .order_u64()
        .filter(|&n| n <= ORACLE_MAX_GROUP)
        .ok_or_else(|| Error::OracleScale(format!("|{group}| exceeds {ORACLE_MAX_GROUP}")))?;
    let k = group.exponent_u64().expect("small group");
    let target = if eta { LengthSpec::AtMost(k) } else { LengthSpec::Exactly(k) };
    let elements: Vec<GroupElement> = group.enumerate_elements().collect();
    for len in 1..=ORACLE_MAX_EXTREMAL + 1 {
        let mut all_have = true;
        for_each_multiset(order as usize, len as usize, &mut |idx: &[usize]| {
            if !all_have {
                return;
            }
            let s = Sequence::from_elements(group.clone(), idx.iter().map(|&i| elements[i].clone()))
                .expect("group elements");
            if oracle_find_zero_sum(&s, target).expect("within oracle scale").is_none() {
                all_have = false;
            }
        });
        if all_have {
            return Ok(len);
        }
    }
    Err(Error::OracleScale(format!(
        "extremal length for {group} exceeds {ORACLE_MAX_EXTREMAL}"
    )))
}

/// Calls `f` on every nondecreasing index vector of length `len` over `0..n`.
fn for_each_multiset(n: usize, len: usize, f: &mut dyn FnMut(&[usize])) {
    let mut idx = vec![0usize; len];
    loop {
        f(&idx);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] + 1 < n {
                let v = idx[i] + 1;
                for slot in idx[i..].iter_mut() {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// Count `α ∈ {0..d_max}^n` with `Σ α ≤ total_cap` by visiting every vector.
pub fn oracle_count_monomials(c: &MonomialConstraint) -> Result<u64> {
    let space = (c.per_var_cap as u128 + 1).checked_pow(c.n_vars as u32);
    if space.is_none_or(|s| s > ORACLE_MAX_MONOMIAL_SPACE) {
        return Err(Error::OracleScale(format!(
            "({}+1)^{} exceeds {ORACLE_MAX_MONOMIAL_SPACE}",
            c.per_var_cap, c.n_vars
        )));
    }
    let mut alpha = vec![0u64; c.n_vars];
    let mut count = 0u64;
    loop {
        if alpha.iter().sum::<u64>() <= c.total_cap {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == alpha.len() {
                return Ok(count);
            }
            if alpha[i] < c.per_var_cap {
                alpha[i] += 1;
                break;
            }
            alpha[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(spec: &str, elems: &[&[u64]]) -> Sequence {
        Sequence::from_coords(spec.parse().unwrap(), elems).unwrap()
    }

    #[test]
    fn zero_sum_examples() {
        let s = seq("Z3", &[&[1], &[1], &[1]]);
        assert!(oracle_find_zero_sum(&s, LengthSpec::Exactly(3)).unwrap().is_some());
        let s = seq("Z4", &[&[1], &[2]]);
        assert!(oracle_find_zero_sum(&s, LengthSpec::AtMost(4)).unwrap().is_none());
        let s = seq("Z4", &[&[2], &[2]]);
        let w = oracle_find_zero_sum(&s, LengthSpec::AtMost(4)).unwrap().unwrap();
        assert_eq!(w.length, 2);
        assert!(w.verify(&s, LengthSpec::AtMost(4)));
    }

    #[test]
    fn exact_examples() {
        assert_eq!(oracle_exact_s(&"Z2".parse().unwrap()).unwrap(), 3);
        assert_eq!(oracle_exact_s(&"Z3".parse().unwrap()).unwrap(), 5);
        assert_eq!(oracle_exact_eta(&"Z3".parse().unwrap()).unwrap(), 3);
        assert_eq!(oracle_exact_eta(&"Z2^2".parse().unwrap()).unwrap(), 4);
    }

    #[test]
    fn monomial_examples() {
        let c = |n, d, cap| MonomialConstraint::new(n, d, cap).unwrap();
        assert_eq!(oracle_count_monomials(&c(3, 2, 2)).unwrap(), 10);
        assert_eq!(oracle_count_monomials(&c(2, 1, 2)).unwrap(), 4);
        assert_eq!(oracle_count_monomials(&c(1, 0, 5)).unwrap(), 1);
    }

    #[test]
    fn refusals_depend_only_on_size() {
        let g: FiniteAbelianGroup = "Z2".parse().unwrap();
        let mut s = Sequence::new(g.clone());
        s.push(g.zero(), 25).unwrap();
        assert!(matches!(oracle_find_zero_sum(&s, LengthSpec::Exactly(2)), Err(Error::OracleScale(_))));
        assert!(matches!(oracle_exact_s(&"Z10".parse().unwrap()), Err(Error::OracleScale(_))));
        assert!(matches!(oracle_exact_s(&"Z2^4".parse().unwrap()), Err(Error::OracleScale(_))));
        let big = MonomialConstraint::new(8, 9, 3).unwrap();
        assert!(matches!(oracle_count_monomials(&big), Err(Error::OracleScale(_))));
    }
}

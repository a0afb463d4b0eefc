//! Composition of upper bounds along a subgroup or the primary decomposition.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use super::formulas::strict_floor;
use super::{homocyclic, BoundValue, Direction, Rule};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::search::Quantity;

fn require_upper_s(b: &BoundValue) -> Result<()> {
    if b.direction != Direction::Upper {
        return Err(Error::Direction(format!("composition needs upper bounds, got a lower bound on {}", b.group)));
    }
    if b.quantity != Quantity::S {
        return Err(Error::Domain("composition rules apply to s only".into()));
    }
    Ok(())
}

/// `exp(G/H)·(s(H) − 1) + s(G/H)` as an upper bound on `s(target)`.
///
/// The caller vouches that `target` has a subgroup isomorphic to `h.group` with quotient
/// `q.group` and `exp(target) = exp(H)·exp(G/H)`.
pub fn compose_subgroup(
    h: &BoundValue,
    q: &BoundValue,
    exp_quotient: u64,
    target: FiniteAbelianGroup,
) -> Result<BoundValue> {
    require_upper_s(h)?;
    require_upper_s(q)?;
    if exp_quotient == 0 {
        return Err(Error::Domain("exp(G/H) must be positive".into()));
    }
    if h.value.is_zero() {
        return Err(Error::Domain("s(H) is at least 1".into()));
    }
    let v = exp_quotient * (&h.value - 1u32) + &q.value;
    let assumptions: Vec<_> = h.assumptions.iter().chain(&q.assumptions).cloned().collect();
    Ok(
        BoundValue::new(Quantity::S, target, Direction::Upper, v, Rule::SubgroupComposition { exp_quotient })
            .assuming(assumptions)
            .with_children(vec![h.clone(), q.clone()]),
    )
}

/// Strict `s(G) < exp(G)·Σ_j s((Z_{p_j})^{n_j})/(p_j − 1)`, integerized.
pub fn compose_primary(group: &FiniteAbelianGroup, per_prime: &BTreeMap<u64, BoundValue>) -> Result<BoundValue> {
    if group.components().is_empty() {
        return Err(Error::Domain("the trivial group has no primary components".into()));
    }
    let mut sum = BigRational::zero();
    let mut children = Vec::new();
    for c in group.components() {
        let b = per_prime
            .get(&c.prime)
            .ok_or_else(|| Error::IncompleteInput(format!("no bound for the {}-part of {group}", c.prime)))?;
        require_upper_s(b)?;
        let expected = homocyclic(c.prime, c.rank as u64);
        if b.group != expected {
            return Err(Error::IncompleteInput(format!(
                "the {}-part of {group} needs a bound on {expected}, got {}",
                c.prime, b.group
            )));
        }
        sum += BigRational::new(BigInt::from(b.value.clone()), BigInt::from(c.prime - 1));
        children.push(b.clone());
    }
    let x = sum * BigRational::from(BigInt::from(group.exponent().clone()));
    let v: BigUint = strict_floor(&x);
    let assumptions: Vec<_> = children.iter().flat_map(|c| c.assumptions.iter().cloned()).collect();
    Ok(
        BoundValue::new(Quantity::S, group.clone(), Direction::Upper, v, Rule::PrimaryComposition)
            .assuming(assumptions)
            .with_children(children),
    )
}

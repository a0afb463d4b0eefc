//! Monomial counts behind the slice-rank cap.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, is_prime};
use crate::error::{Error, Result};

/// Exponent vectors `(α_1, …, α_n)` with `0 ≤ α_i ≤ per_var_cap` and `Σ α_i ≤ total_cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialConstraint {
    pub n_vars: usize,
    pub per_var_cap: u64,
    pub total_cap: u64,
}

impl MonomialConstraint {
    pub fn new(n_vars: usize, per_var_cap: u64, total_cap: u64) -> Result<Self> {
        if n_vars == 0 {
            return Err(Error::Domain("a monomial constraint needs at least one variable".into()));
        }
        Ok(MonomialConstraint {
            n_vars,
            per_var_cap,
            total_cap,
        })
    }
}

/// Monomials of total degree at most `k` in `n` variables: `C(n + k, n)`.
pub fn count_monomials_total(n: u64, k: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    Ok(binomial(n + k, n))
}

/// Exact count for a box-capped constraint, by dynamic programming over the running total.
pub fn count_monomials_box_capped(c: &MonomialConstraint) -> BigUint {
    // a variable can never usefully exceed the total cap
    let d = c.per_var_cap.min(c.total_cap) as usize;
    let cap = c.total_cap as usize;
    // ways[t] = vectors over the variables seen so far with sum exactly t
    let mut ways = vec![BigUint::zero(); cap + 1];
    ways[0] = BigUint::from(1u32);
    for _ in 0..c.n_vars {
        // sliding window sum of the previous row over the last d + 1 totals
        let mut next = vec![BigUint::zero(); cap + 1];
        let mut window = BigUint::zero();
        for t in 0..=cap {
            window += &ways[t];
            if t > d {
                window -= &ways[t - d - 1];
            }
            next[t] = window.clone();
        }
        ways = next;
    }
    ways.into_iter().sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceRankCap {
    pub p: u64,
    pub n: u64,
    /// `⌊n(p−1)/p⌋`.
    pub total_cap: u64,
    /// Box-capped monomial count.
    pub exact_count: BigUint,
    /// `p · exact_count`.
    pub cap: BigUint,
    /// The looser `p · C(n + ⌊n(p−1)/p⌋, n)`.
    pub binomial_form: BigUint,
}

/// Size cap on a subset of `(Z_p)^n` without three-term zero-sum patterns.
pub fn slice_rank_cap(p: u64, n: u64) -> Result<SliceRankCap> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let total_cap = n * (p - 1) / p;
    let c = MonomialConstraint::new(n as usize, p - 1, total_cap)?;
    let exact_count = count_monomials_box_capped(&c);
    Ok(SliceRankCap {
        p,
        n,
        total_cap,
        cap: &exact_count * p,
        exact_count,
        binomial_form: binomial(n + total_cap, n) * p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn boxed(n: usize, d: u64, cap: u64) -> BigUint {
        count_monomials_box_capped(&MonomialConstraint::new(n, d, cap).unwrap())
    }

    #[test]
    fn totals() {
        assert_eq!(count_monomials_total(1, 5).unwrap(), BigUint::from(6u32));
        assert_eq!(count_monomials_total(3, 5).unwrap(), BigUint::from(56u32));
        assert_eq!(count_monomials_total(2, 0).unwrap(), BigUint::from(1u32));
        assert!(count_monomials_total(0, 3).is_err());
    }

    #[test]
    fn box_capped() {
        assert_eq!(boxed(2, 2, 2), BigUint::from(6u32));
        assert_eq!(boxed(1, 4, 0), BigUint::from(1u32));
        assert_eq!(boxed(2, 1, 1), BigUint::from(3u32));
        // 0/1 vectors of length 4 with at most two ones
        assert_eq!(boxed(4, 1, 2), BigUint::from(11u32));
        assert!(MonomialConstraint::new(0, 1, 1).is_err());
    }

    #[test]
    fn slice_rank_examples() {
        let c = slice_rank_cap(3, 3).unwrap();
        assert_eq!((c.total_cap, c.exact_count.clone(), c.cap.clone()), (2, BigUint::from(10u32), BigUint::from(30u32)));
        let c = slice_rank_cap(2, 2).unwrap();
        assert_eq!((c.exact_count.clone(), c.cap.clone()), (BigUint::from(3u32), BigUint::from(6u32)));
        assert!(matches!(slice_rank_cap(4, 2), Err(Error::InvalidPrime(4))));
    }

    proptest! {
        #[test]
        fn box_cap_versus_total(n in 1usize..8, d in 0u64..8, cap in 0u64..14) {
            let b = boxed(n, d, cap);
            let t = count_monomials_total(n as u64, cap).unwrap();
            prop_assert!(b <= t);
            if d >= cap {
                prop_assert_eq!(b, t);
            }
        }
    }
}

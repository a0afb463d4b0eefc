//! Closed-form bounds on homocyclic and general groups.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rug::float::Round;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use super::real::{stable_floor, Interval};
use super::{compose_primary, compose_subgroup, homocyclic, propd, BoundValue, Direction, Rule};
use crate::arith::{binomial, factorize, is_power_of_two, is_prime, pow_big, prime_power, radical};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::search::Quantity;

fn check_kn(k: u64, n: u64) -> Result<()> {
    if k < 2 {
        return Err(Error::Domain(format!("k must be at least 2, got {k}")));
    }
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    Ok(())
}

fn check_odd(k: u64) -> Result<()> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::Domain(format!("k must be odd and at least 3, got {k}")));
    }
    Ok(())
}

fn check_prime(p: u64, n: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    check_kn(p, n)
}

fn upper_s(k: u64, n: u64, value: BigUint, rule: Rule) -> BoundValue {
    BoundValue::new(Quantity::S, homocyclic(k, n), Direction::Upper, value, rule)
}

pub fn harborth_lower(k: u64, n: u64) -> Result<BoundValue> {
    check_kn(k, n)?;
    let v = (k - 1) * pow_big(2, n) + 1u32;
    Ok(BoundValue::new(Quantity::S, homocyclic(k, n), Direction::Lower, v, Rule::HarborthLower { k, n }))
}

pub fn harborth_upper(k: u64, n: u64) -> Result<BoundValue> {
    check_kn(k, n)?;
    let v = (k - 1) * pow_big(k, n) + 1u32;
    Ok(upper_s(k, n, v, Rule::HarborthUpper { k, n }))
}

/// Matching lower and upper bounds `(k−1)2^n + 1` for `k` a power of two.
pub fn harborth_exact_pow2(k: u64, n: u64) -> Result<(BoundValue, BoundValue)> {
    check_kn(k, n)?;
    if !is_power_of_two(k) {
        return Err(Error::Domain(format!("{k} is not a power of two")));
    }
    let v = (k - 1) * pow_big(2, n) + 1u32;
    let rule = Rule::HarborthExact { k, n };
    let lo = BoundValue::new(Quantity::S, homocyclic(k, n), Direction::Lower, v.clone(), rule.clone());
    Ok((lo, upper_s(k, n, v, rule)))
}

/// `⌈(9/8)^⌊n/3⌋ (k−1) 2^n⌉ + 1`.
pub fn elsholtz_lower(k: u64, n: u64) -> Result<BoundValue> {
    check_kn(k, n)?;
    check_odd(k)?;
    let e = n / 3;
    let x = BigRational::new(
        BigInt::from(pow_big(9, e) * (k - 1) * pow_big(2, n)),
        BigInt::from(pow_big(8, e)),
    );
    let v = x.ceil().to_integer().to_biguint().expect("positive") + 1u32;
    Ok(BoundValue::new(Quantity::S, homocyclic(k, n), Direction::Lower, v, Rule::ElsholtzLower { k, n }))
}

pub fn rank3_lower(k: u64, quantity: Quantity) -> Result<BoundValue> {
    check_odd(k)?;
    let v = match quantity {
        Quantity::S => 9 * k - 8,
        Quantity::Eta => 8 * k - 7,
    };
    Ok(BoundValue::new(quantity, homocyclic(k, 3), Direction::Lower, v.into(), Rule::Rank3Lower { k }))
}

pub fn rank4_lower(k: u64, quantity: Quantity) -> Result<BoundValue> {
    check_odd(k)?;
    let v = match quantity {
        Quantity::S => 20 * k - 19,
        Quantity::Eta => 19 * k - 18,
    };
    Ok(BoundValue::new(quantity, homocyclic(k, 4), Direction::Lower, v.into(), Rule::Rank4Lower { k }))
}

/// `p(p−1)·C(n + ⌊n(p−1)/p⌋, n) + 1`.
pub fn thm_main_bound(p: u64, n: u64) -> Result<BoundValue> {
    check_prime(p, n)?;
    let top = n + n * (p - 1) / p;
    let v = p * (p - 1) * binomial(top, n) + 1u32;
    Ok(upper_s(p, n, v, Rule::SliceRankFloor { p, n })
        .assuming([propd(p, n)])
        .with_note(format!(
            "binomial top n(2p-1)/p = {} integerized as n + floor(n(p-1)/p) = {top}; the +1 is the \
             conclusion of the counting argument",
            BigRational::new(BigInt::from(n * (2 * p - 1)), BigInt::from(p))
        )))
}

/// `B = (2 + 1/(p−1))^((p−1)/p) · (2 − 1/p)` as an enclosure.
pub fn cor_mainc1_base(p: u64, prec: u32) -> Result<Interval> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    let p_i = p as i64;
    let left = Interval::ratio(prec, 2 * p_i - 1, p - 1).pow(&Interval::ratio(prec, p_i - 1, p));
    Ok(left.mul(&Interval::ratio(prec, 2 * p_i - 1, p)))
}

/// `⌊(p−1)·B^n⌋ + 1` with outward-rounded evaluation.
pub fn cor_mainc1_bound(p: u64, n: u64) -> Result<BoundValue> {
    check_prime(p, n)?;
    let floor = stable_floor(|prec| {
        let b = cor_mainc1_base(p, prec).expect("p is prime");
        Interval::point_u64(prec, p - 1).mul(&b.powu(n))
    });
    Ok(upper_s(p, n, floor + 1u32, Rule::SliceRankAmplified { p, n }).assuming([propd(p, n)]))
}

/// `p(p−1)·C(2n, n) + 1`.
pub fn cor_mainc2_bound(p: u64, n: u64) -> Result<BoundValue> {
    check_prime(p, n)?;
    let v = p * (p - 1) * binomial(2 * n, n) + 1u32;
    Ok(upper_s(p, n, v, Rule::CentralBinomial { p, n }).assuming([propd(p, n)]))
}

/// The proof chain `(Z_k)^n ⊇ (Z_p)^n` peeling the smallest prime each step.
fn lift_chain(k: u64, n: u64) -> Result<BoundValue> {
    let p = factorize(k)[0].0;
    let base = cor_mainc2_bound(p, n)?;
    if k == p {
        return Ok(base);
    }
    let rest = lift_chain(k / p, n)?;
    compose_subgroup(&base, &rest, k / p, homocyclic(k, n))
}

/// `p(q−1)·C(2n, n) + 1` for an odd prime power `q = p^α`.
pub fn thm_main2_bound(q: u64, n: u64) -> Result<BoundValue> {
    let (p, alpha) = prime_power(q).ok_or_else(|| Error::Domain(format!("{q} is not a prime power")))?;
    if p == 2 {
        return Err(Error::Domain(format!("{q} is even")));
    }
    check_kn(q, n)?;
    let v = p * (q - 1) * binomial(2 * n, n) + 1u32;
    let chain = lift_chain(q, n)?;
    Ok(upper_s(q, n, v, Rule::PrimePowerLift { p, alpha, n })
        .assuming([propd(p, n)])
        .with_children(vec![chain]))
}

/// `rad(k)(k−1)·C(2n, n) + 1` for odd `k`.
pub fn thm_main3_bound(k: u64, n: u64) -> Result<BoundValue> {
    check_odd(k)?;
    check_kn(k, n)?;
    let v = radical(k) * (k - 1) * binomial(2 * n, n) + 1u32;
    let chain = lift_chain(k, n)?;
    Ok(upper_s(k, n, v, Rule::OddModulusLift { k, n })
        .assuming(factorize(k).into_iter().map(|(p, _)| propd(p, n)))
        .with_children(vec![chain]))
}

/// `X = exp(G)(Σ p_j C(2n_j, n_j) + Σ 1/(p_j − 1))`, integerized for the strict inequality.
pub fn thm_main4_bound(group: &FiniteAbelianGroup) -> Result<BoundValue> {
    if group.order().is_one() {
        return Err(Error::Domain("the trivial group has no bound".into()));
    }
    let mut sum = BigRational::zero();
    let mut assumptions = Vec::new();
    let mut per_prime = BTreeMap::new();
    for c in group.components() {
        let (p, n) = (c.prime, c.rank as u64);
        sum += BigRational::from(BigInt::from(p * binomial(2 * n, n)));
        sum += BigRational::new(BigInt::one(), BigInt::from(p - 1));
        assumptions.push(propd(p, n));
        per_prime.insert(p, cor_mainc2_bound(p, n)?);
    }
    let x = sum * BigRational::from(BigInt::from(group.exponent().clone()));
    let v = strict_floor(&x);
    let chain = compose_primary(group, &per_prime)?;
    Ok(
        BoundValue::new(Quantity::S, group.clone(), Direction::Upper, v, Rule::PrimaryCentralBinomial)
            .assuming(assumptions)
            .with_children(vec![chain]),
    )
}

/// Largest integer strictly below a positive rational.
pub(crate) fn strict_floor(x: &BigRational) -> BigUint {
    let f = if x.is_integer() {
        x.to_integer() - 1
    } else {
        x.floor().to_integer()
    };
    f.to_biguint().expect("positive")
}

/// `300k − 299` (s) or `299k − 298` (η) on `(Z_k)^3` for `k = 3^α 5^β`.
pub fn thm_main5_bound(k: u64, quantity: Quantity) -> Result<BoundValue> {
    let rest = {
        let mut r = k;
        for p in [3, 5] {
            while r > 1 && r.is_multiple_of(p) {
                r /= p;
            }
        }
        r
    };
    if k < 3 || rest != 1 {
        return Err(Error::Domain(format!("{k} is not of the form 3^a 5^b with a + b >= 1")));
    }
    let rule = Rule::Rank3ThreeFive { k };
    Ok(match quantity {
        Quantity::S => {
            let chain = thm_main3_bound(k, 3)?;
            BoundValue::new(quantity, homocyclic(k, 3), Direction::Upper, (300 * k - 299).into(), rule)
                .with_children(vec![chain])
                .with_note("Property D of Z_3^3 and Z_5^3 is known, so the odd-modulus lift holds unconditionally")
        }
        Quantity::Eta => BoundValue::new(quantity, homocyclic(k, 3), Direction::Upper, (299 * k - 298).into(), rule)
            .with_note("stated value; the step from the s bound to the eta bound is not certified here"),
    })
}

/// `C(x, n) = Γ(x+1) / (Γ(n+1) Γ(x−n+1))` for a rational top `x ≥ n`, as a floating-point
/// approximation (used only for reporting the literal non-integer binomial).
pub fn generalized_binomial(top: &BigRational, n: u64) -> Result<f64> {
    if top < &BigRational::from(BigInt::from(n)) {
        return Err(Error::Domain("binomial top must be at least n".into()));
    }
    let prec = 128;
    let x = Interval::from_big_rational(prec, top).lo().clone();
    let lg = |v: Float| {
        let mut v = v;
        v.ln_gamma_round(Round::Nearest);
        v
    };
    let one = Float::with_val(prec, 1);
    let num = lg(Float::with_val(prec, &x + &one));
    let d1 = lg(Float::with_val(prec, n + 1));
    let d2 = lg(Float::with_val(prec, &x - n) + &one);
    let mut r = num - d1 - d2;
    r.exp_round(Round::Nearest);
    Ok(r.to_f64())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SondowZudilin {
    pub m: u64,
    pub r: String,
    /// `C((r+1)m, m)` when `(r+1)m` is an integer.
    pub left: Option<BigUint>,
    pub right_lower: f64,
    pub right_upper: f64,
    /// `left ≤ right`, when decidable from the enclosure.
    pub holds: Option<bool>,
}

/// Both sides of `C((r+1)m, m) ≤ ((r+1)^{r+1}/r^r)^m`.
pub fn sondow_zudilin(m: u64, r: &BigRational) -> Result<SondowZudilin> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    if !r.is_positive() {
        return Err(Error::Domain(format!("r must be positive, got {r}")));
    }
    let r1 = r + BigRational::one();
    let top = &r1 * BigRational::from(BigInt::from(m));
    let left = top
        .is_integer()
        .then(|| top.to_integer().to_u64())
        .flatten()
        .map(|t| binomial(t, m));
    let prec = 256;
    let ri = Interval::from_big_rational(prec, r);
    let r1i = Interval::from_big_rational(prec, &r1);
    let log_base = r1i.mul(&r1i.ln()).sub(&ri.mul(&ri.ln()));
    let right = log_base.mul(&Interval::point_u64(prec, m)).exp();
    let holds = left.as_ref().and_then(|l| {
        let l = Integer::from_str_radix(&l.to_str_radix(16), 16).expect("valid digits");
        if *right.lo() >= l {
            Some(true)
        } else if *right.hi() < l {
            Some(false)
        } else {
            None
        }
    });
    Ok(SondowZudilin {
        m,
        r: r.to_string(),
        left,
        right_lower: right.lower_f64(),
        right_upper: right.upper_f64(),
        holds,
    })
}

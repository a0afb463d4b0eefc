//! Interval arithmetic over MPFR with outward rounding.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use rug::float::Round;
use rug::{Float, Integer, Rational};

/// Starting working precision in bits.
pub const START_PREC: u32 = 128;
/// Precision at which [`stable_floor`] gives up refining.
pub const MAX_PREC: u32 = 4096;

/// A closed interval `[lo, hi]` guaranteed to contain the exact real value.
#[derive(Debug, Clone)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

fn rounded<T>(prec: u32, val: T, round: Round) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, round).0
}

impl Interval {
    pub fn prec(&self) -> u32 {
        self.lo.prec()
    }

    pub fn point_u64(prec: u32, v: u64) -> Self {
        Interval {
            lo: rounded(prec, v, Round::Down),
            hi: rounded(prec, v, Round::Up),
        }
    }

    /// Exact for `prec ≥ 53`.
    pub fn point_f64(prec: u32, v: f64) -> Self {
        Interval {
            lo: rounded(prec, v, Round::Down),
            hi: rounded(prec, v, Round::Up),
        }
    }

    pub fn ratio(prec: u32, num: i64, den: u64) -> Self {
        Self::rational(prec, &Rational::from((num, den)))
    }

    pub fn from_big_rational(prec: u32, r: &BigRational) -> Self {
        let num = Integer::from_str_radix(&r.numer().to_str_radix(16), 16).expect("valid digits");
        let den = Integer::from_str_radix(&r.denom().to_str_radix(16), 16).expect("valid digits");
        Self::rational(prec, &Rational::from((num, den)))
    }

    fn rational(prec: u32, r: &Rational) -> Self {
        Interval {
            lo: rounded(prec, r, Round::Down),
            hi: rounded(prec, r, Round::Up),
        }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn lower_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    pub fn upper_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec();
        Interval {
            lo: rounded(p, &self.lo + &o.lo, Round::Down),
            hi: rounded(p, &self.hi + &o.hi, Round::Up),
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.prec();
        Interval {
            lo: rounded(p, &self.lo - &o.hi, Round::Down),
            hi: rounded(p, &self.hi - &o.lo, Round::Up),
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec();
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = pairs
            .iter()
            .map(|(a, b)| rounded(p, *a * *b, Round::Down))
            .reduce(|a, b| if b < a { b } else { a })
            .expect("four products");
        let hi = pairs
            .iter()
            .map(|(a, b)| rounded(p, *a * *b, Round::Up))
            .reduce(|a, b| if b > a { b } else { a })
            .expect("four products");
        Interval { lo, hi }
    }

    /// Panics unless the divisor is strictly positive.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(o.lo.is_sign_positive() && !o.lo.is_zero(), "divisor interval must be positive");
        let p = self.prec();
        let inv = Interval {
            lo: rounded(p, 1 / &o.hi, Round::Down),
            hi: rounded(p, 1 / &o.lo, Round::Up),
        };
        self.mul(&inv)
    }

    /// Panics unless the interval is strictly positive.
    pub fn ln(&self) -> Interval {
        assert!(self.lo.is_sign_positive() && !self.lo.is_zero(), "ln of a non-positive interval");
        let mut lo = self.lo.clone();
        lo.ln_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.ln_round(Round::Up);
        Interval { lo, hi }
    }

    pub fn exp(&self) -> Interval {
        let mut lo = self.lo.clone();
        lo.exp_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.exp_round(Round::Up);
        Interval { lo, hi }
    }

    /// `self^n` by repeated squaring; intended for non-negative bases.
    pub fn powu(&self, mut n: u64) -> Interval {
        let p = self.prec();
        let mut acc = Interval::point_u64(p, 1);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^e` for a strictly positive base.
    pub fn pow(&self, e: &Interval) -> Interval {
        self.ln().mul(e).exp()
    }

    /// `⌊x⌋` when every point of the interval has the same floor.
    pub fn floor_if_stable(&self) -> Option<BigUint> {
        let lo = floor_big(&self.lo)?;
        let hi = floor_big(&self.hi)?;
        (lo == hi).then_some(lo)
    }

    /// `⌊hi⌋`, a safe integerization for upper bounds.
    pub fn floor_of_upper(&self) -> Option<BigUint> {
        floor_big(&self.hi)
    }
}

fn floor_big(x: &Float) -> Option<BigUint> {
    if x.is_sign_negative() && !x.is_zero() {
        return None;
    }
    let (i, _) = x.to_integer_round(Round::Down)?;
    BigUint::parse_bytes(i.to_string_radix(16).as_bytes(), 16)
}

/// `⌊X⌋` for a non-negative real `X` given as an interval-valued evaluator, refining the
/// precision until the floor is unambiguous. If it never stabilizes (for example `X` is an
/// integer that is not exactly representable by the evaluation) the floor of the upper end
/// is returned, which never understates `X`.
pub fn stable_floor(eval: impl Fn(u32) -> Interval) -> BigUint {
    let mut prec = START_PREC;
    loop {
        let x = eval(prec);
        if let Some(f) = x.floor_if_stable() {
            return f;
        }
        if prec >= MAX_PREC {
            return x.floor_of_upper().expect("non-negative evaluation");
        }
        prec *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enclosures_contain_the_value() {
        let third = Interval::ratio(128, 1, 3);
        assert!(third.lower_f64() <= 1.0 / 3.0 && 1.0 / 3.0 <= third.upper_f64());
        let two = Interval::point_u64(128, 2);
        let sqrt2 = two.pow(&Interval::ratio(128, 1, 2));
        assert!(sqrt2.lower_f64() <= std::f64::consts::SQRT_2);
        assert!(sqrt2.upper_f64() >= std::f64::consts::SQRT_2);
        let back = sqrt2.mul(&sqrt2);
        assert!(back.lo() <= &2 && back.hi() >= &2);
    }

    #[test]
    fn floors() {
        let x = Interval::ratio(128, 22, 7);
        assert_eq!(x.floor_if_stable(), Some(BigUint::from(3u32)));
        assert_eq!(stable_floor(|p| Interval::point_u64(p, 3).powu(40)), BigUint::from(3u32).pow(40));
        // an exact integer hidden behind transcendental functions never stabilizes
        assert_eq!(stable_floor(|p| Interval::point_u64(p, 8).ln().exp()), BigUint::from(8u32));
    }

    #[test]
    fn doubled_precision_agrees() {
        let f = |p| Interval::ratio(p, 5, 2).pow(&Interval::ratio(p, 2, 3)).mul(&Interval::ratio(p, 9, 5)).powu(7);
        let a = f(128);
        let b = f(256);
        assert!(a.lo() <= b.lo() && b.hi() <= a.hi());
    }
}

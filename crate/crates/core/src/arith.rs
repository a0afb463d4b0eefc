//! Small exact number-theory helpers shared by the group and bound code.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorisation as `(prime, exponent)` pairs, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Returns `(p, α)` when `q = p^α` with `α ≥ 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, a)] => Some((*p, *a)),
        _ => None,
    }
}

/// Product of the distinct primes dividing `k`.
pub fn radical(k: u64) -> u64 {
    factorize(k).iter().map(|(p, _)| p).product()
}

/// The largest `p^{v_p(k)}` over primes `p | k`.
pub fn largest_prime_power_divisor(k: u64) -> u64 {
    factorize(k)
        .into_iter()
        .map(|(p, e)| p.pow(e))
        .max()
        .unwrap_or(1)
}

pub fn is_power_of_two(k: u64) -> bool {
    k >= 2 && k.is_power_of_two()
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn pow_big(base: u64, exp: u64) -> BigUint {
    num_traits::pow::pow(BigUint::from(base), exp as usize)
}

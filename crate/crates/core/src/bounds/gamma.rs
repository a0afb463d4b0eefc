//! The optimized exponential base `γ_{k,q} = (k/q) inf_{0<x<1} (1−x^q)/(1−x) · x^{−(q−1)/k}`.

use serde::{Deserialize, Serialize};

use super::real::{stable_floor, Interval};
use super::{homocyclic, BoundValue, Direction, Rule};
use crate::arith::{largest_prime_power_divisor, prime_power};
use crate::error::{Error, Result};
use crate::search::Quantity;

pub const DEFAULT_GAMMA_TOL: f64 = 1e-9;

const DENSE_POINTS: usize = 100_000;
const OVERSAMPLE: usize = 64;
const GOLDEN_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaResult {
    pub k: u64,
    pub q: u64,
    /// Upward-rounded value of the objective at the minimizer (or the boundary value `k`).
    pub gamma_upper: f64,
    /// `1.0` encodes the `x → 1` limit.
    pub minimizer_x: f64,
    pub tolerance: f64,
    /// The bracket failed the unimodality check and a dense scan was used.
    pub dense_fallback: bool,
}

/// `f(x)` in double precision; `x = 1` gives the limit `k`.
pub fn gamma_objective(k: u64, q: u64, x: f64) -> f64 {
    if x >= 1.0 {
        return k as f64;
    }
    let (kf, qf) = (k as f64, q as f64);
    let ln_x = if x < 0.5 { x.ln() } else { (x - 1.0).ln_1p() };
    // (1 − x^q)/(1 − x) without cancellation near 1
    let ratio = if x < 0.5 {
        -(qf * ln_x).exp_m1() / (1.0 - x)
    } else {
        (qf * ln_x).exp_m1() / (x - 1.0)
    };
    kf / qf * ratio * (-(qf - 1.0) / kf * ln_x).exp()
}

/// Upward-rounded `f(x)` for `0 < x < 1`.
fn objective_upper(k: u64, q: u64, x: f64) -> f64 {
    let prec = 128;
    let xi = Interval::point_f64(prec, x);
    let one = Interval::point_u64(prec, 1);
    let ratio = one.sub(&xi.powu(q)).div(&one.sub(&xi));
    let power = xi.pow(&Interval::ratio(prec, -((q - 1) as i64), k));
    Interval::ratio(prec, k as i64, q).mul(&ratio).mul(&power).upper_f64()
}

fn grid() -> Vec<f64> {
    let mut pts: Vec<f64> = (1..256).map(|j| j as f64 / 256.0).collect();
    pts.extend((9..=60).map(|m| 2f64.powi(-m)));
    pts.extend((9..=52).map(|m| 1.0 - 2f64.powi(-m)));
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    pts.dedup();
    pts
}

fn argmin(f: impl Fn(f64) -> f64, pts: &[f64]) -> usize {
    let mut best = 0;
    let mut best_v = f64::INFINITY;
    for (i, &x) in pts.iter().enumerate() {
        let v = f(x);
        if v < best_v {
            best_v = v;
            best = i;
        }
    }
    best
}

fn bracket_around(pts: &[f64], i: usize) -> (f64, f64) {
    let a = if i == 0 { 0.0 } else { pts[i - 1] };
    let b = if i + 1 == pts.len() { 1.0 } else { pts[i + 1] };
    (a, b)
}

/// Decreasing then increasing on an oversampled grid, up to rounding noise.
fn looks_unimodal(f: impl Fn(f64) -> f64, a: f64, b: f64) -> bool {
    let vals: Vec<f64> = (1..=OVERSAMPLE)
        .map(|j| f(a + (b - a) * j as f64 / (OVERSAMPLE + 1) as f64))
        .collect();
    let m = vals
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.partial_cmp(y.1).expect("finite"))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let slack = |v: f64| v.abs() * 1e-12;
    vals[..=m].windows(2).all(|w| w[1] <= w[0] + slack(w[0]))
        && vals[m..].windows(2).all(|w| w[1] + slack(w[1]) >= w[0])
}

fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERATIONS {
        if b - a <= 1e-15 * b.max(1e-300) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        c
    } else {
        d
    }
}

/// The infimum for any `2 ≤ q ≤ k`, without the prime-power requirement.
pub(crate) fn gamma_infimum(k: u64, q: u64, tol: f64) -> GammaResult {
    let f = |x: f64| gamma_objective(k, q, x);
    let pts = grid();
    let i = argmin(f, &pts);
    let (mut a, mut b) = bracket_around(&pts, i);
    let mut dense_fallback = false;
    if !looks_unimodal(f, a, b) {
        dense_fallback = true;
        let mut dense: Vec<f64> = (1..DENSE_POINTS).map(|j| j as f64 / DENSE_POINTS as f64).collect();
        dense.extend(&pts);
        dense.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        dense.dedup();
        let j = argmin(f, &dense);
        (a, b) = bracket_around(&dense, j);
    }
    let mut x = golden(f, a, b);
    if x <= 0.0 || x >= 1.0 {
        x = pts[i];
    }
    let interior = objective_upper(k, q, x);
    let boundary = k as f64;
    let (gamma_upper, minimizer_x) = if boundary <= interior { (boundary, 1.0) } else { (interior, x) };
    GammaResult {
        k,
        q,
        gamma_upper,
        minimizer_x,
        tolerance: tol,
        dense_fallback,
    }
}

/// Enclosure of `γ_{k,q}` for a prime power `q` dividing `k`.
pub fn naslund_gamma(k: u64, q: u64, tol: f64) -> Result<GammaResult> {
    if k < 2 {
        return Err(Error::Domain(format!("k must be at least 2, got {k}")));
    }
    if prime_power(q).is_none() {
        return Err(Error::Domain(format!("{q} is not a prime power")));
    }
    if !k.is_multiple_of(q) {
        return Err(Error::Domain(format!("{q} does not divide {k}")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    Ok(gamma_infimum(k, q, tol))
}

/// `γ_{q,q} / ((2^q − 1)/2^q · 2^{(2q−1)/q})`.
pub fn naslund_asymptotic_check(q: u64) -> Result<f64> {
    if q < 2 {
        return Err(Error::Domain(format!("q must be at least 2, got {q}")));
    }
    let qf = q as f64;
    let predicted = -(-qf * std::f64::consts::LN_2).exp_m1() * ((2.0 * qf - 1.0) / qf).exp2();
    Ok(gamma_infimum(q, q, DEFAULT_GAMMA_TOL).gamma_upper / predicted)
}

/// `⌊(k−1)·γ^n⌋ + 1` with `q` the largest prime power dividing `k`.
pub fn naslund_bound(k: u64, n: u64, tol: f64) -> Result<BoundValue> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let q = largest_prime_power_divisor(k);
    let g = naslund_gamma(k, q, tol)?;
    naslund_bound_from_gamma(k, n, q, g.gamma_upper)
}

pub(crate) fn naslund_bound_from_gamma(k: u64, n: u64, q: u64, gamma_upper: f64) -> Result<BoundValue> {
    if !(gamma_upper.is_finite() && gamma_upper > 0.0) {
        return Err(Error::Domain(format!("invalid gamma {gamma_upper}")));
    }
    let floor = stable_floor(|prec| Interval::point_u64(prec, k - 1).mul(&Interval::point_f64(prec, gamma_upper).powu(n)));
    Ok(BoundValue::new(
        Quantity::S,
        homocyclic(k, n),
        Direction::Upper,
        floor + 1u32,
        Rule::Naslund { k, n, q, gamma_upper },
    )
    .assuming([super::Assumption::PropertyD(homocyclic(k, n))]))
}

/// Replay: the stored base must not undercut a fresh enclosure.
pub(crate) fn naslund_replay(k: u64, n: u64, q: u64, gamma_upper: f64) -> Result<BoundValue> {
    if q != largest_prime_power_divisor(k) {
        return Err(Error::Replay {
            rule: "naslund".into(),
            stored: format!("q = {q}"),
            recomputed: format!("q = {}", largest_prime_power_divisor(k)),
        });
    }
    let fresh = naslund_gamma(k, q, DEFAULT_GAMMA_TOL)?.gamma_upper;
    if gamma_upper < fresh {
        return Err(Error::Replay {
            rule: "naslund".into(),
            stored: format!("gamma {gamma_upper}"),
            recomputed: format!("gamma {fresh}"),
        });
    }
    naslund_bound_from_gamma(k, n, q, gamma_upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn boundary_infimum_for_two() {
        let g = naslund_gamma(2, 2, DEFAULT_GAMMA_TOL).unwrap();
        assert_eq!(g.gamma_upper, 2.0);
        assert_eq!(g.minimizer_x, 1.0);
        // f is decreasing on (0, 1)
        let xs = [0.1, 0.3, 0.5, 0.7, 0.9, 0.99];
        assert!(xs.windows(2).all(|w| gamma_objective(2, 2, w[0]) > gamma_objective(2, 2, w[1])));
    }

    #[test]
    fn stationary_point_for_three() {
        let x = (-1.0 + 33f64.sqrt()) / 8.0;
        let expected = (1.0 + x + x * x) * x.powf(-2.0 / 3.0);
        let g = naslund_gamma(3, 3, DEFAULT_GAMMA_TOL).unwrap();
        assert!(g.gamma_upper >= expected);
        assert!(g.gamma_upper - expected < 1e-9);
        assert!((g.minimizer_x - x).abs() < 1e-6);
        assert!((g.gamma_upper - 2.75510).abs() < 1e-5);
    }

    #[test]
    fn at_most_four_on_the_diagonal() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64] {
            let g = naslund_gamma(q, q, DEFAULT_GAMMA_TOL).unwrap();
            assert!(g.gamma_upper <= 4.0, "q = {q}: {}", g.gamma_upper);
            assert!(!g.dense_fallback);
        }
    }

    #[test]
    fn minimizer_reproduces_the_enclosure() {
        for (k, q) in [(6u64, 3u64), (12, 4), (10, 5), (9, 9), (30, 5)] {
            let g = naslund_gamma(k, q, DEFAULT_GAMMA_TOL).unwrap();
            let at = gamma_objective(k, q, g.minimizer_x);
            assert!(g.gamma_upper >= at && g.gamma_upper - at <= g.tolerance, "({k}, {q})");
        }
    }

    #[test]
    fn argument_checks() {
        assert!(naslund_gamma(6, 4, 1e-9).is_err());
        assert!(naslund_gamma(12, 6, 1e-9).is_err());
        assert!(naslund_gamma(1, 1, 1e-9).is_err());
        assert!(naslund_gamma(3, 3, 0.0).is_err());
    }

    #[test]
    fn asymptotic_ratio() {
        assert!((naslund_asymptotic_check(2).unwrap() - 0.9428).abs() < 1e-3);
        let r = naslund_asymptotic_check(50).unwrap();
        assert!((0.98..=1.02).contains(&r), "{r}");
        for q in 2..=200 {
            let r = naslund_asymptotic_check(q).unwrap();
            assert!((0.5..=2.0).contains(&r), "q = {q}: {r}");
        }
    }

    #[test]
    fn bounds() {
        for n in 1..8 {
            let b = naslund_bound(2, n, DEFAULT_GAMMA_TOL).unwrap();
            assert_eq!(b.value.to_u64(), Some((1 << n) + 1));
        }
        assert_eq!(naslund_bound(3, 3, DEFAULT_GAMMA_TOL).unwrap().value.to_u64(), Some(42));
        assert!(naslund_bound(4, 1, DEFAULT_GAMMA_TOL).unwrap().value.to_u64().unwrap() >= 7);
        assert!(matches!(
            naslund_bound(12, 2, DEFAULT_GAMMA_TOL).unwrap().derivation.rule,
            Rule::Naslund { q: 4, .. }
        ));
    }
}

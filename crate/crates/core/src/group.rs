//! Finite Abelian groups in canonical primary form.
//!
//! A group is stored as its list of primary cyclic factors, primes ascending and orders
//! descending within each prime. `Z_6` and `Z_2 × Z_3` therefore build the same value, and
//! group equality is structural on that list. Element coordinates always refer to the
//! canonical factor list; the user's original factor list is retained so that coordinates
//! given against it can be translated.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{factorize, lcm};
use crate::error::{Error, Result};

/// The `p`-part of a group: `rank` cyclic factors whose orders are powers of `prime`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimaryComponent {
    pub prime: u64,
    pub rank: usize,
    /// Factor orders, descending.
    pub orders: Vec<u64>,
}

impl PrimaryComponent {
    pub fn exponent(&self) -> u64 {
        self.orders.iter().copied().max().unwrap_or(1)
    }

    pub fn order(&self) -> BigUint {
        self.orders.iter().map(|&o| BigUint::from(o)).product()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    components: Vec<PrimaryComponent>,
    order: BigUint,
    exponent: BigUint,
    input_orders: Vec<u64>,
    /// For every input factor, the canonical slots its residue is split into (CRT).
    input_slots: Vec<Vec<usize>>,
}

/// Canonicalize a factor list into a group.
pub fn make_group(factor_orders: &[u64]) -> Result<FiniteAbelianGroup> {
    FiniteAbelianGroup::new(factor_orders)
}

pub fn primary_decomposition(group: &FiniteAbelianGroup) -> Vec<PrimaryComponent> {
    group.components.clone()
}

impl FiniteAbelianGroup {
    pub fn new(factor_orders: &[u64]) -> Result<Self> {
        if factor_orders.is_empty() {
            return Err(Error::EmptyGroup);
        }
        if let Some(&bad) = factor_orders.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidOrder(bad));
        }
        // (prime, prime power, input index)
        let mut parts: Vec<(u64, u64, usize)> = Vec::new();
        for (i, &m) in factor_orders.iter().enumerate() {
            for (p, e) in factorize(m) {
                parts.push((p, p.pow(e), i));
            }
        }
        parts.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));

        let factors: Vec<u64> = parts.iter().map(|&(_, q, _)| q).collect();
        let mut input_slots = vec![Vec::new(); factor_orders.len()];
        for (slot, &(_, _, i)) in parts.iter().enumerate() {
            input_slots[i].push(slot);
        }

        let mut components: Vec<PrimaryComponent> = Vec::new();
        for &(p, q, _) in &parts {
            match components.last_mut() {
                Some(c) if c.prime == p => {
                    c.orders.push(q);
                    c.rank += 1;
                }
                _ => components.push(PrimaryComponent {
                    prime: p,
                    rank: 1,
                    orders: vec![q],
                }),
            }
        }

        let order = factors.iter().map(|&q| BigUint::from(q)).product();
        let exponent = components
            .iter()
            .map(|c| BigUint::from(c.exponent()))
            .fold(BigUint::one(), |a, b| a * b);

        Ok(FiniteAbelianGroup {
            factors,
            components,
            order,
            exponent,
            input_orders: factor_orders.to_vec(),
            input_slots,
        })
    }

    /// `(Z_k)^n`.
    pub fn homocyclic(k: u64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroup);
        }
        Self::new(&vec![k; n])
    }

    /// Canonical factor orders (prime powers).
    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn components(&self) -> &[PrimaryComponent] {
        &self.components
    }

    pub fn input_orders(&self) -> &[u64] {
        &self.input_orders
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn exponent(&self) -> &BigUint {
        &self.exponent
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.factors
            .iter()
            .try_fold(1u64, |acc, &q| acc.checked_mul(q))
    }

    pub fn exponent_u64(&self) -> Option<u64> {
        self.components
            .iter()
            .try_fold(1u64, |acc, c| acc.checked_mul(c.exponent()))
    }

    /// Order as a `usize` index range, for groups small enough to enumerate.
    pub fn enumerable_order(&self, limit: usize) -> Result<usize> {
        match self.order_u64() {
            Some(n) if n <= limit as u64 => Ok(n as usize),
            _ => Err(Error::TooLarge(self.to_string())),
        }
    }

    /// `Some((k, n))` when the group is `(Z_k)^n`.
    pub fn as_homocyclic(&self) -> Option<(u64, usize)> {
        let n = self.components.first()?.rank;
        let mut k = 1u64;
        for c in &self.components {
            if c.rank != n || c.orders.iter().any(|&o| o != c.orders[0]) {
                return None;
            }
            k = k.checked_mul(c.orders[0])?;
        }
        Some((k, n))
    }

    /// `Some((p, n))` when the group is `(Z_p)^n` with `p` prime.
    pub fn as_elementary(&self) -> Option<(u64, usize)> {
        match self.components.as_slice() {
            [c] if c.orders.iter().all(|&o| o == c.prime) => Some((c.prime, c.rank)),
            _ => None,
        }
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.coords.len() == self.factors.len()
            && e.coords.iter().zip(&self.factors).all(|(&c, &q)| c < q)
    }

    fn check(&self, e: &GroupElement) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                group: self.to_string(),
            })
        }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::new(vec![0; self.factors.len()])
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(GroupElement::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .zip(&self.factors)
                .map(|((&x, &y), &q)| ((x as u128 + y as u128) % q as u128) as u64)
                .collect(),
        ))
    }

    pub fn negate(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement::new(
            a.coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &q)| (q - x) % q)
                .collect(),
        ))
    }

    pub fn scalar_multiple(&self, a: &GroupElement, c: u64) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement::new(
            a.coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &q)| ((x as u128 * c as u128) % q as u128) as u64)
                .collect(),
        ))
    }

    /// Order of `a` as a group element.
    pub fn element_order(&self, a: &GroupElement) -> Result<u64> {
        self.check(a)?;
        Ok(a.coords
            .iter()
            .zip(&self.factors)
            .map(|(&x, &q)| q / num_integer::gcd(q, x))
            .fold(1, lcm))
    }

    /// Every element once, in lexicographic coordinate order (last coordinate fastest).
    pub fn enumerate_elements(&self) -> ElementIter<'_> {
        ElementIter {
            group: self,
            next: Some(self.zero()),
        }
    }

    /// Mixed-radix index of an element; agrees with [`Self::enumerate_elements`] order.
    pub fn index_of(&self, e: &GroupElement) -> Result<usize> {
        self.check(e)?;
        let mut idx = 0usize;
        for (&c, &q) in e.coords.iter().zip(&self.factors) {
            idx = idx
                .checked_mul(q as usize)
                .and_then(|v| v.checked_add(c as usize))
                .ok_or_else(|| Error::TooLarge(self.to_string()))?;
        }
        Ok(idx)
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut coords = vec![0; self.factors.len()];
        for (slot, &q) in self.factors.iter().enumerate().rev() {
            coords[slot] = (idx % q as usize) as u64;
            idx /= q as usize;
        }
        GroupElement::new(coords)
    }

    /// Translate coordinates given against the input factor list into canonical ones.
    pub fn from_input_coords(&self, coords: &[u64]) -> Result<GroupElement> {
        if coords.len() != self.input_orders.len() {
            return Err(Error::GroupMismatch {
                group: self.to_string(),
            });
        }
        let mut out = vec![0; self.factors.len()];
        for (i, &r) in coords.iter().enumerate() {
            if r >= self.input_orders[i] {
                return Err(Error::GroupMismatch {
                    group: self.to_string(),
                });
            }
            for &slot in &self.input_slots[i] {
                out[slot] = r % self.factors[slot];
            }
        }
        Ok(GroupElement::new(out))
    }
}

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for FiniteAbelianGroup {}

impl Hash for FiniteAbelianGroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.factors.hash(state);
    }
}

impl PartialOrd for FiniteAbelianGroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteAbelianGroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.factors.cmp(&other.factors)
    }
}

pub struct ElementIter<'a> {
    group: &'a FiniteAbelianGroup,
    next: Option<GroupElement>,
}

impl Iterator for ElementIter<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carry = true;
        for (slot, &q) in self.group.factors.iter().enumerate().rev() {
            succ.coords[slot] += 1;
            if succ.coords[slot] < q {
                carry = false;
                break;
            }
            succ.coords[slot] = 0;
        }
        if !carry {
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// Renders the canonical factor list, e.g. `Z2^2xZ3^2` for `(Z_6)^2`.
impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut runs: Vec<(u64, usize)> = Vec::new();
        for &q in &self.factors {
            match runs.last_mut() {
                Some((o, n)) if *o == q => *n += 1,
                _ => runs.push((q, 1)),
            }
        }
        let parts: Vec<String> = runs
            .into_iter()
            .map(|(q, n)| {
                if n == 1 {
                    format!("Z{q}")
                } else {
                    format!("Z{q}^{n}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Parses `Z<k>^<n>` terms joined by `x`, case-insensitively (`Z3^2`, `z4xZ2`).
impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let err = |reason: &str| Error::GroupParse {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let lower = spec.trim().to_ascii_lowercase();
        if lower.is_empty() {
            return Err(err("empty spec"));
        }
        let mut orders = Vec::new();
        for term in lower.split('x') {
            let term = term.trim();
            let body = term
                .strip_prefix('z')
                .ok_or_else(|| err("each factor must look like Z<k> or Z<k>^<n>"))?;
            let (k, n) = match body.split_once('^') {
                Some((k, n)) => (k.trim(), n.trim()),
                None => (body.trim(), "1"),
            };
            let k: u64 = k.parse().map_err(|_| err("bad cyclic order"))?;
            let n: usize = n.parse().map_err(|_| err("bad exponent"))?;
            if n == 0 {
                return Err(err("exponent must be at least 1"));
            }
            orders.extend(std::iter::repeat_n(k, n));
        }
        FiniteAbelianGroup::new(&orders)
    }
}

impl Serialize for FiniteAbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FiniteAbelianGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

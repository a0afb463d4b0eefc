//! Zero-sum detection, exact `s(G)` / `η(G)` and Property D.

mod cache;
mod dp;
mod extremal;
mod propd;
mod symmetry;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::FiniteAbelianGroup;
use crate::sequence::Sequence;

pub use cache::{Cache, CacheEntry, CachedSearch};
pub use dp::find_zero_sum;
pub use extremal::{enumerate_extremal, exact_eta, exact_s, exact_value, ExtremalEnumeration};
pub use propd::{check_property_d, check_property_d_cached, known_property_d, KnownPropertyD, PropertyDCase, PropertyDVerdict, VerdictStatus};
pub use symmetry::{SymmetryGroup, SymmetryKind};

/// Largest group the exhaustive searcher will index.
pub const MAX_SEARCH_ORDER: usize = 1 << 16;

/// Which zero-sum invariant is being computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    S,
    Eta,
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Quantity::S => "s",
            Quantity::Eta => "eta",
        })
    }
}

impl std::str::FromStr for Quantity {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s" => Ok(Quantity::S),
            "eta" | "η" => Ok(Quantity::Eta),
            other => Err(crate::Error::Domain(format!("unknown quantity {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_wall: Duration,
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes,
            ..Self::default()
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 200_000_000,
            max_wall: Duration::from_secs(15 * 60),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStatus {
    /// The whole search tree was explored.
    Exact,
    /// The node budget ran out; `value` is a verified lower bound.
    LowerBoundOnly,
    /// The wall-clock budget ran out; `value` is a verified lower bound but depends on timing.
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub group: FiniteAbelianGroup,
    pub quantity: Quantity,
    pub status: SearchStatus,
    pub value: u64,
    pub extremal_example: Option<Sequence>,
    /// All extremal sequences of length `value - 1`, one per symmetry orbit (complete only
    /// when `status` is `Exact`).
    pub extremal_sequences: Vec<Sequence>,
    pub symmetry: String,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

/// Dense element indexing with table-driven arithmetic for small groups.
#[derive(Debug, Clone)]
pub(crate) struct IndexedGroup {
    pub order: usize,
    pub exponent: u64,
    radices: Vec<usize>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl IndexedGroup {
    const TABLE_LIMIT: usize = 1024;

    pub fn new(group: &FiniteAbelianGroup) -> Result<Self> {
        let order = group.enumerable_order(MAX_SEARCH_ORDER)?;
        let exponent = group.exponent_u64().expect("small group");
        let radices: Vec<usize> = group.factors().iter().map(|&q| q as usize).collect();
        let mut ig = IndexedGroup {
            order,
            exponent,
            radices,
            neg: Vec::new(),
            add_table: None,
        };
        ig.neg = (0..order).map(|x| ig.neg_slow(x) as u32).collect();
        if order <= Self::TABLE_LIMIT {
            let mut t = vec![0u32; order * order];
            for x in 0..order {
                for y in 0..order {
                    t[x * order + y] = ig.add_slow(x, y) as u32;
                }
            }
            ig.add_table = Some(t);
        }
        Ok(ig)
    }

    fn add_slow(&self, mut x: usize, mut y: usize) -> usize {
        let mut out = 0usize;
        let mut scale = 1usize;
        for &r in self.radices.iter().rev() {
            let d = (x % r + y % r) % r;
            out += d * scale;
            scale *= r;
            x /= r;
            y /= r;
        }
        out
    }

    fn neg_slow(&self, mut x: usize) -> usize {
        let mut out = 0usize;
        let mut scale = 1usize;
        for &r in self.radices.iter().rev() {
            let d = (r - x % r) % r;
            out += d * scale;
            scale *= r;
            x /= r;
        }
        out
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        match &self.add_table {
            Some(t) => t[x * self.order + y] as usize,
            None => self.add_slow(x, y),
        }
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.neg[x] as usize
    }

    /// Coordinates of element `x` (last coordinate least significant).
    pub fn digits(&self, mut x: usize) -> Vec<usize> {
        let mut d = vec![0; self.radices.len()];
        for (slot, &r) in self.radices.iter().enumerate().rev() {
            d[slot] = x % r;
            x /= r;
        }
        d
    }

    /// Reduce raw digits modulo their radices.
    pub fn reduce(&self, d: &[usize]) -> Vec<usize> {
        d.iter().zip(&self.radices).map(|(&v, &r)| v % r).collect()
    }

    pub fn index_of_digits(&self, d: &[usize]) -> usize {
        d.iter().zip(&self.radices).fold(0, |acc, (&v, &r)| acc * r + v)
    }
}

//! Exhaustive extremal search by orderly generation.
//!
//! Multisets are grown as nondecreasing words over the element indices. A node is kept only
//! if it is free of the forbidden zero-sum and is the lexicographic minimum of its orbit under
//! the symmetry group (or a cheap subgroup of it for big groups). Freeness is hereditary and
//! the minimum of an orbit stays a minimum when its last letter is removed, so every orbit of
//! free multisets is visited exactly through its minimal representative.
//!
//! Each node carries the sets `R_c` of sums of its size-`c` sub-multisets, `c < exp(G)`.
//! Appending `x` creates a forbidden zero-sum iff `-x ∈ R_{exp-1}` (for `s`) or
//! `-x ∈ R_c` for some `c < exp` (for `η`), and the sets update as `R_c ∪= R_{c-1} + x`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::search::symmetry::SymmetryGroup;
use crate::search::{IndexedGroup, Quantity, SearchBudget, SearchOutcome, SearchStatus};
use crate::sequence::Sequence;

/// All sequences of a fixed length free of the forbidden zero-sum, one per symmetry orbit.
#[derive(Debug, Clone)]
pub struct ExtremalEnumeration {
    pub group: FiniteAbelianGroup,
    pub quantity: Quantity,
    pub length: u64,
    pub sequences: Vec<Sequence>,
    pub symmetry: String,
    /// False when the budget ran out before the tree was exhausted.
    pub complete: bool,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

pub fn exact_s(group: &FiniteAbelianGroup, budget: SearchBudget) -> Result<SearchOutcome> {
    exact_value(group, Quantity::S, budget)
}

pub fn exact_eta(group: &FiniteAbelianGroup, budget: SearchBudget) -> Result<SearchOutcome> {
    exact_value(group, Quantity::Eta, budget)
}

pub fn exact_value(
    group: &FiniteAbelianGroup,
    quantity: Quantity,
    budget: SearchBudget,
) -> Result<SearchOutcome> {
    let ig = IndexedGroup::new(group)?;
    let sym = SymmetryGroup::build(group, &ig, quantity);
    let mut dfs = Dfs::new(&ig, &sym, quantity, budget, None);
    dfs.run();

    let status = dfs.stopped.unwrap_or(SearchStatus::Exact);
    let to_seq = |w: &Vec<u32>| words_to_sequence(group, w);
    let extremal_sequences: Vec<Sequence> = dfs.leaves.iter().map(to_seq).collect();
    Ok(SearchOutcome {
        group: group.clone(),
        quantity,
        status,
        value: dfs.best_len as u64 + 1,
        extremal_example: extremal_sequences.first().cloned(),
        extremal_sequences,
        symmetry: sym.describe(),
        nodes_explored: dfs.nodes,
        elapsed: dfs.start.elapsed(),
    })
}

/// Sequences of the given length with no zero-sum subsequence of length `exp(G)`.
pub fn enumerate_extremal(
    group: &FiniteAbelianGroup,
    length: u64,
    budget: SearchBudget,
) -> Result<ExtremalEnumeration> {
    enumerate_free(group, Quantity::S, length, budget)
}

pub(crate) fn enumerate_free(
    group: &FiniteAbelianGroup,
    quantity: Quantity,
    length: u64,
    budget: SearchBudget,
) -> Result<ExtremalEnumeration> {
    if length == 0 {
        return Err(Error::InvalidTarget("length must be at least 1".into()));
    }
    let ig = IndexedGroup::new(group)?;
    let sym = SymmetryGroup::build(group, &ig, quantity);
    let mut dfs = Dfs::new(&ig, &sym, quantity, budget, Some(length as usize));
    dfs.run();
    Ok(ExtremalEnumeration {
        group: group.clone(),
        quantity,
        length,
        sequences: dfs.leaves.iter().map(|w| words_to_sequence(group, w)).collect(),
        symmetry: sym.describe(),
        complete: dfs.stopped.is_none(),
        nodes_explored: dfs.nodes,
        elapsed: dfs.start.elapsed(),
    })
}

fn words_to_sequence(group: &FiniteAbelianGroup, w: &[u32]) -> Sequence {
    Sequence::from_elements(group.clone(), w.iter().map(|&i| group.element_at(i as usize)))
        .expect("indices come from the group")
}

struct Dfs<'a> {
    ig: &'a IndexedGroup,
    sym: &'a SymmetryGroup,
    quantity: Quantity,
    exp: usize,
    words: usize,
    budget: SearchBudget,
    start: Instant,
    nodes: u64,
    stopped: Option<SearchStatus>,
    /// `Some(L)`: collect free words of length exactly `L`; `None`: find the maximum.
    fixed_length: Option<usize>,
    /// Longest possible free multiset: every allowed element with multiplicity `exp - 1`.
    saturation: usize,
    saturated: bool,
    word: Vec<u32>,
    counts: Vec<usize>,
    best_len: usize,
    leaves: BTreeSet<Vec<u32>>,
    buf: Vec<u32>,
}

impl<'a> Dfs<'a> {
    fn new(
        ig: &'a IndexedGroup,
        sym: &'a SymmetryGroup,
        quantity: Quantity,
        budget: SearchBudget,
        fixed_length: Option<usize>,
    ) -> Self {
        let exp = ig.exponent as usize;
        let allowed = match quantity {
            Quantity::S => ig.order,
            Quantity::Eta => ig.order - 1,
        };
        Dfs {
            ig,
            sym,
            quantity,
            exp,
            words: ig.order.div_ceil(64),
            budget,
            start: Instant::now(),
            nodes: 0,
            stopped: None,
            fixed_length,
            saturation: (exp - 1) * allowed,
            saturated: false,
            word: Vec::new(),
            counts: vec![0; ig.order],
            best_len: 0,
            leaves: BTreeSet::new(),
            buf: Vec::new(),
        }
    }

    fn run(&mut self) {
        // R_0 = {0}; R_c = ∅ for 1 ≤ c < exp
        let mut sums = vec![0u64; self.exp * self.words];
        sums[0] = 1;
        if self.fixed_length.is_none() {
            self.leaves.insert(Vec::new());
        }
        self.visit(&sums);
    }

    #[inline]
    fn layer<'s>(&self, sums: &'s [u64], c: usize) -> &'s [u64] {
        &sums[c * self.words..(c + 1) * self.words]
    }

    #[inline]
    fn has(&self, sums: &[u64], c: usize, g: usize) -> bool {
        self.layer(sums, c)[g / 64] >> (g % 64) & 1 == 1
    }

    fn creates_zero_sum(&self, sums: &[u64], x: usize) -> bool {
        let target = self.ig.neg(x);
        match self.quantity {
            Quantity::S => self.has(sums, self.exp - 1, target),
            Quantity::Eta => (0..self.exp).any(|c| self.has(sums, c, target)),
        }
    }

    fn extend(&self, sums: &[u64], x: usize) -> Vec<u64> {
        let mut next = sums.to_vec();
        for c in (1..self.exp).rev() {
            let src = self.layer(sums, c - 1);
            for (wi, &word) in src.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let g = wi * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let h = self.ig.add(g, x);
                    next[c * self.words + h / 64] |= 1 << (h % 64);
                }
            }
        }
        next
    }

    fn out_of_budget(&mut self) -> bool {
        if self.stopped.is_some() {
            return true;
        }
        if self.nodes >= self.budget.max_nodes {
            self.stopped = Some(SearchStatus::LowerBoundOnly);
            return true;
        }
        if self.nodes.is_multiple_of(1024) && self.start.elapsed() >= self.budget.max_wall {
            self.stopped = Some(SearchStatus::BudgetExhausted);
            return true;
        }
        false
    }

    fn record(&mut self) {
        let len = self.word.len();
        let full = self.sym.len();
        match self.fixed_length {
            Some(target) => {
                if len == target && self.is_full_canonical() {
                    self.leaves.insert(self.word.clone());
                }
            }
            None => {
                if len > self.best_len {
                    self.best_len = len;
                    self.leaves.clear();
                }
                if len == self.best_len && (self.sym.interior_maps() == full || self.is_full_canonical()) {
                    self.leaves.insert(self.word.clone());
                }
                if len == self.saturation {
                    self.saturated = true;
                }
            }
        }
    }

    fn is_full_canonical(&mut self) -> bool {
        let mut buf = std::mem::take(&mut self.buf);
        let ok = self.sym.is_canonical(&self.word, self.sym.len(), &mut buf);
        self.buf = buf;
        ok
    }

    fn visit(&mut self, sums: &[u64]) {
        if self.out_of_budget() || self.saturated {
            return;
        }
        self.nodes += 1;
        self.record();
        if self.saturated || self.fixed_length == Some(self.word.len()) {
            return;
        }
        let cap = self.exp - 1;
        let interior = self.sym.interior_maps();
        let start = self.word.last().copied().unwrap_or(0) as usize;
        for x in start..self.ig.order {
            if self.counts[x] >= cap || self.creates_zero_sum(sums, x) {
                continue;
            }
            self.word.push(x as u32);
            let mut buf = std::mem::take(&mut self.buf);
            let canonical = self.sym.is_canonical(&self.word, interior, &mut buf);
            self.buf = buf;
            if canonical {
                self.counts[x] += 1;
                let next = self.extend(sums, x);
                self.visit(&next);
                self.counts[x] -= 1;
            }
            self.word.pop();
            if self.stopped.is_some() || self.saturated {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;
    use crate::search::find_zero_sum;
    use crate::sequence::LengthSpec;

    fn grp(spec: &str) -> FiniteAbelianGroup {
        spec.parse().unwrap()
    }

    fn exact(spec: &str, q: Quantity) -> SearchOutcome {
        let out = exact_value(&grp(spec), q, SearchBudget::default()).unwrap();
        assert_eq!(out.status, SearchStatus::Exact);
        out
    }

    #[test]
    fn small_s_values() {
        assert_eq!(exact("Z2", Quantity::S).value, 3);
        assert_eq!(exact("Z3", Quantity::S).value, 5);
        assert_eq!(exact("Z2^2", Quantity::S).value, 5);
        assert_eq!(exact("Z4", Quantity::S).value, 7);
        assert_eq!(exact("Z3^2", Quantity::S).value, 9);
    }

    #[test]
    fn small_eta_values() {
        assert_eq!(exact("Z3", Quantity::Eta).value, 3);
        assert_eq!(exact("Z2^2", Quantity::Eta).value, 4);
        assert_eq!(exact("Z3^2", Quantity::Eta).value, 7);
    }

    #[test]
    fn extremal_example_is_certified() {
        for (spec, q) in [("Z5", Quantity::S), ("Z3^2", Quantity::S), ("Z3^2", Quantity::Eta), ("Z4xZ2", Quantity::S)] {
            let out = exact(spec, q);
            let ex = out.extremal_example.as_ref().unwrap();
            assert_eq!(ex.len(), out.value - 1);
            let k = out.group.exponent_u64().unwrap();
            let target = match q {
                Quantity::S => LengthSpec::Exactly(k),
                Quantity::Eta => LengthSpec::AtMost(k),
            };
            for seq in &out.extremal_sequences {
                assert_eq!(find_zero_sum(seq, target).unwrap(), None, "{spec} {seq}");
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let e = enumerate_extremal(&grp("Z3"), 4, SearchBudget::default()).unwrap();
        assert!(e.complete);
        let want = Sequence::from_coords(grp("Z3"), &[&[0], &[0], &[1], &[1]]).unwrap();
        assert!(e.sequences.contains(&want));

        let e = enumerate_extremal(&grp("Z3"), 5, SearchBudget::default()).unwrap();
        assert!(e.complete && e.sequences.is_empty());

        // Z_2 at length 1: one orbit, represented by (0) and containing (1)
        let e = enumerate_extremal(&grp("Z2"), 1, SearchBudget::default()).unwrap();
        assert_eq!(e.sequences.len(), 1);
        let one = Sequence::from_coords(grp("Z2"), &[&[1]]).unwrap();
        assert_eq!(one.translate(&GroupElement::new(vec![1])).unwrap(), e.sequences[0]);

        assert!(matches!(
            enumerate_extremal(&grp("Z3"), 0, SearchBudget::default()),
            Err(Error::InvalidTarget(_))
        ));
    }

    #[test]
    fn node_budget_gives_lower_bound() {
        let out = exact_s(&grp("Z7"), SearchBudget::nodes(20)).unwrap();
        assert_eq!(out.status, SearchStatus::LowerBoundOnly);
        assert!(out.value <= 13);
        let ex = out.extremal_example.unwrap();
        assert_eq!(ex.len(), out.value - 1);
        assert_eq!(find_zero_sum(&ex, LengthSpec::Exactly(7)).unwrap(), None);

        let e = enumerate_extremal(&grp("Z5"), 8, SearchBudget::nodes(5)).unwrap();
        assert!(!e.complete);
    }

    #[test]
    fn never_enumerates_past_multiplicity_cap() {
        let out = exact("Z6", Quantity::S);
        for seq in &out.extremal_sequences {
            assert!(seq.multiplicities().values().all(|&m| m < 6));
        }
    }
}

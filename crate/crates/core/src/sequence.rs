//! Sequences (multisets) over a group, zero-sum witnesses and the sequence file format.
//!
//! File format: one element per line as comma-separated residues against the canonical
//! factor list, `#` starts a comment, blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};

/// Required length of a zero-sum subsequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LengthSpec {
    Exactly(u64),
    AtMost(u64),
}

impl LengthSpec {
    pub fn bound(self) -> u64 {
        match self {
            LengthSpec::Exactly(l) | LengthSpec::AtMost(l) => l,
        }
    }

    pub fn admits(self, len: u64) -> bool {
        match self {
            LengthSpec::Exactly(l) => len == l,
            LengthSpec::AtMost(l) => len >= 1 && len <= l,
        }
    }

    pub(crate) fn validate(self) -> Result<()> {
        if self.bound() == 0 {
            return Err(Error::InvalidTarget(
                "target length must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    group: FiniteAbelianGroup,
    counts: BTreeMap<GroupElement, u64>,
    len: u64,
}

impl Sequence {
    pub fn new(group: FiniteAbelianGroup) -> Self {
        Sequence {
            group,
            counts: BTreeMap::new(),
            len: 0,
        }
    }

    pub fn from_elements<I>(group: FiniteAbelianGroup, elems: I) -> Result<Self>
    where
        I: IntoIterator<Item = GroupElement>,
    {
        let mut s = Sequence::new(group);
        for e in elems {
            s.push(e, 1)?;
        }
        Ok(s)
    }

    /// Convenience for tests and examples: each inner slice is one element's coordinates.
    pub fn from_coords(group: FiniteAbelianGroup, elems: &[&[u64]]) -> Result<Self> {
        Self::from_elements(group, elems.iter().map(|c| GroupElement::new(c.to_vec())))
    }

    pub fn push(&mut self, e: GroupElement, multiplicity: u64) -> Result<()> {
        if !self.group.contains(&e) {
            return Err(Error::GroupMismatch {
                group: self.group.to_string(),
            });
        }
        if multiplicity == 0 {
            return Ok(());
        }
        *self.counts.entry(e).or_insert(0) += multiplicity;
        self.len += multiplicity;
        Ok(())
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn multiplicities(&self) -> &BTreeMap<GroupElement, u64> {
        &self.counts
    }

    pub fn multiplicity(&self, e: &GroupElement) -> u64 {
        self.counts.get(e).copied().unwrap_or(0)
    }

    /// Elements with repetition, in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = &GroupElement> + '_ {
        self.counts
            .iter()
            .flat_map(|(e, &m)| std::iter::repeat_n(e, m as usize))
    }

    /// Every element shifted by `c`.
    pub fn translate(&self, c: &GroupElement) -> Result<Sequence> {
        let mut out = Sequence::new(self.group.clone());
        for (e, &m) in &self.counts {
            out.push(self.group.add(e, c)?, m)?;
        }
        Ok(out)
    }

    /// `S = T^m` for a set `T`: every multiplicity equals `m`.
    pub fn is_set_power(&self, m: u64) -> bool {
        !self.counts.is_empty() && self.counts.values().all(|&c| c == m)
    }

    pub fn sum(&self) -> GroupElement {
        let mut acc = self.group.zero();
        for (e, &m) in &self.counts {
            let part = self.group.scalar_multiple(e, m).expect("member element");
            acc = self.group.add(&acc, &part).expect("member element");
        }
        acc
    }

    /// Parse the line-oriented sequence file format.
    pub fn parse_file(group: &FiniteAbelianGroup, text: &str) -> Result<Sequence> {
        let mut s = Sequence::new(group.clone());
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let coords = line
                .split(',')
                .map(|t| t.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::SequenceParse {
                    line: line_no,
                    reason: format!("bad residue: {e}"),
                })?;
            let elem = GroupElement::new(coords);
            if !group.contains(&elem) {
                return Err(Error::SequenceParse {
                    line: line_no,
                    reason: format!(
                        "{elem} is not an element of {group} (expected {} residues against factors {:?})",
                        group.rank(),
                        group.factors()
                    ),
                });
            }
            s.push(elem, 1)?;
        }
        Ok(s)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for e in self.elements() {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    /// Compact single-line rendering, e.g. `[0,0; 0,1; 1,1]`.
    pub fn to_compact(&self) -> String {
        let parts: Vec<String> = self.elements().map(|e| e.to_string()).collect();
        format!("[{}]", parts.join("; "))
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_compact())
    }
}

/// Serialized as the group string plus one string per element (with repetition).
impl Serialize for Sequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            group: &'a FiniteAbelianGroup,
            elements: Vec<String>,
        }
        Repr {
            group: &self.group,
            elements: self.elements().map(|e| e.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Sequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            group: FiniteAbelianGroup,
            elements: Vec<String>,
        }
        let r = Repr::deserialize(d)?;
        Sequence::parse_file(&r.group, &r.elements.join("\n")).map_err(serde::de::Error::custom)
    }
}

/// A sub-multiset of a queried sequence whose elements sum to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSumWitness {
    pub sub_multiplicities: BTreeMap<GroupElement, u64>,
    pub length: u64,
}

impl ZeroSumWitness {
    pub fn elements(&self) -> impl Iterator<Item = &GroupElement> + '_ {
        self.sub_multiplicities
            .iter()
            .flat_map(|(e, &m)| std::iter::repeat_n(e, m as usize))
    }

    /// Independent recomputation: containment, zero sum and length.
    pub fn verify(&self, s: &Sequence, target: LengthSpec) -> bool {
        let g = s.group();
        let mut total = 0u64;
        let mut acc = g.zero();
        for (e, &m) in &self.sub_multiplicities {
            if m == 0 || m > s.multiplicity(e) {
                return false;
            }
            total += m;
            for _ in 0..m {
                acc = match g.add(&acc, e) {
                    Ok(v) => v,
                    Err(_) => return false,
                };
            }
        }
        total == self.length && target.admits(total) && acc == g.zero()
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for e in self.elements() {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_format_round_trip_and_errors() {
        let g: FiniteAbelianGroup = "Z3^2".parse().unwrap();
        let text = "# extremal candidate\n0,0\n\n0,1  # trailing comment\n0,1\n";
        let s = Sequence::parse_file(&g, text).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.multiplicity(&GroupElement::new(vec![0, 1])), 2);
        assert_eq!(Sequence::parse_file(&g, &s.to_file_string()).unwrap(), s);

        assert!(matches!(
            Sequence::parse_file(&g, "0,0\n1,x\n"),
            Err(Error::SequenceParse { line: 2, .. })
        ));
        assert!(matches!(
            Sequence::parse_file(&g, "0,0\n\n3,0\n"),
            Err(Error::SequenceParse { line: 3, .. })
        ));
        assert!(matches!(
            Sequence::parse_file(&g, "1\n"),
            Err(Error::SequenceParse { line: 1, .. })
        ));
    }

    #[test]
    fn set_power_and_sum() {
        let g: FiniteAbelianGroup = "Z3".parse().unwrap();
        let s = Sequence::from_coords(g.clone(), &[&[0], &[0], &[1], &[1]]).unwrap();
        assert!(s.is_set_power(2));
        assert!(!s.is_set_power(1));
        assert_eq!(s.sum(), GroupElement::new(vec![2]));
        let t = s.translate(&GroupElement::new(vec![1])).unwrap();
        assert_eq!(t, Sequence::from_coords(g, &[&[1], &[1], &[2], &[2]]).unwrap());
    }

    #[test]
    fn serde_round_trip() {
        let g: FiniteAbelianGroup = "Z4xZ2".parse().unwrap();
        let s = Sequence::from_coords(g, &[&[1, 1], &[3, 0], &[1, 1]]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        let back: Sequence = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}

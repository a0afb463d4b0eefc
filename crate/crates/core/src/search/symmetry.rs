//! Symmetries preserving the zero-sum structure of sequences.
//!
//! Translations `x ↦ x + c` preserve "has a zero-sum subsequence of length exp(G)" because
//! `exp(G)·c = 0`; they do not preserve the shorter lengths η cares about, so η searches use
//! automorphisms only. For elementary Abelian `(Z_p)^n` every linear map `x ↦ Mx` with
//! `M ∈ GL(n, p)` is an automorphism; for every group the unit scalings `x ↦ ux` are.
//! Groups act on element indices as permutations; a sorted multiset is canonical when it is
//! the lexicographic minimum of its orbit.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::FiniteAbelianGroup;
use crate::search::{IndexedGroup, Quantity};

/// Elementary Abelian groups up to this order get the full affine (or linear) group.
pub const AFFINE_MAX_ORDER: usize = 81;
/// Cap on the number of maps materialized as permutations.
pub const AFFINE_MAX_MAPS: usize = 400_000;
/// Interior search nodes are tested against the full group only when it is at most this big.
pub const INTERIOR_FULL_TEST_MAPS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryKind {
    /// `x ↦ x + c`.
    Translations,
    /// `x ↦ ux` for units `u` modulo the exponent.
    UnitScalings,
    /// `x ↦ Mx + c`, `M ∈ GL(rank, prime)`.
    Affine { prime: u64, rank: usize, linear_maps: usize },
    /// `x ↦ Mx`, `M ∈ GL(rank, prime)`.
    Linear { prime: u64, rank: usize, linear_maps: usize },
}

#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    kind: SymmetryKind,
    degree: usize,
    /// Leading maps forming a cheap subgroup (translations or unit scalings).
    base: usize,
    /// Flattened permutations, identity first.
    perms: Vec<u32>,
}

impl SymmetryGroup {
    pub fn for_group(group: &FiniteAbelianGroup, quantity: Quantity) -> Result<Self> {
        let ig = IndexedGroup::new(group)?;
        Ok(Self::build(group, &ig, quantity))
    }

    pub(crate) fn build(group: &FiniteAbelianGroup, ig: &IndexedGroup, quantity: Quantity) -> Self {
        let n = ig.order;
        let exp = ig.exponent as usize;
        let mut perms = Vec::new();
        let units: Vec<usize> = (1..exp.max(2))
            .filter(|&u| num_integer::gcd(u, exp) == 1)
            .collect();
        let scale = |x: usize, u: usize| {
            let d: Vec<usize> = ig.digits(x).into_iter().map(|v| v * u).collect();
            ig.index_of_digits(&ig.reduce(&d))
        };
        let (mut kind, base) = match quantity {
            Quantity::S => {
                for c in 0..n {
                    perms.extend((0..n).map(|x| ig.add(x, c) as u32));
                }
                (SymmetryKind::Translations, n)
            }
            Quantity::Eta => {
                for &u in &units {
                    perms.extend((0..n).map(|x| scale(x, u) as u32));
                }
                (SymmetryKind::UnitScalings, units.len())
            }
        };

        if let Some((p, r)) = group.as_elementary() {
            let gl = gl_order(p, r);
            let total = match quantity {
                Quantity::S => gl.saturating_mul(n),
                Quantity::Eta => gl,
            };
            if n <= AFFINE_MAX_ORDER && total <= AFFINE_MAX_MAPS {
                let mats = invertible_matrices(p as usize, r);
                let apply = |m: &[usize], x: usize| {
                    let d = ig.digits(x);
                    let image: Vec<usize> = (0..r)
                        .map(|i| (0..r).map(|j| m[i * r + j] * d[j]).sum::<usize>() % p as usize)
                        .collect();
                    ig.index_of_digits(&image)
                };
                for m in mats.iter().filter(|m| scalar_of(m, r).is_none()) {
                    match quantity {
                        Quantity::S => {
                            for c in 0..n {
                                perms.extend((0..n).map(|x| ig.add(apply(m, x), c) as u32));
                            }
                        }
                        Quantity::Eta => perms.extend((0..n).map(|x| apply(m, x) as u32)),
                    }
                }
                // the translation-only base for s still lacks the nonidentity scalar matrices
                if quantity == Quantity::S {
                    for m in mats.iter().filter(|m| matches!(scalar_of(m, r), Some(u) if u != 1)) {
                        for c in 0..n {
                            perms.extend((0..n).map(|x| ig.add(apply(m, x), c) as u32));
                        }
                    }
                }
                kind = match quantity {
                    Quantity::S => SymmetryKind::Affine {
                        prime: p,
                        rank: r,
                        linear_maps: mats.len(),
                    },
                    Quantity::Eta => SymmetryKind::Linear {
                        prime: p,
                        rank: r,
                        linear_maps: mats.len(),
                    },
                };
            }
        }
        SymmetryGroup {
            kind,
            degree: n,
            base,
            perms,
        }
    }

    pub fn kind(&self) -> &SymmetryKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.perms.len() / self.degree
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    /// Size of the leading cheap subgroup.
    pub fn base_maps(&self) -> usize {
        self.base
    }

    /// How many leading maps interior search nodes are tested against.
    pub fn interior_maps(&self) -> usize {
        if self.len() <= INTERIOR_FULL_TEST_MAPS {
            self.len()
        } else {
            self.base
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            SymmetryKind::Translations => format!("translations ({} maps)", self.len()),
            SymmetryKind::UnitScalings => format!("unit scalings ({} maps)", self.len()),
            SymmetryKind::Affine { prime, rank, .. } => {
                format!("affine AGL({rank},{prime}) ({} maps)", self.len())
            }
            SymmetryKind::Linear { prime, rank, .. } => {
                format!("linear GL({rank},{prime}) ({} maps)", self.len())
            }
        }
    }

    #[inline]
    fn perm(&self, i: usize) -> &[u32] {
        &self.perms[i * self.degree..(i + 1) * self.degree]
    }

    /// Whether sorted `w` is the lexicographic minimum of its orbit under the first `maps`
    /// group elements. Testing against a prefix that is a subgroup is always sound for
    /// pruning: a full-group minimum is also a subgroup minimum.
    pub fn is_canonical(&self, w: &[u32], maps: usize, buf: &mut Vec<u32>) -> bool {
        if w.is_empty() {
            return true;
        }
        let first = w[0];
        for i in 1..maps.min(self.len()) {
            let pi = self.perm(i);
            let mut lo = u32::MAX;
            for &x in w {
                lo = lo.min(pi[x as usize]);
                if lo < first {
                    return false;
                }
            }
            if lo > first {
                continue;
            }
            buf.clear();
            buf.extend(w.iter().map(|&x| pi[x as usize]));
            buf.sort_unstable();
            if buf.as_slice() < w {
                return false;
            }
        }
        true
    }

    /// Lexicographically minimal sorted image of `w` over the whole group.
    pub fn canonical_form(&self, w: &[u32]) -> Vec<u32> {
        let mut best: Vec<u32> = w.to_vec();
        best.sort_unstable();
        let mut buf = Vec::with_capacity(w.len());
        for i in 1..self.len() {
            let pi = self.perm(i);
            buf.clear();
            buf.extend(w.iter().map(|&x| pi[x as usize]));
            buf.sort_unstable();
            if buf < best {
                std::mem::swap(&mut buf, &mut best);
            }
        }
        best
    }
}

/// `|GL(r, p)| = Π_{i<r} (p^r − p^i)`, saturating.
pub fn gl_order(p: u64, r: usize) -> usize {
    let pr = (p as usize).saturating_pow(r as u32);
    (0..r).fold(1usize, |acc, i| {
        acc.saturating_mul(pr.saturating_sub((p as usize).saturating_pow(i as u32)))
    })
}

/// `Some(u)` when `m = u·I`.
fn scalar_of(m: &[usize], r: usize) -> Option<usize> {
    let u = m[0];
    (0..r)
        .all(|i| (0..r).all(|j| m[i * r + j] == if i == j { u } else { 0 }))
        .then_some(u)
}

/// All invertible `r × r` matrices over `F_p`, row-major, in lexicographic order.
fn invertible_matrices(p: usize, r: usize) -> Vec<Vec<usize>> {
    let cells = r * r;
    let total = p.pow(cells as u32);
    let mut out = Vec::new();
    let mut m = vec![0usize; cells];
    for code in 0..total {
        let mut c = code;
        for cell in (0..cells).rev() {
            m[cell] = c % p;
            c /= p;
        }
        if rank_mod_p(&m, r, p) == r {
            out.push(m.clone());
        }
    }
    out
}

fn rank_mod_p(m: &[usize], r: usize, p: usize) -> usize {
    let mut a = m.to_vec();
    let mut rank = 0;
    for col in 0..r {
        let Some(pivot) = (rank..r).find(|&row| !a[row * r + col].is_multiple_of(p)) else {
            continue;
        };
        for j in 0..r {
            a.swap(rank * r + j, pivot * r + j);
        }
        let inv = mod_inverse(a[rank * r + col], p);
        for j in 0..r {
            a[rank * r + j] = a[rank * r + j] * inv % p;
        }
        for row in 0..r {
            if row != rank && a[row * r + col] != 0 {
                let f = a[row * r + col];
                for j in 0..r {
                    a[row * r + j] = (a[row * r + j] + p * p - f * a[rank * r + j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse(a: usize, p: usize) -> usize {
    (1..p).find(|&x| a * x % p == 1).expect("p prime and a nonzero")
}

use std::collections::BTreeMap;

use crate::error::Result;
use crate::search::IndexedGroup;
use crate::sequence::{LengthSpec, Sequence, ZeroSumWitness};

const UNREACHED: u32 = u32::MAX;

/// Find a zero-sum subsequence of `seq` whose length satisfies `target`.
///
/// Dynamic programming over states `(element, count)` with `count ≤ ℓ`. Each state stores the
/// index of the first distinct element (in canonical order) after which it became reachable,
/// which is enough to backtrack a witness without keeping per-layer tables. The total work is
/// `O(|S| · |G| · ℓ)` state updates.
pub fn find_zero_sum(seq: &Sequence, target: LengthSpec) -> Result<Option<ZeroSumWitness>> {
    target.validate()?;
    let ell = match target {
        LengthSpec::Exactly(l) if l > seq.len() => return Ok(None),
        LengthSpec::Exactly(l) => l,
        LengthSpec::AtMost(l) => l.min(seq.len()),
    } as usize;
    if ell == 0 {
        return Ok(None);
    }

    let group = seq.group();
    let ig = IndexedGroup::new(group)?;
    let n = ig.order;
    let items: Vec<(usize, usize, &crate::group::GroupElement)> = seq
        .multiplicities()
        .iter()
        .map(|(e, &m)| (group.index_of(e).expect("member"), (m as usize).min(ell), e))
        .collect();

    // first[c * n + g]: 0 for the empty sum, i for "first reachable using items 1..=i"
    let mut first = vec![UNREACHED; (ell + 1) * n];
    first[0] = 0;
    let mut found: Option<usize> = None;
    // multiples[j] = -(j·x)
    let mut neg_multiples = vec![0usize; ell + 1];

    'items: for (pos, &(x, m, _)) in items.iter().enumerate() {
        let layer = (pos + 1) as u32;
        neg_multiples[0] = 0;
        for j in 1..=m {
            neg_multiples[j] = ig.add(neg_multiples[j - 1], ig.neg(x));
        }
        for c in (1..=ell).rev() {
            let jmax = m.min(c);
            for g in 0..n {
                if first[c * n + g] != UNREACHED {
                    continue;
                }
                for j in 1..=jmax {
                    let prev = ig.add(g, neg_multiples[j]);
                    if first[(c - j) * n + prev] < layer {
                        first[c * n + g] = layer;
                        break;
                    }
                }
            }
        }
        found = match target {
            LengthSpec::Exactly(_) => (first[ell * n] != UNREACHED).then_some(ell),
            LengthSpec::AtMost(_) => (1..=ell).find(|&c| first[c * n] != UNREACHED),
        };
        if found.is_some() {
            break 'items;
        }
    }

    let Some(mut c) = found else {
        return Ok(None);
    };
    let length = c as u64;
    let mut g = 0usize;
    let mut picked: BTreeMap<crate::group::GroupElement, u64> = BTreeMap::new();
    while c > 0 {
        let layer = first[c * n + g];
        let (x, m, elem) = items[layer as usize - 1];
        let mut step = None;
        let mut acc = g;
        for j in 1..=m.min(c) {
            acc = ig.add(acc, ig.neg(x));
            if first[(c - j) * n + acc] < layer {
                step = Some((j, acc));
                break;
            }
        }
        let (j, prev) = step.expect("reachable state has a predecessor");
        picked.insert(elem.clone(), j as u64);
        c -= j;
        g = prev;
    }
    Ok(Some(ZeroSumWitness {
        sub_multiplicities: picked,
        length,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteAbelianGroup, GroupElement};
    use crate::Error;
    use proptest::prelude::*;

    fn seq(spec: &str, elems: &[&[u64]]) -> Sequence {
        Sequence::from_coords(spec.parse().unwrap(), elems).unwrap()
    }

    #[test]
    fn spec_examples() {
        let s = seq("Z3", &[&[1], &[1], &[1]]);
        let w = find_zero_sum(&s, LengthSpec::Exactly(3)).unwrap().unwrap();
        assert_eq!(w.sub_multiplicities, BTreeMap::from([(GroupElement::new(vec![1]), 3)]));
        assert!(w.verify(&s, LengthSpec::Exactly(3)));

        let s = seq("Z3", &[&[1], &[1]]);
        assert_eq!(find_zero_sum(&s, LengthSpec::Exactly(3)).unwrap(), None);

        let s = seq("Z3", &[&[1], &[2], &[0], &[1]]);
        let w = find_zero_sum(&s, LengthSpec::Exactly(3)).unwrap().unwrap();
        let expected: BTreeMap<_, _> = [0u64, 1, 2]
            .into_iter()
            .map(|r| (GroupElement::new(vec![r]), 1))
            .collect();
        assert_eq!(w.sub_multiplicities, expected);
    }

    #[test]
    fn at_most_targets() {
        let s = seq("Z4", &[&[1], &[2]]);
        assert_eq!(find_zero_sum(&s, LengthSpec::AtMost(4)).unwrap(), None);
        let s = seq("Z4", &[&[2], &[2]]);
        let w = find_zero_sum(&s, LengthSpec::AtMost(4)).unwrap().unwrap();
        assert_eq!(w.length, 2);
        let s = seq("Z5", &[&[0]]);
        let w = find_zero_sum(&s, LengthSpec::AtMost(5)).unwrap().unwrap();
        assert_eq!(w.length, 1);
    }

    #[test]
    fn zero_target_is_rejected() {
        let s = seq("Z3", &[&[0]]);
        assert!(matches!(
            find_zero_sum(&s, LengthSpec::Exactly(0)),
            Err(Error::InvalidTarget(_))
        ));
        assert!(matches!(
            find_zero_sum(&s, LengthSpec::AtMost(0)),
            Err(Error::InvalidTarget(_))
        ));
    }

    #[test]
    fn multiplicity_cap_forces_zero_sum() {
        for spec in ["Z2", "Z5", "Z3^2", "Z4xZ2", "Z6"] {
            let g: FiniteAbelianGroup = spec.parse().unwrap();
            let k = g.exponent_u64().unwrap();
            for e in g.enumerate_elements() {
                let mut s = Sequence::new(g.clone());
                s.push(e.clone(), k).unwrap();
                let w = find_zero_sum(&s, LengthSpec::Exactly(k)).unwrap();
                assert!(w.is_some(), "{spec} {e}");
            }
        }
    }

    fn arb_instance() -> impl Strategy<Value = (Sequence, LengthSpec)> {
        let groups = prop_oneof![
            Just("Z5"),
            Just("Z6"),
            Just("Z8"),
            Just("Z2^3"),
            Just("Z3^2"),
            Just("Z4xZ2")
        ];
        (groups, proptest::collection::vec(0usize..1000, 0..12), any::<bool>()).prop_map(
            |(spec, raw, exactly)| {
                let g: FiniteAbelianGroup = spec.parse().unwrap();
                let n = g.order_u64().unwrap() as usize;
                let k = g.exponent_u64().unwrap();
                let s = Sequence::from_elements(g.clone(), raw.iter().map(|r| g.element_at(r % n)))
                    .unwrap();
                let t = if exactly {
                    LengthSpec::Exactly(k)
                } else {
                    LengthSpec::AtMost(k)
                };
                (s, t)
            },
        )
    }

    proptest! {
        #[test]
        fn witnesses_verify((s, t) in arb_instance()) {
            if let Some(w) = find_zero_sum(&s, t).unwrap() {
                prop_assert!(w.verify(&s, t));
            }
        }

        #[test]
        fn translation_invariance((s, _t) in arb_instance(), shift in 0usize..1000) {
            let g = s.group().clone();
            let k = g.exponent_u64().unwrap();
            let c = g.element_at(shift % g.order_u64().unwrap() as usize);
            let moved = s.translate(&c).unwrap();
            let a = find_zero_sum(&s, LengthSpec::Exactly(k)).unwrap().is_some();
            let b = find_zero_sum(&moved, LengthSpec::Exactly(k)).unwrap().is_some();
            prop_assert_eq!(a, b);
        }
    }
}

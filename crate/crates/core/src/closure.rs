//! Explicit closure systems: the intents (or, on the dual, extents) of a
//! context, enumerated in lectic order.

use std::collections::HashSet;

use crate::bitset::BitSet;
use crate::context::{AttributeSet, FormalContext, ObjectSet};
use crate::error::{Error, Result};

/// Largest attribute count [`enumerate_intents`] accepts unless the caller
/// passes a larger cap.
pub const DEFAULT_ENUMERATION_CAP: usize = 30;

/// Largest attribute count accepted by the powerset oracle.
pub const POWERSET_LIMIT: usize = 15;

/// An intersection-closed family of subsets of `0..ground_set_size` that
/// contains the full set.
#[derive(Debug, Clone)]
pub struct ClosureFamily {
    ground_set_size: usize,
    members: Vec<BitSet>,
    index: HashSet<BitSet>,
}

impl PartialEq for ClosureFamily {
    fn eq(&self, other: &Self) -> bool {
        self.ground_set_size == other.ground_set_size && self.index == other.index
    }
}

impl Eq for ClosureFamily {}

impl ClosureFamily {
    /// Wraps an explicit family after checking that it is a closure system:
    /// every member is over the ground set, the full set is present, and
    /// pairwise intersections stay in the family. Duplicates are dropped;
    /// member order is kept.
    pub fn from_members(ground_set_size: usize, members: Vec<BitSet>) -> Result<Self> {
        if let Some(bad) = members.iter().find(|m| m.universe() != ground_set_size) {
            return Err(Error::input(format!(
                "member over {} elements, ground set has {ground_set_size}",
                bad.universe()
            )));
        }
        let fam = Self::from_unchecked(ground_set_size, members);
        if !fam.contains_unchecked(&BitSet::full(ground_set_size)) {
            return Err(Error::input("family does not contain the full ground set"));
        }
        for (i, x) in fam.members.iter().enumerate() {
            for y in &fam.members[i + 1..] {
                if !fam.contains_unchecked(&x.intersection(y)) {
                    return Err(Error::input(format!(
                        "family is not intersection-closed: {x:?} ∩ {y:?} is missing"
                    )));
                }
            }
        }
        Ok(fam)
    }

    fn from_unchecked(ground_set_size: usize, members: Vec<BitSet>) -> Self {
        let mut index = HashSet::with_capacity(members.len());
        let members: Vec<BitSet> = members
            .into_iter()
            .filter(|m| index.insert(m.clone()))
            .collect();
        ClosureFamily {
            ground_set_size,
            members,
            index,
        }
    }

    pub fn ground_set_size(&self) -> usize {
        self.ground_set_size
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[BitSet] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BitSet> {
        self.members.iter()
    }

    /// Membership test; errors if `set` is over a different ground set.
    pub fn contains(&self, set: &BitSet) -> Result<bool> {
        if set.universe() != self.ground_set_size {
            return Err(Error::input(format!(
                "set over {} elements, family ground set has {}",
                set.universe(),
                self.ground_set_size
            )));
        }
        Ok(self.index.contains(set))
    }

    #[inline]
    pub(crate) fn contains_unchecked(&self, set: &BitSet) -> bool {
        self.index.contains(set)
    }

    /// One line per member, element names joined by commas. For debugging
    /// only.
    pub fn export(&self, names: &[String]) -> String {
        let mut out = String::new();
        for m in &self.members {
            let line: Vec<&str> = m.iter().map(|i| names[i].as_str()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

impl<'a> IntoIterator for &'a ClosureFamily {
    type Item = &'a BitSet;
    type IntoIter = std::slice::Iter<'a, BitSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// A pair `(A, B)` with `A' = B` and `B' = A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalConcept {
    pub extent: ObjectSet,
    pub intent: AttributeSet,
}

fn check_cap(ctx: &FormalContext, cap: usize) -> Result<()> {
    if ctx.num_attributes() > cap {
        return Err(Error::CapExceeded {
            what: "intent enumeration",
            size: ctx.num_attributes(),
            cap,
        });
    }
    Ok(())
}

fn closure(ctx: &FormalContext, set: &AttributeSet) -> AttributeSet {
    let mut extent = BitSet::full(ctx.num_objects());
    for m in set {
        extent.intersect_with(ctx.column(m));
    }
    let mut intent = BitSet::full(ctx.num_attributes());
    for g in &extent {
        intent.intersect_with(ctx.row(g));
    }
    intent
}

/// All intents of `ctx` in lectic order (NextClosure), starting from `∅''`.
pub fn enumerate_intents(ctx: &FormalContext, cap: usize) -> Result<ClosureFamily> {
    check_cap(ctx, cap)?;
    let n = ctx.num_attributes();
    let mut current = closure(ctx, &BitSet::empty(n));
    let mut members = vec![current.clone()];
    'outer: loop {
        for i in (0..n).rev() {
            if current.contains(i) {
                continue;
            }
            let mut candidate = current.clone();
            for j in i..n {
                candidate.remove(j);
            }
            candidate.insert(i);
            let next = closure(ctx, &candidate);
            if next.agrees_below(&current, i) {
                members.push(next.clone());
                current = next;
                continue 'outer;
            }
        }
        break;
    }
    Ok(ClosureFamily::from_unchecked(n, members))
}

/// Intents by brute force: `B''` for every `B ⊆ M`. Independent of
/// [`enumerate_intents`]; kept as a cross-check. Members are sorted by their
/// bit pattern read as an integer.
pub fn powerset_intents(ctx: &FormalContext) -> Result<ClosureFamily> {
    check_cap(ctx, POWERSET_LIMIT)?;
    let n = ctx.num_attributes();
    let mut seen = HashSet::new();
    for mask in 0u32..(1u32 << n) {
        let set = BitSet::from_indices(n, (0..n).filter(|&i| mask >> i & 1 == 1));
        seen.insert(ctx.close_attributes(&set)?);
    }
    let mut members: Vec<BitSet> = seen.into_iter().collect();
    members.sort_by_key(|s| s.iter().map(|i| 1u64 << i).sum::<u64>());
    Ok(ClosureFamily::from_unchecked(n, members))
}

/// One concept per intent, in lectic order of intents.
pub fn enumerate_concepts(ctx: &FormalContext, cap: usize) -> Result<Vec<FormalConcept>> {
    let family = enumerate_intents(ctx, cap)?;
    family
        .members
        .into_iter()
        .map(|intent| {
            Ok(FormalConcept {
                extent: ctx.derive_attributes(&intent)?,
                intent,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::hobbies;
    use crate::io::{random_context, RandomContextSpec};

    fn sets(ctx: &FormalContext, fam: &ClosureFamily) -> Vec<Vec<String>> {
        let mut v: Vec<Vec<String>> = fam
            .iter()
            .map(|s| s.iter().map(|i| ctx.attribute_names()[i].clone()).collect())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn hobbies_intents() {
        let k = hobbies();
        let fam = enumerate_intents(&k, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(fam.len(), 10);
        let expect: Vec<Vec<&str>> = vec![
            vec![],
            vec!["Biking"],
            vec!["Biking", "Jogging"],
            vec!["Biking", "Rafting"],
            vec!["Hiking"],
            vec!["Jogging"],
            vec!["Rafting"],
            vec!["Rafting", "Jogging"],
            vec!["Swimming"],
            vec!["Swimming", "Hiking", "Biking", "Rafting", "Jogging"],
        ];
        let mut expect: Vec<Vec<String>> = expect
            .into_iter()
            .map(|s| s.into_iter().map(String::from).collect())
            .collect();
        expect.sort();
        assert_eq!(sets(&k, &fam), expect);
        assert_eq!(fam, powerset_intents(&k).unwrap());
    }

    #[test]
    fn scale_intents() {
        let n3 = FormalContext::nominal_scale(3).unwrap();
        assert_eq!(enumerate_intents(&n3, 30).unwrap().len(), 5);
        let c3 = FormalContext::contranominal_scale(3).unwrap();
        assert_eq!(enumerate_intents(&c3, 30).unwrap().len(), 8);
    }

    #[test]
    fn concepts_examples() {
        assert_eq!(enumerate_concepts(&hobbies(), 30).unwrap().len(), 10);
        let n2 = FormalContext::nominal_scale(2).unwrap();
        assert_eq!(enumerate_concepts(&n2, 30).unwrap().len(), 4);
        let e = enumerate_concepts(&FormalContext::empty(), 30).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].extent.is_empty() && e[0].intent.is_empty());
    }

    #[test]
    fn contains_examples() {
        let k = hobbies();
        let fam = enumerate_intents(&k, 30).unwrap();
        assert!(fam.contains(&k.attributes_named(&["Biking", "Rafting"]).unwrap()).unwrap());
        assert!(!fam.contains(&k.attributes_named(&["Swimming", "Biking"]).unwrap()).unwrap());
        assert!(fam.contains(&BitSet::full(5)).unwrap());
        assert!(fam.contains(&BitSet::full(4)).is_err());
    }

    #[test]
    fn cap_refusal() {
        let k = random_context(&RandomContextSpec {
            num_objects: 3,
            num_attributes: 31,
            density: 0.5,
            seed: 1,
        })
        .unwrap();
        assert!(matches!(
            enumerate_intents(&k, DEFAULT_ENUMERATION_CAP),
            Err(Error::CapExceeded { size: 31, cap: 30, .. })
        ));
        assert!(enumerate_intents(&k, 31).is_ok());
        assert!(powerset_intents(&k).is_err());
    }

    #[test]
    fn from_members_validates() {
        let s = |v: &[usize]| BitSet::from_indices(3, v.iter().copied());
        assert!(ClosureFamily::from_members(3, vec![s(&[0, 1, 2]), s(&[0]), s(&[1])]).is_err());
        assert!(ClosureFamily::from_members(3, vec![s(&[0])]).is_err());
        let ok = ClosureFamily::from_members(3, vec![s(&[0, 1, 2]), s(&[0]), s(&[1]), s(&[])]);
        assert_eq!(ok.unwrap().len(), 4);
    }

    #[test]
    fn export_lists_names() {
        let k = FormalContext::nominal_scale(2).unwrap();
        let fam = enumerate_intents(&k, 30).unwrap();
        assert_eq!(fam.export(k.attribute_names()), "\n2\n1\n1,2\n");
    }
}

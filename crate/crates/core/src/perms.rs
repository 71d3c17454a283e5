//! Closure-preserving permutations of the attribute set.
//!
//! A clone pair `(a, b)` is the transposition `(a b)` preserving the intent
//! family. Dropping the "single transposition" restriction gives two
//! searches: products of disjoint transpositions, and arbitrary bijections.
//!
//! Cycle notation reads left to right: `(a c b d)` maps `a → c → b → d → a`.

use std::collections::HashSet;
use std::fmt;

use crate::bitset::BitSet;
use crate::clones::ClonePartition;
use crate::closure::ClosureFamily;
use crate::error::{Error, Result};

/// Largest ground set [`search_involutions`] accepts by default.
pub const DEFAULT_INVOLUTION_CAP: usize = 16;
/// Largest ground set [`search_permutations`] accepts by default.
pub const DEFAULT_PERMUTATION_CAP: usize = 12;

/// A bijection on `0..n` with its cycle decomposition and order cached.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    mapping: Vec<usize>,
    cycles: Vec<Vec<usize>>,
    order: u128,
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            mapping: (0..n).collect(),
            cycles: Vec::new(),
            order: 1,
        }
    }

    pub fn from_mapping(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &x in &mapping {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::input(format!("{mapping:?} is not a bijection on 0..{n}")));
            }
        }
        Ok(Self::from_bijection(mapping))
    }

    fn from_bijection(mapping: Vec<usize>) -> Self {
        let n = mapping.len();
        let mut visited = vec![false; n];
        let mut cycles = Vec::new();
        let mut order: u128 = 1;
        for start in 0..n {
            if visited[start] || mapping[start] == start {
                visited[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !visited[x] {
                visited[x] = true;
                cycle.push(x);
                x = mapping[x];
            }
            let len = cycle.len() as u128;
            order = (order / gcd(order, len)).saturating_mul(len);
            cycles.push(cycle);
        }
        Permutation {
            mapping,
            cycles,
            order,
        }
    }

    /// Builds from disjoint cycles over `0..n`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut mapping: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(Error::input(format!("cycle element {x} out of range 0..{n}")));
                }
                if std::mem::replace(&mut used[x], true) {
                    return Err(Error::input(format!("element {x} appears in more than one cycle position")));
                }
                mapping[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Self::from_bijection(mapping))
    }

    /// The transposition `(a b)` on `0..n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::input("transposition needs two distinct elements"));
        }
        Self::from_cycles(n, &[vec![a, b]])
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// Non-trivial cycles, each starting at its smallest element, ordered by
    /// that element.
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// Least `k ≥ 1` with `σᵏ = id` (saturating).
    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn is_identity(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn is_involution(&self) -> bool {
        self.cycles.iter().all(|c| c.len() == 2)
    }

    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.mapping[x]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (x, &y) in self.mapping.iter().enumerate() {
            inv[y] = x;
        }
        Self::from_bijection(inv)
    }

    /// `self` first, then `other`: `x ↦ other(self(x))`.
    pub fn then(&self, other: &Permutation) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::input("composing permutations of different size"));
        }
        Ok(Self::from_bijection(
            self.mapping.iter().map(|&y| other.mapping[y]).collect(),
        ))
    }

    /// `{σ(x) | x ∈ set}`.
    pub fn apply(&self, set: &BitSet) -> Result<BitSet> {
        if set.universe() != self.len() {
            return Err(Error::input(format!(
                "set over {} elements, permutation over {}",
                set.universe(),
                self.len()
            )));
        }
        Ok(self.apply_unchecked(set))
    }

    fn apply_unchecked(&self, set: &BitSet) -> BitSet {
        BitSet::from_indices(self.len(), set.iter().map(|x| self.mapping[x]))
    }

    /// Reduced cycle notation over `names`, e.g. `(a b)(c d)`; `id` for the
    /// identity.
    pub fn to_cycle_string(&self, names: &[String]) -> String {
        if self.is_identity() {
            return "id".to_string();
        }
        self.cycles
            .iter()
            .map(|c| {
                let parts: Vec<&str> = c.iter().map(|&x| names[x].as_str()).collect();
                format!("({})", parts.join(" "))
            })
            .collect()
    }

    /// Parses reduced cycle notation over `names`. Elements inside a cycle
    /// are separated by whitespace; a single token made only of one-character
    /// names, like `(acbd)`, is read character by character.
    pub fn parse(text: &str, names: &[String]) -> Result<Self> {
        let n = names.len();
        let text = text.trim();
        if text == "id" || text.is_empty() {
            return Ok(Self::identity(n));
        }
        let lookup = |tok: &str| names.iter().position(|m| m == tok);
        let mut cycles = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::input(format!("expected '(' in {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::input(format!("unclosed cycle in {text:?}")))?;
            let body = &open[..close];
            rest = open[close + 1..].trim_start();
            let tokens: Vec<&str> = body.split_whitespace().collect();
            let mut cycle = Vec::new();
            if tokens.len() == 1 && lookup(tokens[0]).is_none() {
                for ch in tokens[0].chars() {
                    let s = ch.to_string();
                    cycle.push(
                        lookup(&s).ok_or_else(|| Error::input(format!("unknown element {s:?}")))?,
                    );
                }
            } else {
                for tok in tokens {
                    cycle.push(
                        lookup(tok).ok_or_else(|| Error::input(format!("unknown element {tok:?}")))?,
                    );
                }
            }
            cycles.push(cycle);
        }
        Self::from_cycles(n, &cycles)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "id");
        }
        for c in &self.cycles {
            let parts: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

fn check_sizes(sigma: &Permutation, family: &ClosureFamily) -> Result<()> {
    if sigma.len() != family.ground_set_size() {
        return Err(Error::input(format!(
            "permutation over {} elements, family over {}",
            sigma.len(),
            family.ground_set_size()
        )));
    }
    Ok(())
}

/// True iff `σ(X)` is a member for every member `X`.
pub fn is_preserving(sigma: &Permutation, family: &ClosureFamily) -> Result<bool> {
    check_sizes(sigma, family)?;
    Ok(preserves(sigma.mapping(), family))
}

fn preserves(mapping: &[usize], family: &ClosureFamily) -> bool {
    let n = mapping.len();
    family.iter().all(|x| {
        family.contains_unchecked(&BitSet::from_indices(n, x.iter().map(|i| mapping[i])))
    })
}

/// The identity followed by one transposition per proper clone pair.
pub fn clone_pairs_as_permutations(partition: &ClonePartition) -> Vec<Permutation> {
    let n: usize = partition.classes.iter().map(Vec::len).sum();
    let mut out = vec![Permutation::identity(n)];
    for (a, b) in partition.proper_pairs() {
        out.push(Permutation::transposition(n, a, b).expect("distinct pair"));
    }
    out
}

/// Which permutations a search covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchSpace {
    /// Products of at most this many disjoint transpositions.
    Involutions { max_two_cycles: usize },
    /// All bijections, keeping those of order at most `max_order` when set.
    Bijections { max_order: Option<u128> },
}

#[derive(Debug, Clone)]
pub struct PermutationSearchResult {
    pub family_size: usize,
    /// Preserving permutations, ascending by mapping array.
    pub found: Vec<Permutation>,
    /// Whether every candidate of `space` was examined.
    pub exhaustive: bool,
    pub space: SearchSpace,
    pub includes_identity: bool,
}

/// For each element, how many members of each cardinality contain it. Any
/// preserving permutation maps an element to one with the same signature.
fn signatures(family: &ClosureFamily) -> Vec<Vec<usize>> {
    let n = family.ground_set_size();
    let mut sig = vec![vec![0usize; n + 1]; n];
    for x in family {
        let c = x.count();
        for i in x {
            sig[i][c] += 1;
        }
    }
    sig
}

fn check_cap(n: usize, cap: usize, what: &'static str) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { what, size: n, cap });
    }
    Ok(())
}

/// Every preserving product of at most `max_two_cycles` disjoint
/// transpositions.
///
/// A pair `(x y)` is only tried when `x` and `y` have the same signature and
/// `{x}` is a member exactly when `{y}` is.
pub fn search_involutions(
    family: &ClosureFamily,
    max_two_cycles: usize,
    cap: usize,
    include_identity: bool,
) -> Result<PermutationSearchResult> {
    let n = family.ground_set_size();
    check_cap(n, cap, "involution search")?;
    let sig = signatures(family);
    let singleton: Vec<bool> = (0..n)
        .map(|x| family.contains_unchecked(&BitSet::from_indices(n, [x])))
        .collect();
    let compatible = |x: usize, y: usize| sig[x] == sig[y] && singleton[x] == singleton[y];

    struct Walk<'a, F: Fn(usize, usize) -> bool> {
        n: usize,
        max: usize,
        family: &'a ClosureFamily,
        compatible: F,
        mapping: Vec<usize>,
        found: Vec<Permutation>,
    }

    impl<F: Fn(usize, usize) -> bool> Walk<'_, F> {
        fn go(&mut self, from: usize, depth: usize) {
            if depth > 0 && preserves(&self.mapping, self.family) {
                self.found.push(Permutation::from_bijection(self.mapping.clone()));
            }
            if depth == self.max {
                return;
            }
            for x in from..self.n {
                if self.mapping[x] != x {
                    continue;
                }
                for y in x + 1..self.n {
                    if self.mapping[y] != y || !(self.compatible)(x, y) {
                        continue;
                    }
                    self.mapping.swap(x, y);
                    self.go(x + 1, depth + 1);
                    self.mapping.swap(x, y);
                }
            }
        }
    }

    let mut walk = Walk {
        n,
        max: max_two_cycles,
        family,
        compatible,
        mapping: (0..n).collect(),
        found: Vec::new(),
    };
    walk.go(0, 0);
    let mut found = walk.found;
    if include_identity {
        found.push(Permutation::identity(n));
    }
    found.sort_unstable_by(|a, b| a.mapping.cmp(&b.mapping));
    Ok(PermutationSearchResult {
        family_size: family.len(),
        found,
        exhaustive: true,
        space: SearchSpace::Involutions { max_two_cycles },
        includes_identity: include_identity,
    })
}

/// Every preserving bijection (optionally only those of order at most
/// `max_order`), by backtracking over images `σ(0), σ(1), …`.
///
/// Branches die as soon as a member whose elements are all assigned maps
/// outside the family, or an element is sent to one with a different
/// signature.
pub fn search_permutations(
    family: &ClosureFamily,
    max_order: Option<u128>,
    cap: usize,
    include_identity: bool,
) -> Result<PermutationSearchResult> {
    let n = family.ground_set_size();
    check_cap(n, cap, "permutation search")?;
    let sig = signatures(family);

    // members indexed by their largest element; checked once it is mapped
    let mut by_max: Vec<Vec<&BitSet>> = vec![Vec::new(); n];
    for x in family {
        if let Some(last) = x.iter().last() {
            by_max[last].push(x);
        }
    }

    struct Walk<'a> {
        n: usize,
        family: &'a ClosureFamily,
        sig: Vec<Vec<usize>>,
        by_max: Vec<Vec<&'a BitSet>>,
        mapping: Vec<usize>,
        taken: Vec<bool>,
        found: Vec<Permutation>,
    }

    impl Walk<'_> {
        fn go(&mut self, i: usize) {
            if i == self.n {
                self.found.push(Permutation::from_bijection(self.mapping.clone()));
                return;
            }
            for y in 0..self.n {
                if self.taken[y] || self.sig[i] != self.sig[y] {
                    continue;
                }
                self.mapping[i] = y;
                let ok = self.by_max[i].iter().all(|x| {
                    self.family.contains_unchecked(&BitSet::from_indices(
                        self.n,
                        x.iter().map(|e| self.mapping[e]),
                    ))
                });
                if ok {
                    self.taken[y] = true;
                    self.go(i + 1);
                    self.taken[y] = false;
                }
            }
            self.mapping[i] = i;
        }
    }

    let mut walk = Walk {
        n,
        family,
        sig,
        by_max,
        mapping: (0..n).collect(),
        taken: vec![false; n],
        found: Vec::new(),
    };
    walk.go(0);
    let mut found: Vec<Permutation> = walk
        .found
        .into_iter()
        .filter(|p| include_identity || !p.is_identity())
        .filter(|p| max_order.is_none_or(|k| p.order() <= k))
        .collect();
    // backtracking already yields lexicographic order; keep it explicit
    found.sort_unstable_by(|a, b| a.mapping.cmp(&b.mapping));
    Ok(PermutationSearchResult {
        family_size: family.len(),
        found,
        exhaustive: true,
        space: SearchSpace::Bijections { max_order },
        includes_identity: include_identity,
    })
}

/// Reference enumeration without pruning: tests every one of the `n!`
/// bijections with [`is_preserving`]. For cross-checking the searches on
/// small ground sets.
pub fn enumerate_preserving_unpruned(family: &ClosureFamily, cap: usize) -> Result<Vec<Permutation>> {
    let n = family.ground_set_size();
    check_cap(n, cap, "unpruned permutation enumeration")?;
    let mut mapping: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        if preserves(&mapping, family) {
            out.push(Permutation::from_bijection(mapping.clone()));
        }
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| mapping[i - 1] < mapping[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| mapping[j] > mapping[i - 1]).unwrap();
        mapping.swap(i - 1, j);
        mapping[i..].reverse();
    }
    Ok(out)
}

/// Why a permutation set failed to be a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupViolation {
    /// `first.then(second)` is not in the set.
    Composition {
        first: Permutation,
        second: Permutation,
    },
    /// The inverse of this element is not in the set.
    Inverse(Permutation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCheck {
    pub is_group: bool,
    /// Number of elements checked, identity included.
    pub size: usize,
    pub violation: Option<GroupViolation>,
}

/// Checks that the found permutations together with the identity are closed
/// under composition and inverses.
///
/// Only meaningful on the complete set of preserving bijections, so anything
/// but an exhaustive, unfiltered [`search_permutations`] result is refused.
pub fn check_group(result: &PermutationSearchResult) -> Result<GroupCheck> {
    if !result.exhaustive || result.space != (SearchSpace::Bijections { max_order: None }) {
        return Err(Error::Contract(
            "group check needs an exhaustive search over all bijections without an order filter"
                .into(),
        ));
    }
    let n = match result.found.first() {
        Some(p) => p.len(),
        None => {
            return Ok(GroupCheck {
                is_group: true,
                size: 1,
                violation: None,
            })
        }
    };
    let mut elems: Vec<Permutation> = result.found.clone();
    if !elems.iter().any(Permutation::is_identity) {
        elems.push(Permutation::identity(n));
    }
    elems.sort_unstable_by(|a, b| a.mapping.cmp(&b.mapping));
    let set: HashSet<&[usize]> = elems.iter().map(|p| p.mapping()).collect();
    for p in &elems {
        if !set.contains(p.inverse().mapping()) {
            return Ok(GroupCheck {
                is_group: false,
                size: elems.len(),
                violation: Some(GroupViolation::Inverse(p.clone())),
            });
        }
    }
    for p in &elems {
        for q in &elems {
            let pq = p.then(q)?;
            if !set.contains(pq.mapping()) {
                return Ok(GroupCheck {
                    is_group: false,
                    size: elems.len(),
                    violation: Some(GroupViolation::Composition {
                        first: p.clone(),
                        second: q.clone(),
                    }),
                });
            }
        }
    }
    Ok(GroupCheck {
        is_group: true,
        size: elems.len(),
        violation: None,
    })
}

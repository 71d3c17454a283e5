//! Formal contexts `(G, M, I)` with packed row and column views.

use std::collections::{HashMap, HashSet};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Subset of a context's attributes, as a bit set over `0..|M|`.
pub type AttributeSet = BitSet;
/// Subset of a context's objects, as a bit set over `0..|G|`.
pub type ObjectSet = BitSet;

/// A formal context: objects, attributes and the incidence relation between
/// them.
///
/// The incidence is stored twice, once as object rows (`g'`) and once as
/// attribute columns (`m'`). Both views are built at construction and the
/// context is immutable afterwards.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalContext {
    object_names: Vec<String>,
    attribute_names: Vec<String>,
    rows: Vec<AttributeSet>,
    cols: Vec<ObjectSet>,
}

impl std::fmt::Debug for FormalContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "FormalContext {}x{}",
            self.num_objects(),
            self.num_attributes()
        )?;
        for (g, name) in self.object_names.iter().enumerate() {
            let row: String = (0..self.num_attributes())
                .map(|m| if self.has(g, m) { 'X' } else { '.' })
                .collect();
            writeln!(f, "  {row} {name}")?;
        }
        Ok(())
    }
}

fn check_unique(names: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(names.len());
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::input(format!("duplicate {what} label {n:?}")));
        }
    }
    Ok(())
}

fn transpose(rows: &[BitSet], width: usize) -> Vec<BitSet> {
    let mut cols = vec![BitSet::empty(rows.len()); width];
    for (g, row) in rows.iter().enumerate() {
        for m in row {
            cols[m].insert(g);
        }
    }
    cols
}

impl FormalContext {
    /// Builds a context from names and a dense boolean matrix.
    pub fn new(
        object_names: Vec<String>,
        attribute_names: Vec<String>,
        incidence: &[Vec<bool>],
    ) -> Result<Self> {
        if incidence.len() != object_names.len() {
            return Err(Error::input(format!(
                "incidence has {} rows but there are {} objects",
                incidence.len(),
                object_names.len()
            )));
        }
        let width = attribute_names.len();
        let mut rows = Vec::with_capacity(incidence.len());
        for (g, cells) in incidence.iter().enumerate() {
            if cells.len() != width {
                return Err(Error::input(format!(
                    "row {g} has {} cells but there are {width} attributes",
                    cells.len()
                )));
            }
            rows.push(BitSet::from_indices(
                width,
                cells.iter().enumerate().filter(|(_, &c)| c).map(|(m, _)| m),
            ));
        }
        Self::from_rows(object_names, attribute_names, rows)
    }

    /// Builds a context from object intents given as bit sets over the
    /// attributes.
    pub fn from_rows(
        object_names: Vec<String>,
        attribute_names: Vec<String>,
        rows: Vec<AttributeSet>,
    ) -> Result<Self> {
        check_unique(&object_names, "object")?;
        check_unique(&attribute_names, "attribute")?;
        if rows.len() != object_names.len() {
            return Err(Error::input(format!(
                "{} rows for {} objects",
                rows.len(),
                object_names.len()
            )));
        }
        let width = attribute_names.len();
        if let Some(bad) = rows.iter().position(|r| r.universe() != width) {
            return Err(Error::input(format!(
                "row {bad} is over {} attributes, expected {width}",
                rows[bad].universe()
            )));
        }
        let cols = transpose(&rows, width);
        Ok(FormalContext {
            object_names,
            attribute_names,
            rows,
            cols,
        })
    }

    /// Context with no objects and no attributes.
    pub fn empty() -> Self {
        FormalContext {
            object_names: Vec::new(),
            attribute_names: Vec::new(),
            rows: Vec::new(),
            cols: Vec::new(),
        }
    }

    pub fn num_objects(&self) -> usize {
        self.object_names.len()
    }

    pub fn num_attributes(&self) -> usize {
        self.attribute_names.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.object_names
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.object_names.iter().position(|n| n == name)
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attribute_names.iter().position(|n| n == name)
    }

    /// `(g, m) ∈ I`.
    #[inline]
    pub fn has(&self, g: usize, m: usize) -> bool {
        self.rows[g].contains(m)
    }

    /// The object intent `g'`.
    #[inline]
    pub fn row(&self, g: usize) -> &AttributeSet {
        &self.rows[g]
    }

    /// The attribute extent `m'`.
    #[inline]
    pub fn column(&self, m: usize) -> &ObjectSet {
        &self.cols[m]
    }

    pub fn rows(&self) -> &[AttributeSet] {
        &self.rows
    }

    pub fn columns(&self) -> &[ObjectSet] {
        &self.cols
    }

    /// `|I|`.
    pub fn incidence_count(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum()
    }

    /// `|I| / (|G|·|M|)`; an empty context has density 0.
    pub fn density(&self) -> f64 {
        let cells = self.num_objects() * self.num_attributes();
        if cells == 0 {
            0.0
        } else {
            self.incidence_count() as f64 / cells as f64
        }
    }

    /// Attribute set from indices, rejecting out-of-range entries.
    pub fn attribute_set(&self, indices: &[usize]) -> Result<AttributeSet> {
        let n = self.num_attributes();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::input(format!(
                "attribute index {bad} out of range (|M| = {n})"
            )));
        }
        Ok(BitSet::from_indices(n, indices.iter().copied()))
    }

    /// Object set from indices, rejecting out-of-range entries.
    pub fn object_set(&self, indices: &[usize]) -> Result<ObjectSet> {
        let n = self.num_objects();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::input(format!(
                "object index {bad} out of range (|G| = {n})"
            )));
        }
        Ok(BitSet::from_indices(n, indices.iter().copied()))
    }

    /// Attribute set from attribute labels.
    pub fn attributes_named(&self, names: &[&str]) -> Result<AttributeSet> {
        let idx = names
            .iter()
            .map(|n| {
                self.attribute_index(n)
                    .ok_or_else(|| Error::input(format!("unknown attribute {n:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.attribute_set(&idx)
    }

    /// Object set from object labels.
    pub fn objects_named(&self, names: &[&str]) -> Result<ObjectSet> {
        let idx = names
            .iter()
            .map(|n| {
                self.object_index(n)
                    .ok_or_else(|| Error::input(format!("unknown object {n:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.object_set(&idx)
    }

    /// `A'`: the attributes shared by every object in `objects`. `∅' = M`.
    pub fn derive_objects(&self, objects: &ObjectSet) -> Result<AttributeSet> {
        if objects.universe() != self.num_objects() {
            return Err(Error::input(format!(
                "object set over {} elements, context has {} objects",
                objects.universe(),
                self.num_objects()
            )));
        }
        let mut out = BitSet::full(self.num_attributes());
        for g in objects {
            out.intersect_with(&self.rows[g]);
        }
        Ok(out)
    }

    /// `B'`: the objects having every attribute in `attributes`. `∅' = G`.
    pub fn derive_attributes(&self, attributes: &AttributeSet) -> Result<ObjectSet> {
        if attributes.universe() != self.num_attributes() {
            return Err(Error::input(format!(
                "attribute set over {} elements, context has {} attributes",
                attributes.universe(),
                self.num_attributes()
            )));
        }
        let mut out = BitSet::full(self.num_objects());
        for m in attributes {
            out.intersect_with(&self.cols[m]);
        }
        Ok(out)
    }

    /// `B''`.
    pub fn close_attributes(&self, attributes: &AttributeSet) -> Result<AttributeSet> {
        let extent = self.derive_attributes(attributes)?;
        self.derive_objects(&extent)
    }

    /// `A''`.
    pub fn close_objects(&self, objects: &ObjectSet) -> Result<ObjectSet> {
        let intent = self.derive_objects(objects)?;
        self.derive_attributes(&intent)
    }

    /// The dual context `(M, G, I⁻¹)`.
    pub fn dual(&self) -> FormalContext {
        FormalContext {
            object_names: self.attribute_names.clone(),
            attribute_names: self.object_names.clone(),
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    /// Subcontext on the given object and attribute indices, in the given
    /// order.
    pub fn select(&self, objects: &[usize], attributes: &[usize]) -> FormalContext {
        let width = attributes.len();
        let rows = objects
            .iter()
            .map(|&g| {
                BitSet::from_indices(
                    width,
                    attributes
                        .iter()
                        .enumerate()
                        .filter(|(_, &m)| self.has(g, m))
                        .map(|(j, _)| j),
                )
            })
            .collect::<Vec<_>>();
        let cols = transpose(&rows, width);
        FormalContext {
            object_names: objects.iter().map(|&g| self.object_names[g].clone()).collect(),
            attribute_names: attributes
                .iter()
                .map(|&m| self.attribute_names[m].clone())
                .collect(),
            rows,
            cols,
        }
    }

    pub fn is_object_clarified(&self) -> bool {
        all_distinct(&self.rows)
    }

    pub fn is_attribute_clarified(&self) -> bool {
        all_distinct(&self.cols)
    }

    pub fn is_clarified(&self) -> bool {
        self.is_object_clarified() && self.is_attribute_clarified()
    }

    /// Attributes `m` with `m' = ⋂{n' | n' ⊋ m'}` (an empty intersection
    /// being `G`). On a clarified context these are exactly the reducible
    /// attributes.
    pub fn reducible_attributes(&self) -> Vec<usize> {
        reducible_in(&self.cols, self.num_objects())
    }

    /// Dual of [`reducible_attributes`](Self::reducible_attributes).
    pub fn reducible_objects(&self) -> Vec<usize> {
        reducible_in(&self.rows, self.num_attributes())
    }

    pub fn is_reduced(&self) -> bool {
        self.is_clarified()
            && self.reducible_attributes().is_empty()
            && self.reducible_objects().is_empty()
    }

    /// Merges identical rows and identical columns, keeping the lowest index
    /// of each class.
    pub fn clarify(&self) -> (FormalContext, ReductionTrace) {
        let obj_classes = identical_classes(&self.rows);
        let attr_classes = identical_classes(&self.cols);
        let kept_objects: Vec<usize> = obj_classes.iter().map(|c| c[0]).collect();
        let kept_attributes: Vec<usize> = attr_classes.iter().map(|c| c[0]).collect();
        let out = self.select(&kept_objects, &kept_attributes);
        let trace = ReductionTrace {
            kept_objects,
            kept_attributes,
            merged_classes_objects: obj_classes,
            merged_classes_attributes: attr_classes,
            removed_reducible_objects: Vec::new(),
            removed_reducible_attributes: Vec::new(),
        };
        (out, trace)
    }

    /// Clarifies, then removes reducible objects and attributes until none
    /// remain. Trace indices refer to `self`.
    pub fn reduce(&self) -> (FormalContext, ReductionTrace) {
        let (mut cur, mut trace) = self.clarify();
        loop {
            let red_attrs = cur.reducible_attributes();
            let red_objs = cur.reducible_objects();
            if red_attrs.is_empty() && red_objs.is_empty() {
                break;
            }
            trace
                .removed_reducible_attributes
                .extend(red_attrs.iter().map(|&j| trace.kept_attributes[j]));
            trace
                .removed_reducible_objects
                .extend(red_objs.iter().map(|&i| trace.kept_objects[i]));
            let keep_a: Vec<usize> = (0..cur.num_attributes())
                .filter(|j| !red_attrs.contains(j))
                .collect();
            let keep_o: Vec<usize> = (0..cur.num_objects())
                .filter(|i| !red_objs.contains(i))
                .collect();
            trace.kept_attributes = keep_a.iter().map(|&j| trace.kept_attributes[j]).collect();
            trace.kept_objects = keep_o.iter().map(|&i| trace.kept_objects[i]).collect();
            cur = cur.select(&keep_o, &keep_a);
            debug_assert!(cur.is_clarified());
        }
        trace.removed_reducible_attributes.sort_unstable();
        trace.removed_reducible_objects.sort_unstable();
        (cur, trace)
    }

    /// The nominal scale `({1..n}, {1..n}, =)`.
    pub fn nominal_scale(n: usize) -> Result<FormalContext> {
        scale(n, |i, j| i == j)
    }

    /// The contranominal scale `({1..n}, {1..n}, ≠)`.
    pub fn contranominal_scale(n: usize) -> Result<FormalContext> {
        scale(n, |i, j| i != j)
    }

    /// `(G1 ∪ G2, M1 ∪ M2, I1 ∪ I2)`, identifying labels by name. Elements of
    /// `self` come first, then new elements of `other` in their order.
    pub fn union(&self, other: &FormalContext) -> Result<FormalContext> {
        check_unique(&self.object_names, "object")?;
        check_unique(&self.attribute_names, "attribute")?;
        check_unique(&other.object_names, "object")?;
        check_unique(&other.attribute_names, "attribute")?;

        let mut objects = self.object_names.clone();
        let mut obj_pos: HashMap<&str, usize> = self
            .object_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        for n in &other.object_names {
            if !obj_pos.contains_key(n.as_str()) {
                obj_pos.insert(n, objects.len());
                objects.push(n.clone());
            }
        }
        let mut attributes = self.attribute_names.clone();
        let mut attr_pos: HashMap<&str, usize> = self
            .attribute_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        for n in &other.attribute_names {
            if !attr_pos.contains_key(n.as_str()) {
                attr_pos.insert(n, attributes.len());
                attributes.push(n.clone());
            }
        }

        let width = attributes.len();
        let mut rows = vec![BitSet::empty(width); objects.len()];
        for k in [self, other] {
            for (g, row) in k.rows.iter().enumerate() {
                let gi = obj_pos[k.object_names[g].as_str()];
                for m in row {
                    rows[gi].insert(attr_pos[k.attribute_names[m].as_str()]);
                }
            }
        }
        FormalContext::from_rows(objects, attributes, rows)
    }
}

fn scale(n: usize, rel: impl Fn(usize, usize) -> bool) -> Result<FormalContext> {
    if n == 0 {
        return Err(Error::input("scale size must be at least 1"));
    }
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let rows = (0..n)
        .map(|i| BitSet::from_indices(n, (0..n).filter(|&j| rel(i, j))))
        .collect();
    FormalContext::from_rows(names.clone(), names, rows)
}

fn all_distinct(sets: &[BitSet]) -> bool {
    let mut seen = HashSet::with_capacity(sets.len());
    sets.iter().all(|s| seen.insert(s))
}

/// Groups indices of identical sets; classes ordered by lowest member.
fn identical_classes(sets: &[BitSet]) -> Vec<Vec<usize>> {
    let mut first: HashMap<&BitSet, usize> = HashMap::with_capacity(sets.len());
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        match first.get(s) {
            Some(&c) => classes[c].push(i),
            None => {
                first.insert(s, classes.len());
                classes.push(vec![i]);
            }
        }
    }
    classes
}

/// Indices `i` whose set equals the intersection of all strictly larger sets
/// in `sets` (the full set over `universe` when there are none).
fn reducible_in(sets: &[BitSet], universe: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        let mut meet = BitSet::full(universe);
        for (j, t) in sets.iter().enumerate() {
            if i != j && s.is_proper_subset(t) {
                meet.intersect_with(t);
            }
        }
        if &meet == s {
            out.push(i);
        }
    }
    out
}

/// Bookkeeping for clarification and reduction: how indices of the output
/// context map back to the source context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    /// Source object index for each object of the output, in output order.
    pub kept_objects: Vec<usize>,
    pub kept_attributes: Vec<usize>,
    /// Identical-row classes of the source, each sorted, ordered by their
    /// lowest member (the representative).
    pub merged_classes_objects: Vec<Vec<usize>>,
    pub merged_classes_attributes: Vec<Vec<usize>>,
    /// Class representatives dropped as reducible.
    pub removed_reducible_objects: Vec<usize>,
    pub removed_reducible_attributes: Vec<usize>,
}

impl ReductionTrace {
    /// Source indices that were merged into another representative.
    pub fn merged_away_objects(&self) -> Vec<usize> {
        merged_away(&self.merged_classes_objects)
    }

    pub fn merged_away_attributes(&self) -> Vec<usize> {
        merged_away(&self.merged_classes_attributes)
    }

    /// `Σ (class size − 1)` over object classes.
    pub fn duplicate_objects(&self) -> usize {
        self.merged_classes_objects.iter().map(|c| c.len() - 1).sum()
    }

    pub fn duplicate_attributes(&self) -> usize {
        self.merged_classes_attributes
            .iter()
            .map(|c| c.len() - 1)
            .sum()
    }
}

fn merged_away(classes: &[Vec<usize>]) -> Vec<usize> {
    let mut v: Vec<usize> = classes.iter().flat_map(|c| c[1..].iter().copied()).collect();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::hobbies;

    fn names(ctx: &FormalContext, set: &BitSet, objects: bool) -> Vec<String> {
        let pool = if objects {
            ctx.object_names()
        } else {
            ctx.attribute_names()
        };
        set.iter().map(|i| pool[i].clone()).collect()
    }

    #[test]
    fn derive_objects_examples() {
        let k = hobbies();
        let eve = k.objects_named(&["Eve"]).unwrap();
        assert_eq!(names(&k, &k.derive_objects(&eve).unwrap(), false), ["Biking", "Rafting"]);
        let none = k.object_set(&[]).unwrap();
        assert!(k.derive_objects(&none).unwrap().is_full());
        let eo = k.objects_named(&["Eve", "Oscar"]).unwrap();
        assert_eq!(names(&k, &k.derive_objects(&eo).unwrap(), false), ["Rafting"]);
    }

    #[test]
    fn derive_attributes_examples() {
        let k = hobbies();
        let br = k.attributes_named(&["Biking", "Rafting"]).unwrap();
        assert_eq!(names(&k, &k.derive_attributes(&br).unwrap(), true), ["Eve"]);
        assert_eq!(k.derive_attributes(&k.attribute_set(&[]).unwrap()).unwrap().count(), 5);
        let sh = k.attributes_named(&["Swimming", "Hiking"]).unwrap();
        assert!(k.derive_attributes(&sh).unwrap().is_empty());
    }

    #[test]
    fn derive_rejects_bad_indices() {
        let k = hobbies();
        assert!(matches!(k.attribute_set(&[5]), Err(Error::Input(_))));
        assert!(matches!(k.object_set(&[9]), Err(Error::Input(_))));
        assert!(k.derive_objects(&BitSet::empty(3)).is_err());
        assert!(k.derive_attributes(&BitSet::empty(7)).is_err());
    }

    #[test]
    fn closure_examples() {
        let k = hobbies();
        let b = k.attributes_named(&["Biking"]).unwrap();
        assert_eq!(k.close_attributes(&b).unwrap(), b);
        let sh = k.attributes_named(&["Swimming", "Hiking"]).unwrap();
        assert!(k.close_attributes(&sh).unwrap().is_full());
    }

    #[test]
    fn dual_swaps_roles() {
        let k = hobbies();
        let d = k.dual();
        assert_eq!(d.object_names(), k.attribute_names());
        assert_eq!(d.attribute_names(), k.object_names());
        for g in 0..5 {
            for m in 0..5 {
                assert_eq!(k.has(g, m), d.has(m, g));
            }
        }
        assert_eq!(d.dual(), k);
    }

    #[test]
    fn clarify_merges_duplicate_columns() {
        let k = FormalContext::new(
            vec!["g1".into(), "g2".into()],
            vec!["m".into(), "n".into(), "o".into()],
            &[vec![true, true, false], vec![false, false, true]],
        )
        .unwrap();
        let (c, t) = k.clarify();
        assert_eq!(c.attribute_names(), ["m", "o"]);
        assert_eq!(t.merged_classes_attributes, vec![vec![0, 1], vec![2]]);
        assert_eq!(t.kept_attributes, vec![0, 2]);
        assert_eq!(t.merged_away_attributes(), vec![1]);
        assert_eq!(t.duplicate_attributes(), 1);
    }

    #[test]
    fn clarify_leaves_hobbies_and_nominal_alone() {
        let (c, t) = hobbies().clarify();
        assert_eq!(c, hobbies());
        assert!(t.merged_classes_attributes.iter().all(|c| c.len() == 1));
        assert!(t.merged_classes_objects.iter().all(|c| c.len() == 1));
        let n = FormalContext::nominal_scale(4).unwrap();
        assert_eq!(n.clarify().0, n);
    }

    #[test]
    fn reduce_drops_full_column() {
        // rows {a}, {a,b}, {a,b,c}
        let k = FormalContext::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec!["a".into(), "b".into(), "c".into()],
            &[
                vec![true, false, false],
                vec![true, true, false],
                vec![true, true, true],
            ],
        )
        .unwrap();
        let (r, t) = k.reduce();
        assert!(t.removed_reducible_attributes.contains(&0));
        assert!(!r.attribute_names().contains(&"a".to_string()));
        assert!(r.is_reduced());
    }

    #[test]
    fn hobbies_is_reduced() {
        let k = hobbies();
        assert!(k.is_reduced());
        let (r, t) = k.reduce();
        assert_eq!(r, k);
        assert!(t.removed_reducible_attributes.is_empty());
        assert!(t.removed_reducible_objects.is_empty());
    }

    #[test]
    fn scales() {
        let n = FormalContext::nominal_scale(3).unwrap();
        let c = FormalContext::contranominal_scale(3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(n.has(i, j), i == j);
                assert_eq!(c.has(i, j), i != j);
            }
        }
        let one = FormalContext::nominal_scale(1).unwrap();
        assert!(one.has(0, 0));
        assert!(FormalContext::nominal_scale(0).is_err());
        assert!(FormalContext::contranominal_scale(0).is_err());
    }

    fn relabel(k: &FormalContext, prefix: &str) -> FormalContext {
        FormalContext::from_rows(
            k.object_names().iter().map(|n| format!("{prefix}{n}")).collect(),
            k.attribute_names().iter().map(|n| format!("{prefix}{n}")).collect(),
            k.rows().to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn union_of_disjoint_scales_is_block_diagonal() {
        let a = relabel(&FormalContext::nominal_scale(2).unwrap(), "a");
        let b = relabel(&FormalContext::nominal_scale(2).unwrap(), "b");
        let u = a.union(&b).unwrap();
        assert_eq!(u.num_objects(), 4);
        assert_eq!(u.num_attributes(), 4);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(u.has(i, j), i == j);
            }
        }
        let k = hobbies();
        assert_eq!(k.union(&k).unwrap(), k);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let r = FormalContext::new(vec!["g".into(), "g".into()], vec![], &[vec![], vec![]]);
        assert!(matches!(r, Err(Error::Input(_))));
    }

    #[test]
    fn empty_context_conventions() {
        let k = FormalContext::empty();
        assert_eq!(k.density(), 0.0);
        assert!(k.derive_objects(&BitSet::empty(0)).unwrap().is_empty());
        let (r, _) = k.reduce();
        assert_eq!(r.num_attributes(), 0);
    }
}

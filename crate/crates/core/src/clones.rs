//! Clone items.
//!
//! Attributes `a` and `b` are clones (`a ~ b`) when swapping them maps every
//! intent to an intent. The brute-force check needs the whole closure system;
//! the row-level check only needs the object intents of an object-reduced
//! context: `a ~ b` iff for every object `g` the row `φ_ab(g')` is again some
//! object's row.
//!
//! Object clones are attribute clones of the dual context.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::closure::{enumerate_intents, ClosureFamily, DEFAULT_ENUMERATION_CAP};
use crate::context::{AttributeSet, FormalContext};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Attributes,
    Objects,
}

fn check_pair(n: usize, a: usize, b: usize) -> Result<()> {
    if a == b {
        return Err(Error::input(format!("clone check needs two distinct elements, got {a} twice")));
    }
    if a >= n || b >= n {
        return Err(Error::input(format!(
            "element index {} out of range ({n} elements)",
            a.max(b)
        )));
    }
    Ok(())
}

/// `φ_ab(X)`: exchanges `a` and `b` when `X` holds exactly one of them.
pub fn phi(set: &AttributeSet, a: usize, b: usize) -> Result<AttributeSet> {
    check_pair(set.universe(), a, b)?;
    let mut out = set.clone();
    if set.contains(a) != set.contains(b) {
        out.toggle(a);
        out.toggle(b);
    }
    Ok(out)
}

/// `a ~ b` decided against an explicit intent family.
pub fn is_clone_in_family(family: &ClosureFamily, a: usize, b: usize) -> Result<bool> {
    check_pair(family.ground_set_size(), a, b)?;
    Ok(family.iter().all(|x| {
        if x.contains(a) == x.contains(b) {
            return true;
        }
        let mut y = x.clone();
        y.toggle(a);
        y.toggle(b);
        family.contains_unchecked(&y)
    }))
}

/// Brute-force `a ~ b`: enumerates every intent of `ctx`.
pub fn naive_is_clone(ctx: &FormalContext, a: usize, b: usize) -> Result<bool> {
    naive_is_clone_capped(ctx, a, b, DEFAULT_ENUMERATION_CAP)
}

pub fn naive_is_clone_capped(ctx: &FormalContext, a: usize, b: usize, cap: usize) -> Result<bool> {
    check_pair(ctx.num_attributes(), a, b)?;
    let family = enumerate_intents(ctx, cap)?;
    is_clone_in_family(&family, a, b)
}

/// Hash index from object intent to object, for the row-level clone test.
///
/// Valid only on contexts whose objects are clarified and irreducible;
/// [`RowIndex::new`] checks this.
pub struct RowIndex<'a> {
    ctx: &'a FormalContext,
    rows: HashMap<&'a BitSet, usize>,
}

impl<'a> RowIndex<'a> {
    pub fn new(ctx: &'a FormalContext) -> Result<Self> {
        let mut rows = HashMap::with_capacity(ctx.num_objects());
        for (g, row) in ctx.rows().iter().enumerate() {
            if rows.insert(row, g).is_some() {
                return Err(Error::Contract(format!(
                    "object {:?} duplicates another row; clarify first",
                    ctx.object_names()[g]
                )));
            }
        }
        if let Some(&g) = ctx.reducible_objects().first() {
            return Err(Error::Contract(format!(
                "object {:?} is reducible; reduce first",
                ctx.object_names()[g]
            )));
        }
        Ok(RowIndex { ctx, rows })
    }

    /// The object `h` with `h' = φ_ab(g')`, if any.
    pub fn witness(&self, g: usize, a: usize, b: usize) -> Option<usize> {
        let row = self.ctx.row(g);
        if row.contains(a) == row.contains(b) {
            return Some(g);
        }
        let mut image = row.clone();
        image.toggle(a);
        image.toggle(b);
        self.rows.get(&image).copied()
    }

    /// Row-level clone test. Only objects holding exactly one of `a`, `b`
    /// need a partner; the others are their own witness.
    pub fn is_clone(&self, a: usize, b: usize) -> bool {
        let ca = self.ctx.column(a);
        let cb = self.ctx.column(b);
        ca.iter()
            .filter(|&g| !cb.contains(g))
            .chain(cb.iter().filter(|&g| !ca.contains(g)))
            .all(|g| self.witness(g, a, b).is_some())
    }
}

/// Row-level `a ~ b` on a context with clarified, irreducible objects.
/// Fully reduced contexts qualify.
pub fn fast_is_clone(ctx: &FormalContext, a: usize, b: usize) -> Result<bool> {
    check_pair(ctx.num_attributes(), a, b)?;
    Ok(RowIndex::new(ctx)?.is_clone(a, b))
}

/// Equivalence classes of `~` on one side of a context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClonePartition {
    pub side: Side,
    /// Sorted classes, ordered by smallest member. Covers every index.
    pub classes: Vec<Vec<usize>>,
    /// Identical-extent classes (clarification classes), same ordering.
    pub identical: Vec<Vec<usize>>,
    /// Unordered pairs `(x, y)`, `x < y`, with `x' = y'`.
    pub trivial_pairs: Vec<(usize, usize)>,
}

impl ClonePartition {
    pub fn class_of(&self, x: usize) -> &[usize] {
        self.classes
            .iter()
            .find(|c| c.binary_search(&x).is_ok())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn are_clones(&self, x: usize, y: usize) -> bool {
        x == y || self.class_of(x).binary_search(&y).is_ok()
    }

    pub fn is_trivial_pair(&self, x: usize, y: usize) -> bool {
        self.trivial_pairs.binary_search(&(x.min(y), x.max(y))).is_ok()
    }

    /// Classes with more than one element.
    pub fn proper_classes(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.classes.iter().filter(|c| c.len() > 1)
    }

    /// All unordered proper clone pairs `(x, y)`, `x < y`, ascending.
    pub fn proper_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for c in self.proper_classes() {
            for (i, &x) in c.iter().enumerate() {
                for &y in &c[i + 1..] {
                    out.push((x, y));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Elements with a clone partner of different extent.
    pub fn nontrivial_count(&self) -> usize {
        // such partners exist iff the class spans two identical-extent classes
        let mut ident_of = HashMap::new();
        for (k, c) in self.identical.iter().enumerate() {
            for &x in c {
                ident_of.insert(x, k);
            }
        }
        self.classes
            .iter()
            .filter(|c| c.iter().any(|x| ident_of[x] != ident_of[&c[0]]))
            .map(Vec::len)
            .sum()
    }

    /// `Σ (identical class size − 1)`.
    pub fn trivial_count(&self) -> usize {
        self.identical.iter().map(|c| c.len() - 1).sum()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so representatives are minimum indices
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Clone classes of `side` in `ctx`.
///
/// Pipeline: clarify; drop reducible objects; run the row-level test on
/// every pair of irreducible clarified attributes; lift the classes back to
/// `ctx`, putting identical elements in their representative's class.
/// Reducible attributes never have a distinct-extent clone and stay
/// singletons (up to identical copies).
pub fn clone_partition(ctx: &FormalContext, side: Side) -> ClonePartition {
    partition_impl(ctx, side, false)
}

/// Same as [`clone_partition`], evaluating pairs on the current rayon pool.
/// The result is identical to the sequential one.
pub fn clone_partition_parallel(ctx: &FormalContext, side: Side) -> ClonePartition {
    partition_impl(ctx, side, true)
}

fn partition_impl(ctx: &FormalContext, side: Side, parallel: bool) -> ClonePartition {
    let dual;
    let ctx = match side {
        Side::Attributes => ctx,
        Side::Objects => {
            dual = ctx.dual();
            &dual
        }
    };
    let (clar, trace) = ctx.clarify();
    let reducible_objs = clar.reducible_objects();
    let keep_objs: Vec<usize> = (0..clar.num_objects())
        .filter(|g| reducible_objs.binary_search(g).is_err())
        .collect();
    let all_attrs: Vec<usize> = (0..clar.num_attributes()).collect();
    let work = clar.select(&keep_objs, &all_attrs);
    let reducible_attrs = clar.reducible_attributes();
    let candidates: Vec<usize> = all_attrs
        .iter()
        .copied()
        .filter(|m| reducible_attrs.binary_search(m).is_err())
        .collect();

    let index = RowIndex::new(&work).expect("clarified, object-reduced by construction");
    let check_from = |i: usize| -> Vec<(usize, usize)> {
        let a = candidates[i];
        candidates[i + 1..]
            .iter()
            .filter(|&&b| index.is_clone(a, b))
            .map(|&b| (a, b))
            .collect()
    };
    let hits: Vec<(usize, usize)> = if parallel {
        (0..candidates.len())
            .into_par_iter()
            .map(check_from)
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    } else {
        (0..candidates.len()).flat_map(check_from).collect()
    };

    let n = ctx.num_attributes();
    let mut uf = UnionFind::new(n);
    for class in &trace.merged_classes_attributes {
        for &x in &class[1..] {
            uf.union(class[0], x);
        }
    }
    for (a, b) in hits {
        uf.union(trace.kept_attributes[a], trace.kept_attributes[b]);
    }
    let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
    for x in 0..n {
        by_root.entry(uf.find(x)).or_default().push(x);
    }
    let mut classes: Vec<Vec<usize>> = by_root.into_values().collect();
    classes.sort_unstable_by_key(|c| c[0]);

    let mut trivial_pairs = Vec::new();
    for c in &trace.merged_classes_attributes {
        for (i, &x) in c.iter().enumerate() {
            for &y in &c[i + 1..] {
                trivial_pairs.push((x, y));
            }
        }
    }
    trivial_pairs.sort_unstable();

    ClonePartition {
        side,
        classes,
        identical: trace.merged_classes_attributes,
        trivial_pairs,
    }
}

/// One row of the clone statistics table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CloneReport {
    pub name: String,
    pub objects: usize,
    pub attributes: usize,
    #[serde(serialize_with = "three_decimals")]
    pub density: f64,
    pub g_clones: usize,
    pub m_clones: usize,
    pub g_trivial: usize,
    pub m_trivial: usize,
}

fn three_decimals<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64((x * 1000.0).round() / 1000.0)
}

pub const REPORT_CSV_HEADER: &str = "name,objects,attributes,density,g_clones,m_clones,g_trivial,m_trivial";

impl CloneReport {
    pub fn from_partitions(
        name: &str,
        ctx: &FormalContext,
        attributes: &ClonePartition,
        objects: &ClonePartition,
    ) -> Self {
        CloneReport {
            name: name.to_string(),
            objects: ctx.num_objects(),
            attributes: ctx.num_attributes(),
            density: ctx.density(),
            g_clones: objects.nontrivial_count(),
            m_clones: attributes.nontrivial_count(),
            g_trivial: objects.trivial_count(),
            m_trivial: attributes.trivial_count(),
        }
    }

    /// The same statistics with objects and attributes exchanged, i.e. the
    /// report of the dual context.
    pub fn swapped(&self) -> Self {
        CloneReport {
            objects: self.attributes,
            attributes: self.objects,
            g_clones: self.m_clones,
            m_clones: self.g_clones,
            g_trivial: self.m_trivial,
            m_trivial: self.g_trivial,
            ..self.clone()
        }
    }

    pub fn csv_row(&self) -> String {
        let name = if self.name.contains([',', '"', '\n']) {
            format!("\"{}\"", self.name.replace('"', "\"\""))
        } else {
            self.name.clone()
        };
        format!(
            "{name},{},{},{:.3},{},{},{},{}",
            self.objects,
            self.attributes,
            self.density,
            self.g_clones,
            self.m_clones,
            self.g_trivial,
            self.m_trivial
        )
    }
}

/// Aligned plain-text table of reports.
pub fn format_table(reports: &[CloneReport]) -> String {
    let header = [
        "name", "|G|", "|M|", "density", "#G-clones", "#M-clones", "#G-t-clones", "#M-t-clones",
    ];
    let rows: Vec<[String; 8]> = reports
        .iter()
        .map(|r| {
            [
                r.name.clone(),
                r.objects.to_string(),
                r.attributes.to_string(),
                format!("{:.3}", r.density),
                r.g_clones.to_string(),
                r.m_clones.to_string(),
                r.g_trivial.to_string(),
                r.m_trivial.to_string(),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, &w))| {
                if i == 0 {
                    format!("{c:<w$}")
                } else {
                    format!("{c:>w$}")
                }
            })
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in &rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

/// Clone statistics for both sides of `ctx`.
pub fn analyze(ctx: &FormalContext, name: &str) -> CloneReport {
    let attrs = clone_partition(ctx, Side::Attributes);
    let objs = clone_partition(ctx, Side::Objects);
    CloneReport::from_partitions(name, ctx, &attrs, &objs)
}

/// For a clone pair: `a' ⊆ b'` or `b' ⊆ a'` forces `a' = b'`.
///
/// Errors if `a` and `b` are not clones.
pub fn verify_lemma1(ctx: &FormalContext, a: usize, b: usize) -> Result<bool> {
    if a != b && !naive_is_clone(ctx, a, b)? {
        return Err(Error::Contract(format!("attributes {a} and {b} are not clones")));
    }
    let (ea, eb) = (ctx.column(a), ctx.column(b));
    let comparable = ea.is_subset(eb) || eb.is_subset(ea);
    Ok(!comparable || ea == eb)
}

/// For a clone pair `a ≠ b` in a clarified context: `a` is irreducible.
///
/// Errors if the context is not clarified or `a`, `b` are not clones.
pub fn verify_lemma2(ctx: &FormalContext, a: usize, b: usize) -> Result<bool> {
    if !ctx.is_clarified() {
        return Err(Error::Contract("context is not clarified".into()));
    }
    if !naive_is_clone(ctx, a, b)? {
        return Err(Error::Contract(format!("attributes {a} and {b} are not clones")));
    }
    Ok(!ctx.reducible_attributes().contains(&a))
}

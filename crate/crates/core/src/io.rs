//! Getting contexts in and out: Burmeister `.cxt` files, edge lists,
//! categorical tables and seeded random contexts.

use std::collections::{BTreeSet, HashMap};
use std::io::Read;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};

/// Two-mode network `H = (U ∪ W, E)`. The sides are separate namespaces, so
/// the same label may appear on both.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub left_nodes: Vec<String>,
    pub right_nodes: Vec<String>,
    /// `(left index, right index)` pairs.
    pub edges: BTreeSet<(usize, usize)>,
}

/// Undirected one-mode network. Edges are stored as `(min, max)` index
/// pairs; a pair `(v, v)` is a self-loop.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    pub nodes: Vec<String>,
    pub edges: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeListMode {
    Bipartite,
    OneMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedGraph {
    Bipartite(BipartiteGraph),
    OneMode(Graph),
}

/// Parameters for a coin-draw random context.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomContextSpec {
    pub num_objects: usize,
    pub num_attributes: usize,
    pub density: f64,
    pub seed: u64,
}

impl BipartiteGraph {
    /// Graph with sides exchanged.
    pub fn flipped(&self) -> BipartiteGraph {
        BipartiteGraph {
            left_nodes: self.right_nodes.clone(),
            right_nodes: self.left_nodes.clone(),
            edges: self.edges.iter().map(|&(u, w)| (w, u)).collect(),
        }
    }
}

/// `K(H) = (U, W, I)` with `(u, w) ∈ I` iff `{u, w}` is an edge.
pub fn bipartite_to_context(g: &BipartiteGraph) -> Result<FormalContext> {
    let width = g.right_nodes.len();
    let mut rows = vec![BitSet::empty(width); g.left_nodes.len()];
    for &(u, w) in &g.edges {
        if u >= rows.len() || w >= width {
            return Err(Error::input(format!("edge ({u}, {w}) references a missing node")));
        }
        rows[u].insert(w);
    }
    FormalContext::from_rows(g.left_nodes.clone(), g.right_nodes.clone(), rows)
}

/// `(V, V, I)` with `(u, v) ∈ I` iff `{u, v} ∈ E`. Self-loops only set the
/// diagonal when `include_loops` is true.
pub fn graph_to_context(g: &Graph, include_loops: bool) -> Result<FormalContext> {
    let n = g.nodes.len();
    let mut rows = vec![BitSet::empty(n); n];
    for &(u, v) in &g.edges {
        if u >= n || v >= n {
            return Err(Error::input(format!("edge ({u}, {v}) references a missing node")));
        }
        if u == v && !include_loops {
            continue;
        }
        rows[u].insert(v);
        rows[v].insert(u);
    }
    FormalContext::from_rows(g.nodes.clone(), g.nodes.clone(), rows)
}

#[derive(Default)]
struct Interner {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Interner {
    fn get(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }
}

/// Parses an edge list, one edge per line. Blank lines and lines starting
/// with `#` are skipped. With `delimiter = None` fields are split on runs of
/// whitespace. Nodes are numbered in order of first mention.
pub fn read_edge_list(
    text: &str,
    mode: EdgeListMode,
    delimiter: Option<char>,
) -> Result<ParsedGraph> {
    let mut left = Interner::default();
    let mut right = Interner::default();
    let mut edges = BTreeSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = match delimiter {
            Some(d) => line.split(d).map(str::trim).collect(),
            None => line.split_whitespace().collect(),
        };
        if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
            return Err(Error::parse(
                lineno + 1,
                format!("expected two fields, found {}", fields.len()),
            ));
        }
        match mode {
            EdgeListMode::Bipartite => {
                let u = left.get(fields[0]);
                let w = right.get(fields[1]);
                edges.insert((u, w));
            }
            EdgeListMode::OneMode => {
                let u = left.get(fields[0]);
                let v = left.get(fields[1]);
                edges.insert((u.min(v), u.max(v)));
            }
        }
    }
    Ok(match mode {
        EdgeListMode::Bipartite => ParsedGraph::Bipartite(BipartiteGraph {
            left_nodes: left.names,
            right_nodes: right.names,
            edges,
        }),
        EdgeListMode::OneMode => ParsedGraph::OneMode(Graph {
            nodes: left.names,
            edges,
        }),
    })
}

/// Parses a Burmeister `.cxt` file:
///
/// ```text
/// B
///
/// <|G|>
/// <|M|>
///
/// <object names, one per line>
/// <attribute names, one per line>
/// <|G| rows of '.'/'X', each |M| long>
/// ```
///
/// Trailing whitespace and `\r` are ignored; lowercase `x` is accepted.
pub fn read_cxt(text: &str) -> Result<FormalContext> {
    let lines: Vec<&str> = text
        .split('\n')
        .map(|l| l.trim_end_matches(['\r', ' ', '\t']))
        .collect();
    let mut pos = 0usize;
    let mut next = |what: &str| -> Result<(usize, &str)> {
        let i = pos;
        pos += 1;
        lines
            .get(i)
            .map(|l| (i + 1, *l))
            .ok_or_else(|| Error::parse(i + 1, format!("unexpected end of file, expected {what}")))
    };

    let (ln, header) = next("header")?;
    if header.trim_start_matches('\u{feff}') != "B" {
        return Err(Error::parse(ln, format!("expected header 'B', found {header:?}")));
    }
    let (ln, blank) = next("blank line")?;
    if !blank.is_empty() {
        return Err(Error::parse(ln, "expected blank line after header"));
    }
    let parse_count = |(ln, s): (usize, &str)| -> Result<usize> {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::parse(ln, format!("expected a count, found {s:?}")))
    };
    let n_obj = parse_count(next("object count")?)?;
    let n_att = parse_count(next("attribute count")?)?;
    let (ln, blank) = next("blank line")?;
    if !blank.is_empty() {
        return Err(Error::parse(ln, "expected blank line after counts"));
    }
    let mut objects = Vec::with_capacity(n_obj);
    for _ in 0..n_obj {
        objects.push(next("object name")?.1.to_string());
    }
    let mut attributes = Vec::with_capacity(n_att);
    for _ in 0..n_att {
        attributes.push(next("attribute name")?.1.to_string());
    }
    let mut rows = Vec::with_capacity(n_obj);
    for object in &objects {
        let (ln, row) = next("incidence row")?;
        let cells: Vec<char> = row.chars().collect();
        if cells.len() != n_att {
            return Err(Error::parse(
                ln,
                format!(
                    "row for object {:?} has {} cells, expected {n_att}",
                    object,
                    cells.len()
                ),
            ));
        }
        let mut bits = BitSet::empty(n_att);
        for (m, c) in cells.into_iter().enumerate() {
            match c {
                'X' | 'x' => bits.insert(m),
                '.' => {}
                other => {
                    return Err(Error::parse(
                        ln,
                        format!("illegal character {other:?} in column {}", m + 1),
                    ))
                }
            }
        }
        rows.push(bits);
    }
    if let Some((i, extra)) = lines[pos..].iter().enumerate().find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::parse(
            pos + i + 1,
            format!("unexpected content after incidence rows: {extra:?}"),
        ));
    }
    for (what, names) in [("object", &objects), ("attribute", &attributes)] {
        if let Some(bad) = names.iter().find(|n| n.is_empty()) {
            return Err(Error::input(format!("empty {what} name {bad:?}")));
        }
    }
    FormalContext::from_rows(objects, attributes, rows)
}

/// Writes the canonical `.cxt` layout read by [`read_cxt`].
pub fn write_cxt(ctx: &FormalContext) -> String {
    let mut out = String::new();
    out.push_str("B\n\n");
    out.push_str(&format!("{}\n{}\n\n", ctx.num_objects(), ctx.num_attributes()));
    for n in ctx.object_names() {
        out.push_str(n);
        out.push('\n');
    }
    for n in ctx.attribute_names() {
        out.push_str(n);
        out.push('\n');
    }
    for g in 0..ctx.num_objects() {
        for m in 0..ctx.num_attributes() {
            out.push(if ctx.has(g, m) { 'X' } else { '.' });
        }
        out.push('\n');
    }
    out
}

/// Nominally scales a categorical CSV table (first row is the header).
///
/// Every `(column, value)` pair becomes one attribute named `column=value`,
/// in column order and then in order of first appearance of the value. When
/// `id_column` names a header field, that column supplies object names and
/// is not scaled; repeated ids get a `#k` suffix. Otherwise objects are
/// named by 1-based row number.
pub fn nominal_scale_table<R: Read>(reader: R, id_column: Option<&str>) -> Result<FormalContext> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let id_idx = match id_column {
        Some(name) => Some(
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::input(format!("no column named {name:?}")))?,
        ),
        None => None,
    };

    let mut records: Vec<Vec<String>> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths { .. } => Error::parse(i + 2, "ragged row"),
            _ => Error::Csv(e),
        })?;
        records.push(rec.iter().map(|v| v.trim().to_string()).collect());
    }

    // attribute index per (column, value), in first-appearance order
    let mut attr_names = Vec::new();
    let mut attr_of: Vec<HashMap<String, usize>> = vec![HashMap::new(); headers.len()];
    for (col, header) in headers.iter().enumerate() {
        if Some(col) == id_idx {
            continue;
        }
        for rec in &records {
            let v = &rec[col];
            if !attr_of[col].contains_key(v) {
                attr_of[col].insert(v.clone(), attr_names.len());
                attr_names.push(format!("{header}={v}"));
            }
        }
    }

    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut objects = Vec::with_capacity(records.len());
    let mut rows = Vec::with_capacity(records.len());
    for (r, rec) in records.iter().enumerate() {
        let name = match id_idx {
            Some(c) => {
                let base = rec[c].clone();
                let k = seen.entry(base.clone()).or_insert(0);
                *k += 1;
                if *k == 1 {
                    base
                } else {
                    format!("{base}#{k}")
                }
            }
            None => (r + 1).to_string(),
        };
        objects.push(name);
        let mut row = BitSet::empty(attr_names.len());
        for (col, v) in rec.iter().enumerate() {
            if Some(col) != id_idx {
                row.insert(attr_of[col][v]);
            }
        }
        rows.push(row);
    }
    FormalContext::from_rows(objects, attr_names, rows)
}

impl RandomContextSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.density) || self.density.is_nan() {
            return Err(Error::input(format!(
                "density {} is outside [0, 1]",
                self.density
            )));
        }
        Ok(())
    }
}

/// Coin-draw random context.
///
/// Generator: `ChaCha8Rng::seed_from_u64(seed)`; cells are visited row by
/// row, and cell `(g, m)` is set iff the next uniform `f64` in `[0, 1)` is
/// below `density`. Objects are named `g1..`, attributes `m1..`.
pub fn random_context(spec: &RandomContextSpec) -> Result<FormalContext> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let rows = (0..spec.num_objects)
        .map(|_| {
            let mut row = BitSet::empty(spec.num_attributes);
            for m in 0..spec.num_attributes {
                if rng.gen::<f64>() < spec.density {
                    row.insert(m);
                }
            }
            row
        })
        .collect();
    FormalContext::from_rows(
        (1..=spec.num_objects).map(|i| format!("g{i}")).collect(),
        (1..=spec.num_attributes).map(|i| format!("m{i}")).collect(),
        rows,
    )
}

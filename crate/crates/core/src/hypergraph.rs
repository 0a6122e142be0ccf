use std::collections::{BTreeMap, HashSet};

use crate::error::{invalid, Result};
use crate::model::OrderSubset;

/// Label of a vertex that no block claimed.
pub const UNASSIGNED: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn symbol(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Blue => 'B',
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "R" => Some(Color::Red),
            "B" => Some(Color::Blue),
            _ => None,
        }
    }
}

/// Borrowed view of one hyperedge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeRef<'a> {
    pub order: usize,
    /// Strictly ascending vertex ids.
    pub vertices: &'a [u32],
    pub color: Option<Color>,
}

impl EdgeRef<'_> {
    pub fn contains(&self, v: usize) -> bool {
        u32::try_from(v).is_ok_and(|v| self.vertices.binary_search(&v).is_ok())
    }

    /// True when every vertex satisfies `member`.
    pub fn inside(&self, member: &[bool]) -> bool {
        self.vertices.iter().all(|&v| member[v as usize])
    }

    /// True when every vertex other than `skip` satisfies `member`.
    pub fn others_inside(&self, skip: usize, member: &[bool]) -> bool {
        self.vertices
            .iter()
            .all(|&v| v as usize == skip || member[v as usize])
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct EdgeList {
    /// Concatenated tuples, `order` ids per edge.
    vertices: Vec<u32>,
    colors: Vec<Color>,
}

/// A non-uniform hypergraph: edges grouped by order, stored in canonical
/// (lexicographic) order within each order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    colored: bool,
    orders: BTreeMap<usize, EdgeList>,
}

impl Hypergraph {
    /// A hypergraph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            colored: false,
            orders: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_colored(&self) -> bool {
        self.colored
    }

    /// Orders that carry at least one edge, ascending.
    pub fn orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.orders
            .iter()
            .filter(|(_, list)| !list.vertices.is_empty())
            .map(|(m, _)| *m)
    }

    pub fn max_order(&self) -> Option<usize> {
        self.orders().last()
    }

    pub fn edge_count(&self, m: usize) -> usize {
        self.orders
            .get(&m)
            .map_or(0, |list| list.vertices.len() / m)
    }

    pub fn num_edges(&self) -> usize {
        self.orders
            .iter()
            .map(|(m, list)| list.vertices.len() / m)
            .sum()
    }

    /// The `idx`-th edge of order `m`.
    pub fn edge(&self, m: usize, idx: usize) -> EdgeRef<'_> {
        let list = &self.orders[&m];
        EdgeRef {
            order: m,
            vertices: &list.vertices[idx * m..(idx + 1) * m],
            color: list.colors.get(idx).copied(),
        }
    }

    /// Edges of order `m` in canonical order.
    pub fn edges(&self, m: usize) -> impl Iterator<Item = EdgeRef<'_>> + '_ {
        let list = self.orders.get(&m);
        let count = list.map_or(0, |l| l.vertices.len() / m);
        (0..count).map(move |i| {
            let list = list.expect("count is zero without a list");
            EdgeRef {
                order: m,
                vertices: &list.vertices[i * m..(i + 1) * m],
                color: list.colors.get(i).copied(),
            }
        })
    }

    /// Every edge, by ascending order and then canonical order.
    pub fn iter(&self) -> impl Iterator<Item = EdgeRef<'_>> + '_ {
        self.orders.keys().flat_map(move |&m| self.edges(m))
    }

    /// Keeps the edges accepted by `keep`, preserving vertex ids and colors.
    pub fn filter(&self, mut keep: impl FnMut(&EdgeRef<'_>) -> bool) -> Hypergraph {
        let mut orders = BTreeMap::new();
        for (&m, list) in &self.orders {
            let mut out = EdgeList::default();
            for (i, tuple) in list.vertices.chunks_exact(m).enumerate() {
                let edge = EdgeRef {
                    order: m,
                    vertices: tuple,
                    color: list.colors.get(i).copied(),
                };
                if keep(&edge) {
                    out.vertices.extend_from_slice(tuple);
                    if let Some(c) = edge.color {
                        out.colors.push(c);
                    }
                }
            }
            if !out.vertices.is_empty() {
                orders.insert(m, out);
            }
        }
        Hypergraph {
            n: self.n,
            colored: self.colored,
            orders,
        }
    }

    /// Induced sub-hypergraph: the edges whose vertices all lie in `members`.
    pub fn restrict(&self, members: &[bool]) -> Result<Hypergraph> {
        if members.len() != self.n {
            return invalid(format!(
                "membership mask has length {}, expected {}",
                members.len(),
                self.n
            ));
        }
        Ok(self.filter(|e| e.inside(members)))
    }

    /// Keeps only the edges whose order belongs to `subset`.
    pub fn restrict_orders(&self, subset: &OrderSubset) -> Hypergraph {
        self.filter(|e| subset.contains(e.order))
    }

    /// The edges of one color; errors on an uncolored hypergraph.
    pub fn color_class(&self, color: Color) -> Result<Hypergraph> {
        if !self.colored {
            return invalid("hypergraph is not colored");
        }
        Ok(self.filter(|e| e.color == Some(color)))
    }

    /// Attaches a color to every edge, in [`Hypergraph::iter`] order.
    pub(crate) fn with_colors(&self, mut next: impl FnMut() -> Color) -> Result<Hypergraph> {
        if self.colored {
            return invalid("hypergraph is already colored");
        }
        let mut out = self.clone();
        for (&m, list) in out.orders.iter_mut() {
            list.colors = (0..list.vertices.len() / m).map(|_| next()).collect();
        }
        out.colored = true;
        Ok(out)
    }

    /// Builds from per-order edge lists that are already canonical and valid.
    pub(crate) fn from_sorted_parts(n: usize, parts: BTreeMap<usize, Vec<u32>>) -> Hypergraph {
        Hypergraph {
            n,
            colored: false,
            orders: parts
                .into_iter()
                .filter(|(_, vertices)| !vertices.is_empty())
                .map(|(m, vertices)| {
                    (
                        m,
                        EdgeList {
                            vertices,
                            colors: Vec::new(),
                        },
                    )
                })
                .collect(),
        }
    }
}

/// Validating constructor for hypergraphs read from outside the crate.
#[derive(Debug)]
pub struct HypergraphBuilder {
    n: usize,
    edges: BTreeMap<usize, Vec<(Vec<u32>, Option<Color>)>>,
    seen: HashSet<Vec<u32>>,
    colored: Option<bool>,
}

impl HypergraphBuilder {
    pub fn new(n: usize) -> Result<Self> {
        if u32::try_from(n).is_err() {
            return invalid(format!("vertex count {n} exceeds the supported range"));
        }
        Ok(Self {
            n,
            edges: BTreeMap::new(),
            seen: HashSet::new(),
            colored: None,
        })
    }

    /// Adds an edge given in any vertex order. Colors must be given for all
    /// edges or for none.
    pub fn add_edge(&mut self, vertices: &[usize], color: Option<Color>) -> Result<()> {
        if vertices.len() < 2 {
            return invalid(format!("edge {vertices:?} has fewer than two vertices"));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= self.n) {
            return invalid(format!("vertex {v} out of range for n = {}", self.n));
        }
        let mut tuple: Vec<u32> = vertices.iter().map(|&v| v as u32).collect();
        tuple.sort_unstable();
        if tuple.windows(2).any(|w| w[0] == w[1]) {
            return invalid(format!("edge {vertices:?} repeats a vertex"));
        }
        match self.colored {
            None => self.colored = Some(color.is_some()),
            Some(c) if c != color.is_some() => {
                return invalid("either every edge has a color or none does");
            }
            Some(_) => {}
        }
        if !self.seen.insert(tuple.clone()) {
            return invalid(format!("duplicate edge {tuple:?}"));
        }
        self.edges
            .entry(tuple.len())
            .or_default()
            .push((tuple, color));
        Ok(())
    }

    pub fn build(self) -> Hypergraph {
        let colored = self.colored.unwrap_or(false);
        let orders = self
            .edges
            .into_iter()
            .map(|(m, mut list)| {
                list.sort_unstable_by(|a, b| a.0.cmp(&b.0));
                let mut out = EdgeList::default();
                for (tuple, color) in list {
                    out.vertices.extend_from_slice(&tuple);
                    if let Some(c) = color {
                        out.colors.push(c);
                    }
                }
                (m, out)
            })
            .collect();
        Hypergraph {
            n: self.n,
            colored,
            orders,
        }
    }
}

/// Per-vertex incidence lists `(order, edge index)` for local edge scans.
#[derive(Clone, Debug)]
pub struct IncidenceIndex {
    offsets: Vec<usize>,
    entries: Vec<(u32, u32)>,
}

impl IncidenceIndex {
    pub fn new(h: &Hypergraph) -> Self {
        let mut degree = vec![0usize; h.n() + 1];
        for e in h.iter() {
            for &v in e.vertices {
                degree[v as usize + 1] += 1;
            }
        }
        for i in 0..h.n() {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut entries = vec![(0u32, 0u32); offsets[h.n()]];
        for m in h.orders().collect::<Vec<_>>() {
            for (idx, e) in h.edges(m).enumerate() {
                for &v in e.vertices {
                    entries[fill[v as usize]] = (m as u32, idx as u32);
                    fill[v as usize] += 1;
                }
            }
        }
        Self { offsets, entries }
    }

    /// Edges through `v`, as `(order, index)` pairs.
    pub fn incident(&self, v: usize) -> &[(u32, u32)] {
        &self.entries[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

/// Per-vertex block labels, ground truth or estimated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelVector {
    labels: Vec<usize>,
}

impl LabelVector {
    pub fn new(labels: Vec<usize>) -> Self {
        Self { labels }
    }

    pub fn unassigned(n: usize) -> Self {
        Self {
            labels: vec![UNASSIGNED; n],
        }
    }

    /// Consecutive runs of vertices, block `i` getting `sizes[i]` of them.
    pub fn from_block_sizes(sizes: &[usize]) -> Self {
        Self {
            labels: sizes
                .iter()
                .enumerate()
                .flat_map(|(b, &len)| std::iter::repeat_n(b, len))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn set(&mut self, v: usize, label: usize) {
        self.labels[v] = label;
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    pub fn is_complete(&self) -> bool {
        self.labels.iter().all(|&l| l != UNASSIGNED)
    }

    /// One more than the largest assigned label.
    pub fn label_bound(&self) -> usize {
        self.labels
            .iter()
            .filter(|&&l| l != UNASSIGNED)
            .max()
            .map_or(0, |m| m + 1)
    }

    /// Membership mask of block `b`.
    pub fn mask(&self, b: usize) -> Vec<bool> {
        self.labels.iter().map(|&l| l == b).collect()
    }

    pub fn check_blocks(&self, k: usize) -> Result<()> {
        match self.labels.iter().find(|&&l| l != UNASSIGNED && l >= k) {
            Some(l) => invalid(format!("label {l} out of range for k = {k}")),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Z,
    Y1,
    Y2,
}

/// The random vertex split into `Z` and `Y = Y1 ∪ Y2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitAssignment {
    sides: Vec<Side>,
}

impl SplitAssignment {
    pub fn new(sides: Vec<Side>) -> Self {
        Self { sides }
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    pub fn side(&self, v: usize) -> Side {
        self.sides[v]
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    /// Vertices on any of `sides`, ascending.
    pub fn members(&self, sides: &[Side]) -> Vec<usize> {
        (0..self.sides.len())
            .filter(|&v| sides.contains(&self.sides[v]))
            .collect()
    }

    pub fn mask(&self, sides: &[Side]) -> Vec<bool> {
        self.sides.iter().map(|s| sides.contains(s)).collect()
    }

    pub fn count(&self, side: Side) -> usize {
        self.sides.iter().filter(|&&s| s == side).count()
    }
}

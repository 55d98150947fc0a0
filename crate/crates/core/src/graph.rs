//! Labelled simple graphs on `{1..n}` and the bridge-core reduction.
//!
//! Vertices are 1-based in every public signature. Internally each vertex
//! `v` owns bit `v - 1` of a `u64` adjacency row, which caps `n` at 64.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::weights::WeightVector;

pub const MAX_VERTICES: usize = 64;

/// An unordered vertex pair `{u, v}` stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::MalformedInput(format!("self-loop at vertex {a}")));
        }
        if a == 0 || b == 0 {
            return Err(Error::MalformedInput("vertex labels are 1-based".into()));
        }
        Ok(Edge {
            u: a.min(b),
            v: a.max(b),
        })
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

/// Number of unordered pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `{u, v}` (1-based, `u < v`) in lexicographic order.
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(1 <= u && u < v && v <= n);
    (u - 1) * n - (u - 1) * u / 2 + (v - u - 1)
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A simple graph on the vertex set `{1..n}`.
///
/// The edge list is kept sorted; adjacency rows give O(1) edge tests.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabelledGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<u64>,
}

impl LabelledGraph {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::MalformedInput(format!(
                "vertex count must lie in 1..={MAX_VERTICES}, got {n}"
            )));
        }
        Ok(LabelledGraph {
            n,
            edges: Vec::new(),
            adj: vec![0; n],
        })
    }

    /// Builds a graph from 1-based vertex pairs, rejecting loops, duplicates
    /// and out-of-range endpoints.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for (a, b) in pairs {
            let e = Edge::new(a, b)?;
            if e.v > n {
                return Err(Error::MalformedInput(format!(
                    "edge {e} has an endpoint outside 1..={n}"
                )));
            }
            if g.has_edge(e.u, e.v) {
                return Err(Error::MalformedInput(format!("duplicate edge {e}")));
            }
            g.adj[e.u - 1] |= 1 << (e.v - 1);
            g.adj[e.v - 1] |= 1 << (e.u - 1);
            g.edges.push(e);
        }
        g.edges.sort_unstable();
        Ok(g)
    }

    /// Decodes an edge bitmask whose bit `pair_index(n, u, v)` marks `{u, v}`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if pair_count(n) > 64 {
            return Err(Error::InvalidArgument(format!(
                "edge masks need C(n,2) <= 64, got n = {n}"
            )));
        }
        if pair_count(n) < 64 && mask >> pair_count(n) != 0 {
            return Err(Error::MalformedInput(format!(
                "mask {mask:#x} has bits beyond the {} pairs of n = {n}",
                pair_count(n)
            )));
        }
        let mut pairs = Vec::new();
        let mut bit = 0;
        for u in 1..=n {
            for v in u + 1..=n {
                if mask >> bit & 1 == 1 {
                    pairs.push((u, v));
                }
                bit += 1;
            }
        }
        Self::new(n, pairs)
    }

    pub fn to_mask(&self) -> u64 {
        assert!(pair_count(self.n) <= 64, "graph too large for an edge mask");
        self.edges
            .iter()
            .fold(0, |m, e| m | 1 << pair_index(self.n, e.u, e.v))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v
            && (1..=self.n).contains(&u)
            && (1..=self.n).contains(&v)
            && self.adj[u - 1] >> (v - 1) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].count_ones() as usize
    }

    /// Neighbour bitset of `v` (bit `w - 1` set for each neighbour `w`).
    pub fn neighbour_mask(&self, v: usize) -> u64 {
        self.adj[v - 1]
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        BitIter(self.adj[v - 1]).map(|b| b + 1)
    }

    pub fn with_edge(&self, e: Edge) -> Result<Self> {
        Self::new(
            self.n,
            self.edges
                .iter()
                .map(Edge::endpoints)
                .chain([e.endpoints()]),
        )
    }

    pub fn without_edge(&self, e: Edge) -> Self {
        self.without_edges(&[e])
    }

    pub fn without_edges(&self, removed: &[Edge]) -> Self {
        let mut g = self.clone();
        for e in removed {
            if g.has_edge(e.u, e.v) {
                g.adj[e.u - 1] &= !(1 << (e.v - 1));
                g.adj[e.v - 1] &= !(1 << (e.u - 1));
            }
        }
        g.edges.retain(|e| !removed.contains(e));
        g
    }

    pub fn is_connected(&self) -> bool {
        components(self).len() == 1
    }

    pub fn component_count(&self) -> usize {
        components(self).len()
    }

    /// Serialises in the graph text format: `n <n>` then one `u v` per edge.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Debug for LabelledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges.iter().map(Edge::to_string).collect();
        write!(f, "LabelledGraph(n={}, [{}])", self.n, edges.join(", "))
    }
}

impl fmt::Display for LabelledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for e in &self.edges {
            writeln!(f, "{} {}", e.u, e.v)?;
        }
        Ok(())
    }
}

impl FromStr for LabelledGraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut n = None;
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad =
                |what: &str| Error::MalformedInput(format!("line {}: {what}: {raw:?}", lineno + 1));
            match n {
                None => {
                    if fields.len() != 2 || fields[0] != "n" {
                        return Err(bad("expected header `n <count>`"));
                    }
                    n = Some(
                        fields[1]
                            .parse::<usize>()
                            .map_err(|_| bad("bad vertex count"))?,
                    );
                }
                Some(_) => {
                    if fields.len() != 2 {
                        return Err(bad("expected `u v`"));
                    }
                    let u = fields[0].parse::<usize>().map_err(|_| bad("bad vertex"))?;
                    let v = fields[1].parse::<usize>().map_err(|_| bad("bad vertex"))?;
                    pairs.push((u, v));
                }
            }
        }
        let n = n.ok_or_else(|| Error::MalformedInput("missing `n <count>` header".into()))?;
        LabelledGraph::new(n, pairs)
    }
}

/// Iterates the set bits of a `u64`, lowest first.
#[derive(Clone, Copy)]
pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let b = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(b)
        }
    }
}

/// Connected components, ordered by smallest vertex label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    masks: Vec<u64>,
    index: Vec<usize>,
}

impl ComponentPartition {
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Vertex sets of the blocks, 1-based labels in increasing order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.masks
            .iter()
            .map(|&m| BitIter(m).map(|b| b + 1).collect())
            .collect()
    }

    /// Vertex bitsets of the blocks (bit `v - 1` for vertex `v`).
    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    /// Block index (0-based) of the 1-based vertex `v`.
    pub fn block_of(&self, v: usize) -> usize {
        self.index[v - 1]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.masks.iter().map(|m| m.count_ones() as usize).collect()
    }
}

pub fn components(g: &LabelledGraph) -> ComponentPartition {
    let mut unseen = full_mask(g.n);
    let mut masks = Vec::new();
    let mut index = vec![0; g.n];
    while unseen != 0 {
        let start = unseen.trailing_zeros() as usize;
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = g.adj[v] & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        for v in BitIter(comp) {
            index[v] = masks.len();
        }
        unseen &= !comp;
        masks.push(comp);
    }
    ComponentPartition { masks, index }
}

/// All bridges of `g`, sorted, by an iterative low-link depth-first search.
pub fn find_bridges(g: &LabelledGraph) -> Vec<Edge> {
    const NONE: usize = usize::MAX;
    let n = g.n;
    let mut disc = vec![NONE; n];
    let mut low = vec![0; n];
    let mut clock = 0;
    let mut bridges = Vec::new();
    // (vertex, parent, neighbours still to explore)
    let mut stack: Vec<(usize, usize, u64)> = Vec::with_capacity(n);

    for root in 0..n {
        if disc[root] != NONE {
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        stack.push((root, NONE, g.adj[root]));
        while let Some(top) = stack.last_mut() {
            let (v, parent, rest) = *top;
            if rest != 0 {
                let w = rest.trailing_zeros() as usize;
                top.2 &= rest - 1;
                if w == parent {
                    continue;
                }
                if disc[w] == NONE {
                    disc[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    stack.push((w, v, g.adj[w]));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != NONE {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        bridges.push(Edge {
                            u: parent.min(v) + 1,
                            v: parent.max(v) + 1,
                        });
                    }
                }
            }
        }
    }
    bridges.sort_unstable();
    bridges
}

/// `b(G)`: the graph with every bridge removed.
pub fn bridge_core(g: &LabelledGraph) -> LabelledGraph {
    g.without_edges(&find_bridges(g))
}

/// Contracts each component of `b(g)` to one vertex.
///
/// Vertex `i` of the returned forest stands for the `i`-th core component in
/// canonical order, and its weight is that component's size. Each bridge of
/// `g` becomes one forest edge.
pub fn contract(g: &LabelledGraph) -> Result<(Forest, WeightVector)> {
    contract_over(g, &bridge_core(g))
}

/// Contraction against an explicitly supplied core.
///
/// `core` must be a spanning subgraph of `g`; every edge of `g` outside
/// `core` is treated as a bridge. Fails with `MalformedInput` when such an
/// edge lies inside one core component or when those edges close a cycle
/// among the components.
pub fn contract_over(g: &LabelledGraph, core: &LabelledGraph) -> Result<(Forest, WeightVector)> {
    if core.n != g.n {
        return Err(Error::LengthMismatch {
            expected: g.n,
            actual: core.n,
        });
    }
    if let Some(e) = core.edges.iter().find(|e| !g.has_edge(e.u, e.v)) {
        return Err(Error::MalformedInput(format!(
            "core edge {e} is not an edge of the graph"
        )));
    }
    let parts = components(core);
    let mut pairs = Vec::new();
    for e in g.edges.iter().filter(|e| !core.has_edge(e.u, e.v)) {
        let (a, b) = (parts.block_of(e.u), parts.block_of(e.v));
        if a == b {
            return Err(Error::MalformedInput(format!(
                "alleged bridge {e} joins two vertices of core component {}",
                a + 1
            )));
        }
        pairs.push((a + 1, b + 1));
    }
    let contracted = LabelledGraph::new(parts.len(), pairs)
        .map_err(|_| Error::MalformedInput("two bridges join the same pair of cores".into()))?;
    let forest = Forest::new(contracted)
        .map_err(|_| Error::MalformedInput("bridges form a cycle among the cores".into()))?;
    let weights = WeightVector::new(parts.sizes().into_iter().map(|s| s as u64).collect())?;
    Ok((forest, weights))
}

//! Simple undirected graphs on `{0..n-1}` with packed adjacency rows.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::{self, VertexSet};
use crate::error::{invalid, Result};

/// Immutable simple graph. Row `v` of the adjacency matrix is a bitmask of
/// `N(v)`; rows are symmetric and have a zero diagonal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
    edges: usize,
}

/// Mutable accumulator for a [`Graph`].
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    g: Graph,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder { g: Graph::empty(n) }
    }

    pub fn from_graph(g: &Graph) -> Self {
        GraphBuilder { g: g.clone() }
    }

    pub fn n(&self) -> usize {
        self.g.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.g.has_edge(u, v)
    }

    /// Adds `uv`; duplicates are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.g.n;
        if u >= n || v >= n {
            return Err(invalid!("edge ({u},{v}) out of range for n={n}"));
        }
        if u == v {
            return Err(invalid!("loop at vertex {u}"));
        }
        self.g.set(u, v);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.g.unset(u, v);
    }

    pub fn degree(&self, v: usize) -> usize {
        self.g.degree(v)
    }

    pub fn build(self) -> Graph {
        self.g
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let stride = bits::words_for(n);
        Graph {
            n,
            stride,
            rows: vec![0; stride * n],
            edges: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set(u, v);
            }
        }
        g
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut b = GraphBuilder::new(n);
        for (u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    fn set(&mut self, u: usize, v: usize) {
        if !self.has_edge(u, v) {
            self.rows[u * self.stride + (v >> 6)] |= 1 << (v & 63);
            self.rows[v * self.stride + (u >> 6)] |= 1 << (u & 63);
            self.edges += 1;
        }
    }

    fn unset(&mut self, u: usize, v: usize) {
        if self.has_edge(u, v) {
            self.rows[u * self.stride + (v >> 6)] &= !(1 << (v & 63));
            self.rows[v * self.stride + (u >> 6)] &= !(1 << (u & 63));
            self.edges -= 1;
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Words per adjacency row.
    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && bits::test(self.row(u), v)
    }

    /// Bitmask of `N(v)`.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.stride..(v + 1) * self.stride]
    }

    pub fn neighbors(&self, v: usize) -> bits::Ones<'_> {
        bits::ones(self.row(v))
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(v))
    }

    pub fn degree(&self, v: usize) -> usize {
        bits::popcount(self.row(v))
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Number of edges with both ends in `set`.
    pub fn edges_within(&self, set: &[usize]) -> usize {
        let mut e = 0;
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                if self.has_edge(u, v) {
                    e += 1;
                }
            }
        }
        e
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        self.edges_within(set) == 0
    }

    /// Subgraph induced on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set(i, j);
                }
            }
        }
        g
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.set(u, v);
                }
            }
        }
        g
    }

    /// Graph with edge set `E(self) \ E(other)`.
    pub fn minus(&self, other: &Graph) -> Result<Graph> {
        if self.n != other.n {
            return Err(invalid!("vertex counts differ: {} vs {}", self.n, other.n));
        }
        let mut g = self.clone();
        for (u, v) in other.edges() {
            g.unset(u, v);
        }
        Ok(g)
    }

    /// `true` when every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges().all(|(u, v)| other.has_edge(u, v))
    }

    /// Edge sets intersect?
    pub fn shares_edge_with(&self, other: &Graph) -> bool {
        self.edges().any(|(u, v)| other.has_edge(u, v))
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = VertexSet::new(self.n);
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen.contains(s) {
                continue;
            }
            let mut comp = vec![s];
            seen.insert(s);
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for v in self.neighbors(u) {
                    if !seen.contains(v) {
                        seen.insert(v);
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Copies of this graph's edges placed on host vertices `map[i]`.
    pub fn place_into(&self, builder: &mut GraphBuilder, map: &[usize]) -> Result<()> {
        if map.len() != self.n {
            return Err(invalid!(
                "placement map has {} entries, graph has {} vertices",
                map.len(),
                self.n
            ));
        }
        for (u, v) in self.edges() {
            builder.add_edge(map[u], map[v])?;
        }
        Ok(())
    }
}

/// `K^{t}_{s_1,...,s_t}` with parts laid out consecutively.
pub fn complete_multipartite(part_sizes: &[usize]) -> Result<Graph> {
    if part_sizes.is_empty() {
        return Err(invalid!("complete_multipartite needs at least one part"));
    }
    if part_sizes.contains(&0) {
        return Err(invalid!("part sizes must be positive"));
    }
    let singles = Graph::complete(part_sizes.len());
    blow_up(&singles, part_sizes)
}

/// Replaces vertex `i` of `j` by an independent set of `sizes[i]` vertices.
pub fn blow_up(j: &Graph, sizes: &[usize]) -> Result<Graph> {
    if sizes.len() != j.n() {
        return Err(invalid!("blow_up: {} sizes for {} vertices", sizes.len(), j.n()));
    }
    let mut start = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    for &s in sizes {
        start.push(acc);
        acc += s;
    }
    start.push(acc);
    let mut g = Graph::empty(acc);
    for (a, b) in j.edges() {
        for u in start[a]..start[a + 1] {
            for v in start[b]..start[b + 1] {
                g.set(u, v);
            }
        }
    }
    Ok(g)
}

pub fn union(g1: &Graph, g2: &Graph) -> Result<Graph> {
    if g1.n() != g2.n() {
        return Err(invalid!("union of graphs on {} and {} vertices", g1.n(), g2.n()));
    }
    let mut g = g1.clone();
    for (u, v) in g2.edges() {
        g.set(u, v);
    }
    Ok(g)
}

/// Disjoint union; vertices of `g2` are shifted by `g1.n()`.
pub fn disjoint_union(g1: &Graph, g2: &Graph) -> Graph {
    let mut g = Graph::empty(g1.n() + g2.n());
    for (u, v) in g1.edges() {
        g.set(u, v);
    }
    let off = g1.n();
    for (u, v) in g2.edges() {
        g.set(u + off, v + off);
    }
    g
}

/// A graph on `r + 1` vertices with an ordered pair of distinguished vertices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DecoratedGraph {
    pub graph: Graph,
    pub w1: usize,
    pub w2: usize,
}

impl DecoratedGraph {
    pub fn new(graph: Graph, w1: usize, w2: usize) -> Result<Self> {
        if w1 == w2 {
            return Err(invalid!("distinguished vertices coincide ({w1})"));
        }
        if w1 >= graph.n() || w2 >= graph.n() {
            return Err(invalid!("distinguished vertex out of range"));
        }
        Ok(DecoratedGraph { graph, w1, w2 })
    }

    /// `K^-_{r+1}` with the missing edge between vertices `0` and `r`.
    pub fn kminus(r: usize) -> Self {
        let mut b = GraphBuilder::from_graph(&Graph::complete(r + 1));
        b.remove_edge(0, r);
        DecoratedGraph {
            graph: b.build(),
            w1: 0,
            w2: r,
        }
    }

    /// Number of vertices minus one.
    pub fn r(&self) -> usize {
        self.graph.n() - 1
    }

    /// `w1 w2` is a non-edge, so the graph sits inside `K^-_{r+1}`.
    pub fn is_kminus_carrier(&self) -> bool {
        !self.graph.has_edge(self.w1, self.w2)
    }

    /// Drops the edge `w1 w2` if present.
    pub fn restrict_to_kminus(&self) -> Self {
        let mut b = GraphBuilder::from_graph(&self.graph);
        b.remove_edge(self.w1, self.w2);
        DecoratedGraph {
            graph: b.build(),
            w1: self.w1,
            w2: self.w2,
        }
    }

    /// Swaps the roles of the distinguished vertices.
    pub fn swapped(&self) -> Self {
        DecoratedGraph {
            graph: self.graph.clone(),
            w1: self.w2,
            w2: self.w1,
        }
    }

    /// `K^-_{r+1}` on this vertex set with `w1 w2` as its non-edge.
    pub fn kminus_closure(&self) -> Self {
        let mut b = GraphBuilder::from_graph(&Graph::complete(self.graph.n()));
        b.remove_edge(self.w1, self.w2);
        DecoratedGraph {
            graph: b.build(),
            w1: self.w1,
            w2: self.w2,
        }
    }
}

/// `E(K^-_{r+1}) \ E(F)` on the same vertices, keeping the distinguished pair.
pub fn complement_within_kminus(f: &DecoratedGraph) -> Result<DecoratedGraph> {
    if !f.is_kminus_carrier() {
        return Err(invalid!(
            "distinguished vertices {} and {} are adjacent; not a K^- carrier",
            f.w1,
            f.w2
        ));
    }
    let n = f.graph.n();
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            let pair = (u == f.w1 && v == f.w2) || (u == f.w2 && v == f.w1);
            if !pair && !f.graph.has_edge(u, v) {
                g.set(u, v);
            }
        }
    }
    Ok(DecoratedGraph {
        graph: g,
        w1: f.w1,
        w2: f.w2,
    })
}

/// The Petersen graph (outer 5-cycle `0..5`, inner pentagram `5..10`).
pub fn petersen() -> Graph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, e).expect("static edge list")
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle needs n >= 3")
}

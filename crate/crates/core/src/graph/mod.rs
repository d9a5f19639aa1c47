//! Simple graphs with optional orientations and edge labels.
//!
//! Connectivity, block and clique predicates always look at the underlying
//! undirected simple graph; orientations and labels only matter to the
//! properties that interpret them.

mod blocks;
mod digraph;
mod dimacs;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use blocks::{blocks, is_forest_of_cliques, leaf_cliques, BlockDecomposition, LeafClique};
pub use digraph::Digraph;
pub use dimacs::{parse_digraph, parse_graph, write_digraph, write_graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GraphKind {
    pub oriented: bool,
    pub labeled: bool,
}

impl GraphKind {
    pub const PLAIN: GraphKind = GraphKind { oriented: false, labeled: false };
    pub const ORIENTED: GraphKind = GraphKind { oriented: true, labeled: false };
    pub const LABELED: GraphKind = GraphKind { oriented: false, labeled: true };
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.oriented, self.labeled) {
            (false, false) => write!(f, "plain"),
            (true, false) => write!(f, "oriented"),
            (false, true) => write!(f, "labeled"),
            (true, true) => write!(f, "oriented+labeled"),
        }
    }
}

/// An edge `{u, v}`. In an oriented graph this is the arc `u -> v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: Option<u32>,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn key(&self) -> (usize, usize) {
        pair_key(self.u, self.v)
    }
}

#[inline]
fn pair_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Immutable simple graph on vertices `0..n`.
#[derive(Debug, Clone)]
pub struct Graph {
    kind: GraphKind,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    index: HashMap<(usize, usize), usize>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.adj.len() == other.adj.len() && self.edges == other.edges
    }
}

impl Eq for Graph {}

/// Single-owner builder enforcing the simple-graph invariants.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    kind: GraphKind,
    n: usize,
    edges: Vec<Edge>,
    index: HashMap<(usize, usize), usize>,
}

impl GraphBuilder {
    pub fn new(n: usize, kind: GraphKind) -> Self {
        GraphBuilder { kind, n, edges: Vec::new(), index: HashMap::new() }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, label: Option<u32>) -> Result<usize> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        if self.kind.labeled != label.is_some() {
            return Err(Error::KindMismatch(if self.kind.labeled {
                format!("edge {{{u}, {v}}} has no label in a labeled graph")
            } else {
                format!("edge {{{u}, {v}}} carries a label in an unlabeled graph")
            }));
        }
        let key = pair_key(u, v);
        if self.index.contains_key(&key) {
            return Err(Error::InvalidGraph(format!("duplicate edge {{{u}, {v}}}")));
        }
        let id = self.edges.len();
        self.index.insert(key, id);
        self.edges.push(Edge { u, v, label });
        Ok(id)
    }

    pub fn build(self) -> Graph {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { kind: self.kind, edges: self.edges, adj, index: self.index }
    }
}

/// A graph derived from a parent by keeping a subset of vertices, with the
/// map back to parent ids.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `original[new_id] = parent_id`.
    pub original: Vec<usize>,
}

impl InducedSubgraph {
    pub fn local_id(&self, parent_id: usize) -> Option<usize> {
        self.original.binary_search(&parent_id).ok()
    }
}

impl Graph {
    pub fn empty(n: usize, kind: GraphKind) -> Graph {
        GraphBuilder::new(n, kind).build()
    }

    /// Unlabeled graph from an edge list; arcs when `kind.oriented`.
    pub fn from_edges(n: usize, kind: GraphKind, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut b = GraphBuilder::new(n, kind);
        for &(u, v) in edges {
            b.add_edge(u, v, None)?;
        }
        Ok(b.build())
    }

    pub fn plain(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        Graph::from_edges(n, GraphKind::PLAIN, edges)
    }

    pub fn oriented(n: usize, arcs: &[(usize, usize)]) -> Result<Graph> {
        Graph::from_edges(n, GraphKind::ORIENTED, arcs)
    }

    pub fn complete(n: usize) -> Graph {
        let mut b = GraphBuilder::new(n, GraphKind::PLAIN);
        for u in 0..n {
            for v in u + 1..n {
                b.add_edge(u, v, None).expect("complete graph edge");
            }
        }
        b.build()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::plain(n, &edges).expect("cycle edges")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::plain(n, &edges).expect("path edges")
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn directed_cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let arcs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::oriented(n, &arcs).expect("cycle arcs")
    }

    /// Acyclic tournament with arcs `i -> j` for `i < j`.
    pub fn transitive_tournament(n: usize) -> Graph {
        let arcs: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Graph::oriented(n, &arcs).expect("tournament arcs")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.index.contains_key(&pair_key(u, v))
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<&Edge> {
        self.index.get(&pair_key(u, v)).map(|&i| &self.edges[i])
    }

    /// True iff the graph has the arc `u -> v`.
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        matches!(self.edge_between(u, v), Some(e) if e.u == u)
    }

    /// The underlying simple graph with orientations and labels dropped.
    pub fn stripped(&self) -> Graph {
        let mut b = GraphBuilder::new(self.n(), GraphKind::PLAIN);
        for e in &self.edges {
            b.add_edge(e.u, e.v, None).expect("edge of a valid graph");
        }
        b.build()
    }

    pub fn check_vertices(&self, xs: &[usize]) -> Result<()> {
        match xs.iter().find(|&&x| x >= self.n()) {
            Some(&x) => Err(Error::VertexOutOfRange { vertex: x, n: self.n() }),
            None => Ok(()),
        }
    }

    fn mask(&self, xs: &[usize]) -> Result<Vec<bool>> {
        self.check_vertices(xs)?;
        let mut mask = vec![false; self.n()];
        for &x in xs {
            mask[x] = true;
        }
        Ok(mask)
    }

    /// `G[X]`, keeping each surviving edge's orientation and label.
    pub fn induced(&self, xs: &[usize]) -> Result<InducedSubgraph> {
        let keep = self.mask(xs)?;
        Ok(self.induced_by_mask(&keep))
    }

    /// `G \ X`.
    pub fn delete_vertices(&self, xs: &[usize]) -> Result<InducedSubgraph> {
        let mut keep = self.mask(xs)?;
        keep.iter_mut().for_each(|k| *k = !*k);
        Ok(self.induced_by_mask(&keep))
    }

    pub fn induced_by_mask(&self, keep: &[bool]) -> InducedSubgraph {
        let original: Vec<usize> = (0..self.n()).filter(|&v| keep[v]).collect();
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in original.iter().enumerate() {
            local[v] = i;
        }
        let mut b = GraphBuilder::new(original.len(), self.kind);
        for e in &self.edges {
            if keep[e.u] && keep[e.v] {
                b.add_edge(local[e.u], local[e.v], e.label).expect("edge of a valid graph");
            }
        }
        InducedSubgraph { graph: b.build(), original }
    }

    /// Indices of the edges with exactly one endpoint in `S` (the cut `δ(S)`).
    pub fn boundary(&self, s: &[usize]) -> Result<Vec<usize>> {
        let in_s = self.mask(s)?;
        Ok((0..self.m()).filter(|&i| in_s[self.edges[i].u] != in_s[self.edges[i].v]).collect())
    }

    /// Number of edges with both endpoints in `S`.
    pub fn edges_within(&self, s: &[usize]) -> Result<usize> {
        let in_s = self.mask(s)?;
        Ok(self.edges.iter().filter(|e| in_s[e.u] && in_s[e.v]).count())
    }

    /// Connected components in order of their smallest vertex; each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_within(&vec![true; self.n()])
    }

    /// Components of the subgraph induced by `alive`, in original ids.
    pub fn components_within(&self, alive: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..self.n() {
            if !alive[s] || seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if alive[w] && !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_clique(&self, xs: &[usize]) -> bool {
        xs.iter().enumerate().all(|(i, &u)| xs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Distinct labels used by the edges, sorted.
    pub fn labels(&self) -> Vec<u32> {
        let mut ls: Vec<u32> = self.edges.iter().filter_map(|e| e.label).collect();
        ls.sort_unstable();
        ls.dedup();
        ls
    }
}

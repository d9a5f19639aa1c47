use std::collections::HashSet;

use super::{Graph, GraphKind};
use crate::error::{Error, Result};

/// Loop-free directed graph without repeated arcs; unlike an oriented
/// [`Graph`] it may hold both `u -> v` and `v -> u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    present: HashSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph { n, arcs: Vec::new(), present: HashSet::new() }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut d = Digraph::new(n);
        for &(u, v) in arcs {
            d.add_arc(u, v)?;
        }
        Ok(d)
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        if !self.present.insert((u, v)) {
            return Err(Error::InvalidGraph(format!("duplicate arc {u} -> {v}")));
        }
        self.arcs.push((u, v));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.present.contains(&(u, v))
    }

    /// Number of unordered pairs joined in both directions.
    pub fn opposite_pairs(&self) -> usize {
        self.arcs.iter().filter(|&&(u, v)| u < v && self.has_arc(v, u)).count()
    }

    /// Drops both arcs of every opposite pair, leaving an oriented graph.
    pub fn without_opposite_pairs(&self) -> Graph {
        let arcs: Vec<_> = self.arcs.iter().copied().filter(|&(u, v)| !self.has_arc(v, u)).collect();
        Graph::from_edges(self.n, GraphKind::ORIENTED, &arcs).expect("oriented after pair removal")
    }

    /// Views an oriented graph as a digraph.
    pub fn from_oriented(g: &Graph) -> Self {
        let arcs: Vec<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        Digraph::from_arcs(g.n(), &arcs).expect("oriented graph arcs are distinct")
    }
}

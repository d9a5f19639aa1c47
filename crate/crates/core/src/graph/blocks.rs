//! Blocks (maximal 2-connected subgraphs, bridges and isolated vertices),
//! cut vertices and the block forest.

use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Sorted vertex sets, ordered lexicographically.
    pub blocks: Vec<Vec<usize>>,
    /// Sorted.
    pub cut_vertices: Vec<usize>,
    /// `vertex_blocks[v]` lists the blocks containing `v`; two or more iff
    /// `v` is a cut vertex.
    pub vertex_blocks: Vec<Vec<usize>>,
}

impl BlockDecomposition {
    pub fn is_cut_vertex(&self, v: usize) -> bool {
        self.vertex_blocks[v].len() >= 2
    }

    /// Cut vertices lying in block `b`.
    pub fn block_cut_vertices(&self, b: usize) -> Vec<usize> {
        self.blocks[b].iter().copied().filter(|&v| self.is_cut_vertex(v)).collect()
    }

    /// Edges `(block, cut vertex)` of the bipartite block forest.
    pub fn forest_edges(&self) -> Vec<(usize, usize)> {
        (0..self.blocks.len()).flat_map(|b| self.block_cut_vertices(b).into_iter().map(move |c| (b, c))).collect()
    }
}

/// Lowpoint DFS with an explicit stack, so long paths cannot overflow.
pub fn blocks(g: &Graph) -> BlockDecomposition {
    let n = g.n();
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut raw: Vec<Vec<usize>> = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    // (vertex, parent, next neighbor index)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        if g.degree(root) == 0 {
            disc[root] = time;
            time += 1;
            raw.push(vec![root]);
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        stack.push((root, UNSEEN, 0));
        while let Some(top) = stack.last_mut() {
            let (v, parent, next) = *top;
            if next < g.degree(v) {
                top.2 += 1;
                let w = g.neighbors(v)[next];
                if disc[w] == UNSEEN {
                    edge_stack.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
                continue;
            }
            stack.pop();
            if parent == UNSEEN {
                continue;
            }
            low[parent] = low[parent].min(low[v]);
            if low[v] >= disc[parent] {
                let mut block = Vec::new();
                while let Some((a, b)) = edge_stack.pop() {
                    block.push(a);
                    block.push(b);
                    if (a, b) == (parent, v) {
                        break;
                    }
                }
                block.sort_unstable();
                block.dedup();
                raw.push(block);
            }
        }
    }

    raw.sort();
    let mut vertex_blocks = vec![Vec::new(); n];
    for (i, b) in raw.iter().enumerate() {
        for &v in b {
            vertex_blocks[v].push(i);
        }
    }
    let cut_vertices = (0..n).filter(|&v| vertex_blocks[v].len() >= 2).collect();
    BlockDecomposition { blocks: raw, cut_vertices, vertex_blocks }
}

/// True iff every block's vertex set is a clique. Orientation and labels are
/// ignored.
pub fn is_forest_of_cliques(g: &Graph) -> bool {
    blocks(g).blocks.iter().all(|b| g.is_clique(b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafClique {
    pub vertices: Vec<usize>,
    /// The single cut vertex, or `None` when the clique is a whole component.
    pub cut_vertex: Option<usize>,
}

pub fn leaf_cliques(g: &Graph) -> Result<Vec<LeafClique>> {
    let dec = blocks(g);
    if let Some(b) = dec.blocks.iter().find(|b| !g.is_clique(b)) {
        return Err(Error::Precondition(format!("block {b:?} is not a clique")));
    }
    Ok((0..dec.blocks.len())
        .filter_map(|b| {
            let cuts = dec.block_cut_vertices(b);
            (cuts.len() <= 1).then(|| LeafClique { vertices: dec.blocks[b].clone(), cut_vertex: cuts.first().copied() })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphKind;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bowtie() -> Graph {
        // two triangles sharing vertex 2
        Graph::plain(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap()
    }

    #[test]
    fn triangle_is_one_block() {
        let d = blocks(&Graph::complete(3));
        assert_eq!(d.blocks, vec![vec![0, 1, 2]]);
        assert!(d.cut_vertices.is_empty());
    }

    #[test]
    fn path_has_middle_cut_vertex() {
        let d = blocks(&Graph::path(3));
        assert_eq!(d.blocks, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(d.cut_vertices, vec![1]);
        assert_eq!(d.forest_edges(), vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn bowtie_blocks() {
        let d = blocks(&bowtie());
        assert_eq!(d.blocks, vec![vec![0, 1, 2], vec![2, 3, 4]]);
        assert_eq!(d.cut_vertices, vec![2]);
    }

    #[test]
    fn isolated_vertices_are_blocks() {
        let d = blocks(&Graph::plain(3, &[(0, 2)]).unwrap());
        assert_eq!(d.blocks, vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn long_path_does_not_overflow() {
        let d = blocks(&Graph::path(100_000));
        assert_eq!(d.blocks.len(), 99_999);
        assert_eq!(d.cut_vertices.len(), 99_998);
    }

    #[test]
    fn forest_of_cliques_examples() {
        assert!(is_forest_of_cliques(&Graph::path(6)));
        assert!(!is_forest_of_cliques(&Graph::cycle(4)));
        let mut edges = Vec::new();
        for verts in [[0, 1, 2, 3], [3, 4, 5, 6]] {
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((verts[i], verts[j]));
                }
            }
        }
        let two_k4 = Graph::plain(7, &edges).unwrap();
        assert!(is_forest_of_cliques(&two_k4));
        // oriented copies are judged on their underlying graph
        let oriented = Graph::from_edges(7, GraphKind::ORIENTED, &edges).unwrap();
        assert!(is_forest_of_cliques(&oriented));
    }

    #[test]
    fn leaf_clique_examples() {
        let k3 = leaf_cliques(&Graph::complete(3)).unwrap();
        assert_eq!(k3, vec![LeafClique { vertices: vec![0, 1, 2], cut_vertex: None }]);

        let p3 = leaf_cliques(&Graph::path(3)).unwrap();
        assert_eq!(p3.len(), 2);
        assert!(p3.iter().all(|l| l.cut_vertex == Some(1)));

        // three triangles at centre 0
        let star = Graph::plain(7, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4), (0, 5), (0, 6), (5, 6)]).unwrap();
        let leaves = leaf_cliques(&star).unwrap();
        assert_eq!(leaves.len(), 3);
        assert!(leaves.iter().all(|l| l.cut_vertex == Some(0) && l.vertices.len() == 3));

        assert!(leaf_cliques(&Graph::cycle(5)).is_err());
    }

    fn naive_cut_vertices(g: &Graph) -> Vec<usize> {
        let base = g.components().len();
        (0..g.n())
            .filter(|&v| g.degree(v) > 0)
            .filter(|&v| g.delete_vertices(&[v]).unwrap().graph.components().len() > base)
            .collect()
    }

    /// Two vertices are in a common block iff they're adjacent, or they lie
    /// on a cycle, i.e. no single other vertex separates them.
    fn naive_same_block(g: &Graph, u: usize, v: usize) -> bool {
        if g.has_edge(u, v) {
            return true;
        }
        let connected = |alive: &[bool]| g.components_within(alive).iter().any(|c| c.contains(&u) && c.contains(&v));
        if !connected(&vec![true; g.n()]) {
            return false;
        }
        (0..g.n()).filter(|&w| w != u && w != v).all(|w| {
            let mut alive = vec![true; g.n()];
            alive[w] = false;
            connected(&alive)
        })
    }

    #[test]
    fn agrees_with_quadratic_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3000 {
            let n = rng.gen_range(1..=7);
            let p = rng.gen_range(0.1..0.8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::plain(n, &edges).unwrap();
            let d = blocks(&g);
            assert_eq!(d.cut_vertices, naive_cut_vertices(&g), "{edges:?}");
            for e in g.edges() {
                let holding = d.blocks.iter().filter(|b| b.contains(&e.u) && b.contains(&e.v)).count();
                assert_eq!(holding, 1);
            }
            for u in 0..n {
                for v in u + 1..n {
                    let together = d.blocks.iter().any(|b| b.contains(&u) && b.contains(&v));
                    assert_eq!(together, naive_same_block(&g, u, v), "{edges:?} {u} {v}");
                }
            }
        }
    }
}

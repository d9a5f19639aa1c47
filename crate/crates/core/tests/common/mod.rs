//! Random instance generators shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use apt_core::{Digraph, Graph};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random spanning tree plus every other pair with probability `p`.
pub fn random_connected_pairs(rng: &mut impl Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    let mut present = vec![vec![false; n]; n];
    for i in 1..n {
        let (a, b) = (perm[i], perm[rng.gen_range(0..i)]);
        present[a][b] = true;
        present[b][a] = true;
        pairs.push((a.min(b), a.max(b)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !present[a][b] && rng.gen_bool(p) {
                pairs.push((a, b));
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

pub fn random_connected_graph(rng: &mut impl Rng, n: usize) -> Graph {
    let p = rng.gen_range(0.1..0.9);
    Graph::plain(n, &random_connected_pairs(rng, n, p)).unwrap()
}

pub fn random_connected_oriented(rng: &mut impl Rng, n: usize) -> Graph {
    let p = rng.gen_range(0.1..0.9);
    let arcs: Vec<_> = random_connected_pairs(rng, n, p)
        .into_iter()
        .map(|(a, b)| if rng.gen_bool(0.5) { (a, b) } else { (b, a) })
        .collect();
    Graph::oriented(n, &arcs).unwrap()
}

pub fn random_tournament(rng: &mut impl Rng, n: usize) -> Graph {
    let mut arcs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            arcs.push(if rng.gen_bool(0.5) { (a, b) } else { (b, a) });
        }
    }
    Graph::oriented(n, &arcs).unwrap()
}

/// Digraph on `n` vertices split into `parts` groups with no arcs between
/// groups; inside a group each pair gets no arc, one arc, or both arcs.
pub fn random_digraph(rng: &mut impl Rng, n: usize, parts: usize) -> Digraph {
    let group: Vec<usize> = (0..n).map(|v| if v < parts { v } else { rng.gen_range(0..parts) }).collect();
    let density = rng.gen_range(0.2..0.9);
    let mut arcs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if group[a] != group[b] || !rng.gen_bool(density) {
                continue;
            }
            match rng.gen_range(0..5) {
                0 => {
                    arcs.push((a, b));
                    arcs.push((b, a));
                }
                1 | 2 => arcs.push((a, b)),
                _ => arcs.push((b, a)),
            }
        }
    }
    Digraph::from_arcs(n, &arcs).unwrap()
}

/// Edges of `g` with indices in `keep`, as a graph of the same kind.
pub fn subgraph(g: &Graph, keep: &[usize]) -> Graph {
    let edges: Vec<_> = keep.iter().map(|&i| (g.edges()[i].u, g.edges()[i].v)).collect();
    Graph::from_edges(g.n(), g.kind(), &edges).unwrap()
}

/// Hub `0` with one block per entry of `cliques`: `x`, `y` adjacent to the
/// hub, a clique of the given size joined to both, and `x`, `y` non-adjacent.
pub fn gadget(cliques: &[usize]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut next = 1;
    for &c in cliques {
        let (x, y) = (next, next + 1);
        let members: Vec<usize> = (next + 2..next + 2 + c).collect();
        next += 2 + c;
        edges.push((0, x));
        edges.push((0, y));
        for (i, &u) in members.iter().enumerate() {
            edges.push((x, u));
            edges.push((y, u));
            for &w in &members[i + 1..] {
                edges.push((u, w));
            }
        }
    }
    edges
}

pub fn n_of(cliques: &[usize]) -> usize {
    1 + cliques.iter().map(|c| c + 2).sum::<usize>()
}

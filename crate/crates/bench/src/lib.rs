//! Seeded instance generators for the benchmarks.

use apt_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random spanning tree plus every other pair with probability `p`.
pub fn random_connected(seed: u64, n: usize, p: f64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !edges.contains(&(a, b)) && rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::plain(n, &edges).unwrap()
}

/// Chain of `count` cliques of size `size` glued at single vertices, plus
/// `extra` vertices each joined to a few random chain vertices. Returns the
/// graph and the extra vertices, whose removal leaves a forest of cliques.
pub fn cliques_with_apex(seed: u64, count: usize, size: usize, extra: usize, oriented: bool) -> (Graph, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut start = 0;
    for _ in 0..count {
        for a in start..start + size {
            for b in a + 1..start + size {
                edges.push((a, b));
            }
        }
        start += size - 1;
    }
    let chain = start + 1;
    let s: Vec<usize> = (chain..chain + extra).collect();
    for &x in &s {
        for _ in 0..3 {
            let v = rng.gen_range(0..chain);
            if !edges.contains(&(v, x)) {
                edges.push((v, x));
            }
        }
    }
    let n = chain + extra;
    let g = if oriented {
        let arcs: Vec<_> = edges.into_iter().map(|(a, b)| if rng.gen_bool(0.5) { (a, b) } else { (b, a) }).collect();
        Graph::oriented(n, &arcs).unwrap()
    } else {
        Graph::plain(n, &edges).unwrap()
    };
    (g, s)
}

/// Square matrix of weights in `0..100`.
pub fn random_weights(seed: u64, r: usize) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..r).map(|_| (0..r).map(|_| rng.gen_range(0..100)).collect()).collect()
}

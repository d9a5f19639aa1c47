//! Exact solvers for instances that come with a deletion set `S` such that
//! `G \ S` is a forest of cliques.
//!
//! Both solvers enumerate an assignment of `S` (a map into the target for
//! homomorphisms, a linear order for acyclicity) and, for each, eliminate the
//! leaf cliques of `G \ S` one at a time. A clique that is a whole component
//! adds its best contribution to the running total; a clique hanging off a
//! cut vertex folds its best contribution into that vertex's table.

mod acyclic;
mod hom;
mod matching;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graph::{blocks, Graph, InducedSubgraph};
use crate::property::Witness;
use crate::rational::Rational;

pub use acyclic::{clique_orders_brute_force, solve_acyclic_structured};
pub use hom::solve_hom_structured;
pub use matching::{max_weight_perfect_matching, Assignment};

/// Which block roots each component's elimination; the result does not
/// depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RootChoice {
    #[default]
    FirstBlock,
    LastBlock,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    /// Answer YES as soon as `G \ S` contains a tournament of at least
    /// [`spencer_threshold`] vertices (acyclic solver only).
    pub spencer: bool,
    /// Worker threads for the outer enumeration; 1 runs inline.
    pub jobs: usize,
    pub root: RootChoice,
    /// Upper bound on the number of outer assignments of `S`.
    pub max_assignments: u128,
    /// Largest clique the acyclic solver's subset DP accepts.
    pub max_clique: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { spencer: true, jobs: 1, root: RootChoice::FirstBlock, max_assignments: 1 << 32, max_clique: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredOutcome {
    pub answer: bool,
    /// Exact optimum `r`, unless the Spencer shortcut decided the instance.
    pub value: Option<usize>,
    /// `pt(G) + k`.
    pub threshold: Rational,
    /// Present iff the answer is YES and `value` was computed.
    pub witness: Option<Witness>,
    pub spencer_shortcut: bool,
}

/// One elimination step: a block of `G \ S` (local ids) and the cut vertex
/// separating it from the rest of its component, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Step {
    pub vertices: Vec<usize>,
    pub cut: Option<usize>,
}

pub(crate) struct Prepared {
    pub rest: InducedSubgraph,
    /// `S`, sorted.
    pub s: Vec<usize>,
    /// Leaf-first elimination order of the blocks of `G \ S`.
    pub steps: Vec<Step>,
}

/// Validates `S` and computes the elimination schedule of `G \ S`.
pub(crate) fn prepare(g: &Graph, s: &[usize], root: RootChoice) -> Result<Prepared> {
    g.check_vertices(s).map_err(|e| Error::InvalidDeletionSet(e.to_string()))?;
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidDeletionSet("repeated vertex".into()));
    }
    let rest = g.delete_vertices(&sorted)?;
    let h = &rest.graph;
    let dec = blocks(h);
    if let Some(b) = dec.blocks.iter().find(|b| !h.is_clique(b)) {
        let orig: Vec<usize> = b.iter().map(|&v| rest.original[v]).collect();
        return Err(Error::InvalidDeletionSet(format!(
            "G \\ S is not a forest of cliques: block {orig:?} is not a clique"
        )));
    }

    let mut comp_of = vec![usize::MAX; h.n()];
    let comps = h.components();
    for (ci, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = ci;
        }
    }
    let mut roots = vec![None; comps.len()];
    for (bi, b) in dec.blocks.iter().enumerate() {
        let slot = &mut roots[comp_of[b[0]]];
        match (root, *slot) {
            (RootChoice::FirstBlock, Some(_)) => {}
            _ => *slot = Some(bi),
        }
    }

    let mut steps = Vec::with_capacity(dec.blocks.len());
    let mut seen = vec![false; dec.blocks.len()];
    for r in roots.into_iter().flatten() {
        let mut order = vec![(r, None)];
        seen[r] = true;
        let mut i = 0;
        while i < order.len() {
            let (b, parent_cut) = order[i];
            i += 1;
            for c in dec.block_cut_vertices(b) {
                if Some(c) == parent_cut {
                    continue;
                }
                for &nb in &dec.vertex_blocks[c] {
                    if !seen[nb] {
                        seen[nb] = true;
                        order.push((nb, Some(c)));
                    }
                }
            }
        }
        steps.extend(order.into_iter().rev().map(|(b, cut)| Step { vertices: dec.blocks[b].clone(), cut }));
    }
    Ok(Prepared { rest, s: sorted, steps })
}

/// Smallest `b` with `(3/20)·b^{3/2} >= b/4 + k + 1/4`, i.e.
/// `9·b³ >= 25·(b + 4k + 1)²` in integers; for `k >= 70` capped at `k`.
pub fn spencer_threshold(k: i64) -> Result<u64> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be at least 1, got {k}")));
    }
    let k_big = BigInt::from(k);
    let holds = |b: u64| {
        let b = BigInt::from(b);
        let rhs = &b + &k_big * 4 + 1;
        &b * &b * &b * 9 >= &rhs * &rhs * 25
    };
    // the inequality holds at b = 16k + 16, so doubling finds an upper bracket quickly
    let mut hi: u64 = 1;
    while !holds(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2; // fails (or is 0)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // (5 / (4c))² with c = 3/20 is 625/9, so k >= 70
    if 9 * (k as i128) >= 625 {
        hi = hi.min(k as u64);
    }
    Ok(hi)
}

/// Runs `eval` over `0..count` and returns the smallest index attaining the
/// maximum, using up to `jobs` threads.
pub(crate) fn argmax_over<F>(count: u128, jobs: usize, eval: F) -> Option<(u128, i64)>
where
    F: Fn(u128) -> i64 + Sync,
{
    if count == 0 {
        return None;
    }
    let better = |a: (u128, i64), b: (u128, i64)| {
        if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
            b
        } else {
            a
        }
    };
    if jobs <= 1 || count < 64 {
        return (0..count).map(|i| (i, eval(i))).reduce(better);
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().ok()?;
    let chunk = count.div_ceil(jobs as u128 * 8);
    let chunks: Vec<(u128, u128)> =
        (0..count).step_by(chunk as usize).map(|lo| (lo, (lo + chunk).min(count))).collect();
    pool.install(|| {
        use rayon::prelude::*;
        chunks.par_iter().filter_map(|&(lo, hi)| (lo..hi).map(|i| (i, eval(i))).reduce(better)).reduce_with(better)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct floating-point reading of the inequality, away from equality.
    fn spencer_float(k: i64) -> u64 {
        (1u64..).find(|&b| 0.15 * (b as f64).powf(1.5) >= b as f64 / 4.0 + k as f64 + 0.25).unwrap()
    }

    #[test]
    fn spencer_values() {
        assert_eq!(spencer_threshold(1).unwrap(), 8);
        assert_eq!(spencer_threshold(2).unwrap(), 11);
        for k in 1..70 {
            assert_eq!(spencer_threshold(k).unwrap(), spencer_float(k), "k = {k}");
        }
        for k in [70, 100, 1000] {
            assert!(spencer_threshold(k).unwrap() <= k as u64);
        }
        assert!(spencer_threshold(0).is_err());
    }

    #[test]
    fn schedule_is_leaf_first() {
        // path 0-1-2-3 with S = {} : blocks {0,1},{1,2},{2,3}
        let g = Graph::path(4);
        let p = prepare(&g, &[], RootChoice::FirstBlock).unwrap();
        assert_eq!(p.steps.last().unwrap(), &Step { vertices: vec![0, 1], cut: None });
        assert_eq!(p.steps[0], Step { vertices: vec![2, 3], cut: Some(2) });
        let p = prepare(&g, &[], RootChoice::LastBlock).unwrap();
        assert_eq!(p.steps.last().unwrap(), &Step { vertices: vec![2, 3], cut: None });
    }

    #[test]
    fn rejects_bad_deletion_sets() {
        let c5 = Graph::cycle(5);
        assert!(matches!(prepare(&c5, &[], RootChoice::FirstBlock), Err(Error::InvalidDeletionSet(_))));
        assert!(matches!(prepare(&c5, &[0, 0], RootChoice::FirstBlock), Err(Error::InvalidDeletionSet(_))));
        assert!(matches!(prepare(&c5, &[9], RootChoice::FirstBlock), Err(Error::InvalidDeletionSet(_))));
        assert!(prepare(&c5, &[0], RootChoice::FirstBlock).is_ok());
    }

    #[test]
    fn parallel_argmax_matches_serial() {
        let f = |i: u128| ((i * 7919) % 1000) as i64;
        assert_eq!(argmax_over(5000, 1, f), argmax_over(5000, 4, f));
    }
}

use std::collections::HashMap;

use super::{argmax_over, max_weight_perfect_matching, prepare, SolveOptions, Step, StructuredOutcome};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphKind};
use crate::property::{hom_lambda, is_vertex_transitive, pt_bound, Certificate, Witness};
use crate::rational::Rational;

/// All ways to write `total` as an ordered sum of `parts` non-negative terms.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            go(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Best image assignment for one clique, as `(vertex, target vertex)` pairs.
type Images = Vec<(usize, usize)>;

enum StepRecord {
    Component(Images),
    /// Indexed by the image of the cut vertex.
    Cut(Vec<Images>),
}

struct HomSolver<'a> {
    target_adj: Vec<Vec<bool>>,
    n0: usize,
    /// `s_neighbors[v]`: positions in `S` adjacent to rest vertex `v`.
    s_neighbors: Vec<Vec<usize>>,
    s_edges: Vec<(usize, usize)>,
    steps: &'a [Step],
    tuples: HashMap<usize, Vec<Vec<usize>>>,
}

impl HomSolver<'_> {
    fn inner_edges(&self, counts: &[usize]) -> i64 {
        let mut sum = 0;
        for a in 0..self.n0 {
            for b in a + 1..self.n0 {
                if self.target_adj[a][b] {
                    sum += (counts[a] * counts[b]) as i64;
                }
            }
        }
        sum
    }

    /// Best `matching + edges inside` over all tuples for `vertices`, plus a
    /// per-tuple bonus; returns the value and the images.
    fn best_clique<B: Fn(&[usize]) -> i64>(&self, vertices: &[usize], tab: &[Vec<i64>], bonus: B) -> (i64, Images) {
        let mut best: Option<(i64, Images)> = None;
        for counts in &self.tuples[&vertices.len()] {
            let labels: Vec<usize> = counts.iter().enumerate().flat_map(|(u, &c)| std::iter::repeat_n(u, c)).collect();
            let weights: Vec<Vec<i64>> =
                vertices.iter().map(|&v| labels.iter().map(|&u| tab[v][u]).collect()).collect();
            let assignment = max_weight_perfect_matching(&weights).expect("square by construction");
            let value = assignment.value + self.inner_edges(counts) + bonus(counts);
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                let images = vertices.iter().zip(&assignment.columns).map(|(&v, &j)| (v, labels[j])).collect();
                best = Some((value, images));
            }
        }
        best.expect("at least one tuple")
    }

    /// `r_φ` for one map of `S`; optionally records the argmax choices.
    fn run(&self, phi: &[usize], rest_n: usize, mut record: Option<&mut Vec<StepRecord>>) -> i64 {
        let mut tab = vec![vec![0i64; self.n0]; rest_n];
        for (v, row) in tab.iter_mut().enumerate() {
            for &si in &self.s_neighbors[v] {
                for (u, cell) in row.iter_mut().enumerate() {
                    if self.target_adj[phi[si]][u] {
                        *cell += 1;
                    }
                }
            }
        }
        let mut r: i64 = self.s_edges.iter().filter(|&&(i, j)| self.target_adj[phi[i]][phi[j]]).count() as i64;

        for step in self.steps {
            match step.cut {
                None => {
                    let (t, images) = self.best_clique(&step.vertices, &tab, |_| 0);
                    r += t;
                    if let Some(rec) = record.as_deref_mut() {
                        rec.push(StepRecord::Component(images));
                    }
                }
                Some(c) => {
                    let others: Vec<usize> = step.vertices.iter().copied().filter(|&v| v != c).collect();
                    let mut per_image = Vec::with_capacity(self.n0);
                    for v0 in 0..self.n0 {
                        let (t, images) = self.best_clique(&others, &tab, |counts| {
                            (0..self.n0).filter(|&u| self.target_adj[v0][u]).map(|u| counts[u] as i64).sum()
                        });
                        tab[c][v0] += t;
                        per_image.push(images);
                    }
                    if let Some(rec) = record.as_deref_mut() {
                        rec.push(StepRecord::Cut(per_image));
                    }
                }
            }
        }
        r
    }
}

fn decode(mut index: u128, base: usize, len: usize) -> Vec<usize> {
    let mut digits = vec![0; len];
    for d in digits.iter_mut() {
        *d = (index % base as u128) as usize;
        index /= base as u128;
    }
    digits
}

/// Decides whether `g` has a subgraph with at least `pt(G) + k` edges that
/// maps homomorphically into `target`, given `S` with `G \ S` a forest of
/// cliques. Runs in `O(n0^|S| · poly)` for a fixed target.
pub fn solve_hom_structured(
    g: &Graph,
    s: &[usize],
    target: &Graph,
    k: i64,
    opts: &SolveOptions,
) -> Result<StructuredOutcome> {
    if g.kind() != GraphKind::PLAIN || target.kind() != GraphKind::PLAIN {
        return Err(Error::KindMismatch("structured homomorphism solving needs unoriented, unlabeled graphs".into()));
    }
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be at least 1, got {k}")));
    }
    let n0 = target.n();
    let complete = target.m() == n0 * (n0 - 1) / 2;
    if !complete && !is_vertex_transitive(target)? {
        return Err(Error::InvalidParameter("target graph is not vertex-transitive".into()));
    }
    let lambda = hom_lambda(target)?;
    let threshold = pt_bound(g, &lambda)? + Rational::from_integer(k);

    let prepared = prepare(g, s, opts.root)?;
    let rest = &prepared.rest;
    let s_pos: HashMap<usize, usize> = prepared.s.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let s_neighbors: Vec<Vec<usize>> =
        rest.original.iter().map(|&v| g.neighbors(v).iter().filter_map(|w| s_pos.get(w).copied()).collect()).collect();
    let s_edges: Vec<(usize, usize)> =
        g.edges().iter().filter_map(|e| Some((*s_pos.get(&e.u)?, *s_pos.get(&e.v)?))).collect();
    let mut target_adj = vec![vec![false; n0]; n0];
    for e in target.edges() {
        target_adj[e.u][e.v] = true;
        target_adj[e.v][e.u] = true;
    }
    let mut tuples = HashMap::new();
    for step in &prepared.steps {
        for size in [step.vertices.len(), step.vertices.len() - 1] {
            tuples.entry(size).or_insert_with(|| compositions(size, n0));
        }
    }
    let solver = HomSolver { target_adj, n0, s_neighbors, s_edges, steps: &prepared.steps, tuples };

    let s_len = prepared.s.len();
    let count = (n0 as u128)
        .checked_pow(s_len as u32)
        .filter(|&c| c <= opts.max_assignments)
        .ok_or_else(|| Error::BudgetExceeded(format!("{n0}^{s_len} maps of S exceed the configured limit")))?;
    let rest_n = rest.graph.n();
    let (best_index, best) = argmax_over(count, opts.jobs, |i| solver.run(&decode(i, n0, s_len), rest_n, None))
        .expect("at least one map of S");

    let value = best as usize;
    let answer = Rational::from(value) >= threshold;
    let witness = if answer {
        let phi = decode(best_index, n0, s_len);
        let mut records = Vec::with_capacity(prepared.steps.len());
        let again = solver.run(&phi, rest_n, Some(&mut records));
        debug_assert_eq!(again, best);
        let mut map = vec![usize::MAX; g.n()];
        for (i, &v) in prepared.s.iter().enumerate() {
            map[v] = phi[i];
        }
        let mut local = vec![usize::MAX; rest_n];
        for (step, rec) in prepared.steps.iter().zip(&records).rev() {
            let images = match (rec, step.cut) {
                (StepRecord::Component(images), _) => images,
                (StepRecord::Cut(per), Some(c)) => &per[local[c]],
                (StepRecord::Cut(_), None) => unreachable!("cut record without a cut vertex"),
            };
            for &(v, img) in images {
                local[v] = img;
            }
        }
        for (v, &img) in local.iter().enumerate() {
            map[rest.original[v]] = img;
        }
        let witness = hom_witness(g, target, map);
        if witness.size() != value {
            return Err(Error::Internal(format!(
                "witness realizes {} edges, table optimum is {value}",
                witness.size()
            )));
        }
        Some(witness)
    } else {
        None
    };
    Ok(StructuredOutcome { answer, value: Some(value), threshold, witness, spencer_shortcut: false })
}

fn hom_witness(g: &Graph, target: &Graph, map: Vec<usize>) -> Witness {
    let edges = (0..g.m())
        .filter(|&i| {
            let e = g.edges()[i];
            target.has_edge(map[e.u], map[e.v])
        })
        .collect();
    Witness { edges, certificate: Certificate::Hom(map) }
}

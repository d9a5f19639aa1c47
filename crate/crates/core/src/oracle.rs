//! Brute-force ground truth for small instances, a small-graph corpus, and a
//! randomized falsifier for strong λ-extendibility.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{blocks, Digraph, Graph, GraphKind};
use crate::property::{edge_maps, is_member, pt_bound, Certificate, PropertySpec, PropertyVariant};
use crate::rational::Rational;

/// Default cap on the number of maps `exact_max_hom` evaluates.
pub const DEFAULT_HOM_BUDGET: u128 = 100_000_000;

/// Largest graph `exact_max_acyclic` accepts.
pub const MAX_ACYCLIC_ORACLE_N: usize = 24;

/// Maximum number of edges of `g` that some map `V(g) -> V(g0)` sends onto
/// edges of `g0` (labels and orientations respected), with such a map.
pub fn exact_max_hom(g: &Graph, g0: &Graph) -> Result<(usize, Vec<usize>)> {
    exact_max_hom_with_budget(g, g0, DEFAULT_HOM_BUDGET)
}

pub fn exact_max_hom_with_budget(g: &Graph, g0: &Graph, budget: u128) -> Result<(usize, Vec<usize>)> {
    let n = g.n();
    let n0 = g0.n();
    let total = (n0 as u128)
        .checked_pow(n as u32)
        .filter(|&t| t <= budget)
        .ok_or_else(|| Error::BudgetExceeded(format!("{n0}^{n} maps exceed the budget of {budget}")))?;
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    if n0 == 0 {
        return Err(Error::InvalidParameter("target graph has no vertices".into()));
    }
    let oriented = g.kind().oriented;
    // maps_to[e][a * n0 + b]: edge e survives when its ends go to a and b
    let maps_to: Vec<Vec<bool>> = g
        .edges()
        .iter()
        .map(|e| (0..n0 * n0).map(|ab| edge_maps(g0, e.label, oriented, ab / n0, ab % n0)).collect())
        .collect();
    let mut map = vec![0usize; n];
    let mut best = (0usize, map.clone());
    let mut first = true;
    for _ in 0..total {
        let value = g.edges().iter().zip(&maps_to).filter(|(e, ok)| ok[map[e.u] * n0 + map[e.v]]).count();
        if first || value > best.0 {
            best = (value, map.clone());
            first = false;
        }
        for digit in map.iter_mut() {
            *digit += 1;
            if *digit < n0 {
                break;
            }
            *digit = 0;
        }
    }
    Ok(best)
}

/// Max-Cut by enumerating the `2^{n-1}` bipartitions with vertex 0 fixed
/// on one side. Plain graphs only.
pub fn exact_max_cut_partitions(g: &Graph) -> Result<usize> {
    if g.kind() != GraphKind::PLAIN {
        return Err(Error::KindMismatch("max-cut enumeration needs a plain graph".into()));
    }
    let n = g.n();
    if n > 30 {
        return Err(Error::BudgetExceeded(format!("2^{} bipartitions", n.saturating_sub(1))));
    }
    if n <= 1 {
        return Ok(0);
    }
    let mut best = 0;
    for side in 0u64..(1 << (n - 1)) {
        let side = side << 1;
        let cut = g.edges().iter().filter(|e| ((side >> e.u) ^ (side >> e.v)) & 1 == 1).count();
        best = best.max(cut);
    }
    Ok(best)
}

/// Subset DP over `in_mask[v]` (the vertices with an arc into `v`); returns
/// the best value and an order attaining it.
fn max_acyclic_by_masks(in_mask: &[u32]) -> (usize, Vec<usize>) {
    let n = in_mask.len();
    let full = (1usize << n) - 1;
    let mut f = vec![0u16; full + 1];
    for t in 1..=full {
        let mut best = 0u16;
        let mut bits = t;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let prev = t & !(1 << v);
            let val = f[prev] + (in_mask[v] & prev as u32).count_ones() as u16;
            best = best.max(val);
        }
        f[t] = best;
    }
    let mut order = Vec::with_capacity(n);
    let mut t = full;
    while t != 0 {
        let v = (0..n)
            .filter(|&v| t & (1 << v) != 0)
            .find(|&v| {
                let prev = t & !(1 << v);
                f[prev] + (in_mask[v] & prev as u32).count_ones() as u16 == f[t]
            })
            .expect("optimum has a last vertex");
        order.push(v);
        t &= !(1 << v);
    }
    order.reverse();
    (f[full] as usize, order)
}

fn check_acyclic_size(n: usize) -> Result<()> {
    if n > MAX_ACYCLIC_ORACLE_N {
        return Err(Error::BudgetExceeded(format!(
            "acyclic subset DP is capped at {MAX_ACYCLIC_ORACLE_N} vertices, got {n}"
        )));
    }
    Ok(())
}

/// Maximum number of arcs of an oriented graph that point forward in some
/// linear order, with the order.
pub fn exact_max_acyclic(g: &Graph) -> Result<(usize, Vec<usize>)> {
    if !g.kind().oriented {
        return Err(Error::KindMismatch("acyclic oracle needs an oriented graph".into()));
    }
    check_acyclic_size(g.n())?;
    let mut in_mask = vec![0u32; g.n()];
    for e in g.edges() {
        in_mask[e.v] |= 1 << e.u;
    }
    Ok(max_acyclic_by_masks(&in_mask))
}

/// As [`exact_max_acyclic`], for digraphs that may contain opposite pairs.
pub fn exact_max_acyclic_digraph(d: &Digraph) -> Result<(usize, Vec<usize>)> {
    check_acyclic_size(d.n())?;
    let mut in_mask = vec![0u32; d.n()];
    for &(u, v) in d.arcs() {
        in_mask[v] |= 1 << u;
    }
    Ok(max_acyclic_by_masks(&in_mask))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleDecision {
    pub answer: bool,
    pub value: usize,
    pub threshold: Rational,
    pub certificate: Certificate,
}

/// Exact optimum for the property.
pub fn exact_value(g: &Graph, spec: &PropertySpec) -> Result<(usize, Certificate)> {
    spec.check_instance(g)?;
    Ok(match spec.variant() {
        PropertyVariant::Hom(target) => {
            let (v, map) = exact_max_hom(g, target)?;
            (v, Certificate::Hom(map))
        }
        PropertyVariant::Acyclic => {
            let (v, order) = exact_max_acyclic(g)?;
            (v, Certificate::Order(order))
        }
    })
}

/// `exact optimum >= pt(G) + k`, compared exactly.
pub fn exact_apt_decide(g: &Graph, k: i64, spec: &PropertySpec) -> Result<OracleDecision> {
    let (value, certificate) = exact_value(g, spec)?;
    let threshold = pt_bound(g, spec.lambda())? + Rational::from_integer(k);
    Ok(OracleDecision { answer: Rational::from(value) >= threshold, value, threshold, certificate })
}

/// `max acyclic subdigraph >= m/2 + k`.
pub fn exact_mas_decide(d: &Digraph, k: i64) -> Result<OracleDecision> {
    let (value, order) = exact_max_acyclic_digraph(d)?;
    let threshold = Rational::new(d.arcs().len() as i64, 2) + Rational::from_integer(k);
    Ok(OracleDecision {
        answer: Rational::from(value) >= threshold,
        value,
        threshold,
        certificate: Certificate::Order(order),
    })
}

/// Unordered vertex pairs `(a, b)`, `a < b`, in the fixed enumeration order.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn mask_connected(n: usize, adj: &[u32]) -> bool {
    if n == 0 {
        return true;
    }
    let full = (1u32 << n) - 1;
    let mut seen = 1u32;
    let mut frontier = 1u32;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == full
}

/// All connected simple graphs on the labeled vertex set `0..n`, one per
/// edge bitmask, in increasing bitmask order.
pub fn enumerate_connected_graphs(n: usize) -> Result<impl Iterator<Item = Graph>> {
    if n > 7 {
        return Err(Error::BudgetExceeded(format!("graph enumeration is capped at 7 vertices, got {n}")));
    }
    let ps = pairs(n);
    Ok((0u64..1 << ps.len()).filter_map(move |code| {
        let mut adj = vec![0u32; n];
        let mut edges = Vec::new();
        for (i, &(a, b)) in ps.iter().enumerate() {
            if code >> i & 1 == 1 {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
                edges.push((a, b));
            }
        }
        mask_connected(n, &adj).then(|| Graph::plain(n, &edges).expect("valid pairs"))
    }))
}

/// The oriented graph with base-3 code `code` over [`pairs`]: digit 1 is
/// `a -> b`, digit 2 is `b -> a`.
fn oriented_from_code(n: usize, ps: &[(usize, usize)], mut code: u64) -> Graph {
    let mut arcs = Vec::new();
    for &(a, b) in ps {
        match code % 3 {
            1 => arcs.push((a, b)),
            2 => arcs.push((b, a)),
            _ => {}
        }
        code /= 3;
    }
    Graph::oriented(n, &arcs).expect("valid pairs")
}

fn plain_from_code(n: usize, ps: &[(usize, usize)], code: u64) -> Graph {
    let edges: Vec<_> = ps.iter().enumerate().filter(|&(i, _)| code >> i & 1 == 1).map(|(_, &p)| p).collect();
    Graph::plain(n, &edges).expect("valid pairs")
}

/// All oriented graphs on `0..n` (`3^{n(n-1)/2}` of them), optionally only
/// the weakly connected ones.
pub fn enumerate_oriented_graphs(n: usize, connected_only: bool) -> Result<impl Iterator<Item = Graph>> {
    if n > 6 {
        return Err(Error::BudgetExceeded(format!("oriented enumeration is capped at 6 vertices, got {n}")));
    }
    let ps = pairs(n);
    let total = 3u64.pow(ps.len() as u32);
    Ok((0..total)
        .map(move |code| oriented_from_code(n, &ps, code))
        .filter(move |g| !connected_only || g.is_connected()))
}

/// A graph property that can be tested for membership.
pub trait GraphProperty: Sync {
    fn name(&self) -> String;
    /// Kind of graph the property is defined on.
    fn kind(&self) -> GraphKind;
    fn contains(&self, g: &Graph) -> Result<bool>;
}

impl GraphProperty for PropertySpec {
    fn name(&self) -> String {
        match self.variant() {
            PropertyVariant::Acyclic => "acyclic".into(),
            PropertyVariant::Hom(t) if t.kind() == GraphKind::PLAIN && t.m() == t.n() * (t.n() - 1) / 2 => {
                if t.n() == 2 {
                    "cut".into()
                } else {
                    format!("color:{}", t.n())
                }
            }
            PropertyVariant::Hom(t) => format!("hom(n0={}, m0={})", t.n(), t.m()),
        }
    }

    fn kind(&self) -> GraphKind {
        PropertySpec::kind(self)
    }

    fn contains(&self, g: &Graph) -> Result<bool> {
        Ok(is_member(g, self)?.is_some())
    }
}

/// A user-supplied membership predicate.
pub struct CustomProperty<F> {
    pub name: String,
    pub kind: GraphKind,
    pub predicate: F,
}

impl<F: Fn(&Graph) -> bool + Sync> GraphProperty for CustomProperty<F> {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn kind(&self) -> GraphKind {
        self.kind
    }

    fn contains(&self, g: &Graph) -> Result<bool> {
        Ok((self.predicate)(g))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendibilityConfig {
    pub lambda: Rational,
    /// Graphs on `1..=n_max` vertices are tested; at most 6.
    pub n_max: usize,
    /// Random weight functions per cut, on top of unit weights.
    pub trials: usize,
    pub seed: u64,
    /// Refuse to run if more graphs than this would be enumerated.
    pub max_graphs: u64,
}

impl ExtendibilityConfig {
    pub fn new(lambda: Rational, n_max: usize, trials: usize, seed: u64) -> Self {
        ExtendibilityConfig { lambda, n_max, trials, seed, max_graphs: 2_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtendibilityCheck {
    Inclusiveness,
    BlockAdditivity,
    SubgraphExtension,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub check: ExtendibilityCheck,
    pub n: usize,
    /// Edges (arcs when oriented) of `G`.
    pub edges: Vec<(usize, usize)>,
    /// The vertex set `S`; empty for the structural checks.
    pub s: Vec<usize>,
    /// Boundary edges `δ(S)` and their weights, in the same order.
    pub boundary: Vec<(usize, usize)>,
    pub weights: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtendibilityReport {
    pub property: String,
    pub lambda: Rational,
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub graphs_tested: u64,
    pub cuts_tested: u64,
    pub weight_functions_tested: u64,
    pub counterexample: Option<Counterexample>,
    /// A missing counterexample is evidence, not a proof.
    pub falsification_only: bool,
}

#[derive(Default)]
struct GraphTally {
    cuts: u64,
    weights: u64,
    counterexample: Option<Counterexample>,
}

fn edge_list(g: &Graph) -> Vec<(usize, usize)> {
    g.edges().iter().map(|e| (e.u, e.v)).collect()
}

fn rebuild(n: usize, kind: GraphKind, edges: impl Iterator<Item = (usize, usize)>) -> Graph {
    let edges: Vec<_> = edges.collect();
    Graph::from_edges(n, kind, &edges).expect("subset of a valid edge list")
}

/// Integer weights `num_i · (Π den) / den_i`, proportional to the rationals.
fn scaled_weights(weights: &[(i64, i64)]) -> Vec<i128> {
    let d: i128 = weights.iter().map(|&(_, den)| den as i128).product();
    weights.iter().map(|&(num, den)| num as i128 * (d / den as i128)).collect()
}

fn satisfied(good: &[u32], weights: &[i128], lambda: &Rational) -> bool {
    let ln: i128 = lambda.numer().try_into().expect("small lambda");
    let ld: i128 = lambda.denom().try_into().expect("small lambda");
    let total: i128 = weights.iter().sum();
    good.iter().any(|&f| {
        let cf: i128 = weights.iter().enumerate().filter(|&(i, _)| f >> i & 1 == 1).map(|(_, w)| w).sum();
        cf * ld >= total * ln
    })
}

fn check_graph<P: GraphProperty + ?Sized>(
    prop: &P,
    g: &Graph,
    cfg: &ExtendibilityConfig,
    stream: u64,
) -> Result<GraphTally> {
    let n = g.n();
    let kind = prop.kind();
    let mut tally = GraphTally::default();

    let dec = blocks(g);
    let mut all_blocks = true;
    for b in &dec.blocks {
        if !prop.contains(&g.induced(b)?.graph)? {
            all_blocks = false;
            break;
        }
    }
    if prop.contains(g)? != all_blocks {
        tally.counterexample = Some(Counterexample {
            check: ExtendibilityCheck::BlockAdditivity,
            n,
            edges: edge_list(g),
            s: Vec::new(),
            boundary: Vec::new(),
            weights: Vec::new(),
        });
        return Ok(tally);
    }

    let lambda = &cfg.lambda;
    // S and its complement give the same cut, so S never contains vertex 0
    for smask in 1u32..(1 << n) {
        if smask & 1 == 1 {
            continue;
        }
        let in_s = |v: usize| smask >> v & 1 == 1;
        let s: Vec<usize> = (0..n).filter(|&v| in_s(v)).collect();
        let boundary: Vec<usize> = (0..g.m()).filter(|&i| in_s(g.edges()[i].u) != in_s(g.edges()[i].v)).collect();
        if boundary.is_empty() {
            continue;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| !in_s(v)).collect();
        if !prop.contains(&g.induced(&s)?.graph)? || !prop.contains(&g.induced(&rest)?.graph)? {
            continue;
        }
        tally.cuts += 1;
        let b = boundary.len();
        let mut dropped = vec![false; g.m()];
        let mut good = Vec::new();
        for f in 0u32..(1 << b) {
            for (i, &e) in boundary.iter().enumerate() {
                dropped[e] = f >> i & 1 == 0;
            }
            let sub = rebuild(n, kind, (0..g.m()).filter(|&i| !dropped[i]).map(|i| (g.edges()[i].u, g.edges()[i].v)));
            if prop.contains(&sub)? {
                good.push(f);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream.wrapping_mul(1 << 20) ^ smask as u64);
        let everything_good = good.last() == Some(&((1u32 << b) - 1));
        for trial in 0..=cfg.trials {
            let raw: Vec<(i64, i64)> = if trial == 0 {
                vec![(1, 1); b]
            } else {
                (0..b).map(|_| (rng.gen_range(1..=100), rng.gen_range(1..=100))).collect()
            };
            tally.weights += 1;
            if everything_good || satisfied(&good, &scaled_weights(&raw), lambda) {
                continue;
            }
            tally.counterexample = Some(Counterexample {
                check: ExtendibilityCheck::SubgraphExtension,
                n,
                edges: edge_list(g),
                s,
                boundary: boundary.iter().map(|&i| (g.edges()[i].u, g.edges()[i].v)).collect(),
                weights: raw.iter().map(|&(p, q)| Rational::new(p, q)).collect(),
            });
            return Ok(tally);
        }
    }
    Ok(tally)
}

/// Searches for a violation of strong λ-extendibility (inclusiveness, block
/// additivity, strong λ-subgraph extension) over every graph of the
/// property's kind with at most `n_max` vertices. For each cut `(S, V \ S)`
/// with both sides in the property, unit weights and `trials` random
/// rational weight functions are tried against every `F ⊆ δ(S)`.
pub fn check_strong_extendibility<P: GraphProperty + ?Sized>(
    prop: &P,
    cfg: &ExtendibilityConfig,
) -> Result<ExtendibilityReport> {
    if cfg.n_max > 6 {
        return Err(Error::InvalidParameter(format!("n_max is at most 6, got {}", cfg.n_max)));
    }
    if !cfg.lambda.is_positive() || cfg.lambda > Rational::one() {
        return Err(Error::InvalidParameter(format!("lambda must lie in (0, 1], got {}", cfg.lambda)));
    }
    let kind = prop.kind();
    if kind.labeled {
        return Err(Error::InvalidParameter("labeled properties are not enumerated".into()));
    }
    let per_pair: u64 = if kind.oriented { 3 } else { 2 };
    let planned: u64 = (1..=cfg.n_max).map(|n| per_pair.saturating_pow((n * (n - 1) / 2) as u32)).sum();
    if planned > cfg.max_graphs {
        return Err(Error::BudgetExceeded(format!("{planned} graphs exceed the limit of {}", cfg.max_graphs)));
    }

    let mut report = ExtendibilityReport {
        property: prop.name(),
        lambda: cfg.lambda.clone(),
        n_max: cfg.n_max,
        trials: cfg.trials,
        seed: cfg.seed,
        graphs_tested: 0,
        cuts_tested: 0,
        weight_functions_tested: 0,
        counterexample: None,
        falsification_only: true,
    };

    let mut small = vec![Graph::empty(1, kind)];
    if cfg.n_max >= 2 {
        small.push(Graph::from_edges(2, kind, &[(0, 1)])?);
    }
    for g in small {
        report.graphs_tested += 1;
        if !prop.contains(&g)? {
            report.counterexample = Some(Counterexample {
                check: ExtendibilityCheck::Inclusiveness,
                n: g.n(),
                edges: edge_list(&g),
                s: Vec::new(),
                boundary: Vec::new(),
                weights: Vec::new(),
            });
            return Ok(report);
        }
    }

    for n in 2..=cfg.n_max {
        let ps = pairs(n);
        let total = per_pair.pow(ps.len() as u32);
        let tallies: Vec<Result<GraphTally>> = (0..total)
            .into_par_iter()
            .map(|code| {
                let g = if kind.oriented { oriented_from_code(n, &ps, code) } else { plain_from_code(n, &ps, code) };
                check_graph(prop, &g, cfg, (n as u64) << 40 | code)
            })
            .collect();
        for t in tallies {
            let t = t?;
            report.graphs_tested += 1;
            report.cuts_tested += t.cuts;
            report.weight_functions_tested += t.weights;
            if t.counterexample.is_some() {
                report.counterexample = t.counterexample;
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Re-checks a reported extension counterexample by enumerating every
/// `F ⊆ δ(S)` with exact rational weights. True iff it is genuine.
pub fn verify_counterexample<P: GraphProperty + ?Sized>(
    prop: &P,
    lambda: &Rational,
    cx: &Counterexample,
) -> Result<bool> {
    let kind = prop.kind();
    let g = Graph::from_edges(cx.n, kind, &cx.edges)?;
    match cx.check {
        ExtendibilityCheck::Inclusiveness => Ok(!prop.contains(&g)?),
        ExtendibilityCheck::BlockAdditivity => {
            let mut all = true;
            for b in &blocks(&g).blocks {
                all &= prop.contains(&g.induced(b)?.graph)?;
            }
            Ok(prop.contains(&g)? != all)
        }
        ExtendibilityCheck::SubgraphExtension => {
            let rest: Vec<usize> = (0..cx.n).filter(|v| !cx.s.contains(v)).collect();
            if !prop.contains(&g.induced(&cx.s)?.graph)? || !prop.contains(&g.induced(&rest)?.graph)? {
                return Ok(false);
            }
            let total = cx.weights.iter().fold(Rational::zero(), |acc, w| acc + w);
            let need = lambda * &total;
            for f in 0u32..(1 << cx.boundary.len()) {
                let kept = cx
                    .weights
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| f >> i & 1 == 1)
                    .fold(Rational::zero(), |acc, (_, w)| acc + w);
                if kept < need {
                    continue;
                }
                let edges = cx
                    .edges
                    .iter()
                    .copied()
                    .filter(|e| cx.boundary.iter().position(|b| b == e).is_none_or(|i| f >> i & 1 == 1));
                if prop.contains(&rebuild(cx.n, kind, edges))? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

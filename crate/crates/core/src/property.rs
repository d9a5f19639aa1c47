//! The properties `Π` the solver understands and the guaranteed bound
//! `λ·m + (1-λ)/2·(n-1)` for connected graphs.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{blocks, Graph, GraphKind};
use crate::rational::Rational;

/// Largest target graph accepted by [`is_vertex_transitive`].
pub const TRANSITIVITY_CAP: usize = 10;

/// Default vertex cap for backtracking homomorphism membership.
pub const HOM_MEMBERSHIP_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyVariant {
    /// "has a homomorphism into the target".
    Hom(Graph),
    /// "is an acyclic oriented graph".
    Acyclic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertySpec {
    variant: PropertyVariant,
    lambda: Rational,
    kind: GraphKind,
}

impl PropertySpec {
    /// Homomorphism into a vertex-transitive target.
    pub fn hom(target: Graph) -> Result<Self> {
        if !is_vertex_transitive(&target)? {
            return Err(Error::InvalidParameter("target graph is not vertex-transitive".into()));
        }
        let lambda = hom_lambda(&target)?;
        Ok(PropertySpec { kind: target.kind(), variant: PropertyVariant::Hom(target), lambda })
    }

    /// Max-Cut: homomorphism into `K_2`.
    pub fn cut() -> Self {
        Self::coloring(2).expect("K2 target")
    }

    /// q-colorability: homomorphism into `K_q`. Complete graphs are
    /// vertex-transitive, so the automorphism search is skipped.
    pub fn coloring(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameter(format!("need q >= 2 colours, got {q}")));
        }
        let target = Graph::complete(q);
        let lambda = hom_lambda(&target)?;
        Ok(PropertySpec { kind: GraphKind::PLAIN, variant: PropertyVariant::Hom(target), lambda })
    }

    pub fn acyclic() -> Self {
        PropertySpec { variant: PropertyVariant::Acyclic, lambda: Rational::new(1, 2), kind: GraphKind::ORIENTED }
    }

    pub fn variant(&self) -> &PropertyVariant {
        &self.variant
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn target(&self) -> Option<&Graph> {
        match &self.variant {
            PropertyVariant::Hom(t) => Some(t),
            PropertyVariant::Acyclic => None,
        }
    }

    /// Checks that `g` is of the kind this property is defined on, and that
    /// its labels come from the target's label alphabet.
    pub fn check_instance(&self, g: &Graph) -> Result<()> {
        if g.kind() != self.kind {
            return Err(Error::KindMismatch(format!("property expects a {} graph, input is {}", self.kind, g.kind())));
        }
        if let PropertyVariant::Hom(t) = &self.variant {
            if self.kind.labeled {
                let alphabet = t.labels();
                if let Some(l) = g.labels().into_iter().find(|l| alphabet.binary_search(l).is_err()) {
                    return Err(Error::KindMismatch(format!("label {l} does not occur in the target graph")));
                }
            }
        }
        Ok(())
    }
}

/// `λ·m + λ'·(n-1)` with `λ' = (1-λ)/2`. The empty graph has bound 0.
pub fn pt_bound(g: &Graph, lambda: &Rational) -> Result<Rational> {
    if g.n() == 0 {
        return Ok(Rational::zero());
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(pt_value(g.n(), g.m(), lambda))
}

/// The bound from raw counts, no connectivity check.
pub fn pt_value(n: usize, m: usize, lambda: &Rational) -> Rational {
    if n == 0 {
        return Rational::zero();
    }
    lambda * &Rational::from(m) + lambda.half_complement() * Rational::from(n - 1)
}

/// Edge classes a target distinguishes: one per (label, direction) pair
/// allowed by its kind.
fn edge_classes(g0: &Graph) -> Vec<(Option<u32>, Option<bool>)> {
    let labels: Vec<Option<u32>> =
        if g0.kind().labeled { g0.labels().into_iter().map(Some).collect() } else { vec![None] };
    let dirs: Vec<Option<bool>> = if g0.kind().oriented { vec![Some(true), Some(false)] } else { vec![None] };
    labels.iter().flat_map(|&l| dirs.iter().map(move |&d| (l, d))).collect()
}

/// `d / n0`, where `d` is the minimum over vertices and edge classes of the
/// number of incident edges in that class.
pub fn hom_lambda(g0: &Graph) -> Result<Rational> {
    if g0.m() == 0 {
        return Err(Error::InvalidParameter("target graph has no edges".into()));
    }
    let classes = edge_classes(g0);
    let mut d = usize::MAX;
    for v in 0..g0.n() {
        for &(label, outgoing) in &classes {
            let count = g0
                .neighbors(v)
                .iter()
                .filter(|&&w| {
                    let e = g0.edge_between(v, w).expect("neighbour edge");
                    e.label == label && outgoing.is_none_or(|out| (e.u == v) == out)
                })
                .count();
            d = d.min(count);
        }
    }
    if d == 0 {
        return Err(Error::InvalidParameter(
            "some vertex of the target misses an edge class; lambda would be 0".into(),
        ));
    }
    Ok(Rational::new(d as i64, g0.n() as i64))
}

/// Can the edge `e` of `g` be mapped onto a same-kind edge of `g0`?
#[inline]
pub(crate) fn edge_maps(g0: &Graph, label: Option<u32>, oriented: bool, a: usize, b: usize) -> bool {
    match g0.edge_between(a, b) {
        None => false,
        Some(t) => t.label == label && (!oriented || (t.u == a && t.v == b)),
    }
}

/// Backtracking search for a bijection `φ` with `φ(from) = to` preserving
/// edges, non-edges, labels and orientations.
fn automorphism_mapping(g: &Graph, from: usize, to: usize) -> bool {
    let n = g.n();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    image[from] = to;
    used[to] = true;
    if g.degree(from) != g.degree(to) {
        return false;
    }
    // BFS order from `from` so that most vertices get constrained early
    let mut order = vec![from];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut q = VecDeque::from([from]);
    while let Some(v) = q.pop_front() {
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
                q.push_back(w);
            }
        }
    }
    order.extend((0..n).filter(|&v| !seen[v]));

    fn consistent(g: &Graph, image: &[usize], order: &[usize], idx: usize) -> bool {
        let v = order[idx];
        let iv = image[v];
        order[..idx].iter().all(|&u| {
            let iu = image[u];
            match (g.edge_between(u, v), g.edge_between(iu, iv)) {
                (None, None) => true,
                (Some(e), Some(f)) => e.label == f.label && (!g.kind().oriented || (e.u == u) == (f.u == iu)),
                _ => false,
            }
        })
    }

    fn extend(g: &Graph, image: &mut [usize], used: &mut [bool], order: &[usize], idx: usize) -> bool {
        if idx == order.len() {
            return true;
        }
        let v = order[idx];
        for cand in 0..g.n() {
            if used[cand] || g.degree(cand) != g.degree(v) {
                continue;
            }
            image[v] = cand;
            if consistent(g, image, order, idx) {
                used[cand] = true;
                if extend(g, image, used, order, idx + 1) {
                    return true;
                }
                used[cand] = false;
            }
        }
        image[v] = usize::MAX;
        false
    }

    extend(g, &mut image, &mut used, &order, 1)
}

/// Automorphisms must map vertex 0 to every vertex; that already covers all
/// ordered pairs since automorphisms form a group.
pub fn is_vertex_transitive(g0: &Graph) -> Result<bool> {
    if g0.n() > TRANSITIVITY_CAP {
        return Err(Error::BudgetExceeded(format!(
            "vertex-transitivity check is capped at {TRANSITIVITY_CAP} vertices, got {}",
            g0.n()
        )));
    }
    Ok((0..g0.n()).all(|v| automorphism_mapping(g0, 0, v)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// `map[v]` is the target vertex of `v`.
    Hom(Vec<usize>),
    /// Vertices listed in increasing order.
    Order(Vec<usize>),
}

/// A spanning subgraph `(V, F)` together with the certificate realizing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Edge indices of `F`.
    pub edges: Vec<usize>,
    pub certificate: Certificate,
}

impl Witness {
    /// Builds the witness whose edge set is everything the certificate realizes.
    pub fn from_certificate(g: &Graph, spec: &PropertySpec, certificate: Certificate) -> Witness {
        let edges = realized_edges(g, spec, &certificate);
        Witness { edges, certificate }
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

/// Edges of `g` kept by a homomorphism map or a linear order.
pub fn realized_edges(g: &Graph, spec: &PropertySpec, cert: &Certificate) -> Vec<usize> {
    match cert {
        Certificate::Hom(map) => {
            let target = spec.target().expect("hom certificate needs a hom property");
            let oriented = g.kind().oriented;
            (0..g.m())
                .filter(|&i| {
                    let e = g.edges()[i];
                    edge_maps(target, e.label, oriented, map[e.u], map[e.v])
                })
                .collect()
        }
        Certificate::Order(order) => {
            let mut pos = vec![0; g.n()];
            for (i, &v) in order.iter().enumerate() {
                pos[v] = i;
            }
            (0..g.m()).filter(|&i| pos[g.edges()[i].u] < pos[g.edges()[i].v]).collect()
        }
    }
}

fn is_forest(g: &Graph) -> bool {
    g.m() + g.components().len() == g.n()
}

/// Topological order of an oriented graph, or `None` on a directed cycle.
pub fn topological_order(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut indeg = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for e in g.edges() {
        indeg[e.v] += 1;
        out[e.u].push(e.v);
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.insert(w);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Greedy BFS map of a forest into a vertex-transitive target: every vertex
/// of the target has an edge of every class, so each tree edge can follow
/// its parent's image.
fn forest_homomorphism(g: &Graph, target: &Graph) -> Option<Vec<usize>> {
    let oriented = g.kind().oriented;
    let mut map = vec![usize::MAX; g.n()];
    for comp in g.components() {
        map[comp[0]] = 0;
        let mut q = VecDeque::from([comp[0]]);
        while let Some(v) = q.pop_front() {
            for &w in g.neighbors(v) {
                if map[w] != usize::MAX {
                    continue;
                }
                let e = g.edge_between(v, w).expect("neighbour edge");
                let img = (0..target.n()).find(|&c| {
                    if e.u == v {
                        edge_maps(target, e.label, oriented, map[v], c)
                    } else {
                        edge_maps(target, e.label, oriented, c, map[v])
                    }
                })?;
                map[w] = img;
                q.push_back(w);
            }
        }
    }
    Some(map)
}

fn search_homomorphism(g: &Graph, target: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let oriented = g.kind().oriented;
    // most-constrained-first: BFS order within components, high degree roots
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut roots: Vec<usize> = (0..n).collect();
    roots.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    for r in roots {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut q = VecDeque::from([r]);
        while let Some(v) = q.pop_front() {
            order.push(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];

    fn ok(g: &Graph, target: &Graph, oriented: bool, map: &[usize], v: usize) -> bool {
        g.neighbors(v).iter().all(|&w| {
            if map[w] == usize::MAX {
                return true;
            }
            let e = g.edge_between(v, w).expect("neighbour edge");
            edge_maps(target, e.label, oriented, map[e.u], map[e.v])
        })
    }

    fn go(g: &Graph, t: &Graph, oriented: bool, order: &[usize], map: &mut [usize], i: usize) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for c in 0..t.n() {
            map[v] = c;
            if ok(g, t, oriented, map, v) && go(g, t, oriented, order, map, i + 1) {
                return true;
            }
        }
        map[v] = usize::MAX;
        false
    }

    go(g, target, oriented, &order, &mut map, 0).then_some(map)
}

/// Membership of `g` in the property. Returns the certificate when `g` is a
/// member. Homomorphism membership is backtracking and refuses graphs above
/// `hom_cap` vertices unless `g` is a forest.
pub fn is_member_capped(g: &Graph, spec: &PropertySpec, hom_cap: usize) -> Result<Option<Certificate>> {
    spec.check_instance(g)?;
    match &spec.variant {
        PropertyVariant::Acyclic => Ok(topological_order(g).map(Certificate::Order)),
        PropertyVariant::Hom(target) => {
            if is_forest(g) {
                if let Some(map) = forest_homomorphism(g, target) {
                    return Ok(Some(Certificate::Hom(map)));
                }
            }
            if g.n() > hom_cap {
                return Err(Error::BudgetExceeded(format!(
                    "homomorphism membership is capped at {hom_cap} vertices, got {}",
                    g.n()
                )));
            }
            Ok(search_homomorphism(g, target).map(Certificate::Hom))
        }
    }
}

pub fn is_member(g: &Graph, spec: &PropertySpec) -> Result<Option<Certificate>> {
    is_member_capped(g, spec, HOM_MEMBERSHIP_CAP)
}

/// `Σ pt(G[B])` over the blocks `B` of a connected graph; equals `pt(G)`.
pub fn pt_over_blocks(g: &Graph, lambda: &Rational) -> Result<Rational> {
    let dec = blocks(g);
    let mut total = Rational::zero();
    for b in &dec.blocks {
        let sub = g.induced(b)?;
        total += &pt_bound(&sub.graph, lambda)?;
    }
    Ok(total)
}

//! Reduction rules turning `(G̃, S̃, k̃)` into either an early YES or a set `S`
//! with `G \ S` a forest of cliques.
//!
//! All rules only look at the graph on the remaining vertices
//! `R = V(G̃) \ S̃`, so the state keeps the input graph and two masks
//! (deleted, moved to `S`) over its vertex ids. Ids in the trace are
//! therefore always input ids.
//!
//! Rules are tried in the order 1, 2, 3, 4 and each search breaks ties
//! lexicographically by vertex id, so traces are reproducible.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::property::PropertySpec;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// Delete `x`, a component of `R \ {v}` with `x ∪ {v}` a clique.
    One { v: usize, x: Vec<usize> },
    /// Delete the clique components of `R \ {v}` and move `v` to `S`.
    Two { v: usize, deleted: Vec<Vec<usize>> },
    /// Move an induced path `a - b - c` to `S`.
    Three { a: usize, b: usize, c: usize },
    /// Delete `c`, move the non-adjacent `x, y` to `S`; `z` is the common
    /// outside neighbour.
    Four { x: usize, y: usize, c: Vec<usize>, z: usize },
}

impl Rule {
    pub fn id(&self) -> u8 {
        match self {
            Rule::One { .. } => 1,
            Rule::Two { .. } => 2,
            Rule::Three { .. } => 3,
            Rule::Four { .. } => 4,
        }
    }

    /// Number of `λ'` units the rule subtracts from `k̃`.
    pub fn lambda_prime_units(&self) -> usize {
        match self {
            Rule::One { .. } => 0,
            Rule::Two { deleted, .. } => deleted.len(),
            Rule::Three { .. } | Rule::Four { .. } => 1,
        }
    }

    /// Vertices the rule adds to `S`.
    pub fn added_to_s(&self) -> Vec<usize> {
        match self {
            Rule::One { .. } => vec![],
            Rule::Two { v, .. } => vec![*v],
            Rule::Three { a, b, c } => vec![*a, *b, *c],
            Rule::Four { x, y, .. } => vec![*x, *y],
        }
    }

    /// Vertices the rule deletes from the graph.
    pub fn deleted(&self) -> Vec<usize> {
        match self {
            Rule::One { x, .. } => x.clone(),
            Rule::Two { deleted, .. } => deleted.concat(),
            Rule::Three { .. } => vec![],
            Rule::Four { c, .. } => c.clone(),
        }
    }

    fn params(&self, offset: usize) -> String {
        let list = |xs: &[usize]| xs.iter().map(|x| (x + offset).to_string()).collect::<Vec<_>>().join(",");
        match self {
            Rule::One { v, x } => format!("v:{}|X:{}", v + offset, list(x)),
            Rule::Two { v, deleted } => {
                let mut s = format!("v:{}", v + offset);
                for x in deleted {
                    let _ = write!(s, "|X:{}", list(x));
                }
                s
            }
            Rule::Three { a, b, c } => format!("a:{}|b:{}|c:{}", a + offset, b + offset, c + offset),
            Rule::Four { x, y, c, z } => {
                format!("x:{}|y:{}|C:{}|z:{}", x + offset, y + offset, list(c), z + offset)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleApplication {
    #[serde(flatten)]
    pub rule: Rule,
    pub k_before: Rational,
    pub k_after: Rational,
}

impl RuleApplication {
    pub fn k_delta(&self) -> Rational {
        &self.k_before - &self.k_after
    }

    /// `rule=<id> params=<ids> k_before=<p/q> k_after=<p/q>`, with vertex ids
    /// shifted by `offset` (1 for file ids).
    pub fn trace_line(&self, offset: usize) -> String {
        format!(
            "rule={} params={} k_before={} k_after={}",
            self.rule.id(),
            self.rule.params(offset),
            self.k_before,
            self.k_after
        )
    }
}

type Components = Vec<Vec<usize>>;

/// The evolving tuple `(G̃, S̃, k̃)` plus the trace of applied rules.
#[derive(Debug, Clone)]
pub struct ReductionState<'g> {
    graph: &'g Graph,
    alive: Vec<bool>,
    in_s: Vec<bool>,
    k: Rational,
    lambda_prime: Rational,
    trace: Vec<RuleApplication>,
}

impl<'g> ReductionState<'g> {
    /// `G̃ = G`, `S̃ = ∅`, `k̃ = k`. Requires `0 < λ < 1`.
    pub fn new(graph: &'g Graph, k: Rational, lambda: &Rational) -> Result<Self> {
        if !lambda.is_positive() || *lambda >= Rational::one() {
            return Err(Error::InvalidParameter(format!("lambda must lie in (0, 1), got {lambda}")));
        }
        Ok(ReductionState {
            graph,
            alive: vec![true; graph.n()],
            in_s: vec![false; graph.n()],
            k,
            lambda_prime: lambda.half_complement(),
            trace: Vec::new(),
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }

    pub fn lambda_prime(&self) -> &Rational {
        &self.lambda_prime
    }

    pub fn trace(&self) -> &[RuleApplication] {
        &self.trace
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.alive[v]
    }

    /// `S̃`, sorted.
    pub fn s_set(&self) -> Vec<usize> {
        (0..self.graph.n()).filter(|&v| self.in_s[v]).collect()
    }

    /// Surviving vertices `V(G̃)`, sorted.
    pub fn alive_vertices(&self) -> Vec<usize> {
        (0..self.graph.n()).filter(|&v| self.alive[v]).collect()
    }

    /// `V(G̃) \ S̃`, sorted.
    pub fn remaining(&self) -> Vec<usize> {
        (0..self.graph.n()).filter(|&v| self.in_rest(v)).collect()
    }

    #[inline]
    fn in_rest(&self, v: usize) -> bool {
        self.alive[v] && !self.in_s[v]
    }

    fn rest_mask(&self) -> Vec<bool> {
        (0..self.graph.n()).map(|v| self.in_rest(v)).collect()
    }

    /// Components of `R \ removed`, ordered by smallest vertex.
    fn components_without(&self, removed: &[usize]) -> Vec<Vec<usize>> {
        let mut mask = self.rest_mask();
        for &v in removed {
            mask[v] = false;
        }
        self.graph.components_within(&mask)
    }

    fn is_clique_with(&self, xs: &[usize], extra: usize) -> bool {
        self.graph.is_clique(xs) && xs.iter().all(|&u| self.graph.has_edge(u, extra))
    }

    /// Neighbours of `v` inside `R`.
    fn rest_neighbors(&self, v: usize) -> Vec<usize> {
        self.graph.neighbors(v).iter().copied().filter(|&w| self.in_rest(w)).collect()
    }

    pub fn rest_is_connected(&self) -> bool {
        self.components_without(&[]).len() <= 1
    }

    /// Rule 1 search: smallest `v`, then smallest `X`.
    pub fn find_rule1(&self) -> Option<Rule> {
        self.remaining().into_iter().find_map(|v| self.rule1_at(v))
    }

    fn rule1_at(&self, v: usize) -> Option<Rule> {
        self.components_without(&[v]).into_iter().find(|x| self.is_clique_with(x, v)).map(|x| Rule::One { v, x })
    }

    /// Rule 2 search: the components of `R \ {v}` include at least one clique
    /// and at most one non-clique.
    pub fn find_rule2(&self) -> Option<Rule> {
        self.remaining().into_iter().find_map(|v| self.rule2_at(v))
    }

    fn rule2_at(&self, v: usize) -> Option<Rule> {
        let (cliques, others): (Vec<_>, Vec<_>) =
            self.components_without(&[v]).into_iter().partition(|x| self.graph.is_clique(x));
        (!cliques.is_empty() && others.len() <= 1).then_some(Rule::Two { v, deleted: cliques })
    }

    /// Rule 3 search: lexicographically first induced path `a - b - c`
    /// (with `a < c`) whose removal keeps `R` connected.
    pub fn find_rule3(&self) -> Option<Rule> {
        for a in self.remaining() {
            for b in self.rest_neighbors(a) {
                for c in self.rest_neighbors(b) {
                    if c > a && self.rule3_holds(a, b, c) {
                        return Some(Rule::Three { a, b, c });
                    }
                }
            }
        }
        None
    }

    fn rule3_holds(&self, a: usize, b: usize, c: usize) -> bool {
        [a, b, c].iter().all(|&v| self.in_rest(v))
            && a != c
            && self.graph.has_edge(a, b)
            && self.graph.has_edge(b, c)
            && !self.graph.has_edge(a, c)
            && self.components_without(&[a, b, c]).len() <= 1
    }

    /// Whether the plain rule-4 conditions hold for the pair `(x, y)`;
    /// returns the split of the components of `R \ {x, y}` into deletable
    /// and other.
    fn rule4_raw(&self, x: usize, y: usize) -> Option<(Components, Components)> {
        if x == y || !self.in_rest(x) || !self.in_rest(y) || self.graph.has_edge(x, y) {
            return None;
        }
        let (good, bad): (Vec<_>, Vec<_>) = self
            .components_without(&[x, y])
            .into_iter()
            .partition(|c| self.is_clique_with(c, x) && self.is_clique_with(c, y));
        (!good.is_empty() && bad.len() <= 1).then_some((good, bad))
    }

    /// Restricts a raw rule-4 match to the form with a single deleted
    /// component `C` and `N(x) \ C = N(y) \ C = {z}`, `z` a cut vertex of `R`.
    fn rule4_normal_form(&self, x: usize, y: usize) -> Option<Rule> {
        let (good, _) = self.rule4_raw(x, y)?;
        let [c] = <[Vec<usize>; 1]>::try_from(good).ok()?;
        let outside = |v: usize| -> Vec<usize> {
            self.rest_neighbors(v).into_iter().filter(|w| c.binary_search(w).is_err()).collect()
        };
        let (nx, ny) = (outside(x), outside(y));
        if nx.len() != 1 || nx != ny {
            return None;
        }
        let z = nx[0];
        (self.components_without(&[z]).len() >= 2).then_some(Rule::Four { x, y, c, z })
    }

    /// Rule 4 search over non-adjacent pairs `x < y` in the normal form.
    ///
    /// Errors if some pair satisfies the plain rule conditions but no pair
    /// has the normal form; with rules 1 to 3 inapplicable that cannot happen.
    pub fn find_rule4(&self) -> Result<Option<Rule>> {
        let rest = self.remaining();
        let mut raw_hit = None;
        for (i, &x) in rest.iter().enumerate() {
            for &y in &rest[i + 1..] {
                if let Some(rule) = self.rule4_normal_form(x, y) {
                    return Ok(Some(rule));
                }
                if raw_hit.is_none() && self.rule4_raw(x, y).is_some() {
                    raw_hit = Some((x, y));
                }
            }
        }
        match raw_hit {
            None => Ok(None),
            Some((x, y)) => Err(Error::Internal(format!(
                "rule 4 applies to ({x}, {y}) but no application has the single-neighbour form"
            ))),
        }
    }

    /// The next rule to apply, honouring the precedence 1, 2, 3, 4.
    pub fn next_application(&self) -> Result<Option<Rule>> {
        if let Some(r) = self.find_rule1() {
            return Ok(Some(r));
        }
        if let Some(r) = self.find_rule2() {
            return Ok(Some(r));
        }
        if let Some(r) = self.find_rule3() {
            return Ok(Some(r));
        }
        self.find_rule4()
    }

    /// Re-checks that `rule` still matches the current state.
    fn validate(&self, rule: &Rule) -> bool {
        match rule {
            Rule::One { v, x } => {
                self.in_rest(*v) && self.components_without(&[*v]).contains(x) && self.is_clique_with(x, *v)
            }
            Rule::Two { v, deleted } => {
                self.in_rest(*v) && matches!(self.rule2_at(*v), Some(Rule::Two { deleted: ref d, .. }) if d == deleted)
            }
            Rule::Three { a, b, c } => self.rule3_holds(*a, *b, *c),
            Rule::Four { x, y, c, z } => {
                matches!(self.rule4_normal_form(*x, *y), Some(Rule::Four { c: ref c2, z: z2, .. }) if c2 == c && z2 == *z)
            }
        }
    }

    pub fn apply(&mut self, rule: Rule) -> Result<&RuleApplication> {
        if !self.validate(&rule) {
            return Err(Error::StaleApplication(format!("{rule:?} does not match the current state")));
        }
        for v in rule.deleted() {
            self.alive[v] = false;
        }
        for v in rule.added_to_s() {
            self.in_s[v] = true;
        }
        let k_before = self.k.clone();
        let delta = &self.lambda_prime * &Rational::from(rule.lambda_prime_units());
        self.k -= &delta;
        self.trace.push(RuleApplication { rule, k_before, k_after: self.k.clone() });
        Ok(self.trace.last().expect("just pushed"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionOutcome {
    /// `k̃` dropped to zero or below: the instance is a YES instance.
    EarlyYes { trace: Vec<RuleApplication> },
    /// No rule applies any more; `G \ s` is a forest of cliques.
    Decomposition { s: Vec<usize>, k_star: Rational, trace: Vec<RuleApplication> },
}

impl ReductionOutcome {
    pub fn trace(&self) -> &[RuleApplication] {
        match self {
            ReductionOutcome::EarlyYes { trace } | ReductionOutcome::Decomposition { trace, .. } => trace,
        }
    }
}

/// Applies the rules exhaustively, stopping early once `k̃ <= 0`.
pub fn reduce(g: &Graph, k: i64, lambda: &Rational) -> Result<ReductionOutcome> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be at least 1, got {k}")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    reduce_from(ReductionState::new(g, Rational::from_integer(k), lambda)?)
}

/// Runs the rule loop from an arbitrary starting state.
pub fn reduce_from(mut state: ReductionState<'_>) -> Result<ReductionOutcome> {
    while state.k.is_positive() && state.remaining().len() >= 2 {
        let rule = state.next_application()?.ok_or_else(|| {
            Error::Internal(format!("no rule applies with {} vertices outside S", state.remaining().len()))
        })?;
        state.apply(rule)?;
    }
    Ok(if state.k.is_positive() {
        ReductionOutcome::Decomposition { s: state.s_set(), k_star: state.k, trace: state.trace }
    } else {
        ReductionOutcome::EarlyYes { trace: state.trace }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduced {
    Yes {
        trace: Vec<RuleApplication>,
    },
    /// Hand `(g, s, k)` to a structured solver; `k` is the original parameter.
    Structured {
        s: Vec<usize>,
        k: i64,
        k_star: Rational,
        trace: Vec<RuleApplication>,
    },
}

/// Either decides YES or returns the deletion set for the structured solver.
pub fn decide_or_decompose(g: &Graph, k: i64, spec: &PropertySpec) -> Result<Reduced> {
    spec.check_instance(g)?;
    Ok(match reduce(g, k, spec.lambda())? {
        ReductionOutcome::EarlyYes { trace } => Reduced::Yes { trace },
        ReductionOutcome::Decomposition { s, k_star, trace } => Reduced::Structured { s, k, k_star, trace },
    })
}

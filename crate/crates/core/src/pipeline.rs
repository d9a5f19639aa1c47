//! End-to-end deciders: the general reduce-then-solve pipeline and the Max
//! Acyclic Subdigraph above `m/2` route with its `4k` vertex kernel.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};
use crate::oracle::exact_max_acyclic;
use crate::property::{Certificate, PropertySpec, PropertyVariant, Witness};
use crate::rational::Rational;
use crate::reduction::{decide_or_decompose, Reduced, RuleApplication};
use crate::structured::{solve_acyclic_structured, solve_hom_structured, SolveOptions, StructuredOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn from_bool(yes: bool) -> Answer {
        if yes {
            Answer::Yes
        } else {
            Answer::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }

    /// 0 for YES, 1 for NO.
    pub fn exit_code(self) -> i32 {
        match self {
            Answer::Yes => 0,
            Answer::No => 1,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
        })
    }
}

/// Which stage settled the instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverUsed {
    /// The reduction drove `k̃` to zero or below.
    EarlyYes,
    StructuredHom,
    StructuredAcyclic,
    /// A tournament block of at least `spencer_threshold(k)` vertices.
    SpencerShortcut,
    /// MAS: the connected kernel has `n - 1 >= 4k`.
    KernelBound,
    /// MAS: subset DP on a kernel with `n <= 4k`.
    KernelExact,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Timings {
    pub reduce_us: u128,
    pub solve_us: u128,
}

fn micros(d: Duration) -> u128 {
    d.as_micros()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    /// Parameter left after reduction: `k★ > 0` on the structured path,
    /// `<= 0` on early YES. Absent when no reduction ran.
    pub k_star: Option<Rational>,
    pub s: Vec<usize>,
    pub trace: Vec<RuleApplication>,
    pub solver: SolverUsed,
    pub timings: Timings,
    /// Exact optimum, when a solver computed it.
    pub value: Option<usize>,
    /// The bound the optimum is compared against.
    pub threshold: Option<Rational>,
    /// MAS only: vertices of the connected kernel and opposite pairs removed.
    pub kernel_n: Option<usize>,
    pub opposite_pairs: Option<usize>,
}

impl Diagnostics {
    fn new(solver: SolverUsed) -> Self {
        Diagnostics {
            k_star: None,
            s: Vec::new(),
            trace: Vec::new(),
            solver,
            timings: Timings::default(),
            value: None,
            threshold: None,
            kernel_n: None,
            opposite_pairs: None,
        }
    }

    /// Number of applications of each rule, indexed `rule id - 1`.
    pub fn rule_counts(&self) -> [usize; 4] {
        let mut counts = [0; 4];
        for app in &self.trace {
            counts[app.rule.id() as usize - 1] += 1;
        }
        counts
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub answer: Answer,
    /// Present only when a solver built one; never on NO.
    pub witness: Option<Witness>,
    pub diagnostics: Diagnostics,
}

/// Decides APT(Π) for a connected graph: is there a spanning subgraph in the
/// property with at least `pt(G) + k` edges?
pub fn apt_decide(g: &Graph, k: i64, spec: &PropertySpec) -> Result<Decision> {
    apt_decide_with(g, k, spec, &SolveOptions::default())
}

pub fn apt_decide_with(g: &Graph, k: i64, spec: &PropertySpec, opts: &SolveOptions) -> Result<Decision> {
    check_solvable(spec)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let start = Instant::now();
    let reduced = decide_or_decompose(g, k, spec)?;
    let reduce_us = micros(start.elapsed());
    match reduced {
        Reduced::Yes { trace } => {
            let mut diagnostics = Diagnostics::new(SolverUsed::EarlyYes);
            diagnostics.k_star = trace.last().map(|a| a.k_after.clone());
            diagnostics.trace = trace;
            diagnostics.timings.reduce_us = reduce_us;
            Ok(Decision { answer: Answer::Yes, witness: None, diagnostics })
        }
        Reduced::Structured { s, k, k_star, trace } => {
            let mut decision = decide_structured(g, &s, k, spec, opts)?;
            decision.diagnostics.k_star = Some(k_star);
            decision.diagnostics.trace = trace;
            decision.diagnostics.timings.reduce_us = reduce_us;
            Ok(decision)
        }
    }
}

/// Runs the structured solver for `spec` on a caller-supplied `S`, skipping
/// the reduction.
pub fn decide_structured(g: &Graph, s: &[usize], k: i64, spec: &PropertySpec, opts: &SolveOptions) -> Result<Decision> {
    check_solvable(spec)?;
    spec.check_instance(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let start = Instant::now();
    let (out, solver): (StructuredOutcome, SolverUsed) = match spec.variant() {
        PropertyVariant::Hom(target) => (solve_hom_structured(g, s, target, k, opts)?, SolverUsed::StructuredHom),
        PropertyVariant::Acyclic => (solve_acyclic_structured(g, s, k, opts)?, SolverUsed::StructuredAcyclic),
    };
    let mut diagnostics = Diagnostics::new(if out.spencer_shortcut { SolverUsed::SpencerShortcut } else { solver });
    diagnostics.timings.solve_us = micros(start.elapsed());
    diagnostics.s = {
        let mut s = s.to_vec();
        s.sort_unstable();
        s
    };
    diagnostics.value = out.value;
    diagnostics.threshold = Some(out.threshold);
    Ok(Decision { answer: Answer::from_bool(out.answer), witness: out.witness, diagnostics })
}

fn check_solvable(spec: &PropertySpec) -> Result<()> {
    if let Some(target) = spec.target() {
        let kind = target.kind();
        if kind.oriented || kind.labeled {
            return Err(Error::InvalidParameter(format!(
                "structured solving supports unoriented, unlabeled targets only (got {kind})"
            )));
        }
    }
    Ok(())
}

/// Result of merging components: the connected oriented graph and, for each
/// original vertex, the kernel vertex it became.
fn identify_components(g: &Graph) -> Result<(Graph, Vec<usize>)> {
    let mut current = g.clone();
    let mut class: Vec<usize> = (0..g.n()).collect();
    loop {
        let comps = current.components();
        if comps.len() <= 1 {
            return Ok((current, class));
        }
        // components are listed by their lowest vertex
        let mut lows: Vec<usize> = comps.iter().map(|c| *c.iter().min().expect("nonempty")).collect();
        lows.sort_unstable();
        let (keep, gone) = (lows[0], lows[1]);
        let relabel = |v: usize| -> usize {
            match v.cmp(&gone) {
                std::cmp::Ordering::Equal => keep,
                std::cmp::Ordering::Greater => v - 1,
                std::cmp::Ordering::Less => v,
            }
        };
        let arcs: Vec<(usize, usize)> = current.edges().iter().map(|e| (relabel(e.u), relabel(e.v))).collect();
        current = Graph::oriented(current.n() - 1, &arcs)?;
        for c in class.iter_mut() {
            *c = relabel(*c);
        }
    }
}

/// Max Acyclic Subdigraph above `m/2`: does `d` have an acyclic subdigraph
/// with at least `m/2 + k` arcs? `d` may contain opposite arc pairs and be
/// disconnected. Witness edge indices refer to `d.arcs()`.
pub fn mas_above_half(d: &Digraph, k: i64) -> Result<Decision> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be at least 1, got {k}")));
    }
    let start = Instant::now();
    let pairs = d.opposite_pairs();
    let m = d.arcs().len();
    let threshold = Rational::new(m as i64, 2) + Rational::from_integer(k);
    let simple = d.without_opposite_pairs();
    let (kernel, class) = identify_components(&simple)?;
    let n = kernel.n();

    let mut diagnostics = Diagnostics::new(SolverUsed::KernelBound);
    diagnostics.threshold = Some(threshold.clone());
    diagnostics.kernel_n = Some(n);
    diagnostics.opposite_pairs = Some(pairs);

    if n >= 1 && (4 * k as i128) < n as i128 {
        diagnostics.timings.solve_us = micros(start.elapsed());
        return Ok(Decision { answer: Answer::Yes, witness: None, diagnostics });
    }

    diagnostics.solver = SolverUsed::KernelExact;
    let (value, order) = exact_max_acyclic(&kernel)?;
    let total = value + pairs;
    diagnostics.value = Some(total);
    let answer = Rational::from(total) >= threshold;
    let witness = if answer {
        // each kernel vertex expands to its original vertices; they lie in
        // different components of `simple`, so no arc runs between them
        let mut pos_of_class = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos_of_class[v] = i;
        }
        let mut original: Vec<usize> = (0..d.n()).collect();
        original.sort_by_key(|&v| (pos_of_class[class[v]], v));
        let mut pos = vec![0; d.n()];
        for (i, &v) in original.iter().enumerate() {
            pos[v] = i;
        }
        let edges: Vec<usize> = (0..m).filter(|&i| pos[d.arcs()[i].0] < pos[d.arcs()[i].1]).collect();
        if edges.len() != total {
            return Err(Error::Internal(format!(
                "witness realizes {} arcs, kernel optimum gives {total}",
                edges.len()
            )));
        }
        Some(Witness { edges, certificate: Certificate::Order(original) })
    } else {
        None
    };
    diagnostics.timings.solve_us = micros(start.elapsed());
    Ok(Decision { answer: Answer::from_bool(answer), witness, diagnostics })
}

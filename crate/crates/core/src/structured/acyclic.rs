use std::collections::BTreeSet;

use super::{argmax_over, prepare, spencer_threshold, SolveOptions, Step, StructuredOutcome};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::property::{pt_bound, Certificate, Witness};
use crate::rational::Rational;

/// `(local vertex, slot)` in the order the vertices were placed.
type Placement = Vec<(usize, usize)>;

/// Best value of ordering a tournament on `0..c` into slots `0..slots`
/// (nondecreasing along the order), scoring arcs that point forward plus
/// `tab[v][slot(v)]`. With `forced = Some((f, s))`, vertex `f` must sit in
/// slot `s` and its table entry is not counted.
fn clique_best(
    arcs: &[Vec<bool>],
    tab: &[&[i64]],
    slots: usize,
    forced: Option<(usize, usize)>,
    want_placement: bool,
) -> (i64, Placement) {
    let c = arcs.len();
    let full = (1usize << c) - 1;
    const NONE: i64 = i64::MIN / 4;
    // in_from[v]: bitmask of vertices with an arc into v
    let in_from: Vec<usize> = (0..c).map(|v| (0..c).filter(|&u| arcs[u][v]).fold(0, |m, u| m | (1 << u))).collect();
    let gain = |v: usize, s: usize| -> Option<i64> {
        match forced {
            Some((f, fs)) if f == v => (s == fs).then_some(0),
            _ => Some(tab[v][s]),
        }
    };
    // best[mask * slots + s]: every placed vertex in a slot <= s
    // exact[...]: the last placed vertex in slot exactly s
    let mut best = vec![NONE; (full + 1) * slots];
    let mut exact = vec![NONE; (full + 1) * slots];
    best[..slots].fill(0);
    for mask in 1..=full {
        for s in 0..slots {
            let mut e = NONE;
            let mut bits = mask;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let prev = mask & !(1 << v);
                let base = best[prev * slots + s];
                if base == NONE {
                    continue;
                }
                if let Some(g) = gain(v, s) {
                    e = e.max(base + g + (in_from[v] & prev).count_ones() as i64);
                }
            }
            exact[mask * slots + s] = e;
            let below = if s > 0 { best[mask * slots + s - 1] } else { NONE };
            best[mask * slots + s] = below.max(e);
        }
    }
    let value = best[full * slots + slots - 1];
    if !want_placement {
        return (value, Vec::new());
    }
    let mut placement = Vec::with_capacity(c);
    let (mut mask, mut s) = (full, slots - 1);
    while mask != 0 {
        let cur = best[mask * slots + s];
        if s > 0 && best[mask * slots + s - 1] == cur {
            s -= 1;
            continue;
        }
        let v = (0..c)
            .filter(|&v| mask & (1 << v) != 0)
            .find(|&v| {
                let prev = mask & !(1 << v);
                let base = best[prev * slots + s];
                base != NONE && gain(v, s).is_some_and(|g| base + g + (in_from[v] & prev).count_ones() as i64 == cur)
            })
            .expect("backtrack follows a recorded optimum");
        placement.push((v, s));
        mask &= !(1 << v);
    }
    placement.reverse();
    (value, placement)
}

/// Enumerates every linear order of `C ∪ S` that keeps the `slots - 1`
/// vertices of `S` in their fixed order; same scoring as the slot DP.
/// Exponential, meant for checking small cliques.
pub fn clique_orders_brute_force(tournament: &Graph, tab: &[Vec<i64>]) -> i64 {
    let c = tournament.n();
    let slots = tab.first().map_or(1, |row| row.len());
    let total = c + slots - 1;
    let mut items: Vec<usize> = (0..total).collect();
    let mut best = i64::MIN;
    permute(&mut items, 0, &mut |perm| {
        // S placeholders are items c.. and must appear in increasing order
        let s_seq: Vec<usize> = perm.iter().copied().filter(|&x| x >= c).collect();
        if s_seq.windows(2).any(|w| w[0] > w[1]) {
            return;
        }
        let mut value = 0;
        let mut seen_s = 0;
        let mut placed: Vec<usize> = Vec::new();
        for &x in perm {
            if x >= c {
                seen_s += 1;
                continue;
            }
            value += tab[x][seen_s];
            value += placed.iter().filter(|&&u| tournament.has_arc(u, x)).count() as i64;
            placed.push(x);
        }
        best = best.max(value);
    });
    best
}

fn permute(items: &mut [usize], i: usize, f: &mut impl FnMut(&[usize])) {
    if i == items.len() {
        f(items);
        return;
    }
    for j in i..items.len() {
        items.swap(i, j);
        permute(items, i + 1, f);
        items.swap(i, j);
    }
}

/// The `index`-th permutation of `0..len` in lexicographic order, returned
/// as the rank of each element.
fn nth_order(mut index: u128, len: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..len).collect();
    let mut order = Vec::with_capacity(len);
    for i in (0..len).rev() {
        let f: u128 = (1..=i as u128).product();
        let j = (index / f) as usize;
        index %= f;
        order.push(pool.remove(j));
    }
    let mut rank = vec![0; len];
    for (r, &x) in order.iter().enumerate() {
        rank[x] = r;
    }
    rank
}

enum StepRecord {
    Component(Placement),
    /// Indexed by the slot of the cut vertex.
    Cut(Vec<Placement>),
}

struct AcyclicSolver<'a> {
    slots: usize,
    /// For each rest vertex: S positions with an arc into it / out of it.
    s_in: Vec<Vec<usize>>,
    s_out: Vec<Vec<usize>>,
    s_arcs: Vec<(usize, usize)>,
    steps: &'a [Step],
    step_arcs: Vec<Vec<Vec<bool>>>,
}

impl AcyclicSolver<'_> {
    fn run(&self, rank: &[usize], rest_n: usize, mut record: Option<&mut Vec<StepRecord>>) -> i64 {
        let slots = self.slots;
        let mut tab = vec![vec![0i64; slots]; rest_n];
        for (v, row) in tab.iter_mut().enumerate() {
            for (i, cell) in row.iter_mut().enumerate() {
                let before = self.s_in[v].iter().filter(|&&u| rank[u] < i).count();
                let after = self.s_out[v].iter().filter(|&&u| rank[u] >= i).count();
                *cell = (before + after) as i64;
            }
        }
        let mut r = self.s_arcs.iter().filter(|&&(a, b)| rank[a] < rank[b]).count() as i64;
        let want = record.is_some();

        for (step, arcs) in self.steps.iter().zip(&self.step_arcs) {
            let rows: Vec<&[i64]> = step.vertices.iter().map(|&v| tab[v].as_slice()).collect();
            let to_global = |p: Placement| -> Placement { p.into_iter().map(|(i, s)| (step.vertices[i], s)).collect() };
            match step.cut {
                None => {
                    let (t, p) = clique_best(arcs, &rows, slots, None, want);
                    r += t;
                    if let Some(rec) = record.as_deref_mut() {
                        rec.push(StepRecord::Component(to_global(p)));
                    }
                }
                Some(c) => {
                    let ci = step.vertices.iter().position(|&v| v == c).expect("cut vertex in block");
                    let mut gains = Vec::with_capacity(slots);
                    let mut per_slot = Vec::with_capacity(slots);
                    for sc in 0..slots {
                        let (t, p) = clique_best(arcs, &rows, slots, Some((ci, sc)), want);
                        gains.push(t);
                        per_slot.push(to_global(p));
                    }
                    for (sc, t) in gains.into_iter().enumerate() {
                        tab[c][sc] += t;
                    }
                    if let Some(rec) = record.as_deref_mut() {
                        rec.push(StepRecord::Cut(per_slot));
                    }
                }
            }
        }
        r
    }
}

/// Decides whether an oriented graph has an acyclic spanning subgraph with
/// at least `pt(G) + k` arcs (`λ = 1/2`), given `S` with `G \ S` a forest of
/// tournaments. Enumerates the `|S|!` orders of `S`.
pub fn solve_acyclic_structured(g: &Graph, s: &[usize], k: i64, opts: &SolveOptions) -> Result<StructuredOutcome> {
    if !g.kind().oriented {
        return Err(Error::KindMismatch("the acyclic solver needs an oriented graph".into()));
    }
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be at least 1, got {k}")));
    }
    let threshold = pt_bound(g, &Rational::new(1, 2))? + Rational::from_integer(k);
    let prepared = prepare(g, s, opts.root)?;
    let largest = prepared.steps.iter().map(|st| st.vertices.len()).max().unwrap_or(0);

    if opts.spencer && largest as u64 >= spencer_threshold(k)? {
        return Ok(StructuredOutcome { answer: true, value: None, threshold, witness: None, spencer_shortcut: true });
    }
    if largest > opts.max_clique {
        return Err(Error::BudgetExceeded(format!(
            "clique of {largest} vertices exceeds the limit of {}",
            opts.max_clique
        )));
    }

    let rest = &prepared.rest;
    let h = &rest.graph;
    let mut s_pos = vec![usize::MAX; g.n()];
    for (i, &v) in prepared.s.iter().enumerate() {
        s_pos[v] = i;
    }
    let mut s_in = vec![Vec::new(); h.n()];
    let mut s_out = vec![Vec::new(); h.n()];
    let mut s_arcs = Vec::new();
    for e in g.edges() {
        match (s_pos[e.u] != usize::MAX, s_pos[e.v] != usize::MAX) {
            (true, true) => s_arcs.push((s_pos[e.u], s_pos[e.v])),
            (true, false) => s_in[rest.local_id(e.v).expect("rest vertex")].push(s_pos[e.u]),
            (false, true) => s_out[rest.local_id(e.u).expect("rest vertex")].push(s_pos[e.v]),
            (false, false) => {}
        }
    }
    let step_arcs = prepared
        .steps
        .iter()
        .map(|st| st.vertices.iter().map(|&a| st.vertices.iter().map(|&b| h.has_arc(a, b)).collect()).collect())
        .collect();
    let s_len = prepared.s.len();
    let solver = AcyclicSolver { slots: s_len + 1, s_in, s_out, s_arcs, steps: &prepared.steps, step_arcs };

    let count = (1..=s_len as u128)
        .try_fold(1u128, |acc, x| acc.checked_mul(x))
        .filter(|&c| c <= opts.max_assignments)
        .ok_or_else(|| Error::BudgetExceeded(format!("{s_len}! orders of S exceed the configured limit")))?;
    let (best_index, best) = argmax_over(count, opts.jobs, |i| solver.run(&nth_order(i, s_len), h.n(), None))
        .expect("at least one order of S");

    let value = best as usize;
    let answer = Rational::from(value) >= threshold;
    let witness = if answer {
        let rank = nth_order(best_index, s_len);
        let mut records = Vec::with_capacity(prepared.steps.len());
        solver.run(&rank, h.n(), Some(&mut records));
        let order = assemble_order(&prepared.steps, &records, &rank, &prepared.s, &rest.original, h.n());
        let witness =
            Witness::from_certificate(g, &crate::property::PropertySpec::acyclic(), Certificate::Order(order));
        if witness.size() != value {
            return Err(Error::Internal(format!("witness realizes {} arcs, table optimum is {value}", witness.size())));
        }
        Some(witness)
    } else {
        None
    };
    Ok(StructuredOutcome { answer, value: Some(value), threshold, witness, spencer_shortcut: false })
}

/// Rebuilds a global vertex order from the per-block placements: slots in
/// order, each followed by the `S` vertex of that rank; vertices sharing a
/// slot are sorted consistently with every block's internal order.
fn assemble_order(
    steps: &[Step],
    records: &[StepRecord],
    rank: &[usize],
    s: &[usize],
    original: &[usize],
    rest_n: usize,
) -> Vec<usize> {
    let mut slot_of = vec![usize::MAX; rest_n];
    let mut chosen: Vec<&Placement> = Vec::with_capacity(steps.len());
    for (step, rec) in steps.iter().zip(records).rev() {
        let p = match (rec, step.cut) {
            (StepRecord::Component(p), _) => p,
            (StepRecord::Cut(per), Some(c)) => &per[slot_of[c]],
            (StepRecord::Cut(_), None) => unreachable!("cut record without a cut vertex"),
        };
        for &(v, sl) in p {
            slot_of[v] = sl;
        }
        chosen.push(p);
    }
    // precedence edges between consecutive same-slot vertices of a block
    let mut succ = vec![Vec::new(); rest_n];
    let mut indeg = vec![0usize; rest_n];
    for p in &chosen {
        for w in p.windows(2) {
            if w[0].1 == w[1].1 {
                succ[w[0].0].push(w[1].0);
                indeg[w[1].0] += 1;
            }
        }
    }
    let slots = s.len() + 1;
    let mut by_rank = vec![0; s.len()];
    for (i, &r) in rank.iter().enumerate() {
        by_rank[r] = s[i];
    }
    let mut order = Vec::with_capacity(rest_n + s.len());
    for sl in 0..slots {
        let mut ready: BTreeSet<usize> = (0..rest_n).filter(|&v| slot_of[v] == sl && indeg[v] == 0).collect();
        while let Some(v) = ready.pop_first() {
            order.push(original[v]);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        if let Some(&v) = by_rank.get(sl) {
            order.push(v);
        }
    }
    order
}

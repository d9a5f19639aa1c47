//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use apt_core::graph::is_forest_of_cliques;
use apt_core::oracle::{
    check_strong_extendibility, exact_apt_decide, exact_mas_decide, exact_max_acyclic, exact_max_cut_partitions,
    exact_max_hom, verify_counterexample, ExtendibilityConfig,
};
use apt_core::property::{is_member, realized_edges};
use apt_core::reduction::ReductionState;
use apt_core::structured::spencer_threshold;
use apt_core::{apt_decide, mas_above_half, pt_bound, Graph, PropertySpec, Rational};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Check = Result<String, String>;

fn run(id: u32, title: &str, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    let (tag, detail, ok) = match outcome {
        Ok(d) => ("PASS", d, true),
        Err(d) => ("FAIL", d, false),
    };
    println!("{tag} [PRIMARY] criterion {id:>2}: {title} -- {detail} ({secs:.1}s)");
    ok
}

#[derive(Default)]
struct Sweep {
    instances: usize,
    mismatches: usize,
    first_problem: Option<(usize, String)>,
    decompositions: usize,
    structure_violations: usize,
    witnesses: usize,
}

impl Sweep {
    fn merge(mut self, other: Sweep) -> Sweep {
        self.instances += other.instances;
        self.mismatches += other.mismatches;
        self.decompositions += other.decompositions;
        self.structure_violations += other.structure_violations;
        self.witnesses += other.witnesses;
        self.first_problem = match (self.first_problem, other.first_problem) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }

    fn problem(&mut self, idx: usize, msg: String) {
        if self.first_problem.as_ref().is_none_or(|(i, _)| idx < *i) {
            self.first_problem = Some((idx, msg));
        }
    }
}

/// Decision equivalence between the pipeline and the oracle, plus the
/// decomposition structure guarantee and witness validity.
fn sweep(graphs: &[Graph], ks: &[i64], spec: &PropertySpec) -> Sweep {
    let lambda = spec.lambda().clone();
    graphs
        .par_iter()
        .enumerate()
        .map(|(idx, g)| {
            let mut s = Sweep::default();
            for &k in ks {
                s.instances += 1;
                let (d, o) = match (apt_decide(g, k, spec), exact_apt_decide(g, k, spec)) {
                    (Ok(d), Ok(o)) => (d, o),
                    (a, b) => {
                        s.mismatches += 1;
                        s.problem(idx, format!("error on {:?} k={k}: {:?} / {:?}", g.edges(), a.err(), b.err()));
                        continue;
                    }
                };
                if d.answer.is_yes() != o.answer {
                    s.mismatches += 1;
                    s.problem(
                        idx,
                        format!("mismatch on {:?} k={k}: pipeline {} oracle {}", g.edges(), d.answer, o.answer),
                    );
                }
                if let Some(w) = &d.witness {
                    s.witnesses += 1;
                    let sub = subgraph(g, &w.edges);
                    let member = is_member(&sub, spec).ok().flatten().is_some();
                    let realized = realized_edges(g, spec, &w.certificate);
                    if !member || Rational::from(w.size()) < o.threshold || realized != w.edges {
                        s.mismatches += 1;
                        s.problem(idx, format!("bad witness on {:?} k={k}", g.edges()));
                    }
                }
                if let Some(k_star) = &d.diagnostics.k_star {
                    if k_star.is_positive() {
                        s.decompositions += 1;
                        let rest = g.delete_vertices(&d.diagnostics.s).unwrap().graph;
                        let size_ok = Rational::from(d.diagnostics.s.len()) * (Rational::one() - lambda.clone())
                            <= Rational::from_integer(6 * k);
                        if !is_forest_of_cliques(&rest) || !size_ok {
                            s.structure_violations += 1;
                            s.problem(idx, format!("bad decomposition S={:?} on {:?}", d.diagnostics.s, g.edges()));
                        }
                    }
                }
            }
            s
        })
        .reduce(Sweep::default, Sweep::merge)
}

fn sweep_verdict(s: &Sweep) -> Check {
    let summary = format!("{} instances, {} mismatches, {} witnesses checked", s.instances, s.mismatches, s.witnesses);
    if s.mismatches == 0 {
        Ok(summary)
    } else {
        Err(format!("{summary}; first: {}", s.first_problem.as_ref().map_or("", |p| &p.1)))
    }
}

fn connected_graphs_up_to(n_max: usize) -> Vec<Graph> {
    (1..=n_max).flat_map(|n| apt_core::oracle::enumerate_connected_graphs(n).unwrap()).collect()
}

fn main() -> ExitCode {
    let mut all = true;
    let mut structure = Sweep::default();

    all &= run(1, "tight odd cliques for max-cut", || {
        let cut = PropertySpec::cut();
        for n in [3usize, 5, 7] {
            let g = Graph::complete(n);
            let value = exact_max_cut_partitions(&g).map_err(|e| e.to_string())?;
            let pt = pt_bound(&g, &Rational::new(1, 2)).unwrap();
            if Rational::from(value) != pt {
                return Err(format!("K{n}: max cut {value} but bound {pt}"));
            }
            if apt_decide(&g, 1, &cut).unwrap().answer.is_yes() {
                return Err(format!("K{n}: pipeline answered YES"));
            }
        }
        Ok("K3, K5, K7: max cut equals the bound, k = 1 answers NO".into())
    });

    let mut criterion2 = Sweep::default();
    all &= run(2, "pipeline equals oracle, max-cut", || {
        let cut = PropertySpec::cut();
        let mut graphs = connected_graphs_up_to(6);
        let exhaustive = graphs.len();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        graphs.extend((0..2000).map(|_| random_connected_graph(&mut rng, 7)));
        criterion2 = sweep(&graphs, &[1, 2, 3], &cut);
        sweep_verdict(&criterion2)
            .map(|s| format!("{exhaustive} graphs n <= 6 exhaustive + 2000 random n = 7, k in 1..=3: {s}"))
    });
    structure = structure.merge(criterion2);

    let mut criterion3 = Sweep::default();
    all &= run(3, "pipeline equals oracle, 3-coloring", || {
        let spec = PropertySpec::coloring(3).unwrap();
        let graphs = connected_graphs_up_to(6);
        criterion3 = sweep(&graphs, &[1, 2], &spec);
        sweep_verdict(&criterion3).map(|s| format!("{} graphs n <= 6, k in 1..=2: {s}", graphs.len()))
    });
    structure = structure.merge(criterion3);

    let mut criterion4 = Sweep::default();
    all &= run(4, "pipeline equals oracle, acyclic", || {
        let spec = PropertySpec::acyclic();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let graphs: Vec<Graph> = (0..500)
            .map(|_| {
                let n = rng.gen_range(1..=8);
                random_connected_oriented(&mut rng, n)
            })
            .collect();
        criterion4 = sweep(&graphs, &[1, 2], &spec);
        sweep_verdict(&criterion4).map(|s| format!("500 random oriented graphs n <= 8, k in 1..=2: {s}"))
    });
    structure = structure.merge(criterion4);

    all &= run(5, "decomposition structure", || {
        let msg = format!(
            "{} decompositions from criteria 2-4, {} violations",
            structure.decompositions, structure.structure_violations
        );
        if structure.structure_violations == 0 && structure.decompositions > 0 {
            Ok(msg)
        } else {
            Err(msg)
        }
    });

    all &= run(6, "per-rule safeness", || {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let specs = [PropertySpec::cut(), PropertySpec::coloring(3).unwrap()];
        let mut per_rule = [0usize; 4];
        let mut child_yes = 0;
        let mut done = 0;
        while done < 1000 {
            let spec = &specs[done % 2];
            let target = spec.target().unwrap();
            // every fifth sample starts on a hub-and-blocks graph, where
            // rule 4 is the first applicable rule
            let from_gadget = done % 5 == 4;
            let g = if from_gadget {
                let blocks = rng.gen_range(2..=3);
                let shape: Vec<usize> = (0..blocks).map(|_| rng.gen_range(2..=5 - blocks)).collect();
                Graph::plain(n_of(&shape), &gadget(&shape)).unwrap()
            } else {
                let n = rng.gen_range(3..=9);
                random_connected_graph(&mut rng, n)
            };
            let k = Rational::from_integer(rng.gen_range(1..=3));
            let mut state = ReductionState::new(&g, k, spec.lambda()).unwrap();
            let mut steps = 0;
            if !from_gadget {
                let mut probe = state.clone();
                while probe.k().is_positive() && probe.remaining().len() >= 2 {
                    let rule = probe.next_application().map_err(|e| e.to_string())?.ok_or("no rule applies")?;
                    probe.apply(rule).map_err(|e| e.to_string())?;
                    steps += 1;
                }
            }
            if steps == 0 && !from_gadget {
                continue;
            }
            let prefix = if from_gadget { 0 } else { rng.gen_range(0..steps) };
            for _ in 0..prefix {
                let rule = state.next_application().unwrap().unwrap();
                state.apply(rule).unwrap();
            }
            let value_of = |vs: &[usize]| -> (Rational, Rational) {
                let h = g.induced(vs).unwrap().graph;
                let val = exact_max_hom(&h, target).unwrap().0;
                (Rational::from(val), pt_bound(&h, spec.lambda()).expect("remainder stays connected"))
            };
            let (parent_val, parent_pt) = value_of(&state.remaining());
            let parent_k = state.k().clone();
            let rule = state.next_application().unwrap().unwrap();
            per_rule[rule.id() as usize - 1] += 1;
            let app = state.apply(rule).unwrap().clone();
            let (child_val, child_pt) = value_of(&state.remaining());
            let child_is_yes = child_val >= child_pt + app.k_after.clone();
            let parent_is_yes = parent_val >= parent_pt + parent_k.clone();
            if child_is_yes {
                child_yes += 1;
                if !parent_is_yes {
                    return Err(format!("violation: {:?} on {:?} (k = {parent_k})", app.rule, g.edges()));
                }
            }
            done += 1;
        }
        if per_rule.contains(&0) {
            return Err(format!("some rule never sampled: {per_rule:?}"));
        }
        Ok(format!(
            "1000 applications (rule 1/2/3/4: {}/{}/{}/{}), {child_yes} with a YES child, 0 violations",
            per_rule[0], per_rule[1], per_rule[2], per_rule[3]
        ))
    });

    all &= run(7, "K4 minus an edge", || {
        let g = Graph::plain(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let cut = exact_max_hom(&g, &Graph::complete(2)).unwrap().0;
        let col = exact_max_hom(&g, &Graph::complete(3)).unwrap().0;
        if (cut, col) == (4, 5) {
            Ok("max-cut value 4, 3-colorable subgraph value 5".into())
        } else {
            Err(format!("got {cut} and {col}, expected 4 and 5"))
        }
    });

    all &= run(8, "MAS above m/2 kernel", || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let digraphs: Vec<_> = (0..500)
            .map(|_| {
                let n = rng.gen_range(2..=8);
                let parts = rng.gen_range(1..=n.min(3));
                random_digraph(&mut rng, n, parts)
            })
            .collect();
        let mut exact_stage = 0;
        for d in &digraphs {
            for k in [1, 2] {
                let got = mas_above_half(d, k).map_err(|e| e.to_string())?;
                let want = exact_mas_decide(d, k).map_err(|e| e.to_string())?;
                if got.answer.is_yes() != want.answer {
                    return Err(format!("mismatch on {:?} k={k}", d.arcs()));
                }
                if got.diagnostics.solver == apt_core::pipeline::SolverUsed::KernelExact {
                    exact_stage += 1;
                    let n = got.diagnostics.kernel_n.unwrap();
                    if n as i64 > 4 * k {
                        return Err(format!("subset DP reached with n = {n} > 4k"));
                    }
                }
                if let Some(w) = &got.witness {
                    let kept: Vec<(usize, usize)> = w.edges.iter().map(|&i| d.arcs()[i]).collect();
                    let acyclic =
                        Graph::oriented(d.n(), &kept).ok().is_some_and(|g| exact_max_acyclic(&g).unwrap().0 == g.m());
                    if !acyclic || Rational::from(w.size()) < want.threshold {
                        return Err(format!("bad witness on {:?} k={k}", d.arcs()));
                    }
                }
            }
        }
        Ok(format!("1000 decisions match, subset DP reached {exact_stage} times, always with n <= 4k"))
    });

    all &= run(9, "extendibility falsification", || {
        let cases = [
            (PropertySpec::cut(), Rational::new(1, 2)),
            (PropertySpec::coloring(3).unwrap(), Rational::new(2, 3)),
            (PropertySpec::acyclic(), Rational::new(1, 2)),
        ];
        let mut parts = Vec::new();
        for (spec, lambda) in &cases {
            let cfg = ExtendibilityConfig::new(lambda.clone(), 5, 20, 9);
            let report = check_strong_extendibility(spec, &cfg).map_err(|e| e.to_string())?;
            if let Some(cx) = report.counterexample {
                return Err(format!("unexpected counterexample for {}: {cx:?}", report.property));
            }
            parts.push(format!("{}@{} clean over {} cuts", report.property, lambda, report.cuts_tested));
        }
        let lambda = Rational::new(3, 4);
        let cfg = ExtendibilityConfig::new(lambda.clone(), 4, 20, 9);
        let report = check_strong_extendibility(&PropertySpec::cut(), &cfg).map_err(|e| e.to_string())?;
        let cx = report.counterexample.ok_or("no counterexample for bipartite at 3/4")?;
        if !verify_counterexample(&PropertySpec::cut(), &lambda, &cx).unwrap() {
            return Err("reported counterexample does not re-verify".into());
        }
        parts.push(format!("cut@3/4 refuted on n = {} with S = {:?}", cx.n, cx.s));
        Ok(parts.join("; "))
    });

    all &= run(10, "Spencer threshold", || {
        let b0 = spencer_threshold(1).unwrap();
        if b0 != 8 {
            return Err(format!("spencer_threshold(1) = {b0}"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut worst = usize::MAX;
        for _ in 0..200 {
            let t = random_tournament(&mut rng, 8);
            let value = exact_max_acyclic(&t).unwrap().0;
            let need = pt_bound(&t, &Rational::new(1, 2)).unwrap() + Rational::one();
            if Rational::from(value) < need {
                return Err(format!("tournament {:?} has value {value} < {need}", t.edges()));
            }
            worst = worst.min(value);
        }
        Ok(format!("b0(1) = 8; 200 tournaments on 8 vertices, minimum value {worst} >= 67/4"))
    });

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

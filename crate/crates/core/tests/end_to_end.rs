mod common;

use apt_core::graph::{blocks, is_forest_of_cliques, leaf_cliques};
use apt_core::oracle::{exact_apt_decide, exact_mas_decide, exact_value};
use apt_core::pipeline::decide_structured;
use apt_core::reduction::{reduce, ReductionOutcome};
use apt_core::structured::SolveOptions;
use apt_core::{apt_decide, mas_above_half, Digraph, Graph, PropertySpec};
use common::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn specs() -> Vec<PropertySpec> {
    vec![PropertySpec::cut(), PropertySpec::coloring(3).unwrap(), PropertySpec::acyclic()]
}

fn instance(rng: &mut ChaCha8Rng, spec: &PropertySpec, n: usize) -> Graph {
    if spec.kind().oriented {
        random_connected_oriented(rng, n)
    } else {
        random_connected_graph(rng, n)
    }
}

#[test]
fn structured_value_does_not_depend_on_s() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let opts = SolveOptions { spencer: false, ..SolveOptions::default() };
    let mut compared = 0;
    for round in 0..120 {
        let spec = &specs()[round % 3];
        let n = rng.gen_range(3..=8);
        let g = instance(&mut rng, spec, n);
        let s = match reduce(&g, 3, spec.lambda()).unwrap() {
            ReductionOutcome::Decomposition { s, .. } => s,
            ReductionOutcome::EarlyYes { .. } => continue,
        };
        let mut bigger = s.clone();
        let mut outside: Vec<usize> = (0..n).filter(|v| !s.contains(v)).collect();
        outside.shuffle(&mut rng);
        bigger.extend(outside.iter().take(rng.gen_range(1..=2)));
        bigger.sort_unstable();
        let rest = g.delete_vertices(&bigger).unwrap().graph;
        assert!(is_forest_of_cliques(&rest));

        let a = decide_structured(&g, &s, 3, spec, &opts).unwrap();
        let b = decide_structured(&g, &bigger, 3, spec, &opts).unwrap();
        let exact = exact_value(&g, spec).unwrap().0;
        assert_eq!(a.diagnostics.value, Some(exact));
        assert_eq!(b.diagnostics.value, Some(exact));
        assert_eq!(a.answer, b.answer);
        compared += 1;
    }
    assert!(compared > 60, "{compared}");
}

#[test]
fn structured_rejects_s_leaving_a_non_forest() {
    let g = Graph::cycle(4);
    assert!(decide_structured(&g, &[], 1, &PropertySpec::cut(), &SolveOptions::default()).is_err());
    assert!(decide_structured(&g, &[0], 1, &PropertySpec::cut(), &SolveOptions::default()).is_ok());
}

#[test]
fn pipeline_agrees_with_oracle_at_larger_k() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for round in 0..150 {
        let spec = &specs()[round % 3];
        let n = rng.gen_range(5..=9);
        let g = instance(&mut rng, spec, n);
        let k = rng.gen_range(1..=6);
        let d = apt_decide(&g, k, spec).unwrap();
        let o = exact_apt_decide(&g, k, spec).unwrap();
        assert_eq!(d.answer.is_yes(), o.answer, "{:?} k={k} {}", g.edges(), spec.lambda());
        if let (Some(v), Some(t)) = (d.diagnostics.value, &d.diagnostics.threshold) {
            assert_eq!(v, o.value);
            assert_eq!(t, &o.threshold);
        }
    }
}

#[test]
fn four_colorings_use_the_structured_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let spec = PropertySpec::coloring(4).unwrap();
    for _ in 0..30 {
        let n = rng.gen_range(4..=7);
        let g = random_connected_graph(&mut rng, n);
        for k in 1..=2 {
            assert_eq!(
                apt_decide(&g, k, &spec).unwrap().answer.is_yes(),
                exact_apt_decide(&g, k, &spec).unwrap().answer
            );
        }
    }
}

#[test]
fn odd_cycle_target() {
    let spec = PropertySpec::hom(Graph::cycle(5)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let n = rng.gen_range(3..=7);
        let g = random_connected_graph(&mut rng, n);
        for k in 1..=2 {
            assert_eq!(
                apt_decide(&g, k, &spec).unwrap().answer.is_yes(),
                exact_apt_decide(&g, k, &spec).unwrap().answer
            );
        }
    }
}

#[test]
fn mas_ignores_arc_order_and_labels() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.gen_range(2..=9);
        let parts = rng.gen_range(1..=n.min(3));
        let d = random_digraph(&mut rng, n, parts);
        let k = rng.gen_range(1..=3);
        let base = mas_above_half(&d, k).unwrap();
        assert_eq!(base.answer.is_yes(), exact_mas_decide(&d, k).unwrap().answer);

        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut arcs: Vec<_> = d.arcs().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        arcs.shuffle(&mut rng);
        let relabeled = Digraph::from_arcs(n, &arcs).unwrap();
        assert_eq!(mas_above_half(&relabeled, k).unwrap().answer, base.answer);
    }
}

#[test]
fn mas_extra_opposite_pair_adds_half_an_arc() {
    // an opposite pair contributes one of its two arcs, exactly m/2 of them
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let n = rng.gen_range(3..=8);
        let d = random_digraph(&mut rng, n, 1);
        let (a, b) = (0, n);
        let mut arcs = d.arcs().to_vec();
        arcs.push((a, b));
        arcs.push((b, a));
        let bigger = Digraph::from_arcs(n + 1, &arcs).unwrap();
        for k in 1..=3 {
            let x = mas_above_half(&d, k).unwrap().answer;
            let y = mas_above_half(&bigger, k).unwrap().answer;
            assert_eq!(x, y, "{:?} k={k}", d.arcs());
        }
    }
}

#[test]
fn block_tools_on_known_shapes() {
    // two triangles sharing vertex 2, plus a pendant edge
    let g = Graph::plain(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (4, 5)]).unwrap();
    let b = blocks(&g);
    assert_eq!(b.blocks, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5]]);
    assert_eq!(b.cut_vertices, vec![2, 4]);
    assert!(is_forest_of_cliques(&g));
    let leaves = leaf_cliques(&g).unwrap();
    assert!(leaves.iter().any(|l| l.vertices == [0, 1, 2] && l.cut_vertex == Some(2)));
    assert!(leaves.iter().any(|l| l.vertices == [4, 5] && l.cut_vertex == Some(4)));
    assert!(leaf_cliques(&Graph::cycle(4)).is_err());
    assert!(!is_forest_of_cliques(&Graph::cycle(4)));
    assert!(is_forest_of_cliques(&Graph::complete(6)));
}

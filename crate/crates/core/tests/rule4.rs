mod common;

use apt_core::oracle::{exact_apt_decide, exact_value};
use apt_core::reduction::{reduce, ReductionState, Rule};
use apt_core::{apt_decide, pt_bound, Graph, PropertySpec, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{gadget, n_of};

fn shapes() -> Vec<Vec<usize>> {
    vec![vec![2, 2], vec![2, 3], vec![3, 3], vec![2, 2, 2]]
}

#[test]
fn gadget_triggers_rule_four_first() {
    for shape in shapes() {
        let g = Graph::plain(n_of(&shape), &gadget(&shape)).unwrap();
        let state = ReductionState::new(&g, Rational::from_integer(5), &Rational::new(1, 2)).unwrap();
        assert!(state.find_rule1().is_none());
        assert!(state.find_rule2().is_none());
        assert!(state.find_rule3().is_none());
        match state.next_application().unwrap() {
            Some(Rule::Four { x, y, c, z }) => {
                assert_eq!((x, y, z), (1, 2, 0));
                assert_eq!(c, (3..3 + shape[0]).collect::<Vec<_>>());
            }
            other => panic!("{shape:?}: expected rule 4, got {other:?}"),
        }
    }
}

#[test]
fn rule_four_charges_one_lambda_prime() {
    let g = Graph::plain(9, &gadget(&[2, 2])).unwrap();
    let out = reduce(&g, 5, &Rational::new(2, 3)).unwrap();
    let first = &out.trace()[0];
    assert_eq!(first.rule.id(), 4);
    assert_eq!(first.k_delta(), Rational::new(1, 6));
    assert_eq!(first.trace_line(1), "rule=4 params=x:2|y:3|C:4,5|z:1 k_before=5/1 k_after=29/6");
}

fn orient(rng: &mut impl Rng, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    edges.iter().map(|&(a, b)| if rng.gen_bool(0.5) { (a, b) } else { (b, a) }).collect()
}

/// Parent YES whenever the child is YES, on the part of the graph the rules
/// have not touched.
#[test]
fn rule_four_is_safe() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for shape in shapes() {
        let n = n_of(&shape);
        let edges = gadget(&shape);
        for round in 0..6 {
            let (g, spec) = match round % 3 {
                0 => (Graph::plain(n, &edges).unwrap(), PropertySpec::cut()),
                1 => (Graph::plain(n, &edges).unwrap(), PropertySpec::coloring(3).unwrap()),
                _ => (Graph::oriented(n, &orient(&mut rng, &edges)).unwrap(), PropertySpec::acyclic()),
            };
            for k in 1..=3 {
                let mut state = ReductionState::new(&g, Rational::from_integer(k), spec.lambda()).unwrap();
                let rule = state.next_application().unwrap().unwrap();
                assert_eq!(rule.id(), 4);
                let side = |vs: &[usize]| {
                    let h = g.induced(vs).unwrap().graph;
                    (Rational::from(exact_value(&h, &spec).unwrap().0), pt_bound(&h, spec.lambda()).unwrap())
                };
                let (pv, pp) = side(&state.remaining());
                let app = state.apply(rule).unwrap().clone();
                let (cv, cp) = side(&state.remaining());
                if cv >= cp + app.k_after.clone() {
                    assert!(pv >= pp + app.k_before.clone(), "{shape:?} k={k} {}", spec.lambda());
                }
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 72);
}

#[test]
fn pipeline_matches_oracle_on_gadgets() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for shape in shapes() {
        let n = n_of(&shape);
        let edges = gadget(&shape);
        let cases = [
            (Graph::plain(n, &edges).unwrap(), PropertySpec::cut()),
            (Graph::plain(n, &edges).unwrap(), PropertySpec::coloring(3).unwrap()),
            (Graph::oriented(n, &orient(&mut rng, &edges)).unwrap(), PropertySpec::acyclic()),
        ];
        for (g, spec) in &cases {
            for k in 1..=4 {
                let got = apt_decide(g, k, spec).unwrap();
                let want = exact_apt_decide(g, k, spec).unwrap();
                assert_eq!(got.answer.is_yes(), want.answer, "{shape:?} k={k} {}", spec.lambda());
                assert!(got.diagnostics.rule_counts()[3] >= 1);
            }
        }
    }
}

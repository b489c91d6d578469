use super::*;
use crate::bell::pr_box;
use crate::pbox::ProbabilityBox;
use crate::polytope::{catalog_box, three_input_scenario};
use crate::rational::{q, Rational};
use alloc::vec;
use alloc::vec::Vec;

impl ExclusivityGraph {
    fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![BitSet::new(n); n];
        for &(a, b) in edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        let nodes = (0..n).map(|i| Event::new(vec![(i, 0)])).collect();
        ExclusivityGraph { nodes, adj }
    }
}

fn gm_like() -> Scenario {
    Scenario::binary(
        &[("A", &["A1", "A2", "A3"]), ("B", &["B1", "B2", "B3"])],
        &[&["A1", "B1"], &["A2", "B1"], &["A1", "A2"], &["A3", "B2"], &["A3", "B3"]],
    )
    .unwrap()
}

#[test]
fn exclusive_examples() {
    let s = gm_like();
    let a = s.event(&[("A1", 1), ("B1", 1)]).unwrap();
    let b = s.event(&[("A2", 1), ("B1", 0)]).unwrap();
    assert!(exclusive(&a, &b));
    assert!(!exclusive(&a, &a));

    let t = three_input_scenario();
    let e = t.event(&[("x1", 0), ("x2", 0)]).unwrap();
    let f = t.event(&[("x2", 0), ("x3", 1)]).unwrap();
    let g = t.event(&[("x2", 1), ("x3", 1)]).unwrap();
    assert!(!exclusive(&e, &f));
    assert!(exclusive(&e, &g));
}

#[test]
fn exclusive_symmetric_irreflexive() {
    let s = three_input_scenario();
    let all = s.all_events();
    for a in &all {
        assert!(!exclusive(a, a));
        for b in &all {
            assert_eq!(exclusive(a, b), exclusive(b, a));
        }
    }
}

#[test]
fn tiny_universes() {
    let s = three_input_scenario();
    let one = vec![s.event(&[("x1", 0)]).unwrap()];
    assert!(build_exclusivity_graph(&s, Some(one)).unwrap().edges().is_empty());
    let two = vec![s.event(&[("x1", 0)]).unwrap(), s.event(&[("x2", 1)]).unwrap()];
    assert!(build_exclusivity_graph(&s, Some(two)).unwrap().edges().is_empty());
    let bad = vec![Event::new(vec![(0, 5)])];
    assert!(build_exclusivity_graph(&s, Some(bad)).is_err());
}

/// Brute force: pairwise exclusivity straight from the definition, and
/// maximality by trying every other event.
#[test]
fn eight_spanning_triangles() {
    let s = three_input_scenario();
    let ev = s.full_context_events();
    let excl = |a: &Event, b: &Event| {
        a.assignment()
            .iter()
            .any(|(i, o)| b.output_of(*i).is_some_and(|p| p != *o))
    };
    let mut count = 0;
    for i in 0..ev.len() {
        for j in i + 1..ev.len() {
            for k in j + 1..ev.len() {
                let tri = [&ev[i], &ev[j], &ev[k]];
                let pairwise = excl(tri[0], tri[1]) && excl(tri[0], tri[2]) && excl(tri[1], tri[2]);
                let ctxs: alloc::collections::BTreeSet<_> = tri.iter().map(|e| e.inputs()).collect();
                let maximal = ev
                    .iter()
                    .filter(|e| !tri.contains(e))
                    .all(|e| !tri.iter().all(|t| excl(t, e)));
                if pairwise && ctxs.len() == 3 && maximal {
                    count += 1;
                }
            }
        }
    }
    assert_eq!(count, 8);

    let g = build_exclusivity_graph(&s, None).unwrap();
    let spanning = maximal_cliques(&g)
        .into_iter()
        .filter(|c| {
            let ctxs: alloc::collections::BTreeSet<_> =
                c.iter().map(|&i| g.nodes()[i].inputs()).collect();
            c.len() == 3 && ctxs.len() == 3
        })
        .count();
    assert_eq!(spanning, 8);
}

fn brute_maximal(g: &ExclusivityGraph) -> Vec<Vec<usize>> {
    let n = g.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if !g.is_clique(&set) {
            continue;
        }
        let maximal = (0..n)
            .filter(|v| mask >> v & 1 == 0)
            .all(|v| !set.iter().all(|u| g.adjacent(*u, v)));
        if maximal {
            out.push(set);
        }
    }
    out.sort();
    out
}

fn brute_max_weight(g: &ExclusivityGraph, w: &[Rational]) -> Rational {
    let n = g.len();
    (0u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| g.is_clique(s))
        .map(|s| s.iter().map(|&i| w[i].clone()).sum::<Rational>())
        .max()
        .unwrap()
}

proptest::proptest! {
    #[test]
    fn bron_kerbosch_matches_brute_force(
        n in 1usize..10,
        bits in proptest::collection::vec(proptest::bool::ANY, 45),
        ws in proptest::collection::vec(0i64..7, 10),
        floor in 0i64..20,
    ) {
        let mut edges = Vec::new();
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                if bits[k] {
                    edges.push((a, b));
                }
                k += 1;
            }
        }
        let g = ExclusivityGraph::from_edges(n, &edges);
        proptest::prop_assert_eq!(maximal_cliques(&g), brute_maximal(&g));
        let w: Vec<Rational> = ws[..n].iter().map(|x| q(*x, 3)).collect();
        let (clique, total) = max_weight_clique(&g, &w);
        proptest::prop_assert!(g.is_clique(&clique));
        proptest::prop_assert_eq!(&total, &clique.iter().map(|&i| w[i].clone()).sum::<Rational>());
        let best = brute_max_weight(&g, &w);
        proptest::prop_assert_eq!(&total, &best);
        let floor = q(floor, 3);
        match heaviest_clique_above(&g, &w, &floor) {
            Some((c, t)) => {
                proptest::prop_assert!(g.is_clique(&c));
                proptest::prop_assert!(t > floor);
                proptest::prop_assert_eq!(t, best);
            }
            None => proptest::prop_assert!(best <= floor),
        }
    }
}

/// Event triples of the eight single-copy inequalities, in the order the
/// constraints are usually numbered: outcomes on x1x2, x2x3, x1x3.
const NAMED: [[&str; 3]; 8] = [
    ["00", "10", "11"],
    ["00", "11", "10"],
    ["01", "00", "11"],
    ["01", "01", "10"],
    ["10", "10", "01"],
    ["10", "11", "00"],
    ["11", "00", "01"],
    ["11", "01", "00"],
];

fn named_events(s: &Scenario, k: usize) -> Vec<Event> {
    let ctx = ["x1,x2", "x2,x3", "x1,x3"];
    let mut v: Vec<Event> = NAMED[k]
        .iter()
        .zip(ctx)
        .map(|(o, c)| s.parse_event(&alloc::format!("{o}|{c}")).unwrap())
        .collect();
    v.sort();
    v
}

#[test]
fn i1_violates_two_constraints() {
    let s = three_input_scenario();
    let i1 = catalog_box("I1").unwrap();
    let report = e1_check(&i1);
    assert_eq!(report.certificates.len(), 2);
    for c in &report.certificates {
        assert_eq!(c.total, q(3, 2));
        assert!(c.verify(&i1));
    }
    let mut got: Vec<Vec<Event>> = report
        .certificates
        .iter()
        .map(|c| {
            let mut e = c.events.clone();
            e.sort();
            e
        })
        .collect();
    got.sort();
    let mut want = vec![named_events(&s, 1), named_events(&s, 6)];
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn deterministic_and_noisy_boxes_pass() {
    assert!(e1_check(&catalog_box("D5").unwrap()).passes());
    let i1 = catalog_box("I1").unwrap();
    let w = ProbabilityBox::uniform(i1.scenario().clone());
    assert!(e1_check(&i1.mix(&q(1, 4), &w).unwrap()).passes());
}

#[test]
fn symbolic_constraints_reproduce_named_set() {
    // Coefficients on (m1, m2, m3, c12, c23, c13) and the constant term,
    // frozen from an independent symbolic substitution into the table.
    let frozen: [([i64; 6], i64); 8] = [
        ([-1, 0, 0, 1, -1, 1], 1),
        ([0, -1, 0, 1, 1, -1], 1),
        ([0, 0, -1, -1, 1, 1], 1),
        ([1, 1, 1, -1, -1, -1], 0),
        ([1, 1, 1, -1, -1, -1], 0),
        ([0, 0, -1, -1, 1, 1], 1),
        ([0, -1, 0, 1, 1, -1], 1),
        ([-1, 0, 0, 1, -1, 1], 1),
    ];
    let s = three_input_scenario();
    let ineqs = level_one_inequalities();
    assert_eq!(ineqs.len(), 8);
    for (k, (coeffs, constant)) in frozen.iter().enumerate() {
        let want = named_events(&s, k);
        let found = ineqs
            .iter()
            .find(|i| {
                let mut e = i.events.clone();
                e.sort();
                e == want
            })
            .unwrap_or_else(|| panic!("constraint {} missing", k + 1));
        assert_eq!(&found.coeffs, coeffs, "constraint {}", k + 1);
        assert_eq!(found.constant, *constant, "constraint {}", k + 1);
    }
}

#[test]
fn maximum_over_polytope_is_three_halves() {
    let vs = crate::polytope::enumerate_vertices();
    let ineqs = level_one_inequalities();
    let best = vs
        .iter()
        .flat_map(|v| ineqs.iter().map(move |i| i.lhs(&v.params)))
        .max()
        .unwrap();
    assert_eq!(best, q(3, 2));
    for v in vs.iter().filter(|v| v.deterministic) {
        assert!(ineqs.iter().all(|i| i.lhs(&v.params) <= 1));
    }
    for v in vs.iter().filter(|v| !v.deterministic) {
        let hits: Vec<_> = ineqs.iter().filter(|i| i.lhs(&v.params) == q(3, 2)).collect();
        assert_eq!(hits.len(), 2);
    }
}

#[test]
fn product_box_basics() {
    let d1 = catalog_box("D1").unwrap();
    assert_eq!(product_box(&d1, 1).unwrap(), d1);
    assert_eq!(product_box(&d1, 3), Err(Error::CopiesOutOfRange(3)));
    assert_eq!(product_box(&d1, 0), Err(Error::CopiesOutOfRange(0)));

    let w = ProbabilityBox::uniform(three_input_scenario());
    let ww = product_box(&w, 2).unwrap();
    assert_eq!(ww, ProbabilityBox::uniform(ww.scenario().clone()));
    assert_eq!(ww.scenario().contexts().len(), 9);

    let i1 = catalog_box("I1").unwrap();
    let ii = product_box(&i1, 2).unwrap();
    let s = ii.scenario();
    let e = s.event(&[("x1@1", 0), ("x2@1", 0), ("x1@2", 1), ("x3@2", 0)]).unwrap();
    // P(00|x1x2)·P(10|x1x3) = 1/2 · 1/2
    assert_eq!(ii.event_probability(&e).unwrap(), q(1, 4));
}

#[test]
fn pr_box_needs_two_copies() {
    let pr = pr_box();
    assert!(lo_k_check(&pr, 1).unwrap().passes());
    match lo_k_check(&pr, 2).unwrap() {
        LoOutcome::Violation { product, certificate } => {
            assert!(certificate.verify(&product));
            // Optimum cross-checked with an independent max-weight-clique solver.
            assert_eq!(certificate.total, q(5, 4));
        }
        LoOutcome::Pass => panic!("PR box passed two copies"),
    }
}

#[test]
fn deterministic_two_copies_pass() {
    let d1 = catalog_box("D1").unwrap();
    assert!(lo_k_check(&d1, 2).unwrap().passes());
    assert!(lo_k_check(&d1, 1).unwrap().passes());
}

#[test]
fn single_copy_violation_lifts() {
    let i1 = catalog_box("I1").unwrap();
    assert!(!lo_k_check(&i1, 1).unwrap().passes());
    match lo_k_check(&i1, 2).unwrap() {
        LoOutcome::Violation { product, certificate } => {
            assert!(certificate.verify(&product));
            assert!(certificate.total >= q(3, 2));
        }
        LoOutcome::Pass => panic!("lifted violation lost"),
    }
}

#[test]
fn noise_thresholds() {
    for name in ["I1", "I2", "I3", "I4"] {
        assert_eq!(noise_threshold(&catalog_box(name).unwrap()).unwrap(), q(1, 3), "{name}");
    }
    assert_eq!(
        noise_threshold(&catalog_box("D1").unwrap()),
        Err(Error::NotIndeterministicVertex)
    );
    let i1 = catalog_box("I1").unwrap();
    let w = ProbabilityBox::uniform(i1.scenario().clone());
    assert!(e1_check(&i1.mix(&q(1, 3), &w).unwrap()).passes());
    assert!(!e1_check(&i1.mix(&(q(1, 3) + q(1, 1000)), &w).unwrap()).passes());
}

proptest::proptest! {
    #[test]
    fn pair_search_matches_product_graph(
        n in 1usize..6,
        bits in proptest::collection::vec(proptest::bool::ANY, 15),
        ws in proptest::collection::vec(0i64..5, 6),
        floor in 0i64..30,
    ) {
        let mut edges = Vec::new();
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                if bits[k] {
                    edges.push((a, b));
                }
                k += 1;
            }
        }
        let g = ExclusivityGraph::from_edges(n, &edges);
        let w: Vec<Rational> = ws[..n].iter().map(|x| q(*x, 4)).collect();
        let mut pedges = Vec::new();
        for x in 0..n * n {
            for y in x + 1..n * n {
                let (a, b, c, d) = (x / n, x % n, y / n, y % n);
                if g.adjacent(a, c) || g.adjacent(b, d) {
                    pedges.push((x, y));
                }
            }
        }
        let pg = ExclusivityGraph::from_edges(n * n, &pedges);
        let pw: Vec<Rational> = (0..n * n).map(|x| &w[x / n] * &w[x % n]).collect();
        let floor = q(floor, 16);
        let direct = heaviest_clique_above(&pg, &pw, &floor).map(|(_, t)| t);
        let pairs = two_copy::heaviest_pair_clique(&g, &w, &floor).unwrap();
        let structured = pairs.map(|ps| {
            let idx: Vec<usize> = ps.iter().map(|(a, b)| a * n + b).collect();
            assert!(pg.is_clique(&idx));
            idx.iter().map(|&i| pw[i].clone()).sum::<Rational>()
        });
        proptest::prop_assert_eq!(structured, direct);
    }
}

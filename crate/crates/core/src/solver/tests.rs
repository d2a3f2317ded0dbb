use super::*;
use crate::generators::{delete_random_edges, gen_gk, gen_named, gen_random_cubic, gen_random_subcubic, Named};
use crate::matching::is_maximal_matching;
use crate::oracle::gamma_exact;

fn v(x: u32) -> VertexId {
    VertexId(x)
}

fn e(a: u32, b: u32) -> Edge {
    Edge::new(v(a), v(b))
}

fn graph(n: usize, edges: &[(u32, u32)]) -> Graph {
    Graph::from_edges(n, edges).unwrap()
}

fn low(t: usize) -> SolverOptions {
    SolverOptions {
        base_threshold: t,
        check_steps: true,
    }
}

/// Smallest maximal matching by trying every edge subset.
fn brute_gamma(g: &Graph, avoid: Option<Edge>) -> Option<usize> {
    let edges: Vec<Edge> = g.edges().collect();
    assert!(edges.len() <= 20);
    (0u32..1 << edges.len())
        .filter_map(|mask| {
            let m: Matching = (0..edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
            let ok = is_maximal_matching(g, &m) && avoid.is_none_or(|a| !m.contains(a));
            ok.then_some(m.len())
        })
        .min()
}

fn floor_lambda(g: &Graph) -> usize {
    bound_report(g).unwrap().size_limit
}

#[test]
fn k33_is_special() {
    let cert = solve(&gen_named(Named::K33).unwrap()).unwrap();
    assert_eq!(cert.size(), 3);
    assert!(cert.k33_special && cert.valid);
    assert_eq!(cert.trace[0].rule, Rule::K33Special);
}

#[test]
fn k2_single_edge() {
    let cert = solve(&gen_named(Named::K2).unwrap()).unwrap();
    assert_eq!(cert.matching.iter().collect::<Vec<_>>(), vec![e(0, 1)]);
    assert_eq!(cert.bound.lambda_times_6, 6);
}

#[test]
fn g3_within_bound() {
    let g = gen_gk(3).unwrap().graph;
    let cert = solve(&g).unwrap();
    assert_eq!(floor_lambda(&g), (72 - 27 + 2) / 6);
    assert!(cert.size() <= 7);
    assert_eq!(gamma_exact(&g, None).unwrap().gamma, 7);
}

#[test]
fn avoiding_small() {
    let p3 = graph(3, &[(0, 1), (1, 2)]);
    let c = PendantConstraint::new(&p3, v(0)).unwrap();
    assert_eq!(c.forbidden_edge, e(0, 1));
    let m = solve_avoiding(&p3, c).unwrap().matching;
    assert_eq!(m.iter().collect::<Vec<_>>(), vec![e(1, 2)]);

    let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
    for leaf in 1..4 {
        let c = PendantConstraint::new(&star, v(leaf)).unwrap();
        let m = solve_avoiding(&star, c).unwrap().matching;
        assert_eq!(m.len(), 1);
        assert!(!m.contains(e(0, leaf)));
    }
}

#[test]
fn avoiding_k33_minus_with_pendant() {
    let mut h = gen_named(Named::K33Minus).unwrap();
    let p = h.add_vertex();
    let deg2 = h.vertices().find(|&x| h.degree(x) == 2).unwrap();
    h.add_edge(deg2, p).unwrap();
    let c = PendantConstraint::new(&h, p).unwrap();
    let limit = floor_lambda(&h);
    assert!(brute_gamma(&h, Some(c.forbidden_edge)).unwrap() <= limit);
    let cert = solve_avoiding(&h, c).unwrap();
    assert!(cert.size() <= limit);
    assert!(!cert.matching.contains(c.forbidden_edge));
}

#[test]
fn constraint_validation() {
    let k2 = gen_named(Named::K2).unwrap();
    assert!(matches!(PendantConstraint::new(&k2, v(0)), Err(SolveError::InvalidConstraint(_))));
    let c5 = gen_named(Named::Cycle(5)).unwrap();
    assert!(PendantConstraint::new(&c5, v(0)).is_err());
    let p4 = gen_named(Named::Path(4)).unwrap();
    let forged = PendantConstraint {
        vertex: v(0),
        forbidden_edge: e(2, 3),
    };
    assert!(solve_avoiding(&p4, forged).is_err());
}

#[test]
fn input_errors() {
    let split = graph(4, &[(0, 1), (2, 3)]);
    assert_eq!(solve(&split), Err(SolveError::Disconnected));
    assert_eq!(solve(&Graph::new()), Err(SolveError::Disconnected));
    let all = solve_all(&split).unwrap();
    assert_eq!(all.size(), 2);
    assert_eq!(all.bound.size_limit, 2);
}

#[test]
fn select_degree1() {
    // C9 with a pendant at 0
    let mut edges: Vec<(u32, u32)> = (0..9).map(|i| (i, (i + 1) % 9)).collect();
    edges.push((0, 9));
    let g = graph(10, &edges);
    let step = select_rule(&g, None).unwrap();
    assert_eq!(step.rule, Rule::Degree1);
    assert_eq!(step.deleted, vec![v(0), v(1), v(9)]);
    assert!(step.added.is_empty());
    assert_eq!(step.extension.fixed_edges(), vec![e(0, 1)]);
    let c = PendantConstraint::new(&g, v(9)).unwrap();
    assert_eq!(select_rule(&g, Some(&c)).unwrap().rule, Rule::Degree1);

    let reduced = apply_step(&g, &step).unwrap();
    let sub_m = solve(&reduced).unwrap().matching;
    let m = extend_solution(&g, &step, &sub_m).unwrap();
    assert_eq!(m.len(), sub_m.len() + 1);
    assert!(m.contains(e(0, 1)));
}

#[test]
fn degree1_on_paths() {
    // P5: the step deletes {u, v, w} and leaves P2
    let p5 = gen_named(Named::Path(5)).unwrap();
    let step = select_rule_with(&p5, None, &low(0)).unwrap();
    assert_eq!(step.rule, Rule::Degree1);
    let r = apply_step(&p5, &step).unwrap();
    assert_eq!((r.n(), r.m()), (2, 1));
    // P4: the far pendant goes too, nothing is left isolated
    let p4 = gen_named(Named::Path(4)).unwrap();
    let step = select_rule_with(&p4, None, &low(0)).unwrap();
    assert_eq!(step.rule, Rule::Degree1);
    assert!(apply_step(&p4, &step).unwrap().is_empty());
}

#[test]
fn contraction() {
    let c12 = gen_named(Named::Cycle(12)).unwrap();
    let step = select_rule(&c12, None).unwrap();
    assert_eq!(step.rule, Rule::AdjDeg2(AdjCase::Contraction));
    assert_eq!(step.deleted, vec![v(0), v(1)]);
    assert_eq!(step.added, vec![e(2, 11)]);
    assert_eq!(step.budget(), 1);

    let hit: Matching = [e(2, 11)].into_iter().collect();
    let reduced = apply_step(&c12, &step).unwrap();
    let full_hit = step.extension.apply(&hit);
    assert!(full_hit.contains(e(0, 11)) && full_hit.contains(e(1, 2)) && !full_hit.contains(e(2, 11)));
    let sub = solve(&reduced).unwrap().matching;
    let m = extend_solution(&c12, &step, &sub).unwrap();
    assert_eq!(m.len(), sub.len() + 1);

    let c6 = gen_named(Named::Cycle(6)).unwrap();
    let step = select_rule_with(&c6, None, &low(0)).unwrap();
    assert_eq!(step.rule, Rule::AdjDeg2(AdjCase::Contraction));
    let r = apply_step(&c6, &step).unwrap();
    assert_eq!((r.n(), r.m()), (4, 4));
    assert!(r.vertices().all(|x| r.degree(x) == 2) && r.is_connected());
}

#[test]
fn cubic_finish_steps() {
    let q3 = gen_named(Named::CubeQ3).unwrap();
    let step = select_rule_with(&q3, None, &low(0)).unwrap();
    assert_eq!(step.rule, Rule::CubicFinish(FinishCase::Cross));
    assert_eq!(step.deleted, vec![v(0), v(1)]);
    let r = apply_step(&q3, &step).unwrap();
    assert_eq!(r.n(), 6);
    assert!(r.cubic_components().is_empty());

    // prism over a triangle: adjacent triangle vertices share a neighbour
    let prism = graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]);
    let plan = &rules::cubic_finish_plans(&prism, v(0), v(1))[0];
    assert_eq!(plan.rule, Rule::CubicFinish(FinishCase::CommonNeighbour));
    assert_eq!(plan.recipe.fixed_edges(), vec![e(0, 1)]);

    let pet = gen_named(Named::Petersen).unwrap();
    let step = select_rule(&pet, None).unwrap();
    assert!(matches!(step.rule, Rule::CubicFinish(_)));
    assert!(apply_step(&pet, &step).unwrap().cubic_components().is_empty());
}

#[test]
fn noncubic_edge_q3() {
    let q3 = gen_named(Named::CubeQ3).unwrap();
    let estar = [e(2, 3), e(2, 5), e(4, 3), e(4, 5)];
    let chosen = select_noncubic_edge(&q3, &[v(0), v(1)], &estar).unwrap();
    assert!(!q3.has_edge(chosen.u(), chosen.v()));
    let mut r = q3.without_vertices(&[v(0), v(1)]).unwrap();
    r.add_edge(chosen.u(), chosen.v()).unwrap();
    assert_eq!(r.n(), 6);
    for comp in r.connected_components() {
        assert!(comp.iter().any(|&x| r.degree(x) == 2));
    }
    assert!(select_noncubic_edge(&q3, &[v(0), v(1)], &[e(2, 3)]).is_err());
    assert!(matches!(
        select_noncubic_edge(&q3, &[v(0), v(1)], &[e(6, 7)]),
        Err(SolveError::Precondition(_))
    ));
}

#[test]
fn noncubic_edge_petersen() {
    let g = gen_named(Named::Petersen).unwrap();
    for a in g.vertices() {
        for &b in g.neighbors(a) {
            let s1: Vec<VertexId> = g.neighbors(a).iter().copied().filter(|&x| x != b).collect();
            let s2: Vec<VertexId> = g.neighbors(b).iter().copied().filter(|&x| x != a).collect();
            let estar: Vec<Edge> = s1.iter().flat_map(|&x| s2.iter().map(move |&y| Edge::new(x, y))).collect();
            let chosen = select_noncubic_edge(&g, &[a, b], &estar).unwrap();
            let mut r = g.without_vertices(&[a, b]).unwrap();
            r.add_edge(chosen.u(), chosen.v()).unwrap();
            assert!(r.cubic_components().is_empty());
        }
    }
}

fn case232_graph(shared: bool) -> (Graph, Case232Labels) {
    // u=0 v1=1 v2=2 w11=3 w12=4 w21=5 w22=6, x's from 7 on
    let mut edges = vec![(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6), (4, 7), (4, 8), (3, 11), (6, 12)];
    if shared {
        edges.extend([(5, 7), (5, 9), (8, 9), (9, 10), (7, 10)]);
    } else {
        edges.extend([(5, 9), (5, 10), (7, 8), (9, 10), (7, 11), (8, 12)]);
    }
    let labels = Case232Labels {
        u: v(0),
        v1: v(1),
        v2: v(2),
        w11: v(3),
        w12: v(4),
        w21: v(5),
        w22: v(6),
    };
    (graph(13, &edges), labels)
}

#[test]
fn q_pair_choice() {
    for shared in [false, true] {
        let (g, l) = case232_graph(shared);
        let (q1, q2) = choose_q1_q2(&g, &l).unwrap();
        assert!(g.neighbors(l.w12).contains(&q1) && g.neighbors(l.w21).contains(&q2));
        assert!(!g.has_edge(l.w11, q1) && !g.has_edge(l.w22, q2));
        let mut r = g.without_vertices(&[l.u, l.v1, l.v2, l.w12, l.w21]).unwrap();
        r.add_edge(l.w11, q1).unwrap();
        r.add_edge(l.w22, q2).unwrap();
        r.validate().unwrap();
        assert!(r.cubic_components().is_empty());
    }
}

#[test]
fn bridge_examples() {
    let triangles = graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]);
    let m = solve_bridge_case(&triangles, e(2, 3)).unwrap();
    assert!(is_maximal_matching(&triangles, &m) && m.len() <= (24 - 7) / 6);
    assert_eq!(brute_gamma(&triangles, None), Some(2));

    let squares = graph(8, &[(0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (5, 6), (6, 7), (4, 7), (3, 4)]);
    let m = solve_bridge_case(&squares, e(3, 4)).unwrap();
    assert!(is_maximal_matching(&squares, &m) && m.len() <= 3);
    assert!(brute_gamma(&squares, None).unwrap() <= 3);

    // two K4 minus an edge, joined at degree-two vertices
    let diamonds = graph(
        8,
        &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6), (5, 7), (6, 7), (3, 4)],
    );
    let m = solve_bridge_case(&diamonds, e(3, 4)).unwrap();
    assert!(is_maximal_matching(&diamonds, &m) && m.len() <= 21 / 6);
    assert!(brute_gamma(&diamonds, None).unwrap() <= 3);

    assert!(matches!(
        solve_bridge_case(&diamonds, e(0, 1)),
        Err(SolveError::Precondition(_))
    ));
}

#[test]
fn bridge_case_agrees_with_solver() {
    // chains of small blocks joined by bridges, large enough to use the rule
    for seed in 0..40u64 {
        let mut g = Graph::new();
        let mut last: Option<VertexId> = None;
        for b in 0..3 {
            let base = g.n() as u32;
            let block = gen_random_cubic(6 + 2 * ((seed as usize + b) % 3), seed * 7 + b as u64).unwrap();
            for _ in 0..block.n() {
                g.add_vertex();
            }
            let cut = block.edges().next().unwrap();
            for x in block.edges().filter(|&x| x != cut) {
                g.add_edge(v(base + x.u().0), v(base + x.v().0)).unwrap();
            }
            if let Some(prev) = last {
                g.add_edge(prev, v(base + cut.u().0)).unwrap();
            }
            last = Some(v(base + cut.v().0));
        }
        let bridges = g.find_bridges();
        assert!(bridges.len() >= 2);
        let cert = solve_with(&g, None, &low(9)).unwrap();
        assert!(cert.uses("BRIDGE"));
        for b in bridges {
            let m = solve_bridge_case(&g, b).unwrap();
            assert!(is_maximal_matching(&g, &m));
            assert!(cert.bound.admits(m.len()));
        }
    }
}

#[test]
fn rule_strings() {
    assert_eq!(Rule::Deg2TwoDeg3(Deg3Case::Case232).to_string(), "DEG2_TWO_DEG3:2.3.2");
    assert_eq!(Rule::Degree1.to_string(), "DEGREE1");
    assert_eq!(Rule::Bridge(BridgeKind::Split).to_string(), "BRIDGE:split");
    assert_eq!(serde_json::to_string(&Rule::BaseSmall).unwrap(), "\"BASE_SMALL\"");
    assert!(Rule::Bridge(BridgeKind::Pendant1).avoids_pendant());
}

/// Replays every trace and checks the per-step shape of each rule.
#[test]
fn step_budgets_and_shapes() {
    let mut seen_232 = 0;
    for seed in 0..150u64 {
        let n = 10 + 2 * (seed as usize % 30);
        let g = gen_random_cubic(n, seed).unwrap();
        let inputs = [
            g.clone(),
            delete_random_edges(&g, 2, seed),
            gen_random_subcubic(n, n / 3, seed).unwrap(),
        ];
        for input in inputs {
            let cert = solve_with(&input, None, &low(0)).unwrap();
            let mut cur = input.clone();
            for step in &cert.trace {
                assert!(step.deleted.len() <= MAX_DELETED && step.added.len() <= 2);
                let next = apply_step(&cur, step).unwrap();
                let dn = cur.n() - next.n();
                let dm = cur.m() - next.m();
                let cap = match step.rule {
                    Rule::Degree1 | Rule::AdjDeg2(AdjCase::Contraction) | Rule::CubicFinish(_) => 1,
                    Rule::Bridge(_) => 1,
                    Rule::BaseSmall | Rule::K33Special => 4,
                    _ => 3,
                };
                assert!(step.budget() <= cap, "{} budget {}", step.rule, step.budget());
                if step.rule == Rule::Deg2TwoDeg3(Deg3Case::Case232) {
                    assert_eq!(dn, 5);
                    assert!(dm <= 8);
                    seen_232 += 1;
                }
                cur = next;
            }
            assert!(cur.is_empty());
        }
    }
    assert!(seen_232 > 0);
}

#[test]
fn replay_detects_tampering() {
    let g = gen_random_cubic(30, 3).unwrap();
    let cert = solve_with(&g, None, &low(0)).unwrap();
    assert_eq!(replay(&g, &cert.trace).unwrap(), cert.matching);
    let mut bad = cert.trace.clone();
    let last = bad.len() - 1;
    bad[last].extension = Recipe::default();
    assert!(matches!(replay(&g, &bad), Err(SolveError::InternalInvariantViolation(_))));
    bad.pop();
    assert!(replay(&g, &bad).is_err());
}

#[test]
fn deterministic() {
    let g = gen_random_cubic(60, 11).unwrap();
    let a = solve(&g).unwrap();
    let b = solve(&g).unwrap();
    assert_eq!((a.matching, a.trace), (b.matching, b.trace));
}

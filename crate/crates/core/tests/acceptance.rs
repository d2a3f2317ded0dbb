//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.
//!
//! Bounds, maximality and the `K3,3` test are recomputed here from scratch
//! rather than taken from the library.

use std::time::{Duration, Instant};

use mmm_core::generators::{
    delete_random_edges, enumerate_connected_subcubic, gen_gk, gen_gk_optimal_matching, gen_named, gen_random_cubic,
    gen_random_subcubic, Named,
};
use mmm_core::io::{parse_graph6, write_graph6};
use mmm_core::matching::gamma_lower_bound;
use mmm_core::oracle::{enumerate_maximal_matchings, gamma_exact};
use mmm_core::solver::{solve, solve_avoiding, PendantConstraint, SolveCertificate};
use mmm_core::{Edge, Graph, Matching, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---- independent checks ----

fn maximal(g: &Graph, m: &Matching) -> bool {
    let mut used = vec![false; g.id_bound()];
    for e in m.iter() {
        if !g.has_edge(e.u(), e.v()) || used[e.u().index()] || used[e.v().index()] {
            return false;
        }
        used[e.u().index()] = true;
        used[e.v().index()] = true;
    }
    g.edges().all(|e| used[e.u().index()] || used[e.v().index()])
}

fn bipartite(g: &Graph) -> bool {
    let mut colour = vec![u8::MAX; g.id_bound()];
    for s in g.vertices() {
        if colour[s.index()] != u8::MAX {
            continue;
        }
        colour[s.index()] = 0;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in g.neighbors(x) {
                if colour[y.index()] == u8::MAX {
                    colour[y.index()] = 1 - colour[x.index()];
                    stack.push(y);
                } else if colour[y.index()] == colour[x.index()] {
                    return false;
                }
            }
        }
    }
    true
}

fn cubic(g: &Graph) -> bool {
    g.n() > 0 && g.vertices().all(|v| g.degree(v) == 3)
}

/// `K3,3` is the only cubic bipartite graph on six vertices.
fn is_k33(g: &Graph) -> bool {
    g.n() == 6 && cubic(g) && g.is_connected() && bipartite(g)
}

/// `4n - m + 2I + K - n1` for a connected graph.
fn lb6(g: &Graph) -> i64 {
    let n = g.n() as i64;
    let m = g.m() as i64;
    let i = cubic(g) as i64;
    let k = (g.n() == 2 && g.m() == 1) as i64;
    let n1 = g.vertices().filter(|&v| g.degree(v) == 1).count() as i64;
    4 * n - m + 2 * i + k - n1
}

fn bounded(g: &Graph, size: usize) -> bool {
    if is_k33(g) {
        size == 3
    } else {
        6 * size as i64 <= lb6(g)
    }
}

fn certified(g: &Graph, cert: &SolveCertificate) -> bool {
    cert.valid && maximal(g, &cert.matching) && bounded(g, cert.matching.len())
}

// ---- reporting ----

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn corpus() -> Vec<Graph> {
    (1..=7).flat_map(|n| enumerate_connected_subcubic(n).unwrap()).collect()
}

// ---- criteria ----

fn exhaustive_soundness(corpus: &[Graph]) -> Outcome {
    let failures = corpus
        .iter()
        .filter(|g| !solve(g).is_ok_and(|c| certified(g, &c)))
        .count();
    outcome(failures == 0, format!("{} graphs, {failures} failures", corpus.len()))
}

fn equality_characterization(corpus: &[Graph]) -> Outcome {
    let mut failures = 0;
    let mut equality = 0;
    for g in corpus {
        let gamma = gamma_exact(g, None).unwrap().gamma as i64;
        let base = 4 * g.n() as i64 - g.m() as i64;
        let tight = 6 * gamma == base + 3;
        equality += tight as usize;
        if tight != is_k33(g) || (!cubic(g) && 6 * gamma > base) || 6 * gamma > base + 3 {
            failures += 1;
        }
    }
    outcome(
        failures == 0 && equality > 0,
        format!("{} graphs, {equality} at equality (all K3,3), {failures} exceptions", corpus.len()),
    )
}

fn extremal_family() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (k, want) in [(1, 3), (2, 5), (3, 7), (4, 10)] {
        let g = gen_gk(k).unwrap().graph;
        let t = Instant::now();
        let got = gamma_exact(&g, None).unwrap().gamma;
        let dt = t.elapsed();
        ok &= got == want;
        if k == 4 {
            ok &= dt < Duration::from_secs(60);
            notes.push(format!("G4 oracle {:.2}s", dt.as_secs_f64()));
        }
    }
    for k in 1..=20usize {
        let fam = gen_gk(k).unwrap();
        let size = (7 * k).div_ceil(3);
        ok &= gen_gk_optimal_matching(&fam).is_ok_and(|m| m.len() == size && maximal(&fam.graph, &m));
        // size <= 7 * 6k / 18 + 2/3, times 18
        ok &= 18 * size <= 42 * k + 12;
    }
    notes.push("pattern maximal with ceil(7k/3) edges for k <= 20".into());
    outcome(ok, notes.join("; "))
}

fn known_values() -> Outcome {
    let mut cases = vec![(Named::K33, 3), (Named::K4, 2), (Named::K2, 1)];
    cases.extend((3..=15).map(|n| (Named::Cycle(n), n.div_ceil(3))));
    let wrong: Vec<String> = cases
        .iter()
        .filter(|(name, want)| gamma_exact(&gen_named(*name).unwrap(), None).unwrap().gamma != *want)
        .map(|(name, _)| format!("{name:?}"))
        .collect();
    outcome(wrong.is_empty(), format!("{} graphs checked, wrong: {wrong:?}", cases.len()))
}

fn approximation_ratio() -> Outcome {
    let mut failures = 0;
    let mut worst = 0.0f64;
    let mut exact_checked = 0;
    for (i, n) in [10usize, 20, 50, 100].into_iter().enumerate() {
        for s in 0..250u64 {
            let g = gen_random_cubic(n, 5_000 + 1000 * i as u64 + s).unwrap();
            let k = solve(&g).unwrap().matching.len();
            let l = (3 * n).div_ceil(10);
            // |M| <= 5n/12 + 1/2 and |M|/l <= 25/18 + 5/(3l), cleared of denominators
            if 12 * k > 5 * n + 6 || 18 * k > 25 * l + 30 {
                failures += 1;
            }
            worst = worst.max(k as f64 / l as f64);
            if n <= 16 {
                let gamma = gamma_exact(&g, None).unwrap().gamma;
                exact_checked += 1;
                if 18 * k > 25 * gamma + 30 {
                    failures += 1;
                }
            }
        }
    }
    outcome(
        failures == 0,
        format!("1000 graphs, {exact_checked} against the oracle, max |M|/ceil(3n/10) = {worst:.4}, {failures} failures"),
    )
}

fn randomized_soundness() -> Outcome {
    let mut failures = 0;
    let (mut bridge, mut degree1, mut avoid) = (0usize, 0usize, 0usize);
    let mut tally = |c: &SolveCertificate| {
        for s in &c.trace {
            match s.rule.family() {
                "BRIDGE" => bridge += 1,
                "DEGREE1" => degree1 += 1,
                _ => {}
            }
            avoid += s.rule.avoids_pendant() as usize;
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for s in 0..10_000u64 {
        let n = 2 * rng.gen_range(4..=100usize);
        let g = gen_random_cubic(n, 60_000 + s).unwrap();
        match solve(&g) {
            Ok(c) if certified(&g, &c) => tally(&c),
            _ => failures += 1,
        }
    }
    for s in 0..2_000u64 {
        let n = 2 * rng.gen_range(4..=100usize);
        let g = gen_random_cubic(n, 80_000 + s).unwrap();
        let h = delete_random_edges(&g, rng.gen_range(1..=3), s);
        match solve(&h) {
            Ok(c) if h.is_connected() && certified(&h, &c) => tally(&c),
            _ => failures += 1,
        }
    }
    let covered = bridge > 0 && degree1 > 0 && avoid > 0;
    outcome(
        failures == 0 && covered,
        format!("12000 graphs, {failures} failures; steps seen: BRIDGE {bridge}, DEGREE1 {degree1}, pendant-avoiding {avoid}"),
    )
}

fn pendant_avoidance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = 0;
    let mut done = 0;
    let mut seed = 0u64;
    while done < 500 {
        seed += 1;
        let n = rng.gen_range(3..=120usize);
        let g = gen_random_subcubic(n, rng.gen_range(0..=n), 70_000 + seed).unwrap();
        let pendants: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) == 1).collect();
        if pendants.is_empty() {
            continue;
        }
        let p = pendants[rng.gen_range(0..pendants.len())];
        let forbidden = Edge::new(p, g.neighbors(p)[0]);
        let ok = PendantConstraint::new(&g, p)
            .and_then(|c| solve_avoiding(&g, c))
            .is_ok_and(|c| certified(&g, &c) && !c.matching.contains(forbidden));
        failures += !ok as usize;
        done += 1;
    }
    outcome(failures == 0, format!("{done} graphs, {failures} failures"))
}

fn complexity() -> Outcome {
    let sizes = [2000usize, 4000, 8000];
    let times: Vec<f64> = sizes
        .iter()
        .map(|&n| {
            let g = gen_random_cubic(n, 8).unwrap();
            (0..3)
                .map(|_| {
                    let t = Instant::now();
                    let c = solve(&g).unwrap();
                    assert!(certified(&g, &c));
                    t.elapsed().as_secs_f64()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let ratios = [times[1] / times[0], times[2] / times[1]];
    let ok = ratios.iter().all(|&r| r <= 5.0) && times[2] < 30.0;
    outcome(
        ok,
        format!(
            "best of 3: {:.3}s / {:.3}s / {:.3}s, ratios {:.2} and {:.2}",
            times[0], times[1], times[2], ratios[0], ratios[1]
        ),
    )
}

fn oracle_consistency(corpus: &[Graph]) -> Outcome {
    let mut graphs: Vec<Graph> = corpus.to_vec();
    for s in 0..1500u64 {
        let n = 8 + (s % 3) as usize;
        graphs.push(gen_random_subcubic(n, (s % 7) as usize, 90_000 + s).unwrap());
    }
    let mut failures = 0;
    for g in &graphs {
        let gamma = gamma_exact(g, None).unwrap().gamma;
        let all = enumerate_maximal_matchings(g).unwrap();
        let min = all.iter().map(Matching::len).min();
        if min != Some(gamma) || gamma_lower_bound(g) > gamma || all.iter().any(|m| !maximal(g, m)) {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{} graphs with n <= 10, {failures} failures", graphs.len()),
    )
}

fn round_trip(corpus: &[Graph]) -> Outcome {
    let mut graphs: Vec<Graph> = corpus.to_vec();
    graphs.extend(Named::samples().into_iter().map(|n| gen_named(n).unwrap()));
    graphs.extend((1..=20).map(|k| gen_gk(k).unwrap().graph));
    let failures = graphs
        .iter()
        .filter(|g| parse_graph6(&write_graph6(g)).ok().as_ref() != Some(*g))
        .count();
    outcome(failures == 0, format!("{} graphs, {failures} mismatches", graphs.len()))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let corpus = corpus();
    let criteria: Vec<Criterion> = vec![
        ("exhaustive soundness, n <= 7", Box::new(|| exhaustive_soundness(&corpus))),
        ("equality only at K3,3", Box::new(|| equality_characterization(&corpus))),
        ("extremal chain family", Box::new(extremal_family)),
        ("known values", Box::new(known_values)),
        ("approximation ratio", Box::new(approximation_ratio)),
        ("randomized soundness and rule coverage", Box::new(randomized_soundness)),
        ("pendant avoidance", Box::new(pendant_avoidance)),
        ("quadratic running time", Box::new(complexity)),
        ("oracle self-consistency", Box::new(|| oracle_consistency(&corpus))),
        ("graph6 round trip", Box::new(|| round_trip(&corpus))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        failed += !o.ok as usize;
        println!(
            "criterion {:>2} {} - {name}: {} ({:.1}s)",
            i + 1,
            if o.ok { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

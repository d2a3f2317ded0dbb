//! Candidate reductions for each local configuration.
//!
//! Each generator inspects the structure around its anchor, decides which
//! case applies, and lists the plans for that case in a fixed order. Where
//! several labellings are symmetric, all of them are listed; the caller takes
//! the first admissible one.

use crate::graph::{Edge, Graph, VertexId};

use super::plan::{Ctx, Plan};
use super::recipe::{Branch, Recipe};
use super::{AdjCase, Deg3Case, FinishCase, Rule};

fn e(a: VertexId, b: VertexId) -> Edge {
    Edge::new(a, b)
}

/// Neighbours of `x` other than those in `skip`.
fn others(g: &Graph, x: VertexId, skip: &[VertexId]) -> Vec<VertexId> {
    g.neighbors(x).iter().copied().filter(|y| !skip.contains(y)).collect()
}

fn other_of(pair: &[VertexId], x: VertexId) -> VertexId {
    if pair[0] == x {
        pair[1]
    } else {
        pair[0]
    }
}

fn first_admissible(ctx: &Ctx<'_>, plans: Vec<Plan>) -> Option<Plan> {
    plans.into_iter().find(|p| ctx.admissible(p))
}

/// Degree-one reduction anchored at `anchor` if given, else at each pendant
/// of `comp` in id order. The pendant's neighbour `v` is matched to a
/// neighbour `w` of degree at least two; every pendant hanging off `v` or `w`
/// goes with them.
pub(crate) fn degree1(ctx: &Ctx<'_>, comp: &[VertexId], anchor: Option<VertexId>) -> Option<Plan> {
    let g = ctx.g;
    let pendants: Vec<VertexId> = match anchor {
        Some(a) => vec![a],
        None => comp.iter().copied().filter(|&x| g.degree(x) == 1).collect(),
    };
    for u in pendants {
        let v = g.neighbors(u)[0];
        for &w in g.neighbors(v) {
            if w == u || g.degree(w) < 2 {
                continue;
            }
            let mut deleted = vec![v, w];
            for &x in g.neighbors(v).iter().chain(g.neighbors(w)) {
                if g.degree(x) == 1 && !deleted.contains(&x) {
                    deleted.push(x);
                }
            }
            let plan = Plan::delete(Rule::Degree1, &deleted, &[e(v, w)]);
            if ctx.admissible(&plan) {
                return Some(plan);
            }
        }
    }
    None
}

/// Two adjacent degree-two vertices.
pub(crate) fn adjacent_deg2(ctx: &Ctx<'_>, comp: &[VertexId]) -> Option<Plan> {
    let g = ctx.g;
    for &u1 in comp {
        if g.degree(u1) != 2 {
            continue;
        }
        for &u2 in g.neighbors(u1) {
            if g.degree(u2) == 2 && u1 < u2 {
                if let Some(p) = first_admissible(ctx, adjacent_deg2_plans(ctx, u1, u2)) {
                    return Some(p);
                }
            }
        }
    }
    None
}

pub(crate) fn adjacent_deg2_plans(ctx: &Ctx<'_>, u1: VertexId, u2: VertexId) -> Vec<Plan> {
    let g = ctx.g;
    let v1 = others(g, u1, &[u2])[0];
    let v2 = others(g, u2, &[u1])[0];
    let mut plans = Vec::new();
    if v1 == v2 {
        plans.push(Plan::delete(Rule::AdjDeg2(AdjCase::SharedNeighbour), &[u1, u2, v1], &[e(u1, v1)]));
        return plans;
    }
    if g.has_edge(v1, v2) {
        for (ua, a, ub, b) in [(u1, v1, u2, v2), (u2, v2, u1, v1)] {
            for w in others(g, a, &[ua, b]) {
                plans.push(Plan::delete(
                    Rule::AdjDeg2(AdjCase::AdjacentEnds),
                    &[u1, u2, v1, v2, w],
                    &[e(ub, b), e(a, w)],
                ));
            }
        }
        return plans;
    }
    // Contracting u1v1 and u2v2 keeps the component connected, so the
    // contracted graph is cubic exactly when everything else has degree 3.
    let rest_full = ctx.n3 == ctx.n - 2;
    if !rest_full {
        plans.push(Plan::new(
            Rule::AdjDeg2(AdjCase::Contraction),
            &[u1, u2],
            &[e(v1, v2)],
            Recipe::single(vec![
                Branch::swap(e(v1, v2), &[e(u1, v1), e(u2, v2)]),
                Branch::always(&[e(u1, u2)]),
            ]),
        ));
        return plans;
    }
    let s1 = others(g, v1, &[u1]);
    let s2 = others(g, v2, &[u2]);
    let common: Vec<VertexId> = s1.iter().copied().filter(|w| s2.contains(w)).collect();
    if !common.is_empty() {
        for w in common {
            plans.push(Plan::delete(
                Rule::AdjDeg2(AdjCase::CommonNeighbour),
                &[u1, u2, v1, v2, w],
                &[e(u1, v1), e(w, v2)],
            ));
        }
        return plans;
    }
    let sides = [(u1, v1, &s1, u2, v2, &s2), (u2, v2, &s2, u1, v1, &s1)];
    let mut internal = false;
    for &(ua, va, sa, ub, _, _) in &sides {
        if g.has_edge(sa[0], sa[1]) {
            internal = true;
            plans.push(Plan::delete(
                Rule::AdjDeg2(AdjCase::InternalEdge),
                &[ua, ub, va, sa[0], sa[1]],
                &[e(ua, ub), e(sa[0], sa[1])],
            ));
        }
    }
    if internal {
        return plans;
    }
    let cross = s1.iter().any(|&a| s2.iter().any(|&b| g.has_edge(a, b)));
    let case = if cross { AdjCase::CrossEdge } else { AdjCase::Tree };
    // Delete {ua, ub, va, vb, w} and join a neighbour x of w to a vertex t on
    // the far side. With the edge xt in M' it is swapped for x-w, t-vb and
    // ua-va; otherwise va-w and ub-vb are added.
    for &(ua, va, sa, ub, vb, sb) in &sides {
        for &w in sa.iter() {
            if cross {
                // the cross edge must hang off the other vertex of this side
                let keep = other_of(sa, w);
                if !sb.iter().any(|&t| g.has_edge(keep, t)) {
                    continue;
                }
            }
            for x in others(g, w, &[va]) {
                for &t in sb.iter() {
                    if x == t || g.has_edge(x, t) {
                        continue;
                    }
                    plans.push(Plan::new(
                        Rule::AdjDeg2(case),
                        &[ua, ub, va, vb, w],
                        &[e(x, t)],
                        Recipe::single(vec![
                            Branch::swap(e(x, t), &[e(x, w), e(t, vb), e(ua, va)]),
                            Branch::always(&[e(va, w), e(ub, vb)]),
                        ]),
                    ));
                }
            }
        }
    }
    plans
}

/// A degree-two vertex with two degree-three neighbours.
pub(crate) fn deg2_two_deg3(ctx: &Ctx<'_>, comp: &[VertexId]) -> Option<Plan> {
    let g = ctx.g;
    for &u in comp {
        if g.degree(u) != 2 {
            continue;
        }
        let nb = g.neighbors(u);
        if g.degree(nb[0]) == 3 && g.degree(nb[1]) == 3 {
            if let Some(p) = first_admissible(ctx, deg2_two_deg3_plans(ctx, u)) {
                return Some(p);
            }
        }
    }
    None
}

pub(crate) fn deg2_two_deg3_plans(ctx: &Ctx<'_>, u: VertexId) -> Vec<Plan> {
    let g = ctx.g;
    let (v1, v2) = (g.neighbors(u)[0], g.neighbors(u)[1]);
    if g.has_edge(v1, v2) {
        return vec![Plan::delete(
            Rule::Deg2TwoDeg3(Deg3Case::AdjacentNeighbours),
            &[u, v1, v2],
            &[e(v1, v2)],
        )];
    }
    let s1 = others(g, v1, &[u]);
    let s2 = others(g, v2, &[u]);
    let common: Vec<VertexId> = s1.iter().copied().filter(|w| s2.contains(w)).collect();
    if !common.is_empty() {
        return case1(g, u, v1, v2, &s1, &s2, &common);
    }
    let internal1 = g.has_edge(s1[0], s1[1]);
    let internal2 = g.has_edge(s2[0], s2[1]);
    if internal1 || internal2 {
        return case2_1(g, u, v1, v2, &s1, &s2, internal1, internal2);
    }
    let cross: Vec<(VertexId, VertexId)> = s1
        .iter()
        .flat_map(|&a| s2.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| g.has_edge(a, b))
        .collect();
    if !cross.is_empty() {
        return case2_2(g, u, v1, v2, &s1, &s2, &cross);
    }
    let mut plans = case2_3_1(g, u, (v1, &s1), (v2, &s2));
    if plans.is_empty() {
        plans = case2_3_2(g, u, (v1, &s1), (v2, &s2));
    }
    plans
}

/// `v1` and `v2` share a neighbour `c` besides `u`.
fn case1(
    g: &Graph,
    u: VertexId,
    v1: VertexId,
    v2: VertexId,
    s1: &[VertexId],
    s2: &[VertexId],
    common: &[VertexId],
) -> Vec<Plan> {
    let rule = Rule::Deg2TwoDeg3(Deg3Case::Case1);
    let mut plans = Vec::new();
    for &c in common {
        let w1 = other_of(s1, c);
        let w2 = other_of(s2, c);
        for (va, wa, vb) in [(v1, w1, v2), (v2, w2, v1)] {
            plans.push(Plan::delete(rule, &[u, va, vb, wa, c], &[e(va, wa), e(vb, c)]));
        }
        let Some(&x) = others(g, c, &[v1, v2]).first() else {
            continue;
        };
        if w1 != w2 && g.has_edge(x, w1) && g.has_edge(x, w2) && !g.has_edge(w1, w2) {
            for y in others(g, w1, &[v1, x, w2]) {
                plans.push(Plan::delete(
                    rule,
                    &[u, v1, v2, w1, c, w2, x, y],
                    &[e(w1, y), e(v1, c), e(v2, w2)],
                ));
            }
        }
        // join c's third neighbour x to the far side's w
        for (va, wa, vb, wb) in [(v1, w1, v2, w2), (v2, w2, v1, w1)] {
            if x == wa || x == wb || g.has_edge(x, wb) {
                continue;
            }
            plans.push(Plan::new(
                rule,
                &[u, va, vb, wa, c],
                &[e(x, wb)],
                Recipe::single(vec![
                    Branch::swap(e(x, wb), &[e(x, c), e(vb, wb), e(va, wa)]),
                    Branch::always(&[e(vb, c), e(va, wa)]),
                ]),
            ));
        }
    }
    plans
}

/// One side's two outer neighbours are adjacent.
#[allow(clippy::too_many_arguments)]
fn case2_1(
    g: &Graph,
    u: VertexId,
    v1: VertexId,
    v2: VertexId,
    s1: &[VertexId],
    s2: &[VertexId],
    internal1: bool,
    internal2: bool,
) -> Vec<Plan> {
    let rule = Rule::Deg2TwoDeg3(Deg3Case::Case21);
    let mut plans = Vec::new();
    let mut sides = Vec::new();
    if internal1 {
        sides.push((v1, s1, v2, s2));
    }
    if internal2 {
        sides.push((v2, s2, v1, s1));
    }
    for &(va, sa, vb, sb) in &sides {
        for &p in sa {
            for &q in sb {
                if g.has_edge(p, q) {
                    let w = other_of(sa, p);
                    plans.push(Plan::delete(rule, &[u, va, vb, w, p, q], &[e(va, w), e(vb, q)]));
                }
            }
        }
        plans.push(Plan::delete(rule, &[u, va, vb, sa[0], sa[1]], &[e(sa[0], sa[1]), e(u, vb)]));
        for &own in sa {
            let mate = other_of(sa, own);
            let Some(&x) = others(g, own, &[va, mate]).first() else {
                continue;
            };
            for &t in sb {
                if x == t || g.has_edge(x, t) {
                    continue;
                }
                plans.push(Plan::new(
                    rule,
                    &[u, va, vb, sa[0], sa[1]],
                    &[e(x, t)],
                    Recipe::single(vec![
                        Branch::swap(e(x, t), &[e(x, own), e(vb, t), e(va, mate)]),
                        Branch::always(&[e(sa[0], sa[1]), e(u, vb)]),
                    ]),
                ));
            }
        }
    }
    plans
}

/// No edge inside either side, but some edge across.
fn case2_2(
    g: &Graph,
    u: VertexId,
    v1: VertexId,
    v2: VertexId,
    s1: &[VertexId],
    s2: &[VertexId],
    cross: &[(VertexId, VertexId)],
) -> Vec<Plan> {
    let rule = Rule::Deg2TwoDeg3(Deg3Case::Case22);
    let mut plans = Vec::new();
    for &(w12, w21) in cross {
        let w11 = other_of(s1, w12);
        let w22 = other_of(s2, w21);
        let v0 = [u, v1, v2, w12, w21];
        plans.push(Plan::delete(rule, &v0, &[e(v1, w12), e(v2, w21)]));
        let x12 = others(g, w12, &[v1, w21]).first().copied();
        let x21 = others(g, w21, &[v2, w12]).first().copied();
        if let (Some(x12), Some(x21)) = (x12, x21) {
            if g.has_edge(w11, w22) && g.has_edge(w11, x12) && g.has_edge(w22, x21) {
                for y in others(g, x21, &[w21, w22]) {
                    plans.push(Plan::delete(
                        rule,
                        &[u, v1, v2, w11, w12, w21, w22, x12, x21, y],
                        &[e(w11, w22), e(u, v2), e(w12, x12), e(x21, y)],
                    ));
                }
            }
        }
        let fallback = Branch::always(&[e(v1, w12), e(v2, w21)]);
        let mut candidates = vec![(e(w11, w22), vec![e(v1, w11), e(v2, w22), e(w12, w21)])];
        if let Some(x12) = x12.filter(|&x| x != w11) {
            candidates.push((e(w11, x12), vec![e(v1, w11), e(x12, w12), e(v2, w21)]));
        }
        if let Some(x21) = x21.filter(|&x| x != w22) {
            candidates.push((e(w22, x21), vec![e(v2, w22), e(x21, w21), e(v1, w12)]));
        }
        for (add, swapped) in candidates {
            if g.has_edge(add.u(), add.v()) {
                continue;
            }
            plans.push(Plan::new(
                rule,
                &v0,
                &[add],
                Recipe::single(vec![Branch::swap(add, &swapped), fallback.clone()]),
            ));
        }
    }
    plans
}

/// The two outer neighbours on one side have two further common neighbours.
fn case2_3_1(g: &Graph, u: VertexId, side1: (VertexId, &[VertexId]), side2: (VertexId, &[VertexId])) -> Vec<Plan> {
    let rule = Rule::Deg2TwoDeg3(Deg3Case::Case231);
    let mut plans = Vec::new();
    for ((va, sa), (vb, sb)) in [(side1, side2), (side2, side1)] {
        let (a0, a1) = (sa[0], sa[1]);
        let xs: Vec<VertexId> = others(g, a0, &[va]).into_iter().filter(|&x| g.has_edge(a1, x)).collect();
        if xs.len() != 2 {
            continue;
        }
        let (mut x1, mut x2) = (xs[0], xs[1]);
        let (d1, d2) = (g.degree(x1), g.degree(x2));
        if g.has_edge(x1, x2) || (d1 == 2 && d2 == 2) {
            continue;
        }
        if d1 == 2 || d2 == 2 {
            if d1 == 2 {
                std::mem::swap(&mut x1, &mut x2);
            }
            for (wp, wq) in [(a0, a1), (a1, a0)] {
                for &wb in sb {
                    plans.push(Plan::delete(
                        rule,
                        &[u, va, vb, a0, a1, wb, x1, x2],
                        &[e(wp, x1), e(va, wq), e(vb, wb)],
                    ));
                }
            }
            continue;
        }
        let y1 = others(g, x1, &[a0, a1])[0];
        let y2 = others(g, x2, &[a0, a1])[0];
        if y1 != y2 {
            plans.push(Plan::delete(
                rule,
                &[u, va, a0, a1, x1, x2, y1, y2],
                &[e(u, va), e(x1, y1), e(x2, y2)],
            ));
            continue;
        }
        let y = y1;
        if g.has_edge(u, y) || y == vb {
            continue;
        }
        for (w11, w12) in [(a0, a1), (a1, a0)] {
            for (p1, p2) in [(x1, x2), (x2, x1)] {
                plans.push(Plan::new(
                    rule,
                    &[va, w11, w12, p1, p2],
                    &[e(u, y)],
                    Recipe::single(vec![
                        Branch::swap(e(u, y), &[e(u, va), e(p1, y), e(w12, p2)]),
                        Branch::when_contains(e(u, vb), &[e(w11, p1), e(w12, p2)]),
                        Branch::always(&[e(va, w11), e(w12, p2)]),
                    ]),
                ));
            }
        }
    }
    plans
}

/// Neither side has a triple common neighbourhood.
fn case2_3_2(g: &Graph, u: VertexId, side1: (VertexId, &[VertexId]), side2: (VertexId, &[VertexId])) -> Vec<Plan> {
    let rule = Rule::Deg2TwoDeg3(Deg3Case::Case232);
    let mut plans = Vec::new();
    for ((va, sa), (vb, sb)) in [(side1, side2), (side2, side1)] {
        if g.degree(sa[0]) != 2 || g.degree(sa[1]) != 2 {
            continue;
        }
        let x0 = others(g, sa[0], &[va])[0];
        let x1 = others(g, sa[1], &[va])[0];
        if x0 == x1 {
            plans.push(Plan::delete(rule, &[u, va, sa[0], sa[1], x0], &[e(u, va), e(sa[1], x0)]));
            continue;
        }
        for (keep, drop, xd) in [(sa[0], sa[1], x1), (sa[1], sa[0], x0)] {
            for &wb in sb {
                plans.push(Plan::new(
                    rule,
                    &[u, va, vb, drop, wb],
                    &[e(keep, xd)],
                    Recipe::single(vec![
                        Branch::swap(e(keep, xd), &[e(va, keep), e(drop, xd), e(vb, wb)]),
                        Branch::always(&[e(va, drop), e(vb, wb)]),
                    ]),
                ));
            }
        }
    }
    if !plans.is_empty() {
        return plans;
    }
    for ((va, sa), (vb, sb)) in [(side1, side2), (side2, side1)] {
        for &w12 in sa.iter().filter(|&&w| g.degree(w) == 3) {
            for &w21 in sb.iter().filter(|&&w| g.degree(w) == 3) {
                let labels = Case232Labels {
                    u,
                    v1: va,
                    v2: vb,
                    w11: other_of(sa, w12),
                    w12,
                    w21,
                    w22: other_of(sb, w21),
                };
                plans.extend(q_pair_plans(g, &labels));
            }
        }
    }
    plans
}

/// Vertex labels of the final configuration with degree-three `w12`, `w21`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Case232Labels {
    pub u: VertexId,
    pub v1: VertexId,
    pub v2: VertexId,
    pub w11: VertexId,
    pub w12: VertexId,
    pub w21: VertexId,
    pub w22: VertexId,
}

/// One plan per admissible `(q1, q2)` pairing, in id order.
pub(crate) fn q_pair_plans(g: &Graph, l: &Case232Labels) -> Vec<Plan> {
    let rule = Rule::Deg2TwoDeg3(Deg3Case::Case232);
    let mut plans = Vec::new();
    for q1 in others(g, l.w12, &[l.v1]) {
        if q1 == l.w11 || g.has_edge(l.w11, q1) {
            continue;
        }
        for q2 in others(g, l.w21, &[l.v2]) {
            if q2 == l.w22 || g.has_edge(l.w22, q2) {
                continue;
            }
            let (a, b) = (e(l.w11, q1), e(l.w22, q2));
            plans.push(Plan::new(
                rule,
                &[l.u, l.v1, l.v2, l.w12, l.w21],
                &[a, b],
                Recipe {
                    clauses: vec![
                        vec![
                            Branch::swap(a, &[e(l.v1, l.w11), e(l.w12, q1)]),
                            Branch::always(&[e(l.v1, l.w12)]),
                        ],
                        vec![
                            Branch::swap(b, &[e(l.v2, l.w22), e(l.w21, q2)]),
                            Branch::always(&[e(l.v2, l.w21)]),
                        ],
                    ],
                },
            ));
        }
    }
    plans
}

/// Cubic component: match two adjacent vertices.
pub(crate) fn cubic_finish(ctx: &Ctx<'_>, comp: &[VertexId]) -> Option<Plan> {
    let g = ctx.g;
    for &u1 in comp {
        for &u2 in g.neighbors(u1) {
            if let Some(p) = first_admissible(ctx, cubic_finish_plans(g, u1, u2)) {
                return Some(p);
            }
        }
    }
    None
}

pub(crate) fn cubic_finish_plans(g: &Graph, u1: VertexId, u2: VertexId) -> Vec<Plan> {
    let s1 = others(g, u1, &[u2]);
    let s2 = others(g, u2, &[u1]);
    if s1.iter().any(|w| s2.contains(w)) {
        return vec![Plan::delete(
            Rule::CubicFinish(FinishCase::CommonNeighbour),
            &[u1, u2],
            &[e(u1, u2)],
        )];
    }
    let mut plans = Vec::new();
    for &a in &s1 {
        for &b in &s2 {
            if !g.has_edge(a, b) {
                plans.push(Plan::new(
                    Rule::CubicFinish(FinishCase::Cross),
                    &[u1, u2],
                    &[e(a, b)],
                    Recipe::single(vec![
                        Branch::swap(e(a, b), &[e(u1, a), e(u2, b)]),
                        Branch::always(&[e(u1, u2)]),
                    ]),
                ));
            }
        }
    }
    plans
}

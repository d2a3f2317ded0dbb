//! Bridges.
//!
//! Inside the main loop a bridge `u0u1` is handled by one of three single
//! steps. Matching `u_i` to a neighbour `w` on its own side dominates the
//! bridge and leaves the far side intact (the pendant-avoiding solution of
//! that side plus the far side's own solution). Matching the bridge itself
//! leaves both sides with their endpoint removed. The step leaving the
//! smallest potential wins.
//!
//! [`solve_bridge_case`] is the standalone form that solves every piece and
//! compares the assembled matchings directly.

use crate::graph::{Edge, Graph, VertexId};
use crate::matching::{bound_report, is_maximal_matching, Matching};

use super::plan::{Ctx, Plan};
use super::{solve_all, solve_avoiding, solve_with, BridgeKind, PendantConstraint, Rule, SolveError, SolverOptions};

fn candidates(g: &Graph, bridge: Edge) -> Vec<Plan> {
    let (u0, u1) = (bridge.u(), bridge.v());
    let mut plans = Vec::new();
    for (kind, ui, uo) in [(BridgeKind::Pendant0, u0, u1), (BridgeKind::Pendant1, u1, u0)] {
        for &w in g.neighbors(ui) {
            if w != uo {
                plans.push(Plan::delete(Rule::Bridge(kind), &[ui, w], &[Edge::new(ui, w)]));
            }
        }
    }
    plans.push(Plan::delete(Rule::Bridge(BridgeKind::Split), &[u0, u1], &[bridge]));
    plans
}

/// Best single step for the lowest bridge of the component, if any step
/// pays for itself.
pub(crate) fn bridge_step(ctx: &Ctx<'_>, root: VertexId) -> Option<Plan> {
    let mut bridges = ctx.g.bridges_in_component(root);
    bridges.sort_unstable();
    let phi = ctx.phi();
    for bridge in bridges {
        let mut best: Option<(i64, Plan)> = None;
        for plan in candidates(ctx.g, bridge) {
            let Some(after) = ctx.phi_after(&plan) else {
                continue;
            };
            let budget = plan.recipe.budget() as i64;
            if phi - after < budget {
                continue;
            }
            let total = after + budget;
            if best.as_ref().is_none_or(|(t, _)| total < *t) {
                best = Some((total, plan));
            }
        }
        if let Some((_, plan)) = best {
            return Some(plan);
        }
    }
    None
}

/// Splits `g` at `bridge`, solves the pieces, and returns the smallest of
/// the assembled maximal matchings that fits the bound of `g`.
///
/// Requires a connected graph of minimum degree at least two.
pub fn solve_bridge_case(g: &Graph, bridge: Edge) -> Result<Matching, SolveError> {
    let report = bound_report(g).map_err(|_| SolveError::Disconnected)?;
    if g.vertices().any(|v| g.degree(v) < 2) {
        return Err(SolveError::Precondition("minimum degree below two".into()));
    }
    if !g.find_bridges().contains(&bridge) {
        return Err(SolveError::Precondition(format!("{bridge} is not a bridge")));
    }
    let opts = SolverOptions::default();
    let ends = [bridge.u(), bridge.v()];
    let mut cut = g.clone();
    cut.remove_edge(ends[0], ends[1]).expect("bridge present");
    let sides: Vec<Vec<VertexId>> = ends.iter().map(|&x| cut.component_of(x)).collect();
    let side_graphs: Vec<Graph> = sides.iter().map(|s| cut.induced(s)).collect();

    let mut whole = Vec::with_capacity(2);
    for gi in &side_graphs {
        whole.push(solve_with(gi, None, &opts)?.matching);
    }
    let mut found: Vec<Matching> = Vec::new();
    for i in 0..2 {
        // H_i: side i plus the far endpoint hanging off u_i
        let mut hv = sides[i].clone();
        hv.push(ends[1 - i]);
        let h = g.induced(&hv);
        let c = PendantConstraint::new(&h, ends[1 - i])?;
        let mi = solve_avoiding(&h, c)?.matching;
        found.push(mi.union(&whole[1 - i]));
    }
    let residues: Vec<i64> = side_graphs
        .iter()
        .map(|gi| (4 * gi.n() as i64 - gi.m() as i64).rem_euclid(6))
        .collect();
    if residues.iter().all(|&r| r == 0) {
        let mut m = Matching::new();
        for (i, gi) in side_graphs.iter().enumerate() {
            let fi = gi.without_vertices(&[ends[i]]).expect("endpoint present");
            if fi.n() > 0 {
                m = m.union(&solve_all(&fi)?.matching);
            }
        }
        m.insert(bridge);
        found.push(m);
    }
    found
        .into_iter()
        .filter(|m| is_maximal_matching(g, m) && report.admits(m.len()))
        .min_by_key(Matching::len)
        .ok_or_else(|| SolveError::violation("no bridge candidate meets the bound", Vec::new()))
}

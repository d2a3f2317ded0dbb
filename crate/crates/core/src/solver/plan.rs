//! Candidate reductions and the checks that admit one.
//!
//! A plan is admitted when the reduced graph is subcubic, has no cubic
//! component, and the potential drops by at least the recipe's budget. The
//! potential of a component is `floor(lb6 / 6)`. A cheap local estimate of
//! the drop is tried first; only when it is not enough are the components of
//! the reduced graph scanned in full.

use std::collections::{HashSet, VecDeque};

use crate::graph::{Edge, Graph, VertexId};

use super::recipe::{EdgeRole, Recipe};
use super::{ReductionStep, Rule};

/// Largest vertex set a single step may delete.
pub const MAX_DELETED: usize = 10;

#[derive(Clone, Debug)]
pub(crate) struct Plan {
    pub rule: Rule,
    pub deleted: Vec<VertexId>,
    pub added: Vec<Edge>,
    pub recipe: Recipe,
}

impl Plan {
    pub fn new(rule: Rule, deleted: &[VertexId], added: &[Edge], recipe: Recipe) -> Self {
        Plan {
            rule,
            deleted: deleted.to_vec(),
            added: added.to_vec(),
            recipe,
        }
    }

    /// Plain deletion whose extension adds `matching`.
    pub fn delete(rule: Rule, deleted: &[VertexId], matching: &[Edge]) -> Self {
        Plan::new(rule, deleted, &[], Recipe::fixed(matching))
    }

    pub fn into_step(self) -> ReductionStep {
        let mut deleted = self.deleted;
        deleted.sort_unstable();
        ReductionStep {
            rule: self.rule,
            deleted,
            added: self.added,
            extension: self.recipe,
        }
    }
}

/// The component being reduced, with its census.
pub(crate) struct Ctx<'a> {
    pub g: &'a Graph,
    pub n: usize,
    pub m: usize,
    pub n1: usize,
    /// Vertices of degree three.
    pub n3: usize,
    pub lb6: i64,
}

impl<'a> Ctx<'a> {
    pub fn new(g: &'a Graph, comp: &[VertexId]) -> Self {
        let n = comp.len();
        let mut deg_sum = 0;
        let mut n1 = 0;
        let mut n3 = 0;
        for &v in comp {
            let d = g.degree(v);
            deg_sum += d;
            n1 += (d == 1) as usize;
            n3 += (d == 3) as usize;
        }
        let cubic = n3 == n;
        let m = deg_sum / 2;
        let k2 = n == 2 && m == 1;
        let lb6 = 4 * n as i64 - m as i64 + 2 * cubic as i64 + k2 as i64 - n1 as i64;
        Ctx { g, n, m, n1, n3, lb6 }
    }

    pub fn phi(&self) -> i64 {
        self.lb6.div_euclid(6)
    }

    /// Admits `plan` if it is well formed and pays for itself.
    pub fn admissible(&self, plan: &Plan) -> bool {
        let Some(ov) = self.overlay(plan) else {
            return false;
        };
        if !ov.cubic_free() {
            return false;
        }
        let budget = plan.recipe.budget() as i64;
        if self.lb6 - ov.local_lb6() >= 6 * budget {
            return true;
        }
        self.phi() - ov.exact_phi() >= budget
    }

    /// Potential left after `plan`, or `None` if the plan is not a valid
    /// cubic-free reduction.
    pub fn phi_after(&self, plan: &Plan) -> Option<i64> {
        let ov = self.overlay(plan)?;
        ov.cubic_free().then(|| ov.exact_phi())
    }

    fn overlay<'p>(&'p self, plan: &'p Plan) -> Option<Overlay<'p>> {
        let g = self.g;
        let mut deleted = plan.deleted.clone();
        deleted.sort_unstable();
        deleted.dedup();
        if deleted.len() != plan.deleted.len()
            || deleted.is_empty()
            || deleted.len() > MAX_DELETED
            || deleted.iter().any(|&v| !g.contains(v))
            || plan.added.len() > 2
        {
            return None;
        }
        let ov = Overlay {
            ctx: self,
            deleted,
            added: &plan.added,
        };
        for (i, &e) in plan.added.iter().enumerate() {
            if plan.added[..i].contains(&e)
                || g.has_edge(e.u(), e.v())
                || [e.u(), e.v()].iter().any(|&x| !ov.alive(x) || ov.degree(x) > 3)
            {
                return None;
            }
        }
        let in_reduced = |e: Edge| plan.added.contains(&e) || (g.has_edge(e.u(), e.v()) && ov.alive(e.u()) && ov.alive(e.v()));
        for (e, role) in plan.recipe.edges() {
            let ok = match role {
                EdgeRole::Original => g.has_edge(e.u(), e.v()),
                EdgeRole::Reduced => in_reduced(e),
            };
            if !ok {
                debug_assert!(false, "{:?}: recipe edge {e} misplaced", plan.rule);
                return None;
            }
        }
        if plan.added.is_empty() && plan.recipe.is_unconditional() && !ov.dominates(&plan.recipe.fixed_edges()) {
            debug_assert!(false, "{:?}: fixed extension does not dominate", plan.rule);
            return None;
        }
        Some(ov)
    }
}

/// The reduced graph, viewed without copying.
struct Overlay<'a> {
    ctx: &'a Ctx<'a>,
    deleted: Vec<VertexId>,
    added: &'a [Edge],
}

impl Overlay<'_> {
    fn is_deleted(&self, x: VertexId) -> bool {
        self.deleted.binary_search(&x).is_ok()
    }

    fn alive(&self, x: VertexId) -> bool {
        self.ctx.g.contains(x) && !self.is_deleted(x)
    }

    fn neighbors(&self, x: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.ctx
            .g
            .neighbors(x)
            .iter()
            .copied()
            .filter(|&y| !self.is_deleted(y))
            .chain(self.added.iter().filter_map(move |e| e.other(x)))
    }

    fn degree(&self, x: VertexId) -> usize {
        self.neighbors(x).count()
    }

    /// Surviving neighbours of the deleted set, plus added-edge endpoints.
    fn touched(&self) -> Vec<VertexId> {
        let mut t: Vec<VertexId> = self
            .deleted
            .iter()
            .flat_map(|&x| self.ctx.g.neighbors(x).iter().copied())
            .filter(|&y| !self.is_deleted(y))
            .chain(self.added.iter().flat_map(|e| [e.u(), e.v()]))
            .collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    /// A fixed set of matching edges inside the deleted set must dominate
    /// every edge that touches it.
    fn dominates(&self, matching: &[Edge]) -> bool {
        let mut covered: Vec<VertexId> = Vec::new();
        for e in matching {
            for x in [e.u(), e.v()] {
                if !self.is_deleted(x) || covered.contains(&x) {
                    return false;
                }
                covered.push(x);
            }
        }
        self.deleted.iter().all(|&x| {
            covered.contains(&x)
                || self
                    .ctx
                    .g
                    .neighbors(x)
                    .iter()
                    .all(|y| covered.contains(y))
        })
    }

    fn cubic_free(&self) -> bool {
        let mut settled: HashSet<VertexId> = HashSet::new();
        for t in self.touched() {
            if settled.contains(&t) || self.degree(t) < 3 {
                continue;
            }
            // breadth first, so a nearby deficient vertex ends the search early
            let mut seen = HashSet::from([t]);
            let mut queue = VecDeque::from([t]);
            let mut deficient = false;
            while let Some(x) = queue.pop_front() {
                if self.degree(x) < 3 {
                    deficient = true;
                    break;
                }
                for y in self.neighbors(x) {
                    if seen.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
            if !deficient {
                return false;
            }
            settled.extend(seen);
        }
        true
    }

    /// `sum lb6` over the reduced components, assuming none is cubic.
    fn local_lb6(&self) -> i64 {
        let g = self.ctx.g;
        let n = self.ctx.n - self.deleted.len();
        let inside: usize = self
            .deleted
            .iter()
            .map(|&x| g.neighbors(x).iter().filter(|&&y| self.is_deleted(y)).count())
            .sum::<usize>()
            / 2;
        let incident: usize = self.deleted.iter().map(|&x| g.degree(x)).sum::<usize>() - inside;
        let m = self.ctx.m - incident + self.added.len();
        let mut n1 = self.ctx.n1 as i64;
        n1 -= self.deleted.iter().filter(|&&x| g.degree(x) == 1).count() as i64;
        let mut k2: Vec<Edge> = Vec::new();
        for t in self.touched() {
            n1 -= (g.degree(t) == 1) as i64;
            if self.degree(t) == 1 {
                n1 += 1;
                let s = self.neighbors(t).next().expect("degree one");
                if self.degree(s) == 1 {
                    let e = Edge::new(s, t);
                    if !k2.contains(&e) {
                        k2.push(e);
                    }
                }
            }
        }
        4 * n as i64 - m as i64 - n1 + k2.len() as i64
    }

    /// Exact potential of the reduced components by full traversal.
    fn exact_phi(&self) -> i64 {
        let mut seen: HashSet<VertexId> = HashSet::new();
        let mut total = 0;
        for t in self.touched() {
            if !seen.insert(t) {
                continue;
            }
            let (mut n, mut deg_sum, mut n1, mut cubic) = (0i64, 0i64, 0i64, true);
            let mut queue = vec![t];
            while let Some(x) = queue.pop() {
                let d = self.degree(x);
                n += 1;
                deg_sum += d as i64;
                n1 += (d == 1) as i64;
                cubic &= d == 3;
                for y in self.neighbors(x) {
                    if seen.insert(y) {
                        queue.push(y);
                    }
                }
            }
            let m = deg_sum / 2;
            let k2 = (n == 2 && m == 1) as i64;
            let lb6 = 4 * n - m + 2 * cubic as i64 + k2 - n1;
            total += lb6.div_euclid(6);
        }
        total
    }
}

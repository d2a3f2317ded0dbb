//! Reduction-based solver with a bounded output size.
//!
//! The solver keeps one working graph. Each step picks a component, deletes
//! a small vertex set from it, possibly adds up to two edges, and records how
//! to extend a maximal matching of the result back to the graph before the
//! step. Components of at most [`SolverOptions::base_threshold`] vertices are
//! solved exactly. Once the graph is empty the recorded extensions are
//! unwound in reverse order, starting from the empty matching.
//!
//! Every step is admitted only if it lowers the potential `floor(lb6 / 6)`
//! summed over components by at least the number of edges its extension can
//! add, so the final matching never exceeds `floor(lb6 / 6)` of the input
//! (3 for `K3,3`).

mod bridge;
mod plan;
mod recipe;
mod rules;

use std::fmt;
use std::time::Instant;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, SmallPattern, VertexId};
use crate::matching::{bound_report, bound_report_components, component_limit, is_maximal, BoundReport, Matching};
use crate::oracle::{gamma_exact, gamma_exact_avoiding};

pub use bridge::solve_bridge_case;
pub use plan::MAX_DELETED;
pub use recipe::{Branch, Condition, Recipe};
pub use rules::Case232Labels;

use plan::{Ctx, Plan};

/// Default size up to which components go to the exact oracle.
pub const DEFAULT_BASE_THRESHOLD: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BridgeKind {
    /// Match `u0` inside its own side; the far side is left whole.
    Pendant0,
    /// Same with the roles of the ends exchanged.
    Pendant1,
    /// Match the bridge itself.
    Split,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdjCase {
    SharedNeighbour,
    AdjacentEnds,
    Contraction,
    CommonNeighbour,
    InternalEdge,
    CrossEdge,
    Tree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Deg3Case {
    AdjacentNeighbours,
    Case1,
    Case21,
    Case22,
    Case231,
    Case232,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FinishCase {
    CommonNeighbour,
    Cross,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    BaseSmall,
    K33Special,
    Degree1,
    Bridge(BridgeKind),
    AdjDeg2(AdjCase),
    Deg2TwoDeg3(Deg3Case),
    CubicFinish(FinishCase),
}

impl Rule {
    pub fn family(self) -> &'static str {
        match self {
            Rule::BaseSmall => "BASE_SMALL",
            Rule::K33Special => "K33_SPECIAL",
            Rule::Degree1 => "DEGREE1",
            Rule::Bridge(_) => "BRIDGE",
            Rule::AdjDeg2(_) => "ADJ_DEG2",
            Rule::Deg2TwoDeg3(_) => "DEG2_TWO_DEG3",
            Rule::CubicFinish(_) => "CUBIC_FINISH",
        }
    }

    pub fn case(self) -> Option<&'static str> {
        Some(match self {
            Rule::BaseSmall | Rule::K33Special | Rule::Degree1 => return None,
            Rule::Bridge(k) => match k {
                BridgeKind::Pendant0 => "pendant0",
                BridgeKind::Pendant1 => "pendant1",
                BridgeKind::Split => "split",
            },
            Rule::AdjDeg2(c) => match c {
                AdjCase::SharedNeighbour => "shared_neighbour",
                AdjCase::AdjacentEnds => "adjacent_ends",
                AdjCase::Contraction => "contraction",
                AdjCase::CommonNeighbour => "common_neighbour",
                AdjCase::InternalEdge => "internal_edge",
                AdjCase::CrossEdge => "cross_edge",
                AdjCase::Tree => "tree",
            },
            Rule::Deg2TwoDeg3(c) => match c {
                Deg3Case::AdjacentNeighbours => "0",
                Deg3Case::Case1 => "1",
                Deg3Case::Case21 => "2.1",
                Deg3Case::Case22 => "2.2",
                Deg3Case::Case231 => "2.3.1",
                Deg3Case::Case232 => "2.3.2",
            },
            Rule::CubicFinish(c) => match c {
                FinishCase::CommonNeighbour => "common_neighbour",
                FinishCase::Cross => "cross",
            },
        })
    }

    /// True for the bridge steps that leave one side whole and match its
    /// endpoint's partner through the pendant-avoiding construction.
    pub fn avoids_pendant(self) -> bool {
        matches!(self, Rule::Bridge(BridgeKind::Pendant0 | BridgeKind::Pendant1))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.case() {
            Some(c) => write!(f, "{}:{}", self.family(), c),
            None => f.write_str(self.family()),
        }
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One applied reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub rule: Rule,
    /// Deleted vertices, sorted.
    pub deleted: Vec<VertexId>,
    /// Edges added to the reduced graph.
    pub added: Vec<Edge>,
    pub extension: Recipe,
}

impl ReductionStep {
    /// Most edges the extension can add.
    pub fn budget(&self) -> usize {
        self.extension.budget()
    }
}

/// A designated degree-one vertex whose only edge must stay unmatched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PendantConstraint {
    pub vertex: VertexId,
    pub forbidden_edge: Edge,
}

impl PendantConstraint {
    pub fn new(g: &Graph, vertex: VertexId) -> Result<Self, SolveError> {
        if g.degree(vertex) != 1 {
            return Err(SolveError::InvalidConstraint(format!("vertex {vertex} does not have degree 1")));
        }
        if g.n() == 2 {
            return Err(SolveError::InvalidConstraint("graph is K2".into()));
        }
        Ok(PendantConstraint {
            vertex,
            forbidden_edge: Edge::new(vertex, g.neighbors(vertex)[0]),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    /// Components with at most this many vertices are solved exactly.
    pub base_threshold: usize,
    /// Replay the trace after solving and check every intermediate matching.
    pub check_steps: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            base_threshold: DEFAULT_BASE_THRESHOLD,
            check_steps: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub message: String,
    pub trace: Vec<ReductionStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("graph is empty or disconnected")]
    Disconnected,
    #[error("graph is not subcubic: {0}")]
    NotSubcubic(GraphError),
    #[error("invalid pendant constraint: {0}")]
    InvalidConstraint(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {}", .0.message)]
    InternalInvariantViolation(Box<Violation>),
}

impl SolveError {
    pub(crate) fn violation(message: impl Into<String>, trace: Vec<ReductionStep>) -> Self {
        SolveError::InternalInvariantViolation(Box::new(Violation {
            message: message.into(),
            trace,
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveCertificate {
    pub matching: Matching,
    pub trace: Vec<ReductionStep>,
    pub bound: BoundReport,
    pub valid: bool,
    /// Input was `K3,3`, where the size bound is 3 instead of `floor(lb)`.
    pub k33_special: bool,
    pub elapsed_ms: f64,
}

impl SolveCertificate {
    pub fn size(&self) -> usize {
        self.matching.len()
    }

    /// True if some step of the trace used a rule of this family.
    pub fn uses(&self, family: &str) -> bool {
        self.trace.iter().any(|s| s.rule.family() == family)
    }
}

/// Maximal matching of a connected subcubic graph within the bound.
pub fn solve(g: &Graph) -> Result<SolveCertificate, SolveError> {
    solve_with(g, None, &SolverOptions::default())
}

/// As [`solve`], never using the constraint's forbidden edge.
pub fn solve_avoiding(g: &Graph, c: PendantConstraint) -> Result<SolveCertificate, SolveError> {
    solve_with(g, Some(c), &SolverOptions::default())
}

/// Solves every component; the bound is summed over components.
pub fn solve_all(g: &Graph) -> Result<SolveCertificate, SolveError> {
    solve_all_with(g, &SolverOptions::default())
}

pub fn solve_all_with(g: &Graph, opts: &SolverOptions) -> Result<SolveCertificate, SolveError> {
    g.validate().map_err(SolveError::NotSubcubic)?;
    let start = Instant::now();
    let (matching, trace) = run(g, None, opts)?;
    let bound = bound_report_components(g);
    certify(g, matching, trace, bound, None, opts, start)
}

/// Solver entry point with an optional pendant constraint and options.
pub fn solve_with(
    g: &Graph,
    constraint: Option<PendantConstraint>,
    opts: &SolverOptions,
) -> Result<SolveCertificate, SolveError> {
    g.validate().map_err(SolveError::NotSubcubic)?;
    let bound = bound_report(g).map_err(|_| SolveError::Disconnected)?;
    if let Some(c) = constraint {
        let fresh = PendantConstraint::new(g, c.vertex)?;
        if fresh != c {
            return Err(SolveError::InvalidConstraint(format!(
                "edge {} is not the edge at {}",
                c.forbidden_edge, c.vertex
            )));
        }
    }
    let start = Instant::now();
    let (matching, trace) = run(g, constraint.map(|c| c.vertex), opts)?;
    certify(g, matching, trace, bound, constraint, opts, start)
}

fn certify(
    g: &Graph,
    matching: Matching,
    trace: Vec<ReductionStep>,
    bound: BoundReport,
    constraint: Option<PendantConstraint>,
    opts: &SolverOptions,
    start: Instant,
) -> Result<SolveCertificate, SolveError> {
    if !is_maximal(g, &matching).unwrap_or(false) {
        return Err(SolveError::violation("result is not a maximal matching", trace));
    }
    if !within_component_limits(g, &matching) {
        return Err(SolveError::violation("result exceeds the size bound", trace));
    }
    if let Some(c) = constraint {
        if matching.contains(c.forbidden_edge) {
            return Err(SolveError::violation("result uses the forbidden edge", trace));
        }
    }
    if opts.check_steps {
        let replayed = replay(g, &trace)?;
        if replayed != matching {
            return Err(SolveError::violation("replay differs from result", trace));
        }
    }
    Ok(SolveCertificate {
        matching,
        k33_special: bound.k33 > 0,
        trace,
        bound,
        valid: true,
        elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
    })
}

fn within_component_limits(g: &Graph, m: &Matching) -> bool {
    let comps = g.connected_components();
    let mut owner = vec![usize::MAX; g.id_bound()];
    for (i, c) in comps.iter().enumerate() {
        for v in c {
            owner[v.index()] = i;
        }
    }
    let mut used = vec![0usize; comps.len()];
    for e in m.iter() {
        used[owner[e.u().index()]] += 1;
    }
    comps.iter().zip(used).all(|(c, k)| {
        let ctx = Ctx::new(g, c);
        let k33 = c.len() == 6 && g.induced(c).is_isomorphic_small(SmallPattern::K33);
        k <= component_limit(ctx.lb6, k33)
    })
}

fn run(g: &Graph, anchor: Option<VertexId>, opts: &SolverOptions) -> Result<(Matching, Vec<ReductionStep>), SolveError> {
    let mut work = g.clone();
    let mut trace: Vec<ReductionStep> = Vec::new();
    let mut anchor = anchor;
    let mut seeds: Vec<VertexId> = g.connected_components().iter().rev().map(|c| c[0]).collect();
    while let Some(seed) = seeds.pop() {
        if !work.contains(seed) {
            continue;
        }
        let comp = work.component_of(seed);
        let here = anchor.filter(|a| comp.binary_search(a).is_ok());
        let step = match select(&work, &comp, here, opts) {
            Ok(s) => s,
            Err(SolveError::InternalInvariantViolation(v)) => {
                return Err(SolveError::violation(v.message, trace));
            }
            Err(e) => return Err(e),
        };
        if here.is_some_and(|a| step.deleted.contains(&a)) {
            anchor = None;
        }
        let mut next: Vec<VertexId> = step
            .deleted
            .iter()
            .flat_map(|&x| work.neighbors(x).iter().copied())
            .chain(step.added.iter().flat_map(|e| [e.u(), e.v()]))
            .filter(|x| step.deleted.binary_search(x).is_err())
            .collect();
        next.sort_unstable_by(|a, b| b.cmp(a));
        next.dedup();
        apply_in_place(&mut work, &step).map_err(|e| SolveError::violation(e.to_string(), trace.clone()))?;
        seeds.extend(next);
        trace.push(step);
    }
    let mut m = Matching::new();
    for step in trace.iter().rev() {
        m = step.extension.apply(&m);
    }
    Ok((m, trace))
}

fn apply_in_place(g: &mut Graph, step: &ReductionStep) -> Result<(), GraphError> {
    g.remove_vertices(&step.deleted)?;
    for e in &step.added {
        g.add_edge(e.u(), e.v())?;
    }
    Ok(())
}

fn base_step(rule: Rule, g: &Graph, comp: &[VertexId], anchor: Option<VertexId>) -> Result<ReductionStep, SolveError> {
    let h = g.induced(comp);
    let res = match anchor {
        Some(a) => gamma_exact_avoiding(&h, Edge::new(a, h.neighbors(a)[0]), None),
        None => gamma_exact(&h, None),
    }
    .map_err(|e| SolveError::violation(format!("exact solver failed on a base component: {e}"), Vec::new()))?;
    let ctx = Ctx::new(g, comp);
    if res.gamma > component_limit(ctx.lb6, rule == Rule::K33Special) {
        return Err(SolveError::violation(
            format!("base component of {} vertices needs {} edges", comp.len(), res.gamma),
            Vec::new(),
        ));
    }
    let edges: Vec<Edge> = res.witness.iter().collect();
    Ok(ReductionStep {
        rule,
        deleted: comp.to_vec(),
        added: Vec::new(),
        extension: Recipe::fixed(&edges),
    })
}

fn select(
    g: &Graph,
    comp: &[VertexId],
    anchor: Option<VertexId>,
    opts: &SolverOptions,
) -> Result<ReductionStep, SolveError> {
    if comp.len() == 6 && g.induced(comp).is_isomorphic_small(SmallPattern::K33) {
        return base_step(Rule::K33Special, g, comp, None);
    }
    if comp.len() <= opts.base_threshold {
        return base_step(Rule::BaseSmall, g, comp, anchor);
    }
    let ctx = Ctx::new(g, comp);
    let plan = match anchor {
        Some(a) => rules::degree1(&ctx, comp, Some(a)),
        None => pick(&ctx, comp),
    };
    match plan {
        Some(p) => Ok(p.into_step()),
        None if comp.len() <= DEFAULT_BASE_THRESHOLD => base_step(Rule::BaseSmall, g, comp, anchor),
        None => Err(SolveError::violation(
            format!("no reduction applies to a component of {} vertices", comp.len()),
            Vec::new(),
        )),
    }
}

/// Rules in priority order; a later rule is consulted only when every plan
/// of the earlier ones was rejected.
fn pick(ctx: &Ctx<'_>, comp: &[VertexId]) -> Option<Plan> {
    if ctx.n1 > 0 {
        if let Some(p) = rules::degree1(ctx, comp, None) {
            return Some(p);
        }
    } else if let Some(p) = bridge::bridge_step(ctx, comp[0]) {
        return Some(p);
    }
    if ctx.n3 < ctx.n {
        rules::adjacent_deg2(ctx, comp).or_else(|| rules::deg2_two_deg3(ctx, comp))
    } else {
        rules::cubic_finish(ctx, comp)
    }
}

fn require_connected(g: &Graph) -> Result<Vec<VertexId>, SolveError> {
    if !g.is_connected() {
        return Err(SolveError::Disconnected);
    }
    Ok(g.vertices().collect())
}

/// The step the solver would take on a connected graph. Graphs at or below
/// the base threshold, and `K3,3`, get an exact base step.
pub fn select_rule(g: &Graph, c: Option<&PendantConstraint>) -> Result<ReductionStep, SolveError> {
    select_rule_with(g, c, &SolverOptions::default())
}

pub fn select_rule_with(
    g: &Graph,
    c: Option<&PendantConstraint>,
    opts: &SolverOptions,
) -> Result<ReductionStep, SolveError> {
    let comp = require_connected(g)?;
    select(g, &comp, c.map(|c| c.vertex), opts)
}

/// The reduced graph of `step`.
pub fn apply_step(g: &Graph, step: &ReductionStep) -> Result<Graph, SolveError> {
    let mut out = g.clone();
    apply_in_place(&mut out, step).map_err(|e| SolveError::violation(e.to_string(), vec![step.clone()]))?;
    let touched: Vec<VertexId> = step
        .deleted
        .iter()
        .flat_map(|&x| g.neighbors(x).iter().copied())
        .filter(|&y| out.contains(y))
        .collect();
    let cubic = out
        .cubic_components()
        .into_iter()
        .any(|c| c.iter().any(|v| touched.contains(v)));
    if cubic {
        return Err(SolveError::violation("reduced graph has a cubic component", vec![step.clone()]));
    }
    Ok(out)
}

/// Extends a maximal matching of the reduced graph to one of `g`, checking
/// maximality and the step's budget.
pub fn extend_solution(g: &Graph, step: &ReductionStep, sub: &Matching) -> Result<Matching, SolveError> {
    let m = step.extension.apply(sub);
    if !is_maximal(g, &m).unwrap_or(false) {
        return Err(SolveError::violation(
            format!("{} extension is not a maximal matching", step.rule),
            vec![step.clone()],
        ));
    }
    if m.len() > sub.len() + step.budget() {
        return Err(SolveError::violation(
            format!("{} extension exceeds its budget", step.rule),
            vec![step.clone()],
        ));
    }
    Ok(m)
}

/// Rebuilds the matching from a trace, checking every intermediate matching
/// against the graph it belongs to.
pub fn replay(g: &Graph, trace: &[ReductionStep]) -> Result<Matching, SolveError> {
    let mut graphs = vec![g.clone()];
    for step in trace {
        let mut next = graphs.last().expect("nonempty").clone();
        apply_in_place(&mut next, step).map_err(|e| SolveError::violation(e.to_string(), trace.to_vec()))?;
        graphs.push(next);
    }
    if !graphs.last().expect("nonempty").is_empty() {
        return Err(SolveError::violation("trace leaves vertices behind", trace.to_vec()));
    }
    let mut m = Matching::new();
    for (i, step) in trace.iter().enumerate().rev() {
        m = extend_solution(&graphs[i], step, &m).map_err(|e| match e {
            SolveError::InternalInvariantViolation(v) => {
                SolveError::violation(format!("step {i}: {}", v.message), trace.to_vec())
            }
            other => other,
        })?;
    }
    Ok(m)
}

/// First pair of `estar` that is a non-edge and whose addition after
/// deleting `v0` leaves no cubic component.
pub fn select_noncubic_edge(g: &Graph, v0: &[VertexId], estar: &[Edge]) -> Result<Edge, SolveError> {
    let comp = require_connected(g)?;
    for &x in v0 {
        if !g.contains(x) {
            return Err(SolveError::Precondition(format!("vertex {x} not in graph")));
        }
    }
    for e in estar {
        for x in [e.u(), e.v()] {
            if v0.contains(&x) || !v0.iter().any(|&y| g.has_edge(x, y)) {
                return Err(SolveError::Precondition(format!("{x} is not a neighbour of the deleted set")));
            }
        }
    }
    if estar.iter().all(|e| g.has_edge(e.u(), e.v())) {
        return Err(SolveError::Precondition("every candidate pair is already an edge".into()));
    }
    let ctx = Ctx::new(g, &comp);
    estar
        .iter()
        .copied()
        .filter(|e| !g.has_edge(e.u(), e.v()))
        .find(|&e| {
            let plan = Plan::new(Rule::CubicFinish(FinishCase::Cross), v0, &[e], Recipe::default());
            ctx.phi_after(&plan).is_some()
        })
        .ok_or_else(|| SolveError::violation("no candidate edge avoids a cubic component", Vec::new()))
}

/// The `(q1, q2)` choice for the final degree-two configuration: the first
/// pair in id order whose reduced graph is subcubic with no cubic component.
pub fn choose_q1_q2(g: &Graph, labels: &Case232Labels) -> Result<(VertexId, VertexId), SolveError> {
    let comp = g.component_of(labels.u);
    let ctx = Ctx::new(g, &comp);
    rules::q_pair_plans(g, labels)
        .into_iter()
        .find(|p| ctx.phi_after(p).is_some())
        .map(|p| {
            let q1 = p.added[0].other(labels.w11).expect("added edge at w11");
            let q2 = p.added[1].other(labels.w22).expect("added edge at w22");
            (q1, q2)
        })
        .ok_or_else(|| SolveError::violation("no (q1, q2) pair avoids a cubic component", Vec::new()))
}

#[cfg(test)]
mod tests;

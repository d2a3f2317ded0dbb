//! Exact minimum maximal matching by branch and bound.
//!
//! Any maximal matching dominates every edge, so for the lowest undominated
//! edge `uv` one of the still-addable edges at `u` or `v` must be chosen.
//! Siblings are explored in edge order and each finished sibling is excluded
//! from the later ones, which makes the subtrees disjoint. A subtree is cut
//! when `|M| + ceil(undominated / 5)` cannot beat the incumbent.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, Graph, VertexId};
use crate::matching::Matching;

/// Largest graph accepted by [`enumerate_maximal_matchings`].
pub const ENUMERATION_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub gamma: usize,
    pub witness: Matching,
    pub nodes_explored: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    /// The node limit was hit; `incumbent` is the best matching seen, which
    /// need not be minimum.
    #[error("node budget of {budget} exhausted")]
    BudgetExceeded {
        budget: u64,
        incumbent: Option<OracleResult>,
    },
    #[error("no maximal matching avoids edge {0}")]
    Infeasible(Edge),
    #[error("edge {0} is not an edge of the graph")]
    UnknownEdge(Edge),
    #[error("graph has {0} vertices; enumeration is limited to {ENUMERATION_LIMIT}")]
    TooLarge(usize),
}

/// Exact `gamma(g)` with a witness. `budget` caps the number of search nodes.
pub fn gamma_exact(g: &Graph, budget: Option<u64>) -> Result<OracleResult, OracleError> {
    Search::new(g, None).run(budget)
}

/// Minimum maximal matching among those that do not contain `forbidden`.
pub fn gamma_exact_avoiding(g: &Graph, forbidden: Edge, budget: Option<u64>) -> Result<OracleResult, OracleError> {
    if !g.has_edge(forbidden.u(), forbidden.v()) {
        return Err(OracleError::UnknownEdge(forbidden));
    }
    Search::new(g, Some(forbidden)).run(budget)
}

struct Search {
    order: Vec<VertexId>,
    ends: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    covered: Vec<bool>,
    excluded: Vec<bool>,
    chosen: Vec<usize>,
    undominated: usize,
    best: Option<Vec<usize>>,
    nodes: u64,
    forbidden: Option<Edge>,
}

impl Search {
    fn new(g: &Graph, forbidden: Option<Edge>) -> Self {
        let (compact, order) = g.compact();
        let n = compact.n();
        let mut ends = Vec::with_capacity(compact.m());
        let mut incident = vec![Vec::new(); n];
        let mut excluded = Vec::with_capacity(compact.m());
        for e in compact.edges() {
            let (a, b) = (e.u().index(), e.v().index());
            incident[a].push(ends.len());
            incident[b].push(ends.len());
            excluded.push(forbidden == Some(Edge::new(order[a], order[b])));
            ends.push((a, b));
        }
        let undominated = ends.len();
        Search {
            order,
            ends,
            incident,
            covered: vec![false; n],
            excluded,
            chosen: Vec::new(),
            undominated,
            best: None,
            nodes: 0,
            forbidden,
        }
    }

    fn run(mut self, budget: Option<u64>) -> Result<OracleResult, OracleError> {
        self.seed_incumbent();
        let complete = self.descend(budget.unwrap_or(u64::MAX));
        let result = self.best.as_ref().map(|b| OracleResult {
            gamma: b.len(),
            witness: b.iter().map(|&i| self.edge(i)).collect(),
            nodes_explored: self.nodes,
        });
        if !complete {
            return Err(OracleError::BudgetExceeded {
                budget: budget.unwrap_or(u64::MAX),
                incumbent: result,
            });
        }
        match result {
            Some(r) => Ok(r),
            None => Err(OracleError::Infeasible(self.forbidden.expect("unconstrained search always succeeds"))),
        }
    }

    fn edge(&self, i: usize) -> Edge {
        let (a, b) = self.ends[i];
        Edge::new(self.order[a], self.order[b])
    }

    /// Greedy maximal matching in edge order, skipping excluded edges. Only
    /// kept if it dominates everything.
    fn seed_incumbent(&mut self) {
        let mut covered = vec![false; self.covered.len()];
        let mut picked = Vec::new();
        for (i, &(a, b)) in self.ends.iter().enumerate() {
            if !self.excluded[i] && !covered[a] && !covered[b] {
                covered[a] = true;
                covered[b] = true;
                picked.push(i);
            }
        }
        if self.ends.iter().all(|&(a, b)| covered[a] || covered[b]) {
            self.best = Some(picked);
        }
    }

    fn free(&self, i: usize) -> bool {
        let (a, b) = self.ends[i];
        !self.covered[a] && !self.covered[b]
    }

    fn take(&mut self, i: usize) -> usize {
        let (a, b) = self.ends[i];
        let mut newly = 0;
        for x in [a, b] {
            for &j in &self.incident[x] {
                if self.free(j) {
                    newly += 1;
                }
            }
        }
        // uv itself was counted from both ends
        newly -= 1;
        self.covered[a] = true;
        self.covered[b] = true;
        self.undominated -= newly;
        self.chosen.push(i);
        newly
    }

    fn untake(&mut self, i: usize, newly: usize) {
        let (a, b) = self.ends[i];
        self.covered[a] = false;
        self.covered[b] = false;
        self.undominated += newly;
        self.chosen.pop();
    }

    /// Returns false when the node budget ran out.
    fn descend(&mut self, budget: u64) -> bool {
        self.nodes += 1;
        if self.nodes > budget {
            return false;
        }
        if self.undominated == 0 {
            if self.best.as_ref().is_none_or(|b| self.chosen.len() < b.len()) {
                self.best = Some(self.chosen.clone());
            }
            return true;
        }
        if let Some(b) = &self.best {
            if self.chosen.len() + self.undominated.div_ceil(5) >= b.len() {
                return true;
            }
        }
        let Some(pivot) = (0..self.ends.len()).find(|&i| self.free(i)) else {
            return true;
        };
        let (u, v) = self.ends[pivot];
        let mut branch: Vec<usize> = self.incident[u]
            .iter()
            .chain(&self.incident[v])
            .copied()
            .filter(|&j| self.free(j) && !self.excluded[j])
            .collect();
        branch.sort_unstable();
        branch.dedup();
        let mut complete = true;
        for &j in &branch {
            let newly = self.take(j);
            let ok = self.descend(budget);
            self.untake(j, newly);
            if !ok {
                complete = false;
                break;
            }
            self.excluded[j] = true;
        }
        for &j in &branch {
            self.excluded[j] = false;
        }
        complete
    }
}

/// Every maximal matching of a graph with at most [`ENUMERATION_LIMIT`]
/// vertices, by plain include/exclude recursion over the edge list.
pub fn enumerate_maximal_matchings(g: &Graph) -> Result<Vec<Matching>, OracleError> {
    if g.n() > ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge(g.n()));
    }
    let edges: Vec<Edge> = g.edges().collect();
    let mut covered = vec![false; g.id_bound()];
    let mut current = Vec::new();
    let mut out = Vec::new();

    fn rec(
        edges: &[Edge],
        k: usize,
        covered: &mut [bool],
        current: &mut Vec<Edge>,
        out: &mut Vec<Matching>,
    ) {
        if k == edges.len() {
            if edges.iter().all(|e| covered[e.u().index()] || covered[e.v().index()]) {
                out.push(current.iter().copied().collect());
            }
            return;
        }
        let e = edges[k];
        if !covered[e.u().index()] && !covered[e.v().index()] {
            covered[e.u().index()] = true;
            covered[e.v().index()] = true;
            current.push(e);
            rec(edges, k + 1, covered, current, out);
            current.pop();
            covered[e.u().index()] = false;
            covered[e.v().index()] = false;
        }
        rec(edges, k + 1, covered, current, out);
    }

    rec(&edges, 0, &mut covered, &mut current, &mut out);
    Ok(out)
}

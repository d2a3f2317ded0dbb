//! Matchings, maximality checks, and the size bound in exact sixths.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DegreeCensus, Edge, Graph, SmallPattern, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("edge {0} is not an edge of the graph")]
    EdgeNotInGraph(Edge),
    #[error("edge set is not a matching")]
    NotAMatching,
    #[error("graph is disconnected or empty")]
    Disconnected,
}

/// A set of edges, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching {
    edges: BTreeSet<Edge>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn insert(&mut self, e: Edge) -> bool {
        self.edges.insert(e)
    }

    pub fn remove(&mut self, e: Edge) -> bool {
        self.edges.remove(&e)
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    /// The matched edge at `x`, by linear scan.
    pub fn edge_at(&self, x: VertexId) -> Option<Edge> {
        self.iter().find(|e| e.touches(x))
    }

    pub fn union(&self, other: &Matching) -> Matching {
        Matching {
            edges: self.edges.union(&other.edges).copied().collect(),
        }
    }
}

impl FromIterator<Edge> for Matching {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        Matching {
            edges: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Matching {
    type Item = &'a Edge;
    type IntoIter = std::collections::btree_set::Iter<'a, Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.edges.iter()
    }
}

fn covered_mask(g: &Graph, m: &Matching) -> Result<Option<Vec<bool>>, MatchingError> {
    let mut covered = vec![false; g.id_bound()];
    for e in m.iter() {
        if !g.has_edge(e.u(), e.v()) {
            return Err(MatchingError::EdgeNotInGraph(e));
        }
        for x in [e.u(), e.v()] {
            if covered[x.index()] {
                return Ok(None);
            }
            covered[x.index()] = true;
        }
    }
    Ok(Some(covered))
}

/// True iff the edges of `m` are pairwise vertex-disjoint.
pub fn is_matching(g: &Graph, m: &Matching) -> Result<bool, MatchingError> {
    Ok(covered_mask(g, m)?.is_some())
}

/// True iff every edge of `g` has a covered endpoint.
pub fn is_maximal(g: &Graph, m: &Matching) -> Result<bool, MatchingError> {
    let covered = covered_mask(g, m)?.ok_or(MatchingError::NotAMatching)?;
    Ok(g.edges().all(|e| covered[e.u().index()] || covered[e.v().index()]))
}

/// Convenience: matching and maximal, with any error read as `false`.
pub fn is_maximal_matching(g: &Graph, m: &Matching) -> bool {
    is_maximal(g, m).unwrap_or(false)
}

/// `6 * lb` for one connected component with the given census.
///
/// `lb = (4n - m)/6 + (2I + K - n1)/6`, where `I` flags a cubic graph and
/// `K` flags a single edge.
pub fn lambda_times_6(census: &DegreeCensus) -> i64 {
    let cubic = census.is_cubic() as i64;
    let k2 = (census.n == 2 && census.m == 1) as i64;
    4 * census.n as i64 - census.m as i64 + 2 * cubic + k2 - census.n1 as i64
}

/// The quantities entering the bound, for a connected graph or summed over
/// the components of a disconnected one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub census: DegreeCensus,
    /// Number of cubic components (0/1 for a connected graph).
    pub cubic: u32,
    /// Number of components isomorphic to K2.
    pub k2: u32,
    /// Number of components isomorphic to K3,3.
    pub k33: u32,
    /// Sum over components of `4n - m + 2I + K - n1`.
    pub lambda_times_6: i64,
    /// Largest matching size the bound admits: `floor(lambda)` summed over
    /// components, with 3 for each K3,3 component.
    pub size_limit: usize,
}

impl BoundReport {
    pub fn admits(&self, size: usize) -> bool {
        size <= self.size_limit
    }

    fn add(&mut self, other: &BoundReport) {
        let (a, b) = (&mut self.census, &other.census);
        a.n += b.n;
        a.m += b.m;
        a.n0 += b.n0;
        a.n1 += b.n1;
        a.n2 += b.n2;
        a.n3 += b.n3;
        self.cubic += other.cubic;
        self.k2 += other.k2;
        self.k33 += other.k33;
        self.lambda_times_6 += other.lambda_times_6;
        self.size_limit += other.size_limit;
    }
}

/// Per-component cap used throughout: 3 for K3,3, else `floor(lb6 / 6)`.
pub(crate) fn component_limit(lambda6: i64, is_k33: bool) -> usize {
    if is_k33 {
        3
    } else {
        lambda6.div_euclid(6).max(0) as usize
    }
}

/// Bound report for a connected graph.
pub fn bound_report(g: &Graph) -> Result<BoundReport, MatchingError> {
    if !g.is_connected() {
        return Err(MatchingError::Disconnected);
    }
    Ok(report_for(g))
}

/// Bound report summed over all components; the reference point for
/// solving a disconnected graph component by component.
pub fn bound_report_components(g: &Graph) -> BoundReport {
    let mut total = BoundReport {
        census: DegreeCensus::default(),
        cubic: 0,
        k2: 0,
        k33: 0,
        lambda_times_6: 0,
        size_limit: 0,
    };
    for comp in g.connected_components() {
        let sub = g.induced(&comp);
        total.add(&report_for(&sub));
    }
    total
}

fn report_for(g: &Graph) -> BoundReport {
    let census = g.degree_census();
    let cubic = census.is_cubic();
    let k2 = census.n == 2 && census.m == 1;
    let k33 = census.n == 6 && cubic && g.is_isomorphic_small(SmallPattern::K33);
    let lambda6 = lambda_times_6(&census);
    BoundReport {
        census,
        cubic: cubic as u32,
        k2: k2 as u32,
        k33: k33 as u32,
        lambda_times_6: lambda6,
        size_limit: component_limit(lambda6, k33),
    }
}

/// `ceil(m / 5)`: in a subcubic graph one matching edge dominates at most
/// five edges.
pub fn gamma_lower_bound(g: &Graph) -> usize {
    g.m().div_ceil(5)
}

//! Subcubic simple graphs with stable vertex identities.
//!
//! Vertices are never renumbered: deleting a vertex leaves a dead slot behind,
//! so a [`VertexId`] observed before a reduction still names the same vertex
//! afterwards. The degree cap of three is enforced at mutation time.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest degree any vertex may reach.
pub const MAX_DEGREE: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

/// An unordered vertex pair, stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: VertexId,
    v: VertexId,
}

impl Edge {
    /// Builds the normalized pair. Callers that accept untrusted input should
    /// go through [`Graph::add_edge`], which rejects self-loops with an error.
    pub fn new(a: VertexId, b: VertexId) -> Self {
        debug_assert!(a != b, "self-loop {a}");
        if a <= b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn u(self) -> VertexId {
        self.u
    }

    pub fn v(self) -> VertexId {
        self.v
    }

    pub fn touches(self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite to `x`, if `x` is an endpoint.
    pub fn other(self, x: VertexId) -> Option<VertexId> {
        if self.u == x {
            Some(self.v)
        } else if self.v == x {
            Some(self.u)
        } else {
            None
        }
    }

    pub fn shares_endpoint(self, other: Edge) -> bool {
        self.touches(other.u) || self.touches(other.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.u.0, self.v.0].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [a, b] = <[u32; 2]>::deserialize(d)?;
        if a == b {
            return Err(serde::de::Error::custom(format!("self-loop {a}")));
        }
        Ok(Edge::new(VertexId(a), VertexId(b)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} already has degree 3")]
    DegreeOverflow(VertexId),
    #[error("edge {0} already present")]
    DuplicateEdge(Edge),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("edge {0} not present")]
    MissingEdge(Edge),
    #[error("inconsistent graph state: {0}")]
    Inconsistent(String),
}

/// Degree statistics of a graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCensus {
    pub n: usize,
    pub m: usize,
    pub n0: usize,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

impl DegreeCensus {
    pub fn is_cubic(&self) -> bool {
        self.n > 0 && self.n3 == self.n
    }
}

/// Fixed small graphs recognised by [`Graph::is_isomorphic_small`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SmallPattern {
    K2,
    K4,
    K33,
    K33Minus,
}

impl SmallPattern {
    pub fn graph(self) -> Graph {
        let edges: &[(u32, u32)] = match self {
            SmallPattern::K2 => &[(0, 1)],
            SmallPattern::K4 => &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            SmallPattern::K33 => &[
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 3),
                (2, 4),
                (2, 5),
            ],
            SmallPattern::K33Minus => &[
                (0, 4),
                (0, 5),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 3),
                (2, 4),
                (2, 5),
            ],
        };
        let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0) as usize;
        Graph::from_edges(n, edges).expect("pattern graphs are subcubic")
    }
}

#[derive(Clone, Debug)]
struct Slot {
    alive: bool,
    deg: u8,
    nbrs: [VertexId; MAX_DEGREE],
}

impl Slot {
    const DEAD: Slot = Slot {
        alive: false,
        deg: 0,
        nbrs: [VertexId(0); MAX_DEGREE],
    };
    const FRESH: Slot = Slot {
        alive: true,
        deg: 0,
        nbrs: [VertexId(0); MAX_DEGREE],
    };

    fn nbrs(&self) -> &[VertexId] {
        &self.nbrs[..self.deg as usize]
    }

    fn insert(&mut self, x: VertexId) {
        let d = self.deg as usize;
        let mut i = d;
        while i > 0 && self.nbrs[i - 1] > x {
            self.nbrs[i] = self.nbrs[i - 1];
            i -= 1;
        }
        self.nbrs[i] = x;
        self.deg += 1;
    }

    fn erase(&mut self, x: VertexId) -> bool {
        let d = self.deg as usize;
        match self.nbrs[..d].iter().position(|&y| y == x) {
            Some(p) => {
                for i in p..d - 1 {
                    self.nbrs[i] = self.nbrs[i + 1];
                }
                self.nbrs[d - 1] = VertexId(0);
                self.deg -= 1;
                true
            }
            None => false,
        }
    }
}

/// Simple undirected graph with maximum degree three.
///
/// Neighbour lists are kept sorted so that every iteration order is
/// deterministic.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    slots: Vec<Slot>,
    n: usize,
    m: usize,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.m == other.m
            && self.vertices().eq(other.vertices())
            && self.edges().eq(other.edges())
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// `n` isolated vertices with ids `0..n`.
    pub fn with_vertices(n: usize) -> Self {
        Graph {
            slots: vec![Slot::FRESH; n],
            n,
            m: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let mut g = Graph::with_vertices(n);
        for &(a, b) in edges {
            g.add_edge(VertexId(a), VertexId(b))?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.slots.len() as u32);
        self.slots.push(Slot::FRESH);
        self.n += 1;
        id
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// One past the largest id ever allocated; sizes per-vertex scratch arrays.
    pub fn id_bound(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.slots.get(v.index()).is_some_and(|s| s.alive)
    }

    /// Degree of `v`; zero for ids that are not present.
    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.slots.get(v.index()).map_or(0, |s| s.deg as usize)
    }

    /// Sorted neighbours of `v`; empty for ids that are not present.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.slots.get(v.index()).map_or(&[], |s| s.nbrs())
    }

    #[inline]
    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.neighbors(a).contains(&b)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.alive)
            .map(|(i, _)| VertexId(i as u32))
    }

    /// Edges in lexicographic order of their normalized endpoints.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| Edge::new(u, v))
        })
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        for x in [a, b] {
            if !self.contains(x) {
                return Err(GraphError::UnknownVertex(x));
            }
        }
        if self.has_edge(a, b) {
            return Err(GraphError::DuplicateEdge(Edge::new(a, b)));
        }
        for x in [a, b] {
            if self.degree(x) >= MAX_DEGREE {
                return Err(GraphError::DegreeOverflow(x));
            }
        }
        self.slots[a.index()].insert(b);
        self.slots[b.index()].insert(a);
        self.m += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        if a == b || !self.has_edge(a, b) {
            return Err(GraphError::MissingEdge(Edge::new(a.min(b), a.max(b))));
        }
        self.slots[a.index()].erase(b);
        self.slots[b.index()].erase(a);
        self.m -= 1;
        Ok(())
    }

    /// Deletes every vertex in `vs` along with its incident edges. Fails
    /// without touching the graph if some id is absent.
    pub fn remove_vertices(&mut self, vs: &[VertexId]) -> Result<(), GraphError> {
        if let Some(&v) = vs.iter().find(|&&v| !self.contains(v)) {
            return Err(GraphError::UnknownVertex(v));
        }
        for &v in vs {
            if !self.contains(v) {
                // duplicate entry in vs
                continue;
            }
            let nbrs: Vec<VertexId> = self.neighbors(v).to_vec();
            for w in nbrs {
                self.slots[w.index()].erase(v);
                self.m -= 1;
            }
            self.slots[v.index()] = Slot::DEAD;
            self.n -= 1;
        }
        Ok(())
    }

    /// Functional form of [`Graph::remove_vertices`].
    pub fn without_vertices(&self, vs: &[VertexId]) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        g.remove_vertices(vs)?;
        Ok(g)
    }

    /// Subgraph induced by `vs`, keeping the original ids.
    pub fn induced(&self, vs: &[VertexId]) -> Graph {
        let mut keep = vec![false; self.id_bound()];
        for &v in vs {
            if self.contains(v) {
                keep[v.index()] = true;
            }
        }
        let mut g = Graph {
            slots: vec![Slot::DEAD; self.id_bound()],
            n: 0,
            m: 0,
        };
        for v in self.vertices().filter(|v| keep[v.index()]) {
            g.slots[v.index()] = Slot::FRESH;
            g.n += 1;
        }
        for e in self.edges() {
            if keep[e.u.index()] && keep[e.v.index()] {
                g.slots[e.u.index()].insert(e.v);
                g.slots[e.v.index()].insert(e.u);
                g.m += 1;
            }
        }
        g
    }

    /// Relabels the vertices to `0..n` in id order. Returns the compact
    /// graph and, for each new index, the original id.
    pub fn compact(&self) -> (Graph, Vec<VertexId>) {
        let order: Vec<VertexId> = self.vertices().collect();
        let mut index = vec![u32::MAX; self.id_bound()];
        for (i, v) in order.iter().enumerate() {
            index[v.index()] = i as u32;
        }
        let mut g = Graph::with_vertices(order.len());
        for e in self.edges() {
            let a = index[e.u.index()] as usize;
            let b = index[e.v.index()] as usize;
            g.slots[a].insert(VertexId(b as u32));
            g.slots[b].insert(VertexId(a as u32));
            g.m += 1;
        }
        (g, order)
    }

    /// Vertices reachable from `root`, sorted by id.
    pub fn component_of(&self, root: VertexId) -> Vec<VertexId> {
        if !self.contains(root) {
            return Vec::new();
        }
        let mut seen = vec![false; self.id_bound()];
        let mut out = self.bfs_collect(root, &mut seen);
        if out.len() * 16 >= seen.len() {
            // large component: reading the marks back in id order beats sorting
            out.clear();
            out.extend((0..seen.len()).filter(|&i| seen[i]).map(|i| VertexId(i as u32)));
        } else {
            out.sort_unstable();
        }
        out
    }

    fn bfs_collect(&self, root: VertexId, seen: &mut [bool]) -> Vec<VertexId> {
        let mut out = vec![root];
        seen[root.index()] = true;
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            head += 1;
            for &y in self.neighbors(x) {
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    out.push(y);
                }
            }
        }
        out
    }

    /// Partition of the vertex set into connected components, each sorted,
    /// listed in order of their smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.id_bound()];
        let mut comps = Vec::new();
        for v in self.vertices() {
            if !seen[v.index()] {
                let mut c = self.bfs_collect(v, &mut seen);
                c.sort_unstable();
                comps.push(c);
            }
        }
        comps
    }

    /// True iff the graph is non-empty and has a single component.
    pub fn is_connected(&self) -> bool {
        match self.vertices().next() {
            None => false,
            Some(v) => {
                let mut seen = vec![false; self.id_bound()];
                self.bfs_collect(v, &mut seen).len() == self.n
            }
        }
    }

    /// All bridges, sorted. Iterative low-link search, linear time.
    pub fn find_bridges(&self) -> Vec<Edge> {
        let mut search = LowLink::new(self.id_bound());
        let mut bridges = Vec::new();
        for root in self.vertices() {
            if search.disc[root.index()] == u32::MAX {
                search.run(self, root, &mut bridges);
            }
        }
        bridges.sort_unstable();
        bridges
    }

    /// Bridges of the component containing `root` (unsorted).
    pub(crate) fn bridges_in_component(&self, root: VertexId) -> Vec<Edge> {
        let mut bridges = Vec::new();
        LowLink::new(self.id_bound()).run(self, root, &mut bridges);
        bridges
    }

    /// Components in which every vertex has degree exactly three.
    pub fn cubic_components(&self) -> Vec<Vec<VertexId>> {
        self.connected_components()
            .into_iter()
            .filter(|c| c.iter().all(|&v| self.degree(v) == MAX_DEGREE))
            .collect()
    }

    pub fn degree_census(&self) -> DegreeCensus {
        let mut c = DegreeCensus {
            n: self.n,
            m: self.m,
            ..Default::default()
        };
        for v in self.vertices() {
            match self.degree(v) {
                0 => c.n0 += 1,
                1 => c.n1 += 1,
                2 => c.n2 += 1,
                _ => c.n3 += 1,
            }
        }
        c
    }

    /// Isomorphism test against one of the fixed patterns (at most six
    /// vertices): degree-sequence filter followed by a backtracking search.
    pub fn is_isomorphic_small(&self, pattern: SmallPattern) -> bool {
        let p = pattern.graph();
        if self.n != p.n || self.m != p.m {
            return false;
        }
        let mut ds: Vec<usize> = self.vertices().map(|v| self.degree(v)).collect();
        let mut dp: Vec<usize> = p.vertices().map(|v| p.degree(v)).collect();
        ds.sort_unstable();
        dp.sort_unstable();
        if ds != dp {
            return false;
        }
        let mine: Vec<VertexId> = self.vertices().collect();
        let mut image = vec![usize::MAX; mine.len()];
        let mut used = vec![false; mine.len()];
        fn extend(
            g: &Graph,
            p: &Graph,
            mine: &[VertexId],
            image: &mut [usize],
            used: &mut [bool],
            k: usize,
        ) -> bool {
            if k == mine.len() {
                return true;
            }
            for t in 0..mine.len() {
                if used[t] || g.degree(mine[k]) != p.degree(VertexId(t as u32)) {
                    continue;
                }
                let ok = (0..k).all(|j| {
                    g.has_edge(mine[k], mine[j])
                        == p.has_edge(VertexId(t as u32), VertexId(image[j] as u32))
                });
                if ok {
                    used[t] = true;
                    image[k] = t;
                    if extend(g, p, mine, image, used, k + 1) {
                        return true;
                    }
                    used[t] = false;
                }
            }
            false
        }
        extend(self, &p, &mine, &mut image, &mut used, 0)
    }

    /// Full consistency check: symmetric sorted adjacency, no loops or
    /// parallel edges, degree cap, and counters matching recomputed values.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut n = 0;
        let mut deg_sum = 0;
        for (i, s) in self.slots.iter().enumerate() {
            let v = VertexId(i as u32);
            if !s.alive {
                if s.deg != 0 {
                    return Err(GraphError::Inconsistent(format!("dead vertex {v} has edges")));
                }
                continue;
            }
            n += 1;
            let nb = s.nbrs();
            deg_sum += nb.len();
            if nb.len() > MAX_DEGREE {
                return Err(GraphError::DegreeOverflow(v));
            }
            if !nb.windows(2).all(|w| w[0] < w[1]) {
                return Err(GraphError::Inconsistent(format!("neighbours of {v} unsorted or repeated")));
            }
            for &w in nb {
                if w == v {
                    return Err(GraphError::SelfLoop(v));
                }
                if !self.contains(w) || !self.neighbors(w).contains(&v) {
                    return Err(GraphError::Inconsistent(format!("asymmetric edge {v}-{w}")));
                }
            }
        }
        if n != self.n || deg_sum != 2 * self.m {
            return Err(GraphError::Inconsistent(format!(
                "counters n={} m={} but recount gives n={} 2m={}",
                self.n, self.m, n, deg_sum
            )));
        }
        Ok(())
    }
}

struct LowLink {
    disc: Vec<u32>,
    low: Vec<u32>,
    timer: u32,
}

impl LowLink {
    fn new(bound: usize) -> Self {
        LowLink {
            disc: vec![u32::MAX; bound],
            low: vec![u32::MAX; bound],
            timer: 0,
        }
    }

    fn visit(&mut self, v: VertexId) {
        self.disc[v.index()] = self.timer;
        self.low[v.index()] = self.timer;
        self.timer += 1;
    }

    fn run(&mut self, g: &Graph, root: VertexId, out: &mut Vec<Edge>) {
        const NONE: VertexId = VertexId(u32::MAX);
        let mut stack: Vec<(VertexId, VertexId, usize)> = vec![(root, NONE, 0)];
        self.visit(root);
        while let Some(top) = stack.last_mut() {
            let (v, parent, i) = *top;
            let nbrs = g.neighbors(v);
            if i < nbrs.len() {
                top.2 += 1;
                let w = nbrs[i];
                if w == parent {
                    continue;
                }
                if self.disc[w.index()] == u32::MAX {
                    self.visit(w);
                    stack.push((w, v, 0));
                } else {
                    self.low[v.index()] = self.low[v.index()].min(self.disc[w.index()]);
                }
            } else {
                stack.pop();
                if parent != NONE {
                    let lv = self.low[v.index()];
                    let lp = &mut self.low[parent.index()];
                    *lp = (*lp).min(lv);
                    if lv > self.disc[parent.index()] {
                        out.push(Edge::new(parent, v));
                    }
                }
            }
        }
    }
}

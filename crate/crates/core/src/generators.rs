//! Named graphs, the `G_k` chains, random cubic and subcubic graphs, and the
//! labeled small-graph corpus.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Edge, Graph, SmallPattern, VertexId};
use crate::matching::{is_maximal_matching, Matching};

/// Attempts allowed to the pairing model before giving up.
pub const REJECTION_LIMIT: u32 = 10_000;

/// Largest `n` for the labeled enumeration.
pub const ENUMERATION_MAX_N: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("no valid pairing after {0} attempts")]
    RejectionLimitExceeded(u32),
    #[error("labeled enumeration refused for n = {0}")]
    TooLarge(usize),
    #[error("pattern matching failed validation for k = {0}")]
    InternalInvariantViolation(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Named {
    K2,
    K4,
    Cycle(usize),
    Path(usize),
    K33,
    K33Minus,
    Petersen,
    CubeQ3,
}

impl Named {
    /// Every parameter-free name plus a few cycles and paths.
    pub fn samples() -> Vec<Named> {
        let mut out = vec![
            Named::K2,
            Named::K4,
            Named::K33,
            Named::K33Minus,
            Named::Petersen,
            Named::CubeQ3,
        ];
        out.extend((3..=15).map(Named::Cycle));
        out.extend((1..=10).map(Named::Path));
        out
    }
}

fn build(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Graph {
    let mut g = Graph::with_vertices(n);
    for (a, b) in edges {
        g.add_edge(VertexId(a), VertexId(b)).expect("generator edge is valid");
    }
    g
}

pub fn gen_named(name: Named) -> Result<Graph, GeneratorError> {
    Ok(match name {
        Named::K2 => SmallPattern::K2.graph(),
        Named::K4 => SmallPattern::K4.graph(),
        Named::K33 => SmallPattern::K33.graph(),
        Named::K33Minus => SmallPattern::K33Minus.graph(),
        Named::Cycle(n) => {
            if n < 3 {
                return Err(GeneratorError::BadParameter(format!("cycle needs n >= 3, got {n}")));
            }
            let n32 = n as u32;
            build(n, (0..n32).map(|i| (i, (i + 1) % n32)))
        }
        Named::Path(n) => {
            if n < 1 {
                return Err(GeneratorError::BadParameter("path needs n >= 1".into()));
            }
            build(n, (1..n as u32).map(|i| (i - 1, i)))
        }
        Named::Petersen => build(
            10,
            (0..5u32).flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)]),
        ),
        Named::CubeQ3 => build(
            8,
            (0..8u32).flat_map(|i| [1u32, 2, 4].into_iter().filter(move |b| i & b == 0).map(move |b| (i, i | b))),
        ),
    })
}

/// Cyclic chain of `k` copies of `K3,3` minus an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkFamily {
    pub k: usize,
    pub graph: Graph,
    /// `(p_i, q_i)`: the two degree-two vertices of block `i` before chaining.
    pub block_boundaries: Vec<(VertexId, VertexId)>,
}

// Block i occupies ids 6i..6i+6: a0 a1 a2 then b0 b1 b2, with a0b0 missing.
const A0: u32 = 0;
const A1: u32 = 1;
const A2: u32 = 2;
const B0: u32 = 3;
const B1: u32 = 4;
const B2: u32 = 5;

fn slot(block: usize, local: u32) -> VertexId {
    VertexId(6 * block as u32 + local)
}

pub fn gen_gk(k: usize) -> Result<GkFamily, GeneratorError> {
    if k == 0 {
        return Err(GeneratorError::BadParameter("k must be positive".into()));
    }
    let mut g = Graph::with_vertices(6 * k);
    let mut bounds = Vec::with_capacity(k);
    for i in 0..k {
        for a in [A0, A1, A2] {
            for b in [B0, B1, B2] {
                if (a, b) != (A0, B0) {
                    g.add_edge(slot(i, a), slot(i, b)).expect("block edge");
                }
            }
        }
        bounds.push((slot(i, A0), slot(i, B0)));
    }
    for i in 0..k {
        let q = bounds[i].1;
        let p = bounds[(i + 1) % k].0;
        g.add_edge(q, p).expect("chain edge");
    }
    Ok(GkFamily {
        k,
        graph: g,
        block_boundaries: bounds,
    })
}

/// Which edges of a block the pattern takes.
#[derive(Clone, Copy)]
enum BlockPattern {
    /// Two inner edges; `a0` and `b0` are covered by the neighbours' chain edges.
    Y,
    /// Two inner edges plus the chain edge to the next block.
    R,
    /// Two inner edges; `a0` is covered from the previous block.
    L,
    /// Three edges forming a perfect matching of the block.
    X,
}

fn block_edges(pattern: BlockPattern, i: usize, k: usize) -> Vec<Edge> {
    let e = |a: u32, b: u32| Edge::new(slot(i, a), slot(i, b));
    match pattern {
        BlockPattern::Y => vec![e(A1, B1), e(A2, B2)],
        BlockPattern::R => vec![e(A0, B1), e(A1, B2), Edge::new(slot(i, B0), slot((i + 1) % k, A0))],
        BlockPattern::L => vec![e(A1, B0), e(A2, B1)],
        BlockPattern::X => vec![e(A0, B1), e(A1, B0), e(A2, B2)],
    }
}

/// Maximal matching of `G_k` with `ceil(7k/3)` edges: three blocks share
/// seven edges, and one or two left-over blocks take three or five.
pub fn gen_gk_optimal_matching(fam: &GkFamily) -> Result<Matching, GeneratorError> {
    let k = fam.k;
    let mut patterns = Vec::with_capacity(k);
    for _ in 0..k / 3 {
        patterns.extend([BlockPattern::Y, BlockPattern::R, BlockPattern::L]);
    }
    match k % 3 {
        1 => patterns.push(BlockPattern::X),
        2 => patterns.extend([BlockPattern::R, BlockPattern::L]),
        _ => {}
    }
    let m: Matching = patterns
        .iter()
        .enumerate()
        .flat_map(|(i, &p)| block_edges(p, i, k))
        .collect();
    if m.len() != (7 * k).div_ceil(3) || !is_maximal_matching(&fam.graph, &m) {
        return Err(GeneratorError::InternalInvariantViolation(k));
    }
    Ok(m)
}

fn pairing(n: usize, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| [v; 3]).collect();
    stubs.shuffle(rng);
    let mut g = Graph::with_vertices(n);
    for pair in stubs.chunks_exact(2) {
        let (a, b) = (VertexId(pair[0]), VertexId(pair[1]));
        if a == b || g.has_edge(a, b) {
            return None;
        }
        g.add_edge(a, b).ok()?;
    }
    g.is_connected().then_some(g)
}

/// Connected simple cubic graph from the pairing model, deterministic in
/// `(n, seed)`.
pub fn gen_random_cubic(n: usize, seed: u64) -> Result<Graph, GeneratorError> {
    if n < 4 || n % 2 == 1 {
        return Err(GeneratorError::BadParameter(format!("cubic graphs need even n >= 4, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..REJECTION_LIMIT {
        if let Some(g) = pairing(n, &mut rng) {
            return Ok(g);
        }
    }
    Err(GeneratorError::RejectionLimitExceeded(REJECTION_LIMIT))
}

/// Random connected subcubic graph: a random tree of maximum degree three
/// with up to `extra` further random edges.
pub fn gen_random_subcubic(n: usize, extra: usize, seed: u64) -> Result<Graph, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::BadParameter("n must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::with_vertices(n);
    let mut open: Vec<VertexId> = vec![VertexId(0)];
    for v in 1..n as u32 {
        let i = rng.gen_range(0..open.len());
        let u = open[i];
        g.add_edge(u, VertexId(v)).expect("tree edge");
        if g.degree(u) == 3 {
            open.swap_remove(i);
        }
        open.push(VertexId(v));
    }
    for _ in 0..extra {
        let free: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) < 3).collect();
        if free.len() < 2 {
            break;
        }
        for _ in 0..8 {
            let a = *free.choose(&mut rng).expect("nonempty");
            let b = *free.choose(&mut rng).expect("nonempty");
            if a != b && !g.has_edge(a, b) {
                g.add_edge(a, b).expect("free endpoints");
                break;
            }
        }
    }
    Ok(g)
}

/// Deletes up to `count` random edges, skipping any whose removal
/// disconnects the graph.
pub fn delete_random_edges(g: &Graph, count: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = g.clone();
    let mut edges: Vec<Edge> = out.edges().collect();
    edges.shuffle(&mut rng);
    let mut removed = 0;
    for e in edges {
        if removed == count {
            break;
        }
        out.remove_edge(e.u(), e.v()).expect("edge present");
        if out.is_connected() {
            removed += 1;
        } else {
            out.add_edge(e.u(), e.v()).expect("restore edge");
        }
    }
    out
}

/// Connected subcubic graphs on vertex set `0..n`, labeled, in a fixed order.
pub fn enumerate_connected_subcubic(n: usize) -> Result<impl Iterator<Item = Graph>, GeneratorError> {
    if n > ENUMERATION_MAX_N {
        return Err(GeneratorError::TooLarge(n));
    }
    if n == 0 {
        return Err(GeneratorError::BadParameter("n must be positive".into()));
    }
    let pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|a| (a + 1..n as u32).map(move |b| (a, b)))
        .collect();
    let mut masks = Vec::new();
    let mut deg = vec![0u8; n];
    subsets(&pairs, 0, 0, &mut deg, &mut masks);
    Ok(masks.into_iter().filter_map(move |mask| {
        let g = build(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p));
        g.is_connected().then_some(g)
    }))
}

fn subsets(pairs: &[(u32, u32)], i: usize, mask: u32, deg: &mut [u8], out: &mut Vec<u32>) {
    if i == pairs.len() {
        if deg.iter().all(|&d| d > 0) || deg.len() == 1 {
            out.push(mask);
        }
        return;
    }
    subsets(pairs, i + 1, mask, deg, out);
    let (a, b) = (pairs[i].0 as usize, pairs[i].1 as usize);
    if deg[a] < 3 && deg[b] < 3 {
        deg[a] += 1;
        deg[b] += 1;
        subsets(pairs, i + 1, mask | 1 << i, deg, out);
        deg[a] -= 1;
        deg[b] -= 1;
    }
}

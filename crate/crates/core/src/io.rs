//! graph6 and edge-list formats, and certificate JSON.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, VertexId, MAX_DEGREE};
use crate::solver::{Rule, SolveCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("malformed graph6: {0}")]
    MalformedGraph6(String),
    #[error("vertex {0} has degree above 3")]
    NotSubcubic(VertexId),
    #[error("line {line}: cannot parse {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("{0}")]
    Graph(GraphError),
}

impl From<GraphError> for IoError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::DegreeOverflow(v) => IoError::NotSubcubic(v),
            GraphError::DuplicateEdge(e) => IoError::DuplicateEdge(e),
            GraphError::SelfLoop(v) => IoError::SelfLoop(v),
            other => IoError::Graph(other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Graph6,
    EdgeList,
}

/// An encoded graph together with its format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDocument {
    pub format: GraphFormat,
    pub payload: Vec<u8>,
}

impl GraphDocument {
    pub fn encode(g: &Graph, format: GraphFormat) -> Self {
        let payload = match format {
            GraphFormat::Graph6 => write_graph6(g),
            GraphFormat::EdgeList => write_edgelist(g).into_bytes(),
        };
        GraphDocument { format, payload }
    }

    pub fn decode(&self) -> Result<Graph, IoError> {
        match self.format {
            GraphFormat::Graph6 => parse_graph6(&self.payload),
            GraphFormat::EdgeList => {
                let text = std::str::from_utf8(&self.payload).map_err(|_| IoError::MalformedLine {
                    line: 0,
                    text: "<invalid utf-8>".into(),
                })?;
                parse_edgelist(text)
            }
        }
    }
}

fn bad(msg: impl Into<String>) -> IoError {
    IoError::MalformedGraph6(msg.into())
}

fn chunk(b: u8) -> Result<u64, IoError> {
    if (63..=126).contains(&b) {
        Ok(u64::from(b - 63))
    } else {
        Err(bad(format!("byte {b:#04x} outside 63..=126")))
    }
}

/// Decodes one graph6 line. A single trailing newline is accepted.
pub fn parse_graph6(line: &[u8]) -> Result<Graph, IoError> {
    let line = line.strip_suffix(b"\n").unwrap_or(line);
    if line.is_empty() {
        return Err(bad("empty line"));
    }
    let (n, body) = if line[0] != 126 {
        (chunk(line[0])?, &line[1..])
    } else if line.len() >= 2 && line[1] != 126 {
        if line.len() < 4 {
            return Err(bad("truncated size"));
        }
        let n = line[1..4].iter().try_fold(0u64, |acc, &b| Ok::<_, IoError>(acc << 6 | chunk(b)?))?;
        (n, &line[4..])
    } else {
        if line.len() < 8 {
            return Err(bad("truncated size"));
        }
        let n = line[2..8].iter().try_fold(0u64, |acc, &b| Ok::<_, IoError>(acc << 6 | chunk(b)?))?;
        (n, &line[8..])
    };
    let n = usize::try_from(n).map_err(|_| bad("size overflow"))?;
    if n > u32::MAX as usize {
        return Err(bad("size overflow"));
    }
    let bits = n * n.saturating_sub(1) / 2;
    if body.len() != bits.div_ceil(6) {
        return Err(bad(format!("expected {} data bytes for n = {n}, found {}", bits.div_ceil(6), body.len())));
    }
    let mut g = Graph::with_vertices(n);
    let mut k = 0usize;
    for (pos, &b) in body.iter().enumerate() {
        let word = chunk(b)?;
        for shift in (0..6).rev() {
            let bit = word >> shift & 1 == 1;
            if k >= bits {
                if bit {
                    return Err(bad(format!("nonzero padding in byte {pos}")));
                }
                continue;
            }
            if bit {
                let (i, j) = column_pair(k);
                let (a, b) = (VertexId(i as u32), VertexId(j as u32));
                for x in [a, b] {
                    if g.degree(x) == MAX_DEGREE {
                        return Err(IoError::NotSubcubic(x));
                    }
                }
                g.add_edge(a, b)?;
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Position `k` in the column-wise upper triangle, as `(i, j)` with `i < j`.
fn column_pair(k: usize) -> (usize, usize) {
    // largest j with j(j-1)/2 <= k
    let mut j = ((((8 * k + 1) as f64).sqrt() + 1.0) / 2.0) as usize;
    while j * (j - 1) / 2 > k {
        j -= 1;
    }
    while (j + 1) * j / 2 <= k {
        j += 1;
    }
    (k - j * (j - 1) / 2, j)
}

fn size_header(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|i| (n >> (6 * i) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|i| (n >> (6 * i) & 63) as u8 + 63));
    }
}

/// graph6 encoding, without a trailing newline. Graphs with deleted
/// vertices are written in compacted form.
pub fn write_graph6(g: &Graph) -> Vec<u8> {
    let compacted;
    let g = if g.id_bound() == g.n() {
        g
    } else {
        compacted = g.compact().0;
        &compacted
    };
    let n = g.n();
    let mut out = Vec::new();
    size_header(n, &mut out);
    let bits = n * n.saturating_sub(1) / 2;
    let mut body = vec![0u8; bits.div_ceil(6)];
    for e in g.edges() {
        let (i, j) = (e.u().index(), e.v().index());
        let k = j * (j - 1) / 2 + i;
        body[k / 6] |= 1 << (5 - k % 6);
    }
    out.extend(body.into_iter().map(|b| b + 63));
    out
}

fn parse_line(line_no: usize, raw: &str) -> Result<Option<(u64, u64)>, IoError> {
    let text = raw.split('#').next().unwrap_or("").trim();
    if text.is_empty() {
        return Ok(None);
    }
    let malformed = || IoError::MalformedLine {
        line: line_no,
        text: raw.to_string(),
    };
    let mut it = text.split_whitespace();
    let a = it.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?;
    let b = it.next().and_then(|s| s.parse().ok()).ok_or_else(malformed)?;
    if it.next().is_some() {
        return Err(malformed());
    }
    Ok(Some((a, b)))
}

/// Parses `u v` lines, `#` comments and blank lines ignored. The first data
/// line is read as an `n m` header exactly when `m` equals the number of
/// following data lines and `n` is positive and exceeds every vertex id in
/// them.
pub fn parse_edgelist(text: &str) -> Result<Graph, IoError> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if let Some(p) = parse_line(i + 1, raw)? {
            rows.push(p);
        }
    }
    let max_id = |rs: &[(u64, u64)]| rs.iter().map(|&(a, b)| a.max(b)).max();
    let (n, edges) = match rows.split_first() {
        Some((&(hn, hm), rest)) if hn > 0 && hm as usize == rest.len() && max_id(rest).is_none_or(|x| x < hn) => {
            (hn, rest)
        }
        _ => (max_id(&rows).map_or(0, |x| x + 1), &rows[..]),
    };
    let n = u32::try_from(n).map_err(|_| IoError::MalformedLine {
        line: 1,
        text: format!("vertex count {n} too large"),
    })?;
    let mut g = Graph::with_vertices(n as usize);
    for &(a, b) in edges {
        let (a, b) = (VertexId(a as u32), VertexId(b as u32));
        if a == b {
            return Err(IoError::SelfLoop(a));
        }
        g.add_edge(a, b)?;
    }
    Ok(g)
}

/// `n m` header followed by one `u v` line per edge. Compacts first if the
/// graph has deleted vertices.
pub fn write_edgelist(g: &Graph) -> String {
    if g.n() == 0 {
        return String::new();
    }
    let compacted;
    let g = if g.id_bound() == g.n() {
        g
    } else {
        compacted = g.compact().0;
        &compacted
    };
    let mut out = format!("{} {}\n", g.n(), g.m());
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.u(), e.v()));
    }
    out
}

#[derive(Serialize)]
struct TraceEntry<'a> {
    rule: Rule,
    deleted: &'a [VertexId],
    added: &'a [Edge],
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct CertificateJson<'a> {
    schema: u32,
    n: usize,
    m: usize,
    n1: usize,
    I: u32,
    K: u32,
    lambda_times_6: i64,
    matching: Vec<Edge>,
    matching_size: usize,
    rule_trace: Vec<TraceEntry<'a>>,
    valid: bool,
    k33_special: bool,
    elapsed_ms: f64,
}

/// One-line JSON object for a certificate.
pub fn emit_certificate_json(cert: &SolveCertificate) -> String {
    let b = &cert.bound;
    let doc = CertificateJson {
        schema: 1,
        n: b.census.n,
        m: b.census.m,
        n1: b.census.n1,
        I: b.cubic,
        K: b.k2,
        lambda_times_6: b.lambda_times_6,
        matching: cert.matching.iter().collect(),
        matching_size: cert.matching.len(),
        rule_trace: cert
            .trace
            .iter()
            .map(|s| TraceEntry {
                rule: s.rule,
                deleted: &s.deleted,
                added: &s.added,
            })
            .collect(),
        valid: cert.valid,
        k33_special: cert.k33_special,
        elapsed_ms: cert.elapsed_ms,
    };
    serde_json::to_string(&doc).expect("certificate serializes")
}

//! Minimum maximal matchings in subcubic graphs.
//!
//! [`solver::solve`] returns a maximal matching of a connected subcubic
//! graph with at most `floor((4n - m + 2I + K - n1) / 6)` edges, where `I`
//! marks a cubic graph, `K` marks `K2` and `n1` counts degree-one vertices
//! (`K3,3` is the one graph allowed 3). The result carries a trace of the
//! reductions used. [`oracle`] computes the exact minimum for small graphs.

pub mod generators;
pub mod graph;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod solver;
pub mod verify;

pub use graph::{Edge, Graph, GraphError, SmallPattern, VertexId};
pub use matching::{bound_report, is_maximal_matching, BoundReport, Matching};
pub use oracle::{gamma_exact, gamma_exact_avoiding, OracleError, OracleResult};
pub use solver::{solve, solve_all, solve_avoiding, PendantConstraint, Rule, SolveCertificate, SolveError, SolverOptions};

//! Batch verification: solve every graph, check the certificate, optionally
//! compare with the exact oracle, and aggregate.

use serde::Serialize;

use crate::graph::{Graph, SmallPattern};
use crate::matching::{gamma_lower_bound, is_maximal_matching};
use crate::oracle::{gamma_exact, OracleError};
use crate::solver::{solve, solve_all, SolveCertificate, SolveError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub with_oracle: bool,
    /// Node budget per oracle call.
    pub oracle_budget: Option<u64>,
    /// Graphs above this size skip the oracle.
    pub oracle_max_n: usize,
    /// Solve disconnected inputs component by component.
    pub per_component: bool,
    /// Worker threads; 0 uses the default pool.
    pub jobs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            with_oracle: false,
            oracle_budget: None,
            oracle_max_n: 30,
            per_component: false,
            jobs: 0,
        }
    }
}

/// Result for one input graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphOutcome {
    pub index: usize,
    pub n: usize,
    pub m: usize,
    pub matching_size: Option<usize>,
    pub lambda_times_6: i64,
    pub gamma_lower: usize,
    pub gamma_exact: Option<usize>,
    pub oracle_skipped: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioStats {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

impl RatioStats {
    fn of(xs: &[f64]) -> Option<Self> {
        if xs.is_empty() {
            return None;
        }
        let (mut min, mut max, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for &x in xs {
            min = min.min(x);
            max = max.max(x);
            sum += x;
        }
        Some(RatioStats {
            min,
            mean: sum / xs.len() as f64,
            max,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub input: usize,
    pub property: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchReport {
    pub total: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
    /// `6 |M| / lambda_times_6`.
    pub bound_ratio: Option<RatioStats>,
    /// `|M| / gamma_lower_bound`.
    pub lower_ratio: Option<RatioStats>,
    pub oracle_checked: usize,
    pub oracle_skipped: usize,
}

impl BatchReport {
    pub fn from_outcomes(outcomes: &[GraphOutcome]) -> Self {
        let mut failures = Vec::new();
        let mut bound = Vec::new();
        let mut lower = Vec::new();
        for o in outcomes {
            failures.extend(o.failures.iter().map(|p| Failure {
                input: o.index,
                property: p.clone(),
            }));
            if let Some(k) = o.matching_size {
                if o.lambda_times_6 > 0 {
                    bound.push(6.0 * k as f64 / o.lambda_times_6 as f64);
                }
                if o.gamma_lower > 0 {
                    lower.push(k as f64 / o.gamma_lower as f64);
                }
            }
        }
        BatchReport {
            total: outcomes.len(),
            passed: outcomes.iter().filter(|o| o.failures.is_empty()).count(),
            failures,
            bound_ratio: RatioStats::of(&bound),
            lower_ratio: RatioStats::of(&lower),
            oracle_checked: outcomes.iter().filter(|o| o.gamma_exact.is_some()).count(),
            oracle_skipped: outcomes.iter().filter(|o| o.oracle_skipped).count(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_certificate(g: &Graph, cert: &SolveCertificate, failures: &mut Vec<String>) {
    if !is_maximal_matching(g, &cert.matching) {
        failures.push("matching is not maximal".into());
    }
    if !cert.bound.admits(cert.matching.len()) {
        failures.push(format!(
            "size {} exceeds limit {}",
            cert.matching.len(),
            cert.bound.size_limit
        ));
    }
}

fn check_oracle(g: &Graph, size: Option<usize>, gamma: usize, failures: &mut Vec<String>) {
    if size.is_some_and(|k| gamma > k) {
        failures.push("oracle value exceeds solver size".into());
    }
    if gamma < gamma_lower_bound(g) {
        failures.push("oracle value below the lower bound".into());
    }
    if g.is_connected() {
        let base = 4 * g.n() as i64 - g.m() as i64;
        let six_gamma = 6 * gamma as i64;
        let k33 = g.is_isomorphic_small(SmallPattern::K33);
        if (six_gamma == base + 3) != k33 {
            failures.push("equality case does not match K3,3".into());
        }
        if !g.degree_census().is_cubic() && six_gamma > base {
            failures.push("non-cubic graph above (4n-m)/6".into());
        }
    }
}

/// Solves and checks one graph.
pub fn verify_graph(index: usize, g: &Graph, opts: &VerifyOptions) -> GraphOutcome {
    let mut failures = Vec::new();
    let result = if opts.per_component { solve_all(g) } else { solve(g) };
    let (size, lambda) = match &result {
        Ok(cert) => {
            check_certificate(g, cert, &mut failures);
            (Some(cert.matching.len()), cert.bound.lambda_times_6)
        }
        Err(e) => {
            failures.push(match e {
                SolveError::InternalInvariantViolation(v) => format!("solver invariant: {}", v.message),
                other => format!("solver error: {other}"),
            });
            (None, 0)
        }
    };
    let mut gamma = None;
    let mut skipped = false;
    if opts.with_oracle {
        if g.n() > opts.oracle_max_n {
            skipped = true;
        } else {
            match gamma_exact(g, opts.oracle_budget) {
                Ok(r) => {
                    check_oracle(g, size, r.gamma, &mut failures);
                    gamma = Some(r.gamma);
                }
                Err(OracleError::BudgetExceeded { .. } | OracleError::TooLarge(_)) => skipped = true,
                Err(e) => failures.push(format!("oracle error: {e}")),
            }
        }
    }
    GraphOutcome {
        index,
        n: g.n(),
        m: g.m(),
        matching_size: size,
        lambda_times_6: lambda,
        gamma_lower: gamma_lower_bound(g),
        gamma_exact: gamma,
        oracle_skipped: skipped,
        failures,
    }
}

pub fn verify_outcomes_sequential(graphs: &[Graph], opts: &VerifyOptions) -> Vec<GraphOutcome> {
    graphs.iter().enumerate().map(|(i, g)| verify_graph(i, g, opts)).collect()
}

#[cfg(feature = "parallel")]
pub fn verify_outcomes_parallel(graphs: &[Graph], opts: &VerifyOptions) -> Vec<GraphOutcome> {
    use rayon::prelude::*;
    let work = || -> Vec<GraphOutcome> {
        graphs
            .par_iter()
            .enumerate()
            .map(|(i, g)| verify_graph(i, g, opts))
            .collect()
    };
    if opts.jobs == 0 {
        return work();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

pub fn verify_batch_sequential(graphs: &[Graph], opts: &VerifyOptions) -> BatchReport {
    BatchReport::from_outcomes(&verify_outcomes_sequential(graphs, opts))
}

#[cfg(feature = "parallel")]
pub fn verify_batch_parallel(graphs: &[Graph], opts: &VerifyOptions) -> BatchReport {
    BatchReport::from_outcomes(&verify_outcomes_parallel(graphs, opts))
}

/// Per-graph outcomes in input order, in parallel when the `parallel`
/// feature is on and more than one job is allowed.
pub fn verify_outcomes(graphs: &[Graph], opts: &VerifyOptions) -> Vec<GraphOutcome> {
    #[cfg(feature = "parallel")]
    if opts.jobs != 1 {
        return verify_outcomes_parallel(graphs, opts);
    }
    verify_outcomes_sequential(graphs, opts)
}

pub fn verify_batch(graphs: &[Graph], opts: &VerifyOptions) -> BatchReport {
    BatchReport::from_outcomes(&verify_outcomes(graphs, opts))
}

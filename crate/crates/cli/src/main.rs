//! `mmm`: solve, exact, gen and verify over graph6 or edge-list input.
//!
//! Exit codes: 0 success, 2 bad input or parameters, 3 contract violation or
//! failed verification, 4 oracle budget exhausted.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use mmm_core::generators::{
    enumerate_connected_subcubic, gen_gk, gen_named, gen_random_cubic, GeneratorError, Named,
};
use mmm_core::io::{emit_certificate_json, parse_edgelist, parse_graph6, write_graph6};
use mmm_core::matching::gamma_lower_bound;
use mmm_core::oracle::{gamma_exact, OracleError};
use mmm_core::solver::{solve, solve_all, SolveError};
use mmm_core::verify::{verify_outcomes, BatchReport, VerifyOptions};
use mmm_core::Graph;

const EXIT_INPUT: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "mmm", version, about = "Small maximal matchings in subcubic graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// One graph per line.
    Graph6,
    /// The whole input is one graph.
    Edgelist,
}

#[derive(Args)]
struct Input {
    /// Input file; stdin when omitted.
    path: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "graph6")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Solve each graph and print one certificate per line.
    Solve {
        #[command(flatten)]
        input: Input,
        /// Accept disconnected graphs and solve each component.
        #[arg(long)]
        per_component: bool,
        /// Print `n,matching_size,lambda,gamma_lower` CSV instead of JSON.
        #[arg(long)]
        plot_data: bool,
    },
    /// Exact minimum maximal matching by branch and bound.
    Exact {
        #[command(flatten)]
        input: Input,
        /// Search-node limit per graph.
        #[arg(long, env = "MMM_ORACLE_BUDGET")]
        budget: Option<u64>,
    },
    /// Write generated graphs as graph6 lines.
    Gen(GenArgs),
    /// Solve and check a batch, printing a JSON report.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Also run the exact oracle on graphs up to `--oracle-max-n` vertices.
        #[arg(long)]
        with_oracle: bool,
        #[arg(long, default_value_t = 30)]
        oracle_max_n: usize,
        #[arg(long, env = "MMM_ORACLE_BUDGET")]
        budget: Option<u64>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        per_component: bool,
        /// Print per-graph CSV instead of the report.
        #[arg(long)]
        plot_data: bool,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("family").required(true)))]
struct GenArgs {
    #[arg(long, group = "family")]
    k33: bool,
    #[arg(long, group = "family", value_name = "K")]
    gk: Option<usize>,
    #[arg(long, group = "family", num_args = 2, value_names = ["N", "SEED"])]
    random_cubic: Option<Vec<u64>>,
    /// Every connected subcubic labeled graph on N vertices.
    #[arg(long, group = "family", value_name = "N")]
    enumerate: Option<usize>,
    #[arg(long, group = "family", value_name = "N")]
    cycle: Option<usize>,
    #[arg(long, group = "family", value_name = "N")]
    path: Option<usize>,
    /// One of k2, k4, k33, k33-minus, petersen, cube.
    #[arg(long, group = "family", value_name = "NAME")]
    named: Option<String>,
}

/// Process failure with its exit code; the message goes to stderr.
struct Fail(u8, String);

impl Fail {
    fn input(msg: impl Into<String>) -> Self {
        Fail(EXIT_INPUT, msg.into())
    }
}

fn read_input(input: &Input) -> Result<Vec<Graph>, Fail> {
    let mut raw = Vec::new();
    match &input.path {
        Some(p) => raw = std::fs::read(p).map_err(|e| Fail::input(format!("{}: {e}", p.display())))?,
        None => {
            io::stdin().lock().read_to_end(&mut raw).map_err(|e| Fail::input(e.to_string()))?;
        }
    }
    match input.format {
        Format::Graph6 => {
            let mut out = Vec::new();
            for (i, line) in raw.split(|&b| b == b'\n').enumerate() {
                let line = line.strip_prefix(b">>graph6<<").unwrap_or(line);
                if line.is_empty() {
                    continue;
                }
                out.push(parse_graph6(line).map_err(|e| Fail::input(format!("line {}: {e}", i + 1)))?);
            }
            Ok(out)
        }
        Format::Edgelist => {
            let text = String::from_utf8(raw).map_err(|_| Fail::input("input is not UTF-8"))?;
            Ok(vec![parse_edgelist(&text).map_err(|e| Fail::input(e.to_string()))?])
        }
    }
}

fn emit(out: &mut impl Write, text: &str) -> Result<(), Fail> {
    writeln!(out, "{text}").map_err(|e| Fail(1, e.to_string()))
}

fn cmd_solve(input: &Input, per_component: bool, plot: bool) -> Result<(), Fail> {
    let graphs = read_input(input)?;
    let mut out = io::stdout().lock();
    if plot {
        emit(&mut out, "n,matching_size,lambda,gamma_lower")?;
    }
    let mut worst = None;
    for (i, g) in graphs.iter().enumerate() {
        let res = if per_component { solve_all(g) } else { solve(g) };
        match res {
            Ok(cert) if plot => {
                let lambda = cert.bound.lambda_times_6 as f64 / 6.0;
                emit(&mut out, &format!("{},{},{lambda},{}", g.n(), cert.size(), gamma_lower_bound(g)))?;
            }
            Ok(cert) => emit(&mut out, &emit_certificate_json(&cert))?,
            Err(e) => {
                let code = match e {
                    SolveError::InternalInvariantViolation(_) => EXIT_VIOLATION,
                    _ => EXIT_INPUT,
                };
                eprintln!("graph {i}: {e}");
                worst = worst.max(Some(code));
            }
        }
    }
    match worst {
        Some(code) => Err(Fail(code, "some graphs were not solved".into())),
        None => Ok(()),
    }
}

fn cmd_exact(input: &Input, budget: Option<u64>) -> Result<(), Fail> {
    let graphs = read_input(input)?;
    let mut out = io::stdout().lock();
    for (i, g) in graphs.iter().enumerate() {
        match gamma_exact(g, budget) {
            Ok(r) => emit(&mut out, &serde_json::to_string(&r).expect("serializable"))?,
            Err(e @ OracleError::BudgetExceeded { .. }) => return Err(Fail(EXIT_BUDGET, format!("graph {i}: {e}"))),
            Err(e) => return Err(Fail::input(format!("graph {i}: {e}"))),
        }
    }
    Ok(())
}

fn named(name: &str) -> Result<Named, Fail> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "k2" => Named::K2,
        "k4" => Named::K4,
        "k33" => Named::K33,
        "k33-minus" | "k33_minus" => Named::K33Minus,
        "petersen" => Named::Petersen,
        "cube" | "q3" | "cube-q3" => Named::CubeQ3,
        other => return Err(Fail::input(format!("unknown graph name {other:?}"))),
    })
}

fn cmd_gen(args: &GenArgs) -> Result<(), Fail> {
    let bad = |e: GeneratorError| Fail::input(e.to_string());
    let graphs: Box<dyn Iterator<Item = Graph>> = if args.k33 {
        Box::new(std::iter::once(gen_named(Named::K33).map_err(bad)?))
    } else if let Some(k) = args.gk {
        Box::new(std::iter::once(gen_gk(k).map_err(bad)?.graph))
    } else if let Some(v) = &args.random_cubic {
        Box::new(std::iter::once(gen_random_cubic(v[0] as usize, v[1]).map_err(bad)?))
    } else if let Some(n) = args.enumerate {
        Box::new(enumerate_connected_subcubic(n).map_err(bad)?)
    } else if let Some(n) = args.cycle {
        Box::new(std::iter::once(gen_named(Named::Cycle(n)).map_err(bad)?))
    } else if let Some(n) = args.path {
        Box::new(std::iter::once(gen_named(Named::Path(n)).map_err(bad)?))
    } else if let Some(name) = &args.named {
        Box::new(std::iter::once(gen_named(named(name)?).map_err(bad)?))
    } else {
        return Err(Fail::input("no family given"));
    };
    let mut out = io::BufWriter::new(io::stdout().lock());
    for g in graphs {
        out.write_all(&write_graph6(&g)).and_then(|_| out.write_all(b"\n")).map_err(|e| Fail(1, e.to_string()))?;
    }
    out.flush().map_err(|e| Fail(1, e.to_string()))
}

fn cmd_verify(input: &Input, opts: VerifyOptions, plot: bool) -> Result<(), Fail> {
    let graphs = read_input(input)?;
    let outcomes = verify_outcomes(&graphs, &opts);
    let report = BatchReport::from_outcomes(&outcomes);
    let mut out = io::stdout().lock();
    if plot {
        let mut csv = String::from("n,matching_size,lambda,gamma_lower\n");
        for o in &outcomes {
            let size = o.matching_size.map(|k| k.to_string()).unwrap_or_default();
            let _ = writeln!(csv, "{},{size},{},{}", o.n, o.lambda_times_6 as f64 / 6.0, o.gamma_lower);
        }
        write!(out, "{csv}").map_err(|e| Fail(1, e.to_string()))?;
    } else {
        emit(&mut out, &serde_json::to_string(&report).expect("serializable"))?;
    }
    for f in &report.failures {
        eprintln!("graph {}: {}", f.input, f.property);
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Fail(EXIT_VIOLATION, format!("{} of {} graphs failed", report.total - report.passed, report.total)))
    }
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.command {
        Command::Solve {
            input,
            per_component,
            plot_data,
        } => cmd_solve(&input, per_component, plot_data),
        Command::Exact { input, budget } => cmd_exact(&input, budget),
        Command::Gen(args) => cmd_gen(&args),
        Command::Verify {
            input,
            with_oracle,
            oracle_max_n,
            budget,
            jobs,
            per_component,
            plot_data,
        } => cmd_verify(
            &input,
            VerifyOptions {
                with_oracle,
                oracle_budget: budget,
                oracle_max_n,
                per_component,
                jobs,
            },
            plot_data,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("mmm: {msg}");
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn names() {
        assert_eq!(named("Petersen").ok().map(|n| n == Named::Petersen), Some(true));
        assert!(named("k5").is_err());
    }
}

use std::io::Write;
use std::process::{Command, Output, Stdio};

use mmm_core::generators::{enumerate_connected_subcubic, gen_gk, gen_named, Named};
use mmm_core::io::write_graph6;
use mmm_core::{Graph, VertexId};
use serde_json::Value;

fn mmm(args: &[&str], stdin: &[u8]) -> Output {
    mmm_env(args, stdin, &[])
}

fn mmm_env(args: &[&str], stdin: &[u8], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mmm"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.env_remove("MMM_ORACLE_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn line(g: &Graph) -> Vec<u8> {
    let mut v = write_graph6(g);
    v.push(b'\n');
    v
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn solve_k33() {
    let out = mmm(&["solve", "--format", "graph6"], &line(&gen_named(Named::K33).unwrap()));
    assert_eq!(out.status.code(), Some(0));
    let docs = json_lines(&out);
    assert_eq!(docs.len(), 1);
    assert_eq!(docs[0]["matching_size"], 3);
    assert_eq!(docs[0]["k33_special"], true);
    assert_eq!(docs[0]["schema"], 1);
    assert_eq!(docs[0]["valid"], true);
}

#[test]
fn solve_rejects_degree_four() {
    // K5
    let out = mmm(&["solve"], b"D~{\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn solve_per_component() {
    let mut g = Graph::with_vertices(6);
    for (a, b) in [(0, 1), (2, 3), (3, 4), (4, 5), (2, 5)] {
        g.add_edge(VertexId(a), VertexId(b)).unwrap();
    }
    let out = mmm(&["solve", "--per-component"], &line(&g));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out)[0]["matching_size"], 3);
    let out = mmm(&["solve"], &line(&g));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_edgelist_and_plot() {
    let out = mmm(&["solve", "--format", "edgelist"], b"0 1\n1 2\n2 3\n3 0\n");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out)[0]["matching_size"], 2);
    let out = mmm(&["solve", "--plot-data"], &line(&gen_named(Named::K4).unwrap()));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "n,matching_size,lambda,gamma_lower");
    assert!(rows[1].starts_with("4,2,"));
}

#[test]
fn exact_values() {
    let mut input = Vec::new();
    input.extend(line(&gen_named(Named::K4).unwrap()));
    input.extend(line(&gen_named(Named::Cycle(9)).unwrap()));
    let out = mmm(&["exact"], &input);
    assert_eq!(out.status.code(), Some(0));
    let gammas: Vec<Value> = json_lines(&out).iter().map(|d| d["gamma"].clone()).collect();
    assert_eq!(gammas, vec![Value::from(2), Value::from(3)]);
}

#[test]
fn exact_g4() {
    let out = mmm(&["exact"], &line(&gen_gk(4).unwrap().graph));
    assert_eq!(json_lines(&out)[0]["gamma"], 10);
}

#[test]
fn exact_budget() {
    let g = line(&gen_gk(3).unwrap().graph);
    assert_eq!(mmm(&["exact", "--budget", "1"], &g).status.code(), Some(4));
    assert_eq!(mmm_env(&["exact"], &g, &[("MMM_ORACLE_BUDGET", "1")]).status.code(), Some(4));
}

#[test]
fn gen_families() {
    let out = mmm(&["gen", "--gk", "3"], b"");
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    let g = mmm_core::io::parse_graph6(text.trim_end().as_bytes()).unwrap();
    assert_eq!((g.n(), g.m()), (18, 27));

    let out = mmm(&["gen", "--enumerate", "5"], b"");
    let count = String::from_utf8(out.stdout).unwrap().lines().count();
    assert_eq!(count, enumerate_connected_subcubic(5).unwrap().count());

    let a = mmm(&["gen", "--random-cubic", "50", "7"], b"");
    let b = mmm(&["gen", "--random-cubic", "50", "7"], b"");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    assert_eq!(mmm(&["gen", "--random-cubic", "7", "1"], b"").status.code(), Some(2));
    assert_eq!(mmm(&["gen", "--cycle", "2"], b"").status.code(), Some(2));
    assert_eq!(mmm(&["gen"], b"").status.code(), Some(2));
    assert_eq!(mmm(&["gen", "--named", "petersen"], b"").status.code(), Some(0));
}

#[test]
fn verify_enumeration_with_oracle() {
    let gen = mmm(&["gen", "--enumerate", "6"], b"");
    for jobs in ["1", "4"] {
        let out = mmm(&["verify", "--with-oracle", "--jobs", jobs], &gen.stdout);
        assert_eq!(out.status.code(), Some(0));
        let report = &json_lines(&out)[0];
        assert_eq!(report["failures"].as_array().unwrap().len(), 0);
        assert_eq!(report["total"], report["passed"]);
        assert_eq!(report["total"], report["oracle_checked"]);
    }
}

#[test]
fn verify_gk_family() {
    let mut input = Vec::new();
    for k in 1..=7 {
        input.extend(line(&gen_gk(k).unwrap().graph));
    }
    let out = mmm(&["verify", "--with-oracle", "--oracle-max-n", "24", "--plot-data"], &input);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 8);
}

#[test]
fn verify_reports_failures() {
    let mut g = Graph::with_vertices(4);
    g.add_edge(VertexId(0), VertexId(1)).unwrap();
    g.add_edge(VertexId(2), VertexId(3)).unwrap();
    let out = mmm(&["verify"], &line(&g));
    assert_eq!(out.status.code(), Some(3));
    let report = &json_lines(&out)[0];
    assert_eq!(report["passed"], 0);
    assert_eq!(mmm(&["verify", "--per-component"], &line(&g)).status.code(), Some(0));
    assert_eq!(mmm(&["verify"], b"not graph6 {\n").status.code(), Some(2));
}

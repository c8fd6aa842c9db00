//! The command-line interface, driven in-process.

mod common;

use std::io::Write;
use std::path::Path;
use tempfile::NamedTempFile;
use treeid::cli::{run, CliOutput, EXIT_INCOMPLETE, EXIT_INPUT, EXIT_OK};
use treeid::engine::{run_treeid, EngineConfig, IdReport};
use treeid::graph::{GraphDoc, TreeGraph};
use treeid::symexpr::ExprDoc;

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn treeid(args: &[&str]) -> CliOutput {
    run(std::iter::once("treeid").chain(args.iter().copied()))
}

fn on_graph(cmd: &str, g: &TreeGraph, extra: &[&str]) -> CliOutput {
    let f = file(&g.to_edge_list());
    let path = f.path().to_str().unwrap();
    let mut args = vec![cmd, "--graph", path];
    args.extend_from_slice(extra);
    treeid(&args)
}

#[test]
fn identify_instrument_chain() {
    let out = on_graph("identify", &common::g1(), &[]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.starts_with("λ(0→1) = σ01/σ00\nλ(1→2) = σ02/σ01\n"), "{}", out.stdout);
}

#[test]
fn identify_unidentifiable_special_graph() {
    let (_, g, _) = common::special_path_graphs().remove(0);
    let out = on_graph("identify", &g, &[]);
    assert_eq!(out.code, EXIT_INCOMPLETE);
    assert_eq!(out.stdout.matches(": unidentified").count(), 4);
}

#[test]
fn identify_missing_file() {
    let out = treeid(&["identify", "--graph", "/nonexistent/graph.txt"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("cannot read"));
}

#[test]
fn identify_rejects_bad_input() {
    let f = file("0->1 2->1");
    let out = treeid(&["identify", "--graph", f.path().to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("two parents"), "{}", out.stderr);
    let out = treeid(&["identify", "--graph", "x", "--pit-trials", "0"]);
    assert_eq!(out.code, EXIT_INPUT);
    let out = treeid(&["identify", "--graph", "x", "--seed", "soon"]);
    assert_eq!(out.code, EXIT_INPUT);
}

#[test]
fn identify_document_round_trip_and_reproducibility() {
    let g = common::g3();
    let doc = file(&serde_json::to_string(&GraphDoc::from_graph(&g)).unwrap());
    let path = doc.path().to_str().unwrap();
    let args = ["identify", "--graph", path, "--format", "doc", "--output", "doc"];
    let a = treeid(&args);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, treeid(&args).stdout);
    let parsed = IdReport::from_json(&a.stdout).unwrap();
    assert_eq!(parsed, run_treeid(&g, &EngineConfig::default()));
}

#[test]
fn seed_is_recorded() {
    let out = on_graph("identify", &common::g2(), &["--seed", "17", "--output", "doc"]);
    assert_eq!(IdReport::from_json(&out.stdout).unwrap().config.seed, 17);
    let out = on_graph("identify", &common::g2(), &["--seed", "random"]);
    assert_eq!(out.code, EXIT_OK);
}

#[test]
fn verify_fixtures() {
    let out = on_graph("verify", &common::g2(), &["--models", "100"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout, "100/100 exact\n");
    let (_, g) = common::hard_trees().remove(0);
    assert_eq!(on_graph("verify", &g, &[]).code, EXIT_OK);
}

#[test]
fn verify_catches_corrupted_report() {
    let g = common::g2();
    let mut r = run_treeid(&g, &EngineConfig::default());
    // Swap nodes 1 and 2 in every symbol of the first formula.
    let swap = |v: usize| [0, 2, 1, 3, 4][v];
    let f = &r.formulas(&g).unwrap()[0].1[0];
    let bad = f.map_symbols(&|i, j| (swap(i), swap(j)));
    r.edges[0].formulas[0] = ExprDoc::from_expr(&bad, &|v| v);
    let report = file(&r.to_json());
    let out = on_graph("verify", &g, &["--models", "10", "--report", report.path().to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INCOMPLETE);
    assert!(out.stdout.contains("violation: model seed"), "{}", out.stdout);
}

#[test]
fn verify_rejects_unparsable_report() {
    let report = file("{\"edges\": 3}");
    let out = on_graph("verify", &common::g1(), &["--report", report.path().to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
}

#[test]
fn cycles_listing() {
    let out = on_graph("cycles", &common::g3(), &[]);
    assert_eq!(out.stdout, "1<->2<->3\n1<->3<->4\n1<->2<->3<->4\n");
    assert!(out.stderr.is_empty());
    let out = on_graph("cycles", &common::g3(), &["--max-cycles", "1"]);
    assert_eq!(out.stdout, "1<->2<->3\n");
    assert!(out.stderr.contains("truncated"));
    let out = on_graph("cycles", &common::g3(), &["--max-cycle-len", "3", "--output", "doc"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["cycles"], serde_json::json!([[1, 2, 3], [1, 3, 4]]));
}

#[test]
fn cycles_on_complete_graph() {
    let f = file("0->1 0->2 0->3 1<->2 1<->3 2<->3");
    let out = treeid(&["cycles", "--graph", f.path().to_str().unwrap()]);
    assert_eq!(out.stdout, "no missing cycles\n");
}

#[test]
fn canon_commands() {
    let f = file("0->1 0->2 0<->1 0<->2");
    let out = treeid(&["canon", "--graph", f.path().to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("not a path graph"));

    let (_, g4, _) = common::special_path_graphs().remove(3);
    let out = on_graph("canon", &g4, &[]);
    assert_eq!(out.code, EXIT_OK);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next().unwrap(), g4.to_edge_list());
    for (i, l) in lines.enumerate() {
        assert_eq!(l, format!("{i} -> {i}"));
    }

    // Cycle 1-2-3 on a longer path: nodes 4 and 5 only add confounded tail.
    let padded = common::path_missing_cycle(5, &[1, 2, 3]);
    let out = on_graph("canon", &padded, &[]);
    assert!(out.stdout.contains("4 dropped\n5 dropped\n"), "{}", out.stdout);
    let compact = common::path_missing_cycle(3, &[1, 2, 3]);
    assert!(out.stdout.starts_with(&compact.to_edge_list()));
}

#[test]
fn help_goes_to_stdout() {
    let out = treeid(&["--help"]);
    assert_eq!(out.code, EXIT_OK);
    for cmd in ["identify", "verify", "cycles", "canon"] {
        assert!(out.stdout.contains(cmd));
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_treeid")).exists());
}

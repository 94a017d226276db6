use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use specwalk_core::catalog;
use specwalk_core::graph::{serialize_graph, GraphFormat};
use specwalk_core::Graph;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specwalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn g6(g: &Graph) -> String {
    serialize_graph(g, GraphFormat::Graph6).unwrap()
}

fn read_json(path: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn analyze_p3_pair() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write(dir.path(), "p3.edgelist", "3 2\n0 1\n1 2\n");
    let out = dir.path().join("r.json");
    let o = run(&["analyze", &p3, "--pair", "0", "2", "--both", "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("strongly_cospectral=true"));
    let v = read_json(out.to_str().unwrap());
    assert_eq!(v["schema"], "specwalk/1");
    assert_eq!(v["pairs"][0]["strongly_cospectral"], true);
    assert_eq!(v["pairs"][0]["sign_pattern"], serde_json::json!(["+1", "-1", "+1"]));
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(v["timing"]["elapsed_ms"].is_number());
}

#[test]
fn analyze_modes_and_inline_graph6() {
    let c4 = g6(&Graph::cycle(4));
    let o = run(&["analyze", &c4, "--all-pairs", "--exact"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("pair (0, 2): strongly_cospectral=true"));
    assert!(s.contains("2 of 6 pairs strongly cospectral"));
    let o = run(&["analyze", &c4, "--pair", "0", "1", "--numeric"]);
    assert!(stdout(&o).contains("strongly_cospectral=false"));
}

#[test]
fn analyze_json_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let z = g6(&catalog::prism_path());
    let (x, y) = (dir.path().join("x.json"), dir.path().join("y.json"));
    for p in [&x, &y] {
        let o = run(&["analyze", &z, "--json", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(
        without_timing(read_json(x.to_str().unwrap())),
        without_timing(read_json(y.to_str().unwrap()))
    );
}

#[test]
fn usage_and_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["analyze"],
        vec!["frobnicate"],
        vec!["analyze", "Bw", "--pair", "0"],
        vec!["analyze", "Bw", "--exact", "--numeric"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let bad = write(dir.path(), "bad.edgelist", "3 2\n0 1\n0 1\n");
    let junk = write(dir.path(), "junk.g6", "Bw\n\u{7f}\u{7f}\u{7f}\n");
    for args in [
        vec!["analyze", bad.as_str()],
        vec!["analyze", "missing/graph.g6"],
        vec!["analyze", "Bw", "--pair", "0", "7"],
        vec!["analyze", "Bw", "--pair", "1", "1"],
        vec!["scan", junk.as_str()],
        vec!["walk", "Bw", "--from", "0", "--to", "1", "--steps", "1"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).contains("panicked"), "{args:?}");
    }
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("crosscheck"));
}

#[test]
fn scan_petersen_finds_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "petersen.g6", &format!("{}\n", g6(&Graph::petersen())));
    let o = run(&["scan", &f, "--find", "sc-pairs"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("0 pairs"), "{}", stdout(&o));
    let o = run(&["scan", &f, "--expect-some"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["scan", &f, "--find", "cospectral-pairs"]);
    assert!(stdout(&o).contains("45 pairs"));
}

#[test]
fn scan_reports_are_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::new();
    for g in catalog::connected_graphs(5).unwrap() {
        text.push_str(&g6(&g));
        text.push('\n');
    }
    text.push_str(&g6(&catalog::prism_path()));
    text.push('\n');
    let f = write(dir.path(), "corpus.g6", &text);
    let mut docs = Vec::new();
    let mut outs = Vec::new();
    for jobs in ["1", "3", "0"] {
        let out = dir.path().join(format!("scan{jobs}.json"));
        let o = run(&["scan", &f, "--jobs", jobs, "--json", out.to_str().unwrap(), "--expect-some"]);
        assert_eq!(o.status.code(), Some(0));
        outs.push(stdout(&o));
        docs.push(without_timing(read_json(out.to_str().unwrap())));
    }
    assert!(outs.windows(2).all(|w| w[0] == w[1]));
    assert!(docs.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(outs[0].lines().count(), 22);
    assert!(outs[0].lines().last().unwrap().ends_with("7 pairs {0,1,4,5} {2,3}"));
}

#[test]
fn walk_k2_certifies_strong_cospectrality() {
    let dir = tempfile::tempdir().unwrap();
    let k2 = write(dir.path(), "k2.edgelist", "2 1\n0 1\n");
    let csv = dir.path().join("trace.csv");
    let json = dir.path().join("walk.json");
    let o = run(&[
        "walk",
        &k2,
        "--from",
        "0",
        "--to",
        "1",
        "--tmax",
        "4",
        "--steps",
        "1000",
        "--certify",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("certificate kind=strongly_cospectral verdict=true"));
    let v = read_json(json.to_str().unwrap());
    let strong = v["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["kind"] == "strongly_cospectral")
        .unwrap();
    assert_eq!(strong["verdict"], true);
    assert!((strong["t"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-4);
    assert_eq!(strong["provenance"]["disc"], "4");
    let trace = std::fs::read_to_string(csv).unwrap();
    assert_eq!(trace.lines().next(), Some("t,re,im,magnitude,orbit_distance"));
    assert_eq!(trace.lines().count(), 1001);
}

#[test]
fn construct_outputs_graph_and_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = g6(&Graph::path(3));
    let o = run(&["construct", "rabbit-ear", &p3, "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    let first = s.lines().next().unwrap();
    assert_eq!(specwalk_core::graph::load_graph(first, GraphFormat::Graph6).unwrap().n(), 5);
    assert!(s.contains("pair (3, 4): strongly_cospectral=true"));

    let out = dir.path().join("z.g6");
    let o = run(&[
        "construct",
        "join-path",
        &p3,
        "0",
        &p3,
        "2",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let z = specwalk_core::graph::load_graph(&std::fs::read_to_string(&out).unwrap(), GraphFormat::Graph6).unwrap();
    assert_eq!((z.n(), z.edge_count()), (8, 7));
    assert!(stdout(&o).contains("strongly_cospectral=true"));

    // K₂ fails the zero-multiplicity condition; the pendants are not strongly cospectral.
    let o = run(&["construct", "rabbit-ear", &g6(&Graph::complete(2)), "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("strongly_cospectral=false"));
}

#[test]
fn crosscheck_small_catalog_passes() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("cc.json");
    let o = run(&["crosscheck", "--max-n", "6", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all suites pass"));
    let v = read_json(json.to_str().unwrap());
    assert!(v["result"]["suites"].as_array().unwrap().iter().all(|s| s["failed"] == 0));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;

use cliquetile::format::{parse_graph, parse_tiling, read_graph_file, write_graph};
use cliquetile_core::Graph;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cliquetile"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_text_roundtrip(n in 1usize..30, bits in proptest::collection::vec(any::<bool>(), 435)) {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        let g = Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap();
        let meta = vec![("distinguished".to_string(), "0,1".to_string())];
        let text = write_graph(&g, &meta);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back.graph, &g);
        prop_assert_eq!(back.metadata, meta);
        prop_assert_eq!(write_graph(&back.graph, &[]), write_graph(&g, &[]));
    }
}

#[test]
fn construct_then_tile() {
    let dir = tempfile::tempdir().unwrap();
    let lb = dir.path().join("lb.txt");
    stdout_ok(&[
        "construct",
        "--family",
        "lower-bound",
        "--r",
        "3",
        "--k",
        "2",
        "--n",
        "30",
        "--gamma",
        "0.1",
        "--out",
        p(&lb),
    ]);
    let f = read_graph_file(&lb).unwrap();
    assert_eq!(f.graph.n(), 30);
    assert_eq!(f.meta("parts"), Some("18,12"));
    let max = stdout_ok(&["tile", "--graph", p(&lb), "--r", "3", "--max"]);
    let mut lines = max.lines();
    assert_eq!(lines.next(), Some("status optimal"));
    assert_eq!(lines.next(), Some("size 9"));
    let t = parse_tiling(&lines.collect::<Vec<_>>().join("\n"), 3).unwrap();
    t.validate(&f.graph, None).unwrap();
    assert_eq!(t.len(), 9);
    assert_eq!(
        stdout_ok(&["tile", "--graph", p(&lb), "--r", "3"]).trim(),
        "status none"
    );

    let h = dir.path().join("hdet.txt");
    stdout_ok(&["construct", "--family", "hdet", "--r", "7", "--k", "3", "--out", p(&h)]);
    assert_eq!(read_graph_file(&h).unwrap().meta("parts"), Some("3,3,1"));
    let d = dir.path().join("h0.txt");
    stdout_ok(&["construct", "--family", "h0", "--r", "5", "--k", "3", "--out", p(&d)]);
    assert!(read_graph_file(&d).unwrap().meta("distinguished").is_some());
}

#[test]
fn phi_of_a_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("k3.txt");
    fs::write(&g, "3\n0 1\n0 2\n1 2\n").unwrap();
    let out = stdout_ok(&["phi", "--graph", p(&g), "--n", "1e6", "--p", "1e-4"]);
    let log: f64 = out
        .lines()
        .next()
        .unwrap()
        .split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((log - 6.0 * 10f64.ln()).abs() < 1e-9);
    assert!(out.contains("argmin_vertices 0,1,2"));
    let bad = run(&["phi", "--graph", p(&g), "--anchors", "0,1", "--n", "10", "--p", "0.5"]);
    assert!(!bad.status.success());
}

#[test]
fn template_gadget_and_absorb_demo() {
    let out = stdout_ok(&["template", "--m", "3", "--verify", "exhaustive", "--seed", "4"]);
    assert!(out.starts_with("flexible: exhaustive"));
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("gadget.txt");
    stdout_ok(&[
        "gadget",
        "--r",
        "3",
        "--k",
        "2",
        "--s",
        "2",
        "--case",
        "auto",
        "--out",
        p(&g),
    ]);
    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(g.with_extension("json")).unwrap()).unwrap();
    assert_eq!(side["base"].as_array().unwrap().len(), 2);
    assert_eq!(side["hubs"].as_array().unwrap().len(), 2);
    assert_eq!(side["layers"].as_array().unwrap().len(), 2);
    assert_eq!(
        read_graph_file(&g).unwrap().graph.n() as u64,
        side["vertices"].as_u64().unwrap()
    );
    assert!(!run(&[
        "gadget",
        "--r",
        "3",
        "--k",
        "2",
        "--s",
        "2",
        "--case",
        "1",
        "--out",
        p(&g)
    ])
    .status
    .success());
    let demo = stdout_ok(&[
        "absorb-demo",
        "--r",
        "3",
        "--k",
        "2",
        "--m",
        "2",
        "--n",
        "400",
        "--p",
        "0.3",
        "--seed",
        "1",
    ]);
    assert!(demo.contains("absorbed into"), "{demo}");
}

#[test]
fn scan_is_reproducible_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let j = dir.path().join("a.jsonl");
    let common = [
        "scan",
        "--r",
        "3",
        "--k",
        "2",
        "--base",
        "lower-bound",
        "--gamma",
        "0.1",
        "--n",
        "30",
        "--c",
        "0.1:5:geom:3",
        "--trials",
        "6",
        "--seed",
        "9",
        "--no-timing",
    ];
    let mut first = common.to_vec();
    first.extend(["--out", p(&a), "--jsonl", p(&j), "--threads", "2"]);
    stdout_ok(&first);
    let mut second = common.to_vec();
    second.extend(["--out", p(&b), "--threads", "1"]);
    stdout_ok(&second);
    let csv_a = fs::read(&a).unwrap();
    assert_eq!(csv_a, fs::read(&b).unwrap());
    let text = String::from_utf8(csv_a).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "r,k,base,alpha,gamma,n,c,p,trial,seed,outcome,leftover,solver_ms,total_ms"
    );
    assert_eq!(text.lines().count(), 1 + 18);
    assert_eq!(fs::read_to_string(&j).unwrap().lines().count(), 18);

    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"r":3,"k":3,"base":"random","alpha":0.0,"n":[30],"c":[1.0],"trials":2,"seed":1}"#,
    )
    .unwrap();
    let out = run(&["scan", "--config", p(&cfg), "--out", p(&dir.path().join("x.csv"))]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("interval"));
}

#[test]
fn pipeline_scan_writes_stage_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let j = dir.path().join("p.jsonl");
    stdout_ok(&[
        "scan",
        "--r",
        "3",
        "--k",
        "3",
        "--base",
        "random",
        "--alpha",
        "0.3",
        "--n",
        "240",
        "--c",
        "8",
        "--trials",
        "3",
        "--seed",
        "1",
        "--pipeline",
        "--out",
        p(&out),
        "--jsonl",
        p(&j),
    ]);
    for line in fs::read_to_string(&j).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let stages = v["stages"].as_array().unwrap();
        assert!(!stages.is_empty());
        let outcome = v["outcome"].as_str().unwrap();
        assert!(outcome == "tiled" || outcome.starts_with("stage-failure:"), "{outcome}");
    }
}

#[test]
fn bisect_collapses_on_an_always_tiled_base() {
    // p is capped at 1 here, so every trial tiles
    let out = stdout_ok(&[
        "bisect",
        "--r",
        "3",
        "--k",
        "2",
        "--base",
        "lower-bound",
        "--gamma",
        "0.1",
        "--n",
        "30",
        "--trials",
        "4",
        "--lo",
        "200",
        "--hi",
        "400",
        "--max-widen",
        "0",
    ]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["result"]["status"], "collapsed-low");
}

use std::path::PathBuf;
use std::process::{Command, Output};

fn lzg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lzg")).args(args).output().expect("binary runs")
}

fn model(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "models", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn reachable_target_exits_ten_with_witness() {
    let fig1 = model("fig1.ta");
    for alg in ["global", "local"] {
        let o = lzg(&["check", &fig1, "--target", "P1=p1,P2=q1", "--algorithm", alg]);
        assert_eq!(o.status.code(), Some(10), "{alg}");
        let out = stdout(&o);
        assert!(out.starts_with("reachable"), "{out}");
        assert!(out.contains("witness:"), "{out}");
    }
}

#[test]
fn unreachable_target_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = lzg(&["gen", "--family", "corsso", "--sizes", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let m = dir.path().join("corsso2.ta");
    let o = lzg(&["check", m.to_str().unwrap(), "--target", "S0=sent,S1=sent"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("unreachable"));
}

#[test]
fn parse_and_usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ta");
    std::fs::write(&bad, "system x\nprocess\n").unwrap();
    assert_eq!(lzg(&["check", bad.to_str().unwrap(), "--target", "P=a"]).status.code(), Some(2));
    assert_eq!(lzg(&["check", &model("fig1.ta"), "--target", "P1=nowhere"]).status.code(), Some(2));
    assert_eq!(lzg(&["check", "/no/such/model.ta", "--target", "P1=p1"]).status.code(), Some(2));
    assert_eq!(lzg(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lzg(&["gen", "--family", "fischer", "--sizes", "3..2"]).status.code(), Some(2));
    assert_eq!(lzg(&["gen", "--family", "nope", "--sizes", "2"]).status.code(), Some(2));
}

#[test]
fn stats_json_is_deterministic_without_timing() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = lzg(&["check", &model("fig2.ta"), "--target", "P1=p2,P2=q3", "--stats-json", p.to_str().unwrap()]);
        assert!(matches!(o.status.code(), Some(0 | 10)));
    }
    let ta = std::fs::read_to_string(&a).unwrap();
    assert_eq!(ta, std::fs::read_to_string(&b).unwrap());
    let v: serde_json::Value = serde_json::from_str(&ta).unwrap();
    assert!(v.get("seconds").is_none());
    assert!(v["stored"].as_u64().unwrap() > 0);

    let t = dir.path().join("t.json");
    lzg(&["check", &model("fig1.ta"), "--target", "P1=p1", "--timing", "--stats-json", t.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    assert!(v["seconds"].is_number());
}

#[test]
fn unwritable_outputs_exit_two() {
    let fig1 = model("fig1.ta");
    assert_eq!(lzg(&["explore", &fig1, "--dot", "/no/such/dir/g.dot"]).status.code(), Some(2));
    let o = lzg(&["check", &fig1, "--target", "P1=p1", "--stats-json", "/no/such/dir/s.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn explore_exports_dot_with_expected_node_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (alg, nodes) in [("local", 4), ("global", 5)] {
        let dot = dir.path().join(format!("{alg}.dot"));
        let o = lzg(&["explore", &model("fig1.ta"), "--algorithm", alg, "--dot", dot.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains(&format!("stored: {nodes}")), "{}", stdout(&o));
        let text = std::fs::read_to_string(&dot).unwrap();
        assert!(text.starts_with("digraph"));
        let node_lines = text.lines().filter(|l| l.contains("[label") && !l.contains("->")).count();
        assert_eq!(node_lines, nodes, "{alg}:\n{text}");
    }
}

#[test]
fn gen_to_stdout_parses_back() {
    let o = lzg(&["gen", "--family", "dining", "--sizes", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(lzg::model::parse_network(&stdout(&o)).is_ok());
}

#[test]
fn oracle_suites_report_json() {
    let o = lzg(&["oracle", "--suite", "flaws"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);

    let o = lzg(&["oracle", "--suite", "aggregation", "--seed", "7", "--count", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suite"], "aggregation");
}

#[test]
fn bench_writes_models_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = lzg(&["bench", "--family", "fischer", "--sizes", "2", "--out", out, "--sequential"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("fischer 2"));
    assert!(dir.path().join("fischer2.ta").exists());
    let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert_eq!(rows[0]["seconds"], 0.0);
}

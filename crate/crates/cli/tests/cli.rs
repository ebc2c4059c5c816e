use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_monoseq"));
    c.env_remove("MONOSEQ_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn instance(paths: &[&[usize]]) -> String {
    let n = paths[0].len();
    serde_json::json!({ "schema": "monoseq/instance/v1", "n": n, "paths": paths }).to_string()
}

fn golden(name: &str, actual: &str) {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "{name} differs from its golden file");
}

#[test]
fn nonrealizable_triple_is_rejected_with_a_certificate() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("nr.json");
    assert_eq!(code(&run(&["gen", "nonrealizable", "--out", f.to_str().unwrap()])), 0);
    let o = run(&["decide", f.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["feasible"], false);
    assert_eq!(v["reason"], "LP_INFEASIBLE");
    assert!(v["certificate"]["multipliers"].as_array().is_some_and(|m| !m.is_empty()));
}

#[test]
fn two_paths_always_embed() {
    let dir = TempDir::new().unwrap();
    let cases: [&[&[usize]]; 3] = [
        &[&[1, 2, 3, 4], &[4, 3, 2, 1]],
        &[&[3, 1, 4, 2, 5], &[2, 5, 1, 3, 4]],
        &[&[1, 2], &[1, 2]],
    ];
    for (i, paths) in cases.iter().enumerate() {
        let f = write(&dir, &format!("two{i}.json"), &instance(paths));
        let o = run(&["decide", &f]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(json(&o)["feasible"], true);
    }
}

#[test]
fn malformed_input_is_an_error() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", "{\"schema\": ");
    let o = run(&["decide", &f]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    let f = write(&dir, "short.json", r#"{"schema":"monoseq/instance/v1","n":3,"paths":[[1,2,3],[1,2]]}"#);
    assert_eq!(code(&run(&["decide", &f])), 2);
    assert_eq!(code(&run(&["decide", "/nonexistent/file.json"])), 2);
}

#[test]
fn expo_embedding_round_trips_through_verify() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("expo2.json");
    let pts = dir.path().join("pts.json");
    let svg = dir.path().join("expo2.svg");
    assert_eq!(code(&run(&["gen", "expo", "--m", "2", "--out", inst.to_str().unwrap()])), 0);
    let o = run(&[
        "embed",
        inst.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--points",
        pts.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let o = run(&["verify", inst.to_str().unwrap(), pts.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["valid"], true);

    // a different instance on the same points must fail verification
    let other = write(&dir, "other.json", &instance(&[&[8, 7, 6, 5, 4, 3, 2, 1], &[1, 2, 3, 4, 5, 6, 7, 8], &[1, 2, 3, 4, 5, 6, 7, 8]]));
    assert_eq!(code(&run(&["verify", &other, pts.to_str().unwrap()])), 1);
}

#[test]
fn infeasible_embed_writes_nothing() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("nr.json");
    run(&["gen", "nonrealizable", "--out", inst.to_str().unwrap()]);
    let svg = dir.path().join("x.svg");
    let pts = dir.path().join("x.json");
    let o = run(&["embed", inst.to_str().unwrap(), "--svg", svg.to_str().unwrap(), "--points", pts.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(!svg.exists() && !pts.exists());
}

#[test]
fn two_path_drawing_matches_golden() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "two.json", &instance(&[&[1, 2, 3, 4, 5], &[3, 5, 1, 4, 2]]));
    let svg = dir.path().join("two.svg");
    let pts = dir.path().join("two_points.json");
    let o = run(&["embed", &f, "--svg", svg.to_str().unwrap(), "--points", pts.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    golden("two_paths.svg", &fs::read_to_string(&svg).unwrap());
    golden("two_paths_points.json", &fs::read_to_string(&pts).unwrap());
}

#[test]
fn dual_drawing_matches_golden() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("expo1.json");
    run(&["gen", "expo", "--m", "1", "--out", inst.to_str().unwrap()]);
    let svg = dir.path().join("dual.svg");
    let o = run(&["embed", inst.to_str().unwrap(), "--dual", "--svg", svg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("stroke-dasharray").count(), 3);
    assert_eq!(text.matches("<line ").count(), 5 + 3);
    golden("expo1_dual.svg", &text);
}

#[test]
fn svg_precision_is_respected() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "two.json", &instance(&[&[1, 2, 3], &[3, 1, 2]]));
    let svg = dir.path().join("p.svg");
    run(&["embed", &f, "--svg", svg.to_str().unwrap(), "--precision", "3"]);
    let text = fs::read_to_string(&svg).unwrap();
    let coords = text
        .split('"')
        .filter(|s| s.contains('.') && s.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '-'));
    for c in coords {
        let digits = c.chars().filter(|ch| ch.is_ascii_digit()).collect::<String>();
        assert!(digits.trim_start_matches('0').len() <= 3, "{c} has more than 3 significant digits");
    }
}

#[test]
fn gen_expo_m1_has_the_three_paths() {
    let o = run(&["gen", "expo", "--m", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["n"], 5);
    assert_eq!(v["paths"], serde_json::json!([[1, 2, 3, 4, 5], [1, 3, 2, 4, 5], [5, 3, 2, 4, 1]]));
    assert_eq!(code(&run(&["gen", "expo", "--m", "0"])), 2);
}

#[test]
fn gmse_of_three_line_wiring() {
    let dir = TempDir::new().unwrap();
    let w = write(&dir, "w.json", r#"{"schema":"monoseq/wiring/v1","n":3,"crossings":[[1,2],[1,3],[2,3]]}"#);
    let o = run(&["gen", "gmse", &w]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], "monoseq/gmse/v1");
    assert_eq!(v["paths"], serde_json::json!([[1, 2, 3], [2, 1, 3], [2, 3, 1], [3, 2, 1]]));
    let bad = write(&dir, "bad.json", r#"{"schema":"monoseq/wiring/v1","n":3,"crossings":[[1,3]]}"#);
    assert_eq!(code(&run(&["gen", "gmse", &bad])), 2);
}

#[test]
fn gap_sensitive_seed_seven_reproduces_the_fixture() {
    let frozen = json(&run(&["gen", "gap-sensitive"]));
    let o = run(&["gen", "gap-sensitive", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let searched = json(&o);
    assert_eq!(searched, frozen);
    assert_eq!(searched["paths"].as_array().unwrap().len(), 4);
    assert_eq!(searched["configs"].as_array().unwrap().len(), 2);

    let dir = TempDir::new().unwrap();
    let f = write(&dir, "gap.json", &o.stdout.iter().map(|&b| b as char).collect::<String>());
    assert_eq!(code(&run(&["decide", &f, "--config", "A"])), 0);
    assert_eq!(code(&run(&["decide", &f, "--config", "B"])), 1);
    assert_eq!(code(&run(&["decide", &f, "--config", "C"])), 2);
}

#[test]
fn seed_comes_from_the_environment() {
    let a = bin().args(["gen", "wiring", "--n", "6"]).env("MONOSEQ_SEED", "11").output().unwrap();
    let b = run(&["gen", "wiring", "--n", "6", "--seed", "11"]);
    let c = run(&["gen", "wiring", "--n", "6"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

fn points_file(dir: &TempDir, name: &str, pts: &[(i64, i64)]) -> String {
    let points: Vec<Value> = pts
        .iter()
        .map(|(x, y)| serde_json::json!({ "x": x.to_string(), "y": y.to_string() }))
        .collect();
    write(dir, name, &serde_json::json!({ "schema": "monoseq/points/v1", "points": points }).to_string())
}

#[test]
fn circseq_of_three_points() {
    let dir = TempDir::new().unwrap();
    let f = points_file(&dir, "p.json", &[(0, 0), (2, 1), (1, 3)]);
    let o = run(&["circseq", &f]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["snapshots"].as_array().unwrap().len(), 4);
    assert_eq!(v["swaps"].as_array().unwrap().len(), 3);
    assert_eq!(v["perturbed"], false);
}

#[test]
fn circseq_reports_collinear_triples() {
    let dir = TempDir::new().unwrap();
    let f = points_file(&dir, "col.json", &[(0, 0), (5, 1), (1, 1), (2, 2)]);
    let o = run(&["circseq", &f]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("[1, 3, 4]"), "{err}");
    assert_eq!(code(&run(&["circseq", &f, "--perturb"])), 0);
}

#[test]
fn circseq_contains_its_own_extracted_paths() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("expo1.json");
    let pts = dir.path().join("pts.json");
    run(&["gen", "expo", "--m", "1", "--out", inst.to_str().unwrap()]);
    run(&["embed", inst.to_str().unwrap(), "--points", pts.to_str().unwrap()]);
    let o = run(&["circseq", pts.to_str().unwrap(), "--check", inst.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["contained"], serde_json::json!([true, true, true]));
}

#[test]
fn parallel_decide_over_several_files() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &instance(&[&[1, 2, 3], &[2, 3, 1]]));
    let b = dir.path().join("b.json");
    run(&["gen", "nonrealizable", "--out", b.to_str().unwrap()]);
    let c = dir.path().join("c.json");
    run(&["gen", "expo", "--m", "2", "--out", c.to_str().unwrap()]);
    let o = run(&["decide", "--jobs", "3", &a, b.to_str().unwrap(), c.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    let feasible: Vec<bool> = v.as_array().unwrap().iter().map(|r| r["verdict"]["feasible"].as_bool().unwrap()).collect();
    assert_eq!(feasible, [true, false, true]);
    let bad = write(&dir, "bad.json", "[]");
    assert_eq!(code(&run(&["decide", "--jobs", "2", &a, &bad])), 2);
}

#[test]
fn digraph_instances_are_reduced_to_paths() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "dg.json",
        r#"{"schema":"monoseq/instance/v1","n":4,"paths":[],
            "digraphs":[{"edges":[[1,2],[2,3],[3,4],[1,3]]},
                        {"edges":[[2,1],[1,4],[4,3]]},
                        {"edges":[[1,3],[3,2],[2,4]],"order":[1,3,2,4]}]}"#,
    );
    let o = run(&["reduce", &f]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["paths"], serde_json::json!([[1, 2, 3, 4], [2, 1, 4, 3], [1, 3, 2, 4]]));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not checked"));
    let o = run(&["decide", &f]);
    let v = json(&o);
    assert!(v["caveat"].as_str().is_some());
    assert_eq!(code(&o), if v["feasible"] == true { 0 } else { 1 });

    let cyclic = write(&dir, "cyc.json", r#"{"schema":"monoseq/instance/v1","n":2,"paths":[],"digraphs":[{"edges":[[1,2],[2,1]]}]}"#);
    assert_eq!(code(&run(&["reduce", &cyclic])), 2);
}

#[test]
fn order_and_dual_commands() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "s.json", &instance(&[&[1, 2, 3], &[3, 2, 1], &[2, 1, 3]]));
    let o = run(&["order", &f]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["allowable"], true);
    assert_eq!(v["sequence"].as_array().unwrap().len(), 3);

    let p = points_file(&dir, "p.json", &[(0, 0), (2, 1), (1, 3)]);
    let o = run(&["dual", &p, "--at", "-1/2", "--at", "10"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["lines"][1], serde_json::json!({ "slope": "2/1", "intercept": "-1/1" }));
    assert_eq!(v["orders"][1]["order"], serde_json::json!([2, 3, 1]));
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn lab() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_insdel-lab"));
    cmd.env_remove("INSDEL_LAB_SEED");
    cmd
}

fn code_of(cmd: &mut Command) -> i32 {
    cmd.output().unwrap().status.code().unwrap()
}

fn run_ok(args: &[&str]) -> String {
    let out = lab().args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&run_ok(args)).unwrap()
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn region_csv_lists_the_vertices() {
    let text = run_ok(&["region", "--q", "5", "--emit", "csv"]);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[2], "5,2,6/5,2/5");
    assert_eq!(rows[5], "5,5,0,0");
}

#[test]
fn region_membership_queries() {
    let v = json(&["region", "--q", "2", "--point", "1/4,1/4", "--point", "1,0"]);
    let queries = &v["regions"][0]["queries"];
    assert_eq!(queries[0]["inside"], true);
    assert_eq!(queries[1]["inside"], false);
    let svg = run_ok(&["region", "--q", "2,3", "--emit", "svg"]);
    assert_eq!(svg.matches("<polygon").count(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(code_of(lab().args(["region", "--q", "5", "--bogus"])), 2);
    assert_eq!(code_of(lab().args(["encode", "bukhma", "--n", "32", "--eps", "3/2"])), 1);
    assert_eq!(code_of(lab().args(["region", "--q", "1"])), 1);
    assert_eq!(code_of(lab().args(["encode", "bukhma", "--n", "32", "--eps", "1/2", "--index", "9"])), 1);
    assert_eq!(code_of(lab().args(["oracle", "nonpositivity", "--fstar", "1/10,9/10", "--p", "1/2,1/2", "--z", "1"])), 1);
    assert_eq!(code_of(lab().arg("--help")), 0);
}

#[test]
fn encode_single_codeword() {
    let v = json(&["encode", "bukhma", "--n", "32", "--eps", "1/2", "--index", "1"]);
    let expected = format!("{}{}", "0".repeat(16), "1".repeat(16));
    assert_eq!(v["codeword"]["symbols"], Value::String(expected));
    assert_eq!(v["period"], 16);
}

#[test]
fn encode_corrupt_decode_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("code.json");
    let received = dir.path().join("w.json");
    for index in 0..2 {
        run_ok(&["encode", "bukhma", "--n", "128", "--eps", "1/2", "--index", &index.to_string(), "--out", p(&code)]);
        for seed in 0..50u64 {
            let d = (seed % 5 * 6).to_string();
            let i = (seed % 7 * 3).to_string();
            run_ok(&[
                "--seed", &seed.to_string(), "corrupt", "--in", p(&code), "--deletions", &d, "--insertions", &i,
                "--out", p(&received),
            ]);
            let report = json(&["decode-inner", "--code", p(&code), "--in", p(&received)]);
            let hit = report["survivors"].as_array().unwrap().iter().any(|s| s["index"] == index);
            assert!(hit, "index {index} seed {seed}");
        }
    }
}

#[test]
fn corrupt_replays_a_script() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.json");
    let script = dir.path().join("s.json");
    std::fs::write(&x, r#"{"q": 2, "symbols": "0011"}"#).unwrap();
    std::fs::write(&script, r#"[{"op":"del","pos":1},{"op":"ins","pos":1,"sym":0}]"#).unwrap();
    let v = json(&["corrupt", "--in", p(&x), "--script", p(&script)]);
    assert_eq!(v["output"]["symbols"], "0011");
    assert_eq!(v["deletions"], 1);
    let drawn = json(&["--seed", "42", "corrupt", "--in", p(&x), "--deletions", "1", "--insertions", "1"]);
    assert_eq!(drawn["script"], serde_json::from_str::<Value>(&std::fs::read_to_string(&script).unwrap()).unwrap());
}

#[test]
fn concatenated_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("p.json");
    let x = dir.path().join("x.json");
    let w = dir.path().join("w.json");
    run_ok(&[
        "--seed", "3", "init-concat", "--eps", "1/2", "--n-in", "64", "--inner-eps", "43/50", "--eps-in", "3/32",
        "--n-out", "6", "--sigma-out", "4", "--messages", "20", "--delta-out", "1/2", "--out", p(&params),
    ]);
    run_ok(&["encode", "concat", "--params", p(&params), "--message", "7", "--out", p(&x)]);
    run_ok(&["--seed", "5", "corrupt", "--in", p(&x), "--deletions", "20", "--insertions", "30", "--out", p(&w)]);
    let report = json(&["decode-concat", "--params", p(&params), "--in", p(&w)]);
    let messages = report["report"]["messages"].as_array().unwrap();
    assert!(messages.contains(&Value::from(7)));
    assert_eq!(report["config"]["outer"]["seed"], 3);
}

#[test]
fn reports_are_reproducible_and_worker_independent() {
    let args = ["experiment", "adversary", "--q", "3", "--n", "36", "--trials", "6"];
    let a = without_timings(json(&[&["--seed", "9"], &args[..]].concat()));
    let b = without_timings(json(&[&["--seed", "9", "--workers", "4"], &args[..]].concat()));
    assert_eq!(a["trials"], b["trials"]);
    assert_eq!(a["summary"], b["summary"]);
    assert_eq!(a["seed"], 9);
    assert_eq!(a["config"]["trials"], 6);

    let env = lab().env("INSDEL_LAB_SEED", "9").args(args).output().unwrap();
    let c = without_timings(serde_json::from_slice(&env.stdout).unwrap());
    assert_eq!(a["trials"], c["trials"]);

    let grid = ["experiment", "list-size", "--n", "64", "--eps", "1/2", "--grid", "3", "--trials", "3"];
    let x = without_timings(json(&grid));
    let mut y = without_timings(json(&[&["--workers", "3"], &grid[..]].concat()));
    assert_eq!(y["config"]["workers"], 3);
    y["config"]["workers"] = x["config"]["workers"].clone();
    assert_eq!(x, y);
}

#[test]
fn adversary_budgets_hit_the_vertices() {
    let v = json(&["experiment", "adversary", "--q", "4", "--n", "48", "--trials", "4"]);
    for s in v["summary"].as_array().unwrap() {
        assert_eq!(s["distinct_outputs"], 1);
        assert_eq!(s["max_gamma"], s["vertex_gamma"]);
        assert_eq!(s["max_delta"], s["vertex_delta"]);
    }
}

#[test]
fn martingale_and_classify() {
    let text = format!("{}{}", "0".repeat(16), "1".repeat(16));
    let v = json(&["experiment", "martingale", "--v-text", &text, "--eps", "1/2", "--periods", "16"]);
    let level = &v["trials"]["levels"][1];
    assert_eq!(level["var_bias"], "1");
    assert_eq!(level["mean_bias"], "0");
    assert_eq!(code_of(lab()
        .args(["experiment", "martingale", "--v-text", "0101010101", "--eps", "1/2", "--periods", "16"])), 1);
    let padded = json(&[
        "experiment", "martingale", "--v-text", "0101010101", "--eps", "1/2", "--periods", "16", "--padding",
        "continue:1", "--summary",
    ]);
    assert_eq!(padded["trials"]["used_len"], 12);
    let c = json(&["experiment", "classify", "--v-text", "0000111100001111", "--r", "4", "--l", "2"]);
    assert_eq!(c["classification"]["crossing"], 0);
}

#[test]
fn exhaustive_list_size() {
    let v = json(&["experiment", "list-size", "--n", "12", "--eps", "1/2", "--exhaustive-len", "12"]);
    assert_eq!(v["summary"]["max_list_size"], 1);
}

#[test]
fn oracles() {
    let v = json(&["oracle", "fmax", "--big-f", "1", "--big-p", "1", "--m", "0.3", "--q", "2"]);
    assert!((v["value"].as_f64().unwrap() - 0.50455).abs() < 1e-4);
    let v = json(&["oracle", "nonpositivity", "--fstar", "1/2,1/2,0", "--p", "1/2,1/2,0", "--z", "2"]);
    assert_eq!(v["lhs"], "1");
}

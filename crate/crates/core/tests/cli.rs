use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn ncs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncs"))
        .args(args)
        .env_remove("NCS_THREADS")
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

const K4: &str = r#"{"nodes": 4, "edges": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#;

#[test]
fn bound_on_complete_four() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.json", K4);
    let out = ncs(&["bound", "--graph", &g]);
    assert_eq!(out.status.code(), Some(0));
    let compact = serde_json::to_string(&stdout_json(&out)).unwrap();
    assert_eq!(
        compact,
        r#"{"edge_connectivity":3,"tight_bound":1,"witness_cut":[[0,1],[0,2],[0,3]]}"#
    );
}

#[test]
fn bound_accepts_edge_lists() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c5.txt", "# five-cycle\n0 1\n1 2\n2 3\n3 4\n0 4\n");
    let v = stdout_json(&ncs(&["bound", "--graph", &g]));
    assert_eq!(v["edge_connectivity"], 2);
    assert_eq!(v["tight_bound"], 0);
}

#[test]
fn bound_output_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.json", K4);
    let a = ncs(&["bound", "--graph", &g]).stdout;
    let b = ncs(&["bound", "--graph", &g]).stdout;
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.find("edge_connectivity").unwrap() < text.find("tight_bound").unwrap());
}

#[test]
fn min_graph_six_one() {
    let v = stdout_json(&ncs(&["min-graph", "--nodes", "6", "--k", "1", "--dedup"]));
    assert_eq!(v["edge_count"], 9);
    assert_eq!(v["lower_bound"], 9);
    assert_eq!(v["achieves_lower_bound"], true);
    assert!(!v["graphs"].as_array().unwrap().is_empty());
}

#[test]
fn gen_then_sync_recovers_truth() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.json", K4);
    let m = dir.path().join("m.json");
    let t = dir.path().join("t.json");
    for seed in ["1", "2", "3"] {
        let out = ncs(&[
            "gen",
            "round",
            "--graph",
            &g,
            "--faults",
            "1",
            "--seed",
            seed,
            "--out",
            path_str(&m),
            "--truth",
            path_str(&t),
        ]);
        assert!(out.status.success());
        let truth: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
        for alg in ["fast", "exhaustive"] {
            let v = stdout_json(&ncs(&["sync", "--input", path_str(&m), "--algorithm", alg]));
            assert_eq!(v["exact"], true);
            assert_eq!(v["offsets"], truth["offsets"], "seed {seed} {alg}");
            assert_eq!(v["detected_faults"], truth["faults"]);
        }
    }
}

#[test]
fn sync_reads_hand_written_measurements() {
    let dir = TempDir::new().unwrap();
    // truth: offsets 1, 2.5, -3 relative to node 0; session 1-3 is off by 10
    let text = r#"{
        "graph": {"nodes": 4, "edges": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]},
        "measurements": [[0,1,"-1"],[2,0,"2.5"],[0,3,"3"],[1,2,"-1.5"],[1,3,"14"],[2,3,"5.5"]]
    }"#;
    let m = write(&dir, "m.json", text);
    let v = stdout_json(&ncs(&["sync", "--input", &m]));
    assert_eq!(v["offsets"], serde_json::json!(["1", "2.5", "-3"]));
    assert_eq!(v["detected_faults"], serde_json::json!([[1, 3, "10"]]));

    let v = stdout_json(&ncs(&[
        "sync",
        "--input",
        &m,
        "--mode",
        "noisy",
        "--algorithm",
        "exhaustive",
    ]));
    assert_eq!(v["exact"], false);
    assert_eq!(v["offsets"], serde_json::json!([1.0, 2.5, -3.0]));
}

#[test]
fn noisy_round_trip_within_eta() {
    let dir = TempDir::new().unwrap();
    let g = write(
        &dir,
        "k5.json",
        &serde_json::to_string(&stdout_json(&ncs(&[
            "gen", "graph", "--kind", "complete", "--nodes", "5",
        ])))
        .unwrap(),
    );
    let m = dir.path().join("m.json");
    let t = dir.path().join("t.json");
    let out = ncs(&[
        "gen",
        "round",
        "--graph",
        &g,
        "--mode",
        "noisy",
        "--sigma",
        "0",
        "--faults",
        "1",
        "--fmin",
        "4",
        "--seed",
        "9",
        "--out",
        path_str(&m),
        "--truth",
        path_str(&t),
    ]);
    assert!(out.status.success());
    let truth: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    let v = stdout_json(&ncs(&["sync", "--input", path_str(&m), "--mode", "noisy"]));
    assert_eq!(v["offsets"], truth["offsets"]);
}

#[test]
fn simulate_csv_and_json() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.json", K4);
    let args = [
        "simulate", "--graph", &g, "--faults", "0,1", "--trials", "5", "--seed", "4", "--format",
        "csv",
    ];
    let out = ncs(&args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "trial_id,fault_count,identical,mse");
    assert_eq!(lines.len(), 11);
    assert_eq!(ncs(&args).stdout, out.stdout);
    // default fmin equals eta, which is worth a warning
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    let v = stdout_json(&ncs(&[
        "simulate", "--graph", &g, "--faults", "1", "--trials", "4", "--fmin", "3",
    ]));
    assert_eq!(v["records"].as_array().unwrap().len(), 4);
    assert_eq!(v["summary"][0]["trials"], 4);
}

#[test]
fn tier_sixteen() {
    let v = stdout_json(&ncs(&["tier", "--nodes", "16"]));
    assert_eq!(v["group_count"], 5);
    assert_eq!(v["total_edges"], 30);
    assert_eq!(v["flat_lower_bound"], 88);
    assert_eq!(v["tiers"][1][0]["representative"], 0);
}

#[test]
fn gen_graph_kinds() {
    let v = stdout_json(&ncs(&["gen", "graph", "--kind", "star", "--nodes", "4"]));
    assert_eq!(
        serde_json::to_string(&v).unwrap(),
        r#"{"edges":[[0,1],[0,2],[0,3]],"nodes":4}"#
    );
    let v = stdout_json(&ncs(&[
        "gen", "graph", "--kind", "minimum", "--nodes", "5", "--k", "1",
    ]));
    assert_eq!(v["edges"].as_array().unwrap().len(), 8);
    let v = stdout_json(&ncs(&["gen", "graph", "--kind", "cycle", "--nodes", "5"]));
    assert_eq!(v["edges"].as_array().unwrap().len(), 5);
}

#[test]
fn exit_codes() {
    assert_eq!(
        ncs(&["bound", "--graph", "x", "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ncs(&["min-graph", "--nodes", "six", "--k", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(ncs(&[]).status.code(), Some(2));
    let help = ncs(&["simulate", "--help"]);
    assert_eq!(help.status.code(), Some(0));
    let help = String::from_utf8(help.stdout).unwrap();
    for flag in [
        "--graph",
        "--faults",
        "--trials",
        "--seed",
        "--sigma",
        "--fmin",
        "--fmax",
        "--eta",
        "--algorithm",
        "--format",
    ] {
        assert!(help.contains(flag), "{flag}");
    }

    let dir = TempDir::new().unwrap();
    let g = write(&dir, "split.txt", "0 1\n2 3\n");
    let out = ncs(&["bound", "--graph", &g]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("disconnected"));
    assert_eq!(
        ncs(&["bound", "--graph", "/nonexistent/graph.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ncs(&["min-graph", "--nodes", "4", "--k", "2"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn thread_cap_is_honoured_and_validated() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_ncs"))
            .args(["min-graph", "--nodes", "5", "--k", "1"])
            .env("NCS_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(run("1").stdout, run("0").stdout);
    assert_eq!(run("lots").status.code(), Some(2));
}

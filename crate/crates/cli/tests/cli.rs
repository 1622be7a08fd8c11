use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const EXAMPLE: &str = "1-2,2-3,2-4,4-5,4-8,5-6,5-10,6-7,8-9";

fn fourpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fourpc")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn matrix_csv_for_p3() {
    let out = fourpc(&["matrix", "--kind", "max4pc", "--format", "csv", "--edges", "1-2,2-3"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1-2,1-3,2-3\n2,3,2\n3,4,3\n2,3,2\n");
}

#[test]
fn matrix_json_steiner() {
    let v = stdout_json(&fourpc(&["matrix", "--kind", "steiner2", "--edges", "1-2,2-3"]));
    assert_eq!(v["kind"], "steiner2");
    assert_eq!(v["entries"], serde_json::json!([[1, 2, 2], [2, 2, 2], [2, 2, 1]]));
}

#[test]
fn snf_rank_inertia_for_p4() {
    let edges = ["--edges", "1-2,2-3,3-4"];
    let snf = stdout_json(&fourpc(&[&["snf"][..], &edges].concat()));
    assert_eq!(snf, serde_json::json!({ "invariant_factors": [0, 0, 1, 1, 2, 2] }));
    let rank = stdout_json(&fourpc(&[&["rank"][..], &edges].concat()));
    assert_eq!(rank["rank"], 4);
    let inertia = stdout_json(&fourpc(&[&["inertia"][..], &edges].concat()));
    assert_eq!(inertia, serde_json::json!({ "n_zero": 2, "n_plus": 2, "n_minus": 2 }));
}

#[test]
fn basis_then_det_for_ten_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let basis_path = dir.path().join("basis.json");
    let out = fourpc(&[
        "basis",
        "--edges",
        EXAMPLE,
        "--start-leaf",
        "1",
        "--policy",
        "prefer:4-8",
        "--output",
        basis_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let basis: Value = serde_json::from_str(&std::fs::read_to_string(&basis_path).unwrap()).unwrap();
    let pairs: Vec<String> = basis["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| format!("{}-{}", p[0], p[1]))
        .collect();
    assert_eq!(pairs, ["1-2", "1-4", "2-4", "2-8", "4-8", "8-9", "4-5", "4-6", "5-6", "6-7"]);
    assert_eq!(basis["start_leaf"], 1);

    let det = stdout_json(&fourpc(&["det", "--edges", EXAMPLE, "--basis", basis_path.to_str().unwrap()]));
    assert_eq!(det["det"], -256);
    let det = stdout_json(&fourpc(&["det", "--edges", "1-2,2-3", "--pairs", "1-2,1-3"]));
    assert_eq!(det["det"], -1);
}

#[test]
fn gen_output_feeds_every_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("tree.txt");
    let out = fourpc(&["gen", "--n", "7", "--seed", "11", "--output", tree.to_str().unwrap()]);
    assert!(out.status.success());
    let path = tree.to_str().unwrap();
    for sub in [
        &["matrix", "--format", "csv"][..],
        &["matrix", "--kind", "min4pc"],
        &["rank"],
        &["snf"],
        &["inertia"],
        &["basis", "--policy", "random", "--seed", "3"],
        &["verify", "--checks", "T1-rank,T3-snf"],
    ] {
        let out = fourpc(&[sub, &["--input", path]].concat());
        assert!(out.status.success(), "{sub:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn edges_file_and_stdin_agree() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p4.txt");
    std::fs::write(&file, "# path\n4\n1 2\n2 3\n\n3 4\n").unwrap();
    let from_file = fourpc(&["matrix", "--input", file.to_str().unwrap()]).stdout;
    let inline = fourpc(&["matrix", "--edges", "1-2,2-3,3-4"]).stdout;
    let mut child = Command::new(env!("CARGO_BIN_EXE_fourpc"))
        .arg("matrix")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"4\n1 2\n2 3\n3 4\n").unwrap();
    let from_stdin = child.wait_with_output().unwrap().stdout;
    assert_eq!(from_file, inline);
    assert_eq!(from_stdin, inline);
}

#[test]
fn verify_passes_with_exit_zero() {
    let out = fourpc(&["verify", "--edges", EXAMPLE]);
    let v = stdout_json(&out);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!((v["n"].as_u64(), v["p"].as_u64()), (Some(10), Some(5)));
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 14);
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn sweep_is_deterministic() {
    let args = ["sweep", "--exhaustive", "5", "--sample", "8:5:7", "--checks", "T1-rank,T2/T4d-det,T5-inertia"];
    let a = fourpc(&args);
    let b = fourpc(&[&args[..], &["--jobs", "2"]].concat());
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["corpus"]["trees"], 3 + 16 + 125 + 5);
    assert!(v.get("timing_ms").is_none());
    let timed = stdout_json(&fourpc(&["sweep", "--exhaustive", "3", "--timing"]));
    assert!(timed["timing_ms"]["T1-rank"].is_number());
}

#[test]
fn bad_input_and_usage_exit_two() {
    let out = fourpc(&["rank", "--edges", "1-2,1-2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(fourpc(&["rank", "--edges", "1-2", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(fourpc(&["verify", "--edges", "1-2", "--checks", "T9"]).status.code(), Some(2));
    assert_eq!(fourpc(&["det", "--edges", "1-2,2-3"]).status.code(), Some(2));
    assert_eq!(fourpc(&["basis", "--edges", "1-2,2-3,3-4", "--start-leaf", "2"]).status.code(), Some(2));
    assert_eq!(fourpc(&["sweep", "--sample", "10:5"]).status.code(), Some(2));
}

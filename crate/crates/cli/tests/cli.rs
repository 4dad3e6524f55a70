use std::process::{Command, Output};

use serde_json::{json, Value};

fn klfock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klfock")).args(args).env_remove("KLFOCK_CACHE_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let o = klfock(args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn straighten_json_matches_the_a1_example() {
    let v = json_of(&["straighten", "--type", "A1", "--ell", "5", "--weight", "-12"]);
    assert_eq!(
        v["terms"],
        json!([
            {"weight": [10], "coeff": {"1": -1}},
            {"weight": [8], "coeff": {"2": 1, "0": -1}},
            {"weight": [0], "coeff": {"1": 1, "3": -1}},
        ])
    );
    assert_eq!(v["ell"], 5);
    assert_eq!(v["type"], "A1");
}

#[test]
fn text_outputs() {
    let o = klfock(&["canonical", "--type", "A1", "--ell", "5", "--weight", "10", "--format", "text"]);
    assert_eq!(stdout(&o).trim(), "|10> - t^{1/2}|8> + t|0>");
    let o = klfock(&["straighten", "--type", "A1", "--ell", "5", "--weight=-11", "--format", "text"]);
    assert_eq!(stdout(&o).trim(), "-|9>");
    let o = klfock(&["straighten", "--type", "A1", "--ell", "5", "--weight", "-1", "--format", "text"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = klfock(&["decomp", "--type", "A1", "--ell", "5", "--weight", "10", "--format", "text"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().map(str::trim_end).collect();
    assert_eq!(lines, vec!["|10>  1", "|8>   t^{1/2}", "|0>   0"]);
}

#[test]
fn decomp_block_and_klpoly_agree_on_a1() {
    let d = json_of(&["decomp", "--type", "A1", "--ell", "5", "--weight", "10"]);
    assert_eq!(d["row"][1], json!({"weight": [8], "coeff": {"1": 1}}));
    assert_eq!(d["row"][2], json!({"weight": [0], "coeff": {}}));
    let b = json_of(&["block", "--type", "A1", "--ell", "5", "--weight", "10"]);
    assert_eq!(b["block"], json!([[10], [8], [0]]));
    let c = json_of(&["canonical", "--type", "A1", "--ell", "5", "--weight", "10"]);
    let k = json_of(&["klpoly", "--type", "A1", "--ell", "5", "--weight", "10"]);
    assert_eq!(c["terms"], k["terms"]);
}

#[test]
fn bar_is_reported_straightened() {
    let v = json_of(&["bar", "--type", "A1", "--ell", "5", "--weight", "10", "--format", "json"]);
    assert_eq!(v["terms"][0], json!({"weight": [10], "coeff": {"0": 1}}));
}

#[test]
fn strategies_give_identical_output() {
    let base = stdout(&klfock(&["straighten", "--type", "B2", "--ell", "3", "--weight", "-5,-4"]));
    for (s, seed) in [("rightmost", "0"), ("randomized", "1"), ("randomized", "99")] {
        let o = klfock(&["straighten", "--type", "B2", "--ell", "3", "--weight", "-5,-4", "--strategy", s, "--seed", seed]);
        assert_eq!(stdout(&o), base, "{s}");
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["verify", "--suite", "phi", "--type", "A2", "--ell", "2", "--height", "2"];
    let a = klfock(&args);
    let b = klfock(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["mismatches"], json!([]));
    assert!(v["checked"].as_u64().unwrap() > 0);
}

#[test]
fn every_suite_runs_clean_on_small_inputs() {
    for args in [
        vec!["verify", "--suite", "confluence", "--type", "A2", "--ell", "3", "--height", "5"],
        vec!["verify", "--suite", "hexagon", "--type", "A1", "--ell", "2", "--height", "3"],
        vec!["verify", "--suite", "wedge", "--type", "A3", "--ell", "2", "--height", "4"],
        vec!["verify", "--suite", "dihedral", "--height", "5"],
    ] {
        let v = json_of(&args);
        assert_eq!(v["mismatches"], json!([]), "{args:?}");
    }
    let o = klfock(&["verify", "--suite", "dihedral", "--height", "3", "--format", "text"]);
    assert!(stdout(&o).contains("mismatches  0"));
}

#[test]
fn argument_errors_exit_2_and_name_the_flag() {
    for (args, flag) in [
        (vec!["straighten", "--type", "A1", "--ell", "0", "--weight", "1"], "--ell"),
        (vec!["straighten", "--type", "A1", "--weight", "1,2"], "--weight"),
        (vec!["straighten", "--type", "A1", "--weight", "x"], "--weight"),
        (vec!["straighten", "--type", "Z3", "--weight", "1"], "--type"),
        (vec!["canonical", "--type", "A1", "--weight", "-3"], "--weight"),
        (vec!["verify", "--type", "A1", "--suite", "nope"], "--suite"),
        (vec!["straighten", "--type", "A1", "--weight", "1", "--strategy", "sideways"], "--strategy"),
        (vec!["straighten", "--type", "A1", "--weight", "1", "--format", "xml"], "--format"),
        (vec!["straighten", "--type", "A1"], "--weight"),
        (vec!["straighten", "--weight", "1"], "--type"),
        (vec!["wedge", "--partition", "1,3"], "--partition"),
    ] {
        let o = klfock(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn internal_failures_exit_1() {
    // The wedge rule reaches the frozen tail of a two-slot window.
    let o = klfock(&["wedge", "--indices", "0,-2", "--ell", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("tail"));
    let o = klfock(&["verify", "--suite", "wedge", "--type", "B2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn wedge_conversions_and_straightening() {
    let v = json_of(&["wedge", "--partition", "4,4,3,3,2,2,1,1,1", "--slots", "10"]);
    assert_eq!(v["word"], json!([4, 3, 1, 0, -2, -3, -5, -6, -7, -9]));
    assert_eq!(v["maya"]["black"], json!([4, 3, 1, 0, -2, -3, -5, -6, -7]));
    let v = json_of(&["wedge", "--indices", "0,10", "--ell", "5"]);
    assert_eq!(v["terms"], json!([{"word": [10, 0], "coeff": {"0": -1}}]));
}

#[test]
fn cartan_file_matches_type_label() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a2.json");
    std::fs::write(&path, r#"{"cartan": [[2, -1], [-1, 2]]}"#).unwrap();
    let a = json_of(&["straighten", "--cartan", path.to_str().unwrap(), "--ell", "2", "--weight", "-3,1"]);
    let b = json_of(&["straighten", "--type", "A2", "--ell", "2", "--weight", "-3,1"]);
    assert_eq!(a["terms"], b["terms"]);
    std::fs::write(&path, "[[2, -3], [-3, 2]]").unwrap();
    let o = klfock(&["straighten", "--cartan", path.to_str().unwrap(), "--weight", "0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--cartan"));
}

#[test]
fn cache_directory_holds_content_addressed_results() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_klfock"))
            .args(["canonical", "--type", "A2", "--ell", "2", "--weight", "2,2"])
            .env("KLFOCK_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(files.len(), 1);
    let name = files[0].to_str().unwrap().to_string();
    assert_eq!(name.len(), 64 + ".out".len());
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, klfock(&["canonical", "--type", "A2", "--ell", "2", "--weight", "2,2"]).stdout);
}

//! End-to-end checks of the binary: exit codes, report content, catalog
//! files and DOT output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn graphs_dir() -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "graphs"]
        .iter()
        .collect()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn analyze_example1_passes() {
    let path = graphs_dir().join("example1.json");
    let output = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("1/12(1,5)"));
    assert!(text.contains("X: cA_2"));
    assert!(text.contains("verdict: PASS"));
}

#[test]
fn analyze_nonnormal_json_report() {
    let path = graphs_dir().join("nonnormal.json");
    let output = run(&["analyze", path.to_str().unwrap(), "--json"]);
    assert_eq!(output.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["class"], "nonnormal");
    assert_eq!(report["verdict"]["extras"]["x1"], "6");
    assert_eq!(report["verdict"]["extras"]["x2"], "1");
    assert_eq!(report["verdict"]["mu"], "1");
    // rationals are exact fraction strings, never decimals
    let text = stdout(&output);
    assert!(text.contains("\"-11/9\""));
    assert!(!text.contains("-1.22"));
}

#[test]
fn analyze_failing_conditions_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("end.json");
    // marked curve at the end of the chain: K.C = -1/2 but C^2 = -7/12
    std::fs::write(
        &path,
        r#"{
            "vertices": [
                {"id": "E1", "e": -3},
                {"id": "E2", "e": -2},
                {"id": "E3", "e": -3},
                {"id": "C", "e": -1, "marked": true}
            ],
            "edges": [["E1","E2"],["E2","E3"],["E1","C"]]
        }"#,
    )
    .unwrap();
    let output = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout(&output).contains("verdict: FAIL"));
}

#[test]
fn analyze_malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    std::fs::write(&path, r#"{"vertices": [], "edges": []}"#).unwrap();
    let output = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));

    let output = run(&["analyze", "/nonexistent/file.json"]);
    assert_eq!(output.status.code(), Some(2));

    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{oops").unwrap();
    let output = run(&["analyze", garbled.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn hj_expand_and_recognize() {
    let output = run(&["hj", "12", "5"]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output).trim(), "[3,2,3]");

    let output = run(&["hj", "--chain", "2,5"]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output).trim(), "9/5 \u{21d2} 1/9(1,5)");

    let output = run(&["hj", "4", "2"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn dot_output_shapes() {
    let path = graphs_dir().join("example1.json");
    let output = run(&["dot", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("\"C\" [label=\"-1\", style=filled"));

    let glued = graphs_dir().join("nonnormal.json");
    let output = run(&["dot", glued.to_str().unwrap()]);
    assert!(stdout(&output).contains("style=dashed"));
}

#[test]
fn enumerate_semistable_catalogs() {
    let output = run(&["enumerate", "semistable", "--k", "2"]);
    assert_eq!(output.status.code(), Some(0));
    let catalog: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(catalog["records"].as_array().unwrap().len(), 0);
    assert_eq!(catalog["note"], "empty (proved: cA_1)");

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k3.json");
    let output = run(&[
        "enumerate",
        "semistable",
        "--k",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let catalog: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let records = catalog["records"].as_array().unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0]["n"], 2);
    assert_eq!(records[0]["n_prime"], 3);
    assert_eq!(records[0]["pell"]["x"], 1);
    assert_eq!(records[0]["pell"]["y"], 1);

    let output = run(&[
        "enumerate",
        "semistable",
        "--k",
        "3",
        "--out",
        "/nonexistent/dir/file.json",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn reports_never_contain_decimals() {
    for name in [
        "example1.json",
        "example2.json",
        "example3.json",
        "example4.json",
        "semistable.json",
        "nonnormal.json",
    ] {
        let path = graphs_dir().join(name);
        for flags in [vec!["analyze"], vec!["analyze", "--json"]] {
            let mut args = flags.clone();
            let p = path.to_str().unwrap().to_string();
            args.push(&p);
            let output = run(&args.iter().map(|s| &**s).collect::<Vec<_>>());
            let text = stdout(&output);
            for line in text.lines() {
                assert!(
                    !line
                        .as_bytes()
                        .windows(3)
                        .any(|w| w[0].is_ascii_digit() && w[1] == b'.' && w[2].is_ascii_digit()),
                    "{name}: decimal found in `{line}`"
                );
            }
        }
    }
}

#[test]
fn semistable_report_surfaces_both_section_positions() {
    let path = graphs_dir().join("semistable.json");
    let output = run(&["analyze", path.to_str().unwrap(), "--json"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let section = &report["verdict"]["extras"]["section_at_unit_axial"];
    assert_eq!(section["m"], 4);
    assert_eq!(section["s_position_formula"], 3);
    assert_eq!(section["s_linear_system"], 2);
}

#[test]
fn enumerate_normal_catalog_contains_example3() {
    let output = run(&["enumerate", "normal", "--max-n", "5", "--max-d", "4"]);
    assert_eq!(output.status.code(), Some(0));
    let catalog: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let records = catalog["records"].as_array().unwrap();
    assert!(records
        .iter()
        .any(|r| r["n"] == 5 && r["d"] == 4 && r["a"] == 3 && r["position"] == 4));
}

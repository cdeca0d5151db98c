use std::process::Command;

use serde_json::Value;
use stci_core::cli::{run, Outcome};
use stci_core::rdp::ConfigInvariants;
use stci_core::ruling::{LabeledGraph, SnortReport};
use stci_core::theorems::Thm2Report;

fn stci(args: &[&str]) -> Outcome {
    run(std::iter::once("stci").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> String {
    let out = stci(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    assert!(out.stderr.is_empty());
    out.stdout
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&ok(&full)).unwrap()
}

#[test]
fn phi_in_bracket_notation() {
    assert_eq!(ok(&["phi", "10", "4"]), "(4,3,1^[3])\n");
}

#[test]
fn pair_info_as_json() {
    let out = ok(&["rdp", "info", "Dn:7", "--format", "json"]);
    assert_eq!(
        out,
        "{\"deficiency\":-2,\"delta\":\"7/4\",\"order\":4,\"sigma\":7,\"type\":\"(3,1^[6])\"}\n"
    );
    let back: ConfigInvariants = serde_json::from_str(&out).unwrap();
    assert_eq!(back.type_seq.to_string(), "(3,1^[6])");
}

#[test]
fn configuration_invariants() {
    let v = json(&["rdp", "config", "8*A:2:1 + A:3:1"]);
    assert_eq!(v["type"], "(9,9,1)");
    assert_eq!(v["delta"], "73/12");
    assert_eq!(v["sigma"], 19);
    assert_eq!(v["deficiency"], 0);

    let human = ok(&["rdp", "config", "A:1:1 + 4*A:1:1 + A:2:1"]);
    assert!(human.lines().any(|l| l == "type: (6,1)"), "{human}");
}

#[test]
fn runs_are_compressed_in_human_output() {
    assert_eq!(
        ok(&["rdp", "info", "A:5:1"]).lines().nth(1),
        Some("type: (1^[5])")
    );
    assert_eq!(ok(&["phi", "6", "1"]), "(1^[6])\n");
    let v = json(&["thm3", "--s", "4", "--d", "4", "--type", "2,1,1,1,1"]);
    assert_eq!(v["lhs"], "4/3");
}

#[test]
fn enumerate_table_formats() {
    let csv = ok(&["enumerate", "--d", "4", "--g", "0", "--format", "csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "s,t,n,p_s,p_t");
    assert_eq!(lines.len(), 16);
    assert_eq!(lines[1], "3,4,3,5,9");

    let empty = ok(&["enumerate", "--d", "4", "--s-max", "2", "--format", "csv"]);
    assert_eq!(empty, "s,t,n,p_s,p_t\n");
    assert_eq!(ok(&["enumerate", "--d", "4", "--s-max", "2"]), "{}\n");

    let one = json(&["enumerate", "--d", "4", "--one-sided", "--s-max", "4"]);
    assert!(one.as_array().unwrap().len() >= 4);
}

#[test]
fn reports_round_trip() {
    let out = ok(&[
        "thm2", "--s", "4", "--t", "4", "--d", "4", "--p", "9,8,2", "--format", "json",
    ]);
    let report: Thm2Report = serde_json::from_str(&out).unwrap();
    assert_eq!(report.margins, vec![3.into(), 4.into(), 2.into()]);
    assert!(report.holds);

    let v = json(&["thm1", "--s", "4", "--t", "4", "--d", "4"]);
    assert_eq!(v["value"], "8");
    assert_eq!(v["integral"], true);

    let v = json(&["thma", "--s", "4", "--t", "4", "--d", "4"]);
    assert_eq!(v["status"], "hypotheses_fail");
    assert_eq!(v["r"], 24);
    assert_eq!(v["bound"], 19);
}

#[test]
fn bounds() {
    let v = json(&["bound", "4"]);
    assert_eq!(
        (v["resolution"].clone(), v["miyaoka"].clone()),
        (19.into(), "24".into())
    );
    assert_eq!(ok(&["kbound", "--s", "4", "--d", "4", "--l", "7"]), "9\n");
    assert_eq!(ok(&["kbound", "--s", "1", "--d", "1", "--l", "3"]), "2\n");
}

#[test]
fn chow_expansion() {
    let v = json(&[
        "chow", "expand", "--s", "4", "--t", "4", "--d", "4", "--p", "8,8,8",
    ]);
    assert_eq!(v["a"], serde_json::json!([0, 0, 0, 0]));
    let csv = ok(&[
        "chow", "expand", "--s", "4", "--t", "4", "--d", "4", "--p", "9,8,2", "--format", "csv",
    ]);
    assert_eq!(csv, "m,a\n1,3\n2,1\n3,-5\n4,-5\n");
}

#[test]
fn bungo_and_config_search() {
    let bungo = ok(&["bungo"]);
    assert_eq!(bungo.lines().count(), 3);
    assert!(bungo.contains("(9,9,1)"));

    let v = json(&["search-config", "--type", "9,9", "--max-def", "1"]);
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["configuration"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["7*A:2:1 + A:5:2", "9*A:2:1"]);

    let v = json(&[
        "search-config",
        "--type",
        "9,8,2",
        "--max-def",
        "0",
        "--contains",
        "A:4:2",
    ]);
    assert_eq!(v[0]["configuration"], "6*A:2:1 + A:3:1 + A:4:2");

    let csv = ok(&[
        "search-config",
        "--type",
        "9,9",
        "--max-def",
        "1",
        "--delta",
        "6",
        "--format",
        "csv",
    ]);
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let types: Vec<String> = rdr.records().map(|r| r.unwrap()[1].to_string()).collect();
    assert_eq!(types, ["(9,9)", "(9,9)"]);
}

#[test]
fn graphs_and_cone() {
    let out = ok(&["graph", "--history", "+,1,+", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let g: LabeledGraph = serde_json::from_value(v["graph"].clone()).unwrap();
    assert_eq!(g.top(), 4);
    assert_eq!(v["strict_transform"], "R1 - R2 - R3");

    let out = ok(&["snort", "--a", "1,-1,0", "--format", "json"]);
    let r: SnortReport = serde_json::from_str(&out).unwrap();
    assert!(r.holds);
    assert!(!json(&["snort", "--a", "-1"])["holds"].as_bool().unwrap());
}

#[test]
fn exit_codes() {
    let out = stci(&["phi", "5", "6"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.starts_with("error: ") && out.stdout.is_empty());

    let out = stci(&["thm1", "--s", "3", "--t", "3", "--d", "4"]);
    assert_eq!(out.code, 1);

    for bad in [
        &["frobnicate"][..],
        &["phi", "5"],
        &["enumerate", "--d", "4", "--nope"],
        &["--format", "xml", "bungo"],
    ] {
        let out = stci(bad);
        assert_eq!(out.code, 2, "{bad:?}");
        assert!(out.stderr.starts_with("error:"), "{}", out.stderr);
    }

    let help = stci(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("enumerate"));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "search-config",
        "--type",
        "9,9",
        "--max-def",
        "1",
        "--format",
        "json",
    ];
    assert_eq!(stci(&args), stci(&args));
    let args = ["enumerate", "--d", "3", "--g", "1", "--format", "json"];
    assert_eq!(stci(&args), stci(&args));
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_stci");
    let out = Command::new(bin).args(["phi", "10", "4"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "(4,3,1^[3])\n");

    let out = Command::new(bin)
        .args(["rdp", "info", "B:1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin).args(["phi", "0", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

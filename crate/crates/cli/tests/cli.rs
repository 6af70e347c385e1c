use std::process::{Command, Output};

use serde_json::Value;

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soergel-forge")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn redwords_counts() {
    for (j, count) in [("1", 1), ("1,2", 2), ("1,2,3", 16)] {
        let out = forge(&["--J", j, "redwords"]);
        assert!(out.status.success());
        let v = json(&out);
        assert_eq!(v["schema"], "soergel-forge/1");
        assert_eq!(v["count"], count);
    }
}

#[test]
fn conflated_graph_marks_source_and_sink() {
    let out = forge(&["--J", "1,2,3", "graph", "--conflated", "--format", "dot"]);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("shape=box").count(), 1);
    assert_eq!(dot.matches("shape=doublecircle").count(), 1);

    let v = json(&forge(&["--J", "1,2", "graph", "--conflated"]));
    assert_eq!(v["source"], "121");
    assert_eq!(v["sink"], "212");
}

#[test]
fn verify_reports_are_sorted_and_pass() {
    let out = forge(&["--n", "3", "verify", "hecke"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["suite"], "hecke");
    assert_eq!(v["status"], "pass");
    let names: Vec<String> = v["reports"].as_array().unwrap().iter().map(|r| r["check"].as_str().unwrap().to_string()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn verify_is_deterministic_for_a_seed() {
    let args = ["--n", "2", "--J", "1,2", "--seed", "5", "verify", "zidem"];
    let a = forge(&args);
    let b = forge(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn homdim_table_matches_the_library() {
    let v = json(&forge(&["--n", "2", "--degree-lo", "-2", "--degree-hi", "4", "homdim", "--x", "12", "--y", "21"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    for r in rows {
        let m = r["degree"].as_i64().unwrap() as i32;
        let x = "12".parse().unwrap();
        let y = "21".parse().unwrap();
        assert_eq!(r["dim"].as_u64().unwrap() as usize, soergel_core::bsmod::hom_dim_at_degree(&x, &y, m, 2).unwrap());
        assert_eq!(r["dim"].as_i64(), r["predicted"].as_i64());
    }
}

#[test]
fn dual_basis_listing_has_one_row_per_element() {
    let v = json(&forge(&["--J", "1,2", "dualbasis"]));
    assert_eq!(v["basis"].as_array().unwrap().len(), 6);
    assert_eq!(v["dual"].as_array().unwrap().len(), 6);
}

#[test]
fn zmat_dumps_the_projector() {
    let v = json(&forge(&["--J", "1,2", "zmat"]));
    assert_eq!(v["schema"], "soergel-forge/1");
    let text = String::from_utf8(forge(&["--J", "1,2", "--format", "text", "zmat"]).stdout).unwrap();
    assert!(text.starts_with("z: 121 -> 212"), "{text}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(forge(&["--n", "9", "redwords"]).status.code(), Some(2));
    assert_eq!(forge(&["--n", "2", "--J", "3", "redwords"]).status.code(), Some(2));
    assert_eq!(forge(&["--format", "dot", "redwords"]).status.code(), Some(2));
    assert_eq!(forge(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(forge(&["--degree-lo", "3", "--degree-hi", "1", "homdim", "--x", "1", "--y", "1"]).status.code(), Some(2));
}

#[test]
fn exceeding_the_budget_exits_with_three() {
    let out = forge(&["--n", "3", "--budget-seconds", "1", "verify", "ranks"]);
    assert_eq!(out.status.code(), Some(3));
}

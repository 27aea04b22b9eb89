use std::process::{Command, Output};

use serde_json::Value;

fn horn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    horn(args).status.code().expect("exited normally")
}

fn json(args: &[&str]) -> Value {
    let out = horn(args);
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn nonzero_exit_codes() {
    assert_eq!(code(&["nonzero", "1,4;2,3@4"]), 1);
    assert_eq!(code(&["nonzero", "1,4;2,4@4"]), 0);
    assert_eq!(code(&["--engine", "oracle", "nonzero", "3,4@4"]), 0);
    assert_eq!(code(&["--engine", "horn", "nonzero", "1,4;2,3@4"]), 1);
    assert_eq!(
        code(&["--engine", "horn", "--mode", "C", "nonzero", "1,4;2,3@4"]),
        1
    );
    // rank stays above the expected dimension, so the probe abstains
    assert_eq!(code(&["--engine", "probe", "nonzero", "1,4;2,3@4"]), 2);
    assert_eq!(code(&["--engine", "probe", "nonzero", "1,2;1,2@4"]), 1);
    assert_eq!(code(&["--engine", "probe", "nonzero", "2,4;2,4@4"]), 0);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&["nonzero", "1,4;2,3"]), 64);
    assert_eq!(code(&["nonzero", "4,1@4"]), 64);
    assert_eq!(code(&["--prime", "32004", "nonzero", "1,4@4"]), 64);
    assert_eq!(code(&["--trials", "0", "nonzero", "1,4@4"]), 64);
    assert_eq!(code(&["frobnicate"]), 64);
    assert_eq!(code(&["count", "1,4;2,4@4", "--q", "7"]), 64);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn depth_bound_has_its_own_exit_code() {
    assert_eq!(code(&["--depth", "1", "nonzero", "1,4;2,3@4"]), 5);
}

#[test]
fn nonzero_json_reports_every_engine() {
    let v = json(&["--format", "json", "--seed", "7", "nonzero", "1,4;2,3@4"]);
    assert_eq!(v["problem"], "1,4;2,3@4");
    assert_eq!(v["oracle"]["nonzero"], false);
    assert_eq!(v["horn"]["witness"]["value"], 1);
    assert_eq!(
        v["horn"]["witness"]["ktuple"],
        serde_json::json!(["1", "2"])
    );
    assert_eq!(v["probe"]["verdict"], "INCONCLUSIVE");
    assert_eq!(v["agree"], true);
    assert_eq!(v["config"]["seed"], 7);
}

#[test]
fn same_seed_gives_identical_json() {
    let runs: &[&[&str]] = &[
        &[
            "--format",
            "json",
            "--seed",
            "11",
            "nonzero",
            "1,4,5,6;2,3,5,6@6",
        ],
        &[
            "--format",
            "json",
            "--seed",
            "11",
            "filtration",
            "1,4,5,6;2,3,5,6@6",
        ],
        &[
            "--format",
            "json",
            "--seed",
            "11",
            "count",
            "2,4;2,4;2,4;2,4@4",
            "--q",
            "3",
            "--samples",
            "8",
        ],
        &["--format", "json", "--seed", "11", "examples"],
        &["--format", "json", "hn", "1,4;2,3@4"],
    ];
    for args in runs {
        let a = horn(args);
        let b = horn(args);
        assert!(!a.stdout.is_empty(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let other = horn(&[
        "--format",
        "json",
        "--seed",
        "12",
        "filtration",
        "1,4,5,6;2,3,5,6@6",
    ]);
    let first = horn(runs[1]);
    assert_ne!(other.stdout, first.stdout);
}

#[test]
fn table_json_layout() {
    let v = json(&["--format", "json", "table", "1", "2", "2"]);
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["d", "point_tuples", "r", "s", "tuples"]);
    assert_eq!(
        v["tuples"],
        serde_json::json!([["1", "2"], ["2", "1"], ["2", "2"]])
    );
    assert_eq!(
        v["point_tuples"],
        serde_json::json!([["1", "2"], ["2", "1"]])
    );
}

#[test]
fn point_inequalities_are_a_subset() {
    let labels = |mode: &str| -> Vec<Value> {
        let v = json(&[
            "--format",
            "json",
            "--mode",
            mode,
            "inequalities",
            "2",
            "4",
            "2",
        ]);
        assert_eq!(
            v["count"].as_u64().unwrap() as usize,
            v["inequalities"].as_array().unwrap().len()
        );
        v["inequalities"].as_array().unwrap().clone()
    };
    let b = labels("B");
    let c = labels("C");
    assert!(c.iter().all(|x| b.contains(x)));
    let single = json(&["--format", "json", "inequalities", "1", "3", "2"]);
    assert_eq!(single["count"], 1);
    assert_eq!(single["inequalities"][0]["d"], 1);
}

#[test]
fn examples_emit_one_object_each() {
    let out = horn(&["--format", "json", "examples"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let reports: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(reports.len(), 4);
    let all_pass = reports.iter().all(|r| r["pass"] == true);
    assert_eq!(out.status.code(), Some(if all_pass { 0 } else { 1 }));
    for r in &reports[..3] {
        assert_eq!(r["pass"], true, "{r}");
    }
    assert_eq!(
        reports[2]["observed"]["bottom_ambient"],
        serde_json::json!(["1", "6"])
    );
}

#[test]
fn hn_certificate_for_failing_pair() {
    let v = json(&["--format", "json", "hn", "1,4;2,3@4"]);
    assert_eq!(v["outcome"], "unstable");
    assert_eq!(v["violated"]["value"], 1);
    assert_eq!(v["contradictor"]["slope"], "3/1");
    assert_eq!(v["point_check"], "1");
}

#[test]
fn saturation_report() {
    let out = horn(&[
        "saturation",
        "--partitions",
        "1;1",
        "--rows",
        "2",
        "--width",
        "2",
        "--factor",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("equivalent: true/true"));
    assert_eq!(
        code(&[
            "saturation",
            "--partitions",
            "3;1",
            "--rows",
            "2",
            "--width",
            "2"
        ]),
        64
    );
}

#[test]
fn count_csv_shape() {
    let out = horn(&[
        "--seed",
        "3",
        "count",
        "2,4;2,4;2,4;2,4@4",
        "--samples",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("seed,count,degenerate"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 3);
        let count: usize = fields[1].parse().unwrap();
        let degenerate: bool = fields[2].parse().unwrap();
        assert!(degenerate || count <= 2, "{row}");
    }
}

#[test]
fn hidden_sweep_finds_no_disagreement() {
    assert_eq!(code(&["sweep", "2", "4", "2"]), 0);
    assert_eq!(code(&["sweep", "2", "5", "2"]), 0);
}

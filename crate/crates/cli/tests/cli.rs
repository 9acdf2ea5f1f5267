use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn oresme(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oresme"))
        .args(args)
        .env_remove("ORESME_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = oresme(&full);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn csv_rows(args: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut full = args.to_vec();
    full.extend(["--format", "csv"]);
    let o = oresme(&full);
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect();
    (header, rows)
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("oresme-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

/// Compares a CSV cell against the JSON field it renders.
fn same(cell: &str, v: &Value) -> bool {
    match v {
        Value::Null => cell.is_empty(),
        Value::String(s) => s == cell,
        Value::Bool(b) => b.to_string() == cell,
        Value::Number(n) if n.is_f64() => cell.parse::<f64>().ok() == n.as_f64(),
        Value::Number(n) => n.to_string() == cell,
        _ => false,
    }
}

#[test]
fn table_matches_the_displayed_list() {
    let v = json(&["table", "--from", "0", "--to", "6"]);
    let polys: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["poly"].as_str().unwrap()).collect();
    assert_eq!(
        polys,
        [
            "0",
            "1/x",
            "1/x",
            "(x^2 - 1)/x^3",
            "(x^2 - 2)/x^3",
            "(x^4 - 3*x^2 + 1)/x^5",
            "(x^4 - 4*x^2 + 3)/x^5"
        ]
    );
}

#[test]
fn derivative_table_at_four() {
    let v = json(&["table", "--from", "0", "--to", "4", "--derivative", "--x", "4"]);
    let values: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["value"].as_str().unwrap()).collect();
    // -10/256 in lowest terms
    assert_eq!(values, ["0/1", "-1/16", "-1/16", "-13/256", "-5/128"]);
}

#[test]
fn matrix_and_recurrence_digests_agree() {
    let m = json(&["eval", "--n", "100", "--x", "3", "--mode", "matrix"]);
    let r = json(&["eval", "--n", "100", "--x", "3", "--mode", "recurrence"]);
    let c = json(&["eval", "--n", "100", "--x", "3", "--mode", "closed"]);
    assert_eq!(m["digest"], r["digest"]);
    assert_eq!(c["digest"], r["digest"]);
    assert_eq!(m["value"], r["value"]);
}

#[test]
fn exit_code_matrix() {
    // 0: every outcome matches expectations, transcribed entries included.
    let o = oresme(&["verify", "--all", "--profile", "quick", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for id in ["ODD_SUM_T", "G3_T", "BN_T", "BN1_T"] {
        let r = v["reports"].as_array().unwrap().iter().find(|r| r["id"] == id).unwrap();
        assert_eq!(r["outcome"], "fails (expected)", "{id}");
    }

    // 1: an identity that fails without being expected to.
    let bad = temp_file("bad.txt", "WRONG: O[n+1] == O[n] where n=1..4\nOK: O[n] == O[n] where n=0..2\n");
    let o = oresme(&["dsl", "check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("UNEXPECTED fails"));

    // Catalog sweeps: below a lower bound is a usage error; a vacuous sweep
    // cannot confirm an expected failure.
    let o = oresme(&["verify", "--id", "BN_T", "--range", "n=0..0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = oresme(&["verify", "--id", "ODD_SUM_T", "--range", "n=0..-1"]);
    assert_eq!(o.status.code(), Some(1));

    // 2: usage errors, with nothing on stdout.
    for args in [
        vec!["verify"],
        vec!["verify", "--id", "NOPE"],
        vec!["verify", "--all", "--id", "SUM"],
        vec!["table", "--from", "3", "--to", "1"],
        vec!["eval", "--n", "3", "--x", "1/0"],
        vec!["eval", "--n", "3", "--x", "0"],
        vec!["limit", "--x", "3", "--bogus"],
        vec!["bench", "--n-list", "4", "--x", "1"],
        vec!["frobnicate"],
    ] {
        let o = oresme(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }

    // 2: a corpus with a bad line names the line on stderr.
    let broken = temp_file("broken.txt", "# header\nA: O[n] == O[n] where n=0..2\nB: O[n == 0 where n=0..1\n");
    let o = oresme(&["dsl", "check", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":3:8:"), "{err}");

    // 0: shipped corpus.
    let shipped = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/corpus/oresme_identities.txt");
    assert_eq!(oresme(&["dsl", "check", shipped]).status.code(), Some(0));
}

#[test]
fn json_is_byte_identical_across_runs_and_worker_counts() {
    let args = ["verify", "--all", "--format", "json"];
    let base = oresme(&args).stdout;
    assert_eq!(oresme(&args).stdout, base);
    let mut one = args.to_vec();
    one.extend(["--jobs", "1"]);
    assert_eq!(oresme(&one).stdout, base);
    let env = Command::new(env!("CARGO_BIN_EXE_oresme"))
        .args(args)
        .env("ORESME_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(env.stdout, base);
    let shipped = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/corpus/oresme_identities.txt");
    let d1 = oresme(&["dsl", "check", shipped, "--format", "json", "--jobs", "1"]).stdout;
    let d2 = oresme(&["dsl", "check", shipped, "--format", "json", "--jobs", "4"]).stdout;
    assert_eq!(d1, d2);
}

#[test]
fn csv_and_json_render_the_same_table() {
    let args = ["table", "--from", "-3", "--to", "8", "--derivative", "--x", "3"];
    let v = json(&args);
    let (header, rows) = csv_rows(&args);
    let items = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), items.len());
    for (row, item) in rows.iter().zip(items) {
        for (h, cell) in header.iter().zip(row) {
            assert!(same(cell, &item[h.as_str()]), "{h}: {cell} vs {}", item[h.as_str()]);
        }
    }
}

#[test]
fn csv_and_json_render_the_same_reports() {
    let args = ["verify", "--all"];
    let v = json(&args);
    let (header, rows) = csv_rows(&args);
    let items = v["reports"].as_array().unwrap();
    assert_eq!(rows.len(), items.len());
    for (row, item) in rows.iter().zip(items) {
        for (h, cell) in header.iter().zip(row) {
            if h == "witnesses" {
                let params: Vec<String> = item["witnesses"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|w| {
                        w["params"]
                            .as_object()
                            .unwrap()
                            .iter()
                            .map(|(k, v)| format!("{k}={v}"))
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                assert_eq!(*cell, params.join(";"));
            } else {
                assert!(same(cell, &item[h.as_str()]), "{h}: {cell} vs {}", item[h.as_str()]);
            }
        }
    }
}

#[test]
fn csv_and_json_render_the_same_probe_and_eval() {
    let args = ["limit", "--x", "3", "--steps", "40"];
    let v = json(&args);
    let (header, rows) = csv_rows(&args);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(rows.len(), steps.len());
    for (row, item) in rows.iter().zip(steps) {
        for (h, cell) in header.iter().zip(row) {
            assert!(same(cell, &item[h.as_str()]), "{h}: {cell} vs {}", item[h.as_str()]);
        }
    }

    let args = ["eval", "--n", "-7", "--x", "5/3", "--mode", "closed"];
    let v = json(&args);
    let (header, rows) = csv_rows(&args);
    for (h, cell) in header.iter().zip(&rows[0]) {
        assert!(same(cell, &v[h.as_str()]), "{h}");
    }

    let args = ["bench", "--n-list", "5,50", "--x", "3"];
    let v = json(&args);
    let (header, rows) = csv_rows(&args);
    let recs = v["records"].as_array().unwrap();
    assert_eq!(rows.len(), recs.len());
    for (row, item) in rows.iter().zip(recs) {
        for (h, cell) in header.iter().zip(row) {
            if h != "wall_ns" {
                assert!(same(cell, &item[h.as_str()]), "{h}: {cell} vs {}", item[h.as_str()]);
            }
        }
    }
    assert_eq!(v["consistent"], true);
}

#[test]
fn roots_and_limit_reports() {
    let v = json(&["roots", "--n", "24", "--tol", "1e-8"]);
    assert_eq!(v["pass"], true);
    let v = json(&["limit", "--x", "2", "--steps", "60"]);
    assert_eq!(v["verdict"], "degenerate");
    assert_eq!(v["remark_discrepancy"], true);
    let v = json(&["limit", "--x", "1", "--steps", "200"]);
    assert_eq!(v["verdict"], "oscillating");
}

#[test]
fn numeric_check_at_a_point() {
    let v = json(&["verify", "--id", "CASSINI", "--at", "3"]);
    assert_eq!(v["reports"][0]["verdict"], "holds");
    let v = json(&["verify", "--id", "BINET", "--at", "3", "--range", "n=1..40"]);
    assert_eq!(v["reports"][0]["checked"], 40);
}

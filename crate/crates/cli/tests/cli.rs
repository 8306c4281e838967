use std::process::{Command, Output};

use serde_json::Value;

fn forbcfg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forbcfg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> Value {
    let o = forbcfg(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).expect("json output");
    assert_eq!(v["schema"], 1);
    v
}

#[test]
fn two_rows_admit_every_column() {
    let v = json(&["forb-exact", "--m", "2", "--r", "3", "--pattern", "M"]);
    assert_eq!(v["value"], 9);
    assert_eq!(v["status"], "exact");
    let csv = stdout(&forbcfg(&["forb-exact", "--m", "3", "--r", "3", "--format", "csv"]));
    assert_eq!(csv, "m,r,value,status\n3,3,24,exact\n");
}

#[test]
fn pattern_from_file() {
    let path = std::env::temp_dir().join(format!("forbcfg-pattern-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"rows":2,"alphabet":2,"columns":[[0,1],[1,0]]}"#).unwrap();
    let v = json(&["forb-exact", "--m", "3", "--r", "2", "--pattern", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    // Avoiding I_2 leaves a chain of 4 columns.
    assert_eq!(v["value"], 4);
    assert_eq!(forbcfg(&["forb-exact", "--m", "3", "--r", "2", "--pattern", "/no/such/file"]).status.code(), Some(2));
}

#[test]
fn h2_exact_column() {
    let o = forbcfg(&["h2", "--max-m", "8", "--alpha", "2", "--exact"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,H2,h2,split_a,split_b,predicted_k,agrees_with_theorem"));
    let h2: Vec<&str> = lines.clone().map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(h2, ["0", "1", "4", "12", "30", "73", "172", "400"]);
    assert!(lines.skip(2).all(|l| l.ends_with(",true")));
}

#[test]
fn h2_float_and_rational() {
    let float = stdout(&forbcfg(&["h2", "--max-m", "20", "--alpha", "3"]));
    let exact = stdout(&forbcfg(&["h2", "--max-m", "20", "--alpha", "3", "--exact"]));
    assert_eq!(float.lines().count(), 21);
    let last_split = |s: &str| s.lines().last().unwrap().split(',').skip(3).collect::<Vec<_>>().join(",");
    assert_eq!(last_split(&float), last_split(&exact));
    let half = stdout(&forbcfg(&["h2", "--max-m", "3", "--alpha", "3/2", "--exact"]));
    assert!(half.lines().last().unwrap().starts_with("3,7/2,"));
}

#[test]
fn lambda_prints_value_and_stop_index() {
    let o = forbcfg(&["lambda", "--alpha", "2", "--eps", "1e-6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("lambda(2) = 0.390747\nstop index: "), "{text}");
    assert_eq!(forbcfg(&["lambda", "--alpha", "1"]).status.code(), Some(2));
}

#[test]
fn h_exact_reports_structure() {
    let v = json(&["h-exact", "--m", "5", "--alpha", "2"]);
    assert_eq!(v["value"], "30");
    assert_eq!(v["status"], "exact");
    let mults = v["multiplicities"].as_object().unwrap();
    assert_eq!(mults.len(), 10);
    assert_eq!(mults.values().map(|x| x.as_u64().unwrap()).sum::<u64>(), 10);
    let covered: usize = v["closed_sets"].as_array().unwrap().iter().map(|s| s.as_array().unwrap().len()).sum();
    assert_eq!(covered, 5);
    let rational = json(&["h-exact", "--m", "3", "--alpha", "3/2"]);
    assert_eq!(rational["value"], "7/2");
}

#[test]
fn h_local_needs_a_seed() {
    assert_eq!(forbcfg(&["h-local", "--m", "5"]).status.code(), Some(2));
    let a = forbcfg(&["h-local", "--m", "7", "--seed", "3", "--restarts", "2"]);
    let b = forbcfg(&["h-local", "--m", "7", "--seed", "3", "--restarts", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["value"], "172");
    assert_eq!(v["status"], "lower_bound");
}

#[test]
fn choices_modes() {
    let all = json(&["forb-choices", "--m", "3", "--r", "4"]);
    assert_eq!(all["value"], "61");
    assert_eq!(all["status"], "exact");
    let good = json(&["forb-choices", "--m", "3", "--r", "4", "--mode", "good"]);
    assert_eq!(good["value"], "61");
    assert_eq!(good["argmax_good"], true);
    assert!(good["tcm"].is_object());
}

#[test]
fn sampling_requires_seed_and_is_reproducible() {
    assert_eq!(forbcfg(&["forb-choices", "--m", "4", "--r", "3", "--mode", "sample"]).status.code(), Some(2));
    let args = ["forb-choices", "--m", "4", "--r", "3", "--mode", "sample", "--samples", "500", "--seed", "11"];
    let a = forbcfg(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, forbcfg(&args).stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["status"], "lower_bound");
    assert_eq!(v["seed"], 11);
}

#[test]
fn error_statuses() {
    assert_eq!(forbcfg(&["forb-choices", "--m", "3", "--r", "2"]).status.code(), Some(2));
    assert_eq!(forbcfg(&["forb-choices", "--m", "6", "--r", "3"]).status.code(), Some(1));
    assert_eq!(forbcfg(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(forbcfg(&["h2", "--max-m", "4", "--alpha", "x"]).status.code(), Some(2));
    assert_eq!(forbcfg(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(forbcfg(&["h-exact", "--m", "7"]).status.code(), Some(1));
    assert_eq!(forbcfg(&["--help"]).status.code(), Some(0));
}

#[test]
fn bounds_and_sandwich() {
    let b = json(&["bounds", "--m", "6", "--r", "3"]);
    assert_eq!(b["alpha"], "2");
    assert_eq!(json(&["bounds", "--m", "6", "--r", "5"])["alpha"], "4/3");
    assert_eq!(b["coefficient_matches"], true);
    assert_eq!(b["consistent"], true);
    assert_eq!(b["eq1_lower"], (6 * 32 + 64).to_string());
    assert_eq!(b["general_upper_coefficient"], "83/192");
    assert_eq!(b["lambda"], 0.390747);
    let three = json(&["bounds", "--m", "6", "--r", "3", "--alpha", "3"]);
    assert_eq!(three["alpha"], "3");
    assert_eq!(three["coefficient_matches"], true);
    let s = json(&["sandwich", "--m", "4", "--r", "3"]);
    assert_eq!(s["excess"], "12");
    assert_eq!(s["tight"], true);
}

#[test]
fn verify_suites() {
    let o = forbcfg(&["verify", "--suite", "sauer"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("12 checks, 0 failed\n"));
    let list = json(&["verify", "--list", "--format", "json"]);
    assert!(list["suites"].as_array().unwrap().iter().any(|s| s == "construction"));
    let v = json(&["verify", "--suite", "h2-table", "--format", "json"]);
    assert_eq!(v["failed"], 0);
}

#[test]
fn emitted_tables_match() {
    let o = forbcfg(&["emit-tables", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["all_match"], true);
    let tables = v["tables"].as_object().unwrap();
    assert_eq!(tables.len(), 3);
    for cells in tables.values() {
        for c in cells.as_array().unwrap() {
            assert!(c.get("expected").is_some() && c["match"] == true, "{c}");
        }
    }
    let csv = stdout(&forbcfg(&["emit-tables", "--table", "h2"]));
    assert!(csv.lines().any(|l| l == "h2,8,H2,400,400,true"));
}

#[test]
fn output_file_and_thread_cap() {
    let path = std::env::temp_dir().join(format!("forbcfg-out-{}.csv", std::process::id()));
    let o = Command::new(env!("CARGO_BIN_EXE_forbcfg"))
        .args(["h2", "--max-m", "4", "--output", path.to_str().unwrap()])
        .env("FORBCFG_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written.lines().count(), 5);
    let bad = Command::new(env!("CARGO_BIN_EXE_forbcfg"))
        .args(["h2", "--max-m", "4"])
        .env("FORBCFG_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn identical_runs_are_byte_identical() {
    for args in [
        &["h-exact", "--m", "5"][..],
        &["forb-choices", "--m", "4", "--r", "3", "--mode", "good"][..],
        &["emit-tables", "--table", "upper-proof"][..],
    ] {
        assert_eq!(forbcfg(args).stdout, forbcfg(args).stdout, "{args:?}");
    }
}

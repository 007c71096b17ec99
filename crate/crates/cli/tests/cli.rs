use std::process::{Command, Output};

use serde_json::Value;

fn decolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_decolab"))
        .args(args)
        .env_remove("DECOLAB_THREADS")
        .output()
        .expect("spawn decolab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows, skipping metadata comments and the column header.
fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn fig1_rows_and_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.csv");
    let o = decolab(&["fig1", "--count", "201", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l == "r,reqc,concurrence"));
    assert!(text.lines().any(|l| l.starts_with("# timestamp=")));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 201);
    assert_eq!(rows[0], ["0", "0", "0"]);
    assert_eq!(rows[200], ["1", "1", "1"]);
}

#[test]
fn sweep_row_count_and_columns() {
    let o = decolab(&["sweep", "--channel", "phase-damping", "--r", "0.8", "--count", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "channel,r,p,reqc,concurrence"));
    assert!(text.contains("# r_values_default=false"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r[0] == "phase-damping" && r[1] == "0.8"));
}

#[test]
fn sweep_default_r_blocks_are_ordered() {
    let o = decolab(&["sweep", "--channel", "bit-flip", "--count", "5", "--no-timestamp"]);
    let text = stdout(&o);
    assert!(text.contains("# r_values=0.4;0.6;0.8;1"));
    assert!(text.contains("# r_values_default=true"));
    let rs: Vec<String> = data_rows(&text).into_iter().map(|r| r[1].clone()).collect();
    let want: Vec<&str> = ["0.4", "0.6", "0.8", "1"]
        .iter()
        .flat_map(|r| std::iter::repeat_n(*r, 5))
        .collect();
    assert_eq!(rs, want);
}

#[test]
fn bit_flip_full_strength_restores_singlet() {
    let o = decolab(&["sweep", "--channel", "bit-flip", "--r", "1.0", "--count", "21"]);
    let rows = data_rows(&stdout(&o));
    let (first, last) = (&rows[0], &rows[20]);
    assert_eq!(last[2], "1");
    assert!((num(&first[4]) - num(&last[4])).abs() < 1e-9);
}

#[test]
fn amplitude_damping_full_strength_is_product() {
    let o = decolab(&["sweep", "--channel", "amplitude-damping", "--r", "1.0", "--count", "11"]);
    let rows = data_rows(&stdout(&o));
    let last = rows.last().unwrap();
    assert_eq!(last[2], "1");
    assert!(num(&last[3]).abs() <= 1e-9 && num(&last[4]).abs() <= 1e-9);
}

fn critical(args: &[&str]) -> Value {
    let mut all = vec!["critical"];
    all.extend_from_slice(args);
    let o = decolab(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn critical_none_finds_one_crossover() {
    let doc = critical(&["--channel", "none"]);
    let xs = doc["critical_points"]["crossovers"].as_array().unwrap();
    assert_eq!(xs.len(), 1);
    let r = xs[0].as_f64().unwrap();
    assert!((0.50..=0.54).contains(&r), "{r}");
    assert_eq!(doc["records"].as_array().unwrap().len(), 201);
    assert_eq!(doc["metadata"]["channel"], "none");
}

#[test]
fn critical_phase_flip_zero_at_half() {
    let doc = critical(&["--channel", "phase-flip", "--r", "0.8"]);
    let zeros = doc["critical_points"]["reqc_zeros"].as_array().unwrap();
    assert_eq!(zeros.len(), 1);
    let c = zeros[0]["center"].as_f64().unwrap();
    assert!((c - 0.5).abs() <= 1e-6, "{c}");
}

#[test]
fn critical_phase_damping_singlet_has_no_death() {
    let doc = critical(&["--channel", "phase-damping", "--r", "1.0"]);
    assert!(doc["critical_points"]["death_intervals"].as_array().unwrap().is_empty());
}

#[test]
fn critical_csv_form() {
    let o = decolab(&["critical", "--channel", "bit-flip", "--format", "csv", "--no-timestamp"]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "kind,start,end"));
    assert!(text.lines().any(|l| l.starts_with("death_interval,")));
}

#[test]
fn json_sweep_keys_critical_points_by_r() {
    let o = decolab(&["sweep", "--channel", "bit-flip", "--r", "0.8,1", "--count", "21", "--format", "json"]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["records"].as_array().unwrap().len(), 42);
    assert!(doc["critical_points"]["0.8"].is_object());
    assert!(doc["critical_points"]["1"].is_object());
    assert!(doc["metadata"]["timestamp"].is_string());
}

#[test]
fn no_timestamp_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = decolab(&["fig1", "--count", "51", "--no-timestamp", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(p).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    assert!(!String::from_utf8(a).unwrap().contains("timestamp"));
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["sweep", "--channel", "phase-flip", "--count", "31", "--no-timestamp"];
    let base = decolab(&args).stdout;
    let capped = Command::new(env!("CARGO_BIN_EXE_decolab"))
        .args(args)
        .env("DECOLAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(0));
    assert_eq!(capped.stdout, base);
}

#[test]
fn exit_codes() {
    assert_eq!(decolab(&["sweep", "--channel", "depolarizing"]).status.code(), Some(2));
    assert_eq!(decolab(&["sweep", "--channel", "bit-flip", "--count", "1"]).status.code(), Some(2));
    assert_eq!(
        decolab(&["sweep", "--channel", "bit-flip", "--start", "0.9", "--stop", "0.1"]).status.code(),
        Some(2)
    );
    assert_eq!(decolab(&["sweep", "--channel", "bit-flip", "--r", "1.5"]).status.code(), Some(2));
    assert_eq!(decolab(&["fig1", "--bogus"]).status.code(), Some(2));
    assert_eq!(decolab(&["critical", "--channel", "none", "--eps-zero", "-1"]).status.code(), Some(2));

    let bad = decolab(&["fig1", "--out", "/nonexistent-dir/x/fig1.csv"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("cannot write"));
    assert!(bad.stdout.is_empty());

    let threads = Command::new(env!("CARGO_BIN_EXE_decolab"))
        .args(["fig1", "--count", "3"])
        .env("DECOLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn verify_passes_and_reports_route_deviation() {
    let o = decolab(&["verify"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.lines().filter(|l| l.ends_with("PASS")).count() >= 5);
    assert!(text.contains("max |general - x|"));
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn infmaj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infmaj")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn seq(&self, name: &str, entries: &[&str]) -> PathBuf {
        let body = serde_json::json!({ "prefix": entries });
        self.raw(name, &body.to_string())
    }

    fn raw(&self, name: &str, body: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_majorized_pair_holds_three_ways() {
    let f = Files::new();
    let (a, b) = (f.seq("a.json", &["0.5", "0.5"]), f.seq("b.json", &["1.0"]));
    let o = infmaj(&["check", s(&a), s(&b), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["partial_sums"]["verdict"], "holds");
    assert_eq!(v["hockey_stick"]["verdict"], "holds");
    assert_eq!(v["complete_monotonicity"]["verdict"]["verdict"], "holds");
    assert_eq!(v["seed"], 1);
}

#[test]
fn check_non_majorized_pair_reports_all_witnesses() {
    let f = Files::new();
    let a = f.seq("a.json", &["0.5", "0.25", "0.25"]);
    let b = f.seq("b.json", &["0.4", "0.3", "0.3"]);
    let o = infmaj(&["check", s(&a), s(&b), "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["partial_sums"]["witness"]["kind"], "partial_sum");
    assert_eq!(v["partial_sums"]["witness"]["k"], 1);
    assert_eq!(v["hockey_stick"]["witness"]["kind"], "threshold");
    let cm = &v["complete_monotonicity"]["verdict"]["witness"];
    assert_eq!(cm["kind"], "derivative");
    assert!(cm["order"].as_u64().is_some() && cm["s"].as_f64().unwrap() > 1.0);
    assert_eq!(v["disagreement"], false);
}

#[test]
fn check_reports_are_byte_identical() {
    let f = Files::new();
    let a = f.seq("a.json", &["0.6", "0.2", "0.2"]);
    let b = f.seq("b.json", &["0.7", "0.3"]);
    let one = infmaj(&["check", s(&a), s(&b), "--format", "json"]);
    let two = infmaj(&["check", s(&a), s(&b), "--format", "json", "--threads", "1"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn unequal_masses_fail_without_cm() {
    let f = Files::new();
    let (a, b) = (f.seq("a.json", &["0.5"]), f.seq("b.json", &["1"]));
    let o = infmaj(&["check", s(&a), s(&b), "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["partial_sums"]["witness"]["kind"], "mass");
    assert!(v["complete_monotonicity"].is_null());
}

#[test]
fn malformed_input_exits_64_with_location() {
    let f = Files::new();
    let good = f.seq("good.json", &["1"]);
    let broken = f.raw("broken.json", "{\"prefix\": [0.5,");
    let o = infmaj(&["check", s(&broken), s(&good)]);
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.json"));

    let negative = f.seq("neg.json", &["0.5", "-0.5"]);
    let o = infmaj(&["check", s(&negative), s(&good)]);
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("$.prefix[1]"));

    let word = f.raw("word.json", "{\"prefix\": [\"half\"]}");
    let o = infmaj(&["check", s(&word), s(&good)]);
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("$.prefix[0]"));
}

#[test]
fn bad_configuration_exits_64() {
    let f = Files::new();
    let a = f.seq("a.json", &["1"]);
    assert_eq!(code(&infmaj(&["check", s(&a), s(&a), "--precision-bits", "40"])), 64);
    assert_eq!(code(&infmaj(&["check", s(&a), s(&a), "--s-min", "0.5"])), 64);
    assert_eq!(code(&infmaj(&["check", s(&a), s(&a), "--no-such-flag"])), 64);
    assert_eq!(code(&infmaj(&["check", s(&a)])), 64);
}

#[test]
fn normalization_can_be_enforced() {
    let f = Files::new();
    let a = f.seq("a.json", &["0.5", "0.25"]);
    assert_eq!(code(&infmaj(&["check", s(&a), s(&a)])), 0);
    assert_eq!(code(&infmaj(&["check", s(&a), s(&a), "--require-normalized"])), 64);
}

#[test]
fn zeta_csv_matches_closed_form() {
    let f = Files::new();
    let (a, b) = (f.seq("a.json", &["0.5", "0.5"]), f.seq("b.json", &["1.0"]));
    let o = infmaj(&["zeta", s(&a), s(&b), "--samples", "3", "--csv", "--s-min", "1.5", "--s-max", "10"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("s,zeta,f,df,d2f,d3f"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        let s = r[0];
        let zeta = 1.0 - 2f64.powf(1.0 - s);
        assert!((r[1] - zeta).abs() < 1e-14, "{r:?}");
        assert!((r[2] - zeta / (s * (s - 1.0))).abs() < 1e-14, "{r:?}");
        assert!(r[3] < 0.0 && r[4] > 0.0 && r[5] < 0.0, "{r:?}");
    }
    assert_eq!(rows[0][0], 1.5);
    assert_eq!(rows[2][0], 10.0);
}

#[test]
fn zeta_json_has_fixed_columns() {
    let f = Files::new();
    let (a, b) = (f.seq("a.json", &["0.5", "0.5"]), f.seq("b.json", &["1.0"]));
    let v = json(&infmaj(&["zeta", s(&a), s(&b), "--samples", "4", "--format", "json"]));
    assert_eq!(v["columns"], serde_json::json!(["s", "zeta", "f", "df", "d2f", "d3f"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn trump_fixture_finds_and_echoes_catalyst() {
    let f = Files::new();
    let x = f.seq("x.json", &["0.4", "0.4", "0.1", "0.1"]);
    let y = f.seq("y.json", &["0.5", "0.25", "0.25"]);
    let o = infmaj(&["trump", s(&x), s(&y), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["catalyst"]["prefix"], serde_json::json!(["0.6", "0.4"]));
    assert_eq!(v["plain"]["verdict"], "fails");

    let c = f.seq("c.json", &["0.6", "0.4"]);
    assert_eq!(code(&infmaj(&["trump", s(&x), s(&y), "--catalyst-file", s(&c)])), 0);
    let unit = f.seq("unit.json", &["1.0"]);
    let with_unit = infmaj(&["trump", s(&x), s(&y), "--catalyst-file", s(&unit)]);
    assert_eq!(code(&with_unit), code(&infmaj(&["check", s(&x), s(&y)])));
    assert_eq!(code(&infmaj(&["trump", s(&x), s(&y), "--budget", "0"])), 2);
}

#[test]
fn trump_search_is_thread_independent() {
    let f = Files::new();
    let x = f.seq("x.json", &["0.4", "0.4", "0.1", "0.1"]);
    let y = f.seq("y.json", &["0.5", "0.25", "0.25"]);
    let one = infmaj(&["trump", s(&x), s(&y), "--format", "json", "--threads", "1", "--max-dim", "3"]);
    let two = infmaj(&["trump", s(&x), s(&y), "--format", "json", "--threads", "2", "--max-dim", "3"]);
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn probe_appends_evidence_lines() {
    let f = Files::new();
    let log = f.0.path().join("evidence.jsonl");
    let x = f.seq("x.json", &["0.4", "0.4", "0.1", "0.1"]);
    let y = f.seq("y.json", &["0.5", "0.25", "0.25"]);
    for _ in 0..2 {
        let o = infmaj(&["probe-conjecture", s(&x), s(&y), "--log", s(&log)]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
    let text = std::fs::read_to_string(&log).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], lines[1]);
    let v: Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(v["catalyst_found"], true);
    assert_eq!(v["product_cm"]["verdict"], "holds");
}

#[test]
fn probe_stops_when_zeta_changes_sign() {
    let f = Files::new();
    let a = f.seq("a.json", &["0.6", "0.1", "0.1", "0.1", "0.1"]);
    let b = f.seq("b.json", &["0.5", "0.5"]);
    let o = infmaj(&["probe-conjecture", s(&a), s(&b), "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["positivity"]["verdict"], "fails");
    assert_eq!(v["candidates_tried"], 0);
}

#[test]
fn selftest_zero_cases_passes() {
    let o = infmaj(&["selftest", "--cases", "0", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["passed"], true);
}

#[test]
fn selftest_is_reproducible() {
    let one = infmaj(&["selftest", "--seed", "7", "--cases", "6", "--format", "json", "--threads", "1"]);
    let two = infmaj(&["selftest", "--seed", "7", "--cases", "6", "--format", "json", "--threads", "3"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, two.stdout);
    let other = infmaj(&["selftest", "--seed", "8", "--cases", "6", "--format", "json"]);
    assert_ne!(json(&one)["case_digest"], json(&other)["case_digest"]);
    assert_eq!(json(&one)["seed"], 7);
}

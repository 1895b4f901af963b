use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

const REFERENCE_TABLE: &str = r#"{"probs": ["3/10", "1/10", "1/10", "1/2"], "j": 5}"#;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Sandbox {
            dir: TempDir::new().unwrap(),
        }
    }

    fn config(&self, name: &str, body: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, body).unwrap();
        path
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_reflectwalk"))
            .args(args)
            .current_dir(self.dir.path())
            .output()
            .unwrap()
    }
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn field<'a>(csv: &'a str, n: &str, column: &str) -> &'a str {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == column).unwrap();
    lines
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|cells| cells[0] == n)
        .map(|cells| cells[col])
        .unwrap()
}

#[test]
fn table_reproduces_the_n200_row() {
    let sb = Sandbox::new();
    sb.config("t.json", REFERENCE_TABLE);
    let out = sb.run(&["table", "--config", "t.json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = stdout(&out);
    assert!(csv.starts_with("n,I,I+II,I+II+III,exact_dp,exact_series,abs_err,err_times_n32\n"));
    assert_eq!(csv.lines().count(), 7);
    assert!(!csv.contains('\r'));
    assert_eq!(field(&csv, "200", "I"), "11.28379");
    assert_eq!(field(&csv, "200", "I+II"), "12.39490");
    assert_eq!(field(&csv, "200", "I+II+III"), "12.79053");
    assert_eq!(field(&csv, "200", "exact_dp"), "12.78946");
    assert_eq!(field(&csv, "200", "exact_series"), "12.78946");
}

#[test]
fn table_single_row() {
    let sb = Sandbox::new();
    sb.config("t.json", r#"{"probs": ["3/10", "1/10", "1/10", "1/2"], "j": 5, "n_values": [10]}"#);
    let csv = stdout(&sb.run(&["table", "--config", "t.json"]));
    assert_eq!(csv.lines().count(), 2);
    assert_eq!(field(&csv, "10", "I+II+III"), "5.40355");
    assert_eq!(field(&csv, "10", "exact_dp"), "5.26359");
}

#[test]
fn table_for_the_pinned_walk() {
    let sb = Sandbox::new();
    sb.config("p.json", r#"{"probs": ["1"], "j": 4}"#);
    let csv = stdout(&sb.run(&["table", "--config", "p.json"]));
    for n in ["10", "20", "50", "100", "200", "400"] {
        assert_eq!(field(&csv, n, "exact_dp"), "4.00000");
        assert_eq!(field(&csv, n, "exact_series"), "4.00000");
        assert_eq!(field(&csv, n, "I+II+III"), "4.00000");
    }
}

#[test]
fn table_leaves_asymptotic_columns_empty_without_a4() {
    // psi = -(1/9)(x - 3)^2
    let sb = Sandbox::new();
    sb.config("d.json", r#"{"probs": ["5/6", "1/9", "1/18"], "j": 1, "n_values": [10, 20]}"#);
    let out = sb.run(&["table", "--config", "d.json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = stdout(&out);
    assert_eq!(field(&csv, "10", "I"), "");
    assert_eq!(field(&csv, "10", "abs_err"), "");
    assert!(!field(&csv, "20", "exact_dp").is_empty());
    let text = stdout(&sb.run(&["spectrum", "--config", "d.json"]));
    assert!(text.contains("A4 violated: min root separation"), "{text}");
    let text = stdout(&sb.run(&["verify", "--config", "d.json", "--paths", "20000", "--seed", "3"]));
    assert!(text.contains("SKIP constants: A4_VIOLATED"), "{text}");
}

#[test]
fn precision_and_json() {
    let sb = Sandbox::new();
    sb.config("t.json", r#"{"probs": ["3/10", "1/10", "1/10", "1/2"], "j": 5, "n_values": [100]}"#);
    let csv = stdout(&sb.run(&["table", "--config", "t.json", "--precision", "2"]));
    assert_eq!(field(&csv, "100", "exact_dp"), "9.65");
    let json: serde_json::Value = serde_json::from_str(&stdout(&sb.run(&["table", "--config", "t.json", "--json"]))).unwrap();
    assert_eq!(json["case"], "GENERIC");
    let exact = json["rows"][0]["exact_dp"].as_f64().unwrap();
    assert!((exact - 9.64614).abs() < 5e-6);
}

#[test]
fn output_flag_writes_a_file() {
    let sb = Sandbox::new();
    sb.config("t.json", REFERENCE_TABLE);
    let out = sb.run(&["moments", "--config", "t.json", "--output", "m.csv"]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let written = fs::read_to_string(sb.dir.path().join("m.csv")).unwrap();
    assert_eq!(written, "k,exact,value\n1,9/5,1.80000\n2,5,5.00000\n3,72/5,14.40000\n");
}

#[test]
fn spectrum_examples() {
    let sb = Sandbox::new();
    sb.config("n1.json", r#"{"probs": ["3/4", "1/4"]}"#);
    let text = stdout(&sb.run(&["spectrum", "--config", "n1.json"]));
    assert!(text.contains("essential spectrum: [-1, 1]"));
    assert!(text.contains("2.00000,0.00000,2.00000,RESONANCE,1.25000,0.00000"));
    assert!(text.contains("1.00000,0.00000,1.00000,EMBEDDED_RESONANCE,1.00000,0.00000"));

    sb.config("p.json", r#"{"probs": ["1"]}"#);
    let text = stdout(&sb.run(&["spectrum", "--config", "p.json"]));
    assert!(text.contains("A4 violated: double root at 1"));
    assert!(text.contains("essential spectrum: [-1, 1]"));

    sb.config("odd.json", r#"{"probs": ["0", "1"]}"#);
    let text = stdout(&sb.run(&["spectrum", "--config", "odd.json"]));
    assert!(text.contains("-1.00000,0.00000,1.00000,EMBEDDED_RESONANCE,-1.00000,0.00000"));
}

#[test]
fn verify_reference_law_passes() {
    let sb = Sandbox::new();
    sb.config("t.json", REFERENCE_TABLE);
    let out = sb.run(&["verify", "--config", "t.json"]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("5 passed, 0 failed, 0 skipped"), "{text}");
}

#[test]
fn verify_pinned_walk_skips() {
    let sb = Sandbox::new();
    sb.config("p.json", r#"{"probs": ["1"], "j": 2}"#);
    let out = sb.run(&["verify", "--config", "p.json"]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("PASS dp_series"));
    assert!(text.contains("SKIP constants: P0_ONE"));
    assert!(text.contains("SKIP decomposition: P0_ONE"));
}

#[test]
fn verify_rejects_a_bad_law() {
    let sb = Sandbox::new();
    sb.config("bad.json", r#"{"probs": ["1/2", "1/3"]}"#);
    let out = sb.run(&["verify", "--config", "bad.json"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("SUM_NOT_ONE"));
}

#[test]
fn config_errors_point_at_the_problem() {
    let sb = Sandbox::new();
    sb.config("c.json", "{\n  \"probs\": [\"1\"],\n  \"n_values\": [10, 5]\n}");
    let out = sb.run(&["table", "--config", "c.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("n_values[1]"), "{}", stderr(&out));

    sb.config("d.json", "{\n  \"probs\": [\"1\"],\n  \"j\": \"x\"\n}");
    let out = sb.run(&["table", "--config", "d.json"]);
    assert!(stderr(&out).contains("d.json:3:"), "{}", stderr(&out));
}

#[test]
fn simulate_requires_paths_and_seed() {
    let sb = Sandbox::new();
    sb.config("t.json", REFERENCE_TABLE);
    let out = sb.run(&["simulate", "--config", "t.json", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("paths"));
    let out = sb.run(&["simulate", "--config", "t.json", "--paths", "10"]);
    assert!(stderr(&out).contains("seed"));
}

#[test]
fn simulate_is_byte_identical_and_consistent() {
    let sb = Sandbox::new();
    sb.config("t.json", r#"{"probs": ["3/10", "1/10", "1/10", "1/2"], "j": 5, "n_values": [100], "seed": 42}"#);
    let args = ["simulate", "--config", "t.json", "--paths", "1000000", "--precision", "full"];
    let a = sb.run(&args);
    let b = sb.run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let csv = stdout(&a);
    let z: f64 = field(&csv, "100", "z_score").parse().unwrap();
    assert!(z.abs() <= 4.0, "{csv}");
}

#[test]
fn simulate_pinned_walk() {
    let sb = Sandbox::new();
    sb.config("p0.json", r#"{"probs": ["1"], "j": 0, "n_values": [50], "seed": 1, "paths": 1000}"#);
    let csv = stdout(&sb.run(&["simulate", "--config", "p0.json"]));
    assert_eq!(field(&csv, "50", "mc_stderr"), "0.00000");
    sb.config("p2.json", r#"{"probs": ["1"], "j": 2, "n_values": [50], "seed": 1, "paths": 100000}"#);
    let csv = stdout(&sb.run(&["simulate", "--config", "p2.json"]));
    let stderr_value: f64 = field(&csv, "50", "mc_stderr").parse().unwrap();
    let z: f64 = field(&csv, "50", "z_score").parse().unwrap();
    assert!(stderr_value > 0.0 && z.abs() <= 4.0, "{csv}");
}

#[test]
fn moments_order_is_capped() {
    let sb = Sandbox::new();
    sb.config("t.json", REFERENCE_TABLE);
    let out = sb.run(&["moments", "--config", "t.json", "--max-order", "17"]);
    assert!(!out.status.success());
    let out = sb.run(&["moments", "--config", "t.json", "--max-order", "16", "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["moments"].as_array().unwrap().len(), 16);
    assert_eq!(json["case"], "GENERIC");
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_complex::Complex64;
use range_enclosure::pseudo::epsilon0;
use range_enclosure::strip::strip_edges_beta;
use range_enclosure::{alpha_hat, beta_hat, ExtReal, OmegaBox, ProblemParams};
use serde_json::Value;
use tempfile::TempDir;

const DOUBLE_POLE: &str = r#"{"c": 4, "d": 4, "alpha": [-32, 4], "beta": [0, 4]}"#;
const HALF_LINE: &str = r#"{"c": 6, "d": 4, "alpha": [1, "inf"], "beta": [0, 11], "resolution": 64}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_range-enclosure"))
}

fn write_config(dir: &TempDir, name: &str, json: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn run(config: &Path, args: &[&str]) -> Output {
    bin().args(args).arg("--config").arg(config).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn as_f64(v: &Value) -> f64 {
    match v {
        Value::Number(n) => n.to_string().parse().unwrap(),
        Value::String(s) if s == "inf" => f64::INFINITY,
        Value::String(s) if s == "-inf" => f64::NEG_INFINITY,
        other => panic!("not a number: {other}"),
    }
}

#[test]
fn bound_reproduces_worked_example() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "w.json", r#"{"c": 1, "d": 1, "alpha": [0, 1], "beta": [0, 1]}"#);
    let v = stdout_json(&run(&cfg, &["bound", "--omega", "0,1"]));
    assert_eq!(as_f64(&v["epsilon0"]), 1.0);
    assert_eq!(as_f64(&v["bound"]), 1.0);
}

#[test]
fn bound_inside_is_infinite() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "w.json", r#"{"c": 1, "d": 1, "alpha": [0, 1], "beta": [0, 1]}"#);
    let v = stdout_json(&run(&cfg, &["bound", "--omega", "0.5,0"]));
    assert_eq!(as_f64(&v["epsilon0"]), 0.0);
    assert_eq!(v["bound"], Value::String("inf".into()));
}

#[test]
fn poles_of_double_pole_configuration() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "dp.json", DOUBLE_POLE);
    let v = stdout_json(&run(&cfg, &["poles"]));
    for key in ["delta_plus", "delta_minus"] {
        assert_eq!(as_f64(&v[key]["re"]), 0.0);
        assert_eq!(as_f64(&v[key]["im"]), -2.0);
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write_config(&dir, "bad.json", r#"{"c": 1, "d": 0, "alpha": [0, 1], "beta": [0, 1]}"#);
    let out = run(&bad, &["poles"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&dir.path().join("missing.json"), &["poles"]);
    assert_eq!(out.status.code(), Some(1));

    let garbled = write_config(&dir, "g.json", r#"{"c": 1, "d": 1, "alpha": [0, "lots"], "beta": [0, 1]}"#);
    assert_eq!(run(&garbled, &["poles"]).status.code(), Some(1));

    let cfg = write_config(&dir, "dp.json", DOUBLE_POLE);
    let out = run(&cfg, &["bound", "--omega", "0,-2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("PoleEvaluation"));

    let out = run(&cfg, &["strip", "--alpha", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("InvalidArgument"));

    assert_eq!(run(&cfg, &["member", "--omega", "1"]).status.code(), Some(1));
    assert_eq!(run(&cfg, &["no-such-command"]).status.code(), Some(1));
}

#[test]
fn member_verdicts() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "dp.json", DOUBLE_POLE);
    let v = stdout_json(&run(&cfg, &["member", "--omega", "0,-1"]));
    assert_eq!(v["inside"], Value::Bool(true));
    assert_eq!(v["witness"]["kind"], Value::String("axis".into()));
    let v = stdout_json(&run(&cfg, &["member", "--omega", "-30,5"]));
    assert_eq!(v["inside"], Value::Bool(false));
}

#[test]
fn axis_serializes_infinite_ends_as_strings() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "a.json", r#"{"c": 1, "d": 3, "alpha": ["-inf", 2], "beta": [0, 2]}"#);
    let v = stdout_json(&run(&cfg, &["axis"]));
    assert_eq!(v["segments"][0][0], Value::String("-inf".into()));
    assert_eq!(v["segments"][0][1], Value::String("inf".into()));
    let cfg = write_config(&dir, "b.json", r#"{"c": 1, "d": 3, "alpha": [-5, "inf"], "beta": [0, 2]}"#);
    let v = stdout_json(&run(&cfg, &["axis", "--epsilon", "0"]));
    let exact = stdout_json(&run(&cfg, &["axis"]));
    assert_eq!(v["segments"], exact["segments"]);
}

#[test]
fn strip_matches_library() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "s.json", r#"{"c": 1, "d": 3, "alpha": [0, 1], "beta": [0, 1]}"#);
    let v = stdout_json(&run(&cfg, &["strip", "--beta", "1"]));
    let rep = strip_edges_beta(1.0, &ProblemParams::new(1.0, 3.0).unwrap()).unwrap();
    assert_eq!(v["exists"], Value::Bool(true));
    assert_eq!(as_f64(&v["s_low"]), rep.s_low);
    assert_eq!(as_f64(&v["s_high"]), rep.s_high);

    let out = run(&cfg, &["strip"]);
    let v = stdout_json(&out);
    assert!(v["edges"]["beta_hi"].is_object() && v["edges"]["alpha_hi"].is_object());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "hl.json", HALF_LINE);
    for args in [&["boundary"][..], &["pseudo", "--epsilon", "0.5"], &["validate"]] {
        let a = run(&cfg, args);
        let b = bin().args(args).arg("--config").arg(&cfg).env("RANGE_ENCLOSURE_THREADS", "1").output().unwrap();
        let c = bin().args(args).arg("--config").arg(&cfg).args(["--threads", "3"]).output().unwrap();
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?}");
    }
}

fn parse_csv_f64(s: &str) -> f64 {
    match s {
        "inf" => f64::INFINITY,
        "-inf" => f64::NEG_INFINITY,
        _ => s.parse().unwrap(),
    }
}

/// Relative distance to the circle `|w + ic/d| = c/d`, where the inverse maps
/// are ill-conditioned.
fn disk_gap(z: Complex64, p: &ProblemParams) -> f64 {
    let r = p.c() / p.d();
    ((z + Complex64::new(0.0, r)).norm() - r).abs() / r
}

#[test]
fn boundary_csv_round_trips() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "dp.json", DOUBLE_POLE);
    let out_path = dir.path().join("b.csv");
    let out = bin().args(["boundary", "--config"]).arg(&cfg).arg("-o").arg(&out_path).output().unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(!text.contains('\r'));
    let p = ProblemParams::new(4.0, 4.0).unwrap();
    let b = OmegaBox::finite(-32.0, 4.0, 0.0, 4.0).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["re", "im", "edge_tag", "branch_tag"]);
    let mut checked = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let z = Complex64::new(parse_csv_f64(&rec[0]), parse_csv_f64(&rec[1]));
        if &rec[3] == "point" || z.re == 0.0 || disk_gap(z, &p) < 1e-4 {
            continue;
        }
        let (value, target) = match &rec[2] {
            "beta_lo" => (beta_hat(z, &p).unwrap(), b.beta().0),
            "beta_hi" => (beta_hat(z, &p).unwrap(), b.beta().1),
            "alpha_lo" => (alpha_hat(z, &p).unwrap(), b.alpha().0),
            "alpha_hi" => (alpha_hat(z, &p).unwrap(), b.alpha().1),
            other => panic!("unknown edge tag {other}"),
        };
        assert!((value - target).abs() <= 1e-6 * (1.0 + target.abs()), "{z} on {}: {value}", &rec[2]);
        assert!(["++", "+-", "-+", "--"].contains(&&rec[3]));
        checked += 1;
    }
    assert!(checked > 500, "{checked}");
}

#[test]
fn pseudo_csv_vertices_are_on_the_level_set() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "hl.json", HALF_LINE);
    let out = run(&cfg, &["pseudo", "--epsilon", "0.5"]);
    assert!(out.status.success());
    let p = ProblemParams::new(6.0, 4.0).unwrap();
    let b =
        OmegaBox::new(ExtReal::Finite(1.0), ExtReal::PosInfinity, ExtReal::Finite(0.0), ExtReal::Finite(11.0)).unwrap();
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    let mut n = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let z = Complex64::new(parse_csv_f64(&rec[1]), parse_csv_f64(&rec[2]));
        let e = epsilon0(z, &b, &p).unwrap().value;
        assert!((e - 0.5).abs() < 1e-6, "{z}: {e}");
        n += 1;
    }
    assert!(n > 100);
}

#[test]
fn validate_passes_on_double_pole_configuration() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "dp.json", DOUBLE_POLE);
    let v = stdout_json(&run(&cfg, &["validate"]));
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["suites"].as_array().unwrap().len(), 5);
}

#[test]
fn figure_is_an_svg_with_curves() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "dp.json", DOUBLE_POLE);
    let svg_path = dir.path().join("f.svg");
    let out = bin()
        .args(["figure", "--epsilon", "0.5", "--config"])
        .arg(&cfg)
        .arg("--output")
        .arg(&svg_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(svg.matches("<polyline").count() > 4);
    assert!(svg.contains("stroke-dasharray"));
}

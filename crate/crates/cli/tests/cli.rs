use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fosterlab"))
        .args(args)
        .current_dir(data_dir())
        .env_remove("FOSTERLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let o = run(&full);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

/// Compares against `tests/golden/<name>.json`, ignoring wall time.
/// `UPDATE_GOLDEN=1` rewrites the file instead.
fn golden(name: &str, args: &[&str]) {
    let mut v = json(args);
    v.as_object_mut().unwrap().remove("wall_time_s");
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    let text = serde_json::to_string_pretty(&v).unwrap() + "\n";
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, text).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(text, want, "{name}");
}

#[test]
fn golden_records() {
    golden("resist_k4_exact", &["resist", "--file", "k4.el", "--i", "0", "--j", "1", "--exact"]);
    golden("sumrule_petersen_r4", &["sumrule", "--file", "petersen.el", "--r", "4", "--exact", "--hitting"]);
    golden("lattice_hexagonal_torus4", &["lattice", "--family", "hexagonal", "--torus", "4"]);
    golden("hittime_edge", &["hittime", "--file", "edge.el", "--i", "0", "--j", "1", "--replications", "1000"]);
}

#[test]
fn lattice_writes_edge_list() {
    let out = std::env::temp_dir().join(format!("fosterlab-ball-{}.el", std::process::id()));
    let o = run(&["lattice", "--family", "square", "--ball", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("n = 25"));
    let g = std::fs::read_to_string(&out).unwrap();
    assert!(g.contains("# vertices: 25"));
    assert_eq!(g.lines().filter(|l| !l.starts_with('#')).count(), 36);
    std::fs::remove_file(out).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["lattice", "--family", "square", "--torus", "2"]).status.code(), Some(2));
    assert_eq!(run(&["lattice", "--family", "square"]).status.code(), Some(2));
    assert_eq!(run(&["lattice", "--family", "cube", "--ball", "2"]).status.code(), Some(2));
    assert_eq!(run(&["resist", "--family", "square", "--pair", "1,0", "--max-iter", "2"]).status.code(), Some(3));
    assert_eq!(run(&["hittime", "--file", "split.el", "--i", "0", "--j", "2"]).status.code(), Some(4));
    assert_eq!(run(&["resist", "--file", "k4.el", "--i", "0", "--j", "9"]).status.code(), Some(4));
    assert_eq!(run(&["resist", "--file", "missing.el", "--i", "0", "--j", "1"]).status.code(), Some(2));
}

#[test]
fn resist_attaches_closed_forms() {
    let v = json(&["resist", "--family", "square", "--pair", "1,0"]);
    assert!((v["results"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-3);
    assert_eq!(v["results"]["closed_form"]["expr"], "1/2");
    assert_eq!(v["provenance"].as_array().unwrap().len(), 1);
    let v = json(&["resist", "--family", "hexagonal", "--pair", "d2"]);
    assert!((v["results"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    let v = json(&["resist", "--family", "hexagonal", "--pair", "d3", "--subdivided"]);
    assert!((v["results"]["value"].as_f64().unwrap() - 11.0 / 6.0).abs() < 1e-3);
    assert_eq!(v["results"]["closed_form"]["expr"], "11/6");
}

#[test]
fn lattice_sum_rules() {
    let v = json(&["sumrule", "--family", "triangular", "--r", "4"]);
    assert_eq!(v["results"]["rhs"], 528.0);
    assert!((v["results"]["lhs"].as_f64().unwrap() - 528.0).abs() < 5.28);
    assert_eq!(v["results"]["passed"], true);
    let v = json(&["sumrule", "--family", "square", "--r", "3", "--nondegenerate"]);
    assert_eq!(v["results"]["rhs"], 26.0);
    let v = json(&["sumrule", "--family", "square", "--r", "2", "--midpoint"]);
    assert_eq!(v["results"]["rhs"], 4.0);
    assert_eq!(run(&["sumrule", "--family", "square", "--r", "3", "--midpoint"]).status.code(), Some(2));
}

#[test]
fn weighted_sumrule_is_exact() {
    let v = json(&["sumrule", "--file", "petersen.el", "--r", "3", "--weighted", "--seed", "5"]);
    assert_eq!(v["results"]["foster"]["residual"]["exact"], "0/1");
    assert_eq!(v["results"]["foster"]["kind"], "exact");
    let v = json(&["sumrule", "--file", "weighted_p3.el", "--r", "3", "--float"]);
    assert!(v["results"]["foster"]["residual"]["value"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn hittime_matches_exact() {
    let v = json(&["hittime", "--file", "triangle.el", "--i", "0", "--j", "1", "--seed", "1"]);
    assert!(v["results"]["z_score"].as_f64().unwrap().abs() <= 3.0);
    let v = json(&["hittime", "--file", "weighted_p3.el", "--i", "0", "--j", "2", "--commute", "--replications", "20000"]);
    assert!(v["results"]["z_score"].as_f64().unwrap().abs() <= 3.0);
}

#[test]
fn csv_projection_keeps_precision() {
    let o = run(&["resist", "--file", "k4.el", "--i", "0", "--j", "2", "--csv"]);
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("value,")).unwrap();
    let value: f64 = line["value,".len()..].parse().unwrap();
    let v = json(&["resist", "--file", "k4.el", "--i", "0", "--j", "2"]);
    assert_eq!(value.to_bits(), v["results"]["value"].as_f64().unwrap().to_bits());
}

#[test]
fn thread_count_does_not_change_results() {
    let args = ["hittime", "--file", "triangle.el", "--i", "0", "--j", "2", "--replications", "5000", "--json"];
    let one = Command::new(env!("CARGO_BIN_EXE_fosterlab"))
        .args(args)
        .current_dir(data_dir())
        .env("FOSTERLAB_THREADS", "1")
        .output()
        .unwrap();
    let many = run(&args);
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_str(&stdout(o)).unwrap();
        v["results"].take()
    };
    assert_eq!(strip(&one), strip(&many));
}

#[test]
fn quick_demo_passes() {
    let o = run(&["demo", "--quick"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(!text.contains("FAIL"));
    let v = json(&["demo", "--quick", "--r-max", "2", "--replications", "5000"]);
    assert_eq!(v["schema"], "fosterlab/1");
    assert_eq!(v["results"]["failed"], 0);
    assert!(v["provenance"].as_array().unwrap().len() >= 10);
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn warpcone(config: &Path, out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_warpcone"))
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_ok(config: &Path, out: &Path, args: &[&str]) {
    let o = warpcone(config, out, args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

fn result(path: &Path) -> Value {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v["result"].clone()
}

#[test]
fn stablenorm_of_conjugate() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&configs().join("stablenorm.toml"), dir.path(), &["--deterministic", "stablenorm"]);
    let r = result(&dir.path().join("stablenorm.json"));
    let aba = r["words"].as_array().unwrap().iter().find(|w| w["word"] == "abA").unwrap();
    assert_eq!(aba["stable_norm"], 1);
    assert_eq!(aba["cyclic_core"], "b");
    assert_eq!(aba["conjugator"], "a");
}

#[test]
fn coarse_path_reports_jumps() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&configs().join("coarse_circle.toml"), dir.path(), &["--deterministic", "coarse"]);
    let r = result(&dir.path().join("coarse.json"));
    assert_eq!(r["paths"][0]["q"], "aa");
    assert!(r["loops"].as_array().unwrap().iter().all(|l| l["recovered"] == true));
}

#[test]
fn trivial_circle_profile_is_cycle_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&configs().join("profile_trivial_circle.toml"), dir.path(), &["--deterministic", "profile"]);
    let csv = std::fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# tool=warpcone"));
    assert!(lines.next().unwrap().starts_with("level,epsilon,vertices"));
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let n: f64 = cols[2].parse().unwrap();
        let lambda: f64 = cols[6].parse().unwrap();
        assert!((lambda - (1.0 - (2.0 * std::f64::consts::PI / n).cos())).abs() < 1e-9, "{line}");
    }
}

#[test]
fn reruns_are_byte_identical_and_hashed() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join("warped_circle.toml");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_ok(&config, &a, &["--deterministic", "--threads", "1", "warped"]);
    run_ok(&config, &b, &["--deterministic", "--threads", "4", "warped"]);
    let hash = hex::encode(Sha256::digest(std::fs::read(&config).unwrap()));
    for name in ["warped.json", "warped_graph.json"] {
        let (x, y) = (std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap());
        assert_eq!(x, y, "{name}");
        let v: Value = serde_json::from_slice(&x).unwrap();
        assert_eq!(v["meta"]["config_hash"], hash.as_str());
        assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
        assert!(v["meta"].get("generated_at").is_none());
    }
    let r = result(&a.join("warped.json"));
    for p in r["pairs"].as_array().unwrap() {
        assert!(p["apx"].as_f64().unwrap() >= p["exact"].as_f64().unwrap() - 1e-9);
    }
}

#[test]
fn timestamps_without_deterministic_flag() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&configs().join("stablenorm.toml"), dir.path(), &["stablenorm"]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("stablenorm.json")).unwrap()).unwrap();
    assert!(v["meta"]["generated_at"].is_u64());
}

#[test]
fn export_graph_to_dot_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&configs().join("warped_circle.toml"), &dir.path().join("out/warped_circle"), &["--deterministic", "warped"]);
    let cfg_dir = dir.path().join("configs");
    std::fs::create_dir(&cfg_dir).unwrap();
    let text = std::fs::read_to_string(configs().join("export_graph.toml")).unwrap();
    std::fs::write(cfg_dir.join("dot.toml"), &text).unwrap();
    std::fs::write(cfg_dir.join("csv.toml"), text.replace("\"dot\"", "\"csv\"")).unwrap();
    run_ok(&cfg_dir.join("dot.toml"), &dir.path().join("dot"), &["--deterministic", "export"]);
    run_ok(&cfg_dir.join("csv.toml"), &dir.path().join("csv"), &["--deterministic", "export"]);
    let dot = std::fs::read_to_string(dir.path().join("dot/export.dot")).unwrap();
    assert!(dot.starts_with("// tool=warpcone"));
    assert!(dot.contains("graph"));
    let csv = std::fs::read_to_string(dir.path().join("csv/export.csv")).unwrap();
    // 200 spatial cycle edges, then one orbital edge per vertex for each of a, A
    assert_eq!(csv.lines().count(), 2 + 600);
}

#[test]
fn errors_are_json_records_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[levels]\nvalues = [2.0, 1.0]\n").unwrap();
    let o = warpcone(&bad, dir.path(), &["profile"]);
    assert!(!o.status.success());
    let rec: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(rec["code"], "config");
    assert!(rec["message"].as_str().unwrap().contains("ascending"));

    std::fs::write(&bad, "[levels]\nvalue = [1.0]\n").unwrap();
    let rec: Value = serde_json::from_slice(&warpcone(&bad, dir.path(), &["profile"]).stderr).unwrap();
    assert_eq!(rec["code"], "config");

    let toral = dir.path().join("toral.toml");
    std::fs::write(
        &toral,
        "[action]\nkind = \"toral_automorphism\"\nmatrices = [[[2, 1], [1, 1]]]\n[scale]\nt = 4.0\nr = 1.0\n",
    )
    .unwrap();
    let o = warpcone(&toral, dir.path(), &["coarse"]);
    assert!(!o.status.success());
    let rec: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_ne!(rec["code"], "config");
}

#[test]
fn check_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&configs().join("check.toml"), dir.path(), &["--deterministic", "check"]);
    assert_eq!(result(&dir.path().join("check.json"))["passed"], true);
}

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wreathdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wreathdim"))
        .args(args)
        .env_remove("WREATHDIM_CACHE")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("config.toml");
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

const FREE: &str = r#"
[groups.f2]
kind = "free"
rank = 2

[growth]
targets = ["f2"]
radii = [1, 2, 3, 4, 5]
"#;

#[test]
fn verify_default_suite_passes() {
    let out = wreathdim(&["verify"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["toolkit_version"], env!("CARGO_PKG_VERSION"));
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r["passed"] == true));
    assert!(!report["spec_hashes"].as_array().unwrap().is_empty());
}

#[test]
fn free_growth_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), FREE);
    let out = wreathdim(&["growth", "--config", &cfg, "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# wreathdim "));
    assert_eq!(lines.next().unwrap(), "target,spec_hash,r,gamma");
    let gamma: Vec<&str> = lines.map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(gamma, ["1", "5", "17", "53", "161"]);
}

#[test]
fn malformed_config_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[groups.z]\nkind = \"integers\"\nrnak = 2\n");
    let out = wreathdim(&["growth", "--config", &cfg]);
    assert!(!out.status.success());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "config");
    assert_eq!(err["error"]["key"], "groups.z.rnak");

    let cfg = write_config(dir.path(), "[run]\nworkers = \"many\"\n");
    let out = wreathdim(&["growth", "--config", &cfg]);
    assert!(!out.status.success());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["key"], "run.workers");
}

#[test]
fn budget_exhaustion_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), FREE);
    let out = wreathdim(&["growth", "--config", &cfg, "--budget", "20"]);
    assert!(!out.status.success());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "budget");
}

#[test]
fn unknown_check_is_rejected() {
    let out = wreathdim(&["verify", "--check", "no-such-check"]);
    assert!(!out.status.success());
    let out = wreathdim(&[
        "verify",
        "--check",
        "linear-growth",
        "--check",
        "lattice-covering",
    ]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_do_not_depend_on_workers_or_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    for cmd in ["growth", "components", "cube"] {
        let one = wreathdim(&[cmd, "--workers", "1"]);
        let four = wreathdim(&[cmd, "--workers", "4", "--cache-dir", cache]);
        let again = wreathdim(&[cmd, "--workers", "2", "--cache-dir", cache]);
        assert!(one.status.success());
        assert_eq!(one.stdout, four.stdout, "{cmd}");
        assert_eq!(one.stdout, again.stdout, "{cmd}");
    }
    assert!(Path::new(cache).join("manifest.json").exists());
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lattice.json");
    let out = wreathdim(&["lattice", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(report["rows"][0]["covers"], 19683);
    assert_eq!(report["rows"][0]["counterexamples"], 0);
}

#[test]
fn every_subcommand_runs_on_the_example() {
    for cmd in [
        "growth",
        "length",
        "components",
        "control",
        "cube",
        "lattice",
    ] {
        let out = wreathdim(&[cmd]);
        assert!(
            out.status.success(),
            "{cmd}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["command"], cmd);
        assert_eq!(report["passed"], true);
    }
}

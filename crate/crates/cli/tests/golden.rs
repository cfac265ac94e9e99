use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn scenarios() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(root().join("scenarios"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    files
}

fn golden_for(scenario: &Path) -> PathBuf {
    let stem = scenario.file_stem().unwrap().to_str().unwrap();
    root().join("tests/golden").join(format!("{stem}.txt"))
}

#[test]
fn every_scenario_has_a_golden_report() {
    let files = scenarios();
    assert!(files.len() >= 11);
    for f in files {
        assert!(golden_for(&f).exists(), "no golden for {}", f.display());
    }
}

#[test]
fn binary_reproduces_goldens() {
    for f in scenarios() {
        let out = Command::new(env!("CARGO_BIN_EXE_isoflow")).arg("run").arg(&f).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}: {}", f.display(), String::from_utf8_lossy(&out.stderr));
        let expected = fs::read(golden_for(&f)).unwrap();
        assert!(out.stdout == expected, "{} differs from its golden report", f.display());
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let f = root().join("scenarios/bcl.toml");
    let target = dir.path().join("bcl.txt");
    let status = Command::new(env!("CARGO_BIN_EXE_isoflow"))
        .args(["run", f.to_str().unwrap(), "--out", target.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(fs::read(target).unwrap(), fs::read(golden_for(&f)).unwrap());
}

#[test]
fn seed_variable_changes_nothing() {
    let f = root().join("scenarios/simultaneous.toml");
    let out = Command::new(env!("CARGO_BIN_EXE_isoflow"))
        .env("ISOFLOW_SEED", "12345")
        .arg("run")
        .arg(&f)
        .output()
        .unwrap();
    assert_eq!(out.stdout, fs::read(golden_for(&f)).unwrap());
}

#[test]
fn list_is_stable_and_names_every_construction() {
    let run = || Command::new(env!("CARGO_BIN_EXE_isoflow")).arg("list").output().unwrap();
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    for name in [
        "halfline_shift",
        "bishift",
        "modified_bishift",
        "four_block_dc",
        "four_block_ddc",
        "commutant_e",
        "commutant_mz",
        "bcl",
        "dual_example",
        "double_dual",
        "simultaneous",
    ] {
        assert!(text.lines().any(|l| l == name), "{name} missing from list");
    }
    assert_eq!(text.matches("  anchor: ").count(), 11);
}

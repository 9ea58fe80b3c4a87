use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: [&str; 6] = [
    "--max-prog-len",
    "12",
    "--steps",
    "256",
    "--cond-universe",
    "2",
];

fn algostat(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algostat"))
        .env_remove("ALGOSTAT_CACHE_DIR")
        .args(SMALL)
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn omega_prints_counts_and_writes_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let o = algostat(dir.path(), &["omega", "--m", "6"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    for m in 0..=6 {
        assert!(text.contains(&format!("Omega_{m}=")));
    }
    let csv = fs::read_to_string(dir.path().join("ledger-m6.csv")).unwrap();
    assert!(csv.starts_with("m,omega\n"));
    let manifest = fs::read_to_string(dir.path().join("manifest-omega.txt")).unwrap();
    assert!(manifest.contains("L=12") && manifest.contains("ledger-m6.csv"));
}

#[test]
fn profile_plot_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = algostat(d.path(), &["profile", "--x", "0110", "--plot"]);
        assert_eq!(o.status.code(), Some(0));
    }
    for name in ["profile-0110.csv", "profile-0110.svg"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs between identical runs");
    }
    let svg = fs::read_to_string(a.path().join("profile-0110.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("log-cardinality"));
}

#[test]
fn plot_overlays_csvs_with_labels() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(
        algostat(d.path(), &["profile", "--x", "01"]).status.code(),
        Some(0)
    );
    let o = algostat(
        d.path(),
        &["restricted-profile", "--x", "01", "--family", "cylinders"],
    );
    assert_eq!(o.status.code(), Some(0));
    let p = d.path().join("profile-01.csv");
    let r = d.path().join("restricted-profile-01.csv");
    let o = algostat(
        d.path(),
        &[
            "plot",
            "--csv",
            p.to_str().unwrap(),
            "--csv",
            r.to_str().unwrap(),
            "--label",
            "full",
            "--label",
            "cylinders",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(d.path().join("plot.svg")).unwrap();
    assert!(svg.contains(">full<") && svg.contains(">cylinders<"));
}

#[test]
fn user_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(
        algostat(d.path(), &["profile", "--x", "012"]).status.code(),
        Some(2)
    );
    assert_eq!(
        algostat(d.path(), &["no-such-command"]).status.code(),
        Some(2)
    );
    assert_eq!(
        algostat(d.path(), &["profile", "--x", "01", "--m-max", "40"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        algostat(d.path(), &["verify", "--suite", "bogus", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    // The Theorem-3 cylinder needs 13 bits, more than L = 12.
    let o = algostat(
        d.path(),
        &[
            "theorem3",
            "--k",
            "2",
            "--delta",
            "3",
            "--mss-epsilon",
            "5",
            "--d",
            "1",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("theorem3_string"));
}

#[test]
fn mismatched_cache_is_refused() {
    let d = tempfile::tempdir().unwrap();
    let cache = d.path().join("t.cache");
    let c = cache.to_str().unwrap();
    assert_eq!(
        algostat(d.path(), &["--cache", c, "build-cache"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        algostat(d.path(), &["--cache", c, "complexity", "--x", "01"])
            .status
            .code(),
        Some(0)
    );
    let o = Command::new(env!("CARGO_BIN_EXE_algostat"))
        .args([
            "--max-prog-len",
            "11",
            "--steps",
            "256",
            "--cond-universe",
            "2",
            "--cache",
            c,
        ])
        .args(["complexity", "--x", "01"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cache"));
}

#[test]
fn cache_dir_from_environment() {
    let d = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_algostat"))
        .env("ALGOSTAT_CACHE_DIR", d.path())
        .args(SMALL)
        .arg("--out")
        .arg(d.path())
        .args(["complexity", "--x", "0"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(d.path().join("rb8-v1-L12-T256-N2.cache").exists());
}

#[test]
fn verify_needs_matching_calibration() {
    let d = tempfile::tempdir().unwrap();
    // Built-in constants belong to the default configuration.
    assert_eq!(
        algostat(d.path(), &["verify", "--suite", "ct", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    let cal = d.path().join("small.cal");
    let o = algostat(d.path(), &["calibrate", "--write", cal.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = fs::read_to_string(&cal).unwrap();
    assert!(text.contains("L=12") && text.contains("t3_delta=na"));
    let o = algostat(
        d.path(),
        &[
            "verify",
            "--suite",
            "all",
            "--n",
            "3",
            "--calibration",
            cal.to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("theorem1: PASS"));
}

#[test]
fn ct_total_is_at_least_plain() {
    let d = tempfile::tempdir().unwrap();
    let plain = stdout(&algostat(d.path(), &["ct", "--x", "01", "--y", "10"]));
    let total = stdout(&algostat(
        d.path(),
        &["ct", "--x", "01", "--y", "10", "--total"],
    ));
    let parse = |s: &str| s.trim().parse::<u32>().unwrap_or(u32::MAX);
    assert!(parse(&plain) <= parse(&total));
}

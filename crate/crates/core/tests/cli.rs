use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn incvor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_incvor")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn empty_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "empty.txt", "# no points\n\n");
    assert_eq!(code(&incvor(&["run", "--input", &p])), 2);
}

#[test]
fn malformed_line_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.txt", "1 2\n3 four\n");
    let o = incvor(&["run", "--input", &p]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn out_of_bounds_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "far.txt", "0 0\n200 0\n");
    assert_eq!(code(&incvor(&["run", "--input", &p, "--coord-bound", "100"])), 2);
}

#[test]
fn duplicate_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "dup.txt", "0 0\n7 3\n0 0\n");
    let o = incvor(&["run", "--input", &p]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("insertion 3"));
}

#[test]
fn cocyclic_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "cocyclic.txt", "0 0\n4 0\n0 4\n4 4\n");
    assert_eq!(code(&incvor(&["run", "--input", &p])), 3);
}

#[test]
fn verified_run_succeeds() {
    let o = incvor(&["run", "--gen", "uniform-disc:512:5", "--check-oracle", "--check-invariants"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("inserted 512 sites: 1025 vertices, 1536 edges"));
}

#[test]
fn export_round_trip_passes_selftest() {
    let dir = tempfile::tempdir().unwrap();
    for extra in [&[][..], &["--include-sentinels"][..]] {
        let out = dir.path().join("d.txt");
        let out = out.to_str().unwrap();
        let mut args = vec!["export", "--gen", "clustered:300:2", "--output", out];
        args.extend_from_slice(extra);
        assert_eq!(code(&incvor(&args)), 0);
        let o = incvor(&["selftest", "--input", out]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn tampered_export_fails_selftest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.txt");
    let out = out.to_str().unwrap();
    assert_eq!(code(&incvor(&["export", "--gen", "uniform-square:50:1", "--output", out])), 0);
    let text = fs::read_to_string(out).unwrap();
    let line = text.lines().find(|l| l.starts_with("vertex ")).unwrap().to_string();
    fs::write(out, text.replacen(&line, "", 1)).unwrap();
    assert_ne!(code(&incvor(&["selftest", "--input", out])), 0);
}

#[test]
fn svg_export_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.svg");
    let o = incvor(&["run", "--gen", "uniform-disc:40:1", "--export", out.to_str().unwrap(), "--format", "svg"]);
    assert_eq!(code(&o), 0);
    assert!(fs::read_to_string(&out).unwrap().starts_with("<svg"));
}

#[test]
fn unwritable_output_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("stats.csv");
    let o = incvor(&["run", "--gen", "uniform-disc:20:1", "--stats", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 5);
}

#[test]
fn stats_are_deterministic_apart_from_time() {
    let dir = tempfile::tempdir().unwrap();
    let mut tables = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let p = dir.path().join(name);
        assert_eq!(code(&incvor(&["run", "--gen", "clustered:400:3", "--stats", p.to_str().unwrap()])), 0);
        let text = fs::read_to_string(&p).unwrap();
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().next().unwrap(), "n,links,cuts,cells_changed,dcr_rebuilds,time_ns");
        assert_eq!(text.lines().count(), 401);
        let rows: Vec<String> = text.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect();
        tables.push(rows);
    }
    assert_eq!(tables[0], tables[1]);
}

#[test]
fn bench_reports_every_rung() {
    let o = incvor(&["bench", "--ladder", "100,200"]);
    assert_eq!(code(&o), 0);
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert!(rows[1]["time_ratio"].is_number());
}

#[test]
fn builtin_selftest_passes() {
    assert_eq!(code(&incvor(&["selftest", "--count", "60"])), 0);
}

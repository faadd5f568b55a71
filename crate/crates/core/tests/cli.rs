use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edslab")).args(args).env("RUST_LOG", "warn").output().unwrap()
}

fn run_config(command: &str, config: &Path, extra: &[&str]) -> Output {
    let mut args = vec![command, "--config", config.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn note<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    let prefix = format!("# {key}: ");
    text.lines().find_map(|l| l.strip_prefix(prefix.as_str()))
}

#[test]
fn count_points_reports_nine() {
    let out = run_config("count-points", &configs().join("count_points.ini"), &[]);
    assert_eq!(out.status.code(), Some(0));
    let rows = data_rows(&stdout(&out));
    assert_eq!(rows[0], ["5", "1", "1", "9", "-3"]);
}

#[test]
fn gm_gcd_nontrivial_only_at_multiples_of_six() {
    let out = run_config("gm-gcd", &configs().join("gm.ini"), &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let nontrivial: Vec<String> =
        data_rows(&text).into_iter().take(12).filter(|r| r[1] != "0").map(|r| r[0].clone()).collect();
    assert_eq!(nontrivial, ["6", "12"]);
}

#[test]
fn twist_has_constant_j() {
    let out = run_config("curve-info", &configs().join("q_twist.ini"), &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().any(|l| l == "constant_j,true"));
}

#[test]
fn runs_are_deterministic() {
    let cfg = configs().join("dependent_pair.ini");
    let a = run_config("gcd-table", &cfg, &["--n-max", "5"]);
    let b = run_config("gcd-table", &cfg, &["--n-max", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn jsonl_lines_parse() {
    let out = run_config("eds-seq", &configs().join("q_curve.ini"), &["--format", "jsonl", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["type"], "header");
    let rows: Vec<_> = lines.iter().filter(|v| v["type"] == "row").collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1]["d"], "2");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("seq.csv");
    let out = run_config("eds-seq", &configs().join("q_curve.ini"), &["--out", dest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(fs::read_to_string(dest).unwrap().contains("n,size,size_over_n2,d,a"));
}

#[test]
fn config_typo_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ini");
    fs::write(&path, "[field]\ndescriptor = Q\n\n[curve]\na = 1\nbb = 1\n").unwrap();
    let out = run_config("curve-info", &path, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bb"));
}

#[test]
fn unknown_command_exits_one() {
    let out = run(&["no-such-command", "--config", "x.ini"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn rows_digest_expectation() {
    let src = configs().join("q_curve.ini");
    let first = run_config("eds-seq", &src, &[]);
    let digest = note(&stdout(&first), "rows_digest").unwrap().to_string();
    let base = fs::read_to_string(&src).unwrap();
    let dir = tempfile::tempdir().unwrap();

    let good = dir.path().join("good.ini");
    fs::write(&good, format!("{base}\n[expect]\nrows_digest = {digest}\n")).unwrap();
    let out = run_config("eds-seq", &good, &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("# assert rows_digest: pass"));

    let doctored = dir.path().join("doctored.ini");
    let wrong: String = digest.chars().rev().collect();
    fs::write(&doctored, format!("{base}\n[expect]\nrows_digest = {wrong}\n")).unwrap();
    let out = run_config("eds-seq", &doctored, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("# assert rows_digest: fail"));
}

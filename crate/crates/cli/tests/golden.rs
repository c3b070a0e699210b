//! Golden-file tests for every subcommand. Commands run from `tests/data` so
//! the echoed config holds relative paths. `RELEQ_BLESS=1` rewrites goldens.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn releq(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_releq"));
    cmd.args(args).current_dir(manifest().join("tests/data")).env_remove("RELEQ_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn releq")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn check_golden(name: &str, args: &[&str], expect_code: i32) -> String {
    let out = releq(args, &[]);
    assert_eq!(out.status.code(), Some(expect_code), "{name}: stderr {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let path = manifest().join("tests/golden").join(format!("{name}.txt"));
    if std::env::var_os("RELEQ_BLESS").is_some() {
        fs::write(&path, &text).unwrap();
    } else {
        let want = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
        assert_eq!(text, want, "{name} differs from {}", path.display());
    }
    text
}

/// CSV body of a stdout payload, without the `#` lines.
fn csv_body(text: &str) -> Vec<Vec<String>> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

fn value_line(text: &str, name: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(name)).unwrap_or_else(|| panic!("no {name} line"));
    line.split('=').nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn entropy() {
    let text = check_golden("entropy_bell", &["entropy", "--state", "bell.json"], 0);
    assert!(text.contains("I(A:B) = 2.0000 bits"));
    let nats = check_golden("entropy_werner_nats", &["entropy", "--state", "werner.json", "--units", "nats"], 0);
    assert!((value_line(&nats, "S(A)") - 2f64.ln()).abs() < 1e-4);
}

#[test]
fn holevo() {
    let text = check_golden("holevo", &["holevo", "--ensemble", "ensemble.json", "--povm", "povm.json"], 0);
    assert!(value_line(&text, "accessible") <= value_line(&text, "chi"));
}

#[test]
fn ree() {
    let text = check_golden("ree_werner", &["ree", "--state", "werner.json", "--restarts", "2"], 0);
    let body: String = text.lines().filter(|l| !l.starts_with('#')).collect();
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    let f: f64 = 0.85;
    let closed_form = 1.0 + f * f.log2() + (1.0 - f) * (1.0 - f).log2();
    assert!((v["value"].as_f64().unwrap() - closed_form).abs() < 1e-6);
}

#[test]
fn ree_dumps_closest_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("closest.json");
    let out = releq(&["ree", "--state", "werner.json", "--restarts", "1", "--closest", path.to_str().unwrap()], &[]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["dims"], serde_json::json!([2, 2]));
}

#[test]
fn channel() {
    check_golden("channel_apply", &["channel", "apply", "--channel", "damping.json", "--state", "plus.json"], 0);
    check_golden("channel_dilate", &["channel", "dilate", "--channel", "damping.json"], 0);
    let text = check_golden("channel_ppt", &["channel", "ppt", "--channel", "damping.json"], 0);
    assert!(text.contains("\"entangled\""));
}

#[test]
fn ppt() {
    let text = check_golden("ppt_werner", &["ppt", "--state", "werner.json"], 0);
    assert!(text.contains("\"is_ppt\": false"));
}

#[test]
fn sanov_and_types() {
    let types = check_golden("types", &["types", "--q", "fair.json", "--p", "third.json", "--n-max", "12"], 0);
    for row in csv_body(&types) {
        let [_, exact, lower, upper] = [0, 1, 2, 3].map(|i| row[i].parse::<f64>().unwrap());
        assert!(lower <= exact && exact <= upper);
    }
    check_golden("sanov", &["sanov", "--q", "fair.json", "--candidates", "candidates.json", "--n-max", "12"], 0);
}

#[test]
fn compress() {
    let text = check_golden("compress", &["compress", "--n", "3", "--trials", "200", "--seed", "3"], 0);
    assert!(text.contains("\"typical_dim\": 4"));
}

#[test]
fn teleport_demo() {
    let text = check_golden("teleport_demo", &["teleport-demo", "--trials", "8", "--seed", "11"], 0);
    for row in csv_body(&text) {
        assert!(row[3].parse::<f64>().unwrap() >= 1.0 - 1e-12);
    }
}

#[test]
fn dense_coding_curve() {
    let text = check_golden("dense_coding_curve", &["dense-coding-curve", "--points", "3"], 0);
    let c: Vec<f64> = csv_body(&text).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(c, vec![1.0, 2.0, 1.0]);
}

#[test]
fn landauer() {
    let text = check_golden("landauer", &["landauer", "--state", "biased.json"], 0);
    assert!((value_line(&text, "erasure cost") - 1.0).abs() < 1e-4);
}

#[test]
fn bosonic() {
    check_golden("bosonic", &["bosonic", "--power", "1e-15", "--temperature", "300"], 0);
}

#[test]
fn bekenstein() {
    let text = check_golden("bekenstein", &["bekenstein"], 0);
    assert!((value_line(&text, "bound") - 6.86).abs() < 0.01);
}

#[test]
fn deutsch() {
    let text = check_golden("deutsch_01", &["deutsch", "--f", "01"], 0);
    assert!(text.contains("\"verdict\": \"varying\""));
    let text = check_golden("deutsch_11", &["deutsch", "--f", "11"], 0);
    assert!(text.contains("\"verdict\": \"constant\""));
}

#[test]
fn grover_mi() {
    let text = check_golden("grover_mi", &["grover-mi", "--qubits", "4", "--p", "1.0", "--kmax", "12"], 0);
    let k: Vec<usize> = csv_body(&text).iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(k, (0..=12).collect::<Vec<_>>());
}

#[test]
fn bitwise_trace() {
    let text = check_golden("bitwise_trace", &["bitwise-trace", "--qubits", "3"], 0);
    assert_eq!(csv_body(&text).last().unwrap()[1], "3.000000000");
}

#[test]
fn selftest() {
    let text = check_golden("selftest_qstate", &["selftest", "--filter", "qstate/"], 0);
    assert!(text.contains("0 failed"));
}

#[test]
fn selftest_exit_status_reports_failures() {
    let out = releq(&["selftest", "--filter", "compression_ladder"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL  protocols/compression_ladder"));
}

#[test]
fn validation_errors_exit_2_with_one_line() {
    for args in [
        &["entropy", "--state", "bell.json", "--bogus"][..],
        &["entropy", "--state", "missing.json"],
        &["grover-mi", "--qubits", "9"],
        &["dense-coding-curve", "--points", "1"],
        &["deutsch", "--f", "012"],
        &["selftest", "--filter", "no-such-check"],
    ] {
        let out = releq(args, &[]);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(out.stdout.is_empty());
    }
    let out = releq(&["teleport-demo"], &[("RELEQ_SEED", "x")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn env_seed_overrides_flag() {
    let a = releq(&["teleport-demo", "--trials", "5", "--seed", "1"], &[("RELEQ_SEED", "42")]);
    let b = releq(&["teleport-demo", "--trials", "5", "--seed", "42"], &[]);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("\"seed\":42"));
}

#[test]
fn out_files_are_deterministic_and_keep_stdout_to_comments() {
    let dir = tempfile::tempdir().unwrap();
    let run = |p: &Path| {
        let out = releq(&["teleport-demo", "--trials", "6", "--seed", "5", "--out", p.to_str().unwrap()], &[]);
        assert!(out.status.success());
        assert!(stdout(&out).lines().all(|l| l.starts_with('#')));
        fs::read(p).unwrap()
    };
    let (a, b) = (run(&dir.path().join("a.csv")), run(&dir.path().join("b.csv")));
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().starts_with("trial,outcome,probability,fidelity\n"));

    let q = dir.path().join("q.csv");
    assert!(releq(&["bekenstein", "--out", q.to_str().unwrap()], &[]).status.success());
    let csv = fs::read_to_string(&q).unwrap();
    assert!(csv.starts_with("quantity,value,units\nbound,6.85"));
}

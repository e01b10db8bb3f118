use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

const EXCEPTIONAL_P3: &str = include_str!("../../core/tests/fixtures/exceptional_p3.txt");

fn run(bin: &str, args: &[&str]) -> Output {
    Command::new(bin).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const SRING: &str = env!("CARGO_BIN_EXE_sring");
const CI: &str = env!("CARGO_BIN_EXE_ci");
const CATALOG: &str = env!("CARGO_BIN_EXE_catalog");
const VERIFY: &str = env!("CARGO_BIN_EXE_verify");

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.txt", EXCEPTIONAL_P3);
    let out = run(SRING, &["verify", &good]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("valid: true"));

    let bad = write(&dir, "bad.txt", "p=3 n=1\n0 1 2\n");
    let out = run(SRING, &["verify", &bad]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("valid: false"));
    assert!(stdout(&out).contains("violation:"));

    let discrete = write(&dir, "discrete.txt", "p=3 n=1\n0\n1\n2\n");
    assert_eq!(code(&run(SRING, &["verify", &discrete])), 0);
    let nonsym = write(&dir, "nonsym.txt", "p=5 n=1\n0\n1 2\n3 4\n");
    assert_eq!(code(&run(SRING, &["verify", &nonsym])), 1);

    let garbage = write(&dir, "garbage.txt", "p=3 n=1\n0\nx y\n");
    assert_eq!(code(&run(SRING, &["verify", &garbage])), 2);
    let missing = dir.path().join("missing.txt");
    assert_eq!(code(&run(SRING, &["verify", missing.to_str().unwrap()])), 2);
}

#[test]
fn verify_json() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.txt", EXCEPTIONAL_P3);
    let out = run(SRING, &["verify", &good, "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["classes"], 11);
    assert_eq!(v[0]["valid"], true);
}

#[test]
fn gen_and_from_matrices() {
    let out = run(SRING, &["gen", "--p", "3", "--n", "2", "--set", "1,3;4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "p=3 n=2\n0\n1 3\n2 6\n4\n5 7\n8\n");

    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.txt", "# shear\n1 1 0\n0 1 0\n0 0 1\n");
    let out = run(SRING, &["from-matrices", "--p", "3", "--n", "3", &m]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("p=3 n=3\n0\n1 4 7\n2 5 8\n"));
    assert_eq!(text.lines().count(), 1 + 9 + 6);

    let out = run(SRING, &["gen", "--p", "4", "--n", "2", "--set", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn aut_of_exceptional() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "e.txt", EXCEPTIONAL_P3);
    let group = dir.path().join("g.txt");
    let out = run(SRING, &["aut", &file, "--out", group.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("order: 81"));
    assert!(text.contains("schurian: true"));
    let saved = fs::read_to_string(&group).unwrap();
    assert!(saved.starts_with("deg=27\n"));
}

#[test]
fn decompose_and_quotient() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "e.txt", EXCEPTIONAL_P3);
    let out = run(SRING, &["decompose", &file]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("decomposable: false"));

    let wreath = run(SRING, &["gen", "--p", "3", "--n", "2", "--set", "1,2;3,4,5,6,7,8"]);
    let w = write(&dir, "w.txt", &stdout(&wreath));
    let out = run(SRING, &["decompose", &w, "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["decomposable"], true);

    let out = run(SRING, &["quotient", &file, "--by", "9"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("p=3 n=2\n0\n"));
    let q = write(&dir, "q.txt", &text);
    assert_eq!(code(&run(SRING, &["verify", &q])), 0);

    let out = run(SRING, &["quotient", &file, "--by", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn ci_commands() {
    let out = run(CI, &["subset", "--p", "3", "--n", "2", "--set", "1,2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("ci: true"));

    let dir = TempDir::new().unwrap();
    let file = write(&dir, "e.txt", EXCEPTIONAL_P3);
    let out = run(CI, &["--json", "sring", &file]);
    assert!(matches!(code(&out), 0 | 1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["ci"], code(&out) == 0);
}

#[test]
fn catalog_commands() {
    let out = run(CATALOG, &["exceptional", "--p", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), EXCEPTIONAL_P3);

    assert_eq!(code(&run(CATALOG, &["exceptional", "--p", "4"])), 2);

    let out = run(CATALOG, &["table1", "--p", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("classes: 6"));
    assert!(text.contains("matches_table: true"));

    let out = run(CATALOG, &["table1", "--p", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["classes"], 6);
    assert_eq!(v.as_array().unwrap().len(), 7);

    let out = run(CATALOG, &["ll2", "--p", "3", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["matrices"].as_array().unwrap().len(), 2);
}

#[test]
fn suites() {
    let out = run(VERIFY, &["suite", "--name", "kernel", "--p", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("failures: 0"));

    let a = stdout(&run(VERIFY, &["suite", "--name", "p-closure", "--p", "3", "--seed", "7", "--json"]));
    let b = stdout(&run(VERIFY, &["suite", "--name", "p-closure", "--p", "3", "--seed", "7", "--json"]));
    let strip = |s: &str| {
        let mut v: serde_json::Value = serde_json::from_str(s).unwrap();
        v[0].as_object_mut().unwrap().remove("wall_time_secs");
        v
    };
    assert_eq!(strip(&a), strip(&b));

    assert_eq!(code(&run(VERIFY, &["suite", "--name", "no-such-suite", "--p", "3"])), 2);
    assert_eq!(code(&run(VERIFY, &["suite", "--name", "kernel", "--p", "4"])), 2);
    let listed = stdout(&run(VERIFY, &["list"]));
    assert_eq!(listed.lines().count(), 16);
}

#[test]
fn timeouts() {
    let out = run(CATALOG, &["table1", "--p", "3", "--timeout", "0"]);
    assert_eq!(code(&out), 3);
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "e.txt", EXCEPTIONAL_P3);
    assert_eq!(code(&run(SRING, &["aut", &file, "--timeout", "0"])), 3);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(SRING, &["aut"])), 2);
    assert_eq!(code(&run(CI, &["bogus"])), 2);
    assert_eq!(code(&run(VERIFY, &["suite", "--p", "3"])), 2);
}

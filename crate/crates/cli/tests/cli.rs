use std::path::{Path, PathBuf};
use std::process::Command;

use privcheck_cli::run;

const RECORDS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/records.csv");
const SUITES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/suites");

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn privcheck(args: &[&str], stdin: &str) -> Out {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("privcheck").chain(args.iter().copied());
    let code = run(argv, &mut input, &mut out, &mut err);
    Out { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn build(dir: &Path, user: &str, extra: &[&str]) -> PathBuf {
    let path = dir.join(format!("u{user}.model"));
    let mut args = vec!["build", "--records", RECORDS, "--user", user, "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = privcheck(&args, "");
    assert_eq!(o.code, 0, "{}", o.stderr);
    path
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let m = build(dir.path(), "89", &[]);
    let m = m.to_str().unwrap();
    let o = privcheck(
        &["check", "--model", m, "--query", "E<>(user.Share and info_type.Health and trust_source.Family and recipient_role.Family)"],
        "",
    );
    assert_eq!((o.code, o.stdout.as_str()), (0, "Satisfied\n"));
    let o = privcheck(
        &[
            "check",
            "--model",
            m,
            "--query",
            "E<>(user.Share and info_type.Health and trust_source.Family and (recipient_role.Friend or recipient_role.Online))",
        ],
        "",
    );
    assert_eq!((o.code, o.stdout.as_str()), (1, "Not Satisfied\n"));
    let o = privcheck(&["check", "--model", m, "--query", "E<> user.Share and"], "");
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("syntax error"), "{}", o.stderr);
    let o = privcheck(&["check", "--model", "/nonexistent.model", "--query", "E<> true"], "");
    assert_eq!(o.code, 2);
}

#[test]
fn counterexample_trace_is_printed() {
    let dir = tempfile::tempdir().unwrap();
    let m = build(dir.path(), "89", &[]);
    let q = "A[] not (user.Share and info_type.Finance and trust_source.Expert and recipient_role.Friend)";
    let o = privcheck(&["check", "--model", m.to_str().unwrap(), "--query", q, "--trace", "text"], "");
    assert_eq!(o.code, 1);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "Not Satisfied");
    assert_eq!(lines[1], "trace: 3 steps");
    assert!(lines.last().unwrap().trim_start().starts_with("user.Share information_type.Finance"));
}

#[test]
fn suites() {
    let dir = tempfile::tempdir().unwrap();
    let m = build(dir.path(), "89", &[]);
    let m = m.to_str().unwrap();
    let o = privcheck(&["suite", "--model", m, "--queries", &format!("{SUITES}/user89_sharing.txt")], "");
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.matches("Satisfied").count(), 3);
    assert!(o.stdout.ends_with("3/3 satisfied\n"));
    let o = privcheck(&["suite", "--model", m, "--queries", &format!("{SUITES}/user89_verification.txt")], "");
    assert_eq!(o.code, 1);
    assert!(o.stdout.ends_with("2/4 satisfied\n"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "# header\nE<> user.Share\n\nE<> user.Nowhere\n").unwrap();
    let o = privcheck(&["suite", "--model", m, "--queries", bad.to_str().unwrap()], "");
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("bad.txt:4"), "{}", o.stderr);

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "# nothing\n").unwrap();
    let o = privcheck(&["suite", "--model", m, "--queries", empty.to_str().unwrap()], "");
    assert_eq!(o.code, 0);
    assert!(o.stdout.ends_with("0/0 satisfied\n"));
}

#[test]
fn guarded_build_and_repair() {
    let dir = tempfile::tempdir().unwrap();
    let pre = build(dir.path(), "242", &["--guarded"]);
    let o = privcheck(&["check", "--model", pre.to_str().unwrap(), "--query", "A[] not deadlock", "--trace", "text"], "");
    assert_eq!(o.code, 1);
    assert!(o.stdout.lines().last().unwrap().contains("counter=2"));
    let post = dir.path().join("fixed.model");
    let o = privcheck(
        &["build", "--records", RECORDS, "--user", "242", "--guarded", "--repair", "--out", post.to_str().unwrap()],
        "",
    );
    assert_eq!(o.code, 0);
    let o = privcheck(&["check", "--model", post.to_str().unwrap(), "--query", "A[] not deadlock"], "");
    assert_eq!(o.code, 0);
    assert_eq!(privcheck(&["build", "--records", RECORDS, "--user", "242", "--repair"], "").code, 2);
}

#[test]
fn interactive_session() {
    let dir = tempfile::tempdir().unwrap();
    let m = build(dir.path(), "89", &[]);
    let m = m.to_str().unwrap();
    let o = privcheck(&["simulate", "--model", m, "--interactive"], "list\ntake 0\ntake 7\nreset\nquit\nlist\n");
    assert_eq!(o.code, 0);
    let lines: Vec<&str> = o.stdout.lines().collect();
    let initial = lines[0];
    assert!(initial.starts_with("state: user.Idle"));
    assert_eq!(lines.iter().filter(|l| l.starts_with('[')).count(), 3);
    assert!(lines.contains(&"invalid choice 7 (1 available)"));
    assert_eq!(*lines.last().unwrap(), initial);

    let lone = build(dir.path(), "89", &["--without-observers"]);
    let o = privcheck(&["simulate", "--model", lone.to_str().unwrap(), "--interactive"], "list\ntake 0\n");
    assert_eq!(o.stdout.matches("no enabled transitions").count(), 2);
}

#[test]
fn seeded_simulation_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let m = build(dir.path(), "89", &[]);
    let args = ["simulate", "--model", m.to_str().unwrap(), "--seed", "11", "--steps", "60"];
    let a = privcheck(&args, "");
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, privcheck(&args, "").stdout);
    assert!(a.stdout.starts_with("trace: 60 steps\n"));
    let json = privcheck(&[&args[..], &["--format", "json"]].concat(), "");
    assert!(json.stdout.contains("\"format\": \"privcheck-trace\""));
}

#[test]
fn oracle_and_export() {
    let o = privcheck(&["oracle", "--records", RECORDS, "--user", "89"], "");
    assert_eq!((o.code, o.stdout.as_str()), (0, "user 89: 48/48 triples agree (3 shared)\n"));
    assert_eq!(privcheck(&["oracle", "--records", RECORDS, "--user", "404"], "").code, 2);

    let dir = tempfile::tempdir().unwrap();
    let m = build(dir.path(), "89", &[]);
    let out = dir.path().join("dot");
    let o = privcheck(&["export", "--model", m.to_str().unwrap(), "--dot", out.to_str().unwrap()], "");
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().count(), 4);
    let user = std::fs::read_to_string(out.join("user.dot")).unwrap();
    assert!(user.starts_with("digraph \"user\" {"));
}

#[test]
fn usage_errors() {
    let o = privcheck(&["frobnicate"], "");
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("Usage"));
    assert_eq!(privcheck(&["check", "--model", "m", "--query", "E<> true", "--bogus"], "").code, 2);
    assert_eq!(privcheck(&[], "").code, 2);
    let o = privcheck(&["--help"], "");
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("oracle"));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_privcheck");
    let status = Command::new(bin)
        .args(["build", "--records", RECORDS, "--user", "89"])
        .env("PRIVCHECK_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    assert!(dir.path().join("user_89.model").exists());

    let status = Command::new(bin)
        .args(["export", "--model", dir.path().join("user_89.model").to_str().unwrap()])
        .env("PRIVCHECK_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert!(dir.path().join("recipient_role.dot").exists());
}

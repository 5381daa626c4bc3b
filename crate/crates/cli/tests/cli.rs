use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use spanex_core::enumerate::enumerate;
use spanex_core::model::Document;
use spanex_core::vsa::parse_dump;

fn spanex(args: &[&str]) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spanex"));
    c.args(args).env_remove("SPANEX_MAX_JOIN_COMPILE");
    c
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output {
        status,
        stdout,
        stderr,
    } = cmd.output().unwrap();
    (
        status.code().unwrap(),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

fn file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn eval(expr: &str, doc: &Path, extra: &[&str]) -> (i32, String, String) {
    run(spanex(&["eval", "-e", expr, "-i", doc.to_str().unwrap()]).args(extra))
}

#[test]
fn eval_formats() {
    let dir = tempfile::tempdir().unwrap();
    let d = file(dir.path(), "d.txt", "aaa");
    let q = "SELECT x FROM /a* x{a*} a*/";
    let (code, out, _) = eval(q, &d, &["--format", "count"]);
    assert_eq!((code, out.as_str()), (0, "10\n"));
    let (_, out, _) = eval(q, &d, &["--limit", "2"]);
    assert_eq!(out.lines().count(), 2);

    let d = file(dir.path(), "ab.txt", "abab");
    let (code, out, _) = eval(
        "SELECT x, y FROM /x{a} Σ*/, /Σ* y{b}/",
        &d,
        &["--format", "json"],
    );
    assert_eq!(code, 0);
    assert_eq!(out, "{\"x\":[1,2],\"y\":[4,5]}\n");
}

#[test]
fn boolean_queries_report_through_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let d = file(dir.path(), "d.txt", "abab");
    assert_eq!(eval("SELECT () FROM /Σ* b Σ*/", &d, &[]).0, 0);
    assert_eq!(eval("SELECT () FROM /Σ* b Σ*/", &d, &[]).1, "()\n");
    let (code, out, _) = eval("SELECT () FROM /Σ* c Σ*/", &d, &["--format", "count"]);
    assert_eq!((code, out.as_str()), (1, "0\n"));
}

#[test]
fn syntax_errors_are_located() {
    let dir = tempfile::tempdir().unwrap();
    let d = file(dir.path(), "d.txt", "a");
    let (code, _, err) = eval("SELECT x FRM /a/", &d, &[]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1, column 10"), "{err}");
}

#[test]
fn one_trailing_newline_is_stripped_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let d = file(dir.path(), "d.txt", "abab\n");
    assert_eq!(eval("SELECT x FROM /x{Σ*}/", &d, &[]).1, "1..5\n");
    let (_, out, _) = eval("SELECT x FROM /x{Σ*}/", &d, &["--keep-trailing-newline"]);
    assert_eq!(out, "1..6\n");
}

#[test]
fn check_reports_violations() {
    let (code, out, _) = run(&mut spanex(&["check", "-f", "x{a} x{b}"]));
    assert_eq!(code, 2);
    assert!(out.starts_with("not functional"), "{out}");
    let (code, out, _) = run(&mut spanex(&["check", "-f", "x{a} | x{b}"]));
    assert_eq!((code, out.as_str()), (0, "functional\n"));
}

#[test]
fn compiled_dumps_load_back() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("a.vsa");
    let (code, _, _) = run(&mut spanex(&[
        "compile",
        "-f",
        "a* x{a*} a*",
        "--strict",
        "--dump",
        dump.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let a = parse_dump(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    assert_eq!(enumerate(&a, &Document::new("aaa")).unwrap().count(), 10);
    let (code, out, _) = run(&mut spanex(&["check", "-a", dump.to_str().unwrap()]));
    assert_eq!((code, out.as_str()), (0, "functional\n"));
}

#[test]
fn analyze_keys_and_skeletons() {
    let (_, out, _) = run(&mut spanex(&["analyze", "-f", "x{a*} y{a*}", "-k", "x"]));
    assert_eq!(out, "x is a key\n");
    let (_, out, _) = run(&mut spanex(&["analyze", "-f", "x{a*} a* y{a*}", "-k", "x"]));
    assert!(out.starts_with("x is not a key\ndocument: "), "{out}");
    let (_, out, _) = run(&mut spanex(&[
        "analyze",
        "-e",
        "SELECT x FROM /x{a} y{b}/, /y{b}/ WHERE x == y",
    ]));
    assert!(
        out.starts_with("disjunct 1: Q(x) :- R1(x, y), R2(y), x = y"),
        "{out}"
    );
}

#[test]
fn generated_instances_evaluate_to_their_expectation() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let cnf = file(dir.path(), "f.cnf", "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n");
    let graph = file(dir.path(), "g.txt", "4\n0 1\n1 2\n2 3\n");
    let cases: [(Vec<&str>, i32); 4] = [
        (vec!["3cnf", "--cnf", cnf.to_str().unwrap()], 0),
        (
            vec!["clique", "--graph", graph.to_str().unwrap(), "-k", "3"],
            1,
        ),
        (
            vec![
                "streq-clique",
                "--graph",
                graph.to_str().unwrap(),
                "-k",
                "2",
            ],
            0,
        ),
        (
            vec!["3cnf", "--vars", "4", "--clauses", "6", "--seed", "7"],
            -1,
        ),
    ];
    for (args, expected) in cases {
        let (q, d) = (p("q.txt"), p("d.txt"));
        let (code, _, err) =
            run(spanex(&["gen"])
                .args(&args)
                .args(["--query", &q, "--document", &d]));
        assert_eq!(code, 0, "{err}");
        let predicted = if err.contains("expected: nonempty") {
            0
        } else {
            1
        };
        if expected >= 0 {
            assert_eq!(predicted, expected, "{args:?}: {err}");
        }
        let (code, _, _) = run(&mut spanex(&[
            "eval", "-q", &q, "-i", &d, "--format", "count",
        ]));
        assert_eq!(code, predicted, "{args:?}");
    }
}

#[test]
fn bench_writes_only_preprocessing_for_an_empty_result() {
    let dir = tempfile::tempdir().unwrap();
    let d = file(dir.path(), "d.txt", "abab");
    let report = dir.path().join("r.csv");
    let (code, _, err) = run(&mut spanex(&[
        "bench",
        "-e",
        "SELECT x FROM /x{c}/",
        "-i",
        d.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]));
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(&report).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "event,index,elapsed_ns,delay_ns");
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("preprocessing,,"));
}

#[test]
fn join_compile_limit_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let d = file(dir.path(), "d.txt", "abab");
    let r = dir.path().join("r.csv");
    let args = [
        "bench",
        "-e",
        "SELECT x FROM /x{a} Σ*/",
        "-i",
        d.to_str().unwrap(),
        "--report",
        r.to_str().unwrap(),
    ];
    let (_, _, err) = run(&mut spanex(&args));
    assert!(err.contains("plan: compiled"), "{err}");
    let (_, _, err) = run(spanex(&args).env("SPANEX_MAX_JOIN_COMPILE", "0"));
    assert!(err.contains("plan: canonical"), "{err}");
}

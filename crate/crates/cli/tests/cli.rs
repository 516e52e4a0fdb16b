use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn lpa(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_lpa")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Files {
        let f = Files { dir: tempfile::tempdir().unwrap() };
        f.write("loop.g", "vertex *\nedge x * *\n");
        f.write("edge.g", "# v1 -e-> v2\nvertex v1\nvertex v2\nedge e v1 v2\n");
        f.write("rose.g", "vertex v\nedge a v v\nedge b v v\n");
        f.write("e12.rep", "dim 2\nmap v1 1 0 0 0\nmap v2 0 0 0 1\nmap e 0 1 0 0\nmap e* 0 0 1 0\n");
        f.write("jordan.rep", "dim 2\nmap * 1 0 0 1\nmap x 1 1 0 1\nmap x* 1 -1 0 1\n");
        f
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_string()
    }
}

fn first_line(r: &Run) -> &str {
    r.stdout.lines().next().unwrap_or("")
}

#[test]
fn zero_test_on_the_loop() {
    let f = Files::new();
    let r = lpa(&["zero-test", "--graph", &f.path("loop.g"), "--elem", "x.x* - *", "--system", "rotation"]);
    assert_eq!((r.code, first_line(&r)), (0, "zero"));
    let r = lpa(&["zero-test", "--graph", &f.path("loop.g"), "--elem", "x - *"]);
    assert_eq!((r.code, first_line(&r)), (1, "nonzero"));
    assert!(r.stdout.contains("semantic: nonzero: z=0 ↦ w=0, coeff=-1"), "{}", r.stdout);
    for oracle in ["syntactic", "semantic"] {
        let r = lpa(&["zero-test", "--graph", &f.path("rose.g"), "--elem", "a.a* + b.b* - v", "--oracle", oracle]);
        assert_eq!((r.code, first_line(&r)), (0, "zero"), "{oracle}");
    }
}

#[test]
fn hypothesis_on_the_loop() {
    let f = Files::new();
    let r = lpa(&["check-hypothesis", "--graph", &f.path("loop.g"), "--vertex", "*", "--maxlen", "4"]);
    assert_eq!((r.code, first_line(&r)), (0, "ok z0=0"));
    let r = lpa(&["check-hypothesis", "--graph", &f.path("rose.g")]);
    assert_eq!(r.code, 0);
    assert!(first_line(&r).starts_with("v: ok z0="));
}

#[test]
fn analyze_e12() {
    let f = Files::new();
    let r = lpa(&["analyze-rep", "--graph", &f.path("edge.g"), "--rep", &f.path("e12.rep")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("m_x0 = (1, 0)\nm_x1 = (0, 1)\nD_v1 = {x0}\nD_v2 = {x1}\nR_e = {x0}\nf_e: x1 ↦ x0\n"));
    assert_eq!(r.stdout.lines().last(), Some("intertwiner verified (8 squares)"));
}

#[test]
fn analyze_reports_a_missing_basis() {
    let f = Files::new();
    let r = lpa(&["analyze-rep", "--graph", &f.path("loop.g"), "--rep", &f.path("jordan.rep")]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("no (B2B) basis found"), "{}", r.stdout);
    let bad = f.write("bad.rep", "dim 2\nmap v1 1 0 0 1\n");
    let r = lpa(&["analyze-rep", "--graph", &f.path("edge.g"), "--rep", bad.to_str().unwrap()]);
    assert_eq!((r.code, first_line(&r)), (1, "invalid representation"));
}

#[test]
fn graph_verbs() {
    let f = Files::new();
    let r = lpa(&["validate-graph", "--graph", &f.path("edge.g")]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "ok: 2 vertices, 1 edges\nsinks: {v2}\n"));
    let bad = f.write("bad.g", "vertex v\nvertex v\nedge e v w\n");
    let r = lpa(&["validate-graph", "--graph", bad.to_str().unwrap()]);
    assert_eq!((r.code, first_line(&r)), (1, "invalid"));
    assert_eq!(r.stdout.lines().count(), 3);
    let r = lpa(&["condition-l", "--graph", &f.path("loop.g")]);
    assert_eq!((r.code, r.stdout.as_str()), (1, "fails\n  cycle without exit: x\n"));
    let r = lpa(&["condition-l", "--graph", &f.path("rose.g")]);
    assert_eq!((r.code, first_line(&r)), (0, "holds"));
    let r = lpa(&["levels", "--graph", &f.path("edge.g")]);
    assert_eq!(first_line(&r), "level 1: X = {v1, v2}, Y = {e}");
    assert!(r.stdout.contains("leftover: {}\n"));
}

#[test]
fn systems_and_elements() {
    let f = Files::new();
    let r = lpa(&["build-system", "--graph", &f.path("edge.g"), "--system", "interval", "--dump"]);
    assert_eq!(r.code, 0);
    assert!(first_line(&r).starts_with("ok interval system"));
    assert!(r.stdout.contains("system interval\n"));
    let r = lpa(&["build-system", "--graph", &f.path("edge.g"), "--system", "rotation"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("sink"));
    let r = lpa(&["normal-form", "--graph", &f.path("edge.g"), "--elem", "e.e* + v1"]);
    assert_eq!(r.stdout, "2 v1\n");
    let r = lpa(&["apply", "--graph", &f.path("loop.g"), "--elem", "x.x", "--point", "0"]);
    assert_eq!(r.stdout, "δ[-2 + 2 r2]\n");
    let r = lpa(&["apply", "--graph", &f.path("loop.g"), "--elem", "x*", "--point", "-1 + 1 r2"]);
    assert_eq!(r.stdout, "δ[0]\n");
    let r = lpa(&["separating-path", "--graph", &f.path("rose.g"), "--elem", "a.a*", "--maxlen", "2"]);
    assert_eq!((r.code, first_line(&r)), (0, "a.a"));
    let r = lpa(&["separating-path", "--graph", &f.path("rose.g"), "--elem", "a - a"]);
    assert_eq!((r.code, first_line(&r)), (1, "none (element is zero)"));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let f = Files::new();
    assert_eq!(lpa(&["zero-test", "--graph", &f.path("loop.g")]).code, 2);
    assert_eq!(lpa(&["frobnicate"]).code, 2);
    assert_eq!(lpa(&["normal-form", "--graph", &f.path("loop.g"), "--elem", "x.y"]).code, 2);
    assert_eq!(lpa(&["normal-form", "--graph", "/nonexistent.g", "--elem", "x"]).code, 2);
    let r = lpa(&["apply", "--graph", &f.path("loop.g"), "--elem", "x", "--point", "1 +"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.starts_with("error: parse"));
}

#[test]
fn json_lines_carry_the_verdicts() {
    let f = Files::new();
    let r = lpa(&["--format", "json-lines", "zero-test", "--graph", &f.path("loop.g"), "--elem", "x - *"]);
    assert_eq!(r.code, 1);
    let v: serde_json::Value = serde_json::from_str(first_line(&r)).unwrap();
    assert_eq!(v["verdict"], "nonzero");
    assert_eq!(v["semantic"]["z"], "0");
    let r = lpa(&["--format", "json-lines", "analyze-rep", "--graph", &f.path("edge.g"), "--rep", &f.path("e12.rep")]);
    let recs: Vec<serde_json::Value> = r.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(recs.last().unwrap()["verdict"], "verified");
    assert_eq!(recs[1]["maps"]["e"], serde_json::json!([[1, 0]]));
}

#[test]
fn reports_are_byte_stable() {
    let f = Files::new();
    let dir: &Path = f.dir.path();
    let g = dir.join("rose.g");
    let args = ["check-hypothesis", "--graph", g.to_str().unwrap(), "--maxlen", "3"];
    let a = lpa(&args).stdout;
    let b = lpa(&args).stdout;
    let mut seq = vec!["--sequential"];
    seq.extend_from_slice(&args);
    assert_eq!(a, b);
    assert_eq!(a, lpa(&seq).stdout);
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const P4: &str = "p edge 4 3\ne 1 2\ne 2 3\ne 3 4\n";
const C4: &str = "p edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n";
const DIAMOND: &str = "p edge 4 5\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cliquereconf"))
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.0.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    (status.code().unwrap(), String::from_utf8(stdout).unwrap(), String::from_utf8(stderr).unwrap())
}

fn solve(graph: &Path, inst: &Path, extra: &[&str]) -> (i32, String, String) {
    run(bin().arg("solve").arg(graph).arg(inst).args(extra))
}

fn json(out: &str) -> Value {
    serde_json::from_str(out).unwrap()
}

fn text_field<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    out.lines().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
}

#[test]
fn path_goes_to_the_chordal_solver() {
    let d = Dir::new();
    let (g, i) = (d.file("p4.graph", P4), d.file("p4.inst", "r tar 1\ns 1\nt 4\n"));
    let (code, out, _) = solve(&g, &i, &["--json"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["answer"], "YES");
    assert_eq!(v["solver"], "chordal");
    assert_eq!(v["distance"], 6);
    assert_eq!(v["shortest"], true);
    assert_eq!(v["sequence"].as_array().unwrap().len(), 7);
    assert_eq!(v["sequence"][0], serde_json::json!([1]));
    assert_eq!(v["sequence"][6], serde_json::json!([4]));

    let (code, out, _) = solve(&g, &i, &[]);
    assert_eq!(code, 0);
    assert_eq!(text_field(&out, "distance"), Some("6"));
    assert_eq!(text_field(&out, "solver"), Some("chordal"));
    let seq: Vec<&str> = out.lines().skip_while(|l| !l.starts_with("sequence")).skip(1).collect();
    assert_eq!(seq, ["1", "1 2", "2", "2 3", "3", "3 4", "4"]);
}

#[test]
fn cycle_avoids_the_chordal_solver() {
    let d = Dir::new();
    let (g, i) = (d.file("c4.graph", C4), d.file("c4.inst", "r tar 1\ns 1\nt 3\n"));
    let (code, out, _) = solve(&g, &i, &["--json"]);
    assert_eq!(code, 0);
    assert_ne!(json(&out)["solver"], "chordal");
    let (code, _, err) = solve(&g, &i, &["--solver", "chordal"]);
    assert_eq!(code, 2);
    assert!(err.contains("chordal"), "{err}");
}

#[test]
fn frozen_diamond_is_no() {
    let d = Dir::new();
    let (g, i) = (d.file("d.graph", DIAMOND), d.file("d.inst", "r tar 3\ns 1 2 3\nt 1 2 4\n"));
    for solver in ["auto", "exact", "mcg", "chordal"] {
        let (code, out, _) = solve(&g, &i, &["--json", "--solver", solver]);
        assert_eq!(code, 1, "{solver}");
        let v = json(&out);
        assert_eq!(v["answer"], "NO");
        assert_eq!(v["distance"], Value::Null);
        assert_eq!(v["sequence"], Value::Null);
    }
}

#[test]
fn text_and_json_agree() {
    let d = Dir::new();
    let g = d.file("d.graph", DIAMOND);
    let cases = ["r tar 1\ns 3\nt 4\n", "r tj\ns 1 3\nt 2 4\n", "r ts\ns 1 3\nt 2 4\n", "r tar 2\ns 3 1\nt 4 2\n"];
    for (n, inst) in cases.iter().enumerate() {
        let i = d.file(&format!("{n}.inst"), inst);
        for solver in ["auto", "exact", "mcg", "chordal"] {
            let (c1, text, _) = solve(&g, &i, &["--solver", solver]);
            let (c2, out, _) = solve(&g, &i, &["--solver", solver, "--json"]);
            assert_eq!(c1, c2);
            let v = json(&out);
            let expected = v["distance"].as_u64().map_or("inf".to_string(), |d| d.to_string());
            let shown = text_field(&text, "distance").unwrap().split(' ').next().unwrap();
            assert_eq!(shown, expected, "{inst} {solver}");
            for key in ["answer", "solver"] {
                assert_eq!(text_field(&text, key), v[key].as_str());
            }
        }
    }
}

#[test]
fn json_schema_is_stable() {
    let d = Dir::new();
    let (g, i) = (d.file("p4.graph", P4), d.file("p4.inst", "r tj\ns 1 2\nt 3 4\n"));
    let (_, out, _) = solve(&g, &i, &["--json", "--no-sequence"]);
    let v = json(&out);
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        ["answer", "decision", "distance", "reachable", "rule", "sequence", "shortest", "solver", "stats", "tar_threshold"]
    );
    assert_eq!(v["sequence"], Value::Null);
    assert_eq!(v["tar_threshold"], 1);
    assert_eq!(v["distance"], 2);
}

#[test]
fn sequence_out_round_trips_through_check() {
    let d = Dir::new();
    let (g, i) = (d.file("p4.graph", P4), d.file("p4.inst", "r tar 1\ns 1\nt 4\n"));
    let seq = d.path("p4.seq");
    let (code, _, _) = solve(&g, &i, &["--no-sequence", "--sequence-out", seq.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out, _) = run(bin().arg("check").arg(&g).arg(&i).arg(&seq));
    assert_eq!((code, out.as_str()), (0, "ok 6 steps\n"));
}

#[test]
fn check_reports_the_first_violation() {
    let d = Dir::new();
    let g = d.file("d.graph", DIAMOND);
    let i = d.file("d.inst", "r tar 1\ns 3\nt 4\n");
    let check = |name: &str, seq: &str| {
        let s = d.file(name, seq);
        run(bin().arg("check").arg(&g).arg(&i).arg(&s))
    };
    assert_eq!(check("ok.seq", "3\n1 3\n1\n1 4\n4\n").0, 0);
    let (code, out, _) = check("jump.seq", "3\n1 3\n1 4\n4\n");
    assert_eq!((code, out.as_str()), (1, "violation at clique 3: not adjacent to the previous clique\n"));
    let (code, out, _) = check("nonclique.seq", "3\n3 4\n4\n");
    assert_eq!((code, out.as_str()), (1, "violation at clique 2: not a clique\n"));
    let (code, _, err) = check("bad.seq", "3\nx\n");
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn errors_exit_with_two() {
    let d = Dir::new();
    let g = d.file("p4.graph", P4);
    let bad_graph = d.file("bad.graph", "p edge 2 1\ne 1 5\n");
    let i = d.file("p4.inst", "r tar 1\ns 1\nt 4\n");
    let not_clique = d.file("nc.inst", "r tar 1\ns 1 3\nt 4\n");
    assert_eq!(solve(&d.path("missing"), &i, &[]).0, 2);
    assert_eq!(solve(&bad_graph, &i, &[]).0, 2);
    assert_eq!(solve(&g, &not_clique, &[]).0, 2);
    let c = d.file("c4.graph", C4);
    let ci = d.file("c4.inst", "r tar 1\ns 1\nt 3\n");
    let (code, _, err) = solve(&c, &ci, &["--solver", "exact", "--budget", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("budget"), "{err}");
}

#[test]
fn td_file_routes_exact_search() {
    let d = Dir::new();
    let g = d.file("c4.graph", C4);
    let i = d.file("c4.inst", "r tar 1\ns 1\nt 3\n");
    let td = d.file("c4.td", "s td 2 3 4\nb 1 1 2 3\nb 2 1 3 4\n1 2\n");
    let (code, out, _) = solve(&g, &i, &["--json", "--td", td.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["solver"], "exact");
    assert_eq!(v["distance"], 4);
    let wrong = d.file("wrong.td", "s td 1 2 4\nb 1 1 2\n");
    assert_eq!(solve(&g, &i, &["--td", wrong.to_str().unwrap()]).0, 2);
}

#[test]
fn gen_is_deterministic_and_chordal() {
    let d = Dir::new();
    let gen = |prefix: &str, kind: &str, extra: &[&str]| {
        let out = d.path(prefix);
        let res = run(bin().args(["gen", kind, "--out"]).arg(&out).args(extra));
        assert_eq!(res.0, 0, "{}", res.2);
        (d.path(&format!("{prefix}.graph")), d.path(&format!("{prefix}.inst")))
    };
    let read = |p: &Path| std::fs::read(p).unwrap();
    let a = gen("a", "chordal", &["--n", "12", "--seed", "7"]);
    let b = gen("b", "chordal", &["--n", "12", "--seed", "7"]);
    assert_eq!(read(&a.0), read(&b.0));
    assert_eq!(read(&a.1), read(&b.1));
    for seed in 0..20 {
        let s = seed.to_string();
        for (kind, extra) in [("chordal", vec!["--n", "15"]), ("interval", vec!["--n", "5"])] {
            let mut args = extra.clone();
            args.extend(["--seed", &s]);
            let (g, i) = gen(&format!("{kind}{seed}"), kind, &args);
            let (code, out, err) = solve(&g, &i, &["--json", "--solver", "chordal"]);
            assert!(code < 2, "{err}");
            let v = json(&out);
            assert_eq!(v["solver"], "chordal");
            assert_eq!(v["shortest"], true);
        }
    }
    for (kind, extra) in [("gnp", vec!["--p", "0.6"]), ("grid", vec!["--rows", "2", "--n", "3"])] {
        let (g, i) = gen(kind, kind, &extra);
        assert!(solve(&g, &i, &[]).0 < 2);
    }
    for (kind, rule) in [("gnp", "tj"), ("chordal", "ts")] {
        let (_, i) = gen(&format!("{kind}-{rule}"), kind, &["--n", "8", "--rule", rule, "--p", "0.7"]);
        assert!(std::fs::read_to_string(i).unwrap().starts_with(&format!("r {rule}\n")));
    }
    let bad = run(bin().args(["gen", "gnp", "--p", "1.5", "--out"]).arg(d.path("x")));
    assert_eq!(bad.0, 2);
}

#[test]
fn crosscheck_reports_discrepancies_with_reproducers() {
    let d = Dir::new();
    let dir = d.path("repro");
    let (code, out, _) = run(bin().args(["crosscheck", "--count", "60", "--reproducers"]).arg(&dir));
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("0 discrepancies\n"));

    let (code, out, _) = run(bin().args(["crosscheck", "--count", "60", "--fault", "reversed-tie-break", "--reproducers"]).arg(&dir));
    assert_eq!(code, 0, "{out}");

    let (code, out, _) = run(bin().args(["crosscheck", "--count", "60", "--fault", "threshold-shift", "--reproducers"]).arg(&dir));
    assert_eq!(code, 1);
    assert!(out.contains("reproducer"));
    let graphs: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(graphs.iter().any(|p| p.extension().is_some_and(|e| e == "graph")));
    // Reproducers are valid solver input.
    let g = graphs.iter().find(|p| p.extension().is_some_and(|e| e == "graph")).unwrap();
    let i = g.with_extension("inst");
    assert!(solve(g, &i, &[]).0 < 2);
}

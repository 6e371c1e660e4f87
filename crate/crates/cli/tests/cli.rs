use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn hatguess(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_hatguess"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn graph_file(dir: &TempDir, family: &str) -> PathBuf {
    let p = dir.path().join(format!("{}.txt", family.replace([':', ','], "_")));
    let r = hatguess(&["construct", "graph", family, "--out", path_str(&p)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    p
}

/// Exit code implied by the first word after `verdict`.
fn code_for(label: &str) -> i32 {
    match label {
        "wins" | "solvable" => 0,
        "loses" | "unsolvable" => 1,
        "timeout" => 2,
        other => panic!("unknown verdict {other}"),
    }
}

fn assert_verdict_matches(r: &Run) {
    let line = r
        .stdout
        .lines()
        .find(|l| l.starts_with("verdict "))
        .expect("verdict line");
    let label = line.split_whitespace().nth(1).unwrap();
    assert_eq!(code_for(label), r.code, "{line}");
}

#[test]
fn example_strategy_verifies() {
    let dir = TempDir::new().unwrap();
    let c4 = graph_file(&dir, "cycle:4");
    let ex = dir.path().join("ex51.json");
    assert_eq!(hatguess(&["construct", "c4-example", "--out", path_str(&ex)]).code, 0);
    let r = hatguess(&["verify", "--graph", path_str(&c4), "--strategy", path_str(&ex)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.trim(), "verdict wins");
    let r = hatguess(&["linear-verify", "--graph", path_str(&c4), "--strategy", path_str(&ex)]);
    assert_eq!(r.code, 0);
}

#[test]
fn path3_not_three_solvable() {
    let dir = TempDir::new().unwrap();
    let p3 = graph_file(&dir, "path:3");
    let r = hatguess(&["solve", "--graph", path_str(&p3), "--q", "3"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("verdict unsolvable nodes="), "{}", r.stdout);
    assert_verdict_matches(&r);

    let r = hatguess(&["solve", "--graph", path_str(&p3), "--q", "3", "--budget-nodes", "1"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.starts_with("verdict timeout nodes=1 ms="), "{}", r.stdout);
}

#[test]
fn solve_writes_verifying_witness() {
    let dir = TempDir::new().unwrap();
    let p3 = graph_file(&dir, "path:3");
    let w = dir.path().join("w.json");
    let r = hatguess(&["solve", "--graph", path_str(&p3), "--q", "2", "--out", path_str(&w)]);
    assert_eq!(r.code, 0);
    assert_verdict_matches(&r);
    let r = hatguess(&["verify", "--graph", path_str(&p3), "--strategy", path_str(&w)]);
    assert_eq!(r.code, 0);
}

#[test]
fn exit_codes_match_verdict_lines() {
    let dir = TempDir::new().unwrap();
    for (family, q) in [
        ("complete:3", "3"),
        ("complete:3", "4"),
        ("cycle:4", "3"),
        ("star:3", "3"),
    ] {
        let g = graph_file(&dir, family);
        for branching in ["lex", "fewest"] {
            let r = hatguess(&["solve", "--graph", path_str(&g), "--q", q, "--branching", branching]);
            assert_verdict_matches(&r);
        }
    }
}

#[test]
fn losing_strategy_reports_witness() {
    let dir = TempDir::new().unwrap();
    let k2 = graph_file(&dir, "complete:2");
    let s = dir.path().join("zero.json");
    fs::write(
        &s,
        r#"{"format":"hatstrat-v1","kind":"table","q":2,"vertices":[
            {"id":0,"neighbors":[1],"table":{"0":0,"1":0}},
            {"id":1,"neighbors":[0],"table":{"0":0,"1":0}}]}"#,
    )
    .unwrap();
    let r = hatguess(&["verify", "--graph", path_str(&k2), "--strategy", path_str(&s)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout.trim(), "verdict loses witness=1,1");
    let r = hatguess(&["verify", "--graph", path_str(&k2), "--strategy", path_str(&s), "--all"]);
    assert_eq!(r.stdout.lines().next(), Some("bad 1,1"));
}

#[test]
fn hat_guessing_number_of_triangle() {
    let dir = TempDir::new().unwrap();
    let k3 = graph_file(&dir, "complete:3");
    let r = hatguess(&["hg", "--graph", path_str(&k3), "--q-max", "5"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout.lines().last(), Some("hg 3 exact"));
}

#[test]
fn linear_decide_and_minrank() {
    let dir = TempDir::new().unwrap();
    let c4 = graph_file(&dir, "cycle:4");
    let w = dir.path().join("lin.json");
    let r = hatguess(&[
        "linear-decide",
        "--graph",
        path_str(&c4),
        "--q",
        "3",
        "--out",
        path_str(&w),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("linear solvable"));
    assert_eq!(
        hatguess(&["linear-verify", "--graph", path_str(&c4), "--strategy", path_str(&w)]).code,
        0
    );
    let p3 = graph_file(&dir, "path:3");
    assert_eq!(
        hatguess(&["linear-decide", "--graph", path_str(&p3), "--q", "3"]).code,
        1
    );

    let k3 = graph_file(&dir, "complete:3");
    let r = hatguess(&["minrank", "--graph", path_str(&k3), "--q", "2"]);
    assert_eq!((r.code, r.stdout.trim()), (0, "minrank 1"));
}

#[test]
fn saturated_subcommands() {
    let dir = TempDir::new().unwrap();
    let m = dir.path().join("m.txt");
    let r = hatguess(&[
        "saturated",
        "search",
        "--n-max",
        "3",
        "--l",
        "4",
        "--q",
        "2",
        "--t",
        "3",
        "--out",
        path_str(&m),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        hatguess(&["saturated", "check", "--matrix", path_str(&m)])
            .stdout
            .trim(),
        "saturated true"
    );
    let r = hatguess(&[
        "saturated",
        "search",
        "--n-max",
        "3",
        "--l",
        "9",
        "--q",
        "2",
        "--t",
        "2",
    ]);
    assert_eq!((r.code, r.stdout.trim()), (1, "saturated none"));

    let zeros = dir.path().join("zeros.txt");
    fs::write(&zeros, "satmat v1 1 3 2 2\n0 0 0\n").unwrap();
    let r = hatguess(&["saturated", "check", "--matrix", path_str(&zeros)]);
    assert_eq!((r.code, r.stdout.trim()), (1, "saturated false columns=0,1"));

    let a = hatguess(&[
        "saturated",
        "random",
        "--n",
        "4",
        "--l",
        "4",
        "--q",
        "2",
        "--t",
        "2",
        "--seed",
        "11",
    ]);
    let b = hatguess(&[
        "saturated",
        "random",
        "--n",
        "4",
        "--l",
        "4",
        "--q",
        "2",
        "--t",
        "2",
        "--seed",
        "11",
    ]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bipartite_pipeline() {
    let dir = TempDir::new().unwrap();
    let m = dir.path().join("m.txt");
    fs::write(&m, "satmat v1 2 4 2 3\n0 0 1 1\n0 1 0 1\n").unwrap();
    let (g, s) = (dir.path().join("k22.txt"), dir.path().join("k22.json"));
    let r = hatguess(&[
        "construct",
        "bipartite",
        "--m",
        "2",
        "--matrix",
        path_str(&m),
        "--out",
        path_str(&s),
        "--graph-out",
        path_str(&g),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        hatguess(&["verify", "--graph", path_str(&g), "--strategy", path_str(&s)]).code,
        0
    );
}

#[test]
fn reduce_pendant_vertex() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("kite.txt");
    fs::write(&g, "hatgraph v1\nmode undirected\nn 4\ne 0 1\ne 0 2\ne 1 2\ne 0 3\n").unwrap();
    let s = dir.path().join("kite.json");
    let r = hatguess(&[
        "solve",
        "--graph",
        path_str(&g),
        "--q",
        "3",
        "--branching",
        "fewest",
        "--out",
        path_str(&s),
    ]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let (rg, rs) = (dir.path().join("k3.txt"), dir.path().join("k3.json"));
    let r = hatguess(&[
        "construct",
        "reduce",
        "--graph",
        path_str(&g),
        "--strategy",
        path_str(&s),
        "--vertex",
        "3",
        "--out",
        path_str(&rs),
        "--graph-out",
        path_str(&rg),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        hatguess(&["verify", "--graph", path_str(&rg), "--strategy", path_str(&rs)]).code,
        0
    );
}

#[test]
fn adversaries_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let cme = graph_file(&dir, "cycle-minus-edge:5");
    let s = dir.path().join("rand.json");
    let gen = |seed: &str| {
        hatguess(&[
            "construct",
            "random",
            "--graph",
            path_str(&cme),
            "--q",
            "3",
            "--seed",
            seed,
            "--out",
            path_str(&s),
        ]);
        fs::read_to_string(&s).unwrap()
    };
    assert_eq!(gen("5"), gen("5"));
    let r = hatguess(&["adversary", "cycle-minus-edge", "--strategy", path_str(&s)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("coloring "));

    let c5 = graph_file(&dir, "cycle:5");
    let s6 = dir.path().join("c5q6.json");
    hatguess(&[
        "construct",
        "random",
        "--graph",
        path_str(&c5),
        "--q",
        "6",
        "--seed",
        "1",
        "--out",
        path_str(&s6),
    ]);
    let lll = |seed| {
        hatguess(&[
            "adversary",
            "lll",
            "--graph",
            path_str(&c5),
            "--strategy",
            path_str(&s6),
            "--seed",
            seed,
        ])
    };
    let (a, b) = (lll("9"), lll("9"));
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);

    let star = graph_file(&dir, "star:3");
    let st = dir.path().join("star.json");
    hatguess(&[
        "construct",
        "random",
        "--graph",
        path_str(&star),
        "--q",
        "6",
        "--seed",
        "2",
        "--out",
        path_str(&st),
    ]);
    let r = hatguess(&[
        "adversary",
        "robust",
        "--graph",
        path_str(&star),
        "--strategy",
        path_str(&st),
        "--k",
        "1",
        "--q-low",
        "2",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("partial *,"), "{}", r.stdout);
}

#[test]
fn errors_exit_3() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.txt");
    let r = hatguess(&["solve", "--graph", path_str(&missing), "--q", "3"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("nope.txt"));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "hatgraph v1\nmode undirected\nn 2\nedge 0 1\n").unwrap();
    let r = hatguess(&["solve", "--graph", path_str(&bad), "--q", "2"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("line 4"), "{}", r.stderr);

    assert_eq!(hatguess(&["solve", "--q", "2"]).code, 3);
    assert_eq!(hatguess(&["verify", "--unknown"]).code, 3);
    assert_eq!(hatguess(&["frobnicate"]).code, 3);

    let nested = dir.path().join("no/such/dir/out.json");
    assert_eq!(
        hatguess(&["construct", "complete", "--n", "3", "--out", path_str(&nested)]).code,
        3
    );
}

#[test]
fn atomic_output_replaces_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("k3.json");
    fs::write(&out, "stale").unwrap();
    assert_eq!(
        hatguess(&["construct", "complete", "--n", "3", "--out", path_str(&out)]).code,
        0
    );
    assert!(fs::read_to_string(&out).unwrap().contains("hatstrat-v1"));
    let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 1);
}

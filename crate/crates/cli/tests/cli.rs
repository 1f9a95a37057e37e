use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const FIXTURE_SHA256: &str = "aecd9ee1640beb41b8934a51d5fb8d01bd6043b23759b39f2fcc1a321ad24f07";
const PLOT_SHA256: &str = "aee5fbab0a3f6341d91c042e387644e0cec3bcadf565344c43af3b34e9f5f5c2";

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/fixture3.txt")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linecollect"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn sha256(path: &Path) -> String {
    let bytes = std::fs::read(path).unwrap();
    Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn fixture_file_is_pinned() {
    assert_eq!(sha256(&fixture()), FIXTURE_SHA256);
}

#[test]
fn solve_fixture_with_each_k() {
    for (k, weight) in [("1", 4), ("2", 7)] {
        let o = run(&["solve", p(&fixture()), "--k", k, "--oracle", "brute"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let out = stdout(&o);
        assert!(
            out.contains(&format!("weight={weight} n=3 k={k} time_ms=")),
            "{out}"
        );
        assert!(out.contains("match=true"), "{out}");
    }
}

#[test]
fn solve_then_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let sched = dir.path().join("out.sched");
    let o = run(&[
        "solve",
        p(&fixture()),
        "--oracle",
        "ssp",
        "--out",
        p(&sched),
        "--trace",
    ]);
    assert!(o.status.success());
    let trace = std::fs::read_to_string(sched.with_extension("trace")).unwrap();
    assert!(trace.starts_with("# round 1"));
    assert!(trace.contains("# round 2"));
    let o = run(&["verify", p(&fixture()), p(&sched)]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("valid=true weight=7 robots=2"));
}

#[test]
fn verify_rejects_wrong_weight_and_collisions() {
    let dir = tempfile::tempdir().unwrap();
    let bad_weight = dir.path().join("w.sched");
    std::fs::write(&bad_weight, "robot 1: (0,0) -> (0,1)\nweight=5\n").unwrap();
    let o = run(&["verify", p(&fixture()), p(&bad_weight)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("declared weight 5"));

    let too_fast = dir.path().join("f.sched");
    std::fs::write(&too_fast, "robot 1: (0,0) -> (2,1)\nweight=0\n").unwrap();
    assert_eq!(
        run(&["verify", p(&fixture()), p(&too_fast)]).status.code(),
        Some(2)
    );

    let crossing = dir.path().join("c.sched");
    std::fs::write(
        &crossing,
        "robot 1: (0,0) -> (1,1) -> (-1,3)\nrobot 2: (0,0) -> (-1,1) -> (1,3)\nweight=0\n",
    )
    .unwrap();
    assert_eq!(
        run(&["verify", p(&fixture()), p(&crossing)]).status.code(),
        Some(2)
    );
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "k=2 v=1\n0 -1 3\n").unwrap();
    let o = run(&["solve", p(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("negative time"));
    assert_eq!(
        run(&["solve", p(&dir.path().join("missing.txt"))])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["solve", p(&fixture()), "--k", "0"]).status.code(),
        Some(1)
    );
}

#[test]
fn gen_is_deterministic_and_solvable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for path in [&a, &b] {
        assert!(run(&[
            "gen",
            "--n",
            "40",
            "--seed",
            "9",
            "--k",
            "3",
            "--out",
            p(path)
        ])
        .status
        .success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let o = run(&["solve", p(&a), "--oracle", "ssp", "--threshold", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("match=true"));
}

#[test]
fn bench_prints_rows_and_doubling_ratio() {
    let o = run(&["bench", "--sizes", "64,128", "--seeds", "1,2", "--k", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<&str> = out
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("n,"))
        .collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 8);
        assert_eq!(cols[6], cols[7]);
    }
    assert!(out.contains("# doubling n=64->128 ratio="));
}

#[test]
fn plot_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let sched = dir.path().join("s.sched");
    let svg = dir.path().join("p.svg");
    assert!(run(&["solve", p(&fixture()), "--out", p(&sched)])
        .status
        .success());
    let o = run(&["plot", p(&fixture()), p(&sched), "--out", p(&svg)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains("<g id=\"xt\">") && text.contains("<g id=\"ab\">"));
    assert_eq!(text.matches("class=\"request\"").count(), 6);
    assert_eq!(text.matches("class=\"robot\"").count(), 4);
    assert_eq!(sha256(&svg), PLOT_SHA256);
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ellcycle"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let o = run(&[&["gen"], args].concat());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let p = dir.join(name);
    std::fs::write(&p, &o.stdout).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_exit_codes() {
    let dir = TempDir::new().unwrap();
    let complete = gen(dir.path(), "c.khg", &["--family", "complete", "--n", "12", "--k", "4"]);
    let extremal = gen(dir.path(), "x.khg", &["--family", "extremal", "--n", "12", "--k", "4", "--ell", "1"]);
    let found = run(&["solve", "--input", s(&complete), "--ell", "1"]);
    assert_eq!(code(&found), 0);
    assert!(stdout(&found).starts_with("cycle 1 "));
    assert_eq!(code(&run(&["solve", "--input", s(&extremal), "--ell", "1"])), 1);
    assert_eq!(code(&run(&["solve", "--input", s(&extremal), "--ell", "1", "--budget-nodes", "5"])), 2);
}

#[test]
fn solver_witness_validates() {
    let dir = TempDir::new().unwrap();
    let g = gen(dir.path(), "c.khg", &["--family", "complete", "--n", "12", "--k", "4"]);
    let walk = dir.path().join("c.walk");
    std::fs::write(&walk, run(&["solve", "--input", s(&g), "--ell", "1"]).stdout).unwrap();
    let o = run(&["validate", "--graph", s(&g), s(&g), s(&walk)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn validate_reports_lines_and_windows() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.khg");
    std::fs::write(&bad, "3 6\n# comment\n0 1 2\n0 2 2\n").unwrap();
    let o = run(&["validate", s(&bad)]);
    assert_ne!(code(&o), 0);
    assert!(stdout(&o).contains("line 4"), "{}", stdout(&o));

    let g = dir.path().join("g.khg");
    std::fs::write(&g, "4 7\n0 1 2 3\n").unwrap();
    let walk = dir.path().join("p.walk");
    std::fs::write(&walk, "path 1 0 1 2 3 4 5 6\n").unwrap();
    let o = run(&["validate", "--graph", s(&g), s(&walk)]);
    assert_ne!(code(&o), 0);
    assert!(stdout(&o).contains("window 1"), "{}", stdout(&o));
}

#[test]
fn pipeline_exit_codes() {
    let dir = TempDir::new().unwrap();
    let x = gen(dir.path(), "x.khg", &["--family", "extremal", "--n", "12", "--k", "4", "--ell", "1"]);
    let o = run(&["pipeline", "--input", s(&x), "--ell", "1"]);
    assert_eq!(code(&o), 3, "{}", stdout(&o));
    let c = gen(dir.path(), "c.khg", &["--family", "complete", "--n", "15", "--k", "4"]);
    let o = run(&["pipeline", "--input", s(&c), "--ell", "1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("\"kind\":\"cycle\""));
}

#[test]
fn sweep_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    let args = ["sweep", "--n", "9,10,12", "--k", "4", "--ell", "1", "--delta", "0,0.3,1", "--instances", "4", "--seed", "7"];
    for (out, workers) in [(&a, "1"), (&b, "1"), (&c, "3")] {
        let o = run(&[&args[..], &["--workers", workers, "--out", s(out)]].concat());
        assert_eq!(code(&o), 0);
    }
    let a = std::fs::read(a).unwrap();
    assert_eq!(a, std::fs::read(b).unwrap());
    assert_eq!(a, std::fs::read(c).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("n,k,ell,delta_fraction,seed,hamiltonian,nodes,millis\n"));
    assert!(text.contains(",control-complete,true,"));
    assert!(text.contains(",control-extremal,false,"));
}

#[test]
fn absorb_and_connect() {
    let dir = TempDir::new().unwrap();
    let g = gen(dir.path(), "c.khg", &["--family", "complete", "--n", "13", "--k", "4"]);
    let o = run(&["absorb", "--input", s(&g), "--ell", "1", "--target", "0,1,2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"p_prime\""));
    let small = gen(dir.path(), "s.khg", &["--family", "complete", "--n", "12", "--k", "4"]);
    let o = run(&["absorb", "--input", s(&small), "--ell", "1", "--target", "0,1,2"]);
    assert_eq!(stdout(&o).trim(), "NONE");

    let g = gen(dir.path(), "k5.khg", &["--family", "complete", "--n", "24", "--k", "5"]);
    let pairs = dir.path().join("p.pairs");
    std::fs::write(&pairs, "0,1;2,3\n").unwrap();
    let res = dir.path().join("r.vs");
    std::fs::write(&res, (4..24).map(|v| v.to_string()).collect::<Vec<_>>().join(",") + "\n").unwrap();
    let o = run(&["connect", "--input", s(&g), "--ell", "2", "--pairs", s(&pairs), "--reservoir", s(&res)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let walks = dir.path().join("out.walk");
    std::fs::write(&walks, &o.stdout).unwrap();
    assert_eq!(code(&run(&["validate", "--graph", s(&g), s(&walks)])), 0);
}

#[test]
fn tile_and_regular_outputs_validate() {
    let dir = TempDir::new().unwrap();
    let r = gen(dir.path(), "r.khg", &["--family", "complete", "--n", "8", "--k", "4"]);
    let o = run(&["tile", "--input", s(&r), "--ell", "1", "--beta", "1/16"]);
    assert_eq!(code(&o), 0);
    let tiling = dir.path().join("t.tiling");
    std::fs::write(&tiling, &o.stdout).unwrap();
    let v = run(&["validate", "--graph", s(&r), s(&tiling)]);
    assert_eq!(code(&v), 0, "{}", stdout(&v));

    let h = gen(dir.path(), "h.khg", &["--family", "complete", "--n", "12", "--k", "3"]);
    let part = dir.path().join("h.part");
    std::fs::write(&part, "4 3\n0 1 2\n3 4 5\n6 7 8\n9 10 11\n").unwrap();
    assert_eq!(code(&run(&["validate", "--graph", s(&h), s(&part)])), 0);
    let o = run(&["regular", "--input", s(&h), "--partition", s(&part)]);
    assert_eq!(code(&o), 0);
    let red = dir.path().join("red.khg");
    std::fs::write(&red, &o.stdout).unwrap();
    let v = run(&["validate", s(&red)]);
    assert!(stdout(&v).contains("4 edges"), "{}", stdout(&v));
}

#[test]
fn bad_input_is_an_error() {
    let o = run(&["solve", "--input", "/nonexistent.khg", "--ell", "1"]);
    assert_eq!(code(&o), 5);
}

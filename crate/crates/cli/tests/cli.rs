use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matchkern"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.gr");
    let b = dir.path().join("b.gr");
    for p in [&a, &b] {
        ok(&[
            "gen",
            "forest-plus-edges",
            "--n",
            "100",
            "--k",
            "3",
            "--seed",
            "7",
            "--out",
            s(p),
        ]);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let other = ok(&[
        "gen",
        "forest-plus-edges",
        "--n",
        "100",
        "--k",
        "3",
        "--seed",
        "8",
    ]);
    assert_ne!(other.as_bytes(), fs::read(&a).unwrap());
}

#[test]
fn solve_k33() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("p edge 6 9\n");
    for u in 1..=3 {
        for v in 4..=6 {
            text += &format!("e {u} {v}\n");
        }
    }
    let g = put(&dir, "k33.gr", &text);
    let m = dir.path().join("k33.m");
    assert_eq!(ok(&["solve", s(&g), "--out", s(&m)]), "optimum 3\n");
    assert_eq!(ok(&["verify", s(&g), s(&m), "--expect", "3"]), "valid 3\n");
    assert_eq!(code(&["verify", s(&g), s(&m), "--expect", "4"]), 3);
}

#[test]
fn fes_on_forest_is_empty() {
    let dir = TempDir::new().unwrap();
    let g = put(&dir, "t.gr", "p edge 5 4\ne 1 2\ne 2 3\ne 3 4\ne 3 5\n");
    let r = report(&["kernelize", s(&g), "--param", "fes"]);
    assert_eq!(r["k"], 0);
    assert_eq!(r["n_out"], 0);
    assert_eq!(r["optimum"], 2);
}

#[test]
fn fvs_on_c5() {
    let dir = TempDir::new().unwrap();
    let g = put(
        &dir,
        "c5.gr",
        "p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n",
    );
    let r = report(&["kernelize", s(&g), "--param", "fvs"]);
    assert!(r["k"].as_u64().unwrap() <= 4);
    assert_eq!(r["optimum"], 2);
    assert!(r["n_out"].is_u64() && r["m_out"].is_u64());
}

#[test]
fn chain_on_planted_instance() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("c.gr");
    ok(&[
        "gen",
        "chain-plus-vertices",
        "--n",
        "300",
        "--k",
        "3",
        "--seed",
        "5",
        "--out",
        s(&g),
    ]);
    let text = fs::read_to_string(&g).unwrap();
    let planted = text
        .lines()
        .find_map(|l| l.strip_prefix("c planted "))
        .unwrap()
        .to_string();
    let r = report(&["kernelize", s(&g), "--param", "chain", "--x", &planted]);
    assert_eq!(r["k"], 3);
    let bound = r["size_bound"].as_u64().unwrap() + r["boundary_slack"].as_u64().unwrap();
    assert!(r["n_out"].as_u64().unwrap() <= bound);
    let direct = ok(&["solve", s(&g)]);
    assert_eq!(direct, format!("optimum {}\n", r["optimum"]));
}

#[test]
fn kernel_solve_lift_verify() {
    let dir = TempDir::new().unwrap();
    let cases: [(&str, &str, &[&str]); 4] = [
        ("forest-plus-edges", "fes", &[]),
        ("forest-plus-vertices", "fvs", &["--force"]),
        ("gnm", "fvs", &[]),
        ("chain-plus-vertices", "chain", &[]),
    ];
    for (family, param, extra) in cases {
        for seed in 0..5 {
            let seed = seed.to_string();
            let g = dir.path().join("g.gr");
            let k = dir.path().join("k.gr");
            let t = dir.path().join("k.trace");
            let m = dir.path().join("g.m");
            ok(&[
                "gen",
                family,
                "--n",
                "120",
                "--k",
                "3",
                "--m",
                "130",
                "--seed",
                &seed,
                "--out",
                s(&g),
            ]);
            let mut args = vec![
                "kernelize",
                s(&g),
                "--param",
                param,
                "--emit",
                s(&k),
                "--trace",
                s(&t),
            ];
            args.extend_from_slice(extra);
            ok(&args);
            let lifted = ok(&[
                "solve",
                s(&g),
                "--kernel",
                s(&k),
                "--trace",
                s(&t),
                "--out",
                s(&m),
            ]);
            assert_eq!(lifted, ok(&["solve", s(&g)]), "{family} {seed}");
            let size = lifted.trim().strip_prefix("optimum ").unwrap();
            ok(&["verify", s(&g), s(&m), "--expect", size]);
        }
    }
}

#[test]
fn kernelize_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.gr");
    ok(&[
        "gen",
        "forest-plus-vertices",
        "--n",
        "200",
        "--k",
        "4",
        "--seed",
        "3",
        "--out",
        s(&g),
    ]);
    let mut outs = Vec::new();
    for i in 0..2 {
        let k = dir.path().join(format!("k{i}.gr"));
        let t = dir.path().join(format!("t{i}.bin"));
        let mut r = report(&[
            "kernelize",
            s(&g),
            "--param",
            "fvs",
            "--emit",
            s(&k),
            "--trace",
            s(&t),
        ]);
        r.as_object_mut().unwrap().remove("elapsed_ms");
        outs.push((r, fs::read(&k).unwrap(), fs::read(&t).unwrap()));
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn target_mode_reports_verdict() {
    let dir = TempDir::new().unwrap();
    let g = put(&dir, "p.gr", "p edge 4 3\nt 2\ne 1 2\ne 2 3\ne 3 4\n");
    let r = report(&["kernelize", s(&g), "--param", "fes"]);
    assert_eq!(r["decided_yes"], true);
    assert!(r.get("optimum").is_none());
    let r = report(&["kernelize", s(&g), "--param", "fes", "--target", "3"]);
    assert_eq!(r["decided_yes"], false);
    assert_eq!(r["kernel_optimum"], 0);
}

#[test]
fn bench_prints_csv() {
    let out = ok(&[
        "bench",
        "--family",
        "forest-plus-edges",
        "--param",
        "fes",
        "--n",
        "100,200",
        "--k",
        "2",
        "--runs",
        "1",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,m,k,n_out,m_out,millis");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("100,"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let loop_ = put(&dir, "l.gr", "p edge 2 1\ne 1 1\n");
    let out = run(&["solve", s(&loop_)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let tri = put(&dir, "t.gr", "p edge 3 3\ne 1 2\ne 2 3\ne 3 1\n");
    assert_eq!(code(&["kernelize", s(&tri), "--param", "chain"]), 1);
    assert_eq!(code(&["gen", "no-such-family", "--n", "5"]), 1);
    assert_eq!(code(&["solve", "/nonexistent/file.gr"]), 1);
    assert_eq!(code(&["--help"]), 0);
    let bad = put(&dir, "bad.m", "s 1\nm 1 3\n");
    assert_eq!(code(&["verify", s(&tri), s(&bad)]), 0);
    let nonedge = put(&dir, "p.gr", "p edge 3 1\ne 1 2\n");
    assert_eq!(code(&["verify", s(&nonedge), s(&bad)]), 3);
}

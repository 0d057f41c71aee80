use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use leechkit_core::fixtures;
use leechkit_core::serial::{self, GroupDocument, LatticeDocument};

fn leechkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leechkit")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_gram(dir: &Path, name: &str, gram: &[&[i64]]) -> String {
    let rows: Vec<Vec<String>> = gram.iter().map(|r| r.iter().map(i64::to_string).collect()).collect();
    let n = gram.len();
    let basis: Vec<Vec<String>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { "1" } else { "0" }.to_string()).collect()).collect();
    let doc = LatticeDocument { label: name.into(), ambient_gram: rows, basis };
    let path = dir.join(format!("{name}.json"));
    fs::write(&path, serial::to_json(&doc)).unwrap();
    path.display().to_string()
}

fn coordinates(values: &[i64]) -> String {
    let coords: Vec<String> = values.iter().map(|v| format!("\"{v}\"")).collect();
    format!("{{\"coordinates\": [{}]}}", coords.join(", "))
}

#[test]
fn build_is_deterministic_and_summarized() {
    let dir = tempfile::tempdir().unwrap();
    for target in ["borcherds", "leech"] {
        let a = dir.path().join(format!("{target}-a.json"));
        let b = dir.path().join(format!("{target}-b.json"));
        let first = leechkit(&["build", target, "--out", a.to_str().unwrap()]);
        let second = leechkit(&["build", target, "--out", b.to_str().unwrap()]);
        assert_eq!(code(&first), 0, "{}", stderr(&first));
        assert_eq!(code(&second), 0);
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
        assert_eq!(fs::read(a.with_extension("txt")).unwrap(), first.stdout);
    }
    let borcherds = stdout(&leechkit(&["build", "borcherds", "--out", dir.path().join("m.json").to_str().unwrap()]));
    assert!(borcherds.contains("rank: 26") && borcherds.contains("signature: (25, 1)"), "{borcherds}");
    assert!(borcherds.contains("det: -1") && borcherds.contains("parity: even"));
    let leech = fs::read_to_string(dir.path().join("leech-a.txt")).unwrap();
    assert!(leech.contains("rank: 24") && leech.contains("det: 1") && leech.contains("min norm: 4"), "{leech}");
}

#[test]
fn discriminant_groups_of_small_lattices() {
    let dir = tempfile::tempdir().unwrap();
    let a1 = stdout(&leechkit(&["disc", &write_gram(dir.path(), "A1", &[&[2]])]));
    assert!(a1.contains("group: Z/2") && a1.contains("q: 1/2"), "{a1}");
    let u = stdout(&leechkit(&["disc", &write_gram(dir.path(), "U", &[&[0, 1], &[1, 0]])]));
    assert!(u.contains("group: trivial"), "{u}");
    let e8_2: Vec<Vec<i64>> = leechkit_core::lattice::standard::e8_2()
        .gram()
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect())
        .collect();
    let rows: Vec<&[i64]> = e8_2.iter().map(Vec::as_slice).collect();
    let out = stdout(&leechkit(&["disc", &write_gram(dir.path(), "E8_2", &rows)]));
    assert!(out.contains("group: (Z/2)^8") && out.contains("length: 8") && out.contains("order: 256"), "{out}");
}

#[test]
fn weyl_check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let mut w0: Vec<i64> = (0..25).collect();
    w0.push(70);
    let good = dir.path().join("w0.json");
    fs::write(&good, coordinates(&w0)).unwrap();
    let out = leechkit(&["weyl", "check", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("weyl: true"));

    w0[25] = 25;
    let bad = dir.path().join("w25.json");
    fs::write(&bad, coordinates(&w0)).unwrap();
    let out = leechkit(&["weyl", "check", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("norm 4275"), "{}", stdout(&out));

    let short = dir.path().join("short.json");
    fs::write(&short, coordinates(&[1, 2, 3])).unwrap();
    assert_eq!(code(&leechkit(&["weyl", "check", short.to_str().unwrap()])), 3);
}

#[test]
fn malformed_input_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&leechkit(&["disc", dir.path().join("missing.json").to_str().unwrap()])), 3);
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{\"label\": 1}").unwrap();
    assert_eq!(code(&leechkit(&["disc", junk.to_str().unwrap()])), 3);
    assert_eq!(code(&leechkit(&["no-such-command"])), 3);
    let out = leechkit(&["pipeline", "run", "--fixture", "nope", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 3);
}

#[test]
fn conway_sample_passes() {
    let out = leechkit(&["conway", "sample", "--samples", "4", "--seed", "5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("passed 4/4"));
}

#[test]
fn pipeline_fixtures_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |fixture: &str, bound: &str, sub: &str| {
        let out = dir.path().join(sub);
        let o = leechkit(&["pipeline", "run", "--fixture", fixture, "--bound", bound, "--out", out.to_str().unwrap()]);
        (o, out)
    };
    let (whole, out) = run("leech-itself", "8", "whole");
    assert_eq!(code(&whole), 0, "{}", stderr(&whole));
    assert!(stdout(&whole).contains("outcome: valid"), "{}", stdout(&whole));
    for name in ["S.json", "certificate.json", "embedding.json", "manifest.json"] {
        assert!(out.join(name).exists(), "{name}");
    }

    let (rank1, _) = run("rank1-min", "8", "rank1");
    assert_eq!(code(&rank1), 0, "{}", stderr(&rank1));
    assert!(stderr(&rank1).contains("warning:") && stderr(&rank1).contains("not a Leech pair"));

    let (exhausted, out) = run("rank1-min", "0", "exhausted");
    assert_eq!(code(&exhausted), 2, "{}", stdout(&exhausted));
    assert!(!out.join("embedding.json").exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let dirs = [dir.path().join("a"), dir.path().join("b")];
    for d in &dirs {
        let o = leechkit(&["pipeline", "run", "--fixture", "rank1-min", "--seed", "3", "--out", d.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    let mut names: Vec<_> = fs::read_dir(&dirs[0]).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.iter().any(|n| n == "manifest.json"));
    for n in &names {
        assert_eq!(fs::read(dirs[0].join(n)).unwrap(), fs::read(dirs[1].join(n)).unwrap(), "{n:?}");
    }
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(dirs[0].join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["command"], "pipeline run --fixture rank1-min --bound 8 --seed 3");
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), names.len() - 1);
}

#[test]
fn pair_verify_and_pipeline_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let fx = fixtures::fixture("rank1-min", 0).unwrap();
    let s = dir.path().join("S.json");
    let g = dir.path().join("G.json");
    fs::write(&s, serial::to_json(&LatticeDocument::from_lattice(&fx.s))).unwrap();
    fs::write(&g, serial::to_json(&GroupDocument::from_action(&fx.group))).unwrap();
    let (s, g) = (s.to_str().unwrap(), g.to_str().unwrap());

    // −1 on a norm 4 line acts nontrivially on its discriminant group Z/4
    let verify = leechkit(&["pair", "verify", s, g]);
    assert_eq!(code(&verify), 1, "{}", stderr(&verify));
    let report: serde_json::Value = serde_json::from_slice(&verify.stdout).unwrap();
    assert_eq!(report["report"]["verdict"], false);

    let out = dir.path().join("run");
    let o = leechkit(&["pipeline", "run", "--input", s, g, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 2);
}

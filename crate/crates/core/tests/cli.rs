use std::path::Path;
use std::process::Command;

use serde_json::Value;

use excisive::cli::{FunctorKind, FunctorSpecFile};
use excisive::exactlin::RingSpec;
use excisive::functorcalc::constant_functor;

fn run(args: &[&str], out: Option<&Path>) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_excisive"));
    cmd.args(args);
    if let Some(p) = out {
        cmd.arg("--out").arg(p);
    }
    let o = cmd.output().expect("binary runs");
    (o.status.code().expect("exit code"), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn limit_on_p12_reports_zero_rank_iso() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "p.json", r#"{"ring": "Q", "N": 4, "kind": "P", "n": 1, "d": 2}"#);
    let out = dir.path().join("r.json");
    let (code, _) = run(&["limit", &spec, "--ell", "4"], Some(&out));
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["limit_rank"], 0);
    assert_eq!(v["result"]["iso"], true);
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "c.json", r#"{"ring": "Fp:7", "N": 3, "kind": "constant", "rank": 2}"#);
    assert_eq!(run(&["validate", &good], None).0, 0);
    let shape = write(
        dir.path(),
        "s.json",
        r#"{"ring": "Q", "N": 1, "kind": "explicit", "ranks": [1, 1],
            "actions": [{"images": [0], "target": 0, "matrix": [["1", "0"]]}]}"#,
    );
    let o = Command::new(env!("CARGO_BIN_EXE_excisive")).args(["validate", &shape]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("actions[0].matrix[0]"));
    // Scaling the transposition by 2 breaks G(t)G(t) = 1.
    let mut spec = FunctorSpecFile::from_functor(&constant_functor(RingSpec::Rationals, 2, 1));
    if let FunctorKind::Explicit { actions, .. } = &mut spec.kind {
        let t = actions.iter_mut().find(|(p, _)| p.images() == [2, 1]).expect("transposition");
        t.1 = t.1.scale(2);
    }
    let broken = write(dir.path(), "b.json", &spec.to_canonical_string());
    let (code, stdout) = run(&["validate", &broken], None);
    assert_eq!(code, 1, "{stdout}");
    assert!(stdout.contains("first violation"));
}

#[test]
fn counterexample_and_charp() {
    let (code, stdout) = run(&["counterexample", "--ell", "3"], None);
    assert_eq!(code, 0);
    assert!(stdout.contains("verdict: comparison not injective"));
    let (code, stdout) = run(&["charp", "--p", "5"], None);
    assert_eq!(code, 0);
    assert!(stdout.contains("f(x,y,z) = "));
    assert!(stdout.contains("f(x,x,x) = 2x^5"));
}

#[test]
fn sympoly_verdicts_drive_exit_codes() {
    assert_eq!(run(&["sympoly", "--ring", "Q", "--d", "6"], None).0, 0);
    assert_eq!(run(&["sympoly", "--ring", "Fp:5", "--d", "5"], None).0, 1);
}

#[test]
fn json_results_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    run(&["sweep", "--seed", "5", "--count", "6", "--N", "3", "--degree", "1", "--jobs", "1"], Some(&a));
    run(&["sweep", "--seed", "5", "--count", "6", "--N", "3", "--degree", "1", "--jobs", "4"], Some(&b));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn random_spec_feeds_the_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("g.json");
    let (code, _) =
        run(&["random", "--seed", "9", "--N", "4", "--degree", "2", "--spec-out", spec.to_str().unwrap()], None);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&spec).unwrap();
    assert_eq!(FunctorSpecFile::parse(&text).unwrap().to_canonical_string(), text);
    let s = spec.to_str().unwrap();
    for args in [
        vec!["validate", s],
        vec!["degree", s],
        vec!["prim", s],
        vec!["limit", s, "--ell", "4"],
        vec!["excisive", s, "--n", "2"],
        vec!["paring", s, "--spec", "1,1,1", "--height", "2"],
        vec!["reconstruct", s, "--n", "3"],
        vec!["derived", s, "--ell", "3"],
    ] {
        let (code, stdout) = run(&args, None);
        assert_eq!(code, 0, "{args:?}: {stdout}");
    }
    assert_eq!(run(&["excisive", s, "--n", "0"], None).0, 1);
}

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fks(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fks"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("spawn fks");
    if let Some(text) = stdin {
        child
            .stdin
            .take()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn example(name: &str) -> String {
    let o = fks(&["examples", name], None, &[]);
    assert_eq!(o.status.code(), Some(0));
    stdout(&o)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fks-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn classify_catalog() {
    let cases = [
        ("TORUS", "torus", 0),
        ("HYPER2", "torus-quotient(order 2)", 0),
        ("HYPER6", "torus-quotient(order 6)", 0),
        (
            "KODAIRA",
            "rejected((d): extension class has infinite order)",
            1,
        ),
        (
            "DIAG-FAIL",
            "rejected((c): no invariant complex structure on the fiber)",
            1,
        ),
    ];
    for (name, verdict, code) in cases {
        let o = fks(&["classify", "-"], Some(&example(name)), &[]);
        assert_eq!(stdout(&o).trim(), verdict, "{name}");
        assert_eq!(o.status.code(), Some(code), "{name}");
    }
}

#[test]
fn examples_round_trip_through_files() {
    let list = stdout(&fks(&["examples"], None, &[]));
    assert_eq!(list.lines().count(), 8);
    for name in list.lines() {
        let text = example(name);
        let path = scratch(&format!("{name}.fks"));
        std::fs::write(&path, &text).unwrap();
        let o = fks(&["validate", path.to_str().unwrap()], None, &[]);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["valid"], true, "{name}");
        assert_eq!(v["name"], name);
    }
}

#[test]
fn build_writes_json() {
    let input = scratch("h4.fks");
    std::fs::write(&input, example("HYPER4")).unwrap();
    let out = scratch("h4.json");
    let o = fks(
        &[
            "build",
            input.to_str().unwrap(),
            "--json",
            out.to_str().unwrap(),
        ],
        None,
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "torus-quotient(order 4)");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["accepted"], true);
    assert_eq!(v["model"]["invariants"]["b1"], 2);
    assert_eq!(
        v["model"]["torus_quotient"]["deck_group"]
            .as_array()
            .unwrap()
            .len(),
        4
    );
    assert_eq!(v["model"]["certificates"]["metric"]["exact"], true);
    assert_eq!(v["model"]["certificates"]["logs"][0]["approx"], true);
    let splitting = &v["model"]["certificates"]["splitting"];
    assert!(splitting.to_string().contains('/'), "{splitting}");
}

#[test]
fn rejected_build_names_first_failure() {
    let o = fks(&["build", "-"], Some(&example("KODAIRA")), &[]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rejection"]["condition"], "(d)");
    assert!(v["rejection"]["witness"].as_str().unwrap().contains("iota"));
}

#[test]
fn seed_metric_flag() {
    let seed = scratch("seed.txt");
    std::fs::write(&seed, "[[2,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]\n").unwrap();
    let o = fks(
        &["build", "-", "--seed-metric", seed.to_str().unwrap()],
        Some(&example("HYPER4")),
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["model"]["certificates"]["metric"]["entries"][0][0], "3");

    std::fs::write(&seed, "[[1,0],[0,1]]\n").unwrap();
    let o = fks(
        &["build", "-", "--seed-metric", seed.to_str().unwrap()],
        Some(&example("HYPER4")),
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn abelianize() {
    let o = fks(&["abelianize", "-"], Some(&example("HYPER2")), &[]);
    assert_eq!(stdout(&o), "b1 = 2\ntorsion = [2]\n");
}

#[test]
fn malformed_input_exits_2_with_position() {
    let o = fks(
        &["classify", "-"],
        Some("format = fks-1\nm = 1\nn = 1\nA1 = [[1,0],[0,1]]\nA2 = [[1,0],[0,?]]\n"),
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 5") && err.contains('?'), "{err}");
    assert_eq!(
        fks(&["classify", "/nonexistent/file"], None, &[])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(fks(&["examples", "NOPE"], None, &[]).status.code(), Some(2));
    assert_eq!(fks(&["frobnicate"], None, &[]).status.code(), Some(2));
}

#[test]
fn closure_cap_from_environment() {
    let o = fks(
        &["classify", "-"],
        Some(&example("HYPER6")),
        &[("FKS_CLOSURE_CAP", "3")],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(a)"));
    let o = fks(
        &["classify", "-"],
        Some(&example("HYPER6")),
        &[("FKS_CLOSURE_CAP", "zero")],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = fks(&["build", "-"], Some(&example("HYPER3")), &[]);
    let b = fks(&["build", "-"], Some(&example("HYPER3")), &[]);
    assert_eq!(a.stdout, b.stdout);
}

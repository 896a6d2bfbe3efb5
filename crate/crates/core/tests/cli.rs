use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hypsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypsurf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn save(dir: &Path, name: &str, out: &Output) -> String {
    assert_eq!(code(out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.join(name);
    fs::write(&path, &out.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn classify_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let meta = dir.path().join("m2.meta.json");
    let m2 = save(
        dir.path(),
        "m2.json",
        &hypsurf(&["block", "M", "--n", "2", "--meta", meta.to_str().unwrap()]),
    );
    let out = hypsurf(&["classify", "--surface", &m2, "--meta", meta.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["periodic"], 0);
    assert_eq!(rep["minimal"], 1);
    assert_eq!(rep["certified"], true);
    assert_eq!(rep["canonical"], "(M1.1)");

    let p3 = save(dir.path(), "p3.json", &hypsurf(&["block", "p", "--n", "3"]));
    let out = hypsurf(&["classify", "--surface", &p3, "--bound", "50"]);
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((rep["periodic"].as_u64(), rep["minimal"].as_u64()), (Some(1), Some(0)));
}

#[test]
fn assemble_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let d = save(
        dir.path(),
        "d.json",
        &hypsurf(&["diagram", "p-central", "--k", "4", "--p", "2", "--m", "0"]),
    );
    let meta = dir.path().join("a.meta.json");
    let s = save(
        dir.path(),
        "s.json",
        &hypsurf(&["assemble", "--diagram", &d, "--meta", meta.to_str().unwrap()]),
    );
    let out = hypsurf(&["classify", "--surface", &s, "--meta", meta.to_str().unwrap()]);
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["periodic"], 2);
    assert_eq!(rep["canonical"], "(P0.0(P2.0))");

    for (input, svg) in [(&d, "d.svg"), (&s, "s.svg")] {
        let path = dir.path().join(svg);
        let out = hypsurf(&["render", "--in", input, "--svg", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        let first = fs::read(&path).unwrap();
        hypsurf(&["render", "--in", input, "--svg", path.to_str().unwrap()]);
        assert_eq!(first, fs::read(&path).unwrap());
    }
}

#[test]
fn verify_theorem_writes_evidence() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypsurf(&[
        "verify-theorem",
        "--genus",
        "2",
        "--stratum",
        "single",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let ev: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("evidence.json")).unwrap()).unwrap();
    assert_eq!(ev["passed"], true);
    assert_eq!(ev["pairs"].as_array().unwrap().len(), 4);
    assert!(dir.path().join("g2_single_p1_m1_p-central.surface.svg").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "{ not json").unwrap();
    let garbage = garbage.to_str().unwrap();
    // A well-formed net that glues one edge twice.
    let twice = dir.path().join("twice.json");
    fs::write(
        &twice,
        r#"{"d":2,"polygons":[[{"x":{"a":"0","b":"0","d":2},"y":{"a":"0","b":"0","d":2}},
            {"x":{"a":"1","b":"0","d":2},"y":{"a":"0","b":"0","d":2}},
            {"x":{"a":"1","b":"0","d":2},"y":{"a":"1","b":"0","d":2}},
            {"x":{"a":"0","b":"0","d":2},"y":{"a":"1","b":"0","d":2}}]],
            "gluings":[[0,0,0,2],[0,0,0,2]],"marks":[]}"#,
    )
    .unwrap();
    let twice = twice.to_str().unwrap();
    let bad_diagram = dir.path().join("bad_diagram.json");
    fs::write(
        &bad_diagram,
        r#"{"vertices":[{"id":0,"kind":"minimal"}],"half_edges":[],"full_edges":[]}"#,
    )
    .unwrap();
    let bad_diagram = bad_diagram.to_str().unwrap();
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["block", "P", "--n", "2"], 0),
        (vec!["--help"], 0),
        (vec!["block", "Q", "--n", "2"], 2),
        (vec!["block", "P", "--n", "2", "--bogus"], 2),
        (vec!["block", "M", "--n", "2", "--alpha", "1/2"], 2),
        (vec!["block", "M", "--n", "2", "--alpha", "√"], 2),
        (vec!["diagram", "p-central", "--k", "1", "--p", "2", "--m", "0"], 1),
        (vec!["classify", "--surface", garbage], 2),
        (vec!["classify", "--surface", "/nonexistent/s.json"], 2),
        (vec!["classify", "--surface", twice], 1),
        (vec!["assemble", "--diagram", bad_diagram], 1),
        (vec!["verify-theorem", "--genus", "0", "--stratum", "double"], 2),
        (vec!["verify-theorem", "--genus", "1", "--stratum", "triple"], 2),
        (vec![], 2),
    ];
    for (args, expected) in cases {
        assert_eq!(code(&hypsurf(&args)), expected, "{args:?}");
    }
}

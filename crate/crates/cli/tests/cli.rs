use std::path::PathBuf;
use std::process::{Command, Output};

fn data(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(file)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circle-angles")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(file: &str) -> String {
    data(file).to_str().unwrap().to_string()
}

#[test]
fn info_on_m003() {
    let v = json(&run(&["info", &path("m003.json")]));
    assert_eq!(v["tetrahedra"], 2);
    assert_eq!(v["cusps"], 1);
    assert_eq!(v["edges"], 2);
    assert_eq!(v["dims"]["SA"], 3);
    assert_eq!(v["dims"]["SA0"], 1);
    assert_eq!(v["h2_rel"], 1);
    assert_eq!(v["h2_abs"], 0);
}

#[test]
fn info_on_figure_eight() {
    let v = json(&run(&["info", &path("m004.json")]));
    assert_eq!(v["tetrahedra"], 2);
    assert_eq!(v["h2_rel"], 1);
}

#[test]
fn components_on_m003() {
    let rel = json(&run(&["components", &path("m003.json"), "--relative"]));
    assert_eq!(rel["space"], "SA0");
    assert_eq!(rel["components"].as_array().unwrap().len(), 2);
    let abs = json(&run(&["components", &path("m003.json")]));
    assert_eq!(abs["components"].as_array().unwrap().len(), 1);
    assert_eq!(abs["components"][0]["dim"], 3);
}

#[test]
fn obstruct_m003_geometric_and_golden() {
    let v = json(&run(&["obstruct", &path("m003.json"), "--shapes", &path("m003.shapes.json")]));
    assert_eq!(v["class"]["class"], serde_json::json!([1]));
    assert_eq!(v["labelling"]["unipotent"], true);

    let dir = tempfile::tempdir().unwrap();
    let golden = dir.path().join("tau.json");
    let tau = (1.0 + 5f64.sqrt()) / 2.0;
    std::fs::write(&golden, format!("{{\"z\": [[{tau}, 0.0], [{tau}, 0.0]]}}")).unwrap();
    let v = json(&run(&["obstruct", &path("m003.json"), "--shapes", golden.to_str().unwrap()]));
    assert_eq!(v["class"]["class"], serde_json::json!([0]));
}

#[test]
fn flatten_m003() {
    let v = json(&run(&["flatten", &path("m003.json"), "--shapes", &path("m003.shapes.json")]));
    assert_eq!(v["verified_strong"], true);
    assert_eq!(v["flattening"]["f"].as_array().unwrap().len(), 6);
}

#[test]
fn empty_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let out = run(&["info", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn bad_residual_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"z\": [[0.5, 0.8], [0.5, 0.8]]}").unwrap();
    let out = run(&["obstruct", &path("m003.json"), "--shapes", bad.to_str().unwrap()]);
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("residual"));
}

#[test]
fn unknown_flag_is_rejected() {
    let out = run(&["info", &path("m003.json"), "--colour"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let out = run(&["components", &path("L6a4.json"), "--relative", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let x = run(&["obstruct", &path("m009.json"), "--shapes", &path("m009.shapes.json")]);
    let y = run(&["obstruct", &path("m009.json"), "--shapes", &path("m009.shapes.json")]);
    assert_eq!(x.stdout, y.stdout);
}

use serde_json::Value;
use std::path::PathBuf;
use tablealg_cli::run_with;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tablealg").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(out: &str) -> Value {
    serde_json::from_str(out).unwrap()
}

fn status(doc: &Value, name: &str) -> String {
    doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["status"]
        .as_str()
        .unwrap()
        .to_string()
}

#[test]
fn validate_z8s() {
    let (code, out, err) = run(&["validate", "--algebra", &data("z8s.json")]);
    assert_eq!(code, 0, "{err}");
    let doc = json(&out);
    assert_eq!(doc["verdict"], "pass");
    assert_eq!(status(&doc, "associativity"), "pass");
    assert!(err.starts_with("validate: pass"));
}

#[test]
fn validate_catches_a_perturbed_entry() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("z8s.json")).unwrap();
    let broken = text.replacen("[4, 4, 1, \"2\"]", "[4, 4, 1, \"3\"]", 1);
    assert_ne!(broken, text);
    let path = dir.path().join("broken.json");
    std::fs::write(&path, broken).unwrap();
    let (code, out, _) = run(&["validate", "--algebra", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["verdict"], "fail");
}

#[test]
fn wedge_then_recognize() {
    let dir = tempfile::tempdir().unwrap();
    let wedge = dir.path().join("wedge.json");
    let (code, out, err) = run(&[
        "wedge",
        "--left",
        &data("z4.json"),
        "--right",
        &data("z4h.json"),
        "--n",
        "h2",
        "--phi",
        &data("z4_to_z4h.hom"),
        "--out",
        wedge.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(status(&json(&out), "lemma-iso"), "pass");
    let (code, out, err) = run(&["recognize", "--algebra", wedge.to_str().unwrap(), "--k", "g2", "--d", "g"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(status(&json(&out), "reconstruction"), "pass");
}

#[test]
fn recognize_refuses_z4() {
    let (code, out, _) = run(&["recognize", "--algebra", &data("z4.json"), "--k", "g2", "--d", "g2"]);
    assert_eq!(code, 1);
    let doc = json(&out);
    let check = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "kplus-scalar-outside-d")
        .unwrap()
        .clone();
    assert_eq!(check["status"], "fail");
    assert_eq!(check["witness"], "g");
}

#[test]
fn dual_refuses_s3() {
    let (code, out, err) = run(&["dual", "--algebra", &data("s3.json")]);
    assert_eq!(code, 1);
    assert_eq!(status(&json(&out), "commutative"), "refused");
    assert!(err.contains("commutative"));
}

#[test]
fn dual_of_k3_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dual.json");
    let (code, out, _) = run(&["dual", "--algebra", &data("k3.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["table_algebra"], true);
    let dual = tablealg::io::parse_table_algebra(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(dual.dim(), 2);
}

#[test]
fn characters_are_exact_for_k3() {
    let (code, out, _) = run(&["characters", "--algebra", &data("k3.json")]);
    assert_eq!(code, 0);
    let doc = json(&out);
    assert_eq!(doc["result"]["exact"], true);
    assert_eq!(doc["result"]["values"], serde_json::json!([["1", "2"], ["1", "-1"]]));
}

#[test]
fn closed_subsets_and_quotient() {
    let (code, out, _) = run(&["closed-subsets", "--algebra", &data("z8s.json")]);
    assert_eq!(code, 0);
    let subsets = json(&out)["result"]["closed_subsets"].as_array().unwrap().len();
    assert_eq!(subsets, 4);
    let (code, out, _) = run(&["quotient", "--algebra", &data("z8s.json"), "--n", "c4"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["basis"].as_array().unwrap().len(), 4);
}

#[test]
fn hom_check() {
    let (code, out, _) = run(&[
        "hom-check",
        "--source",
        &data("z4.json"),
        "--target",
        &data("z4h.json"),
        "--phi",
        &data("z4_to_z4h.hom"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["kernel"], serde_json::json!(["1", "g2"]));
}

#[test]
fn scheme_commands() {
    let (code, out, _) = run(&["scheme-validate", "--scheme", &data("k3.scheme")]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["valencies"], serde_json::json!([1, 2]));
    let (code, _, _) = run(&["scheme-to-algebra", "--scheme", &data("z8s.scheme")]);
    assert_eq!(code, 0);
    let (code, out, _) = run(&[
        "scheme-wedge",
        "--base",
        &data("z4.scheme"),
        "--d",
        "1,r2",
        "--fiber",
        &data("z4.scheme"),
        "--psi",
        &data("psi_double.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["points"], 8);
}

#[test]
fn verify_suite_on_both_inputs() {
    let (code, out, err) = run(&["verify-suite", "--algebra", &data("z8s.json"), "--k", "c4", "--d", "c2"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(json(&out)["checks"].as_array().unwrap().len(), 7);
    let (code, out, err) = run(&[
        "verify-suite",
        "--base",
        &data("z4.scheme"),
        "--d",
        "1,r2",
        "--fiber",
        &data("z4.scheme"),
        "--psi",
        &data("psi_double.json"),
    ]);
    assert_eq!(code, 0, "{err}");
    let doc = json(&out);
    for name in [
        "lemma-kd",
        "lemma-iso",
        "corollary-wg1",
        "lemma-es",
        "lemma-tars",
        "theorem-main01",
        "corollary-dualwedge",
        "theorem-scheme-iso",
        "lemma-note",
        "theorem-quotient-scheme",
    ] {
        assert_eq!(status(&doc, name), "pass", "{name}");
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["characters", "--algebra", &data("z8s.json"), "--seed", "7"];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
}

#[test]
fn text_format() {
    let (code, out, _) = run(&["--format", "text", "scheme-validate", "--scheme", &data("k3.scheme")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("association scheme: PASS"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["validate"]).0, 2);
    assert_eq!(run(&["validate", "--algebra", "/nonexistent/a.json"]).0, 3);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"basis": ["1", "g"], "star": [0, 1], "lambda": [[0,0,5,"1"]]}"#).unwrap();
    let (code, out, _) = run(&["validate", "--algebra", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(json(&out)["checks"][0]["witness"].as_str().unwrap().contains("lambda entry 0"));
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn quadpic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadpic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn twin() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/twin.json").display().to_string()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = quadpic(&all);
    (serde_json::from_str(&stdout(&o)).expect("json output"), o.status.code().unwrap())
}

#[test]
fn phi_of_anisotropic_quadric_is_trivial() {
    let o = quadpic(&["phi", "--form", "(5,0)", "--ext", "base"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(0)[0]");
}

#[test]
fn phi_resolves_paths_outside_the_default_lattice() {
    let o = quadpic(&["--lattice-depth", "0", "phi", "--affine", "--form", "(0,5)", "--ext", "base/(6,0)/(3,0)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(2)[4]");
}

#[test]
fn inverse_check_passes_with_constant() {
    let o = quadpic(&["inverse-check", "--form", "(1,1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "pass, constant (2)[5]");
    let (v, code) = json(&["inverse-check", "--form", "(1,1)"]);
    assert_eq!(code, 0);
    assert_eq!(v["constant"], serde_json::json!({"x": 2, "y": 5}));
}

#[test]
fn basis_of_pfister_determinant() {
    let o = quadpic(&["basis", "--expr", "det (8,0)", "--maxr", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "r=3: -4"), "{}", stdout(&o));
    let (v, _) = json(&["basis", "--expr", "det (8,0)", "--maxr", "3"]);
    assert_eq!(v["coords"], serde_json::json!({"3": -4}));
}

#[test]
fn basis_needs_enough_degrees() {
    let o = quadpic(&["basis", "--expr", "det (16,0)", "--maxr", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn independence_certificate_and_refusal() {
    let (v, code) = json(&["independent", "--form", "(0,1)", "--form", "(0,2)", "--form", "(0,4)", "--form", "(0,8)"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "certified");
    let order: Vec<&str> = v["steps"].as_array().unwrap().iter().map(|s| s["form"].as_str().unwrap()).collect();
    assert_eq!(order, ["(0,8)", "(0,4)", "(0,2)", "(0,1)"]);

    let (v, code) = json(&["independent", "--form", "(0,2)", "--form", "(1,3)"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "refused");
    assert_eq!(v["refusals"][0]["reason"], "stably_birational");
}

#[test]
fn equivalence_verdicts_set_exit_code() {
    assert_eq!(quadpic(&["equiv", "--p", "(3,1)", "--q", "(1,3)"]).status.code(), Some(0));
    assert_eq!(quadpic(&["equiv", "--p", "(4,0)", "--q", "(2,2)"]).status.code(), Some(1));
}

#[test]
fn relations_verdicts() {
    let (v, code) = json(&["relations", "--lhs", "(3,0)", "--rhs", "(0,3)"]);
    assert_eq!((code, v["t_equivalent"].as_bool()), (0, Some(true)));
    let (v, code) = json(&["relations", "--lhs", "(4,0)", "--rhs", "(3,1)"]);
    assert_eq!((code, v["t_equivalent"].as_bool()), (1, Some(false)));
}

#[test]
fn decompose_json_round_trips() {
    let (v, code) = json(&["decompose", "--form", "(7,2)"]);
    assert_eq!(code, 0);
    let d: quadpic::Decomposition = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(d.rank(), 8);
    assert_eq!(serde_json::to_value(&d).unwrap(), v);
}

#[test]
fn det_json_round_trips() {
    let (v, code) = json(&["det", "--form", "(3,2)"]);
    assert_eq!(code, 0);
    let fp: quadpic::PhiFingerprint = serde_json::from_value(v["fingerprint"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&fp).unwrap(), v["fingerprint"]);
    let nf: quadpic::picgroup::NormalForm = serde_json::from_value(v["normal_form"].clone()).unwrap();
    assert!(nf.classes.is_some());
}

#[test]
fn explicit_flag_gives_same_determinant() {
    let a = quadpic(&["--json", "det", "--form", "(2,2)"]);
    let b = quadpic(&["--json", "det", "--form", "(2,2)", "--flag", "(2,2);(2,1);(2,0);(1,0)"]);
    let (a, b): (Value, Value) =
        (serde_json::from_str(&stdout(&a)).unwrap(), serde_json::from_str(&stdout(&b)).unwrap());
    assert_eq!(a["normal_form"], b["normal_form"]);
    assert_eq!(a["fingerprint"], b["fingerprint"]);
    let bad = quadpic(&["det", "--form", "(2,2)", "--flag", "(2,2);(1,0)"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "det", "--form", "(4,3)", "--fingerprint"];
    assert_eq!(quadpic(&args).stdout, quadpic(&args).stdout);
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(quadpic(&["phi", "--form", "(5,x)"]).status.code(), Some(2));
    assert_eq!(quadpic(&["phi", "--form", "(5,0)", "--ext", "nowhere"]).status.code(), Some(2));
    assert_eq!(quadpic(&["basis", "--expr", "det (8,0) *"]).status.code(), Some(2));
    assert_eq!(quadpic(&["--model", "/no/such/file", "validate"]).status.code(), Some(2));
    assert_eq!(quadpic(&["frobnicate"]).status.code(), Some(2));
    let o = quadpic(&["basis", "--expr", "e (1,0) * foo"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 11"));
}

#[test]
fn model_errors_name_the_location() {
    let dir = std::env::temp_dir().join(format!("quadpic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad_json = dir.join("bad.json");
    std::fs::write(&bad_json, "{\n  \"forms\": [\n    {\"id\": \"a\" \"dim\": 2}\n  ]\n}\n").unwrap();
    let o = quadpic(&["--model", bad_json.to_str().unwrap(), "validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"), "{}", String::from_utf8_lossy(&o.stderr));

    let bad_key = dir.join("key.json");
    let text = std::fs::read_to_string(twin())
        .unwrap()
        .replace("\"function_field_of\": \"a\"", "\"function_field_of\": \"zz\"");
    std::fs::write(&bad_key, text).unwrap();
    let o = quadpic(&["--model", bad_key.to_str().unwrap(), "validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("extensions[ka].function_field_of"));
}

#[test]
fn declared_model_commands() {
    let m = twin();
    assert_eq!(quadpic(&["--model", &m, "equiv", "--p", "a", "--q", "b"]).status.code(), Some(0));
    assert_eq!(quadpic(&["--model", &m, "equiv", "--p", "a", "--q", "c"]).status.code(), Some(1));
    let (v, code) = json(&["--model", &m, "decompose", "--form", "a"]);
    assert_eq!(code, 0);
    assert_eq!(v["summands"][0]["kind"], "binary(1)");
    // Real literals mean nothing to a declared model.
    assert_eq!(quadpic(&["--model", &m, "e", "--form", "(1,0)"]).status.code(), Some(2));
    // The basis is a real-backend notion.
    assert_eq!(quadpic(&["--model", &m, "basis", "--expr", "e a"]).status.code(), Some(2));
}

#[test]
fn validate_catches_seeded_mutants() {
    let (v, code) = json(&["--model", &twin(), "validate", "--mutants", "40", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["mutants"]["caught"], 40);
    let (v, code) = json(&["--lattice-depth", "2", "validate", "--max-dim", "6", "--mutants", "20"]);
    assert_eq!(code, 0);
    assert_eq!(v["valid"], true);
    assert_eq!(v["mutants"]["caught"], v["mutants"]["tried"]);
}

#[test]
fn invalid_model_exits_1() {
    let dir = std::env::temp_dir().join(format!("quadpic-cli-inv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("inv.json");
    let text = std::fs::read_to_string(twin()).unwrap().replace(
        "{\"form\": \"c\", \"extension\": \"kc\", \"index\": 1}",
        "{\"form\": \"c\", \"extension\": \"kc\", \"index\": 0}",
    );
    std::fs::write(&path, text).unwrap();
    let (v, code) = json(&["--model", path.to_str().unwrap(), "validate"]);
    assert_eq!(code, 1);
    assert_eq!(v["violations"][0]["kind"], "self_isotropy");
}

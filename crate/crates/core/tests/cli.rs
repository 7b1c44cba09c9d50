mod common;

use std::path::PathBuf;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

use common::{data, data_dir};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cosettree"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn path(name: &str) -> String {
    data(name).display().to_string()
}

fn schema(name: &str) -> JSONSchema {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schemas")
        .join(name);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    JSONSchema::compile(&v).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn assert_valid(schema_name: &str, v: &Value) {
    let s = schema(schema_name);
    let msgs: Vec<String> = match s.validate(v) {
        Ok(()) => return,
        Err(errors) => errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect(),
    };
    panic!("{schema_name}: {msgs:#?}\n{v:#}");
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn invalid(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(2), "{args:?} should be rejected");
    assert!(out.stdout.is_empty(), "{args:?} wrote a report");
    String::from_utf8(out.stderr).unwrap()
}

fn corpus(prefix: &str) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(data_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with(prefix))
        .collect();
    names.sort();
    names
}

const SPECS: [&str; 12] = [
    "zq2.json",
    "z_omega.json",
    "z2_finsup_omega.json",
    "all_quasicyclic.json",
    "torsion_prefix.json",
    "rational_prefix.json",
    "rational_prefix_finite.json",
    "finsup_prefix.json",
    "hinf.json",
    "finite_filtration.json",
    "integer_filtration.json",
    "finsup3_filtration.json",
];

#[test]
fn input_files_match_their_schemas() {
    for name in SPECS {
        let v: Value = serde_json::from_str(&common::read_data(name)).unwrap();
        assert_valid("spec.schema.json", &v);
    }
    for name in corpus("tree_") {
        let v: Value = serde_json::from_str(&common::read_data(&name)).unwrap();
        assert_valid("tree.schema.json", &v);
    }
}

#[test]
fn classify_reports() {
    for name in SPECS {
        let v = ok_json(&["classify", &path(name)]);
        assert_valid("classify.schema.json", &v);
        assert_eq!(
            v["tame"],
            v["obstructions"].as_array().unwrap().is_empty(),
            "{name}"
        );
    }
    let v = ok_json(&["classify", &path("z_omega.json")]);
    assert_eq!(v["obstructions"][0]["kind"], "z_omega");
    let v = ok_json(&["classify", &path("zq2.json")]);
    assert_eq!(v["tier"], "all_p_compact");
    assert_eq!(v["group_tree_bound"], "w");
    assert_eq!(v["coset_tree_bound"], "w*2");
    assert_eq!(v["complexity_bound"], "(E0^w)^+");
}

#[test]
fn classify_report_spec_reads_back() {
    let v = ok_json(&["classify", &path("hinf.json")]);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("spec.json");
    std::fs::write(&p, v["spec"].to_string()).unwrap();
    let again = ok_json(&["classify", p.to_str().unwrap()]);
    assert_eq!(again, v);
}

#[test]
fn tree_reports() {
    for name in corpus("tree_") {
        let p = path(&name);
        for mode in ["closed", "open"] {
            let v = ok_json(&["--mode", mode, "analyze-tree", &p]);
            assert_valid("analyze.schema.json", &v);
            assert_eq!(v["mode"], mode);
            let d = ok_json(&["--mode", mode, "derivative", "--steps", "2", &p]);
            assert_valid("tree.schema.json", &d);
        }
        let out = run(&["gamma", &p]);
        match out.status.code() {
            Some(0) => {
                let g: Value = serde_json::from_slice(&out.stdout).unwrap();
                assert_valid("tree.schema.json", &g);
                let again = run(&["analyze-tree", &p]);
                let a: Value = serde_json::from_slice(&again.stdout).unwrap();
                assert_eq!(a["is_coset_tree"], true, "{name}");
            }
            Some(2) => {
                let a = ok_json(&["analyze-tree", &p]);
                assert_eq!(a["is_coset_tree"], false, "{name}");
            }
            other => panic!("gamma {name}: {other:?}"),
        }
    }
}

#[test]
fn derivative_output_is_a_tree_file() {
    let dir = tempfile::tempdir().unwrap();
    let first = ok_json(&["derivative", &path("tree_two_level.json")]);
    let p = dir.path().join("d1.json");
    std::fs::write(&p, first.to_string()).unwrap();
    let second = ok_json(&["derivative", p.to_str().unwrap()]);
    let both = ok_json(&["derivative", "--steps", "2", &path("tree_two_level.json")]);
    assert_eq!(second["nodes"], both["nodes"]);
    assert_eq!(both["fixpoint_reached"], true);
}

#[test]
fn orbit_and_phi() {
    let (a, b) = (path("tree_mixed.json"), path("tree_mixed_shifted.json"));
    let v = ok_json(&["orbit", &a, &b]);
    assert_valid("orbit.schema.json", &v);
    assert_eq!(v["equivalent_at_depth"], true);
    let back = ok_json(&["orbit", &b, &a]);
    assert_eq!(back["equivalent_at_depth"], true);
    let p = ok_json(&["phi", &a, &b]);
    assert_valid("tree.schema.json", &p);
    let other = ok_json(&["orbit", &a, &path("tree_mixed_other.json")]);
    assert_valid("orbit.schema.json", &other);
    assert_eq!(other["equivalent_at_depth"], false);
    assert!(other["translator"].is_null());
}

#[test]
fn witness_reports() {
    let v = ok_json(&["witness", "--p", "2", "--dim", "3", "--depth", "4"]);
    assert_valid("witness.schema.json", &v);
    assert_valid("tree.schema.json", &v["tree"]);
    assert_eq!(v["root_rank"], "3");
    let v = ok_json(&[
        "witness",
        "--p",
        "3",
        "--dim",
        "2",
        "--depth",
        "3",
        "--profile",
        &path("profile_d2.json"),
    ]);
    assert_valid("witness.schema.json", &v);
    let err = invalid(&["witness", "--p", "4", "--dim", "2", "--depth", "3"]);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn plan_reports() {
    for name in [
        "zq2.json",
        "finsup_prefix.json",
        "hinf.json",
        "all_quasicyclic.json",
    ] {
        let v = ok_json(&["embed-plan", &path(name), "--horizon", "6"]);
        assert_valid("plan.schema.json", &v);
        let n: Vec<u64> = serde_json::from_value(v["n_caps"].clone()).unwrap();
        let m: Vec<u64> = serde_json::from_value(v["m_caps"].clone()).unwrap();
        assert_eq!(n.len(), 8);
        for i in 0..=6 {
            assert_eq!(n[i + 1], n[i] + m[i] + 1, "{name}");
        }
    }
    let err = invalid(&["embed-plan", &path("z_omega.json")]);
    assert!(err.contains("tame"), "{err}");
    invalid(&["embed-plan", &path("zq2.json"), "--horizon", "1"]);
}

#[test]
fn hinf_reports() {
    for n in 0..5 {
        let v = ok_json(&["hinf", &n.to_string()]);
        assert_valid("hinf.schema.json", &v);
        assert_eq!(v["torsion"], n > 0);
    }
}

#[test]
fn invalid_input_exits_with_two() {
    let err = invalid(&["classify", &path("bad_spec.json")]);
    assert!(err.starts_with("error: "), "{err}");
    assert!(err.contains("bad_spec.json"), "{err}");
    let err = invalid(&["analyze-tree", &path("bad_tree_parent.json")]);
    assert!(err.contains("nodes."), "{err}");
    let err = invalid(&["classify", "/nonexistent/spec.json"]);
    assert!(err.contains("/nonexistent/spec.json"), "{err}");
    invalid(&["no-such-command"]);
    invalid(&["--mode", "sideways", "hinf", "1"]);
    invalid(&["--cap", "4", "analyze-tree", &path("tree_mixed.json")]);
}

#[test]
fn malformed_json_is_located() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{\"role\": \"product\",\n \"prefix\": [,]}").unwrap();
    let err = invalid(&["classify", p.to_str().unwrap()]);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn in_process_runner_matches_binary() {
    let args = ["cosettree", "classify", &path("zq2.json")];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cosettree::cli::run(args, &mut out, &mut err);
    assert_eq!(code, 0);
    assert!(err.is_empty());
    assert_eq!(out, run(&args[1..]).stdout);
}

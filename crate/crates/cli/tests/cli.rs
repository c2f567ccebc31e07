use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_string_lossy().into_owned()
}

fn locfin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locfin"))
        .args(args)
        .env_remove("LOCFIN_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Keys of every object appear in sorted order in the raw text.
fn keys_sorted(v: &Value) -> bool {
    match v {
        Value::Object(m) => {
            let keys: Vec<&String> = m.keys().collect();
            keys.windows(2).all(|w| w[0] < w[1]) && m.values().all(keys_sorted)
        }
        Value::Array(a) => a.iter().all(keys_sorted),
        _ => true,
    }
}

#[test]
fn gallery_list_names_every_entry() {
    let out = locfin(&["gallery", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let names: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["chainA", "discrete", "zchain", "zneg"]);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn frontier_on_negative_integers_is_refuted() {
    let out = locfin(&["frontier", "--category", "gallery:zneg", "--window", "-6..-1", "--object", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["verdict"]["verdict"], "Refuted");
    assert_eq!(v["verdict"]["witness"]["kind"], "growth");
}

#[test]
fn bare_chain_module_leaks() {
    let out = locfin(&["lift", "--to", "comodule", "--module", &data("n-chain-module.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["decision"]["decision"], "WindowLeak");
}

#[test]
fn declared_chain_module_lifts_neither_way() {
    for to in ["comodule", "contramodule"] {
        let out = locfin(&["lift", "--to", to, "--module", &data("n-chain-declared.json")]);
        assert_eq!(out.status.code(), Some(2), "{to}");
        assert_eq!(json(&out)["decision"]["decision"], "NotLiftable");
    }
}

#[test]
fn constant_module_on_negative_integers_is_a_flagged_contramodule() {
    let out = locfin(&["lift", "--to", "contramodule", "--module", &data("zneg-constant.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["decision"]["decision"], "Liftable");
    assert_eq!(v["flags"].as_array().unwrap().len(), 2);
    assert_eq!(v["contrafinite"]["verdict"], "Refuted");
}

#[test]
fn single_right_module_dualizes_to_a_contramodule() {
    let out = locfin(&["dualize", "--module", &data("zneg-single-right.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dual"]["side"], "left");
    assert!(v.get("dual_contramodule").is_some());
}

#[test]
fn bigmin_of_the_chain_module_is_everything() {
    let out = locfin(&["bigmin", "--module", &data("n-chain-declared.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for (_, span) in v["window"].as_object().unwrap() {
        assert_eq!(span.as_array().unwrap().len(), 1);
    }
}

#[test]
fn report_has_no_failing_claims() {
    let out = locfin(&["report"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["failing"], 0);
}

#[test]
fn outputs_are_byte_identical_and_sorted() {
    let cases: Vec<Vec<String>> = vec![
        vec!["analyze".into(), "--category".into(), "gallery:zneg:-4..-1".into()],
        vec!["coalgebra".into(), "--category".into(), "gallery:chainA:3".into()],
        vec!["exttest".into(), "--trials".into(), "10".into(), "--seed".into(), "5".into()],
        vec!["experiment".into(), "--samples".into(), "10".into()],
        vec!["validate".into(), "--category".into(), data("matrix-pair.json")],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (a, b) = (locfin(&args), locfin(&args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        let v = json(&a);
        assert!(keys_sorted(&v), "{args:?}");
        assert_eq!(v["schema_version"], 1);
    }
}

#[test]
fn seed_environment_variable_wins() {
    let run = |env: Option<&str>, seed: &str| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_locfin"));
        c.args(["exttest", "--trials", "5", "--seed", seed]);
        match env {
            Some(e) => c.env("LOCFIN_SEED", e),
            None => c.env_remove("LOCFIN_SEED"),
        };
        json(&c.output().unwrap())["report"]["seed"].clone()
    };
    assert_eq!(run(Some("11"), "1"), 11);
    assert_eq!(run(None, "1"), 1);
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(locfin(&["nonsense"]).status.code(), Some(64));
    assert_eq!(locfin(&["lift", "--module", "x.json"]).status.code(), Some(64));
    let out = locfin(&["lift", "--to", "comodule", "--module", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert_eq!(locfin(&["gallery", "instantiate", "nope", "3"]).status.code(), Some(1));
    assert_eq!(locfin(&["gallery", "instantiate", "zchain", "2..x"]).status.code(), Some(1));
    assert_eq!(locfin(&["--field", "4", "report"]).status.code(), Some(1));
}

#[test]
fn gallery_instantiate_matches_the_listing() {
    let out = locfin(&["gallery", "instantiate", "zchain", "[-2..2]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["category"]["objects"].as_array().unwrap().len(), 5);
    assert_eq!(v["valid"]["verdict"], "Certified");
}

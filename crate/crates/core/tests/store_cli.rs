use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use hfc::cli::run;
use hfc::sample::{random_signature, random_structure};
use hfc::store::{load_signature, load_structure, save_signature, save_structure};
use hfc::structure::{PredicateDecl, Signature};
use proptest::prelude::*;
use proptest::test_runner::FileFailurePersistence;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn corpus(file: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../corpus/oriented-graphs");
    p.push(file);
    p.to_string_lossy().into_owned()
}

fn scratch(name: &str, contents: &str) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

fn hfc(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hfc").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn decide(sentence: &str, extra: &[&str]) -> (i32, String, String) {
    let sig = corpus("signature.json");
    let forbidden = corpus("forbidden.json");
    let mut args = vec!["decide", "--signature", &sig, "--forbidden", &forbidden, "--sentence", sentence];
    args.extend_from_slice(extra);
    hfc(&args)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: Some(Box::new(FileFailurePersistence::WithSource("regressions"))),
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let sig = random_signature(&mut rng, 3, 3);
        prop_assert_eq!(&load_signature(&save_signature(&sig)).unwrap(), &*sig);
        let size = rng.gen_range(1..=4);
        let s = random_structure(&mut rng, &sig, size, 0.4);
        let text = save_structure(&s);
        let back = load_structure(&text, &sig).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(save_structure(&back), text);
    }
}

#[test]
fn signature_order_is_by_arity_then_file_order() {
    let text = r#"{"version": 1, "complete": true, "predicates": [
        {"name": "T", "arity": 3, "distinct": true},
        {"name": "E", "arity": 2, "distinct": true},
        {"name": "P", "arity": 1, "distinct": false},
        {"name": "A", "arity": 2, "distinct": false}]}"#;
    let sig = load_signature(text).unwrap();
    let names: Vec<&str> = sig.predicates().iter().map(|p| p.name.as_str()).collect();
    assert_eq!(names, ["P", "E", "A", "T"]);
    let expected = Signature::complete(vec![
        PredicateDecl::new("P", 1, false),
        PredicateDecl::new("E", 2, true),
        PredicateDecl::new("A", 2, false),
        PredicateDecl::new("T", 3, true),
    ])
    .unwrap();
    assert_eq!(Arc::new(sig), Arc::new(expected));
}

#[test]
fn decide_examples() {
    let (code, out, _) = decide("forall x y . E(x,y) -> !E(y,x)", &[]);
    assert_eq!((code, out.as_str()), (0, "YES\n"));
    let (code, out, _) = decide("forall x y . !E(x,y)", &[]);
    assert_eq!(code, 0);
    assert!(out.starts_with("NO\n"));
    assert!(out.contains(r#""E": [["x", "y"]]"#), "{out}");
}

#[test]
fn decide_input_errors() {
    let (code, _, err) = hfc(&["decide", "--signature", "/nonexistent/sig.json", "--plugin", "two-cycle", "--sentence", "forall x . !E(x,x)"]);
    assert_eq!(code, 2);
    assert!(err.contains("/nonexistent/sig.json"), "{err}");
    let (code, _, err) = decide("forall x y . E(x,y", &[]);
    assert_eq!(code, 2);
    assert!(err.contains("syntax"), "{err}");
    let (code, _, _) = decide("forall x . F(x)", &[]);
    assert_eq!(code, 2);
    let (code, _, _) = decide("forall x . exists y . E(x,y)", &[]);
    assert_eq!(code, 2);
    let (code, _, _) = hfc(&["decide", "--signature", &corpus("signature.json")]);
    assert_eq!(code, 2);
    let sig = corpus("signature.json");
    let (code, _, err) = hfc(&["decide", "--signature", &sig, "--plugin", "nonsense", "--sentence", "forall x . !E(x,x)"]);
    assert_eq!(code, 2);
    assert!(err.contains("nonsense"), "{err}");
}

#[test]
fn decide_limits() {
    let (code, _, err) = decide("forall x y z . E(x,y) -> E(y,z)", &["--max-vars", "2"]);
    assert_eq!(code, 3, "{err}");
    let incomplete = scratch(
        "incomplete.json",
        r#"{"version": 1, "complete": false, "predicates": [{"name": "E", "arity": 2, "distinct": true}]}"#,
    );
    let (code, _, err) = hfc(&[
        "decide", "--signature", &incomplete, "--plugin", "two-cycle", "--sentence", "forall x y z . E(x,y) -> E(y,z)",
    ]);
    assert_eq!(code, 3);
    assert!(err.contains("horizon"), "{err}");
}

#[test]
fn max_vars_from_environment() {
    let exe = env!("CARGO_BIN_EXE_hfc");
    let run_with = |bound: &str| {
        Command::new(exe)
            .args(["decide", "--signature", &corpus("signature.json"), "--plugin", "two-cycle"])
            .args(["--sentence", "forall x y z . E(x,y) & E(y,z) -> !E(z,x)"])
            .env("HFC_MAX_VARS", bound)
            .output()
            .unwrap()
    };
    assert_eq!(run_with("2").status.code(), Some(3));
    let ok = run_with("3");
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("NO\n"));
}

fn without_timings(report: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(report).unwrap();
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn json_reports_are_deterministic() {
    let a = decide("forall x y . !E(x,y)", &["--json", "--oracle-check"]);
    let b = decide("forall x y . !E(x,y)", &["--json", "--oracle-check"]);
    assert_eq!((a.0, b.0), (0, 0));
    assert_eq!(without_timings(&a.1), without_timings(&b.1));
    let v = without_timings(&a.1);
    assert_eq!(v["verdict"]["answer"], "NO");
    assert_eq!(v["verdict"]["witness"]["relations"]["E"], serde_json::json!([["x", "y"]]));
    assert_eq!(v["counts"]["diagrams"], 2);
    assert_eq!(v["oracle_check"]["agrees"], true);
    assert_eq!(v["verdict"]["trace"][0]["outcome"], "excluded");
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["inputs", "verdict", "counts", "oracle_check"]);
}

#[test]
fn oracle_check_is_silent_on_the_corpus() {
    let text = std::fs::read_to_string(corpus("sentences.txt")).unwrap();
    let mut count = 0;
    for line in text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let (code, out, err) = decide(line, &["--oracle-check"]);
        assert_eq!(code, 0, "{line}: {err}");
        assert!(out.starts_with("YES\n") || out.starts_with("NO\n"));
        count += 1;
    }
    assert!(count >= 5);
}

#[test]
fn translations() {
    let sig = corpus("signature.json");
    let (code, out, _) = hfc(&["axioms-to-forbidden", "--signature", &sig, "--axiom", "forall x y . !(E(x,y) & E(y,x))"]);
    assert_eq!(code, 0);
    let c2 = scratch("c2.json", &out);
    assert!(out.contains(r#""E": [["x", "y"], ["y", "x"]]"#), "{out}");

    let (code, axioms, _) = hfc(&["forbidden-to-axioms", "--signature", &sig, "--forbidden", &c2]);
    assert_eq!(code, 0);
    assert_eq!(axioms, "forall x y . !((x != y) & E(x,y) & E(y,x))\n");
    let file = scratch("axioms.txt", &format!("# generated\n\n{axioms}"));
    let (code, again, _) = hfc(&["axioms-to-forbidden", "--signature", &sig, "--axioms-file", &file]);
    assert_eq!(code, 0);
    assert_eq!(again, out);

    let empty = scratch("empty.json", r#"{"version": 1, "structures": []}"#);
    let (code, out, _) = hfc(&["forbidden-to-axioms", "--signature", &sig, "--forbidden", &empty]);
    assert_eq!((code, out.as_str()), (0, ""));

    let plugin = scratch("plugin.json", r#"{"version": 1, "plugin": "two-cycle"}"#);
    let (code, _, _) = hfc(&["forbidden-to-axioms", "--signature", &sig, "--forbidden", &plugin]);
    assert_eq!(code, 2);
}

#[test]
fn minimize_and_membership() {
    let sig = corpus("signature.json");
    let both = scratch(
        "c2-s3.json",
        r#"{"version": 1, "structures": [
            {"version": 1, "universe": ["p", "q", "r"], "relations": {"E": [["p", "q"], ["q", "p"], ["q", "r"]]}},
            {"version": 1, "universe": ["a", "b"], "relations": {"E": [["a", "b"], ["b", "a"]]}}]}"#,
    );
    let (code, out, _) = hfc(&["minimize", "--signature", &sig, "--forbidden", &both]);
    assert_eq!(code, 0);
    assert_eq!(out, std::fs::read_to_string(corpus("forbidden.json")).unwrap());

    let copy = scratch("rewrite.json", &std::fs::read_to_string(&both).unwrap());
    let (code, out, _) = hfc(&["minimize", "--signature", &sig, "--forbidden", &copy, "--in-place"]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert!(std::fs::read_to_string(&copy).unwrap().contains(r#"["a", "b"]"#));
    assert!(!std::fs::read_to_string(&copy).unwrap().contains(r#""p""#));

    let t3 = scratch(
        "t3.json",
        r#"{"version": 1, "universe": ["1", "2", "3"], "relations": {"E": [["1", "2"], ["2", "3"], ["1", "3"]]}}"#,
    );
    let forbidden = corpus("forbidden.json");
    let (code, out, _) = hfc(&["check-member", "--signature", &sig, "--forbidden", &forbidden, "--structure", &t3]);
    assert_eq!((code, out.as_str()), (0, "in-K\n"));
    let bad = scratch(
        "bad.json",
        r#"{"version": 1, "universe": ["1", "2", "3"], "relations": {"E": [["1", "2"], ["3", "2"], ["2", "3"]]}}"#,
    );
    let (code, out, _) = hfc(&["check-member", "--signature", &sig, "--forbidden", &forbidden, "--structure", &bad]);
    assert_eq!(code, 0);
    assert_eq!(out, "not-in-K\nforbidden: ({a,b}, E={(a,b),(b,a)})\nembedding: a->2, b->3\n");
}

#[test]
fn enumerate_members() {
    let sig = corpus("signature.json");
    let (code, out, _) = hfc(&["enumerate", "--signature", &sig, "--plugin", "two-cycle", "--size", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("# size 2: 3 of 4 labeled structures in K\n"), "{out}");
    assert!(!out.contains("E={(1,2),(2,1)}"));
    let (code, out, _) = hfc(&["enumerate", "--signature", &sig, "--plugin", "two-cycle", "--size", "2", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["structures"].as_array().unwrap().len(), 4);
    let (code, _, _) = hfc(&["enumerate", "--signature", &sig, "--plugin", "two-cycle", "--size", "5"]);
    assert_eq!(code, 3);
    let (code, out, _) = hfc(&["enumerate", "--signature", &sig, "--plugin", "cliques-geq", "--params", r#"{"k": 3}"#, "--size", "3", "--up-to-iso"]);
    assert_eq!(code, 0);
    assert!(out.contains("# size 3: 15 of 16 isomorphism types in K"), "{out}");
}

#[test]
fn selftest_and_help() {
    let (code, out, _) = hfc(&["selftest", "--instances", "40", "--seed", "9"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("selftest: 40 instances, 0 disagreements"), "{out}");
    let (code, out, _) = hfc(&["--help"]);
    assert_eq!(code, 0);
    for cmd in ["decide", "axioms-to-forbidden", "forbidden-to-axioms", "minimize", "check-member", "enumerate", "selftest"] {
        assert!(out.contains(cmd), "{cmd} missing from help");
    }
    let (code, _, err) = hfc(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

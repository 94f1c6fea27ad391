use std::path::PathBuf;

use ternfair_cli::{run_cli_with_env, EXIT_INVALID, EXIT_LIMIT, EXIT_OK};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ternfair").chain(args.iter().copied());
    let code = run_cli_with_env(argv, None, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("ternfair-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).display().to_string()
}

#[test]
fn gen_then_solve_k33() {
    let doc = tmp("k33.json");
    let (code, _, err) =
        run(&["gen", "mnw-vc", "--values", "0,1,3", "--source", &fixture("k33.graph"), "--k", "3", "--out", &doc]);
    assert_eq!(code, EXIT_OK, "{err}");
    let (code, out, _) = run(&["solve", "--objective", "nsw", "--method", "bnb", &doc]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("geometric mean 3.0000000000 (exactly 3)"), "{out}");
}

#[test]
fn gen_matches_golden_documents() {
    let cases: &[(&str, &str, &[&str])] = &[
        ("mnw-vc-k33.json", "k33.graph", &["mnw-vc", "--values", "0,1,3", "--k", "3"]),
        ("mnw-vc-k4.json", "k4.graph", &["mnw-vc", "--values", "0,1,3", "--k", "2"]),
        ("mnw-sat.json", "sat3.cnf", &["mnw-sat", "--values", "0,1,2"]),
        ("mnw-3c-k33.json", "k33.graph", &["mnw-3c", "--values", "3,4", "--k", "3"]),
        ("mew-goods.json", "sat3.cnf", &["mew-goods", "--values", "1,2,3"]),
        ("mew-mixed.json", "sat3.cnf", &["mew-mixed", "--values", "-2,1"]),
        ("mew-two-negative.json", "sat3.cnf", &["mew-two-negative", "--values", "-2,-1,2"]),
        ("mew-rx3c-k1.json", "rx3c_k1.txt", &["mew-rx3c"]),
    ];
    for (golden, source, args) in cases {
        let src = fixture(source);
        let mut argv = vec!["gen"];
        argv.extend_from_slice(args);
        argv.extend_from_slice(&["--source", &src]);
        let (code, out, err) = run(&argv);
        assert_eq!(code, EXIT_OK, "{golden}: {err}");
        let expected = std::fs::read_to_string(fixture(&format!("golden/{golden}"))).unwrap();
        assert_eq!(out, expected, "{golden}");
        let doc = ternfair::format::load_instance(&expected).unwrap();
        assert_eq!(ternfair::format::store_instance(&doc), expected, "{golden}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "doc", "solve", "--objective", "mew", "--method", "bnb", "--workers", "3"];
    let golden = fixture("golden/mew-rx3c-k1.json");
    let mut argv = args.to_vec();
    argv.push(&golden);
    let first = run(&argv);
    assert_eq!(first.0, EXIT_OK);
    assert_eq!(first, run(&argv));
}

#[test]
fn bounds_prints_the_ratio() {
    let (code, out, _) = run(&["bounds", "sat-case1", "--values", "0,1,2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("(4/3)^(1/6096) ~ 1.00004719"), "{out}");
    assert!(out.contains("1.00004\n"), "{out}");
}

#[test]
fn order_neutral_violation_is_a_successful_check() {
    let (code, out, _) = run(&["check", "order-neutral", "--oracle", "rx3c", "--k", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("{1, -1} vs {0, 0}"), "{out}");
}

#[test]
fn verify_gap_yes_and_no() {
    let (code, out, _) = run(&["verify-gap", "--witness", &fixture("k33.cover"), &fixture("golden/mnw-vc-k33.json")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.ends_with("verdict: confirmed\n"), "{out}");
    let (code, out, _) = run(&["verify-gap", "--no", &fixture("golden/mnw-vc-k4.json")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.ends_with("verdict: confirmed\n"), "{out}");
    let (code, out, _) = run(&["verify-gap", "--witness", &fixture("sat3.model"), &fixture("golden/mnw-sat.json")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.ends_with("verdict: confirmed\n"), "{out}");
}

#[test]
fn limit_reached_exits_3() {
    let golden = fixture("golden/mnw-vc-k33.json");
    let (code, out, _) = run(&["solve", "--objective", "nsw", "--max-nodes", "10", &golden]);
    assert_eq!(code, EXIT_LIMIT, "{out}");
    assert!(out.starts_with("status: limit-reached"));
    let (code, _, _) = run(&["verify-gap", "--no", "--max-nodes", "10", &fixture("golden/mnw-vc-k4.json")]);
    assert_eq!(code, EXIT_LIMIT);
}

#[test]
fn invalid_input_exits_2_with_location() {
    let (code, _, err) = run(&["gen", "mnw-sat", "--values", "0,1,2", "--source", &fixture("k33.graph")]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("line 2"), "{err}");
    let (code, _, err) = run(&["bounds", "sat-case1", "--values", "0,1,5"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("wrong regime"), "{err}");
    let (code, _, _) = run(&["solve", "--objective", "nsw"]);
    assert_eq!(code, EXIT_INVALID);

    let bad = tmp("bad.json");
    std::fs::write(&bad, r#"{"version": "ternfair/1", "agents": [], "items": [], "valuation": {"type": "weird"}}"#).unwrap();
    let (code, _, err) = run(&["solve", "--objective", "mew", &bad]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("$.valuation.type"), "{err}");
}

#[test]
fn tampered_certificate_is_rejected() {
    let text = std::fs::read_to_string(fixture("golden/mnw-vc-k33.json")).unwrap();
    let bad = tmp("tampered.json");
    std::fs::write(&bad, text.replace("\"yes_value\": \"3 ~ 3.0000000000\"", "\"yes_value\": \"4 ~ 4.0000000000\"")).unwrap();
    let (code, _, err) = run(&["solve", "--objective", "nsw", &bad]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("$.certificate.yes_value"), "{err}");
}

#[test]
fn workers_come_from_the_environment() {
    let golden = fixture("golden/mnw-vc-k4.json");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli_with_env(
        ["ternfair", "solve", "--objective", "nsw", &golden],
        Some("zero".into()),
        &mut out,
        &mut err,
    );
    assert_eq!(code, EXIT_INVALID);
    assert!(String::from_utf8(err).unwrap().contains("TERNFAIR_WORKERS"));
    let code = run_cli_with_env(["ternfair", "solve", "--objective", "nsw", &golden], Some("2".into()), &mut out, &mut Vec::new());
    assert_eq!(code, EXIT_OK);
}

#[test]
fn fuzz_and_lemmas_docs() {
    let (code, out, _) = run(&["--format", "doc", "fuzz", "--seed", "5", "--trials", "20"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"discrepancies\": []"), "{out}");
    let (code, out, _) = run(&["check", "lemmas", "--values", "1,2,3", "--format", "doc"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"holds\": true"));
    let (code, out, _) = run(&["check", "decomposition", "--c", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("sum 0"), "{out}");
}

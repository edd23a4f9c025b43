use std::path::PathBuf;
use std::process::Command;

use frobx_cli::format::parse;
use frobx_cli::{run_command, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_REFUTED, EXIT_VERIFIED};
use frobx_core::frobenius::check_frobenius;
use frobx_core::Field;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(name)
}

fn run(args: &[&str]) -> frobx_cli::Outcome {
    run_command(std::iter::once("frobx").chain(args.iter().copied()))
}

fn value<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn golden_n2_parses_to_the_nilcoxeter_algebra() {
    let text = std::fs::read_to_string(data("data/n2.alg")).unwrap();
    let doc = parse(&text).unwrap();
    assert_eq!(doc.field(), Field::Rational);
    let entry = doc.algebra("N2").unwrap();
    let alg = &entry.algebra;
    assert_eq!(alg.labels(), ["1", "u1"]);
    assert_eq!(alg.multiply(&alg.basis(1), &alg.basis(1)), alg.zero());
    let (degree, trace) = entry.trace.clone().unwrap();
    let data = check_frobenius(alg.clone(), &trace, &degree).unwrap().unwrap();
    assert_eq!(data.nakayama_automorphism().matrix, frobx_core::Matrix::identity(Field::Rational, 2));
}

#[test]
fn validate_golden_file() {
    let out = run(&["validate", data("data/n2.alg").to_str().unwrap()]);
    assert_eq!(out.code, EXIT_VERIFIED, "{}", out.report);
    assert_eq!(value(&out.report, "algebra N2"), Some("dim 2, 0 violation(s)"));
    assert_eq!(value(&out.report, "trace N2"), Some("nondegenerate, degree (-1,1)"));
}

#[test]
fn duplicate_label_is_an_input_error_naming_it() {
    let text = std::fs::read_to_string(data("data/n2.alg")).unwrap().replace("u1 1 1\n", "u1 1 1\nu1 1 1\n");
    let path = scratch("dup.alg");
    std::fs::write(&path, text).unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.report.contains("duplicate basis label `u1`"), "{}", out.report);
}

#[test]
fn grading_violation_cites_line_and_triple() {
    let text = std::fs::read_to_string(data("data/n2.alg")).unwrap().replace("u1 1 u1 1\n", "u1 1 u1 1\nu1 u1 u1 1\n");
    let path = scratch("bad-grading.alg");
    std::fs::write(&path, text).unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.report.contains("line 16"), "{}", out.report);
    assert!(out.report.contains("(u1, u1, u1)"), "{}", out.report);
}

#[test]
fn associativity_failure_is_reported() {
    let text = "[algebra A]\n[basis]\n1 0 0\nx 0 0\n[mul]\n1 1 1 1\n1 x x 1\nx 1 x 1\nx x 1 1\nx x x 1\n";
    let doc = parse(text);
    assert!(doc.is_ok(), "x^2 = 1 + x is associative: {doc:?}");
    let text = "[algebra A]\n[basis]\n1 0 0\nx 0 0\ny 0 0\n[mul]\n1 1 1 1\n1 x x 1\nx 1 x 1\n1 y y 1\ny 1 y 1\nx y y 1\ny x x 1\n";
    let e = parse(text).unwrap_err();
    assert!(e.message.contains("associativity"), "{e}");
}

#[test]
fn certify_emits_a_certificate_that_reverifies_identically() {
    let out = run(&["certify", "--ext", "builtin:nilcoxeter:2:3"]);
    assert_eq!(out.code, EXIT_VERIFIED, "{}", out.report);
    assert!(out.report.contains("\n[certificate]\n"));
    let path = scratch("n23.cert");
    std::fs::write(&path, &out.report).unwrap();
    let back = run(&["certify", "--verify", path.to_str().unwrap()]);
    assert_eq!(back.code, EXIT_VERIFIED, "{}", back.report);
    assert_eq!(value(&back.report, "round-trip"), Some("identical"));

    let out_path = scratch("n23-out.cert");
    let written = run(&["certify", "--ext", "builtin:nilcoxeter:2:3", "--out", out_path.to_str().unwrap()]);
    assert_eq!(written.code, EXIT_VERIFIED);
    let file = std::fs::read_to_string(&out_path).unwrap();
    let printed: String = out.report.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    assert_eq!(file, printed);
}

#[test]
fn tampered_certificate_is_refuted() {
    let out = run(&["certify", "--ext", "builtin:nilcoxeter:1:2", "--out", scratch("n12.cert").to_str().unwrap()]);
    assert_eq!(out.code, EXIT_VERIFIED, "{}", out.report);
    let text = std::fs::read_to_string(scratch("n12.cert")).unwrap();
    let (head, tail) = text.split_once("[dual-generators]\n").unwrap();
    let tampered = format!("{head}[dual-generators]\n{}", tail.replacen("| 1:1", "| 1:2", 1));
    assert_ne!(tampered, text);
    let path = scratch("n12-bad.cert");
    std::fs::write(&path, tampered).unwrap();
    let back = run(&["certify", "--verify", path.to_str().unwrap()]);
    assert_eq!(back.code, EXIT_REFUTED, "{}", back.report);
    assert_eq!(value(&back.report, "stage"), Some("dual-generators"));
}

#[test]
fn non_projective_pair_is_refuted_at_l1() {
    let out = run(&["extension-check", "--ext", "builtin:nonproj"]);
    assert_eq!(out.code, EXIT_REFUTED);
    assert_eq!(value(&out.report, "stage"), Some("L1"));
    assert!(value(&out.report, "note").unwrap().contains("x2"));
}

#[test]
fn extension_check_reports_every_clause() {
    let out = run(&["extension-check", "--ext", "builtin:symmetric:2:3"]);
    assert_eq!(out.code, EXIT_VERIFIED, "{}", out.report);
    for key in ["L1", "L2", "L3", "L4", "R2", "R3", "R4", "bil-form associative"] {
        assert!(value(&out.report, key).unwrap().starts_with("pass"), "{key}: {}", out.report);
    }
}

#[test]
fn adjunction_and_dual_generator_commands() {
    let out = run(&["adjunction-check", "--ext", "builtin:nilcoxeter:1:2"]);
    assert_eq!(out.code, EXIT_VERIFIED, "{}", out.report);
    assert_eq!(value(&out.report, "triangle first"), Some("pass"));
    assert_eq!(value(&out.report, "triangle second"), Some("pass"));
    let out = run(&["dual-gens", "--ext", "builtin:nilcoxeter:0:1"]);
    assert_eq!(out.code, EXIT_VERIFIED, "{}", out.report);
    assert_eq!(value(&out.report, "generators"), Some("1"));
}

#[test]
fn algebra_commands() {
    let out = run(&["frobenius-check", "--alg", "builtin:nilcoxeter:3"]);
    assert_eq!(out.code, EXIT_VERIFIED);
    assert_eq!(value(&out.report, "degree"), Some("(-3,1)"));
    let out = run(&["nakayama", "--alg", "builtin:nilcoxeter:3"]);
    assert_eq!(value(&out.report, "psi(u1)"), Some("u2:1"));
    assert_eq!(value(&out.report, "psi(u2)"), Some("u1:1"));
}

#[test]
fn builtins_round_trip_through_the_file_format() {
    for name in ["nilcoxeter:3", "symmetric:3", "exterior:3", "truncated:4", "nilcoxeter:1:3", "symmetric:2:3", "trivial:exterior:2"] {
        let out = run(&["builtin", name]);
        assert_eq!(out.code, EXIT_VERIFIED, "{name}");
        let path = scratch(&format!("{}.frobx", name.replace(':', "-")));
        std::fs::write(&path, &out.report).unwrap();
        let v = run(&["validate", path.to_str().unwrap()]);
        assert_eq!(v.code, EXIT_VERIFIED, "{name}: {}", v.report);
        if name.matches(':').count() >= 2 || name.starts_with("trivial") {
            let c = run(&["certify", "--ext", path.to_str().unwrap()]);
            assert_eq!(c.code, EXIT_VERIFIED, "{name}: {}", c.report);
        }
    }
}

#[test]
fn input_errors_exit_three() {
    assert_eq!(run(&["frobnicate"]).code, EXIT_INPUT);
    assert_eq!(run(&["certify"]).code, EXIT_INPUT);
    assert_eq!(run(&["validate", "/nonexistent/file.alg"]).code, EXIT_INPUT);
    assert_eq!(run(&["builtin", "nilcoxeter:99"]).code, EXIT_INPUT);
    assert_eq!(run(&["extension-check", "--ext", "builtin:nilcoxeter:3"]).code, EXIT_INPUT);
}

#[test]
fn candidate_cap_comes_from_the_environment() {
    let bin = env!("CARGO_BIN_EXE_frobx");
    let file = data("tests/data/split.ext");
    let run_with = |cap: &str| {
        Command::new(bin).args(["certify", "--ext", file.to_str().unwrap()]).env("FROBX_CANDIDATE_CAP", cap).output().unwrap()
    };
    let capped = run_with("1");
    assert_eq!(capped.status.code(), Some(EXIT_INCONCLUSIVE));
    let text = String::from_utf8(capped.stdout).unwrap();
    assert_eq!(value(&text, "trace-space-dimension"), Some("2"));
    assert_eq!(run_with("1000").status.code(), Some(EXIT_VERIFIED));
    assert_eq!(run_with("zero").status.code(), Some(EXIT_INPUT));
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["certify", "--ext", "builtin:symmetric:2:3"]);
    let b = run(&["certify", "--ext", "builtin:symmetric:2:3"]);
    assert_eq!(a, b);
}

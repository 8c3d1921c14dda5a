use std::process::{Command, Stdio};

use dunkl_forge::cli::run;

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("dunkl-forge").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn analyze_s3_transpositions() {
    let (code, out, _) = run_cli(&["analyze", "corpus:a2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("orbits: 5"));
    assert!(out.contains("dim of degree-2 quadratic part: 4"));
    assert!(out.contains("[PASS] germ identity"));
    assert!(out.contains("[PASS] braid relation on S^3"));
}

#[test]
fn analyze_quaternions_with_central_s() {
    let (code, out, _) = run_cli(&["analyze", "corpus:q8"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("orbits: 1\n"));
    assert!(out.contains("dim of degree-2 quadratic part: 0"));
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"group\": {\"kind\": \"matrix\",, }}").unwrap();
    let (code, _, err) = run_cli(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("malformed JSON at byte 28"), "{err}");
}

#[test]
fn invalid_subset_reports_the_condition() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let cfg = r#"{"group": {"kind": "permutation", "degree": 3, "generators": ["(1,2)", "(1,2,3)"]}, "S": ["(1,2)"]}"#;
    std::fs::write(&path, cfg).unwrap();
    let (code, _, err) = run_cli(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("condition (2)"), "{err}");
}

#[test]
fn unknown_file_and_bad_flags_are_usage_errors() {
    assert_eq!(run_cli(&["analyze", "/nonexistent/x.json"]).0, 2);
    assert_eq!(run_cli(&["analyze"]).0, 2);
    assert_eq!(run_cli(&["dunkl", "corpus:a2", "--degree", "9"]).0, 2);
    assert_eq!(run_cli(&["forms", "corpus:fano"]).0, 2);
}

#[test]
fn verify_group_spaces() {
    for name in ["a2", "b2", "g312"] {
        let (code, out, _) = run_cli(&["verify", &format!("corpus:{name}")]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("[PASS] x ◀ y = y^-1 x y"));
        assert!(
            out.contains("[PASS] reconstructed action is conjugation"),
            "{out}"
        );
    }
    let (code, out, _) = run_cli(&["verify", "corpus:q8"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("reconstruction: refused (non-triviality"),
        "{out}"
    );
}

#[test]
fn verify_fano_reports_distributivity_failure() {
    let (code, out, _) = run_cli(&["verify", "corpus:fano"]);
    assert_eq!(code, 1);
    assert!(out.contains("lines: 21"));
    assert!(out.contains("[PASS] right cancellation"));
    assert!(
        out.contains("[FAIL] right distributivity\n       witness: z = 1, x = 2, y = 4"),
        "{out}"
    );
    assert!(out.contains("reconstruction: refused"));
}

#[test]
fn dunkl_commutes_on_s3() {
    let (code, out, _) = run_cli(&["dunkl", "corpus:a2", "--degree", "6", "--samples", "50"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("84 monomials, 3 pairs, 0 nonzero commutators"));
    assert!(
        out.contains("root of (1,2): [1, -1, 0] (nu = 1/3)"),
        "{out}"
    );
}

#[test]
fn nonconstant_multiplicity_breaks_commutativity() {
    let (code, out, _) = run_cli(&["dunkl", "corpus:b2_nonconstant_nu", "--degree", "3"]);
    assert_eq!(code, 1);
    assert!(out.contains("[FAIL] commutativity up to degree 3"));
    assert!(out.contains("witness: [D_1, D_2]"));
}

#[test]
fn forms_negative_controls_fail_with_witness() {
    let (code, out, _) = run_cli(&["forms", "corpus:b2_perturbed_eigenline", "--samples", "10"]);
    assert_eq!(code, 1);
    assert!(out.contains("[FAIL] eigenline covariance"));
    assert!(out.contains("witness: u = "));
    let (code, out, _) = run_cli(&["forms", "corpus:a2_generic_lines", "--samples", "10"]);
    assert_eq!(code, 1);
    assert!(out.contains("[FAIL] cyclic wedge identity"));
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["analyze", "verify", "dunkl", "forms"] {
        let mut bytes = Vec::new();
        for k in 0..2 {
            let path = dir.path().join(format!("{cmd}{k}.json"));
            let p = path.to_str().unwrap();
            run_cli(&[
                cmd,
                "corpus:b2",
                "corpus:g312",
                "--degree",
                "4",
                "--samples",
                "20",
                "--seed",
                "7",
                "--json",
                p,
            ]);
            bytes.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(bytes[0], bytes[1], "{cmd}");
        let v: serde_json::Value = serde_json::from_slice(&bytes[0]).unwrap();
        assert_eq!(v["parameters"]["seed"], "7");
    }
}

#[test]
fn binary_exit_codes_and_thread_cap() {
    let bin = env!("CARGO_BIN_EXE_dunkl-forge");
    let status = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .env("DUNKL_FORGE_THREADS", "2")
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .status()
            .unwrap()
            .code()
    };
    assert_eq!(status(&["analyze", "corpus:a1"]), Some(0));
    assert_eq!(status(&["verify", "corpus:fano"]), Some(1));
    assert_eq!(status(&["dunkl", "corpus:q8"]), Some(2));
}

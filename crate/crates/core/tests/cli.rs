//! End-to-end tests of the command-line interface: exit codes, the JSON
//! report schema, canonical expand output, and character-table printing.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_immanant-kit"))
        .args(args)
        .output()
        .expect("binary must run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout must be utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr must be utf-8")
}

#[test]
fn verify_single_identity_exits_zero() {
    let out = run(&["verify", "--identity", "cauchy", "--n", "2", "--degree", "4"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("verified cauchy n=2 D=4"), "got: {text}");
}

#[test]
fn verify_all_at_n1_exits_zero() {
    let out = run(&["verify", "--identity", "all", "--n", "1", "--degree", "2"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    assert_eq!(lines.len(), 11, "one line per catalog identity");
    assert!(lines.iter().all(|l| l.starts_with("verified ")));
}

#[test]
fn verify_cyclotomic_group_case() {
    let out = run(&[
        "verify",
        "--identity",
        "master-boson",
        "--n",
        "3",
        "--group",
        "builtin:C3",
        "--char",
        "1",
        "--degree",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
}

#[test]
fn json_reports_are_schema_stable_and_deterministic() {
    let args = [
        "verify",
        "--identity",
        "all",
        "--n",
        "2",
        "--degree",
        "2",
        "--json",
        "--workers",
        "2",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let parse = |out: &Output| -> Vec<serde_json::Value> {
        stdout(out)
            .lines()
            .map(|line| {
                let mut v: serde_json::Value =
                    serde_json::from_str(line).expect("each line is one JSON object");
                // Key order is part of the contract.
                assert!(
                    line.starts_with("{\"case\":{\"identity\":"),
                    "schema key order broken: {line}"
                );
                for key in ["case", "status", "difference", "lhs_terms", "rhs_terms", "ms"] {
                    assert!(v.get(key).is_some(), "missing key {key} in {line}");
                }
                assert_eq!(v["status"], "verified");
                // Wall-clock time is the only nondeterministic field.
                v["ms"] = 0.into();
                v
            })
            .collect()
    };
    let a = parse(&first);
    let b = parse(&second);
    assert_eq!(a, b, "reports must be byte-deterministic modulo ms");
    // Cases come back in catalog order even with a worker pool.
    let order: Vec<String> = a
        .iter()
        .map(|v| v["case"]["identity"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(
        order,
        vec![
            "cauchy",
            "frobenius",
            "master-boson",
            "det-expansion",
            "perm-expansion",
            "loewner",
            "master-fermion",
            "det-fermion",
            "perm-fermion",
            "products",
            "epsilon"
        ]
    );
}

#[test]
fn unknown_identity_exits_two_and_lists_catalog() {
    let out = run(&["verify", "--identity", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("unknown identity"), "got: {err}");
    assert!(err.contains("cauchy") && err.contains("epsilon"), "catalog not listed: {err}");
}

#[test]
fn unknown_flag_exits_two() {
    let out = run(&["verify", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn group_size_limit_exits_three() {
    let out = run(&[
        "verify",
        "--identity",
        "master-boson",
        "--n",
        "4",
        "--degree",
        "2",
        "--max-group-size",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("exceeds"), "got: {}", stderr(&out));
}

#[test]
fn mismatch_exits_one_with_difference_terms() {
    // A weight function that is not an irreducible character: chi = 2 on
    // the identity, 0 on the transposition (the sum of both S2
    // irreducibles). The projector identity genuinely fails for it.
    let mut file = tempfile::NamedTempFile::new().expect("temp file");
    write!(
        file,
        "{{ \"n\": 2, \"generators\": [[2,1]],
             \"characters\": [ {{ \"name\": \"fat\", \"degree\": 2,
                               \"values\": [2, 0], \"irreducible\": false }} ] }}"
    )
    .expect("write temp table");
    let path = format!("file:{}", file.path().display());
    let out = run(&[
        "verify",
        "--identity",
        "master-boson",
        "--n",
        "2",
        "--degree",
        "2",
        "--group",
        &path,
        "--char",
        "fat",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["status"], "mismatch");
    let difference = v["difference"].as_array().unwrap();
    assert!(!difference.is_empty(), "difference terms must be reported");
}

#[test]
fn expand_det_matches_univariate_series() {
    let out = run(&["expand", "det", "--n", "1", "--degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out).trim(),
        "f0 + f1*t*u1*v1 + f2*t^2*u1^2*v1^2 + f3*t^3*u1^3*v1^3"
    );
}

#[test]
fn expand_fermionic_perm_and_det() {
    let out = run(&["expand", "perm-fermion", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out).trim(),
        "2*f0^2 + f0*f1*t*u1*v1 + f0*f1*t*u1*v2 + f0*f1*t*u2*v1 + f0*f1*t*u2*v2"
    );
    let out = run(&["expand", "det-fermion", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out).trim(),
        "f0*f1*t*u1*v1 - f0*f1*t*u1*v2 - f0*f1*t*u2*v1 + f0*f1*t*u2*v2 - 2*f1^2*t^2*u1*u2*v1*v2"
    );
}

#[test]
fn expand_schur_bialternant() {
    let out = run(&["expand", "schur", "--partition", "1,0", "--n", "2", "--side", "v"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "v1 + v2");
    let out = run(&["expand", "schur", "--partition", "2,1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "u1^2*u2 + u1*u2^2");
}

#[test]
fn expand_unknown_object_exits_two() {
    let out = run(&["expand", "mystery", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("available"), "got: {}", stderr(&out));
}

#[test]
fn expand_schur_requires_partition() {
    let out = run(&["expand", "schur", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--partition"));
}

#[test]
fn chartable_c2_is_the_sign_table() {
    let out = run(&["chartable", "--group", "builtin:C2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("order 2, 2 classes"), "got: {text}");
    assert!(text.contains("conductor 1"), "got: {text}");
    assert!(text.lines().last().unwrap().trim() == "[[1,1],[1,-1]]", "got: {text}");
}

#[test]
fn chartable_s3_integer_table() {
    let out = run(&["chartable", "--group", "builtin:S3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("order 6, 3 classes"));
    assert!(text.contains("class 1: rep [1,3,2] size 3"), "got: {text}");
    assert!(text.contains("[3]: [1,1,1]"));
    assert!(text.contains("[2,1]: [2,0,-1]"));
    assert!(text.contains("[1,1,1]: [1,-1,1]"));
    assert_eq!(
        text.lines().last().unwrap().trim(),
        "[[1,1,1],[2,0,-1],[1,-1,1]]"
    );
}

#[test]
fn chartable_from_file_echoes_cyclotomic_values() {
    let out = run(&["chartable", "--group", "file:tests/data/c3.json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("order 3, 3 classes"), "got: {text}");
    assert!(text.contains("conductor 3"), "got: {text}");
    assert!(text.contains("chi1: [1,[0,1],[-1,-1]]"), "got: {text}");
}

#[test]
fn chartable_without_degree_needs_n() {
    let out = run(&["chartable", "--group", "builtin:Sn"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["chartable", "--group", "builtin:Sn", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_with_character_file_round_trip() {
    for (chi, path) in [
        ("chi1", "file:tests/data/c3.json"),
        ("standard", "file:tests/data/s3.json"),
    ] {
        let out = run(&[
            "verify",
            "--identity",
            "master-boson",
            "--n",
            "3",
            "--degree",
            "2",
            "--group",
            path,
            "--char",
            chi,
        ]);
        assert_eq!(out.status.code(), Some(0), "char {chi}: {}", stderr(&out));
    }
}

#[test]
fn scaled_and_epsilon_flags_are_accepted() {
    let out = run(&[
        "verify",
        "--identity",
        "master-fermion",
        "--n",
        "3",
        "--group",
        "builtin:A3",
        "--char",
        "chi1",
        "--epsilon",
        "--scaled",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("epsilon"), "flags echoed: {text}");
    assert!(text.contains("scaled"), "flags echoed: {text}");
}

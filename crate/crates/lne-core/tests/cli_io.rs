//! Contract tests for the `lne` binary: exit codes, JSON shape against the
//! shipped schema, file outputs, and the parse/render round trip.

use std::process::Command;

use lne_core::parse::parse_polynomial;
use lne_core::report::OUTPUT_SCHEMA;

fn lne(args: &[&str]) -> (i32, String, String) {
    lne_with_env(args, &[])
}

fn lne_with_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut command = Command::new(env!("CARGO_BIN_EXE_lne"));
    command.args(args).env_remove("LNE_PRECISION");
    for (key, value) in env {
        command.env(key, value);
    }
    let output = command.output().unwrap();
    (
        output.status.code().unwrap_or(-1),
        String::from_utf8(output.stdout).unwrap(),
        String::from_utf8(output.stderr).unwrap(),
    )
}

fn assert_valid(stdout: &str) -> serde_json::Value {
    let schema: serde_json::Value = serde_json::from_str(OUTPUT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let instance: serde_json::Value = serde_json::from_str(stdout).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(&instance)
        .map(|err| err.to_string())
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
    instance
}

#[test]
fn exit_codes_for_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let cert_path = cert.to_str().unwrap();

    for (expected, args) in [
        (0, vec!["tangent-cone", "y^2 + x^4"]),
        (0, vec!["plane-curve", "x^2 - y^2"]),
        (0, vec!["plane-curve", "y^2 + x^4"]),
        (0, vec!["space-curve", "y^2 - x^3"]),
        (0, vec!["slice-test", "x^3 + x^2*y + y^3*z + z^5"]),
        (2, vec!["slice-test", "x^2 + y^2 - z^3"]),
        (0, vec!["brieskorn", "2,3,3"]),
        (2, vec!["brieskorn", "2,2,3"]),
        (0, vec!["witness", "y^2 - x^3"]),
        (1, vec!["plane-curve", "x^2 + * y"]),
        (1, vec!["revalidate", "/no/such/file.json"]),
        (1, vec!["witness", "x^2 - y^2"]),
    ] {
        let (code, stdout, _) = lne(&args);
        assert_eq!(code, expected, "args {args:?}, stdout {stdout}");
    }

    let (code, _, _) = lne(&[
        "slice-test",
        "x^2 + y^3 + z^3",
        "--no-cone-shortcut",
        "--output",
        cert_path,
    ]);
    assert_eq!(code, 0);
    let (code, stdout, _) = lne(&["revalidate", cert_path]);
    assert_eq!(code, 0, "{stdout}");
    let envelope = assert_valid(&stdout);
    assert_eq!(envelope["revalidation"]["passed"], true);
    assert_eq!(
        envelope["revalidation"]["checks"].as_array().unwrap().len(),
        6
    );
}

#[test]
fn envelopes_validate_against_the_shipped_schema() {
    for args in [
        vec!["tangent-cone", "x^3 + x^2*y + y^3*z + z^5"],
        vec!["plane-curve", "x^2 - y^2"],
        vec!["plane-curve", "y^2 + x^4"],
        vec!["space-curve", "y^2 - x^3"],
        vec!["slice-test", "x^3 + x^2*y + y^3*z + z^5"],
        vec!["slice-test", "x^2 + y^2 - z^3"],
        vec!["slice-test", "x^2 + y^3 + z^3", "--no-cone-shortcut"],
        vec!["brieskorn", "2,3,3"],
        vec!["brieskorn", "2,2,3"],
        vec!["brieskorn", "2,5", "--coefficients", "1,1"],
        vec!["witness", "y^2 - x^3"],
        vec!["plane-curve", "x^2 + * y"],
        vec!["plane-curve", "x^2 - y^2", "--precision", "32"],
    ] {
        let (_, stdout, _) = lne(&args);
        assert!(stdout.ends_with('\n'), "args {args:?}");
        assert!(!stdout[..stdout.len() - 1].ends_with('\n'), "args {args:?}");
        assert_valid(&stdout);
    }
}

#[test]
fn structured_diagnostics_carry_kind_and_position() {
    let (code, stdout, _) = lne(&["plane-curve", "x^2 + * y"]);
    assert_eq!(code, 1);
    let envelope = assert_valid(&stdout);
    assert_eq!(envelope["error"]["kind"], "parse");
    assert!(
        envelope["error"]["message"]
            .as_str()
            .unwrap()
            .contains("offset 6"),
        "{stdout}"
    );

    let (code, stdout, _) = lne(&["plane-curve", "x^2 - y^2", "--precision", "32"]);
    assert_eq!(code, 1);
    let envelope = assert_valid(&stdout);
    assert_eq!(envelope["error"]["kind"], "domain");
}

#[test]
fn json_schema_flag_prints_the_shipped_schema() {
    let (code, stdout, _) = lne(&["--json-schema"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim_end(), OUTPUT_SCHEMA.trim_end());
}

#[test]
fn precision_env_and_flag_agree() {
    let (code, stdout, _) = lne_with_env(
        &["plane-curve", "x^2 - y^2"],
        &[("LNE_PRECISION", "256")],
    );
    assert_eq!(code, 0);
    assert_eq!(assert_valid(&stdout)["precision"], 256);

    let (code, stdout, _) = lne(&["plane-curve", "x^2 - y^2", "--precision", "512"]);
    assert_eq!(code, 0);
    assert_eq!(assert_valid(&stdout)["precision"], 512);

    let (code, _, stderr) = lne_with_env(
        &["plane-curve", "x^2 - y^2"],
        &[("LNE_PRECISION", "banana")],
    );
    assert_eq!(code, 1, "{stderr}");
}

#[test]
fn slice_test_output_file_revalidates_until_tampered() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("witness.json");
    let path_str = path.to_str().unwrap();

    let (code, stdout, _) = lne(&[
        "slice-test",
        "x^3 + x^2*y + y^3*z + z^5",
        "--no-cone-shortcut",
        "--output",
        path_str,
    ]);
    assert_eq!(code, 0);
    let file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(file, stdout, "file output must match standard output");
    assert_valid(&file);

    let (code, _, _) = lne(&["revalidate", path_str]);
    assert_eq!(code, 0);

    let tampered = file.replace("z^5", "z^6");
    assert_ne!(tampered, file);
    std::fs::write(&path, tampered).unwrap();
    let (code, stdout, _) = lne(&["revalidate", path_str]);
    assert_eq!(code, 1);
    let envelope = assert_valid(&stdout);
    assert!(envelope["error"]["kind"].is_string(), "{stdout}");
}

#[test]
fn witness_output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("witness.json");
    let (code, stdout, _) = lne(&[
        "witness",
        "y^2 + x^4",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(file, stdout);
    let envelope = assert_valid(&stdout);
    assert_eq!(envelope["witness"]["conclusion"], "ratio-diverges");
    assert_eq!(envelope["witness"]["predicted_slope"], "-1");
}

#[test]
fn space_curve_envelopes_carry_branches() {
    let (code, stdout, _) = lne(&["space-curve", "y^2 - x^3", "--truncation", "8"]);
    assert_eq!(code, 0);
    let envelope = assert_valid(&stdout);
    let branches = envelope["branches"].as_array().unwrap();
    assert_eq!(branches.len(), 1);
    assert_eq!(branches[0]["ramification_index"], 2);
    assert_eq!(envelope["verdict"]["status"], "NonNE");
}

#[test]
fn parse_render_parse_is_identity_on_the_corpus() {
    for text in [
        "x^2 - y^2",
        "y^2 + x^4",
        "y^2 - x^3",
        "x^2 + y^2 - z^3",
        "x^3 + x^2*y + y^3*z + z^5",
        "x^3 + x^2*y + z^5",
        "x^2 + (1 - 2*i)*y^3",
        "1/2*x^2 - 3/4*y^5",
    ] {
        let first = parse_polynomial(text, None).unwrap();
        let rendered = first.to_string();
        // The variable list is part of the polynomial's identity, so the
        // reparse pins it; inference alone would reorder by first
        // occurrence in the canonical form.
        let vars = first.vars().to_vec();
        let second = parse_polynomial(&rendered, Some(&vars)).unwrap();
        assert_eq!(first, second, "{text} vs {rendered}");
        assert_eq!(rendered, second.to_string(), "{text}");
    }
}

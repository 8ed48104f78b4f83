use std::io::Write;
use std::process::{Command, Output, Stdio};

use gal_cli::modelfile::parse_model_file;
use gal_cli::BUNDLED;
use serde_json::Value;

fn gal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gal")).args(args).env_remove("GAL_DEFAULT_FIELD").output().expect("run gal")
}

fn gal_stdin(args: &[&str], input: &str, env: Option<(&str, &str)>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gal"));
    cmd.args(args).env_remove("GAL_DEFAULT_FIELD").stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    if let Some((k, v)) = env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("spawn gal");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one json object")
}

#[test]
fn bundled_files_round_trip() {
    for (name, text) in BUNDLED {
        let once = parse_model_file(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let twice = parse_model_file(&once.to_string()).unwrap();
        assert_eq!(once, twice, "{name}");
    }
}

#[test]
fn p2_degree_zero_json() {
    let out = gal(&["lattice", "--name", "P2", "--degree", "0", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["command"], "lattice");
    assert_eq!(v["model"], "P2");
    assert_eq!(v["rank"], 1);
    assert_eq!(v["torsion"], serde_json::json!([]));
    assert_eq!(v["certified"], true);
    assert_eq!(v["window"]["D"], 1);
    // bit-stable
    assert_eq!(out.stdout, gal(&["lattice", "--name", "P2", "--degree", "0", "--json"]).stdout);
}

#[test]
fn invariance_has_four_checks() {
    let out = gal(&["invariance", "--name", "P1", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 4);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn charpoly_json_on_e7() {
    let v = json(&gal(&["charpoly", "--name", "zeta", "--json"]));
    assert_eq!(v["integral"], true);
    assert_eq!(v["quasi_unipotent"], true);
    assert_eq!(v["order"], 3);
    assert_eq!(v["certified"], true);
}

#[test]
fn exit_codes() {
    let parse = gal_stdin(&["lattice", "--model", "-"], "field Q\nmodel M { proj vars: X Y ideal: [X*Y }\n", None);
    assert_eq!(parse.status.code(), Some(2));
    let err = String::from_utf8(parse.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    assert!(parse.stdout.is_empty());

    let torsion = gal_stdin(&["lattice", "--model", "-"], "field Q\nmodel T { proj vars: X Y ideal: [t*X] }\n", None);
    assert_eq!(torsion.status.code(), Some(3));

    let uncertified = gal(&["lattice", "--name", "E7", "--rounds", "0", "--require-certified"]);
    assert_eq!(uncertified.status.code(), Some(4));
    assert!(gal(&["lattice", "--name", "E7", "--require-certified"]).status.success());

    assert_eq!(gal(&["lattice", "--name", "nothing"]).status.code(), Some(2));
}

#[test]
fn default_field_from_environment() {
    let text = "model L { proj vars: X Y ideal: [] }\n";
    let out = gal_stdin(&["lattice", "--model", "-", "--degree", "0", "--json"], text, Some(("GAL_DEFAULT_FIELD", "F3")));
    assert!(out.status.success());
    assert_eq!(json(&out)["rank"], 1);
    let out = gal_stdin(&["newton", "z^2 - t", "--model", "-", "--json"], text, Some(("GAL_DEFAULT_FIELD", "F3")));
    assert_eq!(json(&out)["field"], "F3");
    let explicit = gal_stdin(&["newton", "z - 1", "--model", "-", "--json"], &format!("field F5\n{text}"), Some(("GAL_DEFAULT_FIELD", "F3")));
    assert_eq!(json(&explicit)["field"], "F5");
}

#[test]
fn membership_commands() {
    let v = json(&gal(&["ga-member", "--name", "ramified", "x", "--json"]));
    assert_eq!(v["member"], true);
    assert_eq!(v["witness"], Value::Null);
    let v = json(&gal(&["ga-member", "--name", "ramified", "1", "--json"]));
    assert_eq!(v["member"], false);
    assert!(v["witness"].is_string());
    let v = json(&gal(&["radical-member", "--name", "cusp", "y^2", "--json"]));
    assert_eq!(v["member"], false);
}

#[test]
fn seeded_suites_are_reproducible() {
    let a = gal(&["rigid-cech", "--seed", "9", "--count", "10", "--json"]);
    let b = gal(&["rigid-cech", "--seed", "9", "--count", "10", "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 9);
    assert_eq!(v["failures"], 0);

    let p = json(&gal(&["pn-homotopy", "--dim", "2", "--count", "30", "--seed", "3", "--json"]));
    assert_eq!(p["failures"], 0);
    assert_eq!(p["cohomology"], serde_json::json!([5, 0, 0]));
}

#[test]
fn selftest_passes() {
    let out = gal(&["selftest"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

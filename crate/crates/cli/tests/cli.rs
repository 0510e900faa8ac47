use std::io::Write;
use std::process::{Command, Output};

use monge_cli::{run, CommandResult, EXIT_DOMAIN, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE};
use serde_json::{json, Value};
use tempfile::NamedTempFile;

fn monge(args: &[&str]) -> CommandResult {
    run(std::iter::once("monge").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> Value {
    let result = monge(args);
    assert_eq!(result.exit_code, EXIT_OK, "{args:?}: {}", result.payload);
    result.payload
}

fn doc(value: Value) -> NamedTempFile {
    let mut file = NamedTempFile::new().unwrap();
    file.write_all(value.to_string().as_bytes()).unwrap();
    file
}

fn path(file: &NamedTempFile) -> &str {
    file.path().to_str().unwrap()
}

fn binary(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_monge"));
    cmd.args(args).env_remove(monge_cli::MAX_CELLS_ENV);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

#[test]
fn documented_examples() {
    assert_eq!(ok(&["volume", "--shape", "3x3", "--family", "generic"])["normalized"], "17/1296");
    assert_eq!(ok(&["fvector", "--shape", "2x2", "--family", "generic"])["f_vector"], json!([1, 6, 9, 5, 1]));
    assert_eq!(ok(&["count", "--family", "hm", "--shape", "3", "-k", "4", "--brute-force"])["count"], 6);
}

#[test]
fn counts_by_series_and_by_enumeration_agree() {
    for (family, shape) in [("hm", "4"), ("sm", "3"), ("mm", "2x3")] {
        let series = ok(&["series", "--family", family, "--shape", shape, "-K", "7"]);
        for k in 0..=7 {
            let ks = k.to_string();
            let brute = ok(&["count", "--family", family, "--shape", shape, "-k", &ks, "--brute-force"]);
            let fast = ok(&["count", "--family", family, "--shape", shape, "-k", &ks]);
            assert_eq!(brute["count"], series["coefficients"][k], "{family} {shape} k={k}");
            assert_eq!(fast["count"], brute["count"]);
        }
    }
}

#[test]
fn volumes_and_asymptotics() {
    assert_eq!(ok(&["volume", "--shape", "2x4"])["normalized"], "1/24");
    assert_eq!(ok(&["volume", "--shape", "2x4", "--closed-form"])["normalized"], "1/24");
    assert_eq!(ok(&["volume", "--shape", "4", "--family", "hollow"])["normalized"], "1/144");
    assert_eq!(ok(&["volume", "--shape", "3", "--family", "symmetric", "--closed-form"])["normalized"], "1/108");
    let a = ok(&["asymptotic", "--family", "hm", "--shape", "3"]);
    assert_eq!(a["leading"], "1/8");
    assert_eq!(a["leading"], a["leading_by_derivative"]);
}

#[test]
fn geometry_commands() {
    let v = ok(&["vertices", "--shape", "3x4"]);
    assert_eq!(v["count"], 2 * 2 * 3 + 3 + 4);
    assert_eq!(ok(&["facets", "--shape", "3x4"])["count"], 2 * 3 + 12);
    let e = ok(&["edges", "--shape", "3x3"]);
    assert_eq!(e["count"], e["formula"]);
    assert_eq!(ok(&["vertices", "--shape", "4", "--family", "hollow"])["count"], 6);
    assert_eq!(ok(&["fvector", "--shape", "3", "--family", "hollow"])["f_vector"], json!([1, 3, 3, 1]));
    assert_eq!(ok(&["facets", "--shape", "2", "--family", "symmetric"])["count"], 3);
    let lat = ok(&["lattice", "--shape", "2x2"]);
    assert_eq!(lat["faces"].as_array().unwrap().len(), 1 + 6 + 9 + 5 + 1);
}

#[test]
fn csv_output() {
    let series = monge(&["series", "--family", "mm", "--shape", "2x2", "-K", "4", "--format", "csv"]);
    assert_eq!(series.render(), "k,count\n0,1\n1,2\n2,7\n3,10\n4,22\n");
    let numerator = monge(&["numerator", "-p", "3", "--format", "csv"]);
    assert!(numerator.render().starts_with("k,coefficient\n0,1\n"));
    assert_eq!(monge(&["volume", "--shape", "2x2", "--format", "csv"]).exit_code, EXIT_USAGE);
}

#[test]
fn matrix_file_commands() {
    let monge_doc = doc(json!({ "rows": 2, "cols": 3, "entries": [[0, 1, 3], [1, 1, 2]] }));
    let check = ok(&["check", path(&monge_doc)]);
    assert_eq!(check["is_monge"], true);

    let bad = doc(json!({ "rows": 2, "cols": 2, "entries": [[1, 0], [0, 1]] }));
    let check = ok(&["check", path(&bad)]);
    assert_eq!(check["is_monge"], false);
    assert_eq!(check["violations"], json!([[1, 1]]));

    let form = ok(&["canonical", path(&monge_doc)]);
    let form_doc = doc(form.clone());
    let back = ok(&["reconstruct", path(&form_doc)]);
    assert_eq!(back["matrix"]["entries"], json!([[0, 1, 3], [1, 1, 2]]));
    assert_eq!(back["grading"], 8);
    assert_eq!(form["grading"], 8);

    let hollow = doc(json!({ "rows": 3, "cols": 3, "entries": [[0, "1/4", "1/4"], ["1/4", 0, 0], ["1/4", 0, 0]] }));
    let d = ok(&["decompose", path(&hollow), "--hollow"]);
    assert_eq!(d["coefficient_sum"], "1/1");
    let m = ok(&["metric", path(&hollow)]);
    assert_eq!(m["face"], "BOUNDARY_METRIC_FACE");
    assert_eq!(m["is_true_metric"], false);
}

#[test]
fn optimization_commands() {
    let cost = json!({ "rows": 3, "cols": 3, "entries": [[0, 1, 3], [1, 0, 1], [3, 1, 0]] });
    let tp = doc(json!({ "cost": cost, "supplies": [2, 1, 3], "demands": [1, 3, 2] }));
    let nw = ok(&["tp", path(&tp)]);
    assert_eq!(nw["flow"], json!([[1, 1, 0], [0, 1, 0], [0, 1, 2]]));
    assert_eq!(nw["objective"], ok(&["tp", path(&tp), "--brute-force"])["objective"]);

    let tsp = doc(json!({ "cost": cost }));
    let pyramidal = ok(&["tsp", path(&tsp)]);
    assert_eq!(pyramidal["cost"], ok(&["tsp", path(&tsp), "--brute-force"])["cost"]);
    assert_eq!(ok(&["tsp", path(&tsp), "--supnick"])["tour"], json!([1, 3, 2]));
}

#[test]
fn exit_codes() {
    let unbalanced = doc(json!({ "cost": { "rows": 1, "cols": 1, "entries": [[1]] }, "supplies": [2], "demands": [1] }));
    let r = monge(&["tp", path(&unbalanced)]);
    assert_eq!(r.exit_code, EXIT_DOMAIN);
    assert_eq!(r.payload["error"]["kind"], "unbalanced");
    assert_eq!(r.payload["error"]["supply"], 2);

    let not_monge = doc(json!({ "cost": { "rows": 3, "cols": 3, "entries": [[0, 5, 1], [5, 0, 1], [1, 1, 0]] } }));
    let r = monge(&["tsp", path(&not_monge)]);
    assert_eq!(r.exit_code, EXIT_DOMAIN);
    assert_eq!(r.payload["error"], json!({ "kind": "not-monge", "row": 1, "col": 2, "message": r.payload["error"]["message"] }));

    assert_eq!(monge(&["volume", "--shape", "3x4", "--closed-form"]).exit_code, EXIT_DOMAIN);
    assert_eq!(monge(&["count", "--family", "mm", "--shape", "3x3", "-k", "2"]).exit_code, EXIT_DOMAIN);

    assert_eq!(monge(&["frobnicate"]).exit_code, EXIT_USAGE);
    assert_eq!(monge(&["volume", "--shape", "3by3"]).exit_code, EXIT_USAGE);
    assert_eq!(monge(&["count", "--family", "hm", "--shape", "2x2", "-k", "1"]).exit_code, EXIT_USAGE);
    assert_eq!(monge(&["check", "/nonexistent/matrix.json"]).exit_code, EXIT_USAGE);
    assert_eq!(monge(&["tsp", "x.json", "--brute-force", "--supnick"]).exit_code, EXIT_USAGE);

    assert_eq!(monge(&["lattice", "--shape", "5x5"]).exit_code, EXIT_RESOURCE);
    assert_eq!(monge(&["count", "--family", "hm", "--shape", "3", "-k", "500", "--brute-force"]).exit_code, EXIT_RESOURCE);
    assert_eq!(monge(&["numerator", "-p", "40"]).exit_code, EXIT_RESOURCE);

    assert_eq!(monge(&["--help"]).exit_code, EXIT_OK);
}

#[test]
fn binary_is_deterministic_and_reports_exit_codes() {
    let args = ["volume", "--shape", "3x3", "--family", "generic"];
    let first = binary(&args, &[]);
    let second = binary(&args, &[]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let parsed: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(parsed["payload"]["normalized"], "17/1296");
    assert_eq!(parsed["command"], json!(args));

    let lattice = binary(&["lattice", "--shape", "3x3"], &[]);
    assert_eq!(lattice.stdout, binary(&["lattice", "--shape", "3x3"], &[]).stdout);

    assert_eq!(binary(&["nope"], &[]).status.code(), Some(EXIT_USAGE));
    assert_eq!(binary(&["lattice", "--shape", "5x5"], &[]).status.code(), Some(EXIT_RESOURCE));
}

#[test]
fn cell_bound_comes_from_the_environment() {
    let args = ["fvector", "--shape", "2x3"];
    assert_eq!(binary(&args, &[]).status.code(), Some(EXIT_OK));
    assert_eq!(binary(&args, &[("MONGE_MAX_CELLS", "4")]).status.code(), Some(EXIT_RESOURCE));
    assert_eq!(binary(&args, &[("MONGE_MAX_CELLS", "many")]).status.code(), Some(EXIT_USAGE));
    let wider = binary(&["volume", "--shape", "2x9"], &[("MONGE_MAX_CELLS", "18")]);
    assert_eq!(wider.status.code(), Some(EXIT_OK));
    let parsed: Value = serde_json::from_slice(&wider.stdout).unwrap();
    assert_eq!(parsed["payload"]["normalized"], "1/362880");
}

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dyndeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dyndeg"))
        .args(args)
        .env_remove("DYNDEG_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = dyndeg(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn code(args: &[&str]) -> i32 {
    dyndeg(args).status.code().expect("exit code")
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["nonsense"]), 2);
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["certify", "--matrix", "[[2,0],[0,1]]"]), 2);
    assert_eq!(code(&["monomial", "--matrix", "[[1,2],[2,4]]"]), 2);
    assert_eq!(code(&["monomial", "--matrix", "not-a-file.json"]), 2);
    assert_eq!(code(&["charpoly", "--matrix", "[[1,2],[3]]"]), 2);
    assert_eq!(code(&["--tol", "0", "charpoly", "--matrix", "[[1]]"]), 2);
    assert_eq!(code(&["--primes", "15", "matinv", "--q", "2", "--which", "J"]), 2);
    assert_eq!(code(&["matinv", "--q", "5", "--which", "K", "--mode", "symbolic"]), 2);
    assert_eq!(code(&["fab", "search", "--n", "3", "--prime", "20011"]), 2);
    assert_eq!(code(&["--version"]), 0);
}

#[test]
fn monomial_worked_example() {
    let r = report(&["monomial", "--matrix", "[[1,-1],[-2,-3]]"]);
    let res = &r["results"];
    assert_eq!(
        strings(&res["projectivized"]["components"]),
        vec!["x1^2*x2^3", "x1^3*x2^2", "x0^5"]
    );
    assert_eq!(res["projectivized"]["degree"], "5");
    assert_eq!(res["deg_1"], "5");
    let m: Vec<Vec<String>> = res["deg_p"][0]["matrix"]
        .as_array()
        .unwrap()
        .iter()
        .map(strings)
        .collect();
    assert_eq!(m, vec![vec!["1", "1"], vec!["2", "3"]]);
    assert!(r["primes"].as_array().unwrap().is_empty());
}

#[test]
fn chi_zero() {
    let r = report(&["fab", "chi", "--n", "0"]);
    assert_eq!(strings(&r["results"]["coefficients"]), vec!["-1", "-1", "0", "1", "1"]);
    assert_eq!(r["results"]["charpoly_matches"], true);
}

#[test]
fn certify_identity_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "identity.json", "[[1,0,0],[0,1,0],[0,0,1]]");
    let r = report(&["certify", "--matrix", &path]);
    assert_eq!(r["results"]["case"], "radius_one");
    let golden = report(&["certify", "--matrix", "[[1,1],[1,2]]"]);
    assert_eq!(golden["results"]["case"], "real_dominant_irrational");
}

#[test]
fn charpoly_reports_big_integers_as_strings() {
    let r = report(&["charpoly", "--matrix", "[[\"123456789012345678901\",0],[0,1]]"]);
    assert_eq!(r["results"]["det"], "123456789012345678901");
    assert_eq!(strings(&r["results"]["integer_roots"]), vec!["1", "123456789012345678901"]);
}

#[test]
fn degseq_from_a_spec_file_with_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "k3.json",
        r#"{"kind":"matinv","q":3,"which":"K","mode":"oracle"}"#,
    );
    let csv = dir.path().join("k3.csv");
    let r = report(&["degseq", "--map", &spec, "--n", "4", "--csv", csv.to_str().unwrap()]);
    let degrees = strings(&r["results"]["report"]["degrees"]);
    assert_eq!(degrees, vec!["1", "7", "16", "19", "25"]);
    assert_eq!(r["primes"].as_array().unwrap().len(), 3);
    let text = std::fs::read_to_string(csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,degree,ratio,agree");
    assert_eq!(lines.len(), 6);
    assert!(lines[2].starts_with("1,7,7,"));
}

#[test]
fn spec_warnings_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "x0.json",
        r#"{"kind":"explicit","field":"Z","components":[
            [{"exponents":[2,0,0],"coeff":"1"}],
            [{"exponents":[1,1,0],"coeff":"1"}],
            [{"exponents":[1,0,1],"coeff":"1"}]]}"#,
    );
    let r = report(&["degseq", "--map", &spec, "--n", "3"]);
    assert_eq!(r["results"]["warnings"].as_array().unwrap().len(), 1);
    assert_eq!(strings(&r["results"]["report"]["degrees"]), vec!["1", "1", "1", "1"]);
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"kind":"explicit","field":"Z","components":[
            [{"exponents":[2,0],"coeff":"1"}],
            [{"exponents":[0,1],"coeff":"1"}]]}"#,
    );
    assert_eq!(code(&["degseq", "--map", &bad]), 2);
}

#[test]
fn output_directory_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dyndeg"))
        .args(["--out", "nested/report.json", "fab", "lambda", "--n", "7"])
        .env("DYNDEG_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("nested/report.json")).unwrap();
    let r: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["results"]["is_one"], false);
}

fn without_clock(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_clock_seconds");
    v
}

#[test]
fn reports_are_reproducible() {
    let args = ["--seed", "17", "matinv", "--q", "3", "--which", "K", "--n", "5"];
    let a = report(&args);
    let b = report(&args);
    assert_eq!(without_clock(a.clone()), without_clock(b));

    let primes = strings(&a["primes"]).join(",");
    let replay = report(&[
        "--seed", "17", "--primes", &primes, "matinv", "--q", "3", "--which", "K", "--n", "5",
    ]);
    assert_eq!(replay["results"].to_string(), a["results"].to_string());
    assert_eq!(replay["primes"], a["primes"]);
    assert_eq!(replay["input_sha256"], a["input_sha256"]);
}

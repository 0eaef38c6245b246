use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_implicit-jet"))
        .args(args)
        .env_remove("IMPLICIT_JET_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn formula_plain_and_inverse() {
    let o = run(&["formula", "2", "--form", "delta", "--format", "plain"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "- D[2,0] / fy^3\n");

    let o = run(&["formula", "3", "--form", "inverse", "--format", "plain"]);
    assert_eq!(stdout(&o), "- G[3] / G[1]^4 + 3*G[2]^2 / G[1]^5\n");

    let o = run(&["formula", "3", "--form", "fx0"]);
    assert_eq!(stdout(&o), "- D[3,0] / fy + 3*D[1,1]*D[2,0] / fy^2\n");
}

#[test]
fn formula_json_fourth_order() {
    let o = run(&["formula", "4", "--form", "delta", "--format", "json"]);
    let doc = json(&o);
    let coeffs: Vec<&str> = doc["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["coeff"].as_str().unwrap())
        .collect();
    assert_eq!(coeffs, ["-1", "4", "6", "-3", "-12"]);
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["formula", "2", "--format", "html"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["formula", "13"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["eval", "2", "--problem", "tan"]).status.code(),
        Some(2)
    );

    let raised = Command::new(env!("CARGO_BIN_EXE_implicit-jet"))
        .args(["formula", "13"])
        .env("IMPLICIT_JET_MAX_N", "14")
        .output()
        .unwrap();
    assert_eq!(raised.status.code(), Some(0));
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "--max-n", "4", "--suite", "oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    let last: serde_json::Value = serde_json::from_str(lines.last().unwrap()).unwrap();
    assert_eq!(last["summary"]["passed"], true);
    for line in &lines[..lines.len() - 1] {
        let r: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(r["passed"], true, "{line}");
    }

    let o = run(&["verify", "--max-n", "8", "--suite", "johnson"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn eval_problems() {
    let o = run(&["eval", "2", "--problem", "circle"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["value"], "-1/1");

    let o = run(&["eval", "5", "--problem", "exp", "--float"]);
    assert_eq!(json(&o)["value"], 1.0);

    let o = run(&["eval", "2", "--problem", "lambert", "--check-fd"]);
    let r = json(&o);
    let fd = r["comparisons"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["target"] == "finite_difference")
        .unwrap();
    assert!(fd["rel_error"].as_f64().unwrap() <= 1e-4);
}

#[test]
fn eval_jet_files() {
    let good = scratch(
        "good.json",
        r#"{"x0":"0","y0":"1","order":2,"kind":"rational",
            "partials":{"0,0":"0","1,0":"0","0,1":"2","2,0":"2","1,1":"0","0,2":"2"}}"#,
    );
    let o = run(&["eval", "2", "--jet", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["value"], "-1/1");

    let singular = scratch(
        "singular.json",
        r#"{"x0":0,"y0":1,"order":1,"kind":"float","partials":{"0,0":0,"1,0":1,"0,1":0}}"#,
    );
    assert_eq!(
        run(&[
            "eval",
            "1",
            "--form",
            "elementary",
            "--jet",
            singular.to_str().unwrap()
        ])
        .status
        .code(),
        Some(4)
    );

    let broken = scratch("broken.json", "{ not json");
    assert_eq!(
        run(&["eval", "2", "--jet", broken.to_str().unwrap()])
            .status
            .code(),
        Some(5)
    );
}

#[test]
fn count_tables() {
    let o = run(&["count", "--family", "A", "--max-n", "5"]);
    let text = stdout(&o);
    let totals: Vec<&str> = text
        .lines()
        .filter(|l| l.contains("total"))
        .map(|l| l.rsplit('\t').next().unwrap())
        .collect();
    assert_eq!(totals, ["1", "2", "5", "10"]);

    let o = run(&["count", "--family", "B", "--max-n", "2"]);
    assert!(stdout(&o).ends_with("B\t2\ttotal\t3\n"));
    assert_eq!(
        run(&["count", "--family", "C", "--max-n", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "--max-n", "5", "--suite", "all"][..],
        &["formula", "6", "--form", "elementary", "--format", "latex"][..],
        &["eval", "4", "--problem", "cubic", "--check-fd"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

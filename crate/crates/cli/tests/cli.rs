use std::process::{Command, Output};

use serde_json::Value;
use taulink::exact::parse_rational;
use taulink::report::Report;
use taulink::series::{series_theta_of_f, LaurentSeries};

fn taulink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taulink"))
        .args(args)
        .env_remove("TAULINK_WEIGHT_MAX")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = taulink(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&full)).unwrap()
}

#[test]
fn coefficient_tables() {
    assert_eq!(stdout(&["coeffs", "a", "2", "--format", "json"]).trim(), r#"[["1","2/3"],["2","-1/12"]]"#);
    assert_eq!(stdout(&["coeffs", "e", "3", "--format", "json"]).trim(), r#"[["1","2/3"],["2","-4/45"],["3","2/135"]]"#);
    assert_eq!(stdout(&["coeffs", "b", "2", "--format", "json"]).trim(), r#"[["1","1"],["2","1/3"]]"#);
    assert_eq!(stdout(&["coeffs", "C", "1"]).trim(), "C_0 = 1");
    assert_eq!(stdout(&["coeffs", "d", "2"]).trim(), "d_-1 = -2/3\nd_-2 = 1/6");
    assert!(stdout(&["coeffs", "l", "1"]).contains("l_1 = 1/180"));
    assert!(stdout(&["coeffs", "QB", "2"]).starts_with("QB_0,0 = -1/12\n"));
    assert!(stdout(&["coeffs", "Q", "2"]).starts_with("Q_1,1 = -1/12"));
}

#[test]
fn named_series_text() {
    assert!(stdout(&["series", "f", "3"]).starts_with("z + 2/3 - 1/12 z^-1 "));
    assert!(stdout(&["series", "theta-of-f", "4"]).starts_with("z + 2/3 - 4/45 z^-1 + 2/45 z^-2 "));
    assert!(stdout(&["series", "theta", "4"]).starts_with("z - 1/180 z^-1 + 13/453600 z^-3 + O(z^-5)"));
    assert_eq!(stdout(&["series", "v", "2"]).trim(), "1/3 z^2 + z + 1 + O(z^3)");
}

#[test]
fn series_json_round_trips() {
    let text = stdout(&["series", "theta-of-f", "6", "--format", "json"]);
    let back: LaurentSeries = serde_json::from_str(&text).unwrap();
    assert_eq!(back, series_theta_of_f(6).unwrap());
}

#[test]
fn fk_dump() {
    let text = stdout(&["fk", "3"]);
    assert!(text.contains("1/6\tt0^3"));
    assert!(text.contains("1/24\tt1"));
    let v = json(&["fk", "5"]);
    let corr = v["correlators"]["entries"].as_array().unwrap();
    assert!(corr.iter().any(|e| e[0] == serde_json::json!([0, 0, 0]) && e[1] == "1"));
}

fn terms(poly: &Value) -> Vec<(u64, Value, String)> {
    poly["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["u"].as_u64().unwrap(), t["vars"].clone(), t["coeff"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn fh_dump() {
    let v = json(&["fh", "--u-max", "2", "--weight-max", "7"]);
    let t = terms(&v["fh_t"]);
    let u2t0 = t.iter().find(|(u, vars, _)| *u == 2 && *vars == serde_json::json!([[0, 1]])).unwrap();
    assert_eq!(u2t0.2, "-1/24");

    // u = 0 slice of F_H(u,q) is F_K in q, with t_k = (2k-1)!! q_{2k+1}.
    let fk = json(&["fk", "7"]);
    let mut expected: Vec<(Value, String)> = terms(&fk["free_energy"])
        .into_iter()
        .map(|(_, vars, c)| {
            let mut c = parse_rational(&c).unwrap();
            let mut qvars = Vec::new();
            for pair in vars.as_array().unwrap() {
                let (k, e) = (pair[0].as_i64().unwrap(), pair[1].as_u64().unwrap());
                let df: i64 = (1..=2 * k - 1).step_by(2).product();
                for _ in 0..e {
                    c *= taulink::exact::int(df);
                }
                qvars.push(serde_json::json!([2 * k + 1, e]));
            }
            (Value::Array(qvars), c.to_string())
        })
        .collect();
    let mut slice: Vec<(Value, String)> =
        terms(&v["fh_q"]).into_iter().filter(|(u, _, _)| *u == 0).map(|(_, vars, c)| (vars, c)).collect();
    let key = |x: &(Value, String)| x.0.to_string();
    expected.sort_by_key(key);
    slice.sort_by_key(key);
    assert_eq!(slice, expected);
}

#[test]
fn verify_reports_and_exit_codes() {
    let out = taulink(&["verify", "lemma-c", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["mismatches"], serde_json::json!([]));

    let r: Value = json(&["verify", "prop-quadratic"]);
    assert_eq!(r["passed"], true);

    let r: Value = json(&["verify", "thm1"]);
    assert_eq!(r["passed"], true);
    assert_eq!(r["window"]["u_max"], 4);
    assert_eq!(r["window"]["weight_max"], 9);
}

#[test]
fn report_schema_parses() {
    let text = stdout(&["verify", "cor2", "--u-max", "2", "--weight-max", "5", "--format", "json"]);
    let r: Report = serde_json::from_str(&text).unwrap();
    assert!(r.passed && r.checked > 0);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["coeffs", "x", "2"][..],
        &["coeffs", "a", "0"],
        &["verify", "nope"],
        &["series", "zeta", "3"],
        &["--format", "yaml", "coeffs", "a", "1"],
        &["fk"],
    ] {
        assert_eq!(taulink(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn weight_override_from_environment() {
    let run = |val: &str| {
        Command::new(env!("CARGO_BIN_EXE_taulink"))
            .args(["verify", "thm1", "--u-max", "2", "--format", "json"])
            .env("TAULINK_WEIGHT_MAX", val)
            .output()
            .unwrap()
    };
    let out = run("5");
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["window"]["weight_max"], 5);
    assert_eq!(run("five").status.code(), Some(2));
}

#[test]
fn output_is_reproducible_and_duplicated() {
    let dir = std::env::temp_dir().join(format!("taulink-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("all.json");
    let args = ["verify", "all", "--u-max", "2", "--weight-max", "5", "--seed", "3", "--format", "json"];
    let first = stdout(&args);
    let mut with_out = args.to_vec();
    let path = file.to_str().unwrap().to_string();
    with_out.extend(["--out", &path]);
    let second = stdout(&with_out);
    assert_eq!(first, second);
    assert_eq!(std::fs::read_to_string(&file).unwrap(), first);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["passed"], true);
    std::fs::remove_dir_all(&dir).ok();
}

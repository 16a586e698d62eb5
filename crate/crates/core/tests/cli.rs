mod common;

use std::process::{Command, Output};

use common::fixture;

fn twinreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twinreg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture_arg() -> String {
    fixture("loan_loss_quarterly.csv").to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn report_ends_with_significant_terms() {
    let o = twinreg(&["report", "--input", &fixture_arg(), "--seed", "42", "--draws", "10000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(
        text.trim_end().lines().last().unwrap(),
        "Significant: APLIR, FFR, ExpClaims"
    );
    assert!(text.contains(" term        | estimate  | std.error | statistic | p.value"));
}

#[test]
fn every_command_emits_valid_json() {
    let input = fixture_arg();
    for cmd in ["describe", "anova", "ols", "bayes", "verdict", "report"] {
        let o = twinreg(&[cmd, "--input", &input, "--format", "json"]);
        assert!(o.status.success(), "{cmd}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{cmd}: {e}"));
        assert!(v.is_object(), "{cmd}");
    }
    let daily = fixture("ffr_daily_sample.csv");
    let o = twinreg(&["aggregate", "--input", daily.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn bayes_json_has_no_other_sections() {
    let o = twinreg(&["bayes", "--input", &fixture_arg(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["bayes"]);
    assert_eq!(v["bayes"]["parameters"].as_array().unwrap().len(), 8);
}

#[test]
fn ols_json_keeps_full_precision() {
    let o = twinreg(&["ols", "--input", &fixture_arg(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let claims = &v["ols"]["coef"][7];
    assert_eq!(claims["term"], "ExpClaims");
    let p = claims["p_value"].as_f64().unwrap();
    assert!((p - 4.2411346365103094e-13).abs() < 1e-20);
    assert!(claims.get("statistic").is_some());
}

#[test]
fn singular_design_exits_one() {
    let path = fixture("tiny_singular.csv");
    let o = twinreg(&["ols", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.starts_with("error: singular design"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    let input = fixture_arg();
    for args in [
        vec!["ols"],
        vec!["frobnicate"],
        vec!["bayes", "--input", &input, "--draws", "10"],
        vec!["bayes", "--input", &input, "--ci-level", "1.5"],
        vec!["anova", "--input", &input, "--group", "decade"],
        vec!["ols", "--input", &input, "--format", "xml"],
    ] {
        assert_eq!(twinreg(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert!(twinreg(&["--help"]).status.success());
    assert!(stdout(&twinreg(&["--version"])).starts_with("twinreg "));
}

#[test]
fn missing_file_exits_one() {
    let o = twinreg(&["describe", "--input", "/nonexistent/data.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot open"));
}

#[test]
fn seed_changes_posterior_but_not_ols() {
    let input = fixture_arg();
    let a = twinreg(&["report", "--input", &input, "--seed", "1"]);
    let b = twinreg(&["report", "--input", &input, "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
    let ols = |o: &Output| stdout(o).split("Bayesian").next().unwrap().to_string();
    assert_eq!(ols(&a), ols(&b));
}

#[test]
fn anova_by_year_on_fixture() {
    let o = twinreg(&[
        "anova",
        "--input",
        &fixture_arg(),
        "--group",
        "year",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let row = &v["anova"][0];
    assert_eq!(row["df1"], 9);
    assert_eq!(row["df2"], 27);
    assert!(row["p"].as_f64().unwrap() < 1e-6);
}

#[test]
fn aggregate_prior_month_means() {
    let daily = fixture("ffr_daily_sample.csv");
    let o = twinreg(&[
        "aggregate",
        "--input",
        daily.to_str().unwrap(),
        "--quarter",
        "2011-07-01",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "date,value\n2011-07-01,0.145\n");
}

mod common;

use std::fs::File;

use common::{f_tail_oracle, fixture, normal_equations, TestRng};
use twinreg::bayes::{ConjugatePosterior, PriorSpec};
use twinreg::data::{load_frame, parse_csv, ModelFrame};
use twinreg::describe::{summarize, SUMMARY_VARIABLES};
use twinreg::kernels::f_sf;
use twinreg::ols::{build_design, diagnostics, fit_ols, DesignMatrix};

fn frame() -> ModelFrame {
    load_frame(File::open(fixture("loan_loss_quarterly.csv")).unwrap()).unwrap()
}

#[test]
fn f_tail_matches_quadrature() {
    let got = f_sf(4.26, 3.0, 33.0).unwrap();
    let want = f_tail_oracle(4.26, 3, 33);
    assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    assert!((0.01..0.02).contains(&got));
}

#[test]
fn flat_prior_mean_is_ols() {
    let d = build_design(&frame()).unwrap();
    let fit = fit_ols(&d).unwrap();
    let post = ConjugatePosterior::new(&d, &PriorSpec::uniform_sd(d.p(), 1e6)).unwrap();
    for (m, row) in post.mean().iter().zip(&fit.coef) {
        assert!((m - row.estimate).abs() < 1e-5 * row.std_error, "{}", row.term);
    }
}

#[test]
fn fixture_shape_and_summaries() {
    let f = frame();
    assert_eq!(f.len(), 37);
    let d = build_design(&f).unwrap();
    assert_eq!((d.n(), d.p()), (37, 8));
    let rows = summarize(&f).unwrap();
    assert_eq!(rows.len(), SUMMARY_VARIABLES.len());
    let get = |name: &str| rows.iter().find(|r| r.name == name).unwrap().clone();
    let loss = get("Loss");
    assert!((loss.mean - 0.668).abs() < 5e-4 && (loss.sd - 0.387).abs() < 5e-4);
    let ffr = get("FFR");
    assert!((ffr.mean - 0.673).abs() < 1e-3 && (ffr.sd - 0.781).abs() < 5e-4);
    let claims = get("ExpClaims");
    assert!((claims.mean - 15.3).abs() < 0.05 && (claims.sd - 11.6).abs() < 0.05);
    // design column means agree with the descriptive table
    for (j, name) in d.names().iter().enumerate().skip(1) {
        let col = d.x().column(j);
        let mean = col.iter().sum::<f64>() / col.len() as f64;
        assert!((mean - get(name).mean).abs() <= 1e-12 * mean.abs().max(1.0), "{name}");
    }
}

#[test]
fn shuffled_rows_give_identical_frame() {
    let text = std::fs::read_to_string(fixture("loan_loss_quarterly.csv")).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let header = lines.remove(0);
    lines.reverse();
    lines.swap(3, 20);
    let shuffled = format!("{header}\n{}\n", lines.join("\n"));
    assert_eq!(load_frame(shuffled.as_bytes()).unwrap(), frame());
}

#[test]
fn frame_csv_round_trip_is_bit_exact() {
    let f = frame();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frame.csv");
    f.write_csv(File::create(&path).unwrap()).unwrap();
    let back = ModelFrame::read_csv(File::open(&path).unwrap()).unwrap();
    assert_eq!(back, f);
}

#[test]
fn dropped_row_shrinks_fit() {
    let text = std::fs::read_to_string(fixture("loan_loss_quarterly.csv")).unwrap();
    let edited = text.replacen(",0.14,3669000", ",,3669000", 1);
    assert_eq!(parse_csv(edited.as_bytes()).unwrap().len(), 36);
    let fit = fit_ols(&build_design(&load_frame(edited.as_bytes()).unwrap()).unwrap()).unwrap();
    assert_eq!(fit.n, 36);
    assert_eq!(fit.df_resid, 28);
}

#[test]
fn fixture_diagnostics() {
    let d = build_design(&frame()).unwrap();
    let fit = fit_ols(&d).unwrap();
    let diag = diagnostics(&d, &fit).unwrap();
    assert!(diag.mean_resid.abs() < 1e-10);
    assert!((1.5..=2.5).contains(&diag.dw_stat));
    assert!(diag.jb_p > 0.05 && diag.bp_p > 0.05);
    assert_eq!(diag.bp_df, 7);
    // the fixture's regressors are strongly collinear; the advisory must say so
    assert!(diag.max_vif() > 10.0);
    assert!(diag
        .advisories(10.0, 0.05)
        .iter()
        .any(|a| a.starts_with("multicollinearity")));
}

#[test]
fn residuals_orthogonal_to_design() {
    let mut rng = TestRng::new(99);
    for _ in 0..20 {
        let n = rng.range(10, 40);
        let cols: Vec<Vec<f64>> = (0..3).map(|_| (0..n).map(|_| rng.normal()).collect()).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let d = DesignMatrix::new(&cols, &["a", "b", "c"], y.clone()).unwrap();
        let fit = fit_ols(&d).unwrap();
        for g in d.x().tr_mul_vec(&fit.residuals) {
            assert!(g.abs() < 1e-8);
        }
        for ((f, e), y) in fit.fitted.iter().zip(&fit.residuals).zip(&y) {
            assert!((f + e - y).abs() < 1e-10);
        }
        let oracle = normal_equations(&cols, &y);
        for (row, b) in fit.coef.iter().zip(oracle) {
            assert!((row.estimate - b).abs() < 1e-8);
        }
    }
}

//! Text and JSON rendering of pipeline results.
//!
//! Text tables round for display: three significant figures for the
//! descriptive, ANOVA and OLS tables (scientific notation for p-values), two
//! decimals for the posterior table. JSON carries every value at full
//! precision.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::bayes::{IntervalKind, PosteriorSummary};
use crate::describe::{AnovaResult, SummaryRow};
use crate::error::{Error, Result};
use crate::ols::{Diagnostics, OlsFit};
use crate::verdict::{significant_terms, Verdict, VerdictConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OlsSection {
    #[serde(flatten)]
    pub fit: OlsFit,
    pub diagnostics: Option<Diagnostics>,
    pub advisories: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictSection {
    pub config: VerdictConfig,
    pub verdicts: Vec<Verdict>,
    pub significant: Vec<String>,
}

impl VerdictSection {
    pub fn new(config: VerdictConfig, verdicts: Vec<Verdict>) -> Self {
        let significant = significant_terms(&verdicts).into_iter().map(String::from).collect();
        VerdictSection {
            config,
            verdicts,
            significant,
        }
    }
}

/// Every section is optional; absent sections are omitted from both renderings.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descriptive: Option<Vec<SummaryRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anova: Option<Vec<AnovaResult>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ols: Option<OlsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bayes: Option<PosteriorSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictSection>,
}

impl Report {
    fn is_empty(&self) -> bool {
        self.descriptive.is_none()
            && self.anova.is_none()
            && self.ols.is_none()
            && self.bayes.is_none()
            && self.verdict.is_none()
    }
}

pub fn render_report(report: &Report, format: Format) -> Result<String> {
    if report.is_empty() {
        return Err(Error::domain("report has no result sections"));
    }
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Text => Ok(render_text(report)),
    }
}

/// Three significant figures; values of 100 or more print as integers with a
/// trailing point.
pub fn sig3(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = |v: f64| v.abs().log10().floor() as i32;
    let e0 = exp(x);
    let scale = 10f64.powi(2 - e0);
    let rounded = (x * scale).round() / scale;
    let e = exp(rounded);
    if e >= 2 {
        format!("{rounded:.0}.")
    } else if e < -4 {
        format!("{x:.2e}")
    } else {
        format!("{:.*}", (2 - e) as usize, rounded)
    }
}

/// Scientific notation with a space-padded two-digit exponent, e.g. `2.49e-15`, `7.96e- 2`.
pub fn sci_p(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.2e}");
    let (mantissa, exponent) = s.split_once('e').expect("exponent present");
    let (sign, digits) = match exponent.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exponent),
    };
    format!("{mantissa}e{sign}{digits:>2}")
}

fn dec2(x: f64) -> String {
    format!("{x:.2}")
}

fn pct(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.2}")
    }
}

fn render_text(r: &Report) -> String {
    let mut out = String::new();
    if let Some(rows) = &r.descriptive {
        render_descriptive(&mut out, rows);
    }
    if let Some(anova) = &r.anova {
        render_anova(&mut out, anova);
    }
    if let Some(ols) = &r.ols {
        render_ols(&mut out, ols);
    }
    if let Some(bayes) = &r.bayes {
        render_bayes(&mut out, bayes);
    }
    if let Some(v) = &r.verdict {
        render_verdict(&mut out, v);
    }
    out
}

const POPULATION_VARS: [&str; 4] = ["Month", "Year", "AdjPop", "Ratio"];

fn render_descriptive(out: &mut String, rows: &[SummaryRow]) {
    let (pop, fin): (Vec<&SummaryRow>, Vec<&SummaryRow>) =
        rows.iter().partition(|r| POPULATION_VARS.contains(&r.name.as_str()));
    for (title, group) in [
        ("Descriptive statistics: population and temporal data", pop),
        ("Descriptive statistics: financial data", fin),
    ] {
        if group.is_empty() {
            continue;
        }
        let _ = writeln!(out, "{title}");
        let _ = writeln!(
            out,
            " {:<10}| {:>9} | {:>9} | {:>9} | {:>9} | {:>9}",
            "variable", "mean", "sd", "median", "min", "max"
        );
        let _ = writeln!(out, "{}", "-".repeat(69));
        for r in group {
            let _ = writeln!(
                out,
                " {:<10}| {:>9} | {:>9} | {:>9} | {:>9} | {:>9}",
                r.name,
                sig3(r.mean),
                sig3(r.sd),
                sig3(r.median),
                sig3(r.min),
                sig3(r.max)
            );
        }
        out.push('\n');
    }
}

fn render_anova(out: &mut String, rows: &[AnovaResult]) {
    let _ = writeln!(out, "One-way ANOVA of Loss");
    let _ = writeln!(
        out,
        " {:<9}| {:>6} | {:>4} | {:>9} | {:>4} | {:>4} | {:>9}",
        "grouping", "groups", "n", "F", "df1", "df2", "p.value"
    );
    let _ = writeln!(out, "{}", "-".repeat(63));
    for a in rows {
        let _ = writeln!(
            out,
            " {:<9}| {:>6} | {:>4} | {:>9} | {:>4} | {:>4} | {:>9}",
            a.group_label,
            a.k,
            a.n,
            sig3(a.f_stat),
            a.df_between,
            a.df_within,
            sci_p(a.p_value)
        );
    }
    out.push('\n');
}

fn render_ols(out: &mut String, s: &OlsSection) {
    let _ = writeln!(out, "Ordinary least squares");
    let _ = writeln!(out, " term        | estimate  | std.error | statistic | p.value");
    let _ = writeln!(out, "{}", "-".repeat(58));
    for c in &s.fit.coef {
        let _ = writeln!(
            out,
            " {:<12}| {:>9} | {:>9} | {:>9} | {}",
            c.term,
            sig3(c.estimate),
            sig3(c.std_error),
            sig3(c.t_stat),
            sci_p(c.p_value)
        );
    }
    let _ = writeln!(
        out,
        "n = {}, residual df = {}, sigma = {}, R-squared = {}, adjusted R-squared = {}",
        s.fit.n,
        s.fit.df_resid,
        sig3(s.fit.sigma2_hat.sqrt()),
        sig3(s.fit.r2),
        sig3(s.fit.adj_r2)
    );
    if let Some(d) = &s.diagnostics {
        out.push('\n');
        let _ = writeln!(out, "Diagnostics");
        let vifs: Vec<String> = d.vif.iter().map(|v| format!("{}={}", v.term, sig3(v.vif))).collect();
        let _ = writeln!(out, " VIF: {}", vifs.join(", "));
        let _ = writeln!(
            out,
            " Breusch-Pagan: stat = {}, df = {}, p = {}",
            sig3(d.bp_stat),
            d.bp_df,
            sci_p(d.bp_p)
        );
        let _ = writeln!(out, " Jarque-Bera: stat = {}, p = {}", sig3(d.jb_stat), sci_p(d.jb_p));
        let _ = writeln!(out, " Durbin-Watson: {}", sig3(d.dw_stat));
        let _ = writeln!(out, " mean residual: {:.3e}", d.mean_resid);
        if s.advisories.is_empty() {
            let _ = writeln!(out, " advisories: none");
        } else {
            for a in &s.advisories {
                let _ = writeln!(out, " advisory: {a}");
            }
        }
    }
    out.push('\n');
}

fn render_bayes(out: &mut String, b: &PosteriorSummary) {
    let label = format!(
        "{}% {}",
        dec2(b.ci_level * 100.0).trim_end_matches('0').trim_end_matches('.'),
        match b.interval {
            IntervalKind::EqualTailed => "CI",
            IntervalKind::Hdi => "HDI",
        }
    );
    let _ = writeln!(out, "Bayesian linear regression ({} posterior draws)", b.draws);
    let _ = writeln!(
        out,
        "Parameter   | {:>8} | {:^19} | {:^14} | {:>9}",
        "Median", label, "ROPE", "% in ROPE"
    );
    let _ = writeln!(out, "{}", "-".repeat(72));
    for p in &b.parameters {
        let _ = writeln!(
            out,
            "{:<12}| {:>8} | [{:>7}, {:>7}] | [{}, {}]  | {:>9}",
            p.name,
            dec2(p.median),
            dec2(p.ci_low),
            dec2(p.ci_high),
            dec2(p.rope_low),
            dec2(p.rope_high),
            pct(p.pirope)
        );
    }
    out.push('\n');
}

fn render_verdict(out: &mut String, v: &VerdictSection) {
    let _ = writeln!(
        out,
        "Combined significance (p < {} and % in ROPE <= {})",
        v.config.alpha, v.config.pirope_epsilon
    );
    let _ = writeln!(
        out,
        " {:<10}| {:>9} | {:>9} | {:^11} | {:^8} | verdict",
        "term", "p.value", "% in ROPE", "frequentist", "bayesian"
    );
    let _ = writeln!(out, "{}", "-".repeat(76));
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    for x in &v.verdicts {
        let _ = writeln!(
            out,
            " {:<10}| {:>9} | {:>9} | {:^11} | {:^8} | {}",
            x.term,
            sci_p(x.p_value),
            pct(x.pirope),
            yes_no(x.freq_significant),
            yes_no(x.bayes_significant),
            x.combined.as_str()
        );
    }
    let listed = if v.significant.is_empty() {
        "none".to_string()
    } else {
        v.significant.join(", ")
    };
    let _ = writeln!(out, "Significant: {listed}");
}

//! Combined frequentist/Bayesian significance rule.
//!
//! A regressor is `significant` when its OLS p-value is below `alpha` *and* its
//! percent-in-ROPE is at most `pirope_epsilon`; `ambiguous` when exactly one
//! of the two holds; `not-significant` otherwise.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bayes::PosteriorSummary;
use crate::error::{Error, Result};
use crate::ols::{OlsFit, INTERCEPT};

pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_PIROPE_EPSILON: f64 = 1.0;
pub const DEFAULT_NULL_THRESHOLD: f64 = 99.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerdictConfig {
    pub alpha: f64,
    /// PIROPE at or below this percent counts as "0 or very close".
    pub pirope_epsilon: f64,
    /// PIROPE at or above this percent counts as "100 or very close".
    pub null_threshold: f64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig {
            alpha: DEFAULT_ALPHA,
            pirope_epsilon: DEFAULT_PIROPE_EPSILON,
            null_threshold: DEFAULT_NULL_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Combined {
    Significant,
    NotSignificant,
    Ambiguous,
}

impl Combined {
    pub fn as_str(self) -> &'static str {
        match self {
            Combined::Significant => "significant",
            Combined::NotSignificant => "not-significant",
            Combined::Ambiguous => "ambiguous",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub term: String,
    pub p_value: f64,
    pub pirope: f64,
    pub freq_significant: bool,
    pub bayes_significant: bool,
    /// Posterior mass essentially all inside the ROPE.
    pub bayes_null: bool,
    pub combined: Combined,
}

/// Verdict for a single regressor; pure in its inputs.
pub fn judge(term: &str, p_value: f64, pirope: f64, cfg: &VerdictConfig) -> Verdict {
    let freq_significant = p_value < cfg.alpha;
    let bayes_significant = pirope <= cfg.pirope_epsilon;
    let combined = match (freq_significant, bayes_significant) {
        (true, true) => Combined::Significant,
        (false, false) => Combined::NotSignificant,
        _ => Combined::Ambiguous,
    };
    Verdict {
        term: term.to_string(),
        p_value,
        pirope,
        freq_significant,
        bayes_significant,
        bayes_null: pirope >= cfg.null_threshold,
        combined,
    }
}

pub fn combined_verdict(fit: &OlsFit, post: &PosteriorSummary, cfg: &VerdictConfig) -> Result<Vec<Verdict>> {
    let freq: BTreeSet<&str> = fit
        .coef
        .iter()
        .map(|c| c.term.as_str())
        .filter(|t| *t != INTERCEPT)
        .collect();
    let bayes: BTreeSet<&str> = post
        .parameters
        .iter()
        .map(|p| p.name.as_str())
        .filter(|t| *t != INTERCEPT)
        .collect();
    if freq != bayes {
        let only_freq: Vec<&str> = freq.difference(&bayes).copied().collect();
        let only_bayes: Vec<&str> = bayes.difference(&freq).copied().collect();
        return Err(Error::Consistency(format!(
            "parameter sets differ (only in OLS: {only_freq:?}; only in posterior: {only_bayes:?})"
        )));
    }
    Ok(fit
        .coef
        .iter()
        .filter(|c| c.term != INTERCEPT)
        .map(|c| {
            let pirope = post.parameter(&c.term).expect("checked above").pirope;
            judge(&c.term, c.p_value, pirope, cfg)
        })
        .collect())
}

pub fn significant_terms(verdicts: &[Verdict]) -> Vec<&str> {
    verdicts
        .iter()
        .filter(|v| v.combined == Combined::Significant)
        .map(|v| v.term.as_str())
        .collect()
}

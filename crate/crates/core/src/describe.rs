//! Descriptive statistics and one-way ANOVA.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::data::ModelFrame;
use crate::error::{Error, Result};
use crate::kernels::f_sf;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

/// Variables summarized by [`summarize`], in output order: population and
/// temporal first, then financial.
pub const SUMMARY_VARIABLES: [&str; 9] = [
    "Month",
    "Year",
    "AdjPop",
    "Ratio",
    "Loss",
    "APLIR",
    "FFR",
    "AdjClaims",
    "ExpClaims",
];

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n − 1 denominator). Zero for fewer than two values.
pub fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Median; even-length samples take the midpoint of the two central values.
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn summarize_column(name: &str, xs: &[f64]) -> SummaryRow {
    SummaryRow {
        name: name.to_string(),
        mean: mean(xs),
        sd: sample_sd(xs),
        median: median(xs),
        min: xs.iter().copied().fold(f64::INFINITY, f64::min),
        max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

pub fn summarize(frame: &ModelFrame) -> Result<Vec<SummaryRow>> {
    if frame.is_empty() {
        return Err(Error::domain("cannot summarize an empty frame"));
    }
    Ok(SUMMARY_VARIABLES
        .iter()
        .map(|name| summarize_column(name, &frame.column(name).expect("known column")))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnovaResult {
    pub group_label: String,
    pub k: usize,
    pub n: usize,
    #[serde(rename = "f")]
    pub f_stat: f64,
    #[serde(rename = "df1")]
    pub df_between: usize,
    #[serde(rename = "df2")]
    pub df_within: usize,
    pub ss_between: f64,
    pub ss_within: f64,
    #[serde(rename = "p")]
    pub p_value: f64,
}

/// One-way ANOVA of `values` grouped by `groups`.
pub fn one_way_anova<L: Ord + Clone>(group_label: &str, values: &[f64], groups: &[L]) -> Result<AnovaResult> {
    if values.len() != groups.len() {
        return Err(Error::Grouping(format!(
            "{} values but {} group labels",
            values.len(),
            groups.len()
        )));
    }
    let mut by_group: BTreeMap<L, Vec<f64>> = BTreeMap::new();
    for (v, g) in values.iter().zip(groups) {
        by_group.entry(g.clone()).or_default().push(*v);
    }
    let k = by_group.len();
    let n = values.len();
    if k < 2 {
        return Err(Error::Grouping(format!("need at least 2 groups, got {k}")));
    }
    if n <= k {
        return Err(Error::DegreesOfFreedom(format!(
            "{n} observations in {k} groups leaves no within-group degrees of freedom"
        )));
    }
    let grand = mean(values);
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for members in by_group.values() {
        let gm = mean(members);
        ssb += members.len() as f64 * (gm - grand).powi(2);
        ssw += members.iter().map(|x| (x - gm).powi(2)).sum::<f64>();
    }
    let df_between = k - 1;
    let df_within = n - k;
    let msb = ssb / df_between as f64;
    let msw = ssw / df_within as f64;
    let f_stat = if ssb == 0.0 {
        0.0
    } else if msw == 0.0 {
        f64::INFINITY
    } else {
        msb / msw
    };
    let p_value = f_sf(f_stat, df_between as f64, df_within as f64)?;
    Ok(AnovaResult {
        group_label: group_label.to_string(),
        k,
        n,
        f_stat,
        df_between,
        df_within,
        ss_between: ssb,
        ss_within: ssw,
        p_value,
    })
}

/// How to group Loss for the ANOVA.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKey {
    /// Calendar month-of-year of the quarter start.
    Month,
    /// Calendar year.
    Year,
}

impl GroupKey {
    pub fn label(self) -> &'static str {
        match self {
            GroupKey::Month => "month",
            GroupKey::Year => "year",
        }
    }
}

pub fn anova_loss(frame: &ModelFrame, key: GroupKey) -> Result<AnovaResult> {
    let loss = frame.loss();
    let groups: Vec<i32> = frame
        .rows
        .iter()
        .map(|r| match key {
            GroupKey::Month => r.calendar_month() as i32,
            GroupKey::Year => r.calendar_year(),
        })
        .collect();
    one_way_anova(key.label(), &loss, &groups)
}

//! `twinreg` command line.
//!
//! Exit codes: 0 on success, 2 on usage errors, 1 on data or numeric errors
//! (diagnostic on stderr, prefixed by the failing stage).

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use chrono::{Datelike, NaiveDate};
use clap::{Args, Parser, Subcommand};

use crate::bayes::IntervalKind;
use crate::data::{aggregate_prior_month, load_frame, parse_daily_csv};
use crate::describe::GroupKey;
use crate::error::{Error, Result};
use crate::pipeline::{run_analysis, AnalysisConfig, PriorOverrides, Sections};
use crate::report::{render_report, Format};
use crate::verdict::VerdictConfig;

#[derive(Debug, Parser)]
#[command(
    name = "twinreg",
    version,
    about = "Paired OLS and Bayesian regression of net loan loss"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Descriptive statistics of every model variable
    Describe(Common),
    /// One-way ANOVA of Loss grouped by calendar month or year
    Anova {
        #[command(flatten)]
        common: Common,
        /// Grouping key; both groupings are reported when omitted
        #[arg(long, value_parser = parse_group)]
        group: Option<GroupKey>,
    },
    /// OLS coefficient table, fit statistics and diagnostics
    Ols {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Posterior medians, credible intervals and percent in ROPE
    Bayes {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Combined frequentist/Bayesian significance per regressor
    Verdict {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Every section above in one document
    Report {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Average a daily `date,value` series over the month before each quarter start
    Aggregate {
        #[command(flatten)]
        common: Common,
        /// Quarter start to aggregate for (repeatable); defaults to every quarter covered
        #[arg(long, value_parser = parse_date)]
        quarter: Vec<NaiveDate>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Input CSV
    #[arg(long)]
    input: PathBuf,
    /// Output format: text or json
    #[arg(long, default_value = "text", value_parser = parse_format)]
    format: Format,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Random seed for posterior sampling
    #[arg(long, default_value_t = crate::bayes::DEFAULT_SEED)]
    seed: u64,
    /// Posterior draws per chain (at least 1000)
    #[arg(long, default_value_t = crate::bayes::DEFAULT_DRAWS, value_parser = parse_draws)]
    draws: usize,
    /// Independent chains with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=64))]
    chains: u32,
    /// Credible interval level
    #[arg(long, default_value_t = crate::bayes::DEFAULT_CI_LEVEL, value_parser = parse_level)]
    ci_level: f64,
    /// Use the highest-density interval instead of the equal-tailed one
    #[arg(long)]
    hdi: bool,
    /// Frequentist significance level
    #[arg(long, default_value_t = crate::verdict::DEFAULT_ALPHA, value_parser = parse_level)]
    alpha: f64,
    /// Percent in ROPE at or below which a term counts as Bayesian-significant
    #[arg(long, default_value_t = crate::verdict::DEFAULT_PIROPE_EPSILON, value_parser = parse_percent)]
    pirope_epsilon: f64,
    /// Percent in ROPE at or above which a term counts as practically null
    #[arg(long, default_value_t = crate::verdict::DEFAULT_NULL_THRESHOLD, value_parser = parse_percent)]
    null_threshold: f64,
    /// VIF at or above which multicollinearity is flagged
    #[arg(long, default_value_t = crate::ols::DEFAULT_VIF_CUTOFF)]
    vif_cutoff: f64,
    /// Prior means, comma separated (centered intercept first)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coef_mean: Option<Vec<f64>>,
    /// Prior standard deviations, comma separated (centered intercept first)
    #[arg(long, value_delimiter = ',')]
    coef_sd: Option<Vec<f64>>,
    /// Inverse-gamma shape of the σ² prior
    #[arg(long)]
    sigma2_shape: Option<f64>,
    /// Inverse-gamma scale of the σ² prior
    #[arg(long)]
    sigma2_scale: Option<f64>,
}

impl ModelArgs {
    fn config(&self) -> AnalysisConfig {
        AnalysisConfig {
            draws: self.draws,
            seed: self.seed,
            chains: self.chains as usize,
            ci_level: self.ci_level,
            interval: if self.hdi {
                IntervalKind::Hdi
            } else {
                IntervalKind::EqualTailed
            },
            verdict: VerdictConfig {
                alpha: self.alpha,
                pirope_epsilon: self.pirope_epsilon,
                null_threshold: self.null_threshold,
            },
            vif_cutoff: self.vif_cutoff,
            prior: PriorOverrides {
                coef_mean: self.coef_mean.clone(),
                coef_sd: self.coef_sd.clone(),
                sigma2_shape: self.sigma2_shape,
                sigma2_scale: self.sigma2_scale,
            },
        }
    }
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_group(s: &str) -> std::result::Result<GroupKey, String> {
    match s {
        "month" => Ok(GroupKey::Month),
        "year" => Ok(GroupKey::Year),
        other => Err(format!("unknown grouping `{other}` (expected month or year)")),
    }
}

fn parse_date(s: &str) -> std::result::Result<NaiveDate, String> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|e| e.to_string())
}

fn parse_draws(s: &str) -> std::result::Result<usize, String> {
    let n: usize = s.parse().map_err(|e: std::num::ParseIntError| e.to_string())?;
    if n < crate::bayes::MIN_DRAWS {
        return Err(format!("must be at least {}", crate::bayes::MIN_DRAWS));
    }
    Ok(n)
}

fn parse_level(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e: std::num::ParseFloatError| e.to_string())?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("must lie strictly between 0 and 1".into())
    }
}

fn parse_percent(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e: std::num::ParseFloatError| e.to_string())?;
    if (0.0..=100.0).contains(&v) {
        Ok(v)
    } else {
        Err("must lie in [0, 100]".into())
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(format!("cannot open {}: {e}", path.display())))
}

fn analyze(common: &Common, cfg: &AnalysisConfig, sections: &Sections) -> Result<String> {
    let frame = load_frame(open(&common.input)?)?;
    let report = run_analysis(&frame, cfg, sections)?;
    render_report(&report, common.format)
}

fn aggregate(common: &Common, quarters: &[NaiveDate]) -> Result<String> {
    let daily = parse_daily_csv(open(&common.input)?)?;
    let quarters: Vec<NaiveDate> = if quarters.is_empty() {
        let mut qs: Vec<NaiveDate> = daily
            .iter()
            .filter_map(|(d, _)| {
                // the quarter start following this date's month, when that month precedes a quarter
                let (y, m) = if d.month() == 12 {
                    (d.year() + 1, 1)
                } else {
                    (d.year(), d.month() + 1)
                };
                matches!(m, 1 | 4 | 7 | 10)
                    .then(|| NaiveDate::from_ymd_opt(y, m, 1))
                    .flatten()
            })
            .collect();
        qs.sort();
        qs.dedup();
        qs
    } else {
        quarters.to_vec()
    };
    let mut rows = Vec::with_capacity(quarters.len());
    for q in quarters {
        rows.push((q, aggregate_prior_month(&daily, q)?));
    }
    match common.format {
        Format::Text => {
            let mut s = String::from("date,value\n");
            for (d, v) in rows {
                s.push_str(&format!("{d},{v}\n"));
            }
            Ok(s)
        }
        Format::Json => {
            let arr: Vec<serde_json::Value> = rows
                .into_iter()
                .map(|(d, v)| serde_json::json!({ "date": d.to_string(), "value": v }))
                .collect();
            let mut s = serde_json::to_string_pretty(&arr).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

fn dispatch(cmd: &Command) -> Result<String> {
    let model_only = |ols: bool, bayes: bool, verdict: bool| Sections {
        ols,
        bayes,
        verdict,
        ..Sections::default()
    };
    match cmd {
        Command::Describe(common) => analyze(
            common,
            &AnalysisConfig::default(),
            &Sections {
                descriptive: true,
                ..Sections::default()
            },
        ),
        Command::Anova { common, group } => {
            let anova = match group {
                Some(g) => vec![*g],
                None => vec![GroupKey::Month, GroupKey::Year],
            };
            analyze(
                common,
                &AnalysisConfig::default(),
                &Sections {
                    anova,
                    ..Sections::default()
                },
            )
        }
        Command::Ols { common, model } => analyze(common, &model.config(), &model_only(true, false, false)),
        Command::Bayes { common, model } => analyze(common, &model.config(), &model_only(false, true, false)),
        Command::Verdict { common, model } => analyze(common, &model.config(), &model_only(false, false, true)),
        Command::Report { common, model } => analyze(common, &model.config(), &Sections::all()),
        Command::Aggregate { common, quarter } => aggregate(common, quarter),
    }
}

/// Run the CLI with explicit argv and output streams; returns the exit code.
pub fn run<I, T, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    2
                }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(text) => match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: output: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

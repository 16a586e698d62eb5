//! End-to-end orchestration shared by the CLI and the C ABI.

use serde::Serialize;

use crate::bayes::{
    sample_posterior, sample_posterior_chains, summarize_posterior, IntervalKind, PosteriorSummary, PriorSpec,
    DEFAULT_CI_LEVEL, DEFAULT_DRAWS, DEFAULT_SEED, MIN_DRAWS,
};
use crate::data::ModelFrame;
use crate::describe::{anova_loss, summarize, GroupKey};
use crate::error::{Error, Result};
use crate::kernels::RandomSource;
use crate::ols::{build_design, diagnostics, fit_ols, DesignMatrix, DEFAULT_VIF_CUTOFF};
use crate::report::{OlsSection, Report, VerdictSection};
use crate::verdict::{combined_verdict, VerdictConfig};

/// Optional replacements for the auto-scaled prior.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PriorOverrides {
    pub coef_mean: Option<Vec<f64>>,
    pub coef_sd: Option<Vec<f64>>,
    pub sigma2_shape: Option<f64>,
    pub sigma2_scale: Option<f64>,
}

impl PriorOverrides {
    pub fn resolve(&self, d: &DesignMatrix) -> Result<PriorSpec> {
        let mut prior = PriorSpec::auto(d)?;
        if let Some(m) = &self.coef_mean {
            prior.coef_mean = m.clone();
        }
        if let Some(s) = &self.coef_sd {
            prior.coef_sd = s.clone();
        }
        if let Some(a) = self.sigma2_shape {
            prior.sigma2_shape = a;
        }
        if let Some(b) = self.sigma2_scale {
            prior.sigma2_scale = b;
        }
        Ok(prior)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisConfig {
    pub draws: usize,
    pub seed: u64,
    /// Independent chains (seeds `seed, seed+1, …`), each of `draws` draws.
    pub chains: usize,
    pub ci_level: f64,
    pub interval: IntervalKind,
    pub verdict: VerdictConfig,
    pub vif_cutoff: f64,
    pub prior: PriorOverrides,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            draws: DEFAULT_DRAWS,
            seed: DEFAULT_SEED,
            chains: 1,
            ci_level: DEFAULT_CI_LEVEL,
            interval: IntervalKind::EqualTailed,
            verdict: VerdictConfig::default(),
            vif_cutoff: DEFAULT_VIF_CUTOFF,
            prior: PriorOverrides::default(),
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(Error::domain(format!(
                "ci level must lie in (0, 1), got {}",
                self.ci_level
            )));
        }
        if self.draws < MIN_DRAWS {
            return Err(Error::domain(format!(
                "draws must be at least {MIN_DRAWS}, got {}",
                self.draws
            )));
        }
        if self.chains == 0 {
            return Err(Error::domain("chains must be at least 1"));
        }
        Ok(())
    }
}

/// Which sections to compute.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sections {
    pub descriptive: bool,
    pub anova: Vec<GroupKey>,
    pub ols: bool,
    pub bayes: bool,
    pub verdict: bool,
}

impl Sections {
    pub fn all() -> Self {
        Sections {
            descriptive: true,
            anova: vec![GroupKey::Month, GroupKey::Year],
            ols: true,
            bayes: true,
            verdict: true,
        }
    }
}

pub fn posterior_summary(d: &DesignMatrix, cfg: &AnalysisConfig) -> Result<PosteriorSummary> {
    cfg.validate()?;
    let prior = cfg.prior.resolve(d)?;
    let draws = if cfg.chains == 1 {
        sample_posterior(d, &prior, cfg.draws, &mut RandomSource::new(cfg.seed))?
    } else {
        let seeds: Vec<u64> = (0..cfg.chains as u64).map(|k| cfg.seed.wrapping_add(k)).collect();
        sample_posterior_chains(d, &prior, cfg.draws, &seeds)?
    };
    summarize_posterior(&draws, d.y(), cfg.ci_level, cfg.interval)
}

pub fn run_analysis(frame: &ModelFrame, cfg: &AnalysisConfig, sections: &Sections) -> Result<Report> {
    cfg.validate()?;
    let mut report = Report::default();
    if sections.descriptive {
        report.descriptive = Some(summarize(frame)?);
    }
    if !sections.anova.is_empty() {
        report.anova = Some(
            sections
                .anova
                .iter()
                .map(|&k| anova_loss(frame, k))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let need_ols = sections.ols || sections.verdict;
    let need_bayes = sections.bayes || sections.verdict;
    if !(need_ols || need_bayes) {
        return Ok(report);
    }
    let design = build_design(frame)?;
    let fit = if need_ols { Some(fit_ols(&design)?) } else { None };
    let post = if need_bayes {
        Some(posterior_summary(&design, cfg)?)
    } else {
        None
    };
    if sections.verdict {
        let verdicts = combined_verdict(
            fit.as_ref().expect("fit"),
            post.as_ref().expect("posterior"),
            &cfg.verdict,
        )?;
        report.verdict = Some(VerdictSection::new(cfg.verdict, verdicts));
    }
    if sections.ols {
        let fit = fit.expect("fit");
        let diag = diagnostics(&design, &fit)?;
        let advisories = diag.advisories(cfg.vif_cutoff, cfg.verdict.alpha);
        report.ols = Some(OlsSection {
            fit,
            diagnostics: Some(diag),
            advisories,
        });
    }
    if sections.bayes {
        report.bayes = post;
    }
    Ok(report)
}

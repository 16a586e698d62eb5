//! Conjugate Normal–Inverse-Gamma linear regression, credible intervals and
//! the region of practical equivalence.
//!
//! Sampling works in a centered parameterization: regressors are centered on
//! their sample means, so the intercept is the expected response at the mean
//! design point. Priors are stated on that parameterization and draws are
//! mapped back to the raw intercept afterwards.
//!
//! The prior is conjugate, `β | σ² ~ N(m₀, σ² Λ₀⁻¹)` and
//! `σ² ~ InvGamma(a₀, b₀)`. Coefficient prior scales are given in response
//! units; they become the precision `Λ₀ = diag(s² / sd²)` using the OLS
//! residual variance `s²` as the reference noise level, so at `σ² = s²` the
//! prior standard deviation of each coefficient equals the requested one.
//!
//! The posterior is computed by QR of the augmented system
//! `[X; Λ₀^½] β ≈ [y; Λ₀^½ m₀]`, which gives `Λₙ = RᵀR`, the posterior mean,
//! and the residual sum needed for `bₙ` without forming `XᵀX`.

use serde::Serialize;

use crate::describe::{mean, median, sample_sd};
use crate::error::{Error, Result};
use crate::kernels::{draw_inverse_gamma, standard_normal, RandomSource};
use crate::linalg::{HouseholderQr, Matrix};
use crate::ols::{DesignMatrix, RANK_TOL};

pub const DEFAULT_DRAWS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_CI_LEVEL: f64 = 0.89;
pub const MIN_DRAWS: usize = 1000;
const MIN_INTERVAL_DRAWS: usize = 100;

/// Weakly-informative prior scale multiplier.
pub const AUTO_SCALE: f64 = 2.5;
pub const DEFAULT_SIGMA2_SHAPE: f64 = 1e-3;
pub const DEFAULT_SIGMA2_SCALE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriorSpec {
    /// Prior means, centered intercept first.
    pub coef_mean: Vec<f64>,
    /// Prior standard deviations in response units.
    pub coef_sd: Vec<f64>,
    pub sigma2_shape: f64,
    pub sigma2_scale: f64,
}

impl PriorSpec {
    /// Auto-scaled default: slopes `N(0, 2.5·sd(y)/sd(x_j))`, centered
    /// intercept `N(mean(y), 2.5·sd(y))`, vague inverse-gamma on σ².
    pub fn auto(d: &DesignMatrix) -> Result<Self> {
        let sy = sample_sd(d.y());
        if !(sy > 0.0) {
            return Err(Error::domain("response is constant; cannot scale default priors"));
        }
        let mut coef_mean = vec![mean(d.y())];
        let mut coef_sd = vec![AUTO_SCALE * sy];
        for j in 1..d.p() {
            let sx = sample_sd(d.x().column(j));
            if !(sx > 0.0) {
                return Err(Error::SingularDesign {
                    column: d.names()[j].clone(),
                });
            }
            coef_mean.push(0.0);
            coef_sd.push(AUTO_SCALE * sy / sx);
        }
        Ok(PriorSpec {
            coef_mean,
            coef_sd,
            sigma2_shape: DEFAULT_SIGMA2_SHAPE,
            sigma2_scale: DEFAULT_SIGMA2_SCALE,
        })
    }

    /// Zero-mean prior with a common coefficient sd (large values approach a flat prior).
    pub fn uniform_sd(p: usize, sd: f64) -> Self {
        PriorSpec {
            coef_mean: vec![0.0; p],
            coef_sd: vec![sd; p],
            sigma2_shape: DEFAULT_SIGMA2_SHAPE,
            sigma2_scale: DEFAULT_SIGMA2_SCALE,
        }
    }

    fn validate(&self, p: usize) -> Result<()> {
        if self.coef_mean.len() != p || self.coef_sd.len() != p {
            return Err(Error::Consistency(format!(
                "prior has {} means and {} sds for {p} parameters",
                self.coef_mean.len(),
                self.coef_sd.len()
            )));
        }
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !self.coef_sd.iter().all(|&s| positive(s)) || !positive(self.sigma2_shape) || !positive(self.sigma2_scale) {
            return Err(Error::domain("prior sds, shape and scale must be positive and finite"));
        }
        if !self.coef_mean.iter().all(|m| m.is_finite()) {
            return Err(Error::domain("prior means must be finite"));
        }
        Ok(())
    }
}

/// Posterior draws, one vector per parameter in design order (raw intercept first).
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorDraws {
    pub names: Vec<String>,
    pub draws: Vec<Vec<f64>>,
    pub sigma2: Vec<f64>,
}

impl PosteriorDraws {
    pub fn len(&self) -> usize {
        self.sigma2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma2.is_empty()
    }

    pub fn parameter(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.draws[i].as_slice())
    }
}

/// Closed-form posterior, ready to sample from.
#[derive(Debug, Clone)]
pub struct ConjugatePosterior {
    names: Vec<String>,
    x_means: Vec<f64>,
    qr: HouseholderQr,
    /// Posterior mean in the centered parameterization.
    mean_centered: Vec<f64>,
    shape: f64,
    scale: f64,
}

impl ConjugatePosterior {
    pub fn new(d: &DesignMatrix, prior: &PriorSpec) -> Result<Self> {
        let (n, p) = (d.n(), d.p());
        prior.validate(p)?;

        let x_means: Vec<f64> = (1..p).map(|j| mean(d.x().column(j))).collect();
        let mut centered = vec![vec![1.0; n]];
        for j in 1..p {
            centered.push(d.x().column(j).iter().map(|v| v - x_means[j - 1]).collect());
        }
        let xc = Matrix::from_columns(&centered);
        let plain = HouseholderQr::new(&xc);
        plain.check_rank(RANK_TOL).map_err(|rd| Error::SingularDesign {
            column: d.names()[rd.column].clone(),
        })?;
        let ols_beta = plain.solve_ls(d.y());
        let fitted = xc.mul_vec(&ols_beta);
        let sse: f64 = d.y().iter().zip(&fitted).map(|(y, f)| (y - f).powi(2)).sum();
        let s2_ref = sse / (n - p) as f64;
        if !(s2_ref > 0.0) {
            return Err(Error::domain("zero residual variance; the posterior is degenerate"));
        }

        // Augmented rows carry the prior precision.
        let root_prec: Vec<f64> = prior.coef_sd.iter().map(|sd| s2_ref.sqrt() / sd).collect();
        let mut aug_cols = Vec::with_capacity(p);
        for (j, col) in centered.iter().enumerate() {
            let mut c = col.clone();
            c.extend((0..p).map(|k| if k == j { root_prec[j] } else { 0.0 }));
            aug_cols.push(c);
        }
        let mut y_aug = d.y().to_vec();
        y_aug.extend(root_prec.iter().zip(&prior.coef_mean).map(|(r, m)| r * m));
        let x_aug = Matrix::from_columns(&aug_cols);
        let qr = HouseholderQr::new(&x_aug);
        qr.check_rank(RANK_TOL).map_err(|rd| Error::SingularDesign {
            column: d.names()[rd.column].clone(),
        })?;
        let mean_centered = qr.solve_ls(&y_aug);
        let fitted_aug = x_aug.mul_vec(&mean_centered);
        let ss_aug: f64 = y_aug.iter().zip(&fitted_aug).map(|(y, f)| (y - f).powi(2)).sum();

        Ok(ConjugatePosterior {
            names: d.names().to_vec(),
            x_means,
            qr,
            mean_centered,
            shape: prior.sigma2_shape + 0.5 * n as f64,
            scale: prior.sigma2_scale + 0.5 * ss_aug,
        })
    }

    /// Posterior mean of β on the raw (uncentered) scale.
    pub fn mean(&self) -> Vec<f64> {
        self.uncenter(&self.mean_centered)
    }

    pub fn sigma2_shape(&self) -> f64 {
        self.shape
    }

    pub fn sigma2_scale(&self) -> f64 {
        self.scale
    }

    fn uncenter(&self, centered: &[f64]) -> Vec<f64> {
        let mut raw = centered.to_vec();
        raw[0] -= centered[1..].iter().zip(&self.x_means).map(|(b, m)| b * m).sum::<f64>();
        raw
    }

    /// i.i.d. draws: σ² from its marginal inverse-gamma, then β | σ².
    pub fn sample(&self, draws: usize, rs: &mut RandomSource) -> Result<PosteriorDraws> {
        let p = self.names.len();
        let mut out = vec![Vec::with_capacity(draws); p];
        let mut sigma2 = Vec::with_capacity(draws);
        let mut z = vec![0.0; p];
        for _ in 0..draws {
            let s2 = draw_inverse_gamma(rs, self.shape, self.scale)?;
            for v in z.iter_mut() {
                *v = standard_normal(rs);
            }
            let dev = self.qr.solve_r(&z);
            let s = s2.sqrt();
            let centered: Vec<f64> = self.mean_centered.iter().zip(&dev).map(|(m, e)| m + s * e).collect();
            for (col, v) in out.iter_mut().zip(self.uncenter(&centered)) {
                col.push(v);
            }
            sigma2.push(s2);
        }
        Ok(PosteriorDraws {
            names: self.names.clone(),
            draws: out,
            sigma2,
        })
    }
}

pub fn sample_posterior(
    d: &DesignMatrix,
    prior: &PriorSpec,
    draws: usize,
    rs: &mut RandomSource,
) -> Result<PosteriorDraws> {
    if draws < MIN_DRAWS {
        return Err(Error::domain(format!("need at least {MIN_DRAWS} draws, got {draws}")));
    }
    ConjugatePosterior::new(d, prior)?.sample(draws, rs)
}

/// Independent chains, one per seed, run on separate threads and concatenated
/// in seed order.
pub fn sample_posterior_chains(
    d: &DesignMatrix,
    prior: &PriorSpec,
    draws_per_chain: usize,
    seeds: &[u64],
) -> Result<PosteriorDraws> {
    if draws_per_chain < MIN_DRAWS {
        return Err(Error::domain(format!(
            "need at least {MIN_DRAWS} draws, got {draws_per_chain}"
        )));
    }
    if seeds.is_empty() {
        return Err(Error::domain("at least one seed is required"));
    }
    let post = ConjugatePosterior::new(d, prior)?;
    let chains: Vec<Result<PosteriorDraws>> = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .iter()
            .map(|&seed| {
                let post = &post;
                scope.spawn(move || post.sample(draws_per_chain, &mut RandomSource::new(seed)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampler thread panicked"))
            .collect()
    });
    let mut chains = chains.into_iter();
    let mut all = chains.next().expect("nonempty")?;
    for chain in chains {
        let chain = chain?;
        for (dst, src) in all.draws.iter_mut().zip(chain.draws) {
            dst.extend(src);
        }
        all.sigma2.extend(chain.sigma2);
    }
    Ok(all)
}

/// `[-sd/10, sd/10]` of the response (n − 1 denominator).
pub fn rope_bounds(loss: &[f64]) -> Result<(f64, f64)> {
    if loss.len() < 2 {
        return Err(Error::domain("ROPE needs at least 2 response values"));
    }
    let high = sample_sd(loss) / 10.0;
    Ok((-high, high))
}

/// Empirical quantile with linear interpolation between order statistics
/// (`h = (N − 1)q`).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn check_interval_args(draws: &[f64], level: f64) -> Result<Vec<f64>> {
    if draws.len() < MIN_INTERVAL_DRAWS {
        return Err(Error::domain(format!(
            "need at least {MIN_INTERVAL_DRAWS} draws for an interval, got {}",
            draws.len()
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain(format!("interval level must lie in (0, 1), got {level}")));
    }
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted)
}

/// Equal-tailed credible interval.
pub fn credible_interval(draws: &[f64], level: f64) -> Result<(f64, f64)> {
    let sorted = check_interval_args(draws, level)?;
    let tail = 0.5 * (1.0 - level);
    Ok((quantile_sorted(&sorted, tail), quantile_sorted(&sorted, 1.0 - tail)))
}

/// Highest-density interval: the narrowest window holding `ceil(level·N)` draws.
pub fn hdi(draws: &[f64], level: f64) -> Result<(f64, f64)> {
    let sorted = check_interval_args(draws, level)?;
    let m = ((level * sorted.len() as f64).ceil() as usize).max(1);
    let (best, _) = (0..=sorted.len() - m)
        .map(|i| (i, sorted[i + m - 1] - sorted[i]))
        .fold((0, f64::INFINITY), |acc, (i, w)| if w < acc.1 { (i, w) } else { acc });
    Ok((sorted[best], sorted[best + m - 1]))
}

/// Percent of the draws inside the credible interval that also fall inside the ROPE.
pub fn pirope(draws: &[f64], ci: (f64, f64), rope: (f64, f64)) -> Result<f64> {
    if !(ci.0 <= ci.1) || !(rope.0 <= rope.1) {
        return Err(Error::domain("interval bounds must be ordered"));
    }
    let (mut inside_ci, mut inside_both) = (0usize, 0usize);
    for &x in draws {
        if x >= ci.0 && x <= ci.1 {
            inside_ci += 1;
            if x >= rope.0 && x <= rope.1 {
                inside_both += 1;
            }
        }
    }
    if inside_ci == 0 {
        return Err(Error::DegenerateInterval(
            "no draws fall inside the credible interval".into(),
        ));
    }
    Ok(100.0 * inside_both as f64 / inside_ci as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalKind {
    #[default]
    EqualTailed,
    Hdi,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSummary {
    pub name: String,
    pub median: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Midpoint of the credible interval.
    pub ci_mid: f64,
    pub rope_low: f64,
    pub rope_high: f64,
    pub pirope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorSummary {
    pub ci_level: f64,
    pub interval: IntervalKind,
    pub draws: usize,
    pub parameters: Vec<ParamSummary>,
}

impl PosteriorSummary {
    pub fn parameter(&self, name: &str) -> Option<&ParamSummary> {
        self.parameters.iter().find(|p| p.name == name)
    }
}

pub fn summarize_posterior(
    post: &PosteriorDraws,
    loss: &[f64],
    level: f64,
    kind: IntervalKind,
) -> Result<PosteriorSummary> {
    let rope = rope_bounds(loss)?;
    let parameters = post
        .names
        .iter()
        .zip(&post.draws)
        .map(|(name, draws)| {
            let (ci_low, ci_high) = match kind {
                IntervalKind::EqualTailed => credible_interval(draws, level)?,
                IntervalKind::Hdi => hdi(draws, level)?,
            };
            Ok(ParamSummary {
                name: name.clone(),
                median: median(draws),
                ci_low,
                ci_high,
                ci_mid: 0.5 * (ci_low + ci_high),
                rope_low: rope.0,
                rope_high: rope.1,
                pirope: pirope(draws, (ci_low, ci_high), rope)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PosteriorSummary {
        ci_level: level,
        interval: kind,
        draws: post.len(),
        parameters,
    })
}

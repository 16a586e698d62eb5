//! Ordinary least squares with Householder QR, coefficient inference and
//! assumption diagnostics.

use serde::Serialize;

use crate::data::{ModelFrame, REGRESSORS};
use crate::error::{Error, Result};
use crate::kernels::{chi2_sf, student_t_sf2};
use crate::linalg::{HouseholderQr, Matrix};

pub const INTERCEPT: &str = "(Intercept)";

/// Relative tolerance on |R_jj| below which a column counts as dependent.
pub const RANK_TOL: f64 = 1e-10;

/// Design matrix with a leading intercept column.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    x: Matrix,
    y: Vec<f64>,
    names: Vec<String>,
}

impl DesignMatrix {
    /// Build from regressor columns; the intercept column is prepended.
    pub fn new(regressors: &[Vec<f64>], names: &[&str], y: Vec<f64>) -> Result<Self> {
        if regressors.len() != names.len() {
            return Err(Error::Consistency(format!(
                "{} regressor columns but {} names",
                regressors.len(),
                names.len()
            )));
        }
        let n = y.len();
        let p = regressors.len() + 1;
        if n <= p {
            return Err(Error::InsufficientData { n, p });
        }
        let mut columns = Vec::with_capacity(p);
        columns.push(vec![1.0; n]);
        for (c, name) in regressors.iter().zip(names) {
            if c.len() != n {
                return Err(Error::Consistency(format!(
                    "column `{name}` has {} rows, expected {n}",
                    c.len()
                )));
            }
            columns.push(c.clone());
        }
        if columns.iter().flatten().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::domain("design contains non-finite values"));
        }
        let mut all_names = vec![INTERCEPT.to_string()];
        all_names.extend(names.iter().map(|s| s.to_string()));
        Ok(DesignMatrix {
            x: Matrix::from_columns(&columns),
            y,
            names: all_names,
        })
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn p(&self) -> usize {
        self.x.cols()
    }
}

/// Columns `[1, Month, Year, AdjPop, Ratio, APLIR, FFR, ExpClaims]`, response Loss.
pub fn build_design(frame: &ModelFrame) -> Result<DesignMatrix> {
    if frame.is_empty() {
        return Err(Error::InsufficientData {
            n: 0,
            p: REGRESSORS.len() + 1,
        });
    }
    let cols: Vec<Vec<f64>> = REGRESSORS
        .iter()
        .map(|name| frame.column(name).expect("known column"))
        .collect();
    DesignMatrix::new(&cols, &REGRESSORS, frame.loss())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefRow {
    pub term: String,
    pub estimate: f64,
    pub std_error: f64,
    #[serde(rename = "statistic")]
    pub t_stat: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OlsFit {
    pub coef: Vec<CoefRow>,
    pub residuals: Vec<f64>,
    pub fitted: Vec<f64>,
    pub sigma2_hat: f64,
    pub r2: f64,
    pub adj_r2: f64,
    pub df_resid: usize,
    pub n: usize,
}

impl OlsFit {
    pub fn estimates(&self) -> Vec<f64> {
        self.coef.iter().map(|c| c.estimate).collect()
    }

    pub fn term(&self, name: &str) -> Option<&CoefRow> {
        self.coef.iter().find(|c| c.term == name)
    }
}

fn qr_checked(x: &Matrix, names: &[String]) -> Result<HouseholderQr> {
    let qr = HouseholderQr::new(x);
    qr.check_rank(RANK_TOL).map_err(|rd| Error::SingularDesign {
        column: names[rd.column].clone(),
    })?;
    Ok(qr)
}

fn centered_ss(v: &[f64]) -> f64 {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - m).powi(2)).sum()
}

/// Least-squares fit through QR; standard errors from `R⁻¹R⁻ᵀ`.
pub fn fit_ols(d: &DesignMatrix) -> Result<OlsFit> {
    let qr = qr_checked(&d.x, &d.names)?;
    let beta = qr.solve_ls(&d.y);
    let fitted = d.x.mul_vec(&beta);
    let residuals: Vec<f64> = d.y.iter().zip(&fitted).map(|(y, f)| y - f).collect();
    let (n, p) = (d.n(), d.p());
    let df_resid = n - p;
    let sse: f64 = residuals.iter().map(|e| e * e).sum();
    let sigma2_hat = sse / df_resid as f64;
    let diag = qr.xtx_inv_diag();

    let coef = beta
        .iter()
        .zip(&diag)
        .zip(&d.names)
        .map(|((&estimate, &dj), term)| {
            let std_error = (sigma2_hat * dj).sqrt();
            let t_stat = if std_error > 0.0 {
                estimate / std_error
            } else if estimate == 0.0 {
                0.0
            } else {
                estimate.signum() * f64::INFINITY
            };
            let p_value = student_t_sf2(t_stat, df_resid as f64)?;
            Ok(CoefRow {
                term: term.clone(),
                estimate,
                std_error,
                t_stat,
                p_value,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let sst = centered_ss(&d.y);
    let r2 = if sst > 0.0 {
        1.0 - sse / sst
    } else if sse == 0.0 {
        1.0
    } else {
        0.0
    };
    let adj_r2 = 1.0 - (1.0 - r2) * (n - 1) as f64 / df_resid as f64;
    Ok(OlsFit {
        coef,
        residuals,
        fitted,
        sigma2_hat,
        r2,
        adj_r2,
        df_resid,
        n,
    })
}

/// R² of regressing `target` on an intercept plus `others`.
fn auxiliary_r2(target: &[f64], others: &[&[f64]], names: &[String]) -> Result<f64> {
    let n = target.len();
    let mut cols = vec![vec![1.0; n]];
    cols.extend(others.iter().map(|c| c.to_vec()));
    let x = Matrix::from_columns(&cols);
    let qr = qr_checked(&x, names)?;
    let beta = qr.solve_ls(target);
    let fitted = x.mul_vec(&beta);
    let sse: f64 = target.iter().zip(&fitted).map(|(y, f)| (y - f).powi(2)).sum();
    let sst = centered_ss(target);
    if sst == 0.0 {
        return Err(Error::SingularDesign {
            column: names[0].clone(),
        });
    }
    Ok(1.0 - sse / sst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VifEntry {
    pub term: String,
    pub vif: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub vif: Vec<VifEntry>,
    /// Breusch–Pagan (Koenker) statistic n·R² of e² on the design.
    pub bp_stat: f64,
    pub bp_df: usize,
    pub bp_p: f64,
    pub jb_stat: f64,
    pub jb_p: f64,
    pub dw_stat: f64,
    pub mean_resid: f64,
}

/// Conventional multicollinearity cutoff.
pub const DEFAULT_VIF_CUTOFF: f64 = 10.0;

impl Diagnostics {
    pub fn max_vif(&self) -> f64 {
        self.vif.iter().map(|v| v.vif).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Human-readable advisories for assumption checks that look violated.
    pub fn advisories(&self, vif_cutoff: f64, alpha: f64) -> Vec<String> {
        let mut out = Vec::new();
        let worst = self.max_vif();
        if worst >= vif_cutoff {
            let names: Vec<&str> = self
                .vif
                .iter()
                .filter(|v| v.vif >= vif_cutoff)
                .map(|v| v.term.as_str())
                .collect();
            out.push(format!(
                "multicollinearity: max VIF {worst:.1} >= {vif_cutoff} ({})",
                names.join(", ")
            ));
        }
        if self.bp_p < alpha {
            out.push(format!("heteroscedasticity: Breusch-Pagan p = {:.3e}", self.bp_p));
        }
        if self.jb_p < alpha {
            out.push(format!("non-normal residuals: Jarque-Bera p = {:.3e}", self.jb_p));
        }
        if !(1.5..=2.5).contains(&self.dw_stat) {
            out.push(format!(
                "autocorrelation: Durbin-Watson {:.3} outside [1.5, 2.5]",
                self.dw_stat
            ));
        }
        out
    }
}

pub fn diagnostics(d: &DesignMatrix, fit: &OlsFit) -> Result<Diagnostics> {
    let n = d.n();
    let e = &fit.residuals;
    let sse: f64 = e.iter().map(|v| v * v).sum();
    if sse == 0.0 {
        return Err(Error::domain("residuals are identically zero; diagnostics undefined"));
    }

    let regressors: Vec<&[f64]> = (1..d.p()).map(|j| d.x.column(j)).collect();
    let mut vif = Vec::with_capacity(regressors.len());
    for (j, target) in regressors.iter().enumerate() {
        let others: Vec<&[f64]> = regressors
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, c)| *c)
            .collect();
        let names: Vec<String> = std::iter::once(INTERCEPT.to_string())
            .chain(
                d.names[1..]
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, s)| s.clone()),
            )
            .collect();
        let r2 = if others.is_empty() && centered_ss(target) > 0.0 {
            0.0
        } else {
            auxiliary_r2(target, &others, &names).map_err(|_| Error::SingularDesign {
                column: d.names[j + 1].clone(),
            })?
        };
        vif.push(VifEntry {
            term: d.names[j + 1].clone(),
            vif: 1.0 / (1.0 - r2),
        });
    }

    let e2: Vec<f64> = e.iter().map(|v| v * v).collect();
    let bp_df = d.p() - 1;
    let (bp_stat, bp_p) = if bp_df == 0 || centered_ss(&e2) == 0.0 {
        (0.0, 1.0)
    } else {
        let r2 = auxiliary_r2(&e2, &regressors, &d.names)?;
        let stat = (n as f64 * r2).max(0.0);
        (stat, chi2_sf(stat, bp_df as f64)?)
    };

    let nf = n as f64;
    let mean_resid = e.iter().sum::<f64>() / nf;
    let m2 = e.iter().map(|v| (v - mean_resid).powi(2)).sum::<f64>() / nf;
    let m3 = e.iter().map(|v| (v - mean_resid).powi(3)).sum::<f64>() / nf;
    let m4 = e.iter().map(|v| (v - mean_resid).powi(4)).sum::<f64>() / nf;
    let skew = m3 / m2.powf(1.5);
    let kurt = m4 / (m2 * m2);
    let jb_stat = nf / 6.0 * (skew * skew + 0.25 * (kurt - 3.0).powi(2));
    let jb_p = chi2_sf(jb_stat, 2.0)?;

    let dw_num: f64 = e.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
    let dw_stat = dw_num / sse;

    Ok(Diagnostics {
        vif,
        bp_stat,
        bp_df,
        bp_p,
        jb_stat,
        jb_p,
        dw_stat,
        mean_resid,
    })
}

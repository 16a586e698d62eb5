//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's numerical code.
#![allow(dead_code)]

use std::path::PathBuf;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

/// Solve the square system `a·x = b` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        a.swap(k, piv);
        b.swap(k, piv);
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for (off, row) in bottom.iter_mut().enumerate() {
            let f = row[k] / pivot_row[k];
            for (x, p) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *x -= f * p;
            }
            b[k + 1 + off] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Least squares through the normal equations; `cols` excludes the intercept.
pub fn normal_equations(cols: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut x = vec![vec![1.0; n]];
    x.extend(cols.iter().cloned());
    let p = x.len();
    let xtx = (0..p)
        .map(|i| (0..p).map(|j| (0..n).map(|r| x[i][r] * x[j][r]).sum()).collect())
        .collect();
    let xty = (0..p).map(|i| (0..n).map(|r| x[i][r] * y[r]).sum()).collect();
    gauss_solve(xtx, xty)
}

/// R² of regressing `y` on `cols` with an intercept, via the normal equations.
pub fn r_squared(cols: &[Vec<f64>], y: &[f64]) -> f64 {
    let beta = normal_equations(cols, y);
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let (mut sse, mut sst) = (0.0, 0.0);
    for r in 0..y.len() {
        let fit = beta[0] + cols.iter().zip(&beta[1..]).map(|(c, b)| c[r] * b).sum::<f64>();
        sse += (y[r] - fit).powi(2);
        sst += (y[r] - mean).powi(2);
    }
    1.0 - sse / sst
}

#[allow(clippy::too_many_arguments)]
fn simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson over `[a, b]`, pre-split into `pieces` panels so narrow
/// peaks are not stepped over.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, pieces: usize) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|k| {
            let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            simpson(&f, lo, hi, fa, fm, fb, whole, tol / pieces as f64, 50)
        })
        .sum()
}

/// Γ(k/2) for a positive integer k, by the integer and half-integer product formulas.
pub fn gamma_half(k: u32) -> f64 {
    let mut g = if k.is_multiple_of(2) {
        1.0
    } else {
        std::f64::consts::PI.sqrt()
    };
    let mut x = if k.is_multiple_of(2) { 1.0 } else { 0.5 };
    while x < k as f64 / 2.0 - 1e-9 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Two-sided Student t tail by integrating the density over `[0, |t|]`.
pub fn t_tail_oracle(t: f64, df: u32) -> f64 {
    let nu = df as f64;
    let c = gamma_half(df + 1) / (gamma_half(df) * (nu * std::f64::consts::PI).sqrt());
    let body = integrate(
        |x| c * (1.0 + x * x / nu).powf(-(nu + 1.0) / 2.0),
        0.0,
        t.abs(),
        1e-14,
        64,
    );
    1.0 - 2.0 * body
}

/// F upper tail; the substitution x = u² removes the singularity at 0 for df1 = 1.
pub fn f_tail_oracle(f: f64, df1: u32, df2: u32) -> f64 {
    let (d1, d2) = (df1 as f64, df2 as f64);
    let beta = gamma_half(df1) * gamma_half(df2) / gamma_half(df1 + df2);
    let c = (d1 / d2).powf(d1 / 2.0) / beta;
    let dens = |u: f64| {
        let x = u * u;
        2.0 * c * u.powf(d1 - 1.0) * (1.0 + d1 * x / d2).powf(-(d1 + d2) / 2.0)
    };
    1.0 - integrate(dens, 0.0, f.sqrt(), 1e-14, 64)
}

/// χ² upper tail, same substitution.
pub fn chi2_tail_oracle(x: f64, df: u32) -> f64 {
    let k = df as f64;
    let c = 1.0 / (2f64.powf(k / 2.0) * gamma_half(df));
    let dens = |u: f64| 2.0 * c * u.powf(k - 1.0) * (-u * u / 2.0).exp();
    1.0 - integrate(dens, 0.0, x.sqrt(), 1e-14, 64)
}

/// Small deterministic generator for test data (SplitMix64), independent of the library's.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

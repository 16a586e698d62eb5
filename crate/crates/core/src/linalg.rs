//! Dense column-major matrix and Householder QR, just enough for the
//! regression engines.

/// Column-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_columns(columns: &[Vec<f64>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows * cols);
        for c in columns {
            assert_eq!(c.len(), rows, "ragged columns");
            data.extend_from_slice(c);
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![0.0; self.rows];
        for (j, &vj) in v.iter().enumerate() {
            for (o, x) in out.iter_mut().zip(self.column(j)) {
                *o += x * vj;
            }
        }
        out
    }

    /// `Xᵀ v`
    pub fn tr_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols).map(|j| dot(self.column(j), v)).collect()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Householder QR of a tall matrix, stored compactly: the upper triangle of
/// `qr` holds R (diagonal in `r_diag`), the rest holds the reflectors.
#[derive(Debug, Clone)]
pub struct HouseholderQr {
    qr: Matrix,
    r_diag: Vec<f64>,
}

/// A column whose R diagonal fell below the rank tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankDeficient {
    pub column: usize,
}

impl HouseholderQr {
    pub fn new(a: &Matrix) -> Self {
        let mut qr = a.clone();
        let (m, n) = (qr.rows, qr.cols);
        let mut r_diag = vec![0.0; n];
        for k in 0..n.min(m) {
            let col = qr.column_mut(k);
            let norm = col[k..].iter().fold(0.0f64, |acc, x| acc.hypot(*x));
            if norm == 0.0 {
                r_diag[k] = 0.0;
                continue;
            }
            let alpha = if col[k] > 0.0 { -norm } else { norm };
            for x in &mut col[k..] {
                *x /= -alpha;
            }
            col[k] += 1.0;
            // reflector v = col[k..], with v[0] = 1 - a_kk/alpha
            for j in (k + 1)..n {
                let s = {
                    let vk = &qr.column(k)[k..];
                    let cj = &qr.column(j)[k..];
                    -dot(vk, cj) / vk[0]
                };
                let (left, right) = qr.data.split_at_mut(j * m);
                let vk = &left[k * m + k..k * m + m];
                let cj = &mut right[k..m];
                for (c, v) in cj.iter_mut().zip(vk) {
                    *c += s * v;
                }
            }
            r_diag[k] = alpha;
        }
        HouseholderQr { qr, r_diag }
    }

    pub fn r_diag(&self) -> &[f64] {
        &self.r_diag
    }

    /// First column whose |R_jj| is below `rel_tol` times the largest |R_ii|.
    pub fn check_rank(&self, rel_tol: f64) -> Result<(), RankDeficient> {
        let max = self.r_diag.iter().fold(0.0f64, |a, d| a.max(d.abs()));
        match self
            .r_diag
            .iter()
            .position(|d| !(d.abs() >= rel_tol * max) || max == 0.0)
        {
            Some(column) => Err(RankDeficient { column }),
            None => Ok(()),
        }
    }

    /// Apply Qᵀ to `y` in place.
    pub fn apply_qt(&self, y: &mut [f64]) {
        let m = self.qr.rows;
        assert_eq!(y.len(), m);
        for k in 0..self.qr.cols.min(m) {
            let v = &self.qr.column(k)[k..];
            if v[0] == 0.0 {
                continue;
            }
            let s = -dot(v, &y[k..]) / v[0];
            for (yi, vi) in y[k..].iter_mut().zip(v) {
                *yi += s * vi;
            }
        }
    }

    #[inline]
    pub fn r(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.r_diag[i]
        } else if i < j {
            self.qr.get(i, j)
        } else {
            0.0
        }
    }

    /// Solve `R x = b` by back substitution.
    pub fn solve_r(&self, b: &[f64]) -> Vec<f64> {
        let n = self.qr.cols;
        let mut x = b[..n].to_vec();
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|j| self.r(i, j) * x[j]).sum();
            x[i] = (x[i] - s) / self.r_diag[i];
        }
        x
    }

    /// Least-squares solution of `A x ≈ y`.
    pub fn solve_ls(&self, y: &[f64]) -> Vec<f64> {
        let mut qty = y.to_vec();
        self.apply_qt(&mut qty);
        self.solve_r(&qty)
    }

    /// `R⁻¹` as an upper-triangular matrix.
    pub fn r_inverse(&self) -> Matrix {
        let n = self.qr.cols;
        let mut inv = Matrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = self.solve_r(&e);
            for (i, v) in col.into_iter().enumerate() {
                inv.set(i, j, v);
            }
        }
        inv
    }

    /// Diagonal of `(AᵀA)⁻¹ = R⁻¹ R⁻ᵀ`.
    pub fn xtx_inv_diag(&self) -> Vec<f64> {
        let n = self.qr.cols;
        let rinv = self.r_inverse();
        (0..n).map(|i| (i..n).map(|j| rinv.get(i, j).powi(2)).sum()).collect()
    }
}

//! Dense row-major matrices, LU with partial pivoting and a 1-norm
//! condition estimate.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        DenseMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let mut sums = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (s, a) in sums.iter_mut().zip(self.row(i)) {
                *s += a.abs();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|a| a.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `PA = LU` with unit lower `L` and upper `U` packed into one matrix.
#[derive(Clone, Debug)]
pub struct LuFactors {
    lu: DenseMatrix,
    /// `perm[i]` is the original row placed at position `i`.
    perm: Vec<usize>,
    norm_one: f64,
}

const BLOCK: usize = 48;

#[inline]
fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi -= alpha * xi;
    }
}

/// Split borrow of rows `k` (shared) and `i > k` (mutable).
#[inline]
fn two_rows(data: &mut [f64], cols: usize, k: usize, i: usize) -> (&[f64], &mut [f64]) {
    debug_assert!(k < i);
    let (head, tail) = data.split_at_mut(i * cols);
    (&head[k * cols..(k + 1) * cols], &mut tail[..cols])
}

impl LuFactors {
    /// Blocked right-looking factorisation with partial pivoting.
    pub fn factor(mut a: DenseMatrix) -> Result<Self> {
        assert_eq!(a.rows, a.cols, "LU needs a square matrix");
        let n = a.rows;
        let norm_one = a.norm_one();
        let mut perm: Vec<usize> = (0..n).collect();
        let cols = n;

        for kb in (0..n).step_by(BLOCK) {
            let kend = (kb + BLOCK).min(n);
            // panel: columns kb..kend
            for k in kb..kend {
                let (mut p, mut best) = (k, a[(k, k)].abs());
                for i in k + 1..n {
                    let v = a[(i, k)].abs();
                    if v > best {
                        best = v;
                        p = i;
                    }
                }
                if best == 0.0 || !best.is_finite() {
                    if best == 0.0 {
                        return Err(Error::Singular { pivot: k });
                    }
                    return Err(Error::NonFinite);
                }
                if p != k {
                    let (head, tail) = a.data.split_at_mut(p * cols);
                    head[k * cols..(k + 1) * cols].swap_with_slice(&mut tail[..cols]);
                    perm.swap(k, p);
                }
                let pivot = a[(k, k)];
                for i in k + 1..n {
                    let (rk, ri) = two_rows(&mut a.data, cols, k, i);
                    let l = ri[k] / pivot;
                    ri[k] = l;
                    if l != 0.0 {
                        axpy(&mut ri[k + 1..kend], l, &rk[k + 1..kend]);
                    }
                }
            }
            if kend == n {
                break;
            }
            // U12 = L11^{-1} A12
            for k in kb..kend {
                for i in k + 1..kend {
                    let (rk, ri) = two_rows(&mut a.data, cols, k, i);
                    let l = ri[k];
                    if l != 0.0 {
                        axpy(&mut ri[kend..], l, &rk[kend..]);
                    }
                }
            }
            // A22 -= L21 U12
            let (top, bottom) = a.data.split_at_mut(kend * cols);
            let u12 = &top[kb * cols..];
            for ri in bottom.chunks_exact_mut(cols) {
                for k in kb..kend {
                    let l = ri[k];
                    if l != 0.0 {
                        let uk = &u12[(k - kb) * cols..(k - kb + 1) * cols];
                        let (_, rest) = ri.split_at_mut(kend);
                        axpy(rest, l, &uk[kend..]);
                    }
                }
            }
        }
        Ok(LuFactors { lu: a, perm, norm_one })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s: f64 = row[..i].iter().zip(&x[..i]).map(|(l, xj)| l * xj).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s: f64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(u, xj)| u * xj).sum();
            x[i] = (x[i] - s) / row[i];
        }
        x
    }

    /// Solve `Aᵀ x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        // Uᵀ z = b, column-oriented over the rows of U
        let mut z = b.to_vec();
        for i in 0..n {
            let row = self.lu.row(i);
            z[i] /= row[i];
            let zi = z[i];
            axpy(&mut z[i + 1..], zi, &row[i + 1..]);
        }
        // Lᵀ w = z
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let wi = z[i];
            axpy(&mut z[..i], wi, &row[..i]);
        }
        let mut x = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = z[i];
        }
        x
    }

    /// Estimate of `‖A⁻¹‖₁` by Hager's method with Higham's refinements
    /// (the LAPACK `xLACN2` iteration plus its alternative test vector).
    pub fn inverse_norm_one_estimate(&self) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 0.0;
        }
        let sign = |v: f64| if v >= 0.0 { 1.0 } else { -1.0 };
        let mut x = vec![1.0 / n as f64; n];
        let mut est = 0.0;
        let mut last_j = usize::MAX;
        for iter in 0..5 {
            let y = self.solve(&x);
            let new_est: f64 = y.iter().map(|v| v.abs()).sum();
            if iter > 0 && new_est <= est {
                break;
            }
            est = new_est;
            let xi: Vec<f64> = y.iter().map(|&v| sign(v)).collect();
            let z = self.solve_transpose(&xi);
            let (j, zmax) = z
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| {
                    if v.abs() > acc.1 {
                        (i, v.abs())
                    } else {
                        acc
                    }
                });
            let zx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            if iter > 0 && (j == last_j || zmax <= zx) {
                break;
            }
            last_j = j;
            x.iter_mut().for_each(|v| *v = 0.0);
            x[j] = 1.0;
        }
        // alternative estimate with an alternating-sign vector
        let alt: Vec<f64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                s * (1.0 + i as f64 / (n.max(2) - 1) as f64)
            })
            .collect();
        let y = self.solve(&alt);
        let alt_est = 2.0 * y.iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
        est.max(alt_est)
    }

    /// Estimate of the 1-norm condition number `‖A‖₁ ‖A⁻¹‖₁`.
    pub fn condition_estimate(&self) -> f64 {
        self.norm_one * self.inverse_norm_one_estimate()
    }
}

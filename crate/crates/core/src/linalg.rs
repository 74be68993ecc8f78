//! Symmetric banded matrices and an `L D Lᵀ` factorization without
//! pivoting. The discrete Laplacians here are banded once nodes are
//! ordered ring by ring, so this is all the linear algebra they need.

use crate::error::{Error, Result};

/// Symmetric matrix storing the lower band `j ∈ [i - bw, i]` row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self { n, bw, data: vec![0.0; n * (bw + 1)] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + (j + self.bw - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        if i - j > self.bw {
            0.0
        } else {
            self.data[self.slot(i, j)]
        }
    }

    /// Adds `value` to entries `(i, j)` and `(j, i)`.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        assert!(i - j <= self.bw, "entry ({i}, {j}) outside bandwidth {}", self.bw);
        let k = self.slot(i, j);
        self.data[k] += value;
    }

    pub fn add_diagonal(&mut self, diag: &[f64]) {
        for (i, d) in diag.iter().enumerate() {
            self.add(i, i, *d);
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            for j in lo..i {
                let a = self.data[self.slot(i, j)];
                y[i] += a * x[j];
                y[j] += a * x[i];
            }
            y[i] += self.data[self.slot(i, i)] * x[i];
        }
        y
    }
}

/// `A = L D Lᵀ` with unit lower-triangular banded `L`.
#[derive(Debug, Clone)]
pub struct BandLdl {
    l: BandMatrix,
    d: Vec<f64>,
}

impl BandLdl {
    pub fn factor(a: &BandMatrix) -> Result<Self> {
        let (n, bw) = (a.n, a.bw);
        let mut l = BandMatrix::zeros(n, bw);
        let mut d = vec![0.0; n];
        let scale = a.data.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..i {
                let mut s = a.data[a.slot(i, j)];
                for k in lo.max(j.saturating_sub(bw))..j {
                    s -= l.data[l.slot(i, k)] * d[k] * l.data[l.slot(j, k)];
                }
                let k = l.slot(i, j);
                l.data[k] = s / d[j];
            }
            let mut s = a.data[a.slot(i, i)];
            for k in lo..i {
                let lik = l.data[l.slot(i, k)];
                s -= lik * lik * d[k];
            }
            if !s.is_finite() || s.abs() <= 1e-300 + f64::EPSILON * 1e-4 * scale {
                return Err(Error::Singular(format!("zero pivot at row {i} (pivot {s:e})")));
            }
            d[i] = s;
            let k = l.slot(i, i);
            l.data[k] = 1.0;
        }
        Ok(Self { l, d })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.l.n, self.l.bw);
        let mut x = b.to_vec();
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let mut s = x[i];
            for k in lo..i {
                s -= self.l.data[self.l.slot(i, k)] * x[k];
            }
            x[i] = s;
        }
        for i in 0..n {
            x[i] /= self.d[i];
        }
        for i in (0..n).rev() {
            let hi = (i + bw).min(n - 1);
            let mut s = x[i];
            for k in i + 1..=hi {
                s -= self.l.data[self.l.slot(k, i)] * x[k];
            }
            x[i] = s;
        }
        x
    }

    /// Number of negative pivots, i.e. negative eigenvalues of `A`.
    pub fn negative_pivots(&self) -> usize {
        self.d.iter().filter(|&&x| x < 0.0).count()
    }
}

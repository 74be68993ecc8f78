//! Sampled warping functions `f` of rotationally symmetric metrics
//! `dt² + f(t)² dθ²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaceform::ComparisonFunctions;

/// Samples of `f`, `f'` and `f''` on the uniform grid `t_i = i r / N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpProfile {
    r: f64,
    f: Vec<f64>,
    df: Vec<f64>,
    d2f: Vec<f64>,
}

impl WarpProfile {
    /// Validates and wraps sample vectors of equal length `N + 1`.
    pub fn from_samples(r: f64, f: Vec<f64>, df: Vec<f64>, d2f: Vec<f64>) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidWarp(format!("radius {r} must be positive and finite")));
        }
        if f.len() < 3 || f.len() != df.len() || f.len() != d2f.len() {
            return Err(Error::InvalidWarp(format!(
                "sample lengths {}/{}/{} must agree and be at least 3",
                f.len(),
                df.len(),
                d2f.len()
            )));
        }
        if f.iter().chain(&df).chain(&d2f).any(|x| !x.is_finite()) {
            return Err(Error::InvalidWarp("non-finite sample".into()));
        }
        if f[0].abs() > 1e-10 || (df[0] - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidWarp(format!(
                "pole conditions f(0) = 0, f'(0) = 1 violated: f(0) = {}, f'(0) = {}",
                f[0], df[0]
            )));
        }
        if let Some(i) = (1..f.len()).find(|&i| f[i] <= 0.0) {
            return Err(Error::InvalidWarp(format!("f is not positive at node {i} (f = {})", f[i])));
        }
        let warp = Self { r, f, df, d2f };
        warp.check_consistency()?;
        Ok(warp)
    }

    /// Samples closed-form `f, f', f''` on `n_cells + 1` nodes.
    pub fn from_fn(
        r: f64,
        n_cells: usize,
        f: impl Fn(f64) -> f64,
        df: impl Fn(f64) -> f64,
        d2f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let h = r / n_cells as f64;
        let ts: Vec<f64> = (0..=n_cells).map(|i| i as f64 * h).collect();
        Self::from_samples(
            r,
            ts.iter().map(|&t| f(t)).collect(),
            ts.iter().map(|&t| df(t)).collect(),
            ts.iter().map(|&t| d2f(t)).collect(),
        )
    }

    /// The model warp `f = S_c`.
    pub fn from_model(c: f64, r: f64, n_cells: usize) -> Result<Self> {
        let cf = ComparisonFunctions::new(c);
        if r >= cf.conjugate_radius() {
            return Err(Error::InvalidWarp(format!("radius {r} reaches the conjugate radius for c = {c}")));
        }
        Self::from_fn(r, n_cells, |t| cf.sn(t), |t| cf.cn(t), |t| cf.sn2(t))
    }

    // Central differences of f must match f' to second order.
    fn check_consistency(&self) -> Result<()> {
        let h = self.h();
        let n = self.n_cells();
        for i in 1..n {
            let central = (self.f[i + 1] - self.f[i - 1]) / (2.0 * h);
            let third = (self.d2f[i + 1] - self.d2f[i - 1]) / (2.0 * h);
            let allowed = h * h * (third.abs() / 3.0 + 1.0) + 1e-10 * (1.0 + self.df[i].abs());
            if (central - self.df[i]).abs() > allowed {
                return Err(Error::InvalidWarp(format!(
                    "f' sample at node {i} inconsistent with f (central difference {central}, sample {})",
                    self.df[i]
                )));
            }
        }
        Ok(())
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn n_cells(&self) -> usize {
        self.f.len() - 1
    }

    pub fn h(&self) -> f64 {
        self.r / self.n_cells() as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        i as f64 * self.h()
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn df(&self) -> &[f64] {
        &self.df
    }

    pub fn d2f(&self) -> &[f64] {
        &self.d2f
    }

    /// Quintic Hermite interpolation of `(f, f')` at `t ∈ [0, r]`.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let (v, s, _) = self.eval_full(t);
        (v, s)
    }

    /// Quintic Hermite interpolation of `(f, f', f'')` at `t ∈ [0, r]`.
    pub fn eval_full(&self, t: f64) -> (f64, f64, f64) {
        let h = self.h();
        let n = self.n_cells();
        let x = (t / h).clamp(0.0, n as f64);
        let i = (x.floor() as usize).min(n - 1);
        let s = x - i as f64;
        let (s2, s3) = (s * s, s * s * s);
        let (s4, s5) = (s3 * s, s3 * s2);

        let b = [
            1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5,
            s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5,
            0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5),
            10.0 * s3 - 15.0 * s4 + 6.0 * s5,
            -4.0 * s3 + 7.0 * s4 - 3.0 * s5,
            0.5 * (s3 - 2.0 * s4 + s5),
        ];
        let db = [
            -30.0 * s2 + 60.0 * s3 - 30.0 * s4,
            1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4,
            0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4),
            30.0 * s2 - 60.0 * s3 + 30.0 * s4,
            -12.0 * s2 + 28.0 * s3 - 15.0 * s4,
            0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4),
        ];
        let d2b = [
            -60.0 * s + 180.0 * s2 - 120.0 * s3,
            -36.0 * s + 96.0 * s2 - 60.0 * s3,
            0.5 * (2.0 - 18.0 * s + 36.0 * s2 - 20.0 * s3),
            60.0 * s - 180.0 * s2 + 120.0 * s3,
            -24.0 * s + 84.0 * s2 - 60.0 * s3,
            0.5 * (6.0 * s - 24.0 * s2 + 20.0 * s3),
        ];
        let data = [
            self.f[i],
            h * self.df[i],
            h * h * self.d2f[i],
            self.f[i + 1],
            h * self.df[i + 1],
            h * h * self.d2f[i + 1],
        ];
        let dot = |w: &[f64; 6]| w.iter().zip(&data).map(|(a, b)| a * b).sum::<f64>();
        (dot(&b), dot(&db) / h, dot(&d2b) / (h * h))
    }

    /// One-sided estimate of `f'''(0)` from the `f''` samples, sixth order
    /// when the grid has at least six cells.
    pub fn third_derivative_at_pole(&self) -> f64 {
        const W6: [f64; 7] = [-49.0 / 20.0, 6.0, -15.0 / 2.0, 20.0 / 3.0, -15.0 / 4.0, 6.0 / 5.0, -1.0 / 6.0];
        let h = self.h();
        let g = &self.d2f;
        if g.len() > 6 {
            W6.iter().zip(g).map(|(w, x)| w * x).sum::<f64>() / h
        } else {
            (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h)
        }
    }

    /// Resamples onto a grid with `n_cells` cells by Hermite interpolation.
    pub fn resample(&self, n_cells: usize) -> Result<Self> {
        if n_cells == self.n_cells() {
            return Ok(self.clone());
        }
        let h = self.r / n_cells as f64;
        let samples: Vec<(f64, f64, f64)> = (0..=n_cells).map(|i| self.eval_full(i as f64 * h)).collect();
        let mut f: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let mut df: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let d2f = samples.iter().map(|s| s.2).collect();
        f[0] = 0.0;
        df[0] = 1.0;
        Self::from_samples(self.r, f, df, d2f)
    }
}

/// Radial sectional curvature `K = -f''/f` at every node. At the pole,
/// where `f''` and `f` both vanish for a smooth metric, the limit
/// `-f'''(0)/f'(0)` is used.
pub fn radial_curvature(warp: &WarpProfile) -> Vec<f64> {
    let n = warp.n_cells();
    let mut k = vec![0.0; n + 1];
    for i in 1..=n {
        k[i] = -warp.d2f[i] / warp.f[i];
    }
    k[0] = -warp.third_derivative_at_pole() / warp.df[0];
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curvature_of_model_warps() {
        for &(c, r) in &[(1.0, 2.0), (0.0, 1.0), (-1.0, 3.0), (0.37, 1.0)] {
            let w = WarpProfile::from_model(c, r, 512).unwrap();
            for k in radial_curvature(&w) {
                assert!((k - c).abs() < 1e-8, "c={c} K={k}");
            }
        }
    }

    #[test]
    fn hermite_reproduces_model() {
        let w = WarpProfile::from_model(-1.0, 2.0, 64).unwrap();
        for i in 0..1000 {
            let t = 2.0 * i as f64 / 999.0;
            let (f, df) = w.eval(t);
            assert!((f - t.sinh()).abs() < 1e-10);
            assert!((df - t.cosh()).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_bad_samples() {
        let r = 1.0;
        assert!(WarpProfile::from_fn(r, 32, |t| t + 0.1, |_| 1.0, |_| 0.0).is_err());
        assert!(WarpProfile::from_fn(r, 32, |t| t * (0.5 - t), |t| 0.5 - 2.0 * t, |_| -2.0).is_err());
        // f' samples that do not belong to f
        assert!(WarpProfile::from_fn(r, 32, |t| t, |t| 1.0 + t, |_| 1.0).is_err());
        assert!(WarpProfile::from_model(1.0, 3.2, 32).is_err());
    }

    #[test]
    fn resample_keeps_model_accuracy() {
        let w = WarpProfile::from_model(1.0, 1.0, 100).unwrap().resample(333).unwrap();
        for i in 0..=333 {
            let t = w.t(i);
            assert!((w.f()[i] - t.sin()).abs() < 1e-11);
            assert!((w.d2f()[i] + t.sin()).abs() < 1e-6);
        }
    }
}

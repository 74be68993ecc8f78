//! Model geometry of the simply connected space forms.
//!
//! The space form of constant curvature `c` has, in geodesic polar
//! coordinates around any point, the metric `dt² + sn_c(t)² dθ²` where
//! `sn_c` solves `y'' + c y = 0` with `y(0) = 0, y'(0) = 1`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this `|c|` the generalized sine and cosine are evaluated from
/// their power series instead of `sin(√c t)/√c`, provided `|c| t² ≤ 1`.
pub const SERIES_THRESHOLD: f64 = 1e-6;

/// Generalized sine, cosine and second derivative for curvature `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonFunctions {
    pub c: f64,
}

impl ComparisonFunctions {
    pub fn new(c: f64) -> Self {
        Self { c }
    }

    fn use_series(&self, t: f64) -> bool {
        self.c.abs() < SERIES_THRESHOLD && self.c.abs() * t * t <= 1.0
    }

    /// `S_c(t)`.
    pub fn sn(&self, t: f64) -> f64 {
        let c = self.c;
        if self.use_series(t) {
            // t * sum_k (-c t^2)^k / (2k+1)!
            let x = -c * t * t;
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 1..8 {
                term *= x / ((2 * k) as f64 * (2 * k + 1) as f64);
                sum += term;
            }
            t * sum
        } else if c > 0.0 {
            let k = c.sqrt();
            (k * t).sin() / k
        } else {
            let k = (-c).sqrt();
            (k * t).sinh() / k
        }
    }

    /// `C_c(t) = S_c'(t)`.
    pub fn cn(&self, t: f64) -> f64 {
        let c = self.c;
        if self.use_series(t) {
            let x = -c * t * t;
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 1..8 {
                term *= x / ((2 * k - 1) as f64 * (2 * k) as f64);
                sum += term;
            }
            sum
        } else if c > 0.0 {
            (c.sqrt() * t).cos()
        } else {
            ((-c).sqrt() * t).cosh()
        }
    }

    /// `S_c''(t) = -c S_c(t)`.
    pub fn sn2(&self, t: f64) -> f64 {
        -self.c * self.sn(t)
    }

    /// `S_c'''(t) = -c C_c(t)`.
    pub fn sn3(&self, t: f64) -> f64 {
        -self.c * self.cn(t)
    }

    /// First conjugate radius `π/√c`, infinite for `c ≤ 0`.
    pub fn conjugate_radius(&self) -> f64 {
        if self.c > 0.0 {
            PI / self.c.sqrt()
        } else {
            f64::INFINITY
        }
    }

    fn check(&self, t: f64) -> Result<()> {
        if !(t >= 0.0) || t > self.conjugate_radius() {
            return Err(Error::Domain { c: self.c, t });
        }
        Ok(())
    }
}

/// `S_c(t)` with domain checking.
pub fn s_c(c: f64, t: f64) -> Result<f64> {
    let cf = ComparisonFunctions::new(c);
    cf.check(t)?;
    Ok(cf.sn(t))
}

/// `C_c(t)` with domain checking.
pub fn c_c(c: f64, t: f64) -> Result<f64> {
    let cf = ComparisonFunctions::new(c);
    cf.check(t)?;
    Ok(cf.cn(t))
}

/// Which hypothesis a model ball is validated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BallContext {
    /// Eigenvalue comparison: radius below the conjugate radius `π/√c`.
    Cheng,
    /// Minimal submanifold bound: radius below `π/(2√c)`.
    Submanifold,
}

/// A violated constraint on a [`ModelBall`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    DimensionTooSmall { n: usize },
    NonPositiveRadius { r: f64 },
    NonFiniteParameter,
    RadiusTooLarge { r: f64, bound: f64, context: BallContext },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionTooSmall { n } => write!(f, "dimension n = {n} < 2"),
            Violation::NonPositiveRadius { r } => write!(f, "radius r = {r} is not positive"),
            Violation::NonFiniteParameter => write!(f, "curvature or radius is not finite"),
            Violation::RadiusTooLarge { r, bound, context } => {
                write!(f, "r = {r} >= {bound} ({context:?} hypothesis)")
            }
        }
    }
}

/// Geodesic ball of radius `r` in the `n`-dimensional space form of
/// curvature `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelBall {
    pub c: f64,
    pub n: usize,
    pub r: f64,
}

impl ModelBall {
    /// Builds a ball, enforcing the conjugate-radius bound for `c > 0`.
    pub fn new(c: f64, n: usize, r: f64) -> Result<Self> {
        let ball = Self { c, n, r };
        validate_ball(&ball, BallContext::Cheng).map_err(|v| Error::InvalidBall(v.to_string()))?;
        Ok(ball)
    }

    pub fn comparison(&self) -> ComparisonFunctions {
        ComparisonFunctions::new(self.c)
    }
}

/// Checks a ball against the radius hypothesis of `context`.
pub fn validate_ball(ball: &ModelBall, context: BallContext) -> std::result::Result<(), Violation> {
    if ball.n < 2 {
        return Err(Violation::DimensionTooSmall { n: ball.n });
    }
    if !ball.c.is_finite() || !ball.r.is_finite() {
        return Err(Violation::NonFiniteParameter);
    }
    if !(ball.r > 0.0) {
        return Err(Violation::NonPositiveRadius { r: ball.r });
    }
    if ball.c > 0.0 {
        let bound = match context {
            BallContext::Cheng => PI / ball.c.sqrt(),
            BallContext::Submanifold => PI / (2.0 * ball.c.sqrt()),
        };
        if ball.r >= bound {
            return Err(Violation::RadiusTooLarge { r: ball.r, bound, context });
        }
    }
    Ok(())
}

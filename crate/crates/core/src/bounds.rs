//! Two-sided Barta bounds, the vector-field lower bound and its equality
//! certificate, and the hyperbolic-space asymptote.
//!
//! For a positive field `f` vanishing on the boundary,
//! `inf(-Lf/f) ≤ λ₁ ≤ sup(-Lf/f)`; for any vector field `X`,
//! `λ₁ ≥ inf(div X - |X|²)`, with equality for `X = -grad log v` where `v`
//! is the ground state. Both hold exactly for the discrete operators of
//! [`crate::domain`], with `λ₁` the discrete eigenvalue.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::domain::{
    div, grad_log, laplacian, norm_sq, DiscreteDomain, DomainKind, GridInfo, ScalarField, VectorField,
};
use crate::error::{Error, Result};
use crate::radial::{model_ball_lambda1, RadialEigenResult};
use crate::report::{Params, Verdict};
use crate::spaceform::ModelBall;

pub const DEFAULT_UPPER_CAP: f64 = 1e8;
/// Relative slack used when checking `lower ≤ λ₁ ≤ upper`.
pub const DEFAULT_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    Barta,
    VectorField,
    McKean,
}

fn infinite_as_null<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) if v.is_finite() => s.serialize_f64(*v),
        _ => s.serialize_none(),
    }
}

/// A lower (and possibly upper) bound on `λ₁` compared against a computed
/// value. `upper = None` means `+∞`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub source: BoundSource,
    pub lower: f64,
    #[serde(serialize_with = "infinite_as_null")]
    pub upper: Option<f64>,
    pub lambda1: f64,
    /// `λ₁ - lower`.
    pub margin_lower: f64,
    /// `upper - λ₁`.
    #[serde(serialize_with = "infinite_as_null")]
    pub margin_upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridInfo>,
    pub params: Params,
    pub verdict: Verdict,
}

impl BoundReport {
    fn new(
        source: BoundSource,
        lower: f64,
        upper: Option<f64>,
        lambda1: f64,
        grid: Option<GridInfo>,
        params: Params,
        slack: f64,
    ) -> Self {
        let margin_lower = lambda1 - lower;
        let margin_upper = upper.map(|u| u - lambda1);
        let s = slack * lambda1.abs().max(1.0);
        let ok = margin_lower >= -s && margin_upper.is_none_or(|m| m >= -s);
        Self {
            source,
            lower,
            upper,
            lambda1,
            margin_lower,
            margin_upper,
            grid,
            params,
            verdict: Verdict::from_bool(ok),
        }
    }

    /// Smallest of the two margins, infinite upper counting as `+∞`.
    pub fn margin(&self) -> f64 {
        self.margin_lower.min(self.margin_upper.unwrap_or(f64::INFINITY))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BartaOptions {
    /// Upper values above this are reported as `+∞`.
    pub cap: f64,
    /// Interior nodes within this many cells of the boundary are skipped.
    pub layer: usize,
    pub slack: f64,
}

impl Default for BartaOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_UPPER_CAP, layer: 0, slack: DEFAULT_SLACK }
    }
}

/// A seeded positive field vanishing on the boundary:
/// `d^p exp(Σ a_k cos(k π s + φ_k) + Σ b_k s cos(k θ + ψ_k))`, where `d` is
/// a distance-like profile to the boundary and `s ∈ [0, 1]` the normalized
/// first coordinate.
pub fn random_test_field(domain: &DiscreteDomain, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = rng.random_range(0.5..2.5);
    let a: Vec<(f64, f64)> =
        (1..=4).map(|k| (rng.random_range(-1.0..1.0) / k as f64, rng.random_range(0.0..TAU))).collect();
    let b: Vec<(f64, f64)> =
        (1..=3).map(|k| (rng.random_range(-1.0..1.0) / k as f64, rng.random_range(0.0..TAU))).collect();
    let (lo, hi) =
        domain.coords().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), c| (l.min(c.0), h.max(c.0)));
    let two_sided = !matches!(domain.kind(), DomainKind::Radial1D | DomainKind::Polar2D);
    domain.sample(|t, th| {
        let s = (t - lo) / (hi - lo);
        let d = if two_sided { 4.0 * s * (1.0 - s) } else { 1.0 - s };
        let radial: f64 = a.iter().enumerate().map(|(k, &(ak, ph))| ak * ((k + 1) as f64 * PI * s + ph).cos()).sum();
        let angular: f64 = b.iter().enumerate().map(|(k, &(bk, ph))| bk * s * ((k + 1) as f64 * th + ph).cos()).sum();
        d.max(0.0).powf(p) * (radial + angular).exp()
    })
}

/// `-L f / f` at every node of `core(layer)`.
pub fn barta_quotient(domain: &DiscreteDomain, f: &[f64], layer: usize) -> Result<Vec<(usize, f64)>> {
    domain.check_len(f, "test field")?;
    if let Some(&i) = domain.interior().iter().find(|&&i| !(f[i] > 0.0) || !f[i].is_finite()) {
        return Err(Error::InvalidInput(format!("test field must be positive inside; f = {} at node {i}", f[i])));
    }
    let lf = laplacian(domain, f)?;
    Ok(domain.core(layer).map(|i| (i, -lf[i] / f[i])).collect())
}

/// Barta's two-sided bound for the test field `f`.
pub fn barta_bounds(domain: &DiscreteDomain, f: &[f64], opts: &BartaOptions) -> Result<BoundReport> {
    let q = barta_quotient(domain, f, opts.layer)?;
    if q.is_empty() {
        return Err(Error::InvalidInput(format!("no interior nodes beyond a {}-cell layer", opts.layer)));
    }
    let lower = q.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let sup = q.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let upper = (sup <= opts.cap).then_some(sup);
    let lambda1 = domain.ground_state()?.lambda;
    let params = Params::new().with("cap", opts.cap).with("layer", opts.layer).with("sup_quotient", sup);
    Ok(BoundReport::new(BoundSource::Barta, lower, upper, lambda1, Some(domain.grid()), params, opts.slack))
}

/// Pointwise `div X - |X|²`, `None` where it is not finite.
pub fn vfield_density(domain: &DiscreteDomain, x: &VectorField) -> Result<Vec<Option<f64>>> {
    let d = div(domain, x)?;
    let n = norm_sq(domain, x)?;
    Ok(d.iter().zip(&n).map(|(a, b)| Some(a - b).filter(|v| v.is_finite())).collect())
}

/// `inf (div X - |X|²)` over interior nodes more than `layer` cells from
/// the boundary. Nodes where `X` is not finite are skipped and counted.
pub fn vfield_lower_bound(domain: &DiscreteDomain, x: &VectorField, layer: usize) -> Result<BoundReport> {
    let density = vfield_density(domain, x)?;
    let mut lower = f64::INFINITY;
    let (mut used, mut skipped) = (0usize, 0usize);
    for i in domain.core(layer) {
        match density[i] {
            Some(v) => {
                lower = lower.min(v);
                used += 1;
            }
            None => skipped += 1,
        }
    }
    if used == 0 {
        return Err(Error::InvalidInput("vector field is not finite at any admissible node".into()));
    }
    let lambda1 = domain.ground_state()?.lambda;
    let params = Params::new().with("layer", layer).with("nodes", used).with("skipped_nonfinite", skipped);
    Ok(BoundReport::new(BoundSource::VectorField, lower, None, lambda1, Some(domain.grid()), params, DEFAULT_SLACK))
}

/// `X₀ = -grad log v` for the ground state `v` of the domain.
pub fn optimal_vfield(domain: &DiscreteDomain) -> Result<VectorField> {
    let v = &domain.ground_state()?.u;
    Ok(grad_log(domain, v)?.negated())
}

/// Vector-field bound evaluated at `X₀`; the certificate of equality.
pub fn certificate(domain: &DiscreteDomain, layer: usize) -> Result<BoundReport> {
    vfield_lower_bound(domain, &optimal_vfield(domain)?, layer)
}

/// `λ₁` of the hyperbolic ball against the asymptote `(n-1)²/4`.
pub fn mckean_report(n: usize, r: f64, tol: f64) -> Result<(BoundReport, RadialEigenResult)> {
    let res = model_ball_lambda1(&ModelBall::new(-1.0, n, r)?, tol)?;
    let floor = ((n - 1) * (n - 1)) as f64 / 4.0;
    let params = Params::new().with("n", n).with("r", r).with("c", -1.0).with("tol", tol).with("cells", res.n_cells);
    let mut report = BoundReport::new(BoundSource::McKean, floor, None, res.lambda1, None, params, 0.0);
    report.verdict = Verdict::from_bool(res.lambda1 > floor);
    Ok((report, res))
}

use serde::Serialize;

use super::DiscreteDomain;
use crate::error::{Error, Result};

/// One value per node, boundary nodes included.
pub type ScalarField = Vec<f64>;

/// Edge samples of a vector field.
///
/// `values[e]` is the component along edge `e`, oriented from `edge.a` to
/// `edge.b`. On polar and band grids radial edges carry the `∂t` component
/// and angular edges the `f⁻¹∂θ` component of the orthonormal frame.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorField {
    pub values: Vec<f64>,
    /// Share of each edge's `|X|²` attributed to its tail node; the head
    /// gets the rest. `None` splits evenly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<Vec<f64>>,
}

impl VectorField {
    pub fn zeros(domain: &DiscreteDomain) -> Self {
        Self { values: vec![0.0; domain.edges().len()], split: None }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        Self { values, split: None }
    }

    /// Negated field, keeping the split.
    pub fn negated(mut self) -> Self {
        for x in &mut self.values {
            *x = -*x;
        }
        self
    }

    /// Samples a smooth field given by its frame components `(X_t, X_θ)`
    /// at edge midpoints.
    pub fn from_frame(domain: &DiscreteDomain, g: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let c = domain.coords();
        let values = domain
            .edges()
            .iter()
            .map(|e| {
                let (ta, tha) = c[e.a];
                let (tb, thb) = c[e.b];
                if (ta - tb).abs() > 0.0 {
                    // Radial edge; θ is meaningless at the pole so take the other end.
                    let th = if ta == 0.0 { thb } else { tha };
                    g(0.5 * (ta + tb), th).0 * (tb - ta).signum()
                } else {
                    let mut dth = thb - tha;
                    if dth < 0.0 {
                        dth += 2.0 * std::f64::consts::PI;
                    }
                    g(ta, tha + 0.5 * dth).1
                }
            })
            .collect();
        Self { values, split: None }
    }

    fn share(&self, e: usize, tail: bool) -> f64 {
        match &self.split {
            Some(s) if tail => s[e],
            Some(s) => 1.0 - s[e],
            None => 0.5,
        }
    }
}

fn check_field(domain: &DiscreteDomain, x: &VectorField) -> Result<()> {
    if x.values.len() != domain.edges().len() || x.split.as_ref().is_some_and(|s| s.len() != x.values.len()) {
        return Err(Error::InvalidInput(format!(
            "vector field has {} values but the domain has {} edges",
            x.values.len(),
            domain.edges().len()
        )));
    }
    Ok(())
}

/// `(L u)_i` at interior nodes; boundary entries are zero.
pub fn laplacian(domain: &DiscreteDomain, u: &[f64]) -> Result<ScalarField> {
    domain.check_len(u, "field")?;
    let mut out = vec![0.0; domain.len()];
    for &i in domain.interior() {
        let s: f64 = domain.neighbors(i).iter().map(|&(j, e)| domain.edges()[e].conductance * (u[j] - u[i])).sum();
        out[i] = s / domain.mass()[i];
    }
    Ok(out)
}

/// Edge differences `(u_b - u_a) / ℓ`.
pub fn grad(domain: &DiscreteDomain, u: &[f64]) -> Result<VectorField> {
    domain.check_len(u, "field")?;
    let values = domain.edges().iter().map(|e| (u[e.b] - u[e.a]) / e.length).collect();
    Ok(VectorField { values, split: None })
}

/// Discrete `grad log u = (u_b - u_a) / (ℓ √(u_a u_b))`, with the `|X|²`
/// split chosen so that `div X - |X|² = -L u / u` holds exactly for
/// `X = -grad_log(u)`. Edges into zero boundary values are infinite.
pub fn grad_log(domain: &DiscreteDomain, u: &[f64]) -> Result<VectorField> {
    domain.check_len(u, "field")?;
    if let Some(&i) = domain.interior().iter().find(|&&i| !(u[i] > 0.0)) {
        return Err(Error::InvalidInput(format!("grad_log needs a positive field; u = {} at node {i}", u[i])));
    }
    if let Some(i) = (0..u.len()).find(|&i| u[i] < 0.0 || !u[i].is_finite()) {
        return Err(Error::InvalidInput(format!(
            "grad_log needs non-negative boundary data; u = {} at node {i}",
            u[i]
        )));
    }
    let mut values = Vec::with_capacity(domain.edges().len());
    let mut split = Vec::with_capacity(domain.edges().len());
    for e in domain.edges() {
        let (fa, fb) = (u[e.a], u[e.b]);
        let g = (fa * fb).sqrt();
        values.push(if g > 0.0 { (fb - fa) / (e.length * g) } else { (fb - fa).signum() * f64::INFINITY });
        let (sa, sb) = (fa.sqrt(), fb.sqrt());
        split.push(sb / (sa + sb));
    }
    Ok(VectorField { values, split: Some(split) })
}

/// `(div X)_i = (1/M_i) Σ a_e ℓ_e X_e` over edges leaving `i`; boundary
/// entries are zero.
pub fn div(domain: &DiscreteDomain, x: &VectorField) -> Result<ScalarField> {
    check_field(domain, x)?;
    let mut out = vec![0.0; domain.len()];
    for &i in domain.interior() {
        let s: f64 = domain
            .neighbors(i)
            .iter()
            .map(|&(_, k)| {
                let e = &domain.edges()[k];
                let out_sign = if e.a == i { 1.0 } else { -1.0 };
                e.conductance * e.length * x.values[k] * out_sign
            })
            .sum();
        out[i] = s / domain.mass()[i];
    }
    Ok(out)
}

/// Pointwise `|X|²` at interior nodes; boundary entries are zero.
pub fn norm_sq(domain: &DiscreteDomain, x: &VectorField) -> Result<ScalarField> {
    check_field(domain, x)?;
    let mut out = vec![0.0; domain.len()];
    for &i in domain.interior() {
        let s: f64 = domain
            .neighbors(i)
            .iter()
            .map(|&(_, k)| {
                let e = &domain.edges()[k];
                let w = x.share(k, e.a == i);
                if w == 0.0 {
                    0.0
                } else {
                    e.conductance * e.length * e.length * w * x.values[k] * x.values[k]
                }
            })
            .sum();
        out[i] = s / domain.mass()[i];
    }
    Ok(out)
}

/// `⟨u, v⟩ = Σ M_i u_i v_i` over interior nodes.
pub fn weighted_dot(domain: &DiscreteDomain, u: &[f64], v: &[f64]) -> f64 {
    domain.interior().iter().map(|&i| domain.mass()[i] * u[i] * v[i]).sum()
}

/// `Σ_e a_e (u_b - u_a)² / Σ_i M_i u_i²` for a field vanishing on the boundary.
pub fn rayleigh_quotient(domain: &DiscreteDomain, u: &[f64]) -> Result<f64> {
    domain.check_len(u, "field")?;
    if let Some(i) = domain.boundary_nodes().find(|&i| u[i] != 0.0) {
        return Err(Error::InvalidInput(format!("field is {} at boundary node {i}", u[i])));
    }
    let den = weighted_dot(domain, u, u);
    if !(den > 0.0) {
        return Err(Error::InvalidInput("Rayleigh quotient of the zero field".into()));
    }
    let num: f64 = domain.edges().iter().map(|e| e.conductance * (u[e.b] - u[e.a]).powi(2)).sum();
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_polar_domain, build_radial_domain};
    use crate::warp::WarpProfile;

    #[test]
    fn divergence_of_radial_gradient() {
        let w = WarpProfile::from_model(0.0, 1.0, 128).unwrap();
        let d = build_polar_domain(&w, 128, 32).unwrap();
        let x = grad(&d, &d.sample(|t, _| 0.5 * t * t)).unwrap();
        let dx = div(&d, &x).unwrap();
        for &i in d.interior() {
            assert!((dx[i] - 2.0).abs() < 1e-9, "{}", dx[i]);
        }
    }

    #[test]
    fn summation_by_parts() {
        let w = WarpProfile::from_model(-1.0, 1.5, 64).unwrap();
        let d = build_polar_domain(&w, 40, 12).unwrap();
        let phi = d.sample_interior(|t, th| (3.0 * t).sin() + (2.0 * th).cos());
        let x = VectorField::from_values((0..d.edges().len()).map(|k| ((k * 7919) % 13) as f64 - 6.0).collect());
        let lhs = weighted_dot(&d, &phi, &div(&d, &x).unwrap());
        let g = grad(&d, &phi).unwrap();
        let rhs: f64 = d
            .edges()
            .iter()
            .zip(&g.values)
            .zip(&x.values)
            .map(|((e, a), b)| e.conductance * e.length.powi(2) * a * b)
            .sum();
        assert!((lhs + rhs).abs() < 1e-10 * (1.0 + rhs.abs()), "{lhs} {rhs}");
    }

    #[test]
    fn log_gradient_identity_is_exact() {
        let w = WarpProfile::from_model(1.0, 1.2, 64).unwrap();
        let d = build_radial_domain(&w, 3, 64).unwrap();
        let f = d.sample(|t, _| 1.2 * 1.2 - t * t + 0.1 * t);
        let x = grad_log(&d, &f).unwrap().negated();
        let lhs: Vec<f64> = div(&d, &x).unwrap().iter().zip(norm_sq(&d, &x).unwrap()).map(|(a, b)| a - b).collect();
        let lf = laplacian(&d, &f).unwrap();
        for &i in d.interior() {
            assert!((lhs[i] + lf[i] / f[i]).abs() < 1e-9 * (1.0 + lhs[i].abs()), "node {i}");
        }
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let w = WarpProfile::from_model(0.0, 1.0, 32).unwrap();
        let d = build_polar_domain(&w, 16, 8).unwrap();
        assert!(grad(&d, &vec![3.0; d.len()]).unwrap().values.iter().all(|&x| x == 0.0));
        assert!(rayleigh_quotient(&d, &vec![0.0; d.len()]).is_err());
        assert!(rayleigh_quotient(&d, &vec![1.0; d.len()]).is_err());
    }

    #[test]
    fn rayleigh_of_paraboloid() {
        let w = WarpProfile::from_model(0.0, 1.0, 256).unwrap();
        let d = build_polar_domain(&w, 256, 16).unwrap();
        let q = rayleigh_quotient(&d, &d.sample(|t, _| 1.0 - t * t)).unwrap();
        assert!((q - 6.0).abs() < 1e-2, "{q}");
    }
}

//! The Dirichlet problem `Δu - |grad u|² = F`, `u = ψ` on the boundary.
//!
//! With `f = e^{-u}` the equation becomes the linear `Δf + F f = 0`, so
//! solvability is governed by `λ₁`: a positive solution exists when
//! `sup F < λ₁`, and none exists when `inf F ≥ λ₁`. For `F ≡ λ₁` and
//! `ψ = +∞` the solution is `-log` of the ground state.
//!
//! The discrete operator is taken in the form that makes the substitution
//! exact,
//!
//! ```text
//! Q_h(u)_i = Σ_e (a_e / M_i) (1 - e^{u_i - u_j}) = -(L_h e^{-u}) / e^{-u},
//! ```
//!
//! which expands to `L_h u - |grad_h u|²` plus `O(h²)` and stays finite next
//! to boundary nodes where `u = +∞`.

use serde::{Deserialize, Serialize};

use crate::domain::{build_interval, build_polar_domain, build_radial_domain, laplacian, DiscreteDomain, ScalarField};
use crate::error::{Error, Result};
use crate::linalg::BandLdl;
use crate::spaceform::ModelBall;
use crate::warp::WarpProfile;

pub const DEFAULT_GATE_TOL: f64 = 1e-6;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-4;

/// Dirichlet data: finite values on boundary nodes, or `u = +∞`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryData {
    Values(ScalarField),
    BlowUp,
}

#[derive(Debug, Clone)]
pub struct EllipticProblem<'a> {
    pub domain: &'a DiscreteDomain,
    /// Right-hand side per node; only interior values are used.
    pub forcing: ScalarField,
    pub psi: BoundaryData,
}

impl<'a> EllipticProblem<'a> {
    pub fn new(domain: &'a DiscreteDomain, forcing: ScalarField, psi: BoundaryData) -> Result<Self> {
        domain.check_len(&forcing, "F")?;
        if domain.interior().iter().any(|&i| !forcing[i].is_finite()) {
            return Err(Error::InvalidInput("F must be finite at interior nodes".into()));
        }
        if let BoundaryData::Values(psi) = &psi {
            domain.check_len(psi, "psi")?;
            if domain.boundary_nodes().any(|i| !psi[i].is_finite()) {
                return Err(Error::InvalidInput("psi must be finite on the boundary (use blow_up for +inf)".into()));
            }
        }
        Ok(Self { domain, forcing, psi })
    }

    /// Constant `F` and constant `ψ`.
    pub fn constant(domain: &'a DiscreteDomain, f: f64, psi: f64) -> Result<Self> {
        Self::new(domain, vec![f; domain.len()], BoundaryData::Values(vec![psi; domain.len()]))
    }

    fn f_range(&self) -> (f64, f64) {
        self.domain
            .interior()
            .iter()
            .map(|&i| self.forcing[i])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    Solvable,
    NoSolutionCertificate,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize)]
pub struct GateReport {
    pub gate: Gate,
    pub inf_f: f64,
    pub sup_f: f64,
    pub lambda1: f64,
    pub tol: f64,
}

/// `Solvable` if `sup F < λ₁ - tol`, `NoSolutionCertificate` if
/// `inf F ≥ λ₁ + tol`, `Indeterminate` otherwise.
pub fn solvability_gate(problem: &EllipticProblem, tol: f64) -> Result<GateReport> {
    let lambda1 = problem.domain.ground_state()?.lambda;
    let (inf_f, sup_f) = problem.f_range();
    let gate = if sup_f < lambda1 - tol {
        Gate::Solvable
    } else if inf_f >= lambda1 + tol {
        Gate::NoSolutionCertificate
    } else {
        Gate::Indeterminate
    };
    Ok(GateReport { gate, inf_f, sup_f, lambda1, tol })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QLStatus {
    Converged,
    ResidualAboveTolerance,
    PositivityFailure,
}

#[derive(Debug, Clone, Serialize)]
pub struct QLSolution {
    #[serde(skip)]
    pub u: ScalarField,
    #[serde(skip)]
    pub f: ScalarField,
    /// `max |Q_h(u) - F|` over the checked interior nodes.
    pub residual: f64,
    /// Same defect with `L_h u - |grad_h u|²` and evenly split edge norms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub centered_residual: Option<f64>,
    /// `max |L_h f + F f|` over interior nodes.
    pub linear_residual: f64,
    pub min_f: f64,
    /// Largest deviation of the boundary trace of `u` from `ψ`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_error: Option<f64>,
    pub layer: usize,
    pub status: QLStatus,
}

impl QLSolution {
    pub fn write_csv<W: std::io::Write>(&self, domain: &DiscreteDomain, out: W) -> Result<()> {
        domain.write_csv(out, &[("u", &self.u), ("f", &self.f)])
    }
}

/// `Q_h(u)` at interior nodes; boundary entries are zero.
pub fn quasilinear_operator(domain: &DiscreteDomain, u: &[f64]) -> Result<ScalarField> {
    domain.check_len(u, "u")?;
    let mut out = vec![0.0; domain.len()];
    for &i in domain.interior() {
        if !u[i].is_finite() {
            return Err(Error::InvalidInput(format!("u is not finite at interior node {i}")));
        }
        let s: f64 =
            domain.neighbors(i).iter().map(|&(j, e)| domain.edges()[e].conductance * -(u[i] - u[j]).exp_m1()).sum();
        out[i] = s / domain.mass()[i];
    }
    Ok(out)
}

/// `max |Q_h(u) - F|` over interior nodes more than `layer` cells from
/// the boundary.
pub fn residual(problem: &EllipticProblem, u: &[f64], layer: usize) -> Result<f64> {
    let q = quasilinear_operator(problem.domain, u)?;
    Ok(problem.domain.core(layer).map(|i| (q[i] - problem.forcing[i]).abs()).fold(0.0, f64::max))
}

/// `L_h u - |grad_h u|²` with centred edge differences; `None` where a
/// neighbour is infinite.
pub fn centered_operator(domain: &DiscreteDomain, u: &[f64]) -> Result<Vec<Option<f64>>> {
    domain.check_len(u, "u")?;
    let mut out = vec![None; domain.len()];
    for &i in domain.interior() {
        let (mut lap, mut sq) = (0.0, 0.0);
        for &(j, e) in domain.neighbors(i) {
            let a = domain.edges()[e].conductance;
            let d = u[j] - u[i];
            lap += a * d;
            sq += 0.5 * a * d * d;
        }
        let v = (lap - sq) / domain.mass()[i];
        out[i] = v.is_finite().then_some(v);
    }
    Ok(out)
}

fn finish(problem: &EllipticProblem, f: ScalarField, tol: f64, layer: usize) -> Result<QLSolution> {
    let d = problem.domain;
    let min_f = d.interior().iter().map(|&i| f[i]).fold(f64::INFINITY, f64::min);
    let lf = laplacian(d, &f)?;
    let linear_residual = d.interior().iter().map(|&i| (lf[i] + problem.forcing[i] * f[i]).abs()).fold(0.0, f64::max);
    if !(min_f > 0.0) {
        return Ok(QLSolution {
            u: vec![f64::NAN; d.len()],
            f,
            residual: f64::NAN,
            centered_residual: None,
            linear_residual,
            min_f,
            trace_error: None,
            layer,
            status: QLStatus::PositivityFailure,
        });
    }
    let u: ScalarField = f.iter().map(|&x| -x.ln()).collect();
    let res = residual(problem, &u, layer)?;
    let centered = centered_operator(d, &u)?;
    let centered_residual = d
        .core(layer)
        .filter_map(|i| centered[i].map(|v| (v - problem.forcing[i]).abs()))
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
    let trace_error = match &problem.psi {
        BoundaryData::Values(psi) => Some(d.boundary_nodes().map(|i| (u[i] - psi[i]).abs()).fold(0.0, f64::max)),
        BoundaryData::BlowUp => None,
    };
    let status = if res <= tol { QLStatus::Converged } else { QLStatus::ResidualAboveTolerance };
    Ok(QLSolution { u, f, residual: res, centered_residual, linear_residual, min_f, trace_error, layer, status })
}

/// Solves the linearized problem without consulting the gate: harmonic
/// extension `v` of `e^{-ψ}`, then `(-L - F) h = F v` with zero boundary
/// values and `f = v + h`. Positivity of `f` is checked, not assumed.
pub fn solve_linear(problem: &EllipticProblem, tol: f64) -> Result<QLSolution> {
    let d = problem.domain;
    let psi = match &problem.psi {
        BoundaryData::Values(p) => p,
        BoundaryData::BlowUp => {
            return Err(Error::InvalidInput("blow-up boundary data: use blowup_solution".into()));
        }
    };
    let mut boundary = vec![0.0; d.len()];
    for i in d.boundary_nodes() {
        boundary[i] = (-psi[i]).exp();
    }
    let stiff = d.stiffness();
    let load = d.boundary_load(&boundary);
    let v = BandLdl::factor(&stiff)?.solve(&load);

    let m = d.interior_mass();
    let fi = d.gather(&problem.forcing);
    let mut shifted = stiff;
    shifted.add_diagonal(&fi.iter().zip(&m).map(|(f, m)| -f * m).collect::<Vec<_>>());
    let rhs: Vec<f64> = (0..v.len()).map(|k| fi[k] * m[k] * v[k]).collect();
    let h = BandLdl::factor(&shifted)?.solve(&rhs);

    let mut f = d.scatter(&v.iter().zip(&h).map(|(a, b)| a + b).collect::<Vec<_>>());
    for i in d.boundary_nodes() {
        f[i] = boundary[i];
    }
    finish(problem, f, tol, 0)
}

/// Solves the Dirichlet problem when the gate says `Solvable`.
pub fn solve_dirichlet(problem: &EllipticProblem, tol: f64) -> Result<QLSolution> {
    let gate = solvability_gate(problem, DEFAULT_GATE_TOL)?;
    if gate.gate != Gate::Solvable {
        return Err(Error::InvalidInput(format!(
            "gate is {:?} (sup F = {}, lambda1 = {}); no existence claim",
            gate.gate, gate.sup_f, gate.lambda1
        )));
    }
    solve_linear(problem, tol)
}

/// `u = -log φ₁` for the max-normalized ground state, which solves the
/// problem with `F ≡ λ₁` and `u = +∞` on the boundary. The residual is
/// measured against `λ₁` away from a `layer`-cell boundary layer.
pub fn blowup_solution(domain: &DiscreteDomain, layer: usize, tol: f64) -> Result<(QLSolution, f64)> {
    let g = domain.ground_state()?;
    let problem = EllipticProblem::new(domain, vec![g.lambda; domain.len()], BoundaryData::BlowUp)?;
    let mut sol = finish(&problem, g.u.clone(), tol, layer)?;
    sol.centered_residual = None;
    for i in domain.boundary_nodes() {
        sol.u[i] = f64::INFINITY;
    }
    Ok((sol, g.lambda))
}

/// Domain section of a problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    /// `radial`, `polar` or `interval`.
    pub kind: String,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub warp: Option<WarpSamples>,
    #[serde(default = "default_dim")]
    pub n: usize,
    #[serde(default)]
    pub r: Option<f64>,
    #[serde(rename = "N")]
    pub cells: usize,
    #[serde(default)]
    pub n_theta: Option<usize>,
}

fn default_dim() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpSamples {
    pub r: f64,
    pub f: Vec<f64>,
    pub df: Vec<f64>,
    pub d2f: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Constant(f64),
    Samples(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PsiSpec {
    Field(FieldSpec),
    Marker(String),
}

/// A problem file: `{"domain": {...}, "F": ..., "psi": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub domain: DomainSpec,
    #[serde(rename = "F")]
    pub forcing: FieldSpec,
    pub psi: PsiSpec,
}

impl DomainSpec {
    pub fn build(&self) -> Result<DiscreteDomain> {
        let warp = || -> Result<WarpProfile> {
            match (&self.warp, self.c, self.r) {
                (Some(w), _, _) => WarpProfile::from_samples(w.r, w.f.clone(), w.df.clone(), w.d2f.clone()),
                (None, Some(c), Some(r)) => {
                    ModelBall::new(c, self.n, r)?;
                    WarpProfile::from_model(c, r, self.cells.max(16))
                }
                _ => Err(Error::InvalidInput("domain needs either warp samples or both c and r".into())),
            }
        };
        match self.kind.as_str() {
            "radial" => build_radial_domain(&warp()?, self.n, self.cells),
            "polar" => build_polar_domain(&warp()?, self.cells, self.n_theta.unwrap_or(32)),
            "interval" => build_interval(self.r.unwrap_or(1.0), self.cells),
            other => Err(Error::InvalidInput(format!("unknown domain kind {other:?} (radial, polar, interval)"))),
        }
    }
}

fn expand(domain: &DiscreteDomain, spec: &FieldSpec, nodes: &[usize], what: &str) -> Result<ScalarField> {
    match spec {
        FieldSpec::Constant(x) => Ok(vec![*x; domain.len()]),
        FieldSpec::Samples(v) if v.len() == domain.len() => Ok(v.clone()),
        FieldSpec::Samples(v) if v.len() == nodes.len() => {
            let mut out = vec![0.0; domain.len()];
            for (k, &i) in nodes.iter().enumerate() {
                out[i] = v[k];
            }
            Ok(out)
        }
        FieldSpec::Samples(v) => Err(Error::InvalidInput(format!(
            "{what} has {} samples; expected {} (all nodes) or {}",
            v.len(),
            domain.len(),
            nodes.len()
        ))),
    }
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("problem file: {e}")))
    }

    pub fn problem<'a>(&self, domain: &'a DiscreteDomain) -> Result<EllipticProblem<'a>> {
        let forcing = expand(domain, &self.forcing, domain.interior(), "F")?;
        let psi = match &self.psi {
            PsiSpec::Marker(m) if m == "blow_up" => BoundaryData::BlowUp,
            PsiSpec::Marker(m) => return Err(Error::InvalidInput(format!("unknown psi marker {m:?}"))),
            PsiSpec::Field(f) => {
                let boundary: Vec<usize> = domain.boundary_nodes().collect();
                BoundaryData::Values(expand(domain, f, &boundary, "psi")?)
            }
        };
        EllipticProblem::new(domain, forcing, psi)
    }
}

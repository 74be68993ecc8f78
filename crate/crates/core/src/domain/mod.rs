//! Discretized domains as weighted graphs.
//!
//! Every domain is a set of nodes carrying a mass `M_i` (the measure of the
//! node's control volume) and a set of edges carrying a conductance `a_e`
//! and a metric length `ℓ_e`. The Laplacian is
//!
//! ```text
//! (L u)_i = (1/M_i) Σ_{e = (i, j)} a_e (u_j - u_i)
//! ```
//!
//! which is symmetric in the mass-weighted inner product and negative
//! semidefinite on fields vanishing at the Dirichlet nodes. Gradients live
//! on edges, and the edge inner product `Σ_e a_e ℓ_e² X_e Y_e` makes the
//! divergence the exact negative adjoint of the gradient.

mod eigen;
mod fields;

use std::f64::consts::PI;
use std::io::Write;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::BandMatrix;
use crate::warp::WarpProfile;

pub use eigen::{smallest_eigenpair, smallest_eigenpair_with_potential, GroundState, DEFAULT_EIG_TOL};
pub use fields::{div, grad, grad_log, laplacian, norm_sq, rayleigh_quotient, weighted_dot, ScalarField, VectorField};

/// Discretization family of a [`DiscreteDomain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    /// Radial part of an `n`-dimensional warped ball.
    #[serde(rename = "radial_1d")]
    Radial1D,
    /// Two-dimensional warped disk on a polar grid.
    #[serde(rename = "polar_2d")]
    Polar2D,
    /// Unweighted interval.
    Interval,
    /// Interval with the operator `(p u')' / q`.
    WeightedInterval,
    /// Conformally flat periodic band `λ(x)² (dx² + dθ²)`.
    #[serde(rename = "band_2d")]
    Band2D,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub conductance: f64,
    pub length: f64,
}

/// Grid summary recorded in reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridInfo {
    pub kind: DomainKind,
    pub cells: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_theta: Option<usize>,
    pub nodes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

#[derive(Debug)]
pub struct DiscreteDomain {
    info: GridInfo,
    extent: f64,
    coords: Vec<(f64, f64)>,
    mass: Vec<f64>,
    boundary: Vec<bool>,
    edges: Vec<Edge>,
    adj_start: Vec<usize>,
    adj: Vec<(usize, usize)>,
    slot: Vec<Option<usize>>,
    interior: Vec<usize>,
    depth: Vec<usize>,
    ground: OnceLock<GroundState>,
}

impl DiscreteDomain {
    fn assemble(
        info: GridInfo,
        extent: f64,
        coords: Vec<(f64, f64)>,
        mass: Vec<f64>,
        boundary: Vec<bool>,
        edges: Vec<Edge>,
    ) -> Self {
        let n = coords.len();
        let mut degree = vec![0usize; n + 1];
        for e in &edges {
            degree[e.a + 1] += 1;
            degree[e.b + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let adj_start = degree.clone();
        let mut fill = degree;
        let mut adj = vec![(0, 0); 2 * edges.len()];
        for (k, e) in edges.iter().enumerate() {
            adj[fill[e.a]] = (e.b, k);
            fill[e.a] += 1;
            adj[fill[e.b]] = (e.a, k);
            fill[e.b] += 1;
        }

        let mut slot = vec![None; n];
        let mut interior = Vec::new();
        for i in 0..n {
            if !boundary[i] {
                slot[i] = Some(interior.len());
                interior.push(i);
            }
        }

        // Graph distance to the Dirichlet set.
        let mut depth = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for i in 0..n {
            if boundary[i] {
                depth[i] = 0;
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            for &(j, _) in &adj[adj_start[i]..adj_start[i + 1]] {
                if depth[j] == usize::MAX {
                    depth[j] = depth[i] + 1;
                    queue.push_back(j);
                }
            }
        }

        Self {
            info,
            extent,
            coords,
            mass,
            boundary,
            edges,
            adj_start,
            adj,
            slot,
            interior,
            depth,
            ground: OnceLock::new(),
        }
    }

    pub fn kind(&self) -> DomainKind {
        self.info.kind
    }

    pub fn grid(&self) -> GridInfo {
        self.info
    }

    /// Radius of a ball, or length of an interval or band.
    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// `(t, θ)` for polar and band grids, `(t, 0)` for one-dimensional ones.
    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.boundary[i]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// `(neighbor, edge index)` pairs of node `i`.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adj[self.adj_start[i]..self.adj_start[i + 1]]
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn boundary_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.boundary[i])
    }

    /// Number of edges between node `i` and the nearest Dirichlet node.
    pub fn depth(&self, i: usize) -> usize {
        self.depth[i]
    }

    /// Interior nodes more than `layer` cells away from the boundary.
    pub fn core(&self, layer: usize) -> impl Iterator<Item = usize> + '_ {
        self.interior.iter().copied().filter(move |&i| self.depth[i] > layer)
    }

    /// Evaluates `g(t, θ)` at every node.
    pub fn sample(&self, g: impl Fn(f64, f64) -> f64) -> ScalarField {
        self.coords.iter().map(|&(t, th)| g(t, th)).collect()
    }

    /// Evaluates `g` at interior nodes and sets boundary nodes to zero.
    pub fn sample_interior(&self, g: impl Fn(f64, f64) -> f64) -> ScalarField {
        self.coords.iter().zip(&self.boundary).map(|(&(t, th), &b)| if b { 0.0 } else { g(t, th) }).collect()
    }

    /// Stiffness matrix `A` restricted to interior nodes, so that
    /// `-M L u = A u` for `u` vanishing on the boundary.
    pub fn stiffness(&self) -> BandMatrix {
        let bw = self.edges.iter().filter_map(|e| Some(self.slot[e.a]?.abs_diff(self.slot[e.b]?))).max().unwrap_or(0);
        let mut a = BandMatrix::zeros(self.interior.len(), bw);
        for e in &self.edges {
            match (self.slot[e.a], self.slot[e.b]) {
                (Some(p), Some(q)) => {
                    a.add(p, p, e.conductance);
                    a.add(q, q, e.conductance);
                    a.add(p, q, -e.conductance);
                }
                (Some(p), None) => a.add(p, p, e.conductance),
                (None, Some(q)) => a.add(q, q, e.conductance),
                (None, None) => {}
            }
        }
        a
    }

    /// Interior masses in interior ordering.
    pub fn interior_mass(&self) -> Vec<f64> {
        self.interior.iter().map(|&i| self.mass[i]).collect()
    }

    pub fn gather(&self, u: &[f64]) -> Vec<f64> {
        self.interior.iter().map(|&i| u[i]).collect()
    }

    pub fn scatter(&self, x: &[f64]) -> ScalarField {
        let mut u = vec![0.0; self.len()];
        for (k, &i) in self.interior.iter().enumerate() {
            u[i] = x[k];
        }
        u
    }

    /// `-A_IB u_B`: the load that boundary values place on interior rows.
    pub fn boundary_load(&self, u: &[f64]) -> Vec<f64> {
        let mut b = vec![0.0; self.interior.len()];
        for e in &self.edges {
            match (self.slot[e.a], self.slot[e.b]) {
                (Some(p), None) => b[p] += e.conductance * u[e.b],
                (None, Some(q)) => b[q] += e.conductance * u[e.a],
                _ => {}
            }
        }
        b
    }

    /// Ground state with the default tolerance, computed once.
    pub fn ground_state(&self) -> Result<&GroundState> {
        if let Some(g) = self.ground.get() {
            return Ok(g);
        }
        let g = smallest_eigenpair(self, DEFAULT_EIG_TOL)?;
        Ok(self.ground.get_or_init(|| g))
    }

    pub fn check_len(&self, u: &[f64], what: &str) -> Result<()> {
        if u.len() != self.len() {
            return Err(Error::InvalidInput(format!(
                "{what} has {} values but the domain has {} nodes",
                u.len(),
                self.len()
            )));
        }
        Ok(())
    }

    /// Writes node coordinates and the named columns as CSV.
    pub fn write_csv<W: Write>(&self, out: W, columns: &[(&str, &[f64])]) -> Result<()> {
        for (name, col) in columns {
            self.check_len(col, name)?;
        }
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t", "theta", "boundary"];
        header.extend(columns.iter().map(|c| c.0));
        w.write_record(&header)?;
        for i in 0..self.len() {
            let mut row = vec![
                self.coords[i].0.to_string(),
                self.coords[i].1.to_string(),
                u8::from(self.boundary[i]).to_string(),
            ];
            row.extend(columns.iter().map(|c| c.1[i].to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

const GAUSS4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_86),
    (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_86),
];

fn integrate(a: f64, b: f64, g: impl Fn(f64) -> f64) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    GAUSS4.iter().map(|&(x, w)| w * g(mid + half * x)).sum::<f64>() * half
}

fn check_warp_grid(warp: &WarpProfile, cells: usize) -> Result<()> {
    if cells < 16 {
        return Err(Error::InvalidInput(format!("radial grid needs at least 16 cells, got {cells}")));
    }
    if (1..cells).any(|i| warp.eval(warp.radius() * i as f64 / cells as f64).0 <= 0.0) {
        return Err(Error::InvalidWarp("interpolated warp is not positive on the grid".into()));
    }
    Ok(())
}

/// Radial part of the ball `dt² + f² g_{S^{n-1}}`: nodes `t_i = i r / N`,
/// Dirichlet at `t = r`, no-flux (symmetry) at the pole.
pub fn build_radial_domain(warp: &WarpProfile, n: usize, cells: usize) -> Result<DiscreteDomain> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("dimension {n} < 2")));
    }
    check_warp_grid(warp, cells)?;
    let r = warp.radius();
    let h = r / cells as f64;
    let p = (n - 1) as i32;
    let density = |t: f64| warp.eval(t).0.powi(p);

    let coords = (0..=cells).map(|i| (i as f64 * h, 0.0)).collect();
    let mut mass: Vec<f64> = (0..=cells).map(|i| h * density(i as f64 * h)).collect();
    mass[0] = integrate(0.0, 0.5 * h, density);
    mass[cells] *= 0.5;
    let mut boundary = vec![false; cells + 1];
    boundary[cells] = true;
    let edges = (0..cells)
        .map(|i| Edge { a: i, b: i + 1, conductance: density((i as f64 + 0.5) * h) / h, length: h })
        .collect();
    let info = GridInfo { kind: DomainKind::Radial1D, cells, n_theta: None, nodes: cells + 1, dim: Some(n) };
    Ok(DiscreteDomain::assemble(info, r, coords, mass, boundary, edges))
}

/// The disk `dt² + f² dθ²` on a polar grid with `cells` rings and
/// `n_theta` angular nodes per ring; one shared node at the pole.
pub fn build_polar_domain(warp: &WarpProfile, cells: usize, n_theta: usize) -> Result<DiscreteDomain> {
    if n_theta < 8 {
        return Err(Error::InvalidInput(format!("polar grid needs at least 8 angular nodes, got {n_theta}")));
    }
    check_warp_grid(warp, cells)?;
    let r = warp.radius();
    let h = r / cells as f64;
    let dth = 2.0 * PI / n_theta as f64;
    let f = |t: f64| warp.eval(t).0;
    let id = |i: usize, k: usize| 1 + (i - 1) * n_theta + k % n_theta;

    let nodes = 1 + cells * n_theta;
    let mut coords = vec![(0.0, 0.0)];
    let mut mass = vec![2.0 * PI * integrate(0.0, 0.5 * h, f)];
    let mut boundary = vec![false];
    for i in 1..=cells {
        let t = i as f64 * h;
        let m = if i == cells { 0.5 } else { 1.0 } * h * f(t) * dth;
        for k in 0..n_theta {
            coords.push((t, k as f64 * dth));
            mass.push(m);
            boundary.push(i == cells);
        }
    }

    let mut edges = Vec::with_capacity(2 * nodes);
    let spoke = f(0.5 * h) * dth / h;
    for k in 0..n_theta {
        edges.push(Edge { a: 0, b: id(1, k), conductance: spoke, length: h });
    }
    for i in 1..=cells {
        let t = i as f64 * h;
        if i < cells {
            let a = f(t + 0.5 * h) * dth / h;
            for k in 0..n_theta {
                edges.push(Edge { a: id(i, k), b: id(i + 1, k), conductance: a, length: h });
            }
        }
        let arc = f(t) * dth;
        for k in 0..n_theta {
            edges.push(Edge { a: id(i, k), b: id(i, k + 1), conductance: h / arc, length: arc });
        }
    }
    let info = GridInfo { kind: DomainKind::Polar2D, cells, n_theta: Some(n_theta), nodes, dim: Some(2) };
    Ok(DiscreteDomain::assemble(info, r, coords, mass, boundary, edges))
}

/// The interval `(0, length)` with Dirichlet data at both ends.
pub fn build_interval(length: f64, cells: usize) -> Result<DiscreteDomain> {
    build_weighted_interval(0.0, length, cells, |_| 1.0, |_| 1.0).map(|mut d| {
        d.info.kind = DomainKind::Interval;
        d
    })
}

/// The interval `(x0, x1)` with the operator `(p u')' / q`, Dirichlet at
/// both ends. `q` is the mass density, `p` the stiffness.
pub fn build_weighted_interval(
    x0: f64,
    x1: f64,
    cells: usize,
    p: impl Fn(f64) -> f64,
    q: impl Fn(f64) -> f64,
) -> Result<DiscreteDomain> {
    if cells < 16 {
        return Err(Error::InvalidInput(format!("interval grid needs at least 16 cells, got {cells}")));
    }
    if !(x1 > x0) || !x0.is_finite() || !x1.is_finite() {
        return Err(Error::InvalidInput(format!("empty interval ({x0}, {x1})")));
    }
    let h = (x1 - x0) / cells as f64;
    let x = |i: f64| x0 + i * h;
    let coords = (0..=cells).map(|i| (x(i as f64), 0.0)).collect();
    let mass: Vec<f64> =
        (0..=cells).map(|i| if i == 0 || i == cells { 0.5 } else { 1.0 } * h * q(x(i as f64))).collect();
    if mass.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::InvalidInput("mass density must be positive".into()));
    }
    let edges: Vec<Edge> =
        (0..cells).map(|i| Edge { a: i, b: i + 1, conductance: p(x(i as f64 + 0.5)) / h, length: h }).collect();
    if edges.iter().any(|e| !(e.conductance > 0.0)) {
        return Err(Error::InvalidInput("stiffness must be positive".into()));
    }
    let mut boundary = vec![false; cells + 1];
    boundary[0] = true;
    boundary[cells] = true;
    let info = GridInfo { kind: DomainKind::WeightedInterval, cells, n_theta: None, nodes: cells + 1, dim: None };
    Ok(DiscreteDomain::assemble(info, x1 - x0, coords, mass, boundary, edges))
}

/// The band `(x0, x1) × S¹` with conformal metric `s(x)² (dx² + dθ²)`,
/// Dirichlet on both boundary circles.
pub fn build_band(x0: f64, x1: f64, cells: usize, n_theta: usize, s: impl Fn(f64) -> f64) -> Result<DiscreteDomain> {
    if cells < 16 || n_theta < 8 {
        return Err(Error::InvalidInput(format!("band grid {cells} x {n_theta} is too coarse")));
    }
    if !(x1 > x0) {
        return Err(Error::InvalidInput(format!("empty interval ({x0}, {x1})")));
    }
    let h = (x1 - x0) / cells as f64;
    let dth = 2.0 * PI / n_theta as f64;
    let id = |i: usize, k: usize| i * n_theta + k % n_theta;
    let nodes = (cells + 1) * n_theta;
    let mut coords = Vec::with_capacity(nodes);
    let mut mass = Vec::with_capacity(nodes);
    let mut boundary = Vec::with_capacity(nodes);
    for i in 0..=cells {
        let x = x0 + i as f64 * h;
        let edge = i == 0 || i == cells;
        let m = if edge { 0.5 } else { 1.0 } * h * dth * s(x).powi(2);
        for k in 0..n_theta {
            coords.push((x, k as f64 * dth));
            mass.push(m);
            boundary.push(edge);
        }
    }
    let mut edges = Vec::with_capacity(2 * nodes);
    for i in 0..=cells {
        let x = x0 + i as f64 * h;
        if i < cells {
            let len = s(x + 0.5 * h) * h;
            for k in 0..n_theta {
                edges.push(Edge { a: id(i, k), b: id(i + 1, k), conductance: dth / h, length: len });
            }
        }
        let len = s(x) * dth;
        for k in 0..n_theta {
            edges.push(Edge { a: id(i, k), b: id(i, k + 1), conductance: h / dth, length: len });
        }
    }
    let info = GridInfo { kind: DomainKind::Band2D, cells, n_theta: Some(n_theta), nodes, dim: Some(2) };
    Ok(DiscreteDomain::assemble(info, x1 - x0, coords, mass, boundary, edges))
}

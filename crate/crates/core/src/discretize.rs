//! Extension matrix `E`, finite-difference Laplacian `Δh`, and the operators
//! `M̃ = Δh E` and `M = diag(Δh) + (Δh - diag(Δh)) E`.
//!
//! `E` maps band values to values on band and halo nodes (`n_ext × m`) and
//! `Δh` maps those back to band rows (`m × n_ext`), so both products are
//! square `m × m` matrices.

use std::fmt;

use crate::band::{build_band, fd_stencil, footprint_base, Band, ExtensionTarget, Grid, Node, StencilSpec};
use crate::error::{CpmError, Result};
use crate::geometry::{Point, Surface};
use crate::par;
use crate::sparse::SparseOperator;

/// Boundary treatment at ghost nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BcSpec {
    /// Closed surfaces.
    None,
    /// Homogeneous Neumann through the mirrored closest point.
    Neumann,
    /// Homogeneous Dirichlet through the mirrored closest point.
    Dirichlet,
    /// First-order Neumann: ghosts extend from `cp` like every other node.
    NaiveNeumann,
    /// First-order Dirichlet: ghost values are zero.
    NaiveDirichlet,
}

impl BcSpec {
    pub const NAMES: &'static [&'static str] =
        &["none", "neumann", "dirichlet", "naive_neumann", "naive_dirichlet"];

    pub fn from_name(name: &str) -> Result<BcSpec> {
        Ok(match name {
            "none" => BcSpec::None,
            "neumann" | "neumann_homogeneous" => BcSpec::Neumann,
            "dirichlet" | "dirichlet_homogeneous" => BcSpec::Dirichlet,
            "naive_neumann" | "naive_firstorder_neumann" => BcSpec::NaiveNeumann,
            "naive_dirichlet" | "naive_firstorder_dirichlet" => BcSpec::NaiveDirichlet,
            other => {
                return Err(CpmError::Config(format!(
                    "unknown boundary condition '{other}'; valid: {}",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            BcSpec::None => "none",
            BcSpec::Neumann => "neumann",
            BcSpec::Dirichlet => "dirichlet",
            BcSpec::NaiveNeumann => "naive_neumann",
            BcSpec::NaiveDirichlet => "naive_dirichlet",
        }
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self, BcSpec::Dirichlet | BcSpec::NaiveDirichlet)
    }
}

impl fmt::Display for BcSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Barycentric Lagrange weights for interpolating at `target` from values at
/// distinct `nodes`. A target equal to a node gives the unit vector.
pub fn barycentric_weights_1d(nodes: &[f64], target: f64) -> Vec<f64> {
    let n = nodes.len();
    if let Some(j) = nodes.iter().position(|&x| x == target) {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        return e;
    }
    let w: Vec<f64> = (0..n)
        .map(|j| {
            let prod: f64 = (0..n).filter(|&k| k != j).map(|k| nodes[j] - nodes[k]).product();
            1.0 / prod
        })
        .collect();
    let terms: Vec<f64> = (0..n).map(|j| w[j] / (target - nodes[j])).collect();
    let sum: f64 = terms.iter().sum();
    terms.into_iter().map(|t| t / sum).collect()
}

/// Weights over the footprint of one axis, in grid units.
fn axis_weights(t: f64, p: usize) -> (i64, Vec<f64>) {
    let base = footprint_base(t, p);
    let nodes: Vec<f64> = (0..=p as i64).map(|k| (base + k) as f64).collect();
    (base, barycentric_weights_1d(&nodes, t))
}

/// Interpolation row at `target` over band columns: the tensor product of
/// per-axis barycentric weights. Returns `None` for a footprint node outside
/// the band.
fn try_extension_row(band: &Band, target: Point) -> std::result::Result<Vec<(usize, f64)>, Node> {
    let grid = band.grid();
    let p = band.spec().p;
    let axes: Vec<(i64, Vec<f64>)> = (0..grid.dim).map(|k| axis_weights(grid.coordinate(target, k), p)).collect();
    let mut row = Vec::with_capacity((p + 1).pow(grid.dim as u32));
    let third = if grid.dim == 3 { p + 1 } else { 1 };
    for a in 0..=p {
        for b in 0..=p {
            for c in 0..third {
                let mut node = [axes[0].0 + a as i64, axes[1].0 + b as i64, 0];
                let mut w = axes[0].1[a] * axes[1].1[b];
                if grid.dim == 3 {
                    node[2] = axes[2].0 + c as i64;
                    w *= axes[2].1[c];
                }
                match band.band_index(&node) {
                    Some(j) => row.push((j, w)),
                    None => return Err(node),
                }
            }
        }
    }
    Ok(row)
}

/// One row of `E`: interpolation of band data at `target`.
pub fn extension_row(band: &Band, target: Point) -> Result<Vec<(usize, f64)>> {
    try_extension_row(band, target).map_err(|node| {
        CpmError::Internal(format!("interpolation footprint node {node:?} is not in the band"))
    })
}

/// Like [`extension_row`] for arbitrary evaluation points; a footprint
/// outside the band is a domain error.
pub fn evaluation_row(band: &Band, point: Point) -> Result<Vec<(usize, f64)>> {
    try_extension_row(band, point).map_err(|node| {
        CpmError::Domain(format!("point {point:?} needs grid node {node:?}, which is outside the band"))
    })
}

/// `E` (`n_ext × m`), with boundary-condition rows at ghost nodes.
pub fn build_extension_matrix(band: &Band) -> Result<SparseOperator> {
    let idx: Vec<usize> = (0..band.n_ext()).collect();
    let rows = par::map(&idx, |&i| -> Result<Vec<(usize, f64)>> {
        match band.target(i)? {
            ExtensionTarget::Interpolate { point, sign } => {
                Ok(extension_row(band, point)?.into_iter().map(|(j, w)| (j, sign * w)).collect())
            }
            ExtensionTarget::Zero => Ok(Vec::new()),
        }
    });
    let mut triplets = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        triplets.extend(row?.into_iter().map(|(j, w)| (i, j, w)));
    }
    SparseOperator::from_triplets(band.n_ext(), band.m(), triplets)
}

/// `Δh` (`m × n_ext`) of order `q` from the band's stencil spec.
pub fn build_fd_laplacian(band: &Band) -> Result<SparseOperator> {
    let grid = band.grid();
    let stencil = fd_stencil(grid.dim, band.spec().q);
    let inv = 1.0 / (grid.dx * grid.dx);
    let mut triplets = Vec::with_capacity(band.m() * stencil.len());
    for (i, n) in band.nodes().iter().enumerate() {
        for (o, w) in &stencil {
            let nb = [n[0] + o[0], n[1] + o[1], n[2] + o[2]];
            let j = band
                .index_of(&nb)
                .ok_or_else(|| CpmError::Internal(format!("stencil neighbor {nb:?} of node {i} is missing")))?;
            triplets.push((i, j, w * inv));
        }
    }
    SparseOperator::from_triplets(band.m(), band.n_ext(), triplets)
}

/// `M̃ = Δh E`.
pub fn assemble_unstabilized(delta_h: &SparseOperator, e: &SparseOperator) -> Result<SparseOperator> {
    delta_h.matmul(e)
}

/// `M = diag(Δh) + (Δh - diag(Δh)) E`: the diagonal acts on the node value
/// itself rather than on its extension.
pub fn assemble_stabilized(delta_h: &SparseOperator, e: &SparseOperator) -> Result<SparseOperator> {
    let diag = SparseOperator::from_diagonal(&delta_h.diagonal());
    let off = delta_h.without_diagonal().matmul(e)?;
    if diag.nrows() != off.nrows() || diag.ncols() != off.ncols() {
        return Err(CpmError::Internal("operator is not square".into()));
    }
    diag.linear_combination(1.0, &off, 1.0)
}

/// Matrix-vector product.
pub fn apply_operator(op: &SparseOperator, u: &[f64]) -> Result<Vec<f64>> {
    op.matvec(u)
}

/// Everything assembled for one surface, grid and stencil choice.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub band: Band,
    pub e: SparseOperator,
    pub delta_h: SparseOperator,
}

impl Discretization {
    pub fn new(surface: &Surface, grid: &Grid, spec: StencilSpec, bc: BcSpec) -> Result<Self> {
        let band = build_band(surface, grid, spec, bc)?;
        let e = build_extension_matrix(&band)?;
        let delta_h = build_fd_laplacian(&band)?;
        Ok(Discretization { band, e, delta_h })
    }

    pub fn stabilized(&self) -> Result<SparseOperator> {
        assemble_stabilized(&self.delta_h, &self.e)
    }

    pub fn unstabilized(&self) -> Result<SparseOperator> {
        assemble_unstabilized(&self.delta_h, &self.e)
    }

    /// Band rows of `E` (`m × m`).
    pub fn e_band(&self) -> SparseOperator {
        self.e.leading_rows(self.band.m())
    }

    /// Band rows of `Δh` restricted to band columns (`m × m`).
    pub fn delta_h_band(&self) -> SparseOperator {
        self.delta_h.leading_columns(self.band.m())
    }

    /// Right-hand-side contribution of non-homogeneous Dirichlet data `g` on
    /// the boundary: with ghost values `2 g(cp) - u(cp̄)` the operator becomes
    /// `M u + Δh c`, where `c` holds `2 g(cp)` at ghost nodes (off-diagonal
    /// part only for the stabilized form). Returns `(Δh - diag) c`.
    pub fn dirichlet_lift(&self, g: &dyn Fn(Point) -> f64) -> Result<Vec<f64>> {
        let c: Vec<f64> = (0..self.band.n_ext())
            .map(|i| if self.band.is_ghost(i) { 2.0 * g(self.band.cp(i).point) } else { 0.0 })
            .collect();
        self.delta_h.without_diagonal().matvec(&c)
    }
}

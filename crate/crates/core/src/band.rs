//! The computational band: grid nodes around the surface, closed under every
//! finite-difference and interpolation stencil access.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::discretize::BcSpec;
use crate::error::{CpmError, Result};
use crate::geometry::{cp_bar_from, dist, ClosestPoint, CpResult, Point, Surface};
use crate::par;

/// Integer grid multi-index; unused trailing axes are zero.
pub type Node = [i64; 3];

/// Default limit on the number of band nodes.
pub const DEFAULT_NODE_BUDGET: usize = 5_000_000;

/// Grid-coordinate offsets closer than this to an integer are snapped to it.
const SNAP_TOL: f64 = 1e-12;

/// Uniform Cartesian grid `origin + dx * index`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub dx: f64,
    pub origin: Point,
    pub dim: usize,
}

impl Grid {
    pub fn new(dx: f64, dim: usize) -> Result<Self> {
        Self::with_origin(dx, dim, [0.0; 3])
    }

    pub fn with_origin(dx: f64, dim: usize, origin: Point) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(CpmError::Config(format!("grid spacing must be positive, got {dx}")));
        }
        if !(dim == 2 || dim == 3) {
            return Err(CpmError::Config(format!("embedding dimension must be 2 or 3, got {dim}")));
        }
        Ok(Grid { dx, origin, dim })
    }

    /// Grid suited to a surface: node-centered at the origin, except for the
    /// L-shaped solid whose edges fall halfway between nodes.
    pub fn for_surface(surface: &Surface, dx: f64) -> Result<Self> {
        let origin = if surface.is_solid() { [0.5 * dx, 0.5 * dx, 0.0] } else { [0.0; 3] };
        Self::with_origin(dx, surface.dim(), origin)
    }

    pub fn point(&self, n: Node) -> Point {
        let mut p = [0.0; 3];
        for k in 0..self.dim {
            p[k] = self.origin[k] + self.dx * n[k] as f64;
        }
        p
    }

    /// Position of `x` along axis `k` in grid units.
    pub fn coordinate(&self, x: Point, k: usize) -> f64 {
        snap((x[k] - self.origin[k]) / self.dx)
    }

    pub fn nearest_node(&self, x: Point) -> Node {
        let mut n = [0; 3];
        for k in 0..self.dim {
            n[k] = self.coordinate(x, k).round() as i64;
        }
        n
    }
}

fn snap(t: f64) -> f64 {
    let r = t.round();
    if (t - r).abs() < SNAP_TOL {
        r
    } else {
        t
    }
}

/// Interpolation degree `p` and finite-difference order `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StencilSpec {
    pub p: usize,
    pub q: usize,
}

impl StencilSpec {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p < 1 {
            return Err(CpmError::Config("interpolation degree p must be at least 1".into()));
        }
        if q != 2 && q != 4 {
            return Err(CpmError::Config(format!("finite-difference order q must be 2 or 4, got {q}")));
        }
        Ok(StencilSpec { p, q })
    }

    /// Interpolation of degree below `q + 1` limits the attainable accuracy.
    pub fn warning(&self) -> Option<String> {
        (self.p < self.q + 1).then(|| {
            format!(
                "interpolation degree p = {} is below q + 1 = {}; accuracy will be limited",
                self.p,
                self.q + 1
            )
        })
    }
}

/// First index of the interpolation footprint along one axis for grid
/// coordinate `t`: the target sits in the central cell for odd `p` and in the
/// cell right of center for even `p`.
pub fn footprint_base(t: f64, p: usize) -> i64 {
    let f = snap(t).floor() as i64;
    let p = p as i64;
    if p % 2 == 1 {
        f - (p - 1) / 2
    } else {
        f - p / 2 + 1
    }
}

/// The `(p+1)^d` tensor cube of nodes used to interpolate at `point`, in
/// lexicographic order.
pub fn interp_footprint(point: Point, grid: &Grid, p: usize) -> Vec<Node> {
    let mut base = [0i64; 3];
    for k in 0..grid.dim {
        base[k] = footprint_base(grid.coordinate(point, k), p);
    }
    let w = p as i64 + 1;
    let mut out = Vec::with_capacity((p + 1).pow(grid.dim as u32));
    let kmax = if grid.dim == 3 { w } else { 1 };
    for a in 0..w {
        for b in 0..w {
            for c in 0..kmax {
                out.push([base[0] + a, base[1] + b, if grid.dim == 3 { base[2] + c } else { 0 }]);
            }
        }
    }
    out
}

/// Centered finite-difference Laplacian stencil: offsets with weights in
/// units of `1/dx²`. The center comes first.
pub fn fd_stencil(dim: usize, q: usize) -> Vec<(Node, f64)> {
    let axis: &[(i64, f64)] = if q == 4 {
        &[(-2, -1.0 / 12.0), (-1, 16.0 / 12.0), (1, 16.0 / 12.0), (2, -1.0 / 12.0)]
    } else {
        &[(-1, 1.0), (1, 1.0)]
    };
    let center = if q == 4 { -30.0 / 12.0 } else { -2.0 };
    let mut out = vec![([0; 3], center * dim as f64)];
    for k in 0..dim {
        for &(o, w) in axis {
            let mut n = [0; 3];
            n[k] = o;
            out.push((n, w));
        }
    }
    out
}

/// Where a node's extension row interpolates from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtensionTarget {
    /// `sign` times the interpolant at `point`.
    Interpolate { point: Point, sign: f64 },
    /// Homogeneous value propagated from the boundary.
    Zero,
}

/// Closest point data cached for one grid node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeInfo {
    pub cp: CpResult,
    pub cp_bar: CpResult,
    pub ghost: bool,
}

impl NodeInfo {
    fn compute(surface: &Surface, x: Point, ghost_tol: f64) -> Self {
        let cp = surface.cp(x);
        let cp_bar = cp_bar_from(surface, x, &cp);
        let ghost = dist(cp.point, cp_bar.point) > ghost_tol;
        NodeInfo { cp, cp_bar, ghost }
    }

    pub fn target(&self, bc: BcSpec) -> Result<ExtensionTarget> {
        if !self.ghost {
            return Ok(ExtensionTarget::Interpolate { point: self.cp.point, sign: 1.0 });
        }
        match bc {
            BcSpec::Neumann => Ok(ExtensionTarget::Interpolate { point: self.cp_bar.point, sign: 1.0 }),
            BcSpec::Dirichlet => Ok(ExtensionTarget::Interpolate { point: self.cp_bar.point, sign: -1.0 }),
            BcSpec::NaiveNeumann => Ok(ExtensionTarget::Interpolate { point: self.cp.point, sign: 1.0 }),
            BcSpec::NaiveDirichlet => Ok(ExtensionTarget::Zero),
            BcSpec::None => Err(CpmError::Config(
                "the surface has a boundary (ghost nodes found) but no boundary condition was given".into(),
            )),
        }
    }
}

/// Summary returned by [`Band::statistics`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandStats {
    pub m: usize,
    pub ghosts: usize,
    pub max_distance: f64,
}

/// Band nodes (indices `0..m`, lexicographic) followed by halo nodes: the
/// finite-difference neighbors of band nodes that are not themselves in the
/// band (indices `m..`, lexicographic). Halo values are never unknowns; they
/// are always obtained by extension from the band.
#[derive(Clone, Debug)]
pub struct Band {
    grid: Grid,
    spec: StencilSpec,
    bc: BcSpec,
    nodes: Vec<Node>,
    m: usize,
    index_of: HashMap<Node, usize>,
    info: Vec<NodeInfo>,
}

/// [`build_band_with_budget`] with the default node budget.
pub fn build_band(surface: &Surface, grid: &Grid, spec: StencilSpec, bc: BcSpec) -> Result<Band> {
    build_band_with_budget(surface, grid, spec, bc, DEFAULT_NODE_BUDGET)
}

/// Smallest node set that contains the nodes nearest to the surface and is
/// closed under "interpolation footprint of the extension target of every
/// finite-difference neighbor". Targets depend on the boundary condition, so
/// it is part of the input.
pub fn build_band_with_budget(
    surface: &Surface,
    grid: &Grid,
    spec: StencilSpec,
    bc: BcSpec,
    node_budget: usize,
) -> Result<Band> {
    if surface.dim() != grid.dim {
        return Err(CpmError::Config(format!(
            "surface lives in {} dimensions but the grid has {}",
            surface.dim(),
            grid.dim
        )));
    }
    if surface.is_open() && bc == BcSpec::None {
        return Err(CpmError::Config(format!(
            "surface '{}' has a boundary; choose a boundary condition",
            surface.kind_name()
        )));
    }
    let ghost_tol = 1e-8 * grid.dx;
    let stencil = fd_stencil(grid.dim, spec.q);

    let mut band: BTreeSet<Node> = surface
        .sample_points(0.5 * grid.dx)
        .into_iter()
        .map(|x| grid.nearest_node(x))
        .collect();
    if band.is_empty() {
        return Err(CpmError::Domain("the surface produced no grid nodes".into()));
    }
    let mut cache: HashMap<Node, NodeInfo> = HashMap::new();
    let mut frontier: Vec<Node> = band.iter().copied().collect();

    while !frontier.is_empty() {
        let mut needed: BTreeSet<Node> = BTreeSet::new();
        for n in &frontier {
            for (o, _) in &stencil {
                let nb = add_node(*n, *o);
                if !cache.contains_key(&nb) {
                    needed.insert(nb);
                }
            }
        }
        let needed: Vec<Node> = needed.into_iter().collect();
        let infos = par::map(&needed, |n| NodeInfo::compute(surface, grid.point(*n), ghost_tol));
        cache.extend(needed.into_iter().zip(infos));

        let mut next = BTreeSet::new();
        for n in &frontier {
            for (o, _) in &stencil {
                let nb = add_node(*n, *o);
                if let ExtensionTarget::Interpolate { point, .. } = cache[&nb].target(bc)? {
                    for f in interp_footprint(point, grid, spec.p) {
                        if band.insert(f) {
                            next.insert(f);
                        }
                    }
                }
            }
        }
        if band.len() > node_budget {
            return Err(CpmError::Resource(format!(
                "band exceeds the node budget of {node_budget} (dx = {})",
                grid.dx
            )));
        }
        frontier = next.into_iter().collect();
    }

    let m = band.len();
    let mut halo: BTreeSet<Node> = BTreeSet::new();
    for n in &band {
        for (o, _) in &stencil {
            let nb = add_node(*n, *o);
            if !band.contains(&nb) {
                halo.insert(nb);
            }
        }
    }
    let nodes: Vec<Node> = band.into_iter().chain(halo).collect();
    // footprint nodes that were never a stencil neighbor still need data
    let missing: Vec<Node> = nodes.iter().filter(|n| !cache.contains_key(*n)).copied().collect();
    let infos = par::map(&missing, |n| NodeInfo::compute(surface, grid.point(*n), ghost_tol));
    cache.extend(missing.into_iter().zip(infos));

    let index_of = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let info = nodes.iter().map(|n| cache[n]).collect();
    Ok(Band { grid: *grid, spec, bc, nodes, m, index_of, info })
}

fn add_node(a: Node, b: Node) -> Node {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

impl Band {
    /// Number of band nodes (unknowns).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Band plus halo node count.
    pub fn n_ext(&self) -> usize {
        self.nodes.len()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn spec(&self) -> StencilSpec {
        self.spec
    }

    pub fn bc(&self) -> BcSpec {
        self.bc
    }

    /// Band nodes in lexicographic order.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes[..self.m]
    }

    pub fn halo(&self) -> &[Node] {
        &self.nodes[self.m..]
    }

    /// All nodes: band first, then halo.
    pub fn extended_nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Index in the extended (band + halo) numbering.
    pub fn index_of(&self, n: &Node) -> Option<usize> {
        self.index_of.get(n).copied()
    }

    /// Row index of a band node.
    pub fn band_index(&self, n: &Node) -> Option<usize> {
        self.index_of(n).filter(|&i| i < self.m)
    }

    pub fn point(&self, i: usize) -> Point {
        self.grid.point(self.nodes[i])
    }

    pub fn info(&self, i: usize) -> &NodeInfo {
        &self.info[i]
    }

    pub fn cp(&self, i: usize) -> &CpResult {
        &self.info[i].cp
    }

    pub fn cp_bar(&self, i: usize) -> &CpResult {
        &self.info[i].cp_bar
    }

    pub fn is_ghost(&self, i: usize) -> bool {
        self.info[i].ghost
    }

    /// Ghost flags of the band nodes.
    pub fn ghost_mask(&self) -> Vec<bool> {
        self.info[..self.m].iter().map(|i| i.ghost).collect()
    }

    pub fn target(&self, i: usize) -> Result<ExtensionTarget> {
        self.info[i].target(self.bc)
    }

    pub fn statistics(&self) -> BandStats {
        let band = &self.info[..self.m];
        BandStats {
            m: self.m,
            ghosts: band.iter().filter(|i| i.ghost).count(),
            max_distance: band.iter().map(|i| i.cp.distance).fold(0.0, f64::max),
        }
    }

    /// Verifies the closure property exhaustively.
    pub fn check_closure(&self) -> Result<()> {
        let stencil = fd_stencil(self.grid.dim, self.spec.q);
        for (i, n) in self.nodes().iter().enumerate() {
            for (o, _) in &stencil {
                let nb = add_node(*n, *o);
                let j = self
                    .index_of(&nb)
                    .ok_or_else(|| CpmError::Internal(format!("neighbor {nb:?} of band node {i} is missing")))?;
                if let ExtensionTarget::Interpolate { point, .. } = self.target(j)? {
                    for f in interp_footprint(point, &self.grid, self.spec.p) {
                        if self.band_index(&f).is_none() {
                            return Err(CpmError::Internal(format!(
                                "footprint node {f:?} of neighbor {nb:?} is not in the band"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Debug dump: `idx, i, j[, k], cpx, cpy[, cpz], dist, ghost`.
    pub fn to_csv(&self) -> String {
        let three = self.grid.dim == 3;
        let mut s = String::from(if three {
            "idx,i,j,k,cpx,cpy,cpz,dist,ghost\n"
        } else {
            "idx,i,j,cpx,cpy,dist,ghost\n"
        });
        for (idx, (n, info)) in self.nodes().iter().zip(&self.info).enumerate() {
            let c = info.cp.point;
            let g = info.ghost as u8;
            let _ = if three {
                writeln!(
                    s,
                    "{idx},{},{},{},{:.17e},{:.17e},{:.17e},{:.17e},{g}",
                    n[0], n[1], n[2], c[0], c[1], c[2], info.cp.distance
                )
            } else {
                writeln!(s, "{idx},{},{},{:.17e},{:.17e},{:.17e},{g}", n[0], n[1], c[0], c[1], info.cp.distance)
            };
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Segment;

    #[test]
    fn footprint_examples() {
        let g1 = Grid::new(1.0, 2).unwrap();
        let f = interp_footprint([2.3, 0.0, 0.0], &g1, 1);
        let xs: BTreeSet<i64> = f.iter().map(|n| n[0]).collect();
        assert_eq!(xs.into_iter().collect::<Vec<_>>(), vec![2, 3]);

        let f = interp_footprint([2.4, 3.6, 0.0], &g1, 3);
        assert_eq!(f.len(), 16);
        assert!(f.iter().all(|n| (1..=4).contains(&n[0]) && (2..=5).contains(&n[1])));
        assert_eq!(f[0], [1, 2, 0]);

        assert_eq!(footprint_base(5.0, 3), 4);
        assert_eq!(footprint_base(5.0 - 1e-13, 3), 4);
        assert_eq!(footprint_base(2.3, 2), 2);
    }

    #[test]
    fn stencil_weights_sum_to_zero() {
        for (d, q) in [(2, 2), (3, 2), (2, 4), (3, 4)] {
            let s: f64 = fd_stencil(d, q).iter().map(|x| x.1).sum();
            assert!(s.abs() < 1e-14);
        }
        assert_eq!(fd_stencil(2, 2)[0].1, -4.0);
        assert_eq!(fd_stencil(3, 2).len(), 7);
    }

    #[test]
    fn spec_validation() {
        assert!(StencilSpec::new(0, 2).is_err());
        assert!(StencilSpec::new(3, 3).is_err());
        assert!(StencilSpec::new(3, 2).unwrap().warning().is_none());
        assert!(StencilSpec::new(3, 4).unwrap().warning().is_some());
    }

    #[test]
    fn straight_line_band_is_two_rows() {
        // a long segment on y = 0; away from the ends the band holds exactly
        // the rows touched by linear interpolation at y = 0
        let s = Surface::Segment(Segment::new([-4.0, 0.0, 0.0], [4.0, 0.0, 0.0]));
        let g = Grid::new(0.5, 2).unwrap();
        let b = build_band(&s, &g, StencilSpec::new(1, 2).unwrap(), BcSpec::Neumann).unwrap();
        let rows: BTreeSet<i64> = b.nodes().iter().filter(|n| n[0].abs() <= 4).map(|n| n[1]).collect();
        assert_eq!(rows.into_iter().collect::<Vec<_>>(), vec![0, 1]);
        b.check_closure().unwrap();
    }

    #[test]
    fn closed_band_has_no_ghosts_and_open_requires_bc() {
        let c = Surface::from_name("circle", 1.0).unwrap();
        let g = Grid::new(0.1, 2).unwrap();
        let b = build_band(&c, &g, StencilSpec::new(3, 2).unwrap(), BcSpec::None).unwrap();
        assert_eq!(b.statistics().ghosts, 0);
        b.check_closure().unwrap();
        let s = Surface::from_name("cosine", 1.0).unwrap();
        assert!(matches!(
            build_band(&s, &g, StencilSpec::new(3, 2).unwrap(), BcSpec::None),
            Err(CpmError::Config(_))
        ));
    }

    #[test]
    fn budget_exceeded_is_resource_error() {
        let c = Surface::from_name("circle", 1.0).unwrap();
        let g = Grid::new(0.05, 2).unwrap();
        let r = build_band_with_budget(&c, &g, StencilSpec::new(3, 2).unwrap(), BcSpec::None, 100);
        assert!(matches!(r, Err(CpmError::Resource(_))));
    }

    #[test]
    fn csv_header_and_rows() {
        let c = Surface::from_name("circle", 1.0).unwrap();
        let g = Grid::new(0.25, 2).unwrap();
        let b = build_band(&c, &g, StencilSpec::new(1, 2).unwrap(), BcSpec::None).unwrap();
        let csv = b.to_csv();
        assert!(csv.starts_with("idx,i,j,cpx,cpy,dist,ghost\n"));
        assert_eq!(csv.lines().count(), b.m() + 1);
    }
}

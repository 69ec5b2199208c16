//! Closest point representations of curves, surfaces and solids.
//!
//! Every surface answers `cp(x)`: the nearest surface point to an
//! embedding-space query. Points are stored as `[f64; 3]`; planar
//! geometry keeps `z = 0`.
//!
//! Ties between equidistant closest points are broken deterministically:
//! smallest parameter for parametric geometry, the `θ = 0` branch for
//! round geometry queried at its center, lowest triangle index for meshes
//! and lowest polygon edge index for the L-shaped solid.

mod curves;
mod parametric;
mod solids;
mod trimesh;

pub use curves::{curve_arclength, Circle, CosineCurve, EggCurve, Segment, Semicircle};
pub use parametric::{cp_parametric, cp_parametric_surface, MobiusStrip, ParametricCurve, ParametricSurface};
pub use solids::{Hemisphere, LShape, Sphere};
pub use trimesh::{cp_trimesh, TriMesh};

use crate::error::{CpmError, Result};

pub type Point = [f64; 3];

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn scale(a: Point, s: f64) -> Point {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

#[inline]
pub fn cross(a: Point, b: Point) -> Point {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Outcome of a closest point query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CpResult {
    pub point: Point,
    pub distance: f64,
    /// The closest point lies on the boundary of an open surface.
    pub on_boundary: bool,
}

impl CpResult {
    pub fn new(query: Point, point: Point, on_boundary: bool) -> Self {
        CpResult { point, distance: dist(query, point), on_boundary }
    }
}

/// Anything that can answer closest point queries.
pub trait ClosestPoint: Send + Sync {
    /// Embedding dimension (2 or 3).
    fn dim(&self) -> usize;
    /// Whether the surface has a boundary.
    fn is_open(&self) -> bool;
    fn cp(&self, x: Point) -> CpResult;
    /// Axis-aligned box containing the surface.
    fn bounding_box(&self) -> (Point, Point);
    /// Points on the surface, spaced no more than roughly `spacing` apart.
    fn sample_points(&self, spacing: f64) -> Vec<Point>;
}

/// Surface kinds available to experiments.
#[derive(Clone, Debug)]
pub enum Surface {
    Circle(Circle),
    Semicircle(Semicircle),
    Egg(EggCurve),
    Cosine(CosineCurve),
    Segment(Segment),
    Sphere(Sphere),
    Hemisphere(Hemisphere),
    Mobius(MobiusStrip),
    LShape(LShape),
    Mesh(TriMesh),
}

/// Names accepted by [`Surface::from_name`].
pub const SURFACE_KINDS: &[&str] = &[
    "circle",
    "semicircle",
    "egg",
    "cosine",
    "segment",
    "sphere",
    "hemisphere",
    "mobius",
    "lshape",
    "mesh",
];

macro_rules! dispatch {
    ($self:expr, $s:ident => $body:expr) => {
        match $self {
            Surface::Circle($s) => $body,
            Surface::Semicircle($s) => $body,
            Surface::Egg($s) => $body,
            Surface::Cosine($s) => $body,
            Surface::Segment($s) => $body,
            Surface::Sphere($s) => $body,
            Surface::Hemisphere($s) => $body,
            Surface::Mobius($s) => $body,
            Surface::LShape($s) => $body,
            Surface::Mesh($s) => $body,
        }
    };
}

impl Surface {
    /// Builds an analytic or parametric surface from its name. `radius` applies
    /// to round geometry only. Meshes must be loaded with [`TriMesh::from_off`].
    pub fn from_name(name: &str, radius: f64) -> Result<Surface> {
        if !(radius > 0.0) {
            return Err(CpmError::Config(format!("radius must be positive, got {radius}")));
        }
        let s = match name {
            "circle" => Surface::Circle(Circle::new(radius)),
            "semicircle" => Surface::Semicircle(Semicircle::new(radius)),
            "egg" => Surface::Egg(EggCurve::with_arclength(2.0 * std::f64::consts::PI)),
            "cosine" => Surface::Cosine(CosineCurve::new(0.25, 4.0)),
            "segment" => Surface::Segment(Segment::unit()),
            "sphere" => Surface::Sphere(Sphere::new(radius)),
            "hemisphere" => Surface::Hemisphere(Hemisphere::new(radius)),
            "mobius" => Surface::Mobius(MobiusStrip::standard()),
            "lshape" => Surface::LShape(LShape::standard()),
            "mesh" => {
                return Err(CpmError::Config(
                    "surface 'mesh' needs a mesh file (mesh_path)".into(),
                ))
            }
            other => {
                return Err(CpmError::Config(format!(
                    "unknown surface '{other}'; valid kinds: {}",
                    SURFACE_KINDS.join(", ")
                )))
            }
        };
        Ok(s)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Surface::Circle(_) => "circle",
            Surface::Semicircle(_) => "semicircle",
            Surface::Egg(_) => "egg",
            Surface::Cosine(_) => "cosine",
            Surface::Segment(_) => "segment",
            Surface::Sphere(_) => "sphere",
            Surface::Hemisphere(_) => "hemisphere",
            Surface::Mobius(_) => "mobius",
            Surface::LShape(_) => "lshape",
            Surface::Mesh(_) => "mesh",
        }
    }

    /// Whether the harness knows the exact Laplace-Beltrami spectrum.
    pub fn analytic_spectrum_available(&self) -> bool {
        !matches!(self, Surface::Mobius(_) | Surface::LShape(_) | Surface::Mesh(_))
    }

    /// Codimension-zero surfaces (solids) carry no interpolation in their interior.
    pub fn is_solid(&self) -> bool {
        matches!(self, Surface::LShape(_))
    }

    /// `cp(x)` with a neighborhood check: queries farther than `2 * band_radius`
    /// from the surface are rejected.
    pub fn closest_point(&self, x: Point, band_radius: f64) -> Result<CpResult> {
        let r = self.cp(x);
        if r.distance > 2.0 * band_radius {
            return Err(CpmError::Domain(format!(
                "query {:?} is {:.3e} from the surface, beyond twice the band radius {:.3e}",
                x, r.distance, band_radius
            )));
        }
        Ok(r)
    }
}

impl ClosestPoint for Surface {
    fn dim(&self) -> usize {
        dispatch!(self, s => s.dim())
    }
    fn is_open(&self) -> bool {
        dispatch!(self, s => s.is_open())
    }
    fn cp(&self, x: Point) -> CpResult {
        dispatch!(self, s => s.cp(x))
    }
    fn bounding_box(&self) -> (Point, Point) {
        dispatch!(self, s => s.bounding_box())
    }
    fn sample_points(&self, spacing: f64) -> Vec<Point> {
        dispatch!(self, s => s.sample_points(spacing))
    }
}

/// Mirrored closest point `cp(2 cp(x) - x)`.
///
/// When `cp(x)` is interior to the surface the mirror construction returns
/// `cp(x)` itself, so the second query is skipped and the result is exact.
pub fn cp_bar<S: ClosestPoint + ?Sized>(surface: &S, x: Point) -> CpResult {
    let c = surface.cp(x);
    cp_bar_from(surface, x, &c)
}

/// [`cp_bar`] reusing an already computed `cp(x)`.
pub fn cp_bar_from<S: ClosestPoint + ?Sized>(surface: &S, x: Point, c: &CpResult) -> CpResult {
    if !c.on_boundary {
        return *c;
    }
    let mirrored = sub(scale(c.point, 2.0), x);
    let m = surface.cp(mirrored);
    CpResult { point: m.point, distance: dist(x, m.point), on_boundary: m.on_boundary }
}

/// A node is a ghost when its closest point and mirrored closest point differ.
pub fn is_ghost<S: ClosestPoint + ?Sized>(surface: &S, x: Point, tol: f64) -> bool {
    let c = surface.cp(x);
    let b = cp_bar_from(surface, x, &c);
    dist(c.point, b.point) > tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_radial_projection() {
        let s = Surface::from_name("circle", 1.0).unwrap();
        let r = s.cp([2.0, 0.0, 0.0]);
        assert!(dist(r.point, [1.0, 0.0, 0.0]) < 1e-15);
        assert!((r.distance - 1.0).abs() < 1e-15);
    }

    #[test]
    fn circle_center_tie_break() {
        let s = Surface::from_name("circle", 1.0).unwrap();
        let r = s.cp([0.0, 0.0, 0.0]);
        assert_eq!(r.point, [1.0, 0.0, 0.0]);
        assert_eq!(r.distance, 1.0);
    }

    #[test]
    fn cosine_trough() {
        let s = Surface::from_name("cosine", 1.0).unwrap();
        let pi = std::f64::consts::PI;
        let r = s.cp([pi, -1.0 + 0.3, 0.0]);
        assert!(dist(r.point, [pi, -1.0, 0.0]) < 1e-10, "{:?}", r);
        assert!((r.distance - 0.3).abs() < 1e-10);
        assert!(!r.on_boundary);
    }

    #[test]
    fn segment_cp_bar_interior_and_mirror() {
        let s = Surface::Segment(Segment::unit());
        let interior = cp_bar(&s, [0.4, 0.2, 0.0]);
        assert_eq!(interior.point, [0.4, 0.0, 0.0]);
        let c = s.cp([1.2, 0.0, 0.0]);
        assert_eq!(c.point, [1.0, 0.0, 0.0]);
        assert!(c.on_boundary);
        let b = cp_bar(&s, [1.2, 0.0, 0.0]);
        assert!(dist(b.point, [0.8, 0.0, 0.0]) < 1e-15);
    }

    #[test]
    fn ghost_classification() {
        let seg = Surface::Segment(Segment::unit());
        assert!(is_ghost(&seg, [1.2, 0.0, 0.0], 1e-10));
        assert!(!is_ghost(&seg, [0.5, 0.1, 0.0], 1e-10));
        let egg = Surface::from_name("egg", 1.0).unwrap();
        for &x in &[[1.1, 0.2, 0.0], [0.0, -1.0, 0.0], [-0.7, 0.4, 0.0]] {
            assert!(!is_ghost(&egg, x, 1e-10));
        }
    }

    #[test]
    fn semicircle_mirror_lands_in_interior() {
        let s = Surface::from_name("semicircle", 1.0).unwrap();
        let x = [1.1 * (-0.1f64).cos(), 1.1 * (-0.1f64).sin(), 0.0];
        let c = s.cp(x);
        assert!(c.on_boundary);
        assert!(dist(c.point, [1.0, 0.0, 0.0]) < 1e-15);
        let b = cp_bar(&s, x);
        assert!(!b.on_boundary);
        // dense sampling of the arc: the mirror foot is the nearest arc point to 2cp - x
        let m = sub(scale(c.point, 2.0), x);
        let n = 100_000;
        let best = (0..=n)
            .map(|i| {
                let t = std::f64::consts::PI * i as f64 / n as f64;
                [t.cos(), t.sin(), 0.0]
            })
            .min_by(|a, b| dist(*a, m).partial_cmp(&dist(*b, m)).unwrap())
            .unwrap();
        assert!(dist(best, b.point) < 1e-4);
        assert!(b.point[1] > 0.0);
    }

    #[test]
    fn unknown_surface_names_valid_kinds() {
        let e = Surface::from_name("torus", 1.0).unwrap_err().to_string();
        assert!(e.contains("circle") && e.contains("hemisphere"), "{e}");
    }

    #[test]
    fn neighborhood_check() {
        let s = Surface::from_name("circle", 1.0).unwrap();
        assert!(s.closest_point([1.1, 0.0, 0.0], 0.1).is_ok());
        assert!(matches!(s.closest_point([3.0, 0.0, 0.0], 0.1), Err(CpmError::Domain(_))));
    }
}

use std::f64::consts::PI;

use super::{norm, ClosestPoint, CpResult, Point};

/// Sphere of radius `R` centered at the origin.
#[derive(Clone, Copy, Debug)]
pub struct Sphere {
    pub radius: f64,
}

impl Sphere {
    pub fn new(radius: f64) -> Self {
        Sphere { radius }
    }
}

impl ClosestPoint for Sphere {
    fn dim(&self) -> usize {
        3
    }
    fn is_open(&self) -> bool {
        false
    }
    fn cp(&self, x: Point) -> CpResult {
        let r = norm(x);
        let point = if r == 0.0 {
            [self.radius, 0.0, 0.0]
        } else {
            [self.radius * x[0] / r, self.radius * x[1] / r, self.radius * x[2] / r]
        };
        CpResult::new(x, point, false)
    }
    fn bounding_box(&self) -> (Point, Point) {
        let r = self.radius;
        ([-r; 3], [r; 3])
    }
    fn sample_points(&self, spacing: f64) -> Vec<Point> {
        sphere_samples(self.radius, spacing, PI)
    }
}

/// Upper unit hemisphere `z >= 0` with the equator as boundary.
#[derive(Clone, Copy, Debug)]
pub struct Hemisphere {
    pub radius: f64,
}

impl Hemisphere {
    pub fn new(radius: f64) -> Self {
        Hemisphere { radius }
    }
}

impl ClosestPoint for Hemisphere {
    fn dim(&self) -> usize {
        3
    }
    fn is_open(&self) -> bool {
        true
    }
    fn cp(&self, x: Point) -> CpResult {
        let rad = self.radius;
        if x[2] > 0.0 {
            let r = norm(x);
            let point = [rad * x[0] / r, rad * x[1] / r, rad * x[2] / r];
            return CpResult::new(x, point, false);
        }
        let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
        let point = if rho == 0.0 {
            [rad, 0.0, 0.0]
        } else {
            [rad * x[0] / rho, rad * x[1] / rho, 0.0]
        };
        CpResult::new(x, point, true)
    }
    fn bounding_box(&self) -> (Point, Point) {
        let r = self.radius;
        ([-r, -r, 0.0], [r, r, r])
    }
    fn sample_points(&self, spacing: f64) -> Vec<Point> {
        sphere_samples(self.radius, spacing, PI / 2.0)
    }
}

/// Latitude-longitude samples with polar angle in `[0, max_polar]`.
fn sphere_samples(radius: f64, spacing: f64, max_polar: f64) -> Vec<Point> {
    let nt = ((radius * max_polar) / spacing).ceil().max(2.0) as usize;
    let mut out = Vec::new();
    for i in 0..=nt {
        let theta = max_polar * i as f64 / nt as f64;
        let ring = radius * theta.sin();
        let np = ((2.0 * PI * ring) / spacing).ceil().max(1.0) as usize;
        for j in 0..np {
            let phi = 2.0 * PI * j as f64 / np as f64;
            out.push([ring * phi.cos(), ring * phi.sin(), radius * theta.cos()]);
        }
    }
    out
}

/// Solid L-shaped region `[-a, a]² \ (0, a] × (0, a]`: a codimension-zero
/// surface whose closest point is the identity inside and the nearest
/// polygon point outside.
#[derive(Clone, Copy, Debug)]
pub struct LShape {
    pub half_width: f64,
}

impl LShape {
    /// Counter-clockwise vertices of the unit L (scaled by `half_width`).
    const VERTICES: [[f64; 2]; 6] = [[-1.0, -1.0], [1.0, -1.0], [1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [-1.0, 1.0]];

    pub fn new(half_width: f64) -> Self {
        LShape { half_width }
    }

    /// Two units wide, reentrant corner at the origin.
    pub fn standard() -> Self {
        LShape::new(1.0)
    }

    pub fn contains(&self, x: Point) -> bool {
        let a = self.half_width;
        let in_bottom = x[0] >= -a && x[0] <= a && x[1] >= -a && x[1] <= 0.0;
        let in_left = x[0] >= -a && x[0] <= 0.0 && x[1] >= -a && x[1] <= a;
        in_bottom || in_left
    }

    /// Edge endpoints, in polygon order.
    pub fn edges(&self) -> [([f64; 2], [f64; 2]); 6] {
        let a = self.half_width;
        let v = Self::VERTICES.map(|p| [p[0] * a, p[1] * a]);
        std::array::from_fn(|i| (v[i], v[(i + 1) % 6]))
    }

    /// Nearest polygon point; all edges are axis-aligned so the projection is
    /// a coordinate clamp, which keeps symmetric ties exact. Lowest edge index wins ties.
    fn nearest_on_boundary(&self, x: Point) -> [f64; 2] {
        let mut best = [0.0; 2];
        let mut best_d = f64::INFINITY;
        for (p, q) in self.edges() {
            let c = [
                x[0].clamp(p[0].min(q[0]), p[0].max(q[0])),
                x[1].clamp(p[1].min(q[1]), p[1].max(q[1])),
            ];
            let d = (x[0] - c[0]) * (x[0] - c[0]) + (x[1] - c[1]) * (x[1] - c[1]);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        best
    }
}

impl ClosestPoint for LShape {
    fn dim(&self) -> usize {
        2
    }
    fn is_open(&self) -> bool {
        true
    }
    fn cp(&self, x: Point) -> CpResult {
        let x = [x[0], x[1], 0.0];
        if self.contains(x) {
            let b = self.nearest_on_boundary(x);
            let on_boundary = b[0] == x[0] && b[1] == x[1];
            return CpResult { point: x, distance: 0.0, on_boundary };
        }
        let b = self.nearest_on_boundary(x);
        CpResult::new(x, [b[0], b[1], 0.0], true)
    }
    fn bounding_box(&self) -> (Point, Point) {
        let a = self.half_width;
        ([-a, -a, 0.0], [a, a, 0.0])
    }
    fn sample_points(&self, spacing: f64) -> Vec<Point> {
        let a = self.half_width;
        let n = ((2.0 * a) / spacing).ceil().max(2.0) as usize;
        let mut out = Vec::new();
        for j in 0..=n {
            for i in 0..=n {
                let p = [-a + 2.0 * a * i as f64 / n as f64, -a + 2.0 * a * j as f64 / n as f64, 0.0];
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }
}

use std::f64::consts::PI;

use super::parametric::{cp_parametric, ParametricCurve};
use super::{dist, norm, ClosestPoint, CpResult, Point};
use crate::quadrature;

/// Circle of radius `R` centered at the origin.
#[derive(Clone, Copy, Debug)]
pub struct Circle {
    pub radius: f64,
}

impl Circle {
    pub fn new(radius: f64) -> Self {
        Circle { radius }
    }
}

impl ClosestPoint for Circle {
    fn dim(&self) -> usize {
        2
    }
    fn is_open(&self) -> bool {
        false
    }
    fn cp(&self, x: Point) -> CpResult {
        let r = norm([x[0], x[1], 0.0]);
        let point = if r == 0.0 {
            [self.radius, 0.0, 0.0]
        } else {
            [self.radius * x[0] / r, self.radius * x[1] / r, 0.0]
        };
        CpResult::new(x, point, false)
    }
    fn bounding_box(&self) -> (Point, Point) {
        let r = self.radius;
        ([-r, -r, 0.0], [r, r, 0.0])
    }
    fn sample_points(&self, spacing: f64) -> Vec<Point> {
        let n = ((2.0 * PI * self.radius) / spacing).ceil().max(8.0) as usize;
        (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                [self.radius * t.cos(), self.radius * t.sin(), 0.0]
            })
            .collect()
    }
}

/// Upper half (`y >= 0`) of a circle; open, with endpoints `(±R, 0)`.
#[derive(Clone, Copy, Debug)]
pub struct Semicircle {
    pub radius: f64,
}

impl Semicircle {
    pub fn new(radius: f64) -> Self {
        Semicircle { radius }
    }
}

impl ClosestPoint for Semicircle {
    fn dim(&self) -> usize {
        2
    }
    fn is_open(&self) -> bool {
        true
    }
    fn cp(&self, x: Point) -> CpResult {
        let r = self.radius;
        if x[0] == 0.0 && x[1] == 0.0 {
            return CpResult::new(x, [r, 0.0, 0.0], true);
        }
        let angle = x[1].atan2(x[0]);
        if angle >= 0.0 {
            let n = norm([x[0], x[1], 0.0]);
            let on_boundary = angle == 0.0 || angle == PI;
            let point = if angle == 0.0 {
                [r, 0.0, 0.0]
            } else if angle == PI {
                [-r, 0.0, 0.0]
            } else {
                [r * x[0] / n, r * x[1] / n, 0.0]
            };
            CpResult::new(x, point, on_boundary)
        } else {
            // below the diameter the nearest arc point is an endpoint;
            // straight down resolves to the θ = 0 end
            let point = if angle >= -PI / 2.0 { [r, 0.0, 0.0] } else { [-r, 0.0, 0.0] };
            CpResult::new(x, point, true)
        }
    }
    fn bounding_box(&self) -> (Point, Point) {
        let r = self.radius;
        ([-r, 0.0, 0.0], [r, r, 0.0])
    }
    fn sample_points(&self, spacing: f64) -> Vec<Point> {
        let n = ((PI * self.radius) / spacing).ceil().max(4.0) as usize;
        (0..=n)
            .map(|i| {
                let t = PI * i as f64 / n as f64;
                [self.radius * t.cos(), self.radius * t.sin(), 0.0]
            })
            .collect()
    }
}

/// Closed egg-shaped curve
/// `γ(θ) = c (cos θ, 1.2 sin θ (1 + 0.15 cos θ))`, `θ ∈ [0, 2π)`.
#[derive(Clone, Copy, Debug)]
pub struct EggCurve {
    pub scale: f64,
}

impl EggCurve {
    const STRETCH: f64 = 1.2;
    const TAPER: f64 = 0.15;

    /// Chooses the scale so the total arclength equals `length`.
    pub fn with_arclength(length: f64) -> Self {
        let unit = EggCurve { scale: 1.0 };
        let l1 = curve_arclength(&unit, 1e-14);
        EggCurve { scale: length / l1 }
    }
}

impl ParametricCurve for EggCurve {
    fn eval(&self, t: f64) -> Point {
        let (s, c) = t.sin_cos();
        [self.scale * c, self.scale * Self::STRETCH * s * (1.0 + Self::TAPER * c), 0.0]
    }
    fn d1(&self, t: f64) -> Point {
        let (s, c) = t.sin_cos();
        let c2 = (2.0 * t).cos();
        [-self.scale * s, self.scale * Self::STRETCH * (c + Self::TAPER * c2), 0.0]
    }
    fn d2(&self, t: f64) -> Point {
        let (s, c) = t.sin_cos();
        let s2 = (2.0 * t).sin();
        [-self.scale * c, self.scale * Self::STRETCH * (-s - 2.0 * Self::TAPER * s2), 0.0]
    }
    fn range(&self) -> (f64, f64) {
        (0.0, 2.0 * PI)
    }
    fn periodic(&self) -> bool {
        true
    }
}

/// Graph of cosine `γ(t) = (t, cos t)` on `[t0, t1]`; open.
#[derive(Clone, Copy, Debug)]
pub struct CosineCurve {
    pub t0: f64,
    pub t1: f64,
}

impl CosineCurve {
    pub fn new(t0: f64, t1: f64) -> Self {
        CosineCurve { t0, t1 }
    }
}

impl ParametricCurve for CosineCurve {
    fn eval(&self, t: f64) -> Point {
        [t, t.cos(), 0.0]
    }
    fn d1(&self, t: f64) -> Point {
        [1.0, -t.sin(), 0.0]
    }
    fn d2(&self, t: f64) -> Point {
        [0.0, -t.cos(), 0.0]
    }
    fn range(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }
    fn periodic(&self) -> bool {
        false
    }
}

/// Straight segment from `a` to `b` in the plane; open.
#[derive(Clone, Copy, Debug)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    /// `{(t, 0) : t ∈ [0, 1]}`.
    pub fn unit() -> Self {
        Segment::new([0.0; 3], [1.0, 0.0, 0.0])
    }

    pub fn length(&self) -> f64 {
        dist(self.a, self.b)
    }
}

impl ParametricCurve for Segment {
    fn eval(&self, t: f64) -> Point {
        [
            self.a[0] + t * (self.b[0] - self.a[0]),
            self.a[1] + t * (self.b[1] - self.a[1]),
            0.0,
        ]
    }
    fn d1(&self, _t: f64) -> Point {
        [self.b[0] - self.a[0], self.b[1] - self.a[1], 0.0]
    }
    fn d2(&self, _t: f64) -> Point {
        [0.0; 3]
    }
    fn range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
    fn periodic(&self) -> bool {
        false
    }
}

impl ClosestPoint for Segment {
    fn dim(&self) -> usize {
        2
    }
    fn is_open(&self) -> bool {
        true
    }
    fn cp(&self, x: Point) -> CpResult {
        let d = self.d1(0.0);
        let len2 = d[0] * d[0] + d[1] * d[1];
        let t = ((x[0] - self.a[0]) * d[0] + (x[1] - self.a[1]) * d[1]) / len2;
        let t = t.clamp(0.0, 1.0);
        let point = if t == 0.0 {
            self.a
        } else if t == 1.0 {
            self.b
        } else {
            self.eval(t)
        };
        CpResult::new(x, point, t == 0.0 || t == 1.0)
    }
    fn bounding_box(&self) -> (Point, Point) {
        curve_bbox(self)
    }
    fn sample_points(&self, spacing: f64) -> Vec<Point> {
        curve_samples(self, spacing)
    }
}

macro_rules! parametric_closest_point {
    ($t:ty) => {
        impl ClosestPoint for $t {
            fn dim(&self) -> usize {
                2
            }
            fn is_open(&self) -> bool {
                !self.periodic()
            }
            fn cp(&self, x: Point) -> CpResult {
                cp_parametric(self, x).0
            }
            fn bounding_box(&self) -> (Point, Point) {
                curve_bbox(self)
            }
            fn sample_points(&self, spacing: f64) -> Vec<Point> {
                curve_samples(self, spacing)
            }
        }
    };
}

parametric_closest_point!(EggCurve);
parametric_closest_point!(CosineCurve);

/// Arclength by adaptive quadrature of `|γ'(t)|`.
pub fn curve_arclength<C: ParametricCurve + ?Sized>(curve: &C, rel_tol: f64) -> f64 {
    let (a, b) = curve.range();
    quadrature::integrate(&|t| norm(curve.d1(t)), a, b, rel_tol)
}

fn curve_bbox<C: ParametricCurve + ?Sized>(curve: &C) -> (Point, Point) {
    let (a, b) = curve.range();
    let n = 2000;
    let pts: Vec<Point> = (0..=n).map(|i| curve.eval(a + (b - a) * i as f64 / n as f64)).collect();
    super::parametric::bbox(&pts)
}

fn curve_samples<C: ParametricCurve + ?Sized>(curve: &C, spacing: f64) -> Vec<Point> {
    let (a, b) = curve.range();
    // parameter speed bound from a coarse scan
    let vmax = (0..=200)
        .map(|i| norm(curve.d1(a + (b - a) * i as f64 / 200.0)))
        .fold(0.0, f64::max);
    let n = ((b - a) * vmax / spacing).ceil().max(4.0) as usize;
    let last = if curve.periodic() { n - 1 } else { n };
    (0..=last).map(|i| curve.eval(a + (b - a) * i as f64 / n as f64)).collect()
}

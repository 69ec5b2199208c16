//! Closest points on parameterized curves and surfaces by dense sampling
//! followed by safeguarded Newton iteration on the squared distance.

use std::collections::HashMap;
use std::f64::consts::PI;

use super::{dot, sub, ClosestPoint, CpResult, Point};

/// Samples per parameter dimension used to seed Newton.
pub const NEWTON_SAMPLES: usize = 400;
const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 50;

/// A C² parameterized curve `t -> γ(t)`.
pub trait ParametricCurve {
    fn eval(&self, t: f64) -> Point;
    fn d1(&self, t: f64) -> Point;
    fn d2(&self, t: f64) -> Point;
    fn range(&self) -> (f64, f64);
    /// Closed curves are periodic over `range()`.
    fn periodic(&self) -> bool;
}

/// Closest point on a parametric curve; returns the result and the foot parameter.
///
/// Every local minimum of the sampled squared distance is refined with Newton's
/// method inside its sample bracket (bisection when Newton leaves the bracket).
/// If the bracket does not straddle a stationary point the sample itself is
/// kept. Equidistant candidates resolve to the smallest parameter.
pub fn cp_parametric<C: ParametricCurve + ?Sized>(curve: &C, x: Point) -> (CpResult, f64) {
    let (a, b) = curve.range();
    let periodic = curve.periodic();
    let n = NEWTON_SAMPLES;
    let h = (b - a) / n as f64;
    let count = if periodic { n } else { n + 1 };
    let t_of = |i: usize| a + i as f64 * h;
    let d2: Vec<f64> = (0..count)
        .map(|i| {
            let r = sub(curve.eval(t_of(i)), x);
            dot(r, r)
        })
        .collect();

    let mut best: Option<(f64, f64)> = None; // (t, distance²)
    for i in 0..count {
        let left = if i > 0 {
            Some(d2[i - 1])
        } else if periodic {
            Some(d2[count - 1])
        } else {
            None
        };
        let right = if i + 1 < count {
            Some(d2[i + 1])
        } else if periodic {
            Some(d2[0])
        } else {
            None
        };
        let is_min = left.map_or(true, |l| d2[i] <= l) && right.map_or(true, |r| d2[i] <= r);
        if !is_min {
            continue;
        }
        let ti = t_of(i);
        let lo = if !periodic && i == 0 { a } else { ti - h };
        let hi = if !periodic && i + 1 == count { b } else { ti + h };
        let t = refine_curve(curve, x, lo, hi, ti, (!periodic).then_some((a, b)));
        let t = if periodic { wrap(t, a, b) } else { t.clamp(a, b) };
        let r = sub(curve.eval(t), x);
        let d = dot(r, r);
        best = match best {
            Some((bt, bd)) if !better(d, t, bd, bt) => Some((bt, bd)),
            _ => Some((t, d)),
        };
    }

    let (t, _) = best.expect("sampling always yields a local minimum");
    let point = curve.eval(t);
    let on_boundary = !periodic && (t <= a || t >= b);
    (CpResult::new(x, point, on_boundary), t)
}

/// Candidate `(d, t)` beats `(bd, bt)`: clearly closer, or tied and earlier.
fn better(d: f64, t: f64, bd: f64, bt: f64) -> bool {
    let tol = 1e-13 * bd.max(1e-300);
    d < bd - tol || (d <= bd + tol && t < bt)
}

fn wrap(t: f64, a: f64, b: f64) -> f64 {
    let w = a + (t - a).rem_euclid(b - a);
    if w >= b {
        a
    } else {
        w
    }
}

/// Minimizes `|γ(t) - x|²` over `[lo, hi]` starting at `t0`.
fn refine_curve<C: ParametricCurve + ?Sized>(
    curve: &C,
    x: Point,
    lo: f64,
    hi: f64,
    t0: f64,
    ends: Option<(f64, f64)>,
) -> f64 {
    // g'(t)/2 and g''(t)/2 of the squared distance
    let g1 = |t: f64| dot(sub(curve.eval(t), x), curve.d1(t));
    let g2 = |t: f64| {
        let d1 = curve.d1(t);
        dot(d1, d1) + dot(sub(curve.eval(t), x), curve.d2(t))
    };
    safeguarded_newton(&g1, &g2, lo, hi, t0, ends)
}

fn safeguarded_newton(
    g1: &dyn Fn(f64) -> f64,
    g2: &dyn Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    t0: f64,
    ends: Option<(f64, f64)>,
) -> f64 {
    let gl = g1(lo);
    let gh = g1(hi);
    if !(gl < 0.0 && gh > 0.0) {
        if let Some((a, b)) = ends {
            if lo <= a && gl >= 0.0 {
                return a;
            }
            if hi >= b && gh <= 0.0 {
                return b;
            }
        }
        if gl == 0.0 {
            return lo;
        }
        if gh == 0.0 {
            return hi;
        }
        return t0;
    }
    let mut t = t0;
    for _ in 0..NEWTON_MAX_ITER {
        let d = g1(t);
        if d == 0.0 {
            return t;
        }
        if d < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let curv = g2(t);
        let mut tn = if curv > 0.0 { t - d / curv } else { f64::NAN };
        if !(tn > lo && tn < hi) {
            tn = 0.5 * (lo + hi);
        }
        let step = (tn - t).abs();
        t = tn;
        if step < NEWTON_TOL || hi - lo < NEWTON_TOL {
            break;
        }
    }
    t
}

/// Position and derivatives of a parametric surface at `(u, v)`.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceJet {
    pub p: Point,
    pub pu: Point,
    pub pv: Point,
    pub puu: Point,
    pub puv: Point,
    pub pvv: Point,
}

/// A C² parameterized surface `(u, v) -> X(u, v)` with `u` periodic and `v`
/// bounded; the lines `v = v_min` and `v = v_max` form the boundary.
pub trait ParametricSurface {
    fn jet(&self, u: f64, v: f64) -> SurfaceJet;
    fn u_range(&self) -> (f64, f64);
    fn v_range(&self) -> (f64, f64);
}

/// Nearest-sample lookup over a dense parameter sampling.
#[derive(Clone, Debug)]
pub struct SampleCloud {
    points: Vec<Point>,
    params: Vec<(f64, f64)>,
    cell: f64,
    buckets: HashMap<[i64; 3], Vec<u32>>,
}

impl SampleCloud {
    pub fn build<S: ParametricSurface + ?Sized>(surface: &S, n: usize) -> Self {
        let (u0, u1) = surface.u_range();
        let (v0, v1) = surface.v_range();
        let mut points = Vec::with_capacity(n * (n + 1));
        let mut params = Vec::with_capacity(n * (n + 1));
        for i in 0..n {
            let u = u0 + (u1 - u0) * i as f64 / n as f64;
            for j in 0..=n {
                let v = v0 + (v1 - v0) * j as f64 / n as f64;
                points.push(surface.jet(u, v).p);
                params.push((u, v));
            }
        }
        let (lo, hi) = bbox(&points);
        let extent = (0..3).map(|k| hi[k] - lo[k]).fold(0.0, f64::max);
        let cell = (extent / 64.0).max(1e-9);
        let mut buckets: HashMap<[i64; 3], Vec<u32>> = HashMap::new();
        for (idx, p) in points.iter().enumerate() {
            buckets.entry(key(*p, cell)).or_default().push(idx as u32);
        }
        SampleCloud { points, params, cell, buckets }
    }

    /// Index of the nearest sample (lowest index on ties).
    pub fn nearest(&self, x: Point) -> usize {
        let c = key(x, self.cell);
        let mut best: Option<(f64, usize)> = None;
        let mut ring: i64 = 0;
        loop {
            for di in -ring..=ring {
                for dj in -ring..=ring {
                    for dk in -ring..=ring {
                        if di.abs().max(dj.abs()).max(dk.abs()) != ring {
                            continue;
                        }
                        if let Some(ids) = self.buckets.get(&[c[0] + di, c[1] + dj, c[2] + dk]) {
                            for &id in ids {
                                let r = sub(self.points[id as usize], x);
                                let d = dot(r, r);
                                let id = id as usize;
                                if best.map_or(true, |(bd, bi)| d < bd || (d == bd && id < bi)) {
                                    best = Some((d, id));
                                }
                            }
                        }
                    }
                }
            }
            if let Some((bd, bi)) = best {
                // every unvisited bucket is at least `ring * cell` away
                if bd.sqrt() <= ring as f64 * self.cell {
                    return bi;
                }
            }
            ring += 1;
            if ring > 100_000 {
                return best.map(|b| b.1).unwrap_or(0);
            }
        }
    }

    pub fn param(&self, i: usize) -> (f64, f64) {
        self.params[i]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }
}

fn key(p: Point, cell: f64) -> [i64; 3] {
    [(p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64, (p[2] / cell).floor() as i64]
}

pub(crate) fn bbox(points: &[Point]) -> (Point, Point) {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in points {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

/// Boundary line `v = v_fixed` of a parametric surface viewed as a curve in `u`.
struct BoundaryCurve<'a, S: ?Sized> {
    surface: &'a S,
    v: f64,
    u_range: (f64, f64),
}

impl<S: ParametricSurface + ?Sized> ParametricCurve for BoundaryCurve<'_, S> {
    fn eval(&self, t: f64) -> Point {
        self.surface.jet(t, self.v).p
    }
    fn d1(&self, t: f64) -> Point {
        self.surface.jet(t, self.v).pu
    }
    fn d2(&self, t: f64) -> Point {
        self.surface.jet(t, self.v).puu
    }
    fn range(&self) -> (f64, f64) {
        self.u_range
    }
    fn periodic(&self) -> bool {
        true
    }
}

/// Closest point on a parametric surface: Newton from the nearest dense sample,
/// compared against the closest points of the boundary lines.
///
/// `boundary_u_period` is the period of the boundary curves in `u` (a Möbius
/// strip's single boundary closes after two turns).
pub fn cp_parametric_surface<S: ParametricSurface + ?Sized>(
    surface: &S,
    cloud: &SampleCloud,
    boundary_u_period: f64,
    x: Point,
) -> CpResult {
    let (v0, v1) = surface.v_range();
    let (u0, _) = surface.u_range();
    let start = cloud.nearest(x);
    let (mut u, mut v) = cloud.param(start);
    let mut interior: Option<Point> = Some(cloud.points()[start]);
    for _ in 0..NEWTON_MAX_ITER {
        let j = surface.jet(u, v);
        let r = sub(j.p, x);
        let gu = dot(r, j.pu);
        let gv = dot(r, j.pv);
        let guu_gn = dot(j.pu, j.pu);
        let guv_gn = dot(j.pu, j.pv);
        let gvv_gn = dot(j.pv, j.pv);
        let mut huu = guu_gn + dot(r, j.puu);
        let mut huv = guv_gn + dot(r, j.puv);
        let mut hvv = gvv_gn + dot(r, j.pvv);
        if !(huu > 0.0 && huu * hvv - huv * huv > 0.0) {
            // fall back to the Gauss-Newton model, which is always convex
            huu = guu_gn;
            huv = guv_gn;
            hvv = gvv_gn;
        }
        let det = huu * hvv - huv * huv;
        if !(det.abs() > 0.0) {
            break;
        }
        let du = -(hvv * gu - huv * gv) / det;
        let dv = -(-huv * gu + huu * gv) / det;
        u += du;
        v += dv;
        if v < v0 || v > v1 {
            interior = None;
            break;
        }
        if du.abs().max(dv.abs()) < NEWTON_TOL {
            break;
        }
    }
    if interior.is_some() {
        interior = Some(surface.jet(u, v).p);
    }

    let mut best: Option<(f64, Point, bool)> = interior.map(|p| {
        let r = sub(p, x);
        (dot(r, r), p, false)
    });
    for &vb in &[v0, v1] {
        let curve = BoundaryCurve { surface, v: vb, u_range: (u0, u0 + boundary_u_period) };
        let (c, _) = cp_parametric(&curve, x);
        let r = sub(c.point, x);
        let d = dot(r, r);
        if best.map_or(true, |(bd, _, _)| d < bd * (1.0 - 1e-13)) {
            best = Some((d, c.point, true));
        }
    }
    let (_, p, on_boundary) = best.expect("boundary candidates always exist");
    CpResult::new(x, p, on_boundary)
}

/// The standard Möbius strip
/// `X(u, v) = ((1 + v/2 cos(u/2)) cos u, (1 + v/2 cos(u/2)) sin u, v/2 sin(u/2))`,
/// `u ∈ [0, 2π)`, `v ∈ [-w, w]`.
#[derive(Clone, Debug)]
pub struct MobiusStrip {
    pub half_width: f64,
    cloud: SampleCloud,
}

impl MobiusStrip {
    pub fn new(half_width: f64) -> Self {
        let shape = MobiusShape { half_width };
        let cloud = SampleCloud::build(&shape, NEWTON_SAMPLES);
        MobiusStrip { half_width, cloud }
    }

    pub fn standard() -> Self {
        MobiusStrip::new(1.0)
    }

    /// Center circle point at angle `u`.
    pub fn center(&self, u: f64) -> Point {
        [u.cos(), u.sin(), 0.0]
    }
}

#[derive(Clone, Copy, Debug)]
struct MobiusShape {
    half_width: f64,
}

impl ParametricSurface for MobiusShape {
    fn jet(&self, u: f64, v: f64) -> SurfaceJet {
        let (s, c) = (0.5 * u).sin_cos();
        let (su, cu) = u.sin_cos();
        let r = 1.0 + 0.5 * v * c;
        let r_u = -0.25 * v * s;
        let r_v = 0.5 * c;
        let r_uu = -0.125 * v * c;
        let r_uv = -0.25 * s;
        SurfaceJet {
            p: [r * cu, r * su, 0.5 * v * s],
            pu: [r_u * cu - r * su, r_u * su + r * cu, 0.25 * v * c],
            pv: [r_v * cu, r_v * su, 0.5 * s],
            puu: [
                r_uu * cu - 2.0 * r_u * su - r * cu,
                r_uu * su + 2.0 * r_u * cu - r * su,
                -0.125 * v * s,
            ],
            puv: [r_uv * cu - r_v * su, r_uv * su + r_v * cu, 0.25 * c],
            pvv: [0.0; 3],
        }
    }
    fn u_range(&self) -> (f64, f64) {
        (0.0, 2.0 * PI)
    }
    fn v_range(&self) -> (f64, f64) {
        (-self.half_width, self.half_width)
    }
}

impl ParametricSurface for MobiusStrip {
    fn jet(&self, u: f64, v: f64) -> SurfaceJet {
        MobiusShape { half_width: self.half_width }.jet(u, v)
    }
    fn u_range(&self) -> (f64, f64) {
        (0.0, 2.0 * PI)
    }
    fn v_range(&self) -> (f64, f64) {
        (-self.half_width, self.half_width)
    }
}

impl ClosestPoint for MobiusStrip {
    fn dim(&self) -> usize {
        3
    }
    fn is_open(&self) -> bool {
        true
    }
    fn cp(&self, x: Point) -> CpResult {
        cp_parametric_surface(self, &self.cloud, 4.0 * PI, x)
    }
    fn bounding_box(&self) -> (Point, Point) {
        let r = 1.0 + 0.5 * self.half_width;
        let z = 0.5 * self.half_width;
        ([-r, -r, -z], [r, r, z])
    }
    fn sample_points(&self, spacing: f64) -> Vec<Point> {
        let nu = ((2.0 * PI * (1.0 + 0.5 * self.half_width)) / spacing).ceil().max(8.0) as usize;
        let nv = ((2.0 * self.half_width) / spacing).ceil().max(2.0) as usize;
        let mut out = Vec::with_capacity(nu * (nv + 1));
        for i in 0..nu {
            let u = 2.0 * PI * i as f64 / nu as f64;
            for j in 0..=nv {
                let v = -self.half_width + 2.0 * self.half_width * j as f64 / nv as f64;
                out.push(self.jet(u, v).p);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dist;

    struct UnitCircle;
    impl ParametricCurve for UnitCircle {
        fn eval(&self, t: f64) -> Point {
            [t.cos(), t.sin(), 0.0]
        }
        fn d1(&self, t: f64) -> Point {
            [-t.sin(), t.cos(), 0.0]
        }
        fn d2(&self, t: f64) -> Point {
            [-t.cos(), -t.sin(), 0.0]
        }
        fn range(&self) -> (f64, f64) {
            (0.0, 2.0 * PI)
        }
        fn periodic(&self) -> bool {
            true
        }
    }

    #[test]
    fn circle_parameterized_top() {
        let (r, t) = cp_parametric(&UnitCircle, [0.0, 2.0, 0.0]);
        assert!((t - PI / 2.0).abs() < 1e-12);
        assert!(dist(r.point, [0.0, 1.0, 0.0]) < 1e-12);
    }

    #[test]
    fn circle_center_picks_smallest_parameter() {
        let (r, t) = cp_parametric(&UnitCircle, [0.0, 0.0, 0.0]);
        assert_eq!(t, 0.0);
        assert_eq!(r.point, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn mobius_center_circle_query_is_on_surface() {
        let m = MobiusStrip::standard();
        for &u in &[0.0, 0.3, 1.7, 3.0, 5.9] {
            let x = m.center(u);
            let r = m.cp(x);
            assert!(r.distance < 1e-10, "u={u}: {r:?}");
            assert!(dist(r.point, x) < 1e-10);
            assert!(!r.on_boundary);
        }
    }

    #[test]
    fn mobius_boundary_queries_flag_boundary() {
        let m = MobiusStrip::standard();
        // far outside the outer rim at u = 0 where the strip is horizontal: foot is the rim
        let r = m.cp([1.8, 0.0, 0.0]);
        assert!(r.on_boundary);
        assert!(dist(r.point, [1.5, 0.0, 0.0]) < 1e-9, "{r:?}");
    }

    #[test]
    fn mobius_offset_along_normal() {
        let m = MobiusStrip::standard();
        let j = m.jet(1.0, 0.2);
        let n = crate::geometry::cross(j.pu, j.pv);
        let n = crate::geometry::scale(n, 1.0 / crate::geometry::norm(n));
        let x = crate::geometry::add(j.p, crate::geometry::scale(n, 0.05));
        let r = m.cp(x);
        assert!(dist(r.point, j.p) < 1e-9);
        assert!((r.distance - 0.05).abs() < 1e-9);
    }
}

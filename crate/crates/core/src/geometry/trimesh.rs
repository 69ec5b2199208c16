use std::collections::{BTreeMap, HashSet};
use std::f64::consts::PI;
use std::fmt::Write as _;

use super::{add, cross, dot, norm, scale, sub, ClosestPoint, CpResult, Point};
use crate::error::{CpmError, Result};

/// Triangulated surface in R³.
#[derive(Clone, Debug)]
pub struct TriMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<[usize; 2]>,
    boundary_vertices: HashSet<usize>,
    // bounding sphere per triangle for pruning
    centers: Vec<Point>,
    radii: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Feature {
    Vertex(usize),
    Edge(usize, usize),
    Face,
}

impl TriMesh {
    /// Validates indices and rejects zero-area triangles.
    pub fn new(vertices: Vec<Point>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(CpmError::Config("mesh has no triangles".into()));
        }
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= vertices.len()) {
                return Err(CpmError::Parse(format!("triangle {t} references a missing vertex")));
            }
            let [a, b, c] = tri.map(|i| vertices[i]);
            let area2 = norm(cross(sub(b, a), sub(c, a)));
            let scale_len = norm(sub(b, a)).max(norm(sub(c, a))).max(f64::MIN_POSITIVE);
            if area2 <= 1e-14 * scale_len * scale_len {
                return Err(CpmError::Config(format!("triangle {t} is degenerate (zero area)")));
            }
        }
        let mut edge_count: BTreeMap<[usize; 2], usize> = BTreeMap::new();
        for tri in &triangles {
            for k in 0..3 {
                let (i, j) = (tri[k], tri[(k + 1) % 3]);
                *edge_count.entry([i.min(j), i.max(j)]).or_default() += 1;
            }
        }
        let boundary_edges: Vec<[usize; 2]> =
            edge_count.into_iter().filter(|(_, c)| *c == 1).map(|(e, _)| e).collect();
        let boundary_vertices = boundary_edges.iter().flat_map(|e| e.iter().copied()).collect();
        let (centers, radii) = triangles
            .iter()
            .map(|tri| {
                let [a, b, c] = tri.map(|i| vertices[i]);
                let m = scale(add(add(a, b), c), 1.0 / 3.0);
                let r = norm(sub(a, m)).max(norm(sub(b, m))).max(norm(sub(c, m)));
                (m, r)
            })
            .unzip();
        Ok(TriMesh { vertices, triangles, boundary_edges, boundary_vertices, centers, radii })
    }

    /// Parses an ASCII OFF file containing triangles only.
    pub fn from_off(text: &str) -> Result<Self> {
        let mut tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(|l| l.split_whitespace());
        match tokens.next() {
            Some("OFF") => {}
            other => return Err(CpmError::Parse(format!("expected OFF header, found {other:?}"))),
        }
        let mut next_num = |what: &str| -> Result<f64> {
            let t = tokens.next().ok_or_else(|| CpmError::Parse(format!("unexpected end of file reading {what}")))?;
            t.parse::<f64>().map_err(|_| CpmError::Parse(format!("bad {what} '{t}'")))
        };
        let nv = next_num("vertex count")? as usize;
        let nf = next_num("face count")? as usize;
        let _ne = next_num("edge count")?;
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            vertices.push([next_num("x")?, next_num("y")?, next_num("z")?]);
        }
        let mut triangles = Vec::with_capacity(nf);
        for f in 0..nf {
            let k = next_num("face size")?;
            if k != 3.0 {
                return Err(CpmError::Parse(format!("face {f} has {k} vertices; only triangles are supported")));
            }
            let idx = |v: f64| -> Result<usize> {
                if v < 0.0 || v.fract() != 0.0 {
                    Err(CpmError::Parse(format!("face {f} has invalid index {v}")))
                } else {
                    Ok(v as usize)
                }
            };
            triangles.push([idx(next_num("index")?)?, idx(next_num("index")?)?, idx(next_num("index")?)?]);
        }
        TriMesh::new(vertices, triangles)
    }

    pub fn to_off(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "OFF");
        let _ = writeln!(s, "{} {} 0", self.vertices.len(), self.triangles.len());
        for v in &self.vertices {
            let _ = writeln!(s, "{:.17e} {:.17e} {:.17e}", v[0], v[1], v[2]);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
        }
        s
    }

    /// Latitude-longitude triangulation of a sphere: `2 n_lon (n_lat - 1)` triangles.
    pub fn uv_sphere(radius: f64, n_lon: usize, n_lat: usize) -> Result<Self> {
        let mut vertices = vec![[0.0, 0.0, radius]];
        for i in 1..n_lat {
            let theta = PI * i as f64 / n_lat as f64;
            for j in 0..n_lon {
                let phi = 2.0 * PI * j as f64 / n_lon as f64;
                vertices.push([radius * theta.sin() * phi.cos(), radius * theta.sin() * phi.sin(), radius * theta.cos()]);
            }
        }
        vertices.push([0.0, 0.0, -radius]);
        let south = vertices.len() - 1;
        let ring = |i: usize, j: usize| 1 + (i - 1) * n_lon + (j % n_lon);
        let mut triangles = Vec::new();
        for j in 0..n_lon {
            triangles.push([0, ring(1, j), ring(1, j + 1)]);
        }
        for i in 1..n_lat - 1 {
            for j in 0..n_lon {
                triangles.push([ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)]);
                triangles.push([ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)]);
            }
        }
        for j in 0..n_lon {
            triangles.push([ring(n_lat - 1, j), south, ring(n_lat - 1, j + 1)]);
        }
        TriMesh::new(vertices, triangles)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Edges incident to exactly one triangle, sorted.
    pub fn boundary_edges(&self) -> &[[usize; 2]] {
        &self.boundary_edges
    }

    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i]);
                0.5 * norm(cross(sub(b, a), sub(c, a)))
            })
            .sum()
    }

    fn feature_on_boundary(&self, f: Feature) -> bool {
        match f {
            Feature::Vertex(i) => self.boundary_vertices.contains(&i),
            Feature::Edge(i, j) => self.boundary_edges.binary_search(&[i.min(j), i.max(j)]).is_ok(),
            Feature::Face => false,
        }
    }
}

/// Closest point on triangle `(a, b, c)` with the feature it lies on
/// (Voronoi-region classification).
fn closest_on_triangle(p: Point, tri: [usize; 3], a: Point, b: Point, c: Point) -> (Point, Feature) {
    let ab = sub(b, a);
    let ac = sub(c, a);
    let ap = sub(p, a);
    let d1 = dot(ab, ap);
    let d2 = dot(ac, ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return (a, Feature::Vertex(tri[0]));
    }
    let bp = sub(p, b);
    let d3 = dot(ab, bp);
    let d4 = dot(ac, bp);
    if d3 >= 0.0 && d4 <= d3 {
        return (b, Feature::Vertex(tri[1]));
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return (add(a, scale(ab, v)), Feature::Edge(tri[0], tri[1]));
    }
    let cp = sub(p, c);
    let d5 = dot(ab, cp);
    let d6 = dot(ac, cp);
    if d6 >= 0.0 && d5 <= d6 {
        return (c, Feature::Vertex(tri[2]));
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return (add(a, scale(ac, w)), Feature::Edge(tri[0], tri[2]));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (add(b, scale(sub(c, b), w)), Feature::Edge(tri[1], tri[2]));
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    (add(a, add(scale(ab, v), scale(ac, w))), Feature::Face)
}

/// Exact point-to-mesh closest point by scanning every triangle (with
/// bounding-sphere pruning). The lowest triangle index wins ties.
pub fn cp_trimesh(mesh: &TriMesh, x: Point) -> CpResult {
    let mut best_d2 = f64::INFINITY;
    let mut best = ([0.0; 3], Feature::Face);
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let lower = (norm(sub(x, mesh.centers[t])) - mesh.radii[t]).max(0.0);
        if lower * lower > best_d2 {
            continue;
        }
        let [a, b, c] = tri.map(|i| mesh.vertices[i]);
        let (q, f) = closest_on_triangle(x, *tri, a, b, c);
        let r = sub(q, x);
        let d2 = dot(r, r);
        if d2 < best_d2 {
            best_d2 = d2;
            best = (q, f);
        }
    }
    CpResult::new(x, best.0, mesh.feature_on_boundary(best.1))
}

impl ClosestPoint for TriMesh {
    fn dim(&self) -> usize {
        3
    }
    fn is_open(&self) -> bool {
        !self.boundary_edges.is_empty()
    }
    fn cp(&self, x: Point) -> CpResult {
        cp_trimesh(self, x)
    }
    fn bounding_box(&self) -> (Point, Point) {
        super::parametric::bbox(&self.vertices)
    }
    fn sample_points(&self, spacing: f64) -> Vec<Point> {
        let mut out = self.vertices.clone();
        for tri in &self.triangles {
            let [a, b, c] = tri.map(|i| self.vertices[i]);
            let longest = norm(sub(b, a)).max(norm(sub(c, a))).max(norm(sub(c, b)));
            let n = (longest / spacing).ceil().max(1.0) as usize;
            for i in 0..=n {
                for j in 0..=(n - i) {
                    let (u, v) = (i as f64 / n as f64, j as f64 / n as f64);
                    if (i == 0 && j == 0) || (i == n) || (j == n) {
                        continue;
                    }
                    out.push(add(a, add(scale(sub(b, a), u), scale(sub(c, a), v))));
                }
            }
        }
        out
    }
}

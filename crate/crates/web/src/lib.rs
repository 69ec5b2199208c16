//! Browser bindings: spectra, eigenmodes and computational bands of planar
//! curves and solids, for the page in `www/`.

use cpm_core::band::{Grid, StencilSpec};
use cpm_core::discretize::{evaluation_row, BcSpec, Discretization};
use cpm_core::eig::{filter_spurious, real_mode, solve, FilterParams, Solver};
use cpm_core::geometry::{ClosestPoint, Surface};
use cpm_core::{CpmError, Result};
use wasm_bindgen::prelude::*;

/// Largest operator the page will hand to the dense solver.
const DENSE_MAX: usize = 900;
/// Smallest grid spacing accepted, to keep the page responsive.
const MIN_DX: f64 = 1.0 / 128.0;

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub surface: String,
    pub bc: String,
    pub dx: f64,
    pub p: usize,
    pub q: usize,
}

impl Problem {
    fn discretize(&self) -> Result<(Surface, Discretization)> {
        if !(self.dx >= MIN_DX) {
            return Err(CpmError::Config(format!("dx must be at least {MIN_DX}")));
        }
        let s = Surface::from_name(&self.surface, 1.0)?;
        if s.dim() != 2 {
            return Err(CpmError::Config("the demo draws planar geometry only".into()));
        }
        let g = Grid::for_surface(&s, self.dx)?;
        let d = Discretization::new(&s, &g, StencilSpec::new(self.p, self.q)?, BcSpec::from_name(&self.bc)?)?;
        Ok((s, d))
    }
}

/// Eigenvalues as parallel arrays.
#[wasm_bindgen]
#[derive(Clone, Debug, Default)]
pub struct Spectrum {
    re: Vec<f64>,
    im: Vec<f64>,
    kept: Vec<u8>,
    m: usize,
}

#[wasm_bindgen]
impl Spectrum {
    #[wasm_bindgen(getter)]
    pub fn re(&self) -> Vec<f64> {
        self.re.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn im(&self) -> Vec<f64> {
        self.im.clone()
    }
    /// 1 where the value survives the spurious-value filter.
    #[wasm_bindgen(getter)]
    pub fn kept(&self) -> Vec<u8> {
        self.kept.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn m(&self) -> usize {
        self.m
    }
}

/// Points with one scalar each.
#[wasm_bindgen]
#[derive(Clone, Debug, Default)]
pub struct Field {
    x: Vec<f64>,
    y: Vec<f64>,
    value: Vec<f64>,
    lambda: f64,
}

#[wasm_bindgen]
impl Field {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn y(&self) -> Vec<f64> {
        self.y.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn value(&self) -> Vec<f64> {
        self.value.clone()
    }
    /// Eigenvalue of a mode; zero for band plots.
    #[wasm_bindgen(getter)]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

pub fn compute_spectrum(pb: &Problem, stabilized: bool) -> Result<Spectrum> {
    let (s, d) = pb.discretize()?;
    let op = if stabilized { d.stabilized()? } else { d.unstabilized()? };
    let res = solve(&op, 40.min(op.nrows() / 2), 0.0, Solver::Auto, DENSE_MAX)?;
    let f = filter_spurious(&res, pb.dx, s.dim(), FilterParams::default());
    let mut kept = vec![0u8; res.len()];
    f.kept.iter().for_each(|&i| kept[i] = 1);
    Ok(Spectrum {
        re: res.eigenvalues.iter().map(|l| l.re).collect(),
        im: res.eigenvalues.iter().map(|l| l.im).collect(),
        kept,
        m: op.nrows(),
    })
}

/// The `index`-th smallest kept eigenfunction, sampled at the closest points
/// of the band (curves) or at the interior nodes (solids).
pub fn compute_mode(pb: &Problem, index: usize) -> Result<Field> {
    let (s, d) = pb.discretize()?;
    let op = d.stabilized()?;
    let res = solve(&op, (index + 8).min(op.nrows() / 2), 0.0, Solver::Auto, DENSE_MAX)?;
    let f = filter_spurious(&res, pb.dx, s.dim(), FilterParams::default());
    let mut kept = f.kept.clone();
    kept.sort_by(|&a, &b| res.eigenvalues[a].re.total_cmp(&res.eigenvalues[b].re));
    let &i = kept.get(index).ok_or_else(|| CpmError::Numeric(format!("mode {index} was not found")))?;
    let v = real_mode(&res.eigenvectors[i]);
    let mut field = Field { lambda: res.eigenvalues[i].re, ..Field::default() };
    for n in 0..d.band.m() {
        let c = d.band.cp(n);
        if s.is_solid() && c.distance > 0.0 {
            continue;
        }
        let value = evaluation_row(&d.band, c.point)?.iter().map(|(j, w)| w * v[*j]).sum();
        field.x.push(c.point[0]);
        field.y.push(c.point[1]);
        field.value.push(value);
    }
    Ok(field)
}

/// Band nodes (value 0), ghost nodes (1) and halo nodes (2).
pub fn compute_band(pb: &Problem) -> Result<Field> {
    let (_, d) = pb.discretize()?;
    let b = &d.band;
    let mut field = Field::default();
    for i in 0..b.n_ext() {
        let p = if i < b.m() { b.point(i) } else { b.grid().point(b.halo()[i - b.m()]) };
        field.x.push(p[0]);
        field.y.push(p[1]);
        field.value.push(if i >= b.m() { 2.0 } else if b.is_ghost(i) { 1.0 } else { 0.0 });
    }
    Ok(field)
}

fn js(e: CpmError) -> JsError {
    JsError::new(&e.to_string())
}

fn problem(surface: &str, bc: &str, dx: f64, p: usize, q: usize) -> Problem {
    Problem { surface: surface.into(), bc: bc.into(), dx, p, q }
}

#[wasm_bindgen]
pub fn spectrum(surface: &str, bc: &str, dx: f64, p: usize, q: usize, stabilized: bool) -> std::result::Result<Spectrum, JsError> {
    compute_spectrum(&problem(surface, bc, dx, p, q), stabilized).map_err(js)
}

#[wasm_bindgen]
pub fn mode(surface: &str, bc: &str, dx: f64, p: usize, q: usize, index: usize) -> std::result::Result<Field, JsError> {
    compute_mode(&problem(surface, bc, dx, p, q), index).map_err(js)
}

#[wasm_bindgen]
pub fn band(surface: &str, bc: &str, dx: f64, p: usize, q: usize) -> std::result::Result<Field, JsError> {
    compute_band(&problem(surface, bc, dx, p, q)).map_err(js)
}

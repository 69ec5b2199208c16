use std::fs;
use std::path::Path;

use cpm_core::band::Grid;
use cpm_core::discretize::{evaluation_row, Discretization};
use cpm_core::eig::{filter_spurious, real_mode, solve, FilterParams, FilterReport, SpectralResult};
use cpm_core::geometry::{ClosestPoint, Point};
use cpm_core::harness::{run_study, StudyConfig, StudyReport};
use cpm_core::io::{histogram_data, spectrum_csv, vtk_point_cloud};
use cpm_core::sparse::SparseOperator;
use cpm_core::{CpmError, Result};

use crate::config::RunConfig;

/// Eigenpairs requested from Arnoldi when `k_eigs` is unset.
const DEFAULT_K: usize = 40;

pub struct Context<'a> {
    pub config: RunConfig,
    pub out: &'a Path,
    pub quiet: bool,
}

impl Context<'_> {
    fn write(&self, name: &str, contents: &str) -> Result<()> {
        fs::write(self.out.join(name), contents)?;
        if !self.quiet {
            println!("wrote {}", self.out.join(name).display());
        }
        Ok(())
    }

    fn say(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", msg.as_ref());
        }
    }

    fn discretize(&self, dx: f64) -> Result<Discretization> {
        let c = &self.config;
        let grid = Grid::for_surface(&c.surface, dx)?;
        Discretization::new(&c.surface, &grid, c.spec, c.bc)
    }

    fn spectrum_of(&self, op: &SparseOperator, k: usize, shift: f64) -> Result<SpectralResult> {
        let k = k.min(op.nrows().saturating_sub(1) / 2).max(1);
        solve(op, k, shift, self.config.solver, self.config.dense_max)
    }
}

fn kept_values(res: &SpectralResult, f: &FilterReport) -> Vec<f64> {
    let mut v: Vec<f64> = f.kept.iter().map(|&i| res.eigenvalues[i].re).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn preview(values: &[f64], n: usize) -> String {
    values.iter().take(n).map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(" ")
}

fn emit_spectrum(ctx: &Context, tag: &str, res: &SpectralResult, dx: f64) -> Result<Vec<f64>> {
    let f = filter_spurious(res, dx, ctx.config.surface.dim(), FilterParams::default());
    if ctx.config.wants("spectrum") {
        ctx.write(&format!("spectrum{tag}.csv"), &spectrum_csv(res, &f))?;
    }
    if ctx.config.wants("histogram") {
        let re: Vec<f64> = res.eigenvalues.iter().map(|l| l.re).collect();
        ctx.write(&format!("histogram{tag}.dat"), &histogram_data(&re, ctx.config.bins))?;
    }
    Ok(kept_values(res, &f))
}

pub fn spectrum(ctx: &Context) -> Result<()> {
    let c = &ctx.config;
    let dx = c.require_dx()?;
    let d = ctx.discretize(dx)?;
    let op = if c.stabilized { d.stabilized()? } else { d.unstabilized()? };
    let res = ctx.spectrum_of(&op, c.k_eigs.unwrap_or(DEFAULT_K), c.shift.unwrap_or(0.0))?;
    let kept = emit_spectrum(ctx, "", &res, dx)?;
    ctx.say(format!("m = {}, {} eigenvalues ({}), {} kept", op.nrows(), res.len(), res.method.name(), kept.len()));
    ctx.say(format!("smallest kept: {}", preview(&kept, 10)));
    Ok(())
}

pub fn compare_unstab(ctx: &Context) -> Result<()> {
    let c = &ctx.config;
    let dx = c.require_dx()?;
    let d = ctx.discretize(dx)?;
    let k = c.k_eigs.unwrap_or(DEFAULT_K);
    let shift = c.shift.unwrap_or(0.0);
    for (tag, op) in [("_stabilized", d.stabilized()?), ("_unstabilized", d.unstabilized()?)] {
        let res = ctx.spectrum_of(&op, k, shift)?;
        let kept = emit_spectrum(ctx, tag, &res, dx)?;
        let near_zero = res.eigenvalues.iter().filter(|l| l.norm() < 0.1).count();
        let complex = res.eigenvalues.iter().filter(|l| l.im.abs() > 1e-3).count();
        ctx.say(format!(
            "{}: {near_zero} with |lambda| < 0.1, {complex} complex, smallest kept {}",
            &tag[1..],
            preview(&kept, 6)
        ));
    }
    Ok(())
}

/// Closest points of the band nodes, a sampling at grid resolution; for
/// solids, the band nodes inside.
fn surface_samples(d: &Discretization, solid: bool) -> Vec<Point> {
    let mut pts: Vec<Point> = (0..d.band.m())
        .filter(|&i| !solid || d.band.cp(i).distance == 0.0)
        .map(|i| d.band.cp(i).point)
        .collect();
    pts.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    pts.dedup();
    pts
}

pub fn modes(ctx: &Context) -> Result<()> {
    let c = &ctx.config;
    let dx = c.require_dx()?;
    let d = ctx.discretize(dx)?;
    let op = if c.stabilized { d.stabilized()? } else { d.unstabilized()? };
    let shift = c.mode_target.or(c.shift).unwrap_or(0.0);
    let res = ctx.spectrum_of(&op, c.k_eigs.unwrap_or(c.modes + 10), shift)?;
    let f = filter_spurious(&res, dx, c.surface.dim(), FilterParams::default());
    let mut chosen = f.kept.clone();
    chosen.sort_by(|&a, &b| (res.eigenvalues[a] - shift).norm().total_cmp(&(res.eigenvalues[b] - shift).norm()));
    chosen.truncate(c.modes);
    chosen.sort_by(|&a, &b| res.eigenvalues[a].re.total_cmp(&res.eigenvalues[b].re));
    if chosen.len() < c.modes {
        return Err(CpmError::Numeric(format!("only {} of {} requested modes were found", chosen.len(), c.modes)));
    }
    let pts = surface_samples(&d, c.surface.is_solid());
    let rows: Vec<Vec<(usize, f64)>> = pts.iter().map(|&p| evaluation_row(&d.band, p)).collect::<Result<_>>()?;
    let mut table = String::from("mode,re,im,residual,file\n");
    for (n, &i) in chosen.iter().enumerate() {
        let v = real_mode(&res.eigenvectors[i]);
        let values: Vec<f64> = rows.iter().map(|r| r.iter().map(|(j, w)| w * v[*j]).sum()).collect();
        let l = res.eigenvalues[i];
        let file = format!("mode_{n:02}.vtk");
        if c.wants("modes") {
            ctx.write(&file, &vtk_point_cloud(&format!("eigenvalue {:.10}", l.re), &pts, &values)?)?;
        }
        table.push_str(&format!("{n},{:.15e},{:.15e},{:.3e},{file}\n", l.re, l.im, res.residuals[i]));
    }
    if c.wants("spectrum") {
        ctx.write("modes.csv", &table)?;
    }
    let vals: Vec<f64> = chosen.iter().map(|&i| res.eigenvalues[i].re).collect();
    ctx.say(format!("{} modes on {} surface points: {}", chosen.len(), pts.len(), preview(&vals, chosen.len())));
    Ok(())
}

fn study_config(c: &RunConfig) -> StudyConfig {
    let mut s = StudyConfig::new(c.surface.clone(), c.dx_list.clone());
    s.p = c.spec.p;
    s.q = c.spec.q;
    s.bc = c.bc;
    s.k_eigs = c.k_eigs;
    s.shift = c.shift.unwrap_or(0.0);
    s.stabilized = c.stabilized;
    s.solver = c.solver;
    s.dense_max = c.dense_max;
    s
}

fn emit_study(ctx: &Context, r: &StudyReport) -> Result<()> {
    if !r.tracked.is_empty() {
        if ctx.config.wants("study") {
            ctx.write("study.csv", &r.to_csv())?;
            let mut orders = String::from("lambda,order\n");
            for t in &r.tracked {
                orders.push_str(&format!("{},{}\n", t.lambda, t.order.map(|o| format!("{o:.4}")).unwrap_or_default()));
            }
            ctx.write("orders.csv", &orders)?;
        }
        if ctx.config.wants("plot") {
            for (n, (_, data)) in r.plot_data().iter().enumerate() {
                ctx.write(&format!("loglog_{n:02}.dat"), data)?;
            }
        }
    }
    for l in &r.levels {
        let k = l.kappa.map(|k| format!(", kappa = {k:.4e}")).unwrap_or_default();
        let status = l.failure.as_deref().map(|f| format!(" FAILED: {f}")).unwrap_or_default();
        ctx.say(format!("dx = {}: m = {}{k} ({:.2}s){status}", l.dx, l.m, l.seconds));
    }
    for t in &r.tracked {
        ctx.say(format!(
            "lambda = {:.6}: order {}",
            t.lambda,
            t.order.map(|o| format!("{o:.3}")).unwrap_or("undefined".into())
        ));
    }
    let failed = r.failed_levels();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CpmError::Numeric(format!("levels failed: {failed:?}")))
    }
}

pub fn converge(ctx: &Context) -> Result<()> {
    let mut s = study_config(&ctx.config);
    s.track = ctx.config.track.unwrap_or(8);
    if s.track == 0 {
        return Err(CpmError::Config("converge needs track >= 1".into()));
    }
    emit_study(ctx, &run_study(&s)?)
}

pub fn cond(ctx: &Context) -> Result<()> {
    let mut s = study_config(&ctx.config);
    s.track = ctx.config.track.unwrap_or(0);
    s.compute_cond = true;
    let r = run_study(&s)?;
    if ctx.config.wants("kappa") {
        ctx.write("kappa.csv", &r.kappa_table())?;
    }
    emit_study(ctx, &r)
}

use std::fmt::Write as _;
use std::time::Instant;

use super::analytic::{analytic_spectrum, AnalyticSpectrum, SpectrumCase};
use super::matching::{match_eigenvalues, observed_order, MatchedPair};
use crate::band::{Grid, StencilSpec};
use crate::discretize::{BcSpec, Discretization};
use crate::eig::{self, condition_number_2norm, filter_spurious, FilterParams, Solver};
use crate::error::{CpmError, Result};
use crate::geometry::{ClosestPoint, Surface};
use crate::par;

/// One convergence or conditioning experiment over several grid spacings.
#[derive(Clone, Debug)]
pub struct StudyConfig {
    pub surface: Surface,
    pub dx_list: Vec<f64>,
    pub p: usize,
    pub q: usize,
    pub bc: BcSpec,
    /// Eigenvalues requested from Arnoldi; `None` sizes it from `track`.
    pub k_eigs: Option<usize>,
    pub shift: f64,
    pub stabilized: bool,
    pub solver: Solver,
    pub dense_max: usize,
    /// Number of smallest nonzero distinct analytic eigenvalues to follow;
    /// zero skips the eigensolves and needs no reference spectrum.
    pub track: usize,
    pub compute_cond: bool,
    pub filter: FilterParams,
    /// Reference spectrum; `None` derives it from the surface.
    pub case: Option<SpectrumCase>,
}

impl StudyConfig {
    pub fn new(surface: Surface, dx_list: Vec<f64>) -> Self {
        StudyConfig {
            surface,
            dx_list,
            p: 3,
            q: 2,
            bc: BcSpec::None,
            k_eigs: None,
            shift: 0.0,
            stabilized: true,
            solver: Solver::Auto,
            dense_max: 1500,
            track: 8,
            compute_cond: false,
            filter: FilterParams::default(),
            case: None,
        }
    }
}

/// Results for one grid spacing.
#[derive(Clone, Debug)]
pub struct LevelReport {
    pub dx: f64,
    pub m: usize,
    pub pairs: Vec<MatchedPair>,
    pub kappa: Option<f64>,
    /// Why the level produced no results, if it failed.
    pub failure: Option<String>,
    pub seconds: f64,
}

/// Error history and fitted order of one analytic eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct TrackedValue {
    pub lambda: f64,
    /// Largest error over the copies of `lambda`, per level; `None` where unmatched.
    pub errors: Vec<Option<f64>>,
    /// Least-squares fit over the levels where `lambda` was fully matched;
    /// defined only when there are at least three of them.
    pub order: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct StudyReport {
    pub levels: Vec<LevelReport>,
    pub tracked: Vec<TrackedValue>,
}

impl StudyReport {
    /// Columns `dx,m,lambda_analytic,lambda_computed,abs_err`; unmatched copies
    /// leave the last two fields empty.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("dx,m,lambda_analytic,lambda_computed,abs_err\n");
        for l in &self.levels {
            for p in &l.pairs {
                let c = p.computed.map(|v| format!("{v:.15e}")).unwrap_or_default();
                let e = p.abs_err.map(|v| format!("{v:.6e}")).unwrap_or_default();
                let _ = writeln!(s, "{},{},{:.15e},{},{}", l.dx, l.m, p.analytic, c, e);
            }
        }
        s
    }

    /// Two-column `dx error` data per tracked eigenvalue, for log-log plots.
    pub fn plot_data(&self) -> Vec<(f64, String)> {
        self.tracked
            .iter()
            .map(|t| {
                let mut s = format!("# lambda = {}\n# dx abs_err\n", t.lambda);
                for (l, e) in self.levels.iter().zip(&t.errors) {
                    if let Some(e) = e {
                        let _ = writeln!(s, "{} {:.6e}", l.dx, e);
                    }
                }
                (t.lambda, s)
            })
            .collect()
    }

    /// Columns `dx,m,kappa,ratio`, where `ratio` is relative to the previous level.
    pub fn kappa_table(&self) -> String {
        let mut s = String::from("dx,m,kappa,ratio\n");
        let mut prev: Option<f64> = None;
        for l in &self.levels {
            let k = l.kappa.map(|k| format!("{k:.6e}")).unwrap_or_default();
            let r = match (prev, l.kappa) {
                (Some(a), Some(b)) => format!("{:.4}", b / a),
                _ => String::new(),
            };
            let _ = writeln!(s, "{},{},{},{}", l.dx, l.m, k, r);
            prev = l.kappa;
        }
        s
    }

    pub fn orders(&self) -> Vec<Option<f64>> {
        self.tracked.iter().map(|t| t.order).collect()
    }

    /// Smallest fitted order, `None` if any tracked value has no order.
    pub fn worst_order(&self) -> Option<f64> {
        let o: Option<Vec<f64>> = self.orders().into_iter().collect();
        o.filter(|o| !o.is_empty()).map(|o| o.into_iter().fold(f64::INFINITY, f64::min))
    }

    pub fn failed_levels(&self) -> Vec<f64> {
        self.levels.iter().filter(|l| l.failure.is_some()).map(|l| l.dx).collect()
    }
}

/// Runs every level (concurrently), then fits orders in `dx_list` order.
pub fn run_study(config: &StudyConfig) -> Result<StudyReport> {
    if config.dx_list.is_empty() {
        return Err(CpmError::Config("dx_list is empty".into()));
    }
    if let Some(dx) = config.dx_list.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
        return Err(CpmError::Config(format!("grid spacings must be positive, got {dx}")));
    }
    let spec = StencilSpec::new(config.p, config.q)?;
    if config.track == 0 {
        let levels = par::map(&config.dx_list, |&dx| level_report(dx, run_level(config, spec, dx, None)));
        return Ok(StudyReport { levels, tracked: vec![] });
    }
    let case = match config.case {
        Some(c) => c,
        None => SpectrumCase::for_surface(&config.surface, config.bc)?,
    };
    let zero = analytic_spectrum(case, 1)?.has_zero_mode() as usize;
    let count = config.track + zero;
    let analytic = analytic_spectrum(case, count)?;
    let copies: usize = analytic.values.iter().map(|v| v.1).sum();
    // the next distinct value may interleave with the last tracked one
    let next_mult = analytic_spectrum(case, count + 1)?.values[count].1;
    let k = config.k_eigs.unwrap_or(copies + next_mult + 6);

    let levels = par::map(&config.dx_list, |&dx| level_report(dx, run_level(config, spec, dx, Some((k, &analytic, count)))));

    let dxs: Vec<f64> = levels.iter().map(|l| l.dx).collect();
    let tracked = analytic.values[zero..]
        .iter()
        .map(|&(lambda, _)| {
            let errors: Vec<Option<f64>> = levels.iter().map(|l| level_error(&l.pairs, lambda)).collect();
            let (e, d): (Vec<f64>, Vec<f64>) =
                errors.iter().zip(&dxs).filter_map(|(e, d)| e.map(|e| (e, *d))).unzip();
            let order = if e.len() >= 3 { observed_order(&e, &d).ok() } else { None };
            TrackedValue { lambda, errors, order }
        })
        .collect();
    Ok(StudyReport { levels, tracked })
}

fn level_report(dx: f64, outcome: (Result<LevelOutcome>, f64)) -> LevelReport {
    match outcome {
        (Ok((m, pairs, kappa)), seconds) => LevelReport { dx, m, pairs, kappa, failure: None, seconds },
        (Err(e), seconds) => {
            LevelReport { dx, m: 0, pairs: vec![], kappa: None, failure: Some(e.to_string()), seconds }
        }
    }
}

type LevelOutcome = (usize, Vec<MatchedPair>, Option<f64>);

/// `target` is `(k, analytic, count)`; without it only sizes and conditioning are computed.
fn run_level(
    config: &StudyConfig,
    spec: StencilSpec,
    dx: f64,
    target: Option<(usize, &AnalyticSpectrum, usize)>,
) -> (Result<LevelOutcome>, f64) {
    let t0 = Instant::now();
    let out = (|| {
        let grid = Grid::for_surface(&config.surface, dx)?;
        let disc = Discretization::new(&config.surface, &grid, spec, config.bc)?;
        let op = if config.stabilized { disc.stabilized()? } else { disc.unstabilized()? };
        let m = op.nrows();
        let pairs = match target {
            Some((k, analytic, count)) => {
                let k = k.min(m.saturating_sub(1) / 2).max(1);
                let res = eig::solve(&op, k, config.shift, config.solver, config.dense_max)?;
                let report = filter_spurious(&res, dx, config.surface.dim(), config.filter);
                let kept: Vec<f64> = report.kept.iter().map(|&i| res.eigenvalues[i].re).collect();
                match_eigenvalues(&kept, analytic, count).pairs
            }
            None => vec![],
        };
        let kappa = if config.compute_cond { Some(condition_number_2norm(&op)?.kappa) } else { None };
        Ok((m, pairs, kappa))
    })();
    (out, t0.elapsed().as_secs_f64())
}

fn level_error(pairs: &[MatchedPair], lambda: f64) -> Option<f64> {
    let copies: Vec<&MatchedPair> = pairs.iter().filter(|p| p.analytic == lambda).collect();
    if copies.is_empty() {
        return None;
    }
    copies.iter().map(|p| p.abs_err).try_fold(0.0, |acc: f64, e| e.map(|e| acc.max(e)))
}

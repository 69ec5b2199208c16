//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always appear, in order, with timings.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use cpm_core::band::{Band, Grid, Node, StencilSpec};
use cpm_core::discretize::{BcSpec, Discretization};
use cpm_core::eig::{
    arnoldi_near_shift, dense_spectrum, dense_spectrum_with_limit, filter_spurious, condition_number_2norm, FilterParams,
    SpectralResult, sample_eigenfunction,
};
use cpm_core::geometry::{ClosestPoint, Point, Surface, TriMesh};
use cpm_core::harness::{
    analytic_spectrum, embedded_circle_eigenfunction, group_multiplets, observed_order, run_study, SpectrumCase,
    StudyConfig, StudyReport,
};
use cpm_core::sparse::SparseOperator;
use num_complex::Complex64;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn surface(name: &str) -> Surface {
    Surface::from_name(name, 1.0).unwrap()
}

fn discretize(s: &Surface, dx: f64, p: usize, q: usize, bc: BcSpec) -> Discretization {
    let g = Grid::for_surface(s, dx).unwrap();
    Discretization::new(s, &g, StencilSpec::new(p, q).unwrap(), bc).unwrap()
}

fn kept_real(res: &SpectralResult, dx: f64, d: usize) -> Vec<f64> {
    let f = filter_spurious(res, dx, d, FilterParams::default());
    let mut v: Vec<f64> = f.kept.iter().map(|&i| res.eigenvalues[i].re).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn fmt_orders(r: &StudyReport) -> String {
    r.tracked
        .iter()
        .map(|t| format!("{:.3}:{}", t.lambda, t.order.map(|o| format!("{o:.2}")).unwrap_or("-".into())))
        .collect::<Vec<_>>()
        .join(" ")
}

fn orders_within(r: &StudyReport, lo: f64, hi: f64) -> bool {
    r.tracked.iter().all(|t| t.order.is_some_and(|o| (lo..=hi).contains(&o)))
}

fn semicircle_m(stabilized: bool) -> (SpectralResult, f64) {
    let dx = 1.0 / 32.0;
    let d = discretize(&surface("semicircle"), dx, 3, 2, BcSpec::Dirichlet);
    let op = if stabilized { d.stabilized().unwrap() } else { d.unstabilized().unwrap() };
    (dense_spectrum(&op).unwrap(), dx)
}

fn c1_semicircle() -> Outcome {
    let t = Instant::now();
    let (res, dx) = semicircle_m(true);
    let kept = kept_real(&res, dx, 2);
    let nonzero: Vec<f64> = kept.iter().copied().filter(|v| v.abs() > 0.1).take(5).collect();
    let ok = nonzero.len() == 5
        && nonzero.iter().zip([1.0, 4.0, 9.0, 16.0, 25.0]).all(|(a, b)| (a - b).abs() <= 0.02 * b)
        && t.elapsed().as_secs_f64() < 30.0;
    check(ok, format!("five smallest {:?} in {:.2}s", nonzero.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>(), t.elapsed().as_secs_f64()))
}

fn c2_ill_posed() -> Outcome {
    let (res, _) = semicircle_m(false);
    let near_zero = res.eigenvalues.iter().filter(|l| l.norm() < 0.1).count();
    let complex = res.eigenvalues.iter().filter(|l| l.im.abs() > 1e-3).count();
    check(near_zero >= 10 && complex >= 1, format!("{near_zero} with |λ|<0.1, {complex} with |Im λ|>1e-3"))
}

fn egg_study(p: usize, q: usize) -> StudyReport {
    let mut c = StudyConfig::new(surface("egg"), vec![0.2, 0.1, 0.05, 0.025]);
    c.p = p;
    c.q = q;
    c.track = 8;
    run_study(&c).unwrap()
}

fn c3a_egg_second_order() -> Outcome {
    let t = Instant::now();
    let r = egg_study(3, 2);
    let ok = r.tracked.len() == 8 && orders_within(&r, 1.7, 2.3) && t.elapsed().as_secs_f64() < 120.0;
    check(ok, format!("orders {} in {:.1}s", fmt_orders(&r), t.elapsed().as_secs_f64()))
}

fn c3b_egg_fourth_order() -> Outcome {
    let r = egg_study(5, 4);
    check(r.tracked.len() == 8 && orders_within(&r, 3.5, 4.5), format!("orders {}", fmt_orders(&r)))
}

fn cosine_study(bc: BcSpec, p: usize, q: usize) -> StudyReport {
    let dxs: Vec<f64> = (0..6).map(|j| 0.125 / f64::powi(2.0, j)).collect();
    let mut c = StudyConfig::new(surface("cosine"), dxs);
    c.bc = bc;
    c.p = p;
    c.q = q;
    c.track = 8;
    run_study(&c).unwrap()
}

fn c4_boundary_orders() -> Outcome {
    let naive = cosine_study(BcSpec::NaiveNeumann, 3, 2);
    let neumann = cosine_study(BcSpec::Neumann, 3, 2);
    let dirichlet = cosine_study(BcSpec::Dirichlet, 3, 2);
    let dirichlet4 = cosine_study(BcSpec::Dirichlet, 5, 4);
    let ok = orders_within(&naive, 0.7, 1.3)
        && orders_within(&neumann, 1.7, 2.3)
        && orders_within(&dirichlet, 1.7, 2.3)
        && orders_within(&dirichlet4, 1.7, 2.3);
    check(
        ok,
        format!(
            "naive Neumann [{}]; Neumann [{}]; Dirichlet [{}]; Dirichlet q=4 [{}]",
            fmt_orders(&naive),
            fmt_orders(&neumann),
            fmt_orders(&dirichlet),
            fmt_orders(&dirichlet4)
        ),
    )
}

const REF_M: [usize; 6] = [76, 140, 268, 524, 1036, 2060];
const REF_KAPPA: [f64; 6] = [289.0, 1154.0, 4608.0, 19304.0, 75543.0, 326633.0];

fn conditioning(name: &str) -> Outcome {
    let s = surface(name);
    let mut ms = vec![];
    let mut ks = vec![];
    for j in 0..6 {
        let dx = 0.25 / f64::powi(2.0, j);
        let op = discretize(&s, dx, 3, 2, BcSpec::Dirichlet).stabilized().unwrap();
        ms.push(op.nrows());
        ks.push(condition_number_2norm(&op).unwrap().kappa);
    }
    let m_ok = ms.iter().zip(REF_M).all(|(&a, b)| (a as f64 - b as f64).abs() <= 0.1 * b as f64);
    let k_ok = ks.iter().zip(REF_KAPPA).all(|(a, b)| (a - b).abs() <= 0.3 * b);
    let ratios: Vec<f64> = ks.windows(2).map(|w| w[1] / w[0]).collect();
    let r_ok = ratios.iter().all(|r| (3.3..=4.8).contains(r));
    check(
        m_ok && k_ok && r_ok,
        format!(
            "{name}: m {ms:?}, kappa [{}], ratios [{}]",
            ks.iter().map(|k| format!("{k:.0}")).collect::<Vec<_>>().join(", "),
            ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn c5_conditioning_cosine() -> Outcome {
    conditioning("cosine")
}

fn c5_conditioning_semicircle() -> Outcome {
    conditioning("semicircle")
}

fn c6_spurious_cluster() -> Outcome {
    let s = surface("circle");
    let mut detail = vec![];
    let mut ok = true;
    for dx in [1.0 / 8.0, 1.0 / 16.0] {
        let res = dense_spectrum(&discretize(&s, dx, 3, 2, BcSpec::None).stabilized().unwrap()).unwrap();
        let target = 4.0 / (dx * dx);
        let cluster = res.eigenvalues.iter().filter(|l| l.im.abs() > 1e-6 * l.re.abs() && (l.re - target).abs() < 0.25 * target).count();
        let f = filter_spurious(&res, dx, 2, FilterParams::default());
        let low_complex = f
            .kept
            .iter()
            .map(|&i| res.eigenvalues[i])
            .filter(|l| l.re < 100.0 && l.im.abs() > 1e-6 * l.re.abs())
            .count();
        // stricter than the kept set: every eigenvalue below 100
        let low_any = res.eigenvalues.iter().filter(|l| l.re < 100.0 && l.im.abs() > 1e-6 * l.re.abs().max(1.0)).count();
        ok &= cluster > 0 && low_complex == 0 && low_any == 0;
        detail.push(format!("dx={dx}: {cluster} complex near {target}, {low_any} complex below 100"));
    }
    check(ok, detail.join("; "))
}

fn c7_hemisphere() -> Outcome {
    let t = Instant::now();
    let mut c = StudyConfig::new(surface("hemisphere"), vec![1.0 / 8.0, 1.0 / 12.0, 1.0 / 16.0]);
    c.bc = BcSpec::Neumann;
    c.track = 5;
    let r = run_study(&c).unwrap();
    let finest = r.levels.last().unwrap();
    let dx = finest.dx;
    let twenty: Vec<f64> = finest.pairs.iter().filter(|p| p.analytic == 20.0).filter_map(|p| p.computed).collect();
    let groups = group_multiplets(&twenty, 10.0 * dx * dx);
    let spread = twenty.iter().copied().fold(f64::NEG_INFINITY, f64::max) - twenty.iter().copied().fold(f64::INFINITY, f64::min);
    let lambdas: Vec<f64> = r.tracked.iter().map(|t| t.lambda).collect();
    let ok = lambdas == vec![2.0, 6.0, 12.0, 20.0, 30.0]
        && orders_within(&r, 1.6, 2.4)
        && twenty.len() == 5
        && groups.len() == 1
        && finest.seconds < 600.0;
    check(
        ok,
        format!(
            "orders {}; lambda=20 copies {} spread {spread:.2e} (10 dx^2 = {:.2e}); finest level m={} in {:.1}s (total {:.1}s)",
            fmt_orders(&r),
            twenty.len(),
            10.0 * dx * dx,
            finest.m,
            finest.seconds,
            t.elapsed().as_secs_f64()
        ),
    )
}

/// Integer model of the grid-aligned L: doubled coordinates `2i + 1` for
/// cell centers, domain `[-2n, 2n]²` minus the open upper-right quadrant.
struct IntegerL {
    n: i64,
}

impl IntegerL {
    fn inside(&self, x: i64, y: i64) -> bool {
        let a = 2 * self.n;
        (-a..=a).contains(&x) && (-a..=a).contains(&y) && !(x > 0 && y > 0)
    }

    /// Mirror image across the nearest boundary point (edges in polygon
    /// order, first edge wins ties), in doubled coordinates.
    fn mirror(&self, x: i64, y: i64) -> (i64, i64) {
        let a = 2 * self.n;
        let v = [(-a, -a), (a, -a), (a, 0), (0, 0), (0, a), (-a, a)];
        let mut best = (i64::MAX, (0, 0));
        for k in 0..6 {
            let (p, q) = (v[k], v[(k + 1) % 6]);
            let c = (x.clamp(p.0.min(q.0), p.0.max(q.0)), y.clamp(p.1.min(q.1), p.1.max(q.1)));
            let d = (x - c.0).pow(2) + (y - c.1).pow(2);
            if d < best.0 {
                best = (d, c);
            }
        }
        let c = best.1;
        (2 * c.0 - x, 2 * c.1 - y)
    }
}

/// Five-point Laplacian on the nodes of `band`, ghost values taken as minus the mirrored value.
fn lshape_oracle(band: &Band, n: i64, dx: f64) -> SparseOperator {
    let l = IntegerL { n };
    let index: HashMap<Node, usize> = band.nodes().iter().enumerate().map(|(i, nd)| (*nd, i)).collect();
    let value_of = |nd: Node| -> (usize, f64) {
        let (x, y) = (2 * nd[0] + 1, 2 * nd[1] + 1);
        if l.inside(x, y) {
            (index[&nd], 1.0)
        } else {
            let (mx, my) = l.mirror(x, y);
            assert!(l.inside(mx, my));
            (index[&[(mx - 1) / 2, (my - 1) / 2, 0]], -1.0)
        }
    };
    let h = 1.0 / (dx * dx);
    let mut t = vec![];
    for (r, nd) in band.nodes().iter().enumerate() {
        t.push((r, r, -4.0 * h));
        for (di, dj) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
            let (c, s) = value_of([nd[0] + di, nd[1] + dj, 0]);
            t.push((r, c, s * h));
        }
    }
    SparseOperator::from_triplets(band.m(), band.m(), t).unwrap()
}

fn c8_lshape() -> Outcome {
    let s = surface("lshape");
    // entrywise at dx = 1/20
    let n = 20;
    let dx = 1.0 / n as f64;
    let d = discretize(&s, dx, 3, 2, BcSpec::Dirichlet);
    let m = d.stabilized().unwrap();
    let oracle_m = lshape_oracle(&d.band, n, dx);
    let diff = m.max_abs_diff(&oracle_m).unwrap();
    let rel_diff = diff * dx * dx;
    let res = arnoldi_near_shift(&m, 15, 0.0).unwrap();
    let dense = oracle_m.scaled(-1.0).to_dense();
    let evd = faer::linalg::solvers::Eigen::new_from_real(dense.as_ref()).unwrap();
    let s = evd.S().column_vector();
    let mut oracle: Vec<(f64, f64)> = (0..s.nrows()).map(|i| (s[i].re, s[i].im)).collect();
    oracle.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut computed: Vec<Complex64> = res.eigenvalues.clone();
    computed.sort_by(|a, b| a.re.total_cmp(&b.re));
    let worst = computed
        .iter()
        .zip(&oracle)
        .map(|(a, b)| (*a - Complex64::new(b.0, b.1)).norm() / b.0.abs())
        .fold(0.0, f64::max);
    let ok = rel_diff <= 1e-12 && worst <= 1e-8 && res.len() == 15;
    check(
        ok,
        format!(
            "m={}, max entry difference {diff:.1e} (scaled {rel_diff:.1e}), first 15 eigenvalues max rel. diff {worst:.1e} (λ1={:.6}, λ15={:.6})",
            m.nrows(),
            oracle[0].0,
            oracle[14].0
        ),
    )
}

/// Largest deviation of the discrete `n = 1` circle mode from the embedded
/// eigenfunction at band nodes, after fitting the mode to `cos θ` on the circle.
fn embedded_mode_error(dx: f64) -> f64 {
    let s = surface("circle");
    let d = discretize(&s, dx, 3, 2, BcSpec::None);
    let res = arnoldi_near_shift(&d.stabilized().unwrap(), 3, 0.5).unwrap();
    let pair: Vec<usize> = (0..res.len()).filter(|&i| (res.eigenvalues[i].re - 1.0).abs() < 0.1).collect();
    assert_eq!(pair.len(), 2, "{:?}", res.eigenvalues);
    let lambda = 0.5 * (res.eigenvalues[pair[0]].re + res.eigenvalues[pair[1]].re);
    let thetas: Vec<f64> = (0..64).map(|k| 2.0 * PI * k as f64 / 64.0).collect();
    let pts: Vec<Point> = thetas.iter().map(|t| [t.cos(), t.sin(), 0.0]).collect();
    let samples: Vec<Vec<Complex64>> =
        pair.iter().map(|&i| sample_eigenfunction(&res.eigenvectors[i], &d.band, &pts).unwrap()).collect();
    // least squares for c in samples·c ≈ cos θ (2 complex unknowns, normal equations)
    let target: Vec<Complex64> = thetas.iter().map(|t| Complex64::new(t.cos(), 0.0)).collect();
    let g = |a: &[Complex64], b: &[Complex64]| -> Complex64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    let (a11, a12, a22) = (g(&samples[0], &samples[0]), g(&samples[0], &samples[1]), g(&samples[1], &samples[1]));
    let (b1, b2) = (g(&samples[0], &target), g(&samples[1], &target));
    let det = a11 * a22 - a12 * a12.conj();
    let c1 = (a22 * b1 - a12 * b2) / det;
    let c2 = (a11 * b2 - a12.conj() * b1) / det;
    let v: Vec<Complex64> = (0..d.band.m())
        .map(|i| res.eigenvectors[pair[0]][i] * c1 + res.eigenvectors[pair[1]][i] * c2)
        .collect();
    (0..d.band.m())
        .map(|i| {
            let x = d.band.point(i);
            let (r, th) = (x[0].hypot(x[1]), x[1].atan2(x[0]));
            let exact = embedded_circle_eigenfunction(lambda, 1.0, dx, r, th).unwrap();
            (v[i] - exact).norm()
        })
        .fold(0.0, f64::max)
}

fn c9_embedded_mode() -> Outcome {
    let e1 = embedded_mode_error(0.1);
    let e2 = embedded_mode_error(0.05);
    check(e1 / e2 >= 1.5, format!("max error {e1:.3e} at dx=0.1, {e2:.3e} at dx=0.05, ratio {:.2}", e1 / e2))
}

/// Relative distance of `-(1/λ) Δh E u` from the computed `λ ≈ 1` eigenspace
/// of the unstabilized operator, `u` the extension of `cos θ`.
fn unstab_span_distance(dx: f64) -> f64 {
    let s = surface("circle");
    let d = discretize(&s, dx, 3, 2, BcSpec::None);
    let mt = d.unstabilized().unwrap();
    let res = dense_spectrum_with_limit(&mt, 4000).unwrap();
    // the computed double eigenvalue nearest the analytic one
    let mut idx: Vec<usize> = (0..res.len()).collect();
    idx.sort_by(|&a, &b| (res.eigenvalues[a] - 1.0).norm().total_cmp(&(res.eigenvalues[b] - 1.0).norm()));
    idx.truncate(2);
    let lambda = 0.5 * (res.eigenvalues[idx[0]].re + res.eigenvalues[idx[1]].re);
    let u: Vec<f64> = (0..d.band.m()).map(|i| {
        let c = d.band.cp(i).point;
        c[1].atan2(c[0]).cos()
    }).collect();
    let eu = d.e.matvec(&u).unwrap();
    let w: Vec<Complex64> = d.delta_h.matvec(&eu).unwrap().iter().map(|v| Complex64::new(-v / lambda, 0.0)).collect();
    // orthonormal basis of the eigenspace
    let mut basis: Vec<Vec<Complex64>> = vec![];
    for &i in &idx {
        let mut q = res.eigenvectors[i].clone();
        for b in &basis {
            let c: Complex64 = b.iter().zip(&q).map(|(x, y)| x.conj() * y).sum();
            q.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let nq = q.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        q.iter_mut().for_each(|x| *x /= nq);
        basis.push(q);
    }
    let mut r = w.clone();
    for b in &basis {
        let c: Complex64 = b.iter().zip(&r).map(|(x, y)| x.conj() * y).sum();
        r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
    }
    let nr = r.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let nw = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    nr / nw
}

fn c9_unstab_span() -> Outcome {
    let dxs = [0.2, 0.1, 0.05, 0.025];
    let r: Vec<f64> = dxs.iter().map(|&dx| unstab_span_distance(dx)).collect();
    let slope = observed_order(&r, &dxs).unwrap();
    check(
        slope > 0.5 && r[3] < 0.1 * r[0],
        format!(
            "relative distance from the eigenspace {} (dx {:?}), fitted order {slope:.2}",
            r.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>().join(", "),
            dxs
        ),
    )
}

fn c10_properties() -> Outcome {
    let t = Instant::now();
    let mut notes = vec![];
    let cases: Vec<(&str, BcSpec, usize, usize, f64)> = vec![
        ("circle", BcSpec::None, 3, 2, 0.1),
        ("egg", BcSpec::None, 5, 4, 0.1),
        ("semicircle", BcSpec::Neumann, 3, 2, 0.1),
        ("cosine", BcSpec::Dirichlet, 2, 2, 0.125),
        ("sphere", BcSpec::None, 2, 2, 0.2),
        ("hemisphere", BcSpec::Neumann, 3, 2, 0.2),
    ];
    for (name, bc, p, q, dx) in cases {
        let s = surface(name);
        let d = discretize(&s, dx, p, q, bc);
        let band = &d.band;
        band.check_closure().map_err(|e| format!("{name}: closure: {e}"))?;
        // partition of unity on non-Dirichlet rows
        let sums = d.e.row_sums();
        let pu = (0..band.n_ext())
            .filter(|&i| !(band.is_ghost(i) && bc.is_dirichlet()))
            .map(|i| (sums[i] - 1.0).abs())
            .fold(0.0, f64::max);
        if pu > 1e-12 {
            return Err(format!("{name}: partition of unity off by {pu:e}"));
        }
        // M·1 = 0 without Dirichlet data
        let m = d.stabilized().unwrap();
        if !bc.is_dirichlet() {
            let m1 = m.matvec(&vec![1.0; band.m()]).unwrap().iter().map(|v| v.abs()).fold(0.0, f64::max);
            if m1 > 1e-9 / (dx * dx) * 1e-3 {
                return Err(format!("{name}: |M 1| = {m1:e}"));
            }
        }
        // M - M̃ = diag(Δh)(I - E)
        let mt = d.unstabilized().unwrap();
        let dg = SparseOperator::from_diagonal(&d.delta_h.diagonal());
        let ie = SparseOperator::identity(band.m()).linear_combination(1.0, &d.e_band(), -1.0).unwrap();
        let gap = m.linear_combination(1.0, &mt, -1.0).unwrap().max_abs_diff(&dg.matmul(&ie).unwrap()).unwrap();
        if gap > 1e-9 {
            return Err(format!("{name}: stabilization identity off by {gap:e}"));
        }
        // interpolation exactness: E reproduces degree-p polynomials at the targets
        let dim = s.dim();
        let poly = |x: Point| -> f64 { (0..dim).map(|k| (x[k] + 0.3 * k as f64).powi(p as i32)).sum::<f64>() + x[0] * x[dim - 1] };
        let u: Vec<f64> = (0..band.m()).map(|i| poly(band.point(i))).collect();
        let eu = d.e.matvec(&u).unwrap();
        let exact = (0..band.n_ext())
            .filter(|&i| !band.is_ghost(i))
            .map(|i| (eu[i] - poly(band.cp(i).point)).abs())
            .fold(0.0, f64::max);
        if exact > 1e-9 {
            return Err(format!("{name}: interpolation error {exact:e}"));
        }
        // cp idempotence
        let idem = (0..band.n_ext())
            .map(|i| {
                let c = band.cp(i).point;
                let cc = s.cp(c).point;
                (0..3).map(|k| (c[k] - cc[k]).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if idem > 1e-10 {
            return Err(format!("{name}: cp(cp(x)) moved by {idem:e}"));
        }
        notes.push(format!("{name}(m={})", band.m()));
    }
    check(t.elapsed().as_secs_f64() < 60.0, format!("{} in {:.1}s", notes.join(" "), t.elapsed().as_secs_f64()))
}

fn mesh_sphere() -> Outcome {
    let mesh = TriMesh::uv_sphere(1.0, 20, 14).unwrap();
    let n_tri = mesh.triangles().len();
    let s = Surface::Mesh(mesh);
    let dx = 0.1;
    let d = discretize(&s, dx, 3, 2, BcSpec::None);
    let res = arnoldi_near_shift(&d.stabilized().unwrap(), 12, -0.5).unwrap();
    // faceting makes the operator non-normal enough to split degenerate
    // values into complex pairs, so these are compared as complex numbers
    let mut values: Vec<Complex64> = res.eigenvalues.iter().copied().filter(|l| l.norm() > 0.5).collect();
    values.sort_by(|a, b| a.re.total_cmp(&b.re));
    values.truncate(5);
    let sphere = analytic_spectrum(SpectrumCase::Sphere { radius: 1.0 }, 4).unwrap().distinct();
    let nearest: Vec<f64> = values
        .iter()
        .map(|v| sphere.iter().copied().min_by(|a, b| (v - a).norm().total_cmp(&(v - b).norm())).unwrap())
        .collect();
    let worst = values.iter().zip(&nearest).map(|(v, l)| (v - l).norm() / l).fold(0.0, f64::max);
    let ok = nearest == vec![2.0, 2.0, 2.0, 6.0, 6.0] && worst <= 0.1;
    check(
        ok,
        format!(
            "{n_tri} triangles, m={}, five smallest nonzero [{}], max relative distance {worst:.3}",
            d.band.m(),
            values.iter().map(|v| format!("{:.3}{:+.3}i", v.re, v.im)).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn main() {
    let criteria: Vec<(&str, &str, fn() -> Outcome)> = vec![
        ("1", "semicircle Dirichlet spectrum 1,4,9,16,25 within 2%", c1_semicircle),
        ("2", "unstabilized operator: null cluster and complex values", c2_ill_posed),
        ("3a", "egg curve q=2 p=3 orders in [1.7,2.3]", c3a_egg_second_order),
        ("3b", "egg curve q=4 p=5 orders in [3.5,4.5]", c3b_egg_fourth_order),
        ("4", "cosine curve boundary-condition orders", c4_boundary_orders),
        ("5", "reference sizes and condition numbers on the cosine curve", c5_conditioning_cosine),
        ("5s", "reference sizes and condition numbers on the semicircle", c5_conditioning_semicircle),
        ("6", "spurious complex cluster near 4/dx^2, real low spectrum", c6_spurious_cluster),
        ("7", "hemisphere Neumann orders and the lambda=20 quintuplet", c7_hemisphere),
        ("8", "L-shape equals mirror-ghost five-point Laplacian", c8_lshape),
        ("9", "embedded circle eigenfunction, two-level ratio >= 1.5", c9_embedded_mode),
        ("9b", "unstabilized eigenvectors equal -(1/λ) Δh E u", c9_unstab_span),
        ("10", "property suite", c10_properties),
        ("mesh", "triangulated sphere, five smallest nonzero within 10%", mesh_sphere),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = vec![];
    let mut out = std::io::stdout();
    for (id, name, f) in criteria {
        if !only.is_empty() && !only.iter().any(|o| o == id) {
            continue;
        }
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        writeln!(out, "{tag} [{id}] {name} ({:.1}s): {detail}", t.elapsed().as_secs_f64()).unwrap();
        out.flush().unwrap();
        if outcome.is_err() {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        writeln!(out, "failed criteria: {}", failed.join(", ")).unwrap();
        std::process::exit(1);
    }
}

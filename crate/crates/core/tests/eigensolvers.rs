use cpm_core::band::{Grid, StencilSpec};
use cpm_core::discretize::{BcSpec, Discretization};
use cpm_core::eig::{arnoldi_near_shift, dense_spectrum, filter_spurious, solve, FilterParams, Solver, RESIDUAL_TOL};
use cpm_core::geometry::Surface;
use cpm_core::sparse::SparseOperator;

fn operators(name: &str, dx: f64) -> (SparseOperator, SparseOperator) {
    let s = Surface::from_name(name, 1.0).unwrap();
    let g = Grid::for_surface(&s, dx).unwrap();
    let d = Discretization::new(&s, &g, StencilSpec::new(3, 2).unwrap(), BcSpec::None).unwrap();
    (d.stabilized().unwrap(), d.unstabilized().unwrap())
}

#[test]
fn arnoldi_agrees_with_dense_on_egg() {
    let (m, _) = operators("egg", 0.1);
    let a = arnoldi_near_shift(&m, 12, 0.0).unwrap();
    let d = dense_spectrum(&m).unwrap();
    assert!(a.max_residual() < RESIDUAL_TOL, "{}", a.max_residual());
    let mut dv: Vec<f64> = d.eigenvalues.iter().map(|l| l.re).collect();
    dv.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    let mut av: Vec<f64> = a.eigenvalues.iter().map(|l| l.re).collect();
    av.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    for (x, y) in av.iter().zip(&dv) {
        assert!((x - y).abs() <= 1e-8 * y.abs().max(1.0), "{x} vs {y}");
    }
}

#[test]
fn kept_dense_pairs_meet_residual_contract() {
    let (m, _) = operators("circle", 1.0 / 16.0);
    let d = dense_spectrum(&m).unwrap();
    let f = filter_spurious(&d, 1.0 / 16.0, 2, FilterParams::default());
    assert!(!f.kept.is_empty());
    for &i in &f.kept {
        assert!(d.residuals[i] < RESIDUAL_TOL, "lambda {} residual {}", d.eigenvalues[i], d.residuals[i]);
    }
}

#[test]
fn stabilization_removes_null_cluster() {
    let (m, mt) = operators("egg", 0.1);
    let small = |op: &SparseOperator| dense_spectrum(op).unwrap().eigenvalues.iter().filter(|l| l.norm() < 1e-6 * 100.0).count();
    assert_eq!(small(&m), 1);
    assert!(small(&mt) > 10);
}

#[test]
fn circle_lowest_nine() {
    let (m, _) = operators("circle", 0.05);
    let r = solve(&m, 9, 0.0, Solver::Arnoldi, 0).unwrap();
    let mut v: Vec<f64> = r.eigenvalues.iter().map(|l| l.re).collect();
    v.sort_by(f64::total_cmp);
    let want = [0.0, 1.0, 1.0, 4.0, 4.0, 9.0, 9.0, 16.0, 16.0];
    for (a, b) in v.iter().zip(want) {
        assert!((a - b).abs() <= 0.01 * b.max(1.0), "{v:?}");
    }
}

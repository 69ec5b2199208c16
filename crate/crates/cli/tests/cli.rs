use std::path::Path;
use std::process::{Command, Output};

fn cpm(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpm")).args(args).arg("--out").arg(out).arg("--quiet").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path).unwrap().lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

fn kept_real(path: &Path) -> Vec<f64> {
    let mut v: Vec<f64> = csv_rows(path).iter().filter(|r| r[4] == "1").map(|r| r[1].parse().unwrap()).collect();
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn semicircle_spectrum_rounds_to_squares() {
    let dir = tempfile::tempdir().unwrap();
    let o = cpm(dir.path(), &["spectrum", "--set", "surface=semicircle", "--set", "bc=dirichlet", "--set", "dx=1/32"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Vec<f64> = kept_real(&dir.path().join("spectrum.csv")).into_iter().filter(|v| *v > 0.1).take(5).collect();
    assert_eq!(v.iter().map(|x| x.round()).collect::<Vec<_>>(), vec![1.0, 4.0, 9.0, 16.0, 25.0]);
    let hist = std::fs::read_to_string(dir.path().join("histogram.dat")).unwrap();
    let total: usize = hist.lines().skip(1).map(|l| l.split_whitespace().nth(1).unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(total, 524);
}

#[test]
fn unstabilized_has_null_cluster() {
    let dir = tempfile::tempdir().unwrap();
    let o = cpm(dir.path(), &["compare-unstab", "--set", "surface=semicircle", "--set", "bc=dirichlet", "--set", "dx=1/32"]);
    assert_eq!(code(&o), 0);
    let near_zero = |f: &str| {
        csv_rows(&dir.path().join(f))
            .iter()
            .filter(|r| r[1].parse::<f64>().unwrap().hypot(r[2].parse::<f64>().unwrap()) < 0.1)
            .count()
    };
    assert!(near_zero("spectrum_unstabilized.csv") > 10);
    assert_eq!(near_zero("spectrum_stabilized.csv"), 0);
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = cpm(dir.path(), &["spectrum", "--set", "surface=torus", "--set", "dx=0.1"]);
    assert_eq!(code(&o), 2);
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("torus") && msg.contains("hemisphere") && msg.contains("lshape"), "{msg}");

    assert_eq!(code(&cpm(dir.path(), &["converge", "--set", "surface=egg", "--set", "dx_list="])), 2);
    assert_eq!(code(&cpm(dir.path(), &["spectrum", "--set", "surface=circle", "--set", "colour=red"])), 2);
    assert_eq!(code(&cpm(dir.path(), &["spectrum", "--set", "surface=circle"])), 2);
    assert_eq!(code(&cpm(dir.path(), &["spectrum", "--config", "/nonexistent/run.cfg"])), 2);
}

#[test]
fn numeric_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = cpm(dir.path(), &["modes", "--set", "surface=circle", "--set", "dx=0.2", "--set", "modes=500"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("egg.cfg");
    std::fs::write(&cfg, "# egg study\nsurface = egg\ndx_list = 0.4, 0.2\ntrack = 3\n").unwrap();
    let o = cpm(dir.path(), &["converge", "--config", cfg.to_str().unwrap(), "--set", "dx_list=0.2,0.1,0.05"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let orders = csv_rows(&dir.path().join("orders.csv"));
    assert_eq!(orders.len(), 3);
    for r in &orders {
        let o: f64 = r[1].parse().unwrap();
        assert!((1.7..=2.3).contains(&o), "{r:?}");
    }
    for n in 0..3 {
        assert!(dir.path().join(format!("loglog_{n:02}.dat")).exists());
    }
    let study = std::fs::read_to_string(dir.path().join("study.csv")).unwrap();
    assert!(study.starts_with("dx,m,lambda_analytic,lambda_computed,abs_err\n"));
}

#[test]
fn condition_numbers_quadruple() {
    let dir = tempfile::tempdir().unwrap();
    let o = cpm(
        dir.path(),
        &["cond", "--set", "surface=cosine", "--set", "bc=dirichlet", "--set", "dx_list=0.25,0.125,0.0625,0.03125"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&dir.path().join("kappa.csv"));
    assert_eq!(rows.len(), 4);
    for r in &rows[1..] {
        let ratio: f64 = r[3].parse().unwrap();
        assert!((3.3..=4.8).contains(&ratio), "{r:?}");
    }
}

fn vtk_values(path: &Path) -> Vec<f64> {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("# vtk DataFile Version 3.0\n"));
    text.lines().skip_while(|l| *l != "LOOKUP_TABLE default").skip(1).map(|l| l.parse().unwrap()).collect()
}

#[test]
fn hemisphere_twenty_multiplet() {
    let dir = tempfile::tempdir().unwrap();
    let o = cpm(
        dir.path(),
        &["modes", "--set", "surface=hemisphere", "--set", "bc=neumann", "--set", "dx=0.1", "--set", "mode_target=20", "--set", "modes=5"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&dir.path().join("modes.csv"));
    assert_eq!(rows.len(), 5);
    for r in &rows {
        assert!((r[1].parse::<f64>().unwrap() - 20.0).abs() < 0.5, "{r:?}");
        assert!(!vtk_values(&dir.path().join(&r[4])).is_empty());
    }
    assert!(!dir.path().join("mode_05.vtk").exists());
}

#[test]
fn lshape_fifteen_modes() {
    let dir = tempfile::tempdir().unwrap();
    let o = cpm(dir.path(), &["modes", "--set", "surface=lshape", "--set", "bc=dirichlet", "--set", "dx=1/40"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let files = std::fs::read_dir(dir.path()).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "vtk"));
    assert_eq!(files.count(), 15);
    let first: f64 = csv_rows(&dir.path().join("modes.csv"))[0][1].parse().unwrap();
    assert!((first - 9.64).abs() < 0.1, "{first}");
}

#[test]
fn circle_constant_mode() {
    let dir = tempfile::tempdir().unwrap();
    let o = cpm(dir.path(), &["modes", "--set", "surface=circle", "--set", "dx=0.1", "--set", "modes=1"]);
    assert_eq!(code(&o), 0);
    let v = vtk_values(&dir.path().join("mode_00.vtk"));
    let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(*x), b.max(*x)));
    assert!(hi - lo <= 1e-6 * hi.abs(), "{lo} {hi}");
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["spectrum", "--set", "surface=egg", "--set", "dx=0.05", "--set", "solver=arnoldi", "--set", "k_eigs=20"];
    assert_eq!(code(&cpm(a.path(), &args)), 0);
    assert_eq!(code(&cpm(b.path(), &args)), 0);
    let read = |d: &Path| std::fs::read(d.join("spectrum.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));

    let args = ["converge", "--set", "surface=circle", "--set", "dx_list=0.2,0.1,0.05", "--set", "track=3"];
    assert_eq!(code(&cpm(a.path(), &args)), 0);
    assert_eq!(code(&cpm(b.path(), &args)), 0);
    assert_eq!(std::fs::read(a.path().join("study.csv")).unwrap(), std::fs::read(b.path().join("study.csv")).unwrap());
}

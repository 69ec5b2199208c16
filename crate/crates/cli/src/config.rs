//! `key = value` run configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use cpm_core::band::StencilSpec;
use cpm_core::discretize::BcSpec;
use cpm_core::eig::Solver;
use cpm_core::geometry::{Surface, TriMesh};
use cpm_core::{CpmError, Result};

pub const KEYS: &[&str] = &[
    "surface",
    "radius",
    "mesh_path",
    "dx",
    "dx_list",
    "p",
    "q",
    "bc",
    "k_eigs",
    "shift",
    "solver",
    "dense_max",
    "stabilized",
    "track",
    "bins",
    "modes",
    "mode_target",
    "outputs",
];

pub const ARTIFACTS: &[&str] = &["spectrum", "histogram", "modes", "study", "plot", "kappa"];

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub surface: Surface,
    pub dx: Option<f64>,
    pub dx_list: Vec<f64>,
    pub spec: StencilSpec,
    pub bc: BcSpec,
    pub k_eigs: Option<usize>,
    pub shift: Option<f64>,
    pub solver: Solver,
    pub dense_max: usize,
    pub stabilized: bool,
    pub track: Option<usize>,
    pub bins: usize,
    pub modes: usize,
    pub mode_target: Option<f64>,
    pub outputs: Vec<String>,
}

impl RunConfig {
    pub fn wants(&self, artifact: &str) -> bool {
        self.outputs.iter().any(|o| o == artifact)
    }

    pub fn require_dx(&self) -> Result<f64> {
        self.dx.ok_or_else(|| CpmError::Config("this command needs 'dx'".into()))
    }
}

/// Parses `key = value` lines; `#` starts a comment. Later keys win.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = parse_override(line).map_err(|_| CpmError::Config(format!("line {}: expected key = value", n + 1)))?;
        map.insert(k, v);
    }
    Ok(map)
}

pub fn parse_override(s: &str) -> Result<(String, String)> {
    let (k, v) = s.split_once('=').ok_or_else(|| CpmError::Config(format!("'{s}' is not key=value")))?;
    let k = k.trim();
    if !KEYS.contains(&k) {
        return Err(CpmError::Config(format!("unknown key '{k}'; valid keys: {}", KEYS.join(", "))));
    }
    Ok((k.to_string(), v.trim().to_string()))
}

fn num<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|v| v.parse::<T>().map_err(|_| CpmError::Config(format!("'{key}' has invalid value '{v}'"))))
        .transpose()
}

fn float_list(v: &str) -> Result<Vec<f64>> {
    v.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(parse_float)
        .collect()
}

/// Decimal or `a/b` fraction.
fn parse_float(s: &str) -> Result<f64> {
    let bad = || CpmError::Config(format!("'{s}' is not a number"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            Ok(a / b)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

/// Builds the run configuration from a file (optional) and overrides; paths
/// in the file resolve relative to it.
pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<RunConfig> {
    let mut map = BTreeMap::new();
    let mut base = PathBuf::from(".");
    if let Some(p) = path {
        let text = std::fs::read_to_string(p)
            .map_err(|e| CpmError::Config(format!("cannot read config {}: {e}", p.display())))?;
        map = parse_pairs(&text)?;
        base = p.parent().map(Path::to_path_buf).unwrap_or(base);
    }
    for o in overrides {
        let (k, v) = parse_override(o)?;
        map.insert(k, v);
    }
    build(&map, &base)
}

fn build(map: &BTreeMap<String, String>, base: &Path) -> Result<RunConfig> {
    let name = map.get("surface").ok_or_else(|| CpmError::Config("'surface' is required".into()))?;
    let radius = num(map, "radius")?.unwrap_or(1.0);
    let surface = if name == "mesh" {
        let rel = map.get("mesh_path").ok_or_else(|| CpmError::Config("surface 'mesh' needs 'mesh_path'".into()))?;
        let path = base.join(rel);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CpmError::Config(format!("cannot read mesh {}: {e}", path.display())))?;
        Surface::Mesh(TriMesh::from_off(&text)?)
    } else {
        Surface::from_name(name, radius)?
    };
    let dx = map.get("dx").map(|v| parse_float(v)).transpose()?;
    let dx_list = map.get("dx_list").map(|v| float_list(v)).transpose()?.unwrap_or_default();
    let spec = StencilSpec::new(num(map, "p")?.unwrap_or(3), num(map, "q")?.unwrap_or(2))?;
    let bc = match map.get("bc") {
        Some(b) => BcSpec::from_name(b)?,
        None => BcSpec::None,
    };
    let solver = match map.get("solver") {
        Some(s) => Solver::from_name(s)?,
        None => Solver::Auto,
    };
    let outputs: Vec<String> = match map.get("outputs") {
        Some(v) => v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => ARTIFACTS.iter().map(|s| s.to_string()).collect(),
    };
    if let Some(bad) = outputs.iter().find(|o| !ARTIFACTS.contains(&o.as_str())) {
        return Err(CpmError::Config(format!("unknown output '{bad}'; valid outputs: {}", ARTIFACTS.join(", "))));
    }
    let stabilized = match map.get("stabilized").map(String::as_str) {
        None | Some("true") | Some("1") | Some("yes") => true,
        Some("false") | Some("0") | Some("no") => false,
        Some(v) => return Err(CpmError::Config(format!("'stabilized' has invalid value '{v}'"))),
    };
    Ok(RunConfig {
        surface,
        dx,
        dx_list,
        spec,
        bc,
        k_eigs: num(map, "k_eigs")?,
        shift: num(map, "shift")?,
        solver,
        dense_max: num(map, "dense_max")?.unwrap_or(1500),
        stabilized,
        track: num(map, "track")?,
        bins: num(map, "bins")?.unwrap_or(50),
        modes: num(map, "modes")?.unwrap_or(15),
        mode_target: num(map, "mode_target")?,
        outputs,
    })
}

//! Scenario files: flat `key = value` lines with dotted keys, `#` comments.
//!
//! Parsing only checks syntax (known keys, well-formed numbers); physical
//! and geometric constraints are checked separately by [`Scenario::validate`]
//! so that the two failure kinds map to different exit codes.

use crate::error::CliError;
use halfspace::linalg::c;
use halfspace::Complex64;
use std::collections::BTreeMap;

const KEYS: &[&str] = &[
    "medium.lambda",
    "medium.mu",
    "medium.omega",
    "incidence.kind",
    "incidence.theta",
    "incidence.phi",
    "incidence.c_p",
    "incidence.c_s1",
    "incidence.c_s2",
    "incidence.beam.kind",
    "incidence.beam.center",
    "incidence.beam.width",
    "incidence.beam.weight",
    "incidence.beam.q1",
    "incidence.beam.q2",
    "incidence.beam.q3",
    "incidence.beam.support_radius",
    "incidence.beam.height",
    "incidence.source",
    "incidence.force",
    "grid.origin",
    "grid.extent",
    "grid.resolution",
    "output.quantity",
    "quadrature.tolerance",
    "quadrature.max_panels",
    "seed",
    "propagate.source",
    "propagate.cell_length",
    "propagate.n",
    "propagate.heights",
    "validate.groups",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Displacement,
    Traction,
    Residual,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Displacement => "displacement",
            Quantity::Traction => "traction",
            Quantity::Residual => "residual",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Incidence {
    Plane {
        theta: f64,
        phi: f64,
        c_p: Complex64,
        c_s1: Complex64,
        c_s2: Complex64,
    },
    Beam {
        shear: bool,
        center: [f64; 2],
        width: f64,
        weight: Complex64,
        q: [Complex64; 3],
        support_radius: f64,
        height: f64,
    },
    PointSource {
        position: [f64; 3],
        force: [f64; 3],
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub origin: [f64; 3],
    pub extent: [f64; 3],
    pub resolution: [usize; 3],
}

impl Grid {
    /// Points with the first axis varying fastest.
    pub fn points(&self) -> Vec<[f64; 3]> {
        let coord = |axis: usize, k: usize| {
            let n = self.resolution[axis];
            if n == 1 {
                self.origin[axis]
            } else {
                self.origin[axis] + self.extent[axis] * k as f64 / (n - 1) as f64
            }
        };
        let [n1, n2, n3] = self.resolution;
        let mut out = Vec::with_capacity(n1 * n2 * n3);
        for k in 0..n3 {
            for j in 0..n2 {
                for i in 0..n1 {
                    out.push([coord(0, i), coord(1, j), coord(2, k)]);
                }
            }
        }
        out
    }

    pub fn min_height(&self) -> f64 {
        self.origin[2].min(self.origin[2] + if self.resolution[2] > 1 { self.extent[2] } else { 0.0 })
    }

    pub fn max_height(&self) -> f64 {
        self.origin[2].max(self.origin[2] + if self.resolution[2] > 1 { self.extent[2] } else { 0.0 })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropagateSource {
    Random,
    Plane,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    /// Every key as written, for the metadata echo.
    pub entries: BTreeMap<String, String>,
    pub lambda: f64,
    pub mu: f64,
    pub omega: f64,
    pub incidence: Option<Incidence>,
    pub grid: Option<Grid>,
    pub quantity: Quantity,
    pub tolerance: Option<f64>,
    pub max_panels: Option<usize>,
    pub seed: u64,
    pub propagate_source: PropagateSource,
    pub cell_length: f64,
    pub cell_n: usize,
    pub heights: Vec<f64>,
    pub groups: Option<Vec<String>>,
}

fn parse_err(key: &str, value: &str, what: &str) -> CliError {
    CliError::Parse(format!("{key} = {value}: expected {what}"))
}

fn real(key: &str, v: &str) -> Result<f64, CliError> {
    v.trim().parse::<f64>().map_err(|_| parse_err(key, v, "a real number"))
}

fn reals<const N: usize>(key: &str, v: &str) -> Result<[f64; N], CliError> {
    let parts: Vec<&str> = v.split(',').collect();
    if parts.len() != N {
        return Err(parse_err(key, v, &format!("{N} comma-separated reals")));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| parse_err(key, v, "real numbers"))?;
    }
    Ok(out)
}

fn list(key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    v.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| parse_err(key, v, "a list of reals"))).collect()
}

/// `re` or `re,im`.
fn complex(key: &str, v: &str) -> Result<Complex64, CliError> {
    match v.split(',').count() {
        1 => Ok(c(real(key, v)?, 0.0)),
        2 => {
            let [re, im] = reals::<2>(key, v)?;
            Ok(c(re, im))
        }
        _ => Err(parse_err(key, v, "a complex number written re or re,im")),
    }
}

fn integer(key: &str, v: &str) -> Result<u64, CliError> {
    v.trim().parse::<u64>().map_err(|_| parse_err(key, v, "a non-negative integer"))
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(CliError::Parse(format!("line {}: unknown key `{key}`", lineno + 1)));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(CliError::Parse(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
        }
        Self::from_entries(entries)
    }

    fn from_entries(entries: BTreeMap<String, String>) -> Result<Self, CliError> {
        let get = |k: &str| entries.get(k).map(String::as_str);
        let real_or = |k: &str, d: f64| get(k).map_or(Ok(d), |v| real(k, v));
        let complex_or = |k: &str, d: Complex64| get(k).map_or(Ok(d), |v| complex(k, v));

        let incidence = match get("incidence.kind") {
            None => None,
            Some("plane") => Some(Incidence::Plane {
                theta: real_or("incidence.theta", 0.0)?,
                phi: real_or("incidence.phi", 0.0)?,
                c_p: complex_or("incidence.c_p", c(0.0, 0.0))?,
                c_s1: complex_or("incidence.c_s1", c(0.0, 0.0))?,
                c_s2: complex_or("incidence.c_s2", c(0.0, 0.0))?,
            }),
            Some("beam") => {
                let shear = match get("incidence.beam.kind").unwrap_or("p") {
                    "p" => false,
                    "s" => true,
                    other => return Err(parse_err("incidence.beam.kind", other, "p or s")),
                };
                let center = get("incidence.beam.center").map_or(Ok([0.0, 0.0]), |v| reals::<2>("incidence.beam.center", v))?;
                Some(Incidence::Beam {
                    shear,
                    center,
                    width: real_or("incidence.beam.width", 0.5)?,
                    weight: complex_or("incidence.beam.weight", c(1.0, 0.0))?,
                    q: [
                        complex_or("incidence.beam.q1", c(0.0, 0.0))?,
                        complex_or("incidence.beam.q2", c(1.0, 0.0))?,
                        complex_or("incidence.beam.q3", c(0.0, 0.0))?,
                    ],
                    support_radius: real_or("incidence.beam.support_radius", 0.9)?,
                    height: real_or("incidence.beam.height", 1.0)?,
                })
            }
            Some("point_source") => Some(Incidence::PointSource {
                position: get("incidence.source")
                    .ok_or_else(|| CliError::Parse("incidence.source is required for point_source".into()))
                    .and_then(|v| reals::<3>("incidence.source", v))?,
                force: get("incidence.force").map_or(Ok([0.0, 0.0, 1.0]), |v| reals::<3>("incidence.force", v))?,
            }),
            Some(other) => return Err(parse_err("incidence.kind", other, "plane, beam or point_source")),
        };

        let grid = match (get("grid.origin"), get("grid.extent"), get("grid.resolution")) {
            (None, None, None) => None,
            (o, e, r) => {
                let origin = o.map_or(Ok([0.0; 3]), |v| reals::<3>("grid.origin", v))?;
                let extent = e.map_or(Ok([0.0; 3]), |v| reals::<3>("grid.extent", v))?;
                let res = r.ok_or_else(|| CliError::Parse("grid.resolution is required with a grid".into()))?;
                let parts: Vec<&str> = res.split(',').collect();
                if parts.len() != 3 {
                    return Err(parse_err("grid.resolution", res, "3 comma-separated integers"));
                }
                let mut resolution = [0usize; 3];
                for (slot, p) in resolution.iter_mut().zip(parts) {
                    *slot = integer("grid.resolution", p)? as usize;
                }
                Some(Grid { origin, extent, resolution })
            }
        };

        let quantity = match get("output.quantity").unwrap_or("displacement") {
            "displacement" => Quantity::Displacement,
            "traction" => Quantity::Traction,
            "residual" => Quantity::Residual,
            other => return Err(parse_err("output.quantity", other, "displacement, traction or residual")),
        };
        let propagate_source = match get("propagate.source").unwrap_or("random") {
            "random" => PropagateSource::Random,
            "plane" => PropagateSource::Plane,
            other => return Err(parse_err("propagate.source", other, "random or plane")),
        };

        Ok(Scenario {
            lambda: real_or("medium.lambda", 2.0)?,
            mu: real_or("medium.mu", 1.0)?,
            omega: real_or("medium.omega", 2.0)?,
            incidence,
            grid,
            quantity,
            tolerance: get("quadrature.tolerance").map(|v| real("quadrature.tolerance", v)).transpose()?,
            max_panels: get("quadrature.max_panels")
                .map(|v| integer("quadrature.max_panels", v).map(|n| n as usize))
                .transpose()?,
            seed: get("seed").map_or(Ok(0), |v| integer("seed", v))?,
            propagate_source,
            cell_length: real_or("propagate.cell_length", 10.0)?,
            cell_n: get("propagate.n").map_or(Ok(16), |v| integer("propagate.n", v))? as usize,
            heights: get("propagate.heights").map_or(Ok(vec![0.5, 1.0]), |v| list("propagate.heights", v))?,
            groups: get("validate.groups").map(|v| v.split(',').map(|g| g.trim().to_string()).collect()),
            entries,
        })
    }

    /// Constraints that do not depend on the subcommand.
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(g) = &self.grid {
            if g.resolution.iter().any(|&n| n == 0) {
                return Err(CliError::Invariant("grid.resolution entries must be at least 1".into()));
            }
            for axis in 0..3 {
                if g.resolution[axis] >= 2 && !(g.extent[axis] > 0.0) {
                    return Err(CliError::Invariant(format!("grid axis {axis} is sampled but has extent {}", g.extent[axis])));
                }
            }
            if g.origin.iter().chain(&g.extent).any(|v| !v.is_finite()) {
                return Err(CliError::Invariant("grid coordinates must be finite".into()));
            }
        }
        if let Some(tol) = self.tolerance {
            if !(tol > 0.0) {
                return Err(CliError::Invariant(format!("quadrature.tolerance must be positive (got {tol})")));
            }
        }
        if self.heights.iter().any(|h| !(*h >= 0.0)) {
            return Err(CliError::Invariant("propagate.heights must be non-negative".into()));
        }
        if let Some(groups) = &self.groups {
            for g in groups {
                if !halfspace::validate::GROUPS.contains(&g.as_str()) {
                    return Err(CliError::Invariant(format!("unknown validation group `{g}`")));
                }
            }
        }
        Ok(())
    }

    /// The grid, required by the field-producing subcommands.
    pub fn require_grid(&self) -> Result<&Grid, CliError> {
        self.grid.as_ref().ok_or_else(|| CliError::Invariant("this subcommand needs grid.origin, grid.extent and grid.resolution".into()))
    }
}

//! Subcommand evaluation. Each command turns a validated scenario into
//! records (or a report) held in memory; writing happens afterwards.

use crate::error::CliError;
use crate::output::Record;
use crate::scenario::{Grid, Incidence, PropagateSource, Quantity, Scenario};
use halfspace::greens::{correction_integral, greens_halfspace, greens_halfspace_with_rule, QuadratureConfig};
use halfspace::linalg::{max_abs, real3, sub, Vec3};
use halfspace::spectral::{apply_dtn, propagate, CellGeometry, Direction, TraceGrid};
use halfspace::validate::{run_all, seeded_trace, SuiteConfig, ValidationReport};
use halfspace::waves::{
    default_step, incident_beam_modes, incident_plane_modes, navier_residual, reflected_beam_modes, reflected_plane_modes,
    traction_plane, BeamDensity, BeamQuadrature, BeamRule, Bump, ModeSum, PlaneWaveSpec, ShearWeight, SpectralBeamSpec,
};
use halfspace::ElasticMedium;
use rayon::prelude::*;
use serde_json::{json, Value};

pub struct Product {
    pub records: Option<Vec<Record>>,
    pub report: Option<ValidationReport>,
    /// Command-specific metadata (grid layout, chosen rules, …).
    pub info: Value,
}

fn medium(s: &Scenario) -> Result<ElasticMedium, CliError> {
    Ok(ElasticMedium::new(s.lambda, s.mu, s.omega)?)
}

fn quadrature(s: &Scenario) -> QuadratureConfig {
    let mut q = QuadratureConfig::default();
    if let Some(t) = s.tolerance {
        q.tolerance = t;
    }
    if let Some(n) = s.max_panels {
        q.max_panels = n;
    }
    q
}

fn grid_info(g: &Grid) -> Value {
    json!({
        "origin": g.origin,
        "extent": g.extent,
        "resolution": g.resolution,
        "order": "first axis fastest, then second, then third",
        "units": "same length unit as the medium parameters",
    })
}

fn plane_spec(s: &Scenario) -> Result<PlaneWaveSpec, CliError> {
    match &s.incidence {
        Some(Incidence::Plane { theta, phi, c_p, c_s1, c_s2 }) => Ok(PlaneWaveSpec::new(*theta, *phi, *c_p, *c_s1, *c_s2)?),
        _ => Err(CliError::Invariant("incidence.kind = plane is required".into())),
    }
}

/// Evaluates the requested quantity of a mode superposition on the grid.
fn mode_field(m: &ElasticMedium, field: &ModeSum, grid: &Grid, quantity: Quantity) -> Vec<Record> {
    let h = default_step(m);
    grid.points()
        .par_iter()
        .map(|&x| {
            let value = match quantity {
                Quantity::Displacement => field.eval(x),
                Quantity::Traction => traction_plane(m, field, x),
                Quantity::Residual => navier_residual(m, |p| field.eval(p), x, h),
            };
            Record { point: x, value }
        })
        .collect()
}

/// Total plane-wave field (incident + reflected) on the grid.
pub fn reflect(s: &Scenario) -> Result<Product, CliError> {
    let m = medium(s)?;
    let spec = plane_spec(s)?;
    let grid = s.require_grid()?;
    if grid.min_height() < 0.0 {
        return Err(CliError::Invariant("grid must lie in x3 ≥ 0".into()));
    }
    let mut total = incident_plane_modes(&m, &spec);
    total.extend(reflected_plane_modes(&m, &spec));
    Ok(Product {
        records: Some(mode_field(&m, &total, grid, s.quantity)),
        report: None,
        info: json!({ "grid": grid_info(grid), "field": "incident + reflected plane wave" }),
    })
}

fn beam_spec(m: &ElasticMedium, s: &Scenario) -> Result<SpectralBeamSpec, CliError> {
    match &s.incidence {
        Some(Incidence::Beam { shear, center, width, weight, q, support_radius, height }) => {
            let density = if *shear {
                BeamDensity::Shear(vec![Bump { center: *center, width: *width, weight: ShearWeight::Fixed(*q) }])
            } else {
                BeamDensity::Pressure(vec![Bump { center: *center, width: *width, weight: *weight }])
            };
            Ok(SpectralBeamSpec::new(m, density, *support_radius, *height)?)
        }
        _ => Err(CliError::Invariant("incidence.kind = beam is required".into())),
    }
}

/// Total beam field with one node set, doubled until the field at a
/// sample of grid points settles to the tolerance.
pub fn beam(s: &Scenario) -> Result<Product, CliError> {
    let m = medium(s)?;
    let spec = beam_spec(&m, s)?;
    let grid = s.require_grid()?;
    if grid.min_height() < 0.0 || grid.max_height() > spec.reference_height {
        return Err(CliError::Invariant(format!(
            "beam grid must lie in 0 ≤ x3 ≤ incidence.beam.height = {}",
            spec.reference_height
        )));
    }
    let mut quad = BeamQuadrature::default();
    if let Some(t) = s.tolerance {
        quad.tolerance = t;
    }
    let points = grid.points();
    let stride = (points.len() / 16).max(1);
    let probes: Vec<[f64; 3]> = points.iter().step_by(stride).copied().collect();
    let total = |rule: BeamRule| {
        let mut t = incident_beam_modes(&m, &spec, rule);
        t.extend(reflected_beam_modes(&m, &spec, rule));
        t
    };
    let sample = |f: &ModeSum| -> Vec<Vec3> { probes.iter().map(|&x| f.eval(x)).collect() };
    let mut rule = quad.initial;
    let mut field = total(rule);
    let mut prev = sample(&field);
    let mut diff = f64::INFINITY;
    for _ in 0..quad.max_doublings {
        let next_rule = BeamRule { radial: 2 * rule.radial, angular: 2 * rule.angular };
        let next_field = total(next_rule);
        let next = sample(&next_field);
        diff = prev.iter().zip(&next).map(|(a, b)| max_abs(&sub(a, b))).fold(0.0, f64::max);
        rule = next_rule;
        field = next_field;
        prev = next;
        if diff < quad.tolerance {
            break;
        }
    }
    if !(diff < quad.tolerance) {
        return Err(halfspace::Error::QuadratureTolerance { tolerance: quad.tolerance, estimate: diff }.into());
    }
    Ok(Product {
        records: Some(mode_field(&m, &field, grid, s.quantity)),
        report: None,
        info: json!({
            "grid": grid_info(grid),
            "field": "incident + reflected spectral beam",
            "beam_rule": { "radial": rule.radial, "angular": rule.angular, "last_change": diff },
        }),
    })
}

/// Total field of a point force at `y` above the rigid plane,
/// `u(x) = G_H(y, x) f` (the tensor is the field of its first argument's
/// source, evaluated at its second).
pub fn greens(s: &Scenario) -> Result<Product, CliError> {
    let m = medium(s)?;
    let (y, f) = match &s.incidence {
        Some(Incidence::PointSource { position, force }) => (*position, real3(*force)),
        _ => return Err(CliError::Invariant("incidence.kind = point_source is required".into())),
    };
    if !(y[2] > 0.0) {
        return Err(CliError::Invariant("the source must lie strictly above x3 = 0".into()));
    }
    let grid = s.require_grid()?;
    if !(grid.min_height() > 0.0) {
        return Err(CliError::Invariant("grid must lie strictly above x3 = 0".into()));
    }
    if s.quantity == Quantity::Traction {
        return Err(CliError::Invariant("traction output is not available for point sources".into()));
    }
    let q = quadrature(s);
    let h = default_step(&m);
    let records: Result<Vec<Record>, halfspace::Error> = grid
        .points()
        .par_iter()
        .map(|&x| {
            let value = match s.quantity {
                Quantity::Residual => {
                    let rule = correction_integral(&m, y, x, &q)?.rule;
                    let err = std::cell::Cell::new(None);
                    let r = navier_residual(
                        &m,
                        |p| match greens_halfspace_with_rule(&m, &rule, y, p) {
                            Ok(g) => g.mul_vec(&f),
                            Err(e) => {
                                err.set(Some(e));
                                [halfspace::Complex64::new(0.0, 0.0); 3]
                            }
                        },
                        x,
                        h,
                    );
                    if let Some(e) = err.into_inner() {
                        return Err(e);
                    }
                    r
                }
                _ => greens_halfspace(&m, y, x, &q)?.value.mul_vec(&f),
            };
            Ok(Record { point: x, value })
        })
        .collect();
    Ok(Product {
        records: Some(records?),
        report: None,
        info: json!({
            "grid": grid_info(grid),
            "field": "half-space Green tensor applied to the force",
            "source": y,
            "force": s.entries.get("incidence.force").cloned().unwrap_or_else(|| "0,0,1".into()),
        }),
    })
}

/// Upward angular spectrum propagation of a periodic trace to the listed
/// heights; records are the cell samples at each height.
pub fn propagate_cmd(s: &Scenario) -> Result<Product, CliError> {
    let m = medium(s)?;
    if s.quantity == Quantity::Residual {
        return Err(CliError::Invariant("propagate supports displacement and traction output".into()));
    }
    let trace = match s.propagate_source {
        PropagateSource::Random => seeded_trace(s.seed, s.cell_length, s.cell_n)?,
        PropagateSource::Plane => {
            let spec = plane_spec(s)?;
            let reflected = reflected_plane_modes(&m, &spec);
            let alphas: Vec<[f64; 2]> = reflected.modes.iter().map(|p| [p.wavevector[0].re, p.wavevector[1].re]).collect();
            if alphas.windows(2).any(|w| w[0] != w[1]) {
                return Err(CliError::Invariant("plane source needs a single incident wave type (P or S)".into()));
            }
            let alpha = alphas.first().copied().unwrap_or([0.0, 0.0]);
            let g = CellGeometry::new(s.cell_length, s.cell_n, alpha, 0.0)?;
            TraceGrid::from_fn(g, |p| reflected.eval([p[0], p[1], 0.0]))
        }
    };
    let mut records = Vec::new();
    for &h in &s.heights {
        let up = propagate(&m, &trace, h, Direction::Up)?;
        let values = match s.quantity {
            Quantity::Traction => apply_dtn(&m, &up, Direction::Up),
            _ => up,
        };
        for i in 0..trace.n {
            for j in 0..trace.n {
                let p = trace.point(i, j);
                records.push(Record { point: [p[0], p[1], h], value: values.values[i * trace.n + j] });
            }
        }
    }
    Ok(Product {
        records: Some(records),
        report: None,
        info: json!({
            "cell": {
                "length": s.cell_length,
                "n": s.cell_n,
                "bloch_phase": trace.alpha,
                "heights": s.heights,
                "order": "height, then first index, then second index fastest",
            },
            "field": "upward angular spectrum extension of the trace",
        }),
    })
}

pub fn validate(s: &Scenario) -> Result<Product, CliError> {
    let m = medium(s)?;
    let config = SuiteConfig { seed: s.seed, groups: s.groups.clone(), quadrature: quadrature(s) };
    let report = run_all(&m, &config);
    Ok(Product { records: None, report: Some(report), info: json!({ "groups": s.groups }) })
}

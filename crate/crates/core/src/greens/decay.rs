//! Far-field decay of the half-space correction along upward rays.

use super::free::scalar_green;
use super::halfspace::{correction_integral, QuadratureConfig};
use crate::error::{Error, Result};
use crate::medium::ElasticMedium;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub radii: Vec<f64>,
    /// Frobenius norms of `U_p`, `U_s` and `U = U_p + U_s` at `r · direction`.
    pub magnitude_p: Vec<f64>,
    pub magnitude_s: Vec<f64>,
    pub magnitude: Vec<f64>,
    /// Least-squares slopes of `log |·|` against `log r`.
    pub slope_p: f64,
    pub slope_s: f64,
    pub slope: f64,
    /// Same fit for the scalar `e^{iκ_p r}/(4πr)` on the same radii.
    pub reference_slope: f64,
    pub error_estimate: f64,
}

/// Slope of the least-squares line through `(ln x, ln y)`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Evaluates the correction `U(r·d, y)` for each radius and fits its decay
/// rate. `radii` must increase and start at `5/κ_p` or beyond.
pub fn kupradze_decay_diagnostic(
    medium: &ElasticMedium,
    config: &QuadratureConfig,
    direction: [f64; 3],
    source: [f64; 3],
    radii: &[f64],
) -> Result<DecayReport> {
    let len = (direction[0].powi(2) + direction[1].powi(2) + direction[2].powi(2)).sqrt();
    if (len - 1.0).abs() > 1e-12 || direction[2] <= 0.0 {
        return Err(Error::InvalidInput("direction must be a unit vector with positive third component".into()));
    }
    if radii.len() < 2 || radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] < 5.0 / medium.kappa_p {
        return Err(Error::InvalidInput("radii must increase, number at least two and start at 5/κ_p or beyond".into()));
    }
    let mut report = DecayReport {
        radii: radii.to_vec(),
        magnitude_p: Vec::new(),
        magnitude_s: Vec::new(),
        magnitude: Vec::new(),
        slope_p: 0.0,
        slope_s: 0.0,
        slope: 0.0,
        reference_slope: 0.0,
        error_estimate: 0.0,
    };
    for &r in radii {
        let x = direction.map(|d| r * d);
        let u = correction_integral(medium, x, source, config)?;
        report.magnitude_p.push(u.p.norm());
        report.magnitude_s.push(u.s.norm());
        report.magnitude.push((u.p + u.s).norm());
        report.error_estimate = report.error_estimate.max(u.error_estimate);
    }
    report.slope_p = loglog_slope(radii, &report.magnitude_p);
    report.slope_s = loglog_slope(radii, &report.magnitude_s);
    report.slope = loglog_slope(radii, &report.magnitude);
    let reference: Vec<f64> = radii.iter().map(|&r| scalar_green(medium.kappa_p, r).norm()).collect();
    report.reference_slope = loglog_slope(radii, &reference);
    Ok(report)
}

//! Half-space Green tensor with zero displacement on `x₃ = 0`:
//!
//! ```text
//! G_H(x, y) = G(x, y) − G(x̃, y) + U(x, y),   x̃ = (x', −x₃),
//! U(x, y) = i/(4π²ω²) ∫ (βγ+|ξ|²)⁻¹ [M̃_p e^{iβy₃} + M̃_s e^{iγy₃}]
//!                        (e^{iβx₃} − e^{iγx₃}) e^{iξ·(y'−x')} dξ
//! ```
//!
//! with `M̃_p = M_p V`, `M̃_s = M_s V`. The integral is evaluated in polar
//! coordinates. The radial axis is split at κ_p, (κ_p+κ_s)/2 and κ_s; each
//! piece is parameterized by `ρ = κ sin t` (inside a circle) or
//! `ρ = κ cosh t` (outside), which removes the square-root behaviour of β
//! and γ at the circles, and integrated by adaptive Gauss–Kronrod bisection.
//! The angular integral is a trapezoid rule; since the angular dependence
//! is `e^{iρ R cos(θ−φ)}` times a quadratic trigonometric polynomial, only
//! six angular moments are needed per radius.

use super::free::greens_free;
use crate::error::{Error, Result};
use crate::linalg::{c, Mat, Mat3, I};
use crate::medium::ElasticMedium;
use crate::quadrature::{integrate_adaptive, kronrod_nodes, Segment};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum XiMaxPolicy {
    /// Smallest radius with `e^{−√(ξ²−κ_s²) h} (κ_s ξ)² ≤ margin · tolerance`
    /// for `h = x₃ + y₃`, and at least `2κ_s`.
    EvanescentDecay { margin: f64 },
    /// A fixed truncation radius.
    Fixed(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Target for the summed panel error estimates.
    pub tolerance: f64,
    pub xi_max_policy: XiMaxPolicy,
    /// Refinement budget: total number of radial panels.
    pub max_panels: usize,
    /// Lower bound for the angular trapezoid node count.
    pub min_angular: usize,
    /// `h_min = min_height_factor / κ_s`; smaller `x₃ + y₃` is rejected.
    pub min_height_factor: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            tolerance: 1e-8,
            xi_max_policy: XiMaxPolicy::EvanescentDecay { margin: 1e-2 },
            max_panels: 4000,
            min_angular: 16,
            min_height_factor: 1e-3,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        QuadratureConfig { tolerance, ..Self::default() }
    }

    pub fn min_height(&self, medium: &ElasticMedium) -> f64 {
        self.min_height_factor / medium.kappa_s
    }

    /// Truncation radius for decay height `h`.
    pub fn xi_max(&self, medium: &ElasticMedium, h: f64) -> f64 {
        match self.xi_max_policy {
            XiMaxPolicy::Fixed(r) => r,
            XiMaxPolicy::EvanescentDecay { margin } => {
                let ks = medium.kappa_s;
                let target = (margin * self.tolerance).ln();
                let excess = |xi: f64| -(xi * xi - ks * ks).sqrt() * h + 2.0 * (ks * xi).ln() - target;
                let mut hi = 2.0 * ks;
                if excess(hi) <= 0.0 {
                    return hi;
                }
                while excess(hi) > 0.0 {
                    hi *= 2.0;
                }
                let mut lo = hi / 2.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if excess(mid) > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-12 * hi {
                        break;
                    }
                }
                hi
            }
        }
    }

    /// Angular trapezoid nodes at radius `rho` for a lateral offset `r`:
    /// `max(min_angular, 8⌈κ_s r⌉)`, raised where `ρ r` exceeds that so the
    /// rule stays past the Bessel cut-off of `e^{iρ r cos θ}`.
    pub fn n_angular(&self, medium: &ElasticMedium, rho: f64, r: f64) -> usize {
        let base = self.min_angular.max(8 * (medium.kappa_s * r).ceil() as usize);
        let z = rho * r;
        let bessel = (z + 8.0 * z.cbrt()).ceil() as usize + 16;
        let n = base.max(bessel);
        n + n % 2
    }
}

/// Half-space tensor split into its three terms:
/// `value = free − image + correction`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreensParts {
    pub free: Mat3,
    pub image: Mat3,
    pub correction: Mat3,
    /// P and S pieces of the correction.
    pub correction_p: Mat3,
    pub correction_s: Mat3,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreensResult {
    pub value: Mat3,
    pub error_estimate: f64,
    pub parts: Option<GreensParts>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum RadialMap {
    /// `ρ = κ sin t`
    Sin(f64),
    /// `ρ = κ cosh t`
    Cosh(f64),
}

impl RadialMap {
    /// `(ρ, dρ/dt)`
    pub(crate) fn eval(self, t: f64) -> (f64, f64) {
        match self {
            RadialMap::Sin(k) => (k * t.sin(), k * t.cos()),
            RadialMap::Cosh(k) => (k * t.cosh(), k * t.sinh()),
        }
    }
}

/// Branch-adapted radial pieces covering `[0, xi_max]`.
///
/// `rate` is the radial oscillation rate expected inside the propagating
/// disk and `lateral` the one beyond it; both only seed the initial panel
/// counts.
pub(crate) fn radial_segments(medium: &ElasticMedium, xi_max: f64, rate: f64, lateral: f64) -> Vec<(Segment, RadialMap)> {
    let (kp, ks) = (medium.kappa_p, medium.kappa_s);
    let mid = 0.5 * (kp + ks);
    let panels = |span: f64, rate: f64| 2 + ((span * rate) / PI).ceil().min(400.0) as usize;
    let mut out = vec![
        (Segment { a: 0.0, b: FRAC_PI_2, initial_panels: panels(kp, rate) }, RadialMap::Sin(kp)),
        (Segment { a: 0.0, b: (mid / kp).acosh(), initial_panels: panels(mid - kp, rate) }, RadialMap::Cosh(kp)),
        (Segment { a: (mid / ks).asin(), b: FRAC_PI_2, initial_panels: panels(ks - mid, rate) }, RadialMap::Sin(ks)),
    ];
    if xi_max > ks {
        out.push((
            Segment {
                a: 0.0,
                b: (xi_max / ks).acosh(),
                initial_panels: 2 + panels(xi_max - ks, 0.5 * lateral),
            },
            RadialMap::Cosh(ks),
        ));
    }
    out
}

/// Radial nodes of a converged correction integral, reusable at nearby
/// points (every node contributes an exact plane-mode superposition).
#[derive(Clone, Debug, PartialEq)]
pub struct RadialRule {
    pub nodes: Vec<RadialNode>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialNode {
    pub rho: f64,
    /// Radial weight including `dρ/dt`.
    pub weight: f64,
    pub n_angular: usize,
}

impl RadialRule {
    /// The correction pieces `(U_p, U_s)` at `(x, y)` with this rule.
    pub fn apply(&self, medium: &ElasticMedium, x: [f64; 3], y: [f64; 3]) -> (Mat3, Mat3) {
        let mut up = Mat3::zeros();
        let mut us = Mat3::zeros();
        let delta = [y[0] - x[0], y[1] - x[1]];
        for node in &self.nodes {
            let mom = angular_moments(node.rho, delta, node.n_angular);
            let (p, s) = correction_density(medium, node.rho, x[2], y[2], &mom);
            up.add_scaled(&p, c(node.weight, 0.0));
            us.add_scaled(&s, c(node.weight, 0.0));
        }
        (up, us)
    }
}

/// `∫_0^{2π} e^{iρ(cosθ, sinθ)·Δ} {1, cos, sin, cos², cos·sin, sin²} dθ`
/// by the n-point trapezoid rule.
pub(crate) fn angular_moments(rho: f64, delta: [f64; 2], n: usize) -> [Complex64; 6] {
    let mut m = [c(0.0, 0.0); 6];
    let w = TAU / n as f64;
    for k in 0..n {
        let (st, ct) = (w * k as f64).sin_cos();
        let e = Complex64::from_polar(1.0, rho * (ct * delta[0] + st * delta[1]));
        m[0] += e;
        m[1] += e * ct;
        m[2] += e * st;
        m[3] += e * (ct * ct);
        m[4] += e * (ct * st);
        m[5] += e * (st * st);
    }
    m.map(|v| v * w)
}

/// Exact moments for `Δ = 0`.
fn axial_moments() -> [Complex64; 6] {
    [c(TAU, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(PI, 0.0), c(0.0, 0.0), c(PI, 0.0)]
}

/// Angular integral of the correction integrand at radius ρ, including the
/// polar Jacobian ρ and the prefactor i/(4π²ω²).
fn correction_density(medium: &ElasticMedium, rho: f64, x3: f64, y3: f64, m: &[Complex64; 6]) -> (Mat3, Mat3) {
    let s = medium.symbols([rho, 0.0]);
    let (b, g, d) = (s.beta, s.gamma, s.denom);
    let pref = I / (4.0 * PI * PI * medium.omega2()) * rho;
    let jump = ((I * b * x3).exp() - (I * g * x3).exp()) / d;
    let cp = pref * (I * b * y3).exp() * jump;
    let cs = pref * (I * g * y3).exp() * jump;
    let [m0, mc, ms, mcc, mcs, mss] = *m;
    let r2 = rho * rho;
    let r3 = r2 * rho;
    // Angular integrals of M̃_p = (ξ, β) ⊗ (γξ₁, γξ₂, |ξ|²) and of V.
    let mt_p = Mat([
        [g * r2 * mcc, g * r2 * mcs, mc * r3],
        [g * r2 * mcs, g * r2 * mss, ms * r3],
        [b * g * rho * mc, b * g * rho * ms, b * r2 * m0],
    ]);
    let zero = c(0.0, 0.0);
    let v = Mat([[zero, zero, mc * rho], [zero, zero, ms * rho], [mc * rho, ms * rho, zero]]);
    let mt_s = v.scale(d) - mt_p;
    (mt_p.scale(cp), mt_s.scale(cs))
}

/// Converged correction integral with its error estimate and node set.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionIntegral {
    pub p: Mat3,
    pub s: Mat3,
    pub error_estimate: f64,
    pub rule: RadialRule,
}

fn check_heights(medium: &ElasticMedium, x3: f64, y3: f64, config: &QuadratureConfig) -> Result<()> {
    if !(x3 >= 0.0 && y3 >= 0.0) {
        return Err(Error::InvalidInput(format!("points must satisfy x3, y3 ≥ 0 (got {x3}, {y3})")));
    }
    let h = x3 + y3;
    let minimum = config.min_height(medium);
    if h < minimum {
        return Err(Error::SlowConvergence { height: h, minimum });
    }
    Ok(())
}

fn tail_estimate(medium: &ElasticMedium, xi_max: f64, h: f64) -> f64 {
    let ks = medium.kappa_s;
    if xi_max <= ks {
        return f64::INFINITY;
    }
    let q = (xi_max * xi_max - ks * ks).sqrt();
    (-q * h).exp() * (ks * xi_max).powi(2) / (4.0 * PI * PI * medium.omega2())
}

fn integrate_correction(
    medium: &ElasticMedium,
    x3: f64,
    y3: f64,
    lateral: f64,
    config: &QuadratureConfig,
    density: impl Fn(f64, usize) -> (Mat3, Mat3),
) -> Result<CorrectionIntegral> {
    check_heights(medium, x3, y3, config)?;
    let h = x3 + y3;
    let xi_max = config.xi_max(medium, h);
    let segments = radial_segments(medium, xi_max, lateral + h, lateral);
    let segs: Vec<Segment> = segments.iter().map(|s| s.0).collect();
    let maps: Vec<RadialMap> = segments.iter().map(|s| s.1).collect();
    let adaptive = integrate_adaptive(
        &segs,
        |k, t| {
            let (rho, jac) = maps[k].eval(t);
            let (p, s) = density(rho, config.n_angular(medium, rho, lateral));
            (p.scale_re(jac), s.scale_re(jac))
        },
        config.tolerance,
        config.max_panels,
    )?;
    let mut nodes = Vec::with_capacity(adaptive.panels.len() * 15);
    for panel in &adaptive.panels {
        for (t, w) in kronrod_nodes(panel.a, panel.b) {
            let (rho, jac) = maps[panel.segment].eval(t);
            nodes.push(RadialNode { rho, weight: w * jac, n_angular: config.n_angular(medium, rho, lateral) });
        }
    }
    let (p, s) = adaptive.value;
    Ok(CorrectionIntegral {
        p,
        s,
        error_estimate: adaptive.error + tail_estimate(medium, xi_max, h),
        rule: RadialRule { nodes },
    })
}

/// The correction `U(x, y) = U_p + U_s` by the full polar quadrature.
pub fn correction_integral(medium: &ElasticMedium, x: [f64; 3], y: [f64; 3], config: &QuadratureConfig) -> Result<CorrectionIntegral> {
    let delta = [y[0] - x[0], y[1] - x[1]];
    let lateral = delta[0].hypot(delta[1]);
    integrate_correction(medium, x[2], y[2], lateral, config, |rho, n| {
        correction_density(medium, rho, x[2], y[2], &angular_moments(rho, delta, n))
    })
}

/// The correction for vertically aligned points (`x' = y'`), where the
/// angular integral is known in closed form and only a radial integral
/// remains.
pub fn correction_axial(medium: &ElasticMedium, x3: f64, y3: f64, config: &QuadratureConfig) -> Result<CorrectionIntegral> {
    let m = axial_moments();
    integrate_correction(medium, x3, y3, 0.0, config, |rho, _| correction_density(medium, rho, x3, y3, &m))
}

fn image_point(x: [f64; 3]) -> [f64; 3] {
    [x[0], x[1], -x[2]]
}

pub fn greens_halfspace(medium: &ElasticMedium, x: [f64; 3], y: [f64; 3], config: &QuadratureConfig) -> Result<GreensResult> {
    check_heights(medium, x[2], y[2], config)?;
    let free = greens_free(medium, x, y)?;
    let image = greens_free(medium, image_point(x), y)?;
    let corr = correction_integral(medium, x, y, config)?;
    Ok(assemble(free, image, &corr))
}

/// Same as [`greens_halfspace`] but reusing a fixed radial rule for the
/// correction (no error estimate is produced).
pub fn greens_halfspace_with_rule(medium: &ElasticMedium, rule: &RadialRule, x: [f64; 3], y: [f64; 3]) -> Result<Mat3> {
    let free = greens_free(medium, x, y)?;
    let image = greens_free(medium, image_point(x), y)?;
    let (p, s) = rule.apply(medium, x, y);
    Ok(free - image + p + s)
}

fn assemble(free: Mat3, image: Mat3, corr: &CorrectionIntegral) -> GreensResult {
    let correction = corr.p + corr.s;
    GreensResult {
        value: free - image + correction,
        error_estimate: corr.error_estimate,
        parts: Some(GreensParts { free, image, correction, correction_p: corr.p, correction_s: corr.s }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_max_satisfies_policy() {
        let m = ElasticMedium::reference();
        let cfg = QuadratureConfig::default();
        for h in [0.01, 0.3, 2.0, 40.0] {
            let r = cfg.xi_max(&m, h);
            let ks = m.kappa_s;
            let v = (-(r * r - ks * ks).sqrt() * h).exp() * (ks * r).powi(2);
            assert!(v <= cfg.tolerance * (1.0 + 1e-9), "h={h}: {v}");
            assert!(r >= 2.0 * ks);
        }
    }

    #[test]
    fn vanishes_on_the_boundary_in_x() {
        let m = ElasticMedium::reference();
        let g = greens_halfspace(&m, [0.3, 0.1, 0.0], [0.0, 0.2, 0.7], &QuadratureConfig::default()).unwrap();
        assert!(g.value.max_abs() < 1e-14);
    }

    #[test]
    fn rejects_low_points() {
        let m = ElasticMedium::reference();
        let cfg = QuadratureConfig::default();
        let r = greens_halfspace(&m, [0.0, 0.0, 1e-4], [0.5, 0.0, 1e-4], &cfg);
        assert!(matches!(r, Err(Error::SlowConvergence { .. })));
        assert!(greens_halfspace(&m, [0.0, 0.0, -1.0], [0.5, 0.0, 1.0], &cfg).is_err());
    }

    #[test]
    fn moments_reduce_to_closed_form_on_axis() {
        let m = angular_moments(3.0, [0.0, 0.0], 16);
        for (a, b) in m.iter().zip(axial_moments()) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}

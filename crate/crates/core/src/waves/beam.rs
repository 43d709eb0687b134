//! Spectral beams: downward superpositions of propagating plane modes with a
//! smooth compactly supported density in the horizontal wavevector.
//!
//! ```text
//! P:  u(x) = ∫ (ξ, −β) g(ξ) e^{i(ξ·x' − β(x₃ − b))} dξ
//! S:  u(x) = ∫ (ξ, −γ) × q(ξ) e^{i(ξ·x' − γ(x₃ − b))} dξ
//! ```
//!
//! Densities are finite sums of smooth bumps. Integrals are evaluated in
//! polar coordinates about each bump centre with Gauss–Legendre nodes in the
//! radius and the trapezoid rule in the angle; both counts are doubled until
//! successive results agree to the tolerance.

use super::{reflect_trace_mode, ModeSum, PlaneMode};
use crate::error::{Error, Result};
use crate::linalg::{c, cross, max_abs, scale, sub, Vec3, I};
use crate::medium::ElasticMedium;
use crate::quadrature::gauss_legendre;
use crate::spectral::dtn_symbol;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// `∫_{|s|<1} exp(−1/(1−|s|²)) ds = π (e⁻¹ − E₁(1))`.
const BUMP_MASS: f64 = PI * 0.148_495_506_775_922_05;

/// Unit-mass smooth bump of radius `width` about `center`, scaled by
/// `weight`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump<T> {
    pub center: [f64; 2],
    pub width: f64,
    pub weight: T,
}

/// Bump profile as a function of the normalized radius `r = |ξ−c|/w`,
/// including the `1/(w² · mass)` normalization.
fn bump_profile(r: f64, width: f64) -> f64 {
    if r >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - r * r)).exp() / (BUMP_MASS * width * width)
    }
}

impl<T> Bump<T> {
    /// Scalar profile value at `xi` (unit mass).
    pub fn profile(&self, xi: [f64; 2]) -> f64 {
        let r = ((xi[0] - self.center[0]).powi(2) + (xi[1] - self.center[1]).powi(2)).sqrt() / self.width;
        bump_profile(r, self.width)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BeamDensity {
    /// Scalar density `g` of a compressional beam.
    Pressure(Vec<Bump<Complex64>>),
    /// Vector density `q` of a shear beam.
    Shear(Vec<Bump<ShearWeight>>),
}

/// Polarization of a shear bump.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ShearWeight {
    /// Constant vector `q`.
    Fixed(Vec3),
    /// `q(ξ) = a (ξ, −γ(ξ))`, parallel to the mode's own wavevector; the
    /// resulting beam vanishes identically.
    AlongWavevector(Complex64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BeamKind {
    P,
    S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralBeamSpec {
    pub density: BeamDensity,
    pub support_radius: f64,
    pub reference_height: f64,
}

impl SpectralBeamSpec {
    /// Checks that every bump lies inside `support_radius` and that the
    /// support stays within `0.99 κ` of the relevant propagating disk.
    pub fn new(medium: &ElasticMedium, density: BeamDensity, support_radius: f64, reference_height: f64) -> Result<Self> {
        let spec = SpectralBeamSpec { density, support_radius, reference_height };
        let kappa = match spec.kind() {
            BeamKind::P => medium.kappa_p,
            BeamKind::S => medium.kappa_s,
        };
        if !(support_radius > 0.0) || support_radius > 0.99 * kappa {
            return Err(Error::InvalidInput(format!(
                "support radius {support_radius} must lie in (0, 0.99·κ = {}]",
                0.99 * kappa
            )));
        }
        if !reference_height.is_finite() {
            return Err(Error::InvalidInput("reference height must be finite".into()));
        }
        for (center, width) in spec.bumps() {
            if !(width > 0.0) || center[0].hypot(center[1]) + width > support_radius * (1.0 + 1e-12) {
                return Err(Error::InvalidInput(format!(
                    "bump at {center:?} with width {width} leaves the support disk"
                )));
            }
        }
        Ok(spec)
    }

    pub fn kind(&self) -> BeamKind {
        match self.density {
            BeamDensity::Pressure(_) => BeamKind::P,
            BeamDensity::Shear(_) => BeamKind::S,
        }
    }

    fn bumps(&self) -> Vec<([f64; 2], f64)> {
        match &self.density {
            BeamDensity::Pressure(b) => b.iter().map(|b| (b.center, b.width)).collect(),
            BeamDensity::Shear(b) => b.iter().map(|b| (b.center, b.width)).collect(),
        }
    }
}

/// Node counts of a fixed polar rule applied to every bump.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BeamRule {
    pub radial: usize,
    pub angular: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamQuadrature {
    pub tolerance: f64,
    pub initial: BeamRule,
    pub max_doublings: usize,
}

impl Default for BeamQuadrature {
    fn default() -> Self {
        BeamQuadrature {
            tolerance: 1e-8,
            initial: BeamRule { radial: 8, angular: 16 },
            max_doublings: 7,
        }
    }
}

/// One quadrature node of the density: wavevector, weight × density value.
struct DensityNode {
    xi: [f64; 2],
    /// `g(ξ) dξ` for P beams, `q(ξ) dξ` for S beams.
    value: Vec3,
}

fn density_nodes(medium: &ElasticMedium, spec: &SpectralBeamSpec, rule: BeamRule) -> Vec<DensityNode> {
    let (r_nodes, r_weights) = gauss_legendre(rule.radial);
    let dt = TAU / rule.angular as f64;
    let mut out = Vec::new();
    let mut push = |center: [f64; 2], width: f64, value: &dyn Fn([f64; 2]) -> Vec3| {
        for (x, wr) in r_nodes.iter().zip(&r_weights) {
            let r = 0.5 * (x + 1.0);
            // dξ = w² r dr dt; the profile carries 1/(w² · mass).
            let radial_weight = 0.5 * wr * width * width * r * bump_profile(r, width) * dt;
            for k in 0..rule.angular {
                let (st, ct) = (dt * k as f64).sin_cos();
                let xi = [center[0] + width * r * ct, center[1] + width * r * st];
                out.push(DensityNode { xi, value: scale(&value(xi), c(radial_weight, 0.0)) });
            }
        }
    };
    match &spec.density {
        BeamDensity::Pressure(bumps) => {
            for b in bumps {
                push(b.center, b.width, &|_| [b.weight, c(0.0, 0.0), c(0.0, 0.0)]);
            }
        }
        BeamDensity::Shear(bumps) => {
            for b in bumps {
                match b.weight {
                    ShearWeight::Fixed(q) => push(b.center, b.width, &move |_| q),
                    ShearWeight::AlongWavevector(a) => push(b.center, b.width, &move |xi| {
                        let g = medium.symbols(xi).gamma;
                        scale(&[c(xi[0], 0.0), c(xi[1], 0.0), -g], a)
                    }),
                }
            }
        }
    }
    out
}

/// Incident beam discretized by a fixed rule into downward plane modes.
pub fn incident_beam_modes(medium: &ElasticMedium, spec: &SpectralBeamSpec, rule: BeamRule) -> ModeSum {
    let b = spec.reference_height;
    let modes = density_nodes(medium, spec, rule)
        .into_iter()
        .map(|node| {
            let s = medium.symbols(node.xi);
            let (x1, x2) = (c(node.xi[0], 0.0), c(node.xi[1], 0.0));
            match spec.kind() {
                BeamKind::P => {
                    let k = [x1, x2, -s.beta];
                    PlaneMode { amplitude: scale(&k, node.value[0] * (I * s.beta * b).exp()), wavevector: k }
                }
                BeamKind::S => {
                    let k = [x1, x2, -s.gamma];
                    PlaneMode { amplitude: scale(&cross(&k, &node.value), (I * s.gamma * b).exp()), wavevector: k }
                }
            }
        })
        .collect();
    ModeSum::new(modes)
}

/// Reflection of the discretized incident beam: every node is reflected as
/// a plane mode, so the total field cancels on `x₃ = 0` node by node.
pub fn reflected_beam_modes(medium: &ElasticMedium, spec: &SpectralBeamSpec, rule: BeamRule) -> ModeSum {
    let mut out = ModeSum::default();
    for m in incident_beam_modes(medium, spec, rule).modes {
        let alpha = [m.wavevector[0].re, m.wavevector[1].re];
        out.modes.extend(reflect_trace_mode(medium, alpha, &m.amplitude));
    }
    out
}

/// Surface source density `p = Tu_in − 𝒯u_in` on `x₃ = 0` for a fixed rule.
///
/// P beams use the closed form `2iω²β/(βγ+|ξ|²) (−ξ, γ) g e^{iβb}`; S beams
/// apply `i(M⁻(ξ) − M(ξ))` to the incident trace amplitude.
pub fn source_density_with_rule(medium: &ElasticMedium, spec: &SpectralBeamSpec, x: [f64; 2], rule: BeamRule) -> Vec3 {
    let b = spec.reference_height;
    let w2 = medium.omega2();
    let mut out = [c(0.0, 0.0); 3];
    for node in density_nodes(medium, spec, rule) {
        let s = medium.symbols(node.xi);
        let (x1, x2) = (c(node.xi[0], 0.0), c(node.xi[1], 0.0));
        let e = Complex64::from_polar(1.0, node.xi[0] * x[0] + node.xi[1] * x[1]);
        let term = match spec.kind() {
            BeamKind::P => {
                let f = I * 2.0 * w2 * s.beta / s.denom * node.value[0] * (I * s.beta * b).exp() * e;
                scale(&[-x1, -x2, s.gamma], f)
            }
            BeamKind::S => {
                let a = scale(&cross(&[x1, x2, -s.gamma], &node.value), (I * s.gamma * b).exp() * e);
                let jump = dtn_symbol(medium, &s.flipped()) - dtn_symbol(medium, &s);
                scale(&jump.mul_vec(&a), I)
            }
        };
        for k in 0..3 {
            out[k] += term[k];
        }
    }
    out
}

fn refine(quad: &BeamQuadrature, mut eval: impl FnMut(BeamRule) -> Vec3) -> Result<Vec3> {
    let mut rule = quad.initial;
    let mut prev = eval(rule);
    let mut diff = f64::INFINITY;
    for _ in 0..quad.max_doublings {
        rule = BeamRule { radial: rule.radial * 2, angular: rule.angular * 2 };
        let next = eval(rule);
        diff = max_abs(&sub(&next, &prev));
        if diff < quad.tolerance {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureTolerance { tolerance: quad.tolerance, estimate: diff })
}

pub fn eval_incident_beam(medium: &ElasticMedium, spec: &SpectralBeamSpec, x: [f64; 3], quad: &BeamQuadrature) -> Result<Vec3> {
    if x[2] > spec.reference_height {
        return Err(Error::InvalidInput(format!(
            "incident beam is defined below its reference height {}, got x3 = {}",
            spec.reference_height, x[2]
        )));
    }
    refine(quad, |rule| incident_beam_modes(medium, spec, rule).eval(x))
}

pub fn eval_reflected_beam(medium: &ElasticMedium, spec: &SpectralBeamSpec, x: [f64; 3], quad: &BeamQuadrature) -> Result<Vec3> {
    if x[2] < 0.0 {
        return Err(Error::InvalidInput(format!("reflected beam needs x3 ≥ 0, got {}", x[2])));
    }
    refine(quad, |rule| reflected_beam_modes(medium, spec, rule).eval(x))
}

pub fn source_density_p(medium: &ElasticMedium, spec: &SpectralBeamSpec, x: [f64; 2], quad: &BeamQuadrature) -> Result<Vec3> {
    refine(quad, |rule| source_density_with_rule(medium, spec, x, rule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;

    #[test]
    fn bump_has_unit_mass() {
        let b = Bump { center: [0.1, -0.2], width: 0.3, weight: () };
        let (x, w) = gauss_legendre(200);
        let mut mass = 0.0;
        for (xi, wi) in x.iter().zip(&w) {
            let r = 0.5 * (xi + 1.0) * b.width;
            mass += 0.5 * wi * b.width * TAU * r * b.profile([b.center[0] + r, b.center[1]]);
        }
        assert!((mass - 1.0).abs() < 1e-10, "{mass}");
    }

    #[test]
    fn rejects_support_near_branch_circle() {
        let m = ElasticMedium::reference();
        let d = BeamDensity::Pressure(vec![Bump { center: [0.0, 0.0], width: 0.995, weight: c(1.0, 0.0) }]);
        assert!(SpectralBeamSpec::new(&m, d, 0.995, 1.0).is_err());
        let d = BeamDensity::Pressure(vec![Bump { center: [0.5, 0.0], width: 0.5, weight: c(1.0, 0.0) }]);
        assert!(SpectralBeamSpec::new(&m, d, 0.9, 1.0).is_err());
    }

    #[test]
    fn shear_density_along_wavevector_gives_zero_field() {
        let m = ElasticMedium::reference();
        let bump = Bump { center: [0.3, -0.2], width: 0.5, weight: ShearWeight::AlongWavevector(c(1.0, 2.0)) };
        let spec = SpectralBeamSpec::new(&m, BeamDensity::Shear(vec![bump]), 1.0, 0.5).unwrap();
        let u = eval_incident_beam(&m, &spec, [0.4, 0.1, -0.3], &BeamQuadrature::default()).unwrap();
        assert!(max_abs(&u) < 1e-15);
    }

    #[test]
    fn zero_density_gives_zero_field() {
        let m = ElasticMedium::reference();
        let spec = SpectralBeamSpec::new(&m, BeamDensity::Pressure(vec![]), 0.5, 1.0).unwrap();
        let q = BeamQuadrature::default();
        assert_eq!(eval_incident_beam(&m, &spec, [0.1, 0.2, 0.3], &q).unwrap(), [ZERO; 3]);
        assert_eq!(eval_reflected_beam(&m, &spec, [0.1, 0.2, 0.3], &q).unwrap(), [ZERO; 3]);
        assert_eq!(source_density_p(&m, &spec, [0.1, 0.2], &q).unwrap(), [ZERO; 3]);
    }
}

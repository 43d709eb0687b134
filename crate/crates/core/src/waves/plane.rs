//! Incident plane waves and their reflection with mode conversion.

use super::{reflect_trace_mode, ModeSum, PlaneMode};
use crate::error::{Error, Result};
use crate::linalg::{c, real3, scale, Vec3};
use crate::medium::ElasticMedium;
use num_complex::Complex64;

/// Superposition `c_p u_p + c_s1 u_s1 + c_s2 u_s2` of downward plane waves
/// travelling along `d = (sinθ cosφ, sinθ sinφ, −cosθ)`:
/// `u_p = d e^{iκ_p x·d}` and `u_sj = d_j⊥ e^{iκ_s x·d}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWaveSpec {
    pub theta: f64,
    pub phi: f64,
    pub c_p: Complex64,
    pub c_s1: Complex64,
    pub c_s2: Complex64,
    pub d1_perp: [f64; 3],
    pub d2_perp: [f64; 3],
}

impl PlaneWaveSpec {
    /// Uses the polarizations `d₁⊥ = ∂d/∂θ = (cosθ cosφ, cosθ sinφ, sinθ)`
    /// and `d₂⊥ = (−sinφ, cosφ, 0)`.
    pub fn new(theta: f64, phi: f64, c_p: Complex64, c_s1: Complex64, c_s2: Complex64) -> Result<Self> {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::with_polarizations(theta, phi, c_p, c_s1, c_s2, [ct * cp, ct * sp, st], [-sp, cp, 0.0])
    }

    pub fn with_polarizations(
        theta: f64,
        phi: f64,
        c_p: Complex64,
        c_s1: Complex64,
        c_s2: Complex64,
        d1_perp: [f64; 3],
        d2_perp: [f64; 3],
    ) -> Result<Self> {
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidInput(format!("incidence angle {theta} outside [0, π/2)")));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidInput("azimuth must be finite".into()));
        }
        let spec = PlaneWaveSpec { theta, phi, c_p, c_s1, c_s2, d1_perp, d2_perp };
        let d = spec.direction();
        for (name, p) in [("d1_perp", d1_perp), ("d2_perp", d2_perp)] {
            let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            let along = p[0] * d[0] + p[1] * d[1] + p[2] * d[2];
            if (norm - 1.0).abs() > 1e-12 || along.abs() > 1e-12 {
                return Err(Error::InvalidInput(format!("{name} must be a unit vector orthogonal to d")));
            }
        }
        Ok(spec)
    }

    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, -ct]
    }
}

fn wavevector(kappa: f64, d: [f64; 3]) -> Vec3 {
    real3([kappa * d[0], kappa * d[1], kappa * d[2]])
}

/// The incident field as (up to) three plane modes.
pub fn incident_plane_modes(medium: &ElasticMedium, spec: &PlaneWaveSpec) -> ModeSum {
    let d = spec.direction();
    let kp = wavevector(medium.kappa_p, d);
    let ks = wavevector(medium.kappa_s, d);
    let zero = c(0.0, 0.0);
    let mut modes = Vec::new();
    if spec.c_p != zero {
        modes.push(PlaneMode { amplitude: scale(&real3(d), spec.c_p), wavevector: kp });
    }
    if spec.c_s1 != zero {
        modes.push(PlaneMode { amplitude: scale(&real3(spec.d1_perp), spec.c_s1), wavevector: ks });
    }
    if spec.c_s2 != zero {
        modes.push(PlaneMode { amplitude: scale(&real3(spec.d2_perp), spec.c_s2), wavevector: ks });
    }
    ModeSum::new(modes)
}

/// Reflected field: each incident mode converts into an upward P and an
/// upward S mode sharing its horizontal wavevector. For S incidence past
/// the critical angle the P part is evanescent.
pub fn reflected_plane_modes(medium: &ElasticMedium, spec: &PlaneWaveSpec) -> ModeSum {
    let mut out = ModeSum::default();
    for m in incident_plane_modes(medium, spec).modes {
        let alpha = [m.wavevector[0].re, m.wavevector[1].re];
        out.modes.extend(reflect_trace_mode(medium, alpha, &m.amplitude));
    }
    out
}

pub fn eval_incident_plane(medium: &ElasticMedium, spec: &PlaneWaveSpec, x: [f64; 3]) -> Vec3 {
    incident_plane_modes(medium, spec).eval(x)
}

pub fn eval_reflected_plane(medium: &ElasticMedium, spec: &PlaneWaveSpec, x: [f64; 3]) -> Vec3 {
    reflected_plane_modes(medium, spec).eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{add, max_abs, sub, ONE, ZERO};

    fn p_wave(theta: f64, phi: f64) -> PlaneWaveSpec {
        PlaneWaveSpec::new(theta, phi, ONE, ZERO, ZERO).unwrap()
    }

    #[test]
    fn normal_incidence_p_at_origin() {
        let m = ElasticMedium::reference();
        let u = eval_incident_plane(&m, &p_wave(0.0, 0.0), [0.0; 3]);
        assert!(max_abs(&sub(&u, &[ZERO, ZERO, c(-1.0, 0.0)])) < 1e-15);
    }

    #[test]
    fn normal_incidence_s_phase() {
        let m = ElasticMedium::reference();
        let spec = PlaneWaveSpec::with_polarizations(0.0, 0.0, ZERO, ONE, ZERO, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap();
        let u = eval_incident_plane(&m, &spec, [0.0, 0.0, 1.0]);
        let want = [Complex64::from_polar(1.0, -2.0), ZERO, ZERO];
        assert!(max_abs(&sub(&u, &want)) < 1e-15);
        let r = eval_reflected_plane(&m, &spec, [0.3, 0.1, 0.5]);
        let want = [-Complex64::from_polar(1.0, 1.0), ZERO, ZERO];
        assert!(max_abs(&sub(&r, &want)) < 1e-15);
    }

    #[test]
    fn oblique_p_wave_on_phase_plane() {
        let m = ElasticMedium::reference();
        let u = eval_incident_plane(&m, &p_wave(std::f64::consts::FRAC_PI_4, 0.0), [1.0, 0.0, 1.0]);
        let h = 0.5f64.sqrt();
        assert!(max_abs(&sub(&u, &[c(h, 0.0), ZERO, c(-h, 0.0)])) < 1e-15);
    }

    #[test]
    fn normal_incidence_p_reflects_without_conversion() {
        let m = ElasticMedium::reference();
        let x = [0.4, -1.2, 0.8];
        let r = eval_reflected_plane(&m, &p_wave(0.0, 0.0), x);
        let want = [ZERO, ZERO, Complex64::from_polar(1.0, 0.8)];
        assert!(max_abs(&sub(&r, &want)) < 1e-15);
    }

    #[test]
    fn oblique_p_wave_satisfies_rigid_condition() {
        let m = ElasticMedium::reference();
        let spec = p_wave(std::f64::consts::PI / 6.0, 0.0);
        for x in [[0.0, 0.0, 0.0], [1.3, -0.4, 0.0]] {
            let total = add(&eval_incident_plane(&m, &spec, x), &eval_reflected_plane(&m, &spec, x));
            assert!(max_abs(&total) < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_polarization() {
        let r = PlaneWaveSpec::with_polarizations(0.2, 0.0, ONE, ZERO, ZERO, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        assert!(r.is_err());
        assert!(PlaneWaveSpec::new(std::f64::consts::FRAC_PI_2, 0.0, ONE, ZERO, ZERO).is_err());
    }
}

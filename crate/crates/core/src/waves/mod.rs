//! Closed-form fields above the rigid plane: plane waves, spectral beams,
//! their reflections and tractions, and a finite-difference Navier residual.

pub mod beam;
pub mod navier;
pub mod plane;

pub use beam::{
    eval_incident_beam, eval_reflected_beam, source_density_p, BeamDensity, BeamQuadrature, BeamRule, Bump,
    ShearWeight, SpectralBeamSpec, BeamKind, incident_beam_modes, reflected_beam_modes, source_density_with_rule,
};
pub use navier::{navier_residual, observed_orders, default_step};
pub use plane::{eval_incident_plane, eval_reflected_plane, incident_plane_modes, reflected_plane_modes, PlaneWaveSpec};

use crate::linalg::{add_scaled, c, dot, scale, sub, Mat3, Vec3, I};
use crate::medium::ElasticMedium;
use crate::spectral::traction_matrix;
use num_complex::Complex64;

/// `amplitude · e^{i k · x}` with a possibly complex wavevector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneMode {
    pub amplitude: Vec3,
    pub wavevector: Vec3,
}

impl PlaneMode {
    pub fn phase(&self, x: [f64; 3]) -> Complex64 {
        let k = &self.wavevector;
        (I * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2])).exp()
    }

    pub fn eval(&self, x: [f64; 3]) -> Vec3 {
        scale(&self.amplitude, self.phase(x))
    }

    /// `∂_k u_j` as entry `[j][k]`.
    pub fn gradient(&self, x: [f64; 3]) -> Mat3 {
        let e = self.phase(x);
        Mat3::outer(&self.amplitude, &self.wavevector).scale(I * e)
    }

    /// Traction on the horizontal plane through `x` (normal `e₃`).
    pub fn traction(&self, medium: &ElasticMedium, x: [f64; 3]) -> Vec3 {
        scale(&traction_matrix(medium, &self.wavevector).mul_vec(&self.amplitude), self.phase(x))
    }
}

/// A finite superposition of plane modes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModeSum {
    pub modes: Vec<PlaneMode>,
}

impl ModeSum {
    pub fn new(modes: Vec<PlaneMode>) -> Self {
        ModeSum { modes }
    }

    pub fn eval(&self, x: [f64; 3]) -> Vec3 {
        let mut out = [c(0.0, 0.0); 3];
        for m in &self.modes {
            add_scaled(&mut out, &m.amplitude, m.phase(x));
        }
        out
    }

    pub fn extend(&mut self, other: ModeSum) {
        self.modes.extend(other.modes);
    }
}

/// Exact traction `Tu = 2μ∂₃u + λ(∇·u)e₃ + μ e₃×(∇×u)` of a mode
/// superposition on the horizontal plane through `x`.
pub fn traction_plane(medium: &ElasticMedium, field: &ModeSum, x: [f64; 3]) -> Vec3 {
    let mut out = [c(0.0, 0.0); 3];
    for m in &field.modes {
        let t = m.traction(medium, x);
        add_scaled(&mut out, &t, c(1.0, 0.0));
    }
    out
}

/// Rayleigh reflection from the rigid plane of a downward mode whose trace on
/// `x₃ = 0` is `a e^{i α·x'}`: the returned upward P and S modes cancel the
/// trace exactly.
pub fn reflect_trace_mode(medium: &ElasticMedium, alpha: [f64; 2], a: &Vec3) -> [PlaneMode; 2] {
    let s = medium.symbols(alpha);
    let (x1, x2) = (c(alpha[0], 0.0), c(alpha[1], 0.0));
    let kp = [x1, x2, s.beta];
    let ks = [x1, x2, s.gamma];
    let a_p = dot(&ks, a) / s.denom;
    let p_part = scale(&kp, a_p);
    let s_part = sub(a, &p_part);
    [
        PlaneMode { amplitude: scale(&p_part, c(-1.0, 0.0)), wavevector: kp },
        PlaneMode { amplitude: scale(&s_part, c(-1.0, 0.0)), wavevector: ks },
    ]
}

//! Layer potential of the half-space tensor over the rigid plane,
//! `u(x) = ∫_{x₃=0} T_y G_H(x, y) v(y) ds(y)`, evaluated in the spectral
//! domain.
//!
//! Transforms use `v̂(ξ) = (2π)⁻¹ ∫ v(y) e^{−iξ·y} dy`, so that
//! `u(x) = ∫ K̂(ξ, x) v̂(ξ) dξ` with the hat kernel `K̂` assembled from
//! the partial transforms of `G(x, ·)`, `G(x̃, ·)` and `T U(x, ·)`. The
//! kernel reduces to `(2π)⁻¹ e^{iξ·x'}` times the upward angular spectrum
//! kernel, which gives a second, independent evaluation path.

use super::halfspace::{radial_segments, QuadratureConfig};
use crate::error::{Error, Result};
use crate::linalg::{add_scaled, c, Mat3, Vec3, I, ZERO};
use crate::medium::ElasticMedium;
use crate::quadrature::{integrate_adaptive, Segment};
use crate::spectral::{asr_kernel, dtn_symbol, kernel_matrices};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Partial transform in `y'` of `G(x, (y', 0))` (or of `G(x̃, (y', 0))`
/// when `image` is set), at horizontal wavevector `xi`.
pub fn greens_plane_transform(medium: &ElasticMedium, x: [f64; 3], xi: [f64; 2], image: bool) -> Mat3 {
    let s = medium.symbols(xi);
    let phase = (-I * (xi[0] * x[0] + xi[1] * x[1])).exp();
    let gp = I / (4.0 * PI * s.beta) * phase * (I * s.beta * x[2]).exp();
    let gs = I / (4.0 * PI * s.gamma) * phase * (I * s.gamma * x[2]).exp();
    let sign = if image { 1.0 } else { -1.0 };
    let (x1, x2) = (c(xi[0], 0.0), c(xi[1], 0.0));
    let kp = [x1, x2, s.beta * sign];
    let ks = [x1, x2, s.gamma * sign];
    let w2 = c(medium.omega2(), 0.0);
    Mat3::identity().scale(gs / medium.mu) - (Mat3::outer(&ks, &ks).scale(gs) - Mat3::outer(&kp, &kp).scale(gp)).scale(w2.inv())
}

/// Partial transform in `y'` of the traction `T_y U(x, (y', 0))`.
pub fn correction_traction_transform(medium: &ElasticMedium, x: [f64; 3], xi: [f64; 2]) -> Mat3 {
    let k = kernel_matrices(medium, xi);
    let s = k.symbols;
    let phase = (-I * (xi[0] * x[0] + xi[1] * x[1])).exp();
    let jump = (I * s.beta * x[2]).exp() - (I * s.gamma * x[2]).exp();
    let pref = I / (TAU * medium.omega2()) * phase * jump / s.denom;
    (k.t_p * k.mtilde_p + k.t_s * k.mtilde_s).scale(pref)
}

/// Hat kernel `[iM⁻(−ξ)Ĝ(x,−ξ) − iM(−ξ)Ĝ(x̃,−ξ) + T̂U(x,−ξ)]ᵀ`, mapping
/// `v̂(ξ)` to the spectral density of the layer potential at `x`.
pub fn hat_kernel(medium: &ElasticMedium, xi: [f64; 2], x: [f64; 3]) -> Mat3 {
    let neg = [-xi[0], -xi[1]];
    let s = medium.symbols(neg);
    let m = dtn_symbol(medium, &s);
    let m_minus = dtn_symbol(medium, &s.flipped());
    let direct = m_minus * greens_plane_transform(medium, x, neg, false);
    let image = m * greens_plane_transform(medium, x, neg, true);
    ((direct - image).scale(I) + correction_traction_transform(medium, x, neg)).transpose()
}

/// `(2π)⁻¹ e^{iξ·x'}` times the upward angular spectrum kernel over height
/// `x₃`.
pub fn asr_hat_kernel(medium: &ElasticMedium, xi: [f64; 2], x: [f64; 3]) -> Mat3 {
    let s = medium.symbols(xi);
    let phase = (I * (xi[0] * x[0] + xi[1] * x[1])).exp() / TAU;
    asr_kernel(&s, x[2], true).scale(phase)
}

/// Boundary data with bounded support on the plane `x₃ = 0`.
pub trait CompactTrace {
    /// `(2π)⁻¹ ∫ v(y) e^{−iξ·y} dy`
    fn transform(&self, xi: [f64; 2]) -> Vec3;
    fn value(&self, y: [f64; 2]) -> Vec3;
    /// Centre and radius of a disk containing the support.
    fn support(&self) -> ([f64; 2], f64);
    /// Radius beyond which the transform is negligible at double precision.
    fn spectral_radius(&self) -> f64;
    /// Angular harmonic content of `ξ ↦ v̂(ξ) e^{iξ·x'}` on `|ξ| = ρ`.
    fn angular_bandwidth(&self, rho: f64, x: [f64; 2]) -> f64 {
        let (center, radius) = self.support();
        rho * ((x[0] - center[0]).hypot(x[1] - center[1]) + radius)
    }
}

/// `p e^{−|y−c|²/w²} e^{iξ₀·y}`, cut off beyond `6.5 w` where it is below
/// `e^{−42}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianPatch {
    pub amplitude: Vec3,
    pub center: [f64; 2],
    pub width: f64,
    pub wavevector: [f64; 2],
}

impl GaussianPatch {
    pub const CUTOFF: f64 = 6.5;

    pub fn new(amplitude: Vec3, center: [f64; 2], width: f64, wavevector: [f64; 2]) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidInput(format!("patch width must be positive (got {width})")));
        }
        Ok(GaussianPatch { amplitude, center, width, wavevector })
    }
}

impl CompactTrace for GaussianPatch {
    fn transform(&self, xi: [f64; 2]) -> Vec3 {
        let d = [xi[0] - self.wavevector[0], xi[1] - self.wavevector[1]];
        let w2 = self.width * self.width;
        let envelope = 0.5 * w2 * (-0.25 * w2 * (d[0] * d[0] + d[1] * d[1])).exp();
        let shift = Complex64::from_polar(envelope, -(d[0] * self.center[0] + d[1] * self.center[1]));
        self.amplitude.map(|a| a * shift)
    }

    fn value(&self, y: [f64; 2]) -> Vec3 {
        let d = [y[0] - self.center[0], y[1] - self.center[1]];
        let r2 = (d[0] * d[0] + d[1] * d[1]) / (self.width * self.width);
        if r2 > Self::CUTOFF * Self::CUTOFF {
            return [ZERO; 3];
        }
        let e = Complex64::from_polar((-r2).exp(), self.wavevector[0] * y[0] + self.wavevector[1] * y[1]);
        self.amplitude.map(|a| a * e)
    }

    fn support(&self) -> ([f64; 2], f64) {
        (self.center, Self::CUTOFF * self.width)
    }

    fn spectral_radius(&self) -> f64 {
        // e^{−w²R²/4} = 1e-16
        self.wavevector[0].hypot(self.wavevector[1]) + 2.0 * (16.0 * 10f64.ln()).sqrt() / self.width
    }

    fn angular_bandwidth(&self, rho: f64, x: [f64; 2]) -> f64 {
        // Oscillation from the offset to the centre, plus the envelope
        // e^{z cos(θ−θ₀)} whose harmonics fall off like e^{−n²/2z}.
        let offset = (x[0] - self.center[0]).hypot(x[1] - self.center[1]);
        let z = 0.5 * self.width * self.width * rho * self.wavevector[0].hypot(self.wavevector[1]);
        rho * offset + 7.5 * z.sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LayerPotential {
    pub value: Vec3,
    pub error_estimate: f64,
}

fn spectral_integral(
    medium: &ElasticMedium,
    trace: &impl CompactTrace,
    x: [f64; 3],
    config: &QuadratureConfig,
    kernel: impl Fn([f64; 2], [f64; 3]) -> Mat3,
) -> Result<LayerPotential> {
    let xi_max = trace.spectral_radius().min(config.xi_max(medium, x[2]));
    let (center, radius) = trace.support();
    let reach = (x[0] - center[0]).hypot(x[1] - center[1]) + radius;
    let pieces = radial_segments(medium, xi_max.max(medium.kappa_s * 1.01), reach + x[2], reach);
    let segments: Vec<Segment> = pieces.iter().map(|p| p.0).collect();
    let density = |rho: f64| -> Vec3 {
        let b = trace.angular_bandwidth(rho, [x[0], x[1]]);
        let n = ((b + 8.0 * b.cbrt()).ceil() as usize + 24).max(config.min_angular);
        let w = TAU / n as f64;
        let mut acc = [ZERO; 3];
        for k in 0..n {
            let (st, ct) = (w * k as f64).sin_cos();
            let xi = [rho * ct, rho * st];
            let v = kernel(xi, x).mul_vec(&trace.transform(xi));
            add_scaled(&mut acc, &v, c(w * rho, 0.0));
        }
        acc
    };
    let adaptive = integrate_adaptive(
        &segments,
        |k, t| {
            let (rho, jac) = pieces[k].1.eval(t);
            density(rho).map(|v| v * jac)
        },
        config.tolerance,
        config.max_panels,
    )?;
    Ok(LayerPotential { value: adaptive.value, error_estimate: adaptive.error })
}

/// `∫ T_y G_H(x, y) v(y) ds(y)` through the hat kernel.
pub fn layer_potential(
    medium: &ElasticMedium,
    trace: &impl CompactTrace,
    x: [f64; 3],
    config: &QuadratureConfig,
) -> Result<LayerPotential> {
    if !(x[2] > 0.0) {
        return Err(Error::InvalidInput(format!("layer potential needs x3 > 0 (got {})", x[2])));
    }
    spectral_integral(medium, trace, x, config, |xi, x| hat_kernel(medium, xi, x))
}

/// Upward angular spectrum extension of `v` evaluated at `x` by the same
/// spectral quadrature, without the Green tensor.
pub fn extend_upward(
    medium: &ElasticMedium,
    trace: &impl CompactTrace,
    x: [f64; 3],
    config: &QuadratureConfig,
) -> Result<LayerPotential> {
    if !(x[2] >= 0.0) {
        return Err(Error::InvalidInput(format!("extension needs x3 ≥ 0 (got {})", x[2])));
    }
    spectral_integral(medium, trace, x, config, |xi, x| asr_hat_kernel(medium, xi, x))
}

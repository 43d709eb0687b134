//! Surface energy-flux identities on a periodic cell.
//!
//! For the upward radiating extension `u` of a trace on `x₃ = b`:
//!
//! ```text
//! Im ∫ Tu · ū ds = Σ_{|ξ|<κ_p} ω² β |Â_p|² + Σ_{|ξ|<κ_s} μ γ |Â_s|²
//! ∫ 2 Re(Tu · ∂₃ū) − ℰ(u, ū) + ω² |u|² ds
//!     = 2 Σ_{|ξ|<κ_p} ω² β² |Â_p|² + 2 Σ_{|ξ|<κ_s} μ γ² |Â_s|²
//! ```
//!
//! with `ℰ(u, v) = 2μ Σ ∂_k u_j ∂_k v_j + λ (∇·u)(∇·v) − μ (∇×u)·(∇×v)`,
//! mode sums taken as `(2π/L)² Σ` over lattice modes and `Â` the
//! continuum-normalized amplitudes. Left sides are computed pointwise on the
//! sample grid from spectrally exact fields (the traction from the DtN map,
//! derivatives from the mode amplitudes); right sides by direct summation.

use super::ops::{apply_dtn_spectrum, decompose_spectrum, Direction, SpectralDecomposition};
use super::trace::{TraceGrid, TraceSpectrum};
use crate::linalg::{dot_conj, Vec3};
use crate::medium::ElasticMedium;
use num_complex::Complex64;

/// Both sides of one identity plus a magnitude used to judge "zero".
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluxSides {
    /// Surface integral over the cell.
    pub surface: f64,
    /// Propagating-mode sum.
    pub modes: f64,
    /// Cell integral of the absolute values of the surface integrand terms.
    pub reference: f64,
}

impl FluxSides {
    /// `|surface − modes| / max(|surface|, |modes|)`, or 0 when both sides
    /// vanish at working precision relative to `reference`.
    pub fn relative_gap(&self) -> f64 {
        let scale = self.surface.abs().max(self.modes.abs());
        if scale <= 1e-12 * self.reference || scale == 0.0 {
            0.0
        } else {
            (self.surface - self.modes).abs() / scale
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluxReport {
    /// `Im ∫ Tu·ū`
    pub power: FluxSides,
    /// The Rellich-type identity.
    pub rellich: FluxSides,
}

/// Fields of the upward extension sampled on the trace grid.
struct SurfaceFields {
    u: Vec<Vec3>,
    traction: Vec<Vec3>,
    /// `grad[p][j][k] = ∂_k u_j` at sample `p`.
    grad: Vec<[[Complex64; 3]; 3]>,
}

fn surface_fields(medium: &ElasticMedium, trace: &TraceGrid, dec: &SpectralDecomposition) -> SurfaceFields {
    let spectrum = trace.spectrum();
    let g = spectrum.geometry;
    let traction = apply_dtn_spectrum(medium, &spectrum, Direction::Up).to_trace().values;
    let zero = Complex64::new(0.0, 0.0);
    let npts = g.n * g.n;
    let mut grad = vec![[[zero; 3]; 3]; npts];
    // Each column k of the gradient is synthesized as its own trace.
    for k in 0..3 {
        let mut s = TraceSpectrum::zeros(g);
        for (bin, mode) in dec.modes.iter().enumerate() {
            let gc = mode.gradient_coefficient();
            s.coeffs[bin] = [gc[0][k], gc[1][k], gc[2][k]];
        }
        let t = s.to_trace();
        for (p, v) in t.values.iter().enumerate() {
            for j in 0..3 {
                grad[p][j][k] = v[j];
            }
        }
    }
    SurfaceFields { u: trace.values.clone(), traction, grad }
}

pub fn flux_identities(medium: &ElasticMedium, trace: &TraceGrid) -> FluxReport {
    let spectrum = trace.spectrum();
    let g = spectrum.geometry;
    let dec = decompose_spectrum(medium, &spectrum);
    let f = surface_fields(medium, trace, &dec);
    let (mu, lambda, w2) = (medium.mu, medium.lambda, medium.omega2());
    let da = g.sample_area();

    let mut power = 0.0;
    let mut power_ref = 0.0;
    let mut rellich = 0.0;
    let mut rellich_ref = 0.0;
    for p in 0..f.u.len() {
        let u = &f.u[p];
        let t = &f.traction[p];
        let gr = &f.grad[p];
        let tu = dot_conj(t, u);
        power += tu.im * da;
        power_ref += tu.norm() * da;

        let d3: Vec3 = [gr[0][2], gr[1][2], gr[2][2]];
        let t_d3 = 2.0 * dot_conj(t, &d3).re;
        let mut grad_sq = 0.0;
        for row in gr {
            for v in row {
                grad_sq += v.norm_sqr();
            }
        }
        let div = gr[0][0] + gr[1][1] + gr[2][2];
        let curl = [gr[2][1] - gr[1][2], gr[0][2] - gr[2][0], gr[1][0] - gr[0][1]];
        let curl_sq: f64 = curl.iter().map(|z| z.norm_sqr()).sum();
        let energy = 2.0 * mu * grad_sq + lambda * div.norm_sqr() - mu * curl_sq;
        let u_sq: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        rellich += (t_d3 - energy + w2 * u_sq) * da;
        rellich_ref += (t_d3.abs() + energy.abs() + w2 * u_sq) * da;
    }

    let density = g.density_scale();
    let area = g.mode_area();
    let mut power_modes = 0.0;
    let mut rellich_modes = 0.0;
    for m in &dec.modes {
        let s = &m.symbols;
        let ap2 = (m.a_p * density).norm_sqr();
        let as2: f64 = m.a_s.iter().map(|z| (z * density).norm_sqr()).sum();
        if s.beta.im == 0.0 {
            power_modes += w2 * s.beta.re * ap2 * area;
            rellich_modes += 2.0 * w2 * s.beta.re * s.beta.re * ap2 * area;
        }
        if s.gamma.im == 0.0 {
            power_modes += mu * s.gamma.re * as2 * area;
            rellich_modes += 2.0 * mu * s.gamma.re * s.gamma.re * as2 * area;
        }
    }

    FluxReport {
        power: FluxSides { surface: power, modes: power_modes, reference: power_ref },
        rellich: FluxSides { surface: rellich, modes: rellich_modes, reference: rellich_ref },
    }
}

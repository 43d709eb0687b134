//! Mode-wise operations on trace grids: P/S decomposition, angular spectrum
//! propagation, Dirichlet-to-Neumann maps and Rayleigh expansions.

use super::kernels::{asr_kernel, dtn_symbol, kernel_matrices};
use super::trace::{CellGeometry, TraceGrid, TraceSpectrum};
use crate::error::{Error, Result};
use crate::linalg::{add_scaled, c, dot, scale, sub, Vec3, I};
use crate::medium::{ElasticMedium, SpectralSymbols};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// P and S amplitudes of one discrete mode. Amplitudes are Fourier series
/// coefficients; multiply by `CellGeometry::density_scale` for transform
/// values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeAmplitudes {
    pub index: [i64; 2],
    pub symbols: SpectralSymbols,
    pub a_p: Complex64,
    pub a_s: Vec3,
}

impl ModeAmplitudes {
    /// Trace coefficient `A_p (ξ, β) + A_s` rebuilt from the amplitudes.
    pub fn trace_coefficient(&self) -> Vec3 {
        let s = &self.symbols;
        let kp = [c(s.xi[0], 0.0), c(s.xi[1], 0.0), s.beta];
        let mut u = self.a_s;
        add_scaled(&mut u, &kp, self.a_p);
        u
    }

    /// Coefficient of `∂_k u_j` for the upward extension: entry `[j][k]`.
    pub fn gradient_coefficient(&self) -> [[Complex64; 3]; 3] {
        let s = &self.symbols;
        let kp = [c(s.xi[0], 0.0), c(s.xi[1], 0.0), s.beta];
        let ks = [c(s.xi[0], 0.0), c(s.xi[1], 0.0), s.gamma];
        std::array::from_fn(|j| std::array::from_fn(|k| I * (self.a_p * kp[j] * kp[k] + self.a_s[j] * ks[k])))
    }
}

/// Per-mode amplitudes of a trace, `A = D û` for every bin.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub geometry: CellGeometry,
    /// In FFT bin order, like `TraceSpectrum::coeffs`.
    pub modes: Vec<ModeAmplitudes>,
}

impl SpectralDecomposition {
    /// Recombines the amplitudes into series coefficients.
    pub fn reconstruct(&self) -> TraceSpectrum {
        TraceSpectrum {
            geometry: self.geometry,
            coeffs: self.modes.iter().map(ModeAmplitudes::trace_coefficient).collect(),
        }
    }
}

pub fn decompose_trace(medium: &ElasticMedium, trace: &TraceGrid) -> SpectralDecomposition {
    decompose_spectrum(medium, &trace.spectrum())
}

pub fn decompose_spectrum(medium: &ElasticMedium, spectrum: &TraceSpectrum) -> SpectralDecomposition {
    let g = spectrum.geometry;
    let modes = spectrum
        .bins()
        .map(|(k1, k2, xi)| {
            let k = kernel_matrices(medium, xi);
            let a = k.d.mul_vec(&spectrum.coeffs[k1 * g.n + k2]);
            ModeAmplitudes {
                index: [g.mode_index(k1), g.mode_index(k2)],
                symbols: k.symbols,
                a_p: a[0],
                a_s: [a[1], a[2], a[3]],
            }
        })
        .collect();
    SpectralDecomposition { geometry: g, modes }
}

/// Moves a trace by `dz ≥ 0` along `direction` with the angular spectrum
/// kernel. Nyquist modes are dropped for `dz > 0`; `dz = 0` returns the
/// input unchanged.
pub fn propagate(medium: &ElasticMedium, trace: &TraceGrid, dz: f64, direction: Direction) -> Result<TraceGrid> {
    if !(dz >= 0.0) || !dz.is_finite() {
        return Err(Error::InvalidInput(format!("propagation distance {dz} must be finite and ≥ 0")));
    }
    if dz == 0.0 {
        log::warn!("propagate called with dz = 0; returning the input trace");
        return Ok(trace.clone());
    }
    let spectrum = trace.spectrum();
    let out = propagate_spectrum(medium, &spectrum, dz, direction);
    Ok(out.to_trace())
}

pub fn propagate_spectrum(medium: &ElasticMedium, spectrum: &TraceSpectrum, dz: f64, direction: Direction) -> TraceSpectrum {
    let g = spectrum.geometry;
    let mut out = TraceSpectrum::zeros(g);
    for (k1, k2, xi) in spectrum.bins() {
        if g.is_nyquist(k1, k2) {
            continue;
        }
        let kernel = asr_kernel(&medium.symbols(xi), dz, direction == Direction::Up);
        out.coeffs[k1 * g.n + k2] = kernel.mul_vec(&spectrum.coeffs[k1 * g.n + k2]);
    }
    out.geometry.height = match direction {
        Direction::Up => g.height + dz,
        Direction::Down => g.height - dz,
    };
    out
}

/// Traction of the upward (or downward) radiating extension of a trace,
/// mode by mode `i M(ξ) û` (or `i M⁻(ξ) û`).
pub fn apply_dtn(medium: &ElasticMedium, trace: &TraceGrid, direction: Direction) -> TraceGrid {
    apply_dtn_spectrum(medium, &trace.spectrum(), direction).to_trace()
}

pub fn apply_dtn_spectrum(medium: &ElasticMedium, spectrum: &TraceSpectrum, direction: Direction) -> TraceSpectrum {
    let g = spectrum.geometry;
    let mut out = TraceSpectrum::zeros(g);
    for (k1, k2, xi) in spectrum.bins() {
        let s = medium.symbols(xi);
        let m = match direction {
            Direction::Up => dtn_symbol(medium, &s),
            Direction::Down => dtn_symbol(medium, &s.flipped()),
        };
        out.coeffs[k1 * g.n + k2] = scale(&m.mul_vec(&spectrum.coeffs[k1 * g.n + k2]), I);
    }
    out
}

/// One term of an upward Rayleigh expansion about the plane `x₃ = b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayleighMode {
    pub symbols: SpectralSymbols,
    pub a_p: Complex64,
    pub a_s: Vec3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RayleighExpansion {
    pub height: f64,
    pub modes: Vec<RayleighMode>,
}

/// Rayleigh coefficients of a quasi-periodic trace:
/// `A_p = (α, γ) · u / (βγ + |α|²)` and `A_s = u − A_p (α, β)`.
pub fn rayleigh_coefficients(medium: &ElasticMedium, trace: &TraceGrid) -> RayleighExpansion {
    let spectrum = trace.spectrum();
    let g = spectrum.geometry;
    let modes = spectrum
        .bins()
        .map(|(k1, k2, xi)| {
            let s = medium.symbols(xi);
            let u = spectrum.coeffs[k1 * g.n + k2];
            let a_p = dot(&[c(xi[0], 0.0), c(xi[1], 0.0), s.gamma], &u) / s.denom;
            let a_s = sub(&u, &scale(&[c(xi[0], 0.0), c(xi[1], 0.0), s.beta], a_p));
            RayleighMode { symbols: s, a_p, a_s }
        })
        .collect();
    RayleighExpansion { height: g.height, modes }
}

/// Direct sum of the Rayleigh modes at `x` (intended for `x₃ ≥ b`).
pub fn rayleigh_evaluate(expansion: &RayleighExpansion, x: [f64; 3]) -> Vec3 {
    let dz = x[2] - expansion.height;
    let mut out = [c(0.0, 0.0); 3];
    for m in &expansion.modes {
        let s = &m.symbols;
        let h = Complex64::from_polar(1.0, s.xi[0] * x[0] + s.xi[1] * x[1]);
        let ep = h * (I * s.beta * dz).exp();
        let es = h * (I * s.gamma * dz).exp();
        add_scaled(&mut out, &[c(s.xi[0], 0.0), c(s.xi[1], 0.0), s.beta], m.a_p * ep);
        add_scaled(&mut out, &m.a_s, es);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, ONE, ZERO};

    fn single_mode(g: CellGeometry, bin: (usize, usize), amp: Vec3) -> TraceGrid {
        let xi = g.wavevector(bin.0, bin.1);
        TraceGrid::from_fn(g, |x| scale(&amp, Complex64::from_polar(1.0, xi[0] * x[0] + xi[1] * x[1])))
    }

    #[test]
    fn vertical_trace_decomposes_per_closed_form() {
        let m = ElasticMedium::reference();
        let g = CellGeometry::new(40.0, 8, [0.0, 0.0], 0.0).unwrap();
        // Bin (1, 0): ξ = (2π/40, 0), inside the P circle.
        let t = single_mode(g, (1, 0), [ZERO, ZERO, ONE]);
        let dec = decompose_trace(&m, &t);
        let mode = &dec.modes[8];
        let s = mode.symbols;
        assert!((mode.a_p - s.gamma / s.denom).norm() < 1e-14);
        let want_s = sub(&[ZERO, ZERO, ONE], &scale(&[c(s.xi[0], 0.0), ZERO, s.beta], mode.a_p));
        assert!(max_abs(&sub(&mode.a_s, &want_s)) < 1e-14);
        for (k, other) in dec.modes.iter().enumerate() {
            if k != 8 {
                assert!(other.a_p.norm() < 1e-15 && max_abs(&other.a_s) < 1e-15);
            }
        }
    }

    #[test]
    fn dtn_of_single_mode_is_symbol_times_mode() {
        let m = ElasticMedium::reference();
        let g = CellGeometry::new(5.0, 4, [0.2, 0.1], 0.0).unwrap();
        let t = single_mode(g, (1, 3), [ZERO, ZERO, ONE]);
        let out = apply_dtn(&m, &t, Direction::Up);
        let xi = g.wavevector(1, 3);
        let col = dtn_symbol(&m, &m.symbols(xi)).column(2);
        for i in 0..4 {
            for j in 0..4 {
                let x = g.point(i, j);
                let e = I * Complex64::from_polar(1.0, xi[0] * x[0] + xi[1] * x[1]);
                let want = scale(&col, e);
                assert!(max_abs(&sub(&out.values[i * 4 + j], &want)) < 1e-14);
            }
        }
    }

    #[test]
    fn zero_distance_is_identity() {
        let m = ElasticMedium::reference();
        let g = CellGeometry::new(5.0, 4, [0.2, 0.1], 0.0).unwrap();
        let t = single_mode(g, (2, 1), [c(0.3, 0.1), ZERO, ONE]);
        assert_eq!(propagate(&m, &t, 0.0, Direction::Up).unwrap(), t);
        assert!(propagate(&m, &t, -1.0, Direction::Up).is_err());
    }
}

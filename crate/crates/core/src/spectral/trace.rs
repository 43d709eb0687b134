//! Sampled traces on a horizontal plane over a square periodic cell and
//! their discrete Fourier transforms.
//!
//! A trace with quasi-periodic phase α satisfies
//! `v(x' + L e_j) = e^{i α_j L} v(x')`. Its modes are
//! `ξ_m = α + 2π m / L` for `m ∈ [−n/2, n/2)²` and its Fourier series
//! coefficients are
//!
//! ```text
//! c_m = n⁻² Σ_j v(x_j) e^{−i ξ_m · x_j},    x_j = j L / n,
//! v(x') = Σ_m c_m e^{i ξ_m · x'}.
//! ```
//!
//! Under the symmetric continuum transform `v̂(ξ) = (2π)⁻¹ ∫ v e^{−iξ·x'}`
//! a single mode `c e^{iξ_m·x'}` has transform `2π c δ(ξ − ξ_m)`. Spread over
//! its cell of area `(2π/L)²` in ξ this is the density
//! `v̂_m = L² c_m / (2π)`, i.e. the raw sum times `L² / (2π n²)`; conversely a
//! ξ-integral `∫ F(ξ) dξ` over the lattice becomes `(2π/L)² Σ_m F(ξ_m)`.

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::TAU;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
pub struct TraceGrid {
    pub cell_length: f64,
    pub n: usize,
    pub alpha: [f64; 2],
    pub height: f64,
    /// Row-major samples: `values[i * n + j]` sits at `(i L/n, j L/n)`.
    pub values: Vec<Vec3>,
}

/// Geometry shared by a trace and its spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellGeometry {
    pub cell_length: f64,
    pub n: usize,
    pub alpha: [f64; 2],
    pub height: f64,
}

impl CellGeometry {
    pub fn new(cell_length: f64, n: usize, alpha: [f64; 2], height: f64) -> Result<Self> {
        if !(cell_length > 0.0 && cell_length.is_finite()) {
            return Err(Error::InvalidInput(format!("cell length {cell_length} must be positive")));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!("n = {n} must be a power of two ≥ 2")));
        }
        if !(alpha[0].is_finite() && alpha[1].is_finite() && height.is_finite()) {
            return Err(Error::InvalidInput("phase and height must be finite".into()));
        }
        Ok(CellGeometry { cell_length, n, alpha, height })
    }

    pub fn spacing(&self) -> f64 {
        self.cell_length / self.n as f64
    }

    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        let h = self.spacing();
        [i as f64 * h, j as f64 * h]
    }

    /// Signed mode index of FFT bin `k`.
    pub fn mode_index(&self, k: usize) -> i64 {
        let n = self.n as i64;
        let k = k as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    pub fn wavevector(&self, k1: usize, k2: usize) -> [f64; 2] {
        let s = TAU / self.cell_length;
        [
            self.alpha[0] + s * self.mode_index(k1) as f64,
            self.alpha[1] + s * self.mode_index(k2) as f64,
        ]
    }

    /// Whether bin `(k1, k2)` lies on the Nyquist row or column `m = −n/2`.
    pub fn is_nyquist(&self, k1: usize, k2: usize) -> bool {
        k1 == self.n / 2 || k2 == self.n / 2
    }

    /// Continuum-density scale `L² / (2π)` turning series coefficients into
    /// transform values.
    pub fn density_scale(&self) -> f64 {
        self.cell_length * self.cell_length / TAU
    }

    /// ξ-cell area `(2π / L)²`.
    pub fn mode_area(&self) -> f64 {
        (TAU / self.cell_length).powi(2)
    }

    /// Physical area of one sample, `(L/n)²`.
    pub fn sample_area(&self) -> f64 {
        self.spacing().powi(2)
    }
}

impl TraceGrid {
    pub fn new(geometry: CellGeometry, values: Vec<Vec3>) -> Result<Self> {
        if values.len() != geometry.n * geometry.n {
            return Err(Error::InvalidInput(format!(
                "expected {} samples, got {}",
                geometry.n * geometry.n,
                values.len()
            )));
        }
        Ok(TraceGrid {
            cell_length: geometry.cell_length,
            n: geometry.n,
            alpha: geometry.alpha,
            height: geometry.height,
            values,
        })
    }

    /// Samples `f(x')` at every grid point.
    pub fn from_fn(geometry: CellGeometry, mut f: impl FnMut([f64; 2]) -> Vec3) -> Self {
        let n = geometry.n;
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(geometry.point(i, j)));
            }
        }
        TraceGrid {
            cell_length: geometry.cell_length,
            n,
            alpha: geometry.alpha,
            height: geometry.height,
            values,
        }
    }

    pub fn geometry(&self) -> CellGeometry {
        CellGeometry {
            cell_length: self.cell_length,
            n: self.n,
            alpha: self.alpha,
            height: self.height,
        }
    }

    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        self.geometry().point(i, j)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(crate::linalg::max_abs).fold(0.0, f64::max)
    }

    /// Fourier series coefficients.
    pub fn spectrum(&self) -> TraceSpectrum {
        let g = self.geometry();
        let n = g.n;
        let mut planner = Fft2::new(n);
        let mut coeffs = vec![[Complex64::new(0.0, 0.0); 3]; n * n];
        let norm = 1.0 / (n * n) as f64;
        let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
        for comp in 0..3 {
            for i in 0..n {
                for j in 0..n {
                    let x = g.point(i, j);
                    let phase = Complex64::from_polar(1.0, -(g.alpha[0] * x[0] + g.alpha[1] * x[1]));
                    buf[i * n + j] = self.values[i * n + j][comp] * phase;
                }
            }
            planner.forward(&mut buf);
            for (k, v) in buf.iter().enumerate() {
                coeffs[k][comp] = v * norm;
            }
        }
        TraceSpectrum { geometry: g, coeffs }
    }
}

/// Fourier series coefficients `c_m` stored in FFT bin order
/// (`coeffs[k1 * n + k2]`).
#[derive(Clone, Debug, PartialEq)]
pub struct TraceSpectrum {
    pub geometry: CellGeometry,
    pub coeffs: Vec<Vec3>,
}

impl TraceSpectrum {
    pub fn zeros(geometry: CellGeometry) -> Self {
        let n = geometry.n;
        TraceSpectrum { geometry, coeffs: vec![[Complex64::new(0.0, 0.0); 3]; n * n] }
    }

    /// Continuum-normalized transform value `v̂(ξ_m)` of bin `(k1, k2)`.
    pub fn transform_value(&self, k1: usize, k2: usize) -> Vec3 {
        let s = self.geometry.density_scale();
        let v = self.coeffs[k1 * self.geometry.n + k2];
        [v[0] * s, v[1] * s, v[2] * s]
    }

    /// Bins together with their wavevectors.
    pub fn bins(&self) -> impl Iterator<Item = (usize, usize, [f64; 2])> + '_ {
        let n = self.geometry.n;
        (0..n).flat_map(move |k1| (0..n).map(move |k2| (k1, k2, self.geometry.wavevector(k1, k2))))
    }

    /// Synthesizes the trace on the grid.
    pub fn to_trace(&self) -> TraceGrid {
        let g = self.geometry;
        let n = g.n;
        let mut fft = Fft2::new(n);
        let mut values = vec![[Complex64::new(0.0, 0.0); 3]; n * n];
        let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
        for comp in 0..3 {
            for (k, c) in self.coeffs.iter().enumerate() {
                buf[k] = c[comp];
            }
            fft.inverse(&mut buf);
            for i in 0..n {
                for j in 0..n {
                    let x = g.point(i, j);
                    let phase = Complex64::from_polar(1.0, g.alpha[0] * x[0] + g.alpha[1] * x[1]);
                    values[i * n + j][comp] = buf[i * n + j] * phase;
                }
            }
        }
        TraceGrid {
            cell_length: g.cell_length,
            n,
            alpha: g.alpha,
            height: g.height,
            values,
        }
    }

    /// Direct evaluation of the series at an arbitrary point.
    pub fn evaluate(&self, x: [f64; 2]) -> Vec3 {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (k1, k2, xi) in self.bins() {
            let e = Complex64::from_polar(1.0, xi[0] * x[0] + xi[1] * x[1]);
            crate::linalg::add_scaled(&mut out, &self.coeffs[k1 * self.geometry.n + k2], e);
        }
        out
    }
}

/// Unnormalized square 2-D FFT built from row and column passes.
struct Fft2 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl Fft2 {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft2 {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            scratch: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    fn forward(&mut self, data: &mut [Complex64]) {
        let f = self.fwd.clone();
        self.run(&*f, data);
    }

    fn inverse(&mut self, data: &mut [Complex64]) {
        let f = self.inv.clone();
        self.run(&*f, data);
    }

    fn run(&mut self, fft: &dyn Fft<f64>, data: &mut [Complex64]) {
        let n = self.n;
        fft.process(data);
        transpose(data, &mut self.scratch, n);
        fft.process(&mut self.scratch);
        transpose(&self.scratch, data, n);
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in 0..n {
            dst[j * n + i] = src[i * n + j];
        }
    }
}

//! Elastic material parameters and the vertical wavenumber symbols.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

/// Homogeneous isotropic elastic medium at a fixed angular frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ElasticMedium {
    pub lambda: f64,
    pub mu: f64,
    pub omega: f64,
    pub kappa_p: f64,
    pub kappa_s: f64,
}

impl ElasticMedium {
    /// Validates `mu > 0`, `lambda + 2 mu / 3 > 0`, `omega > 0` and derives
    /// `kappa_p = omega / sqrt(lambda + 2 mu)`, `kappa_s = omega / sqrt(mu)`.
    pub fn new(lambda: f64, mu: f64, omega: f64) -> Result<Self> {
        if !(lambda.is_finite() && mu.is_finite() && omega.is_finite()) {
            return Err(Error::InvalidMedium("parameters must be finite".into()));
        }
        if mu <= 0.0 {
            return Err(Error::InvalidMedium(format!("mu = {mu} must be positive")));
        }
        if lambda + 2.0 * mu / 3.0 <= 0.0 {
            return Err(Error::InvalidMedium(format!(
                "lambda + 2 mu / 3 = {} must be positive",
                lambda + 2.0 * mu / 3.0
            )));
        }
        if omega <= 0.0 {
            return Err(Error::InvalidMedium(format!("omega = {omega} must be positive")));
        }
        Ok(ElasticMedium {
            lambda,
            mu,
            omega,
            kappa_p: omega / (lambda + 2.0 * mu).sqrt(),
            kappa_s: omega / mu.sqrt(),
        })
    }

    /// The medium used throughout the examples: λ = 2, μ = 1, ω = 2, which
    /// gives κ_p = 1 and κ_s = 2.
    pub fn reference() -> Self {
        Self::new(2.0, 1.0, 2.0).expect("reference medium is valid")
    }

    pub fn omega2(&self) -> f64 {
        self.omega * self.omega
    }

    pub fn symbols(&self, xi: [f64; 2]) -> SpectralSymbols {
        SpectralSymbols::new(self, xi)
    }
}

/// Vertical wavenumbers of the upward P and S modes with horizontal
/// wavevector `xi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralSymbols {
    pub xi: [f64; 2],
    pub beta: Complex64,
    pub gamma: Complex64,
    /// `beta * gamma + |xi|^2`
    pub denom: Complex64,
}

/// `sqrt(k² − r²)` on the upward branch: real and non-negative inside the
/// circle, positive imaginary outside, exactly zero on it.
pub fn vertical_wavenumber(k: f64, r2: f64) -> Complex64 {
    let d = k * k - r2;
    if d >= 0.0 {
        Complex64::new(d.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-d).sqrt())
    }
}

impl SpectralSymbols {
    pub fn new(medium: &ElasticMedium, xi: [f64; 2]) -> Self {
        let r2 = xi[0] * xi[0] + xi[1] * xi[1];
        Self::from_radius_sq(medium, xi, r2)
    }

    pub(crate) fn from_radius_sq(medium: &ElasticMedium, xi: [f64; 2], r2: f64) -> Self {
        let beta = vertical_wavenumber(medium.kappa_p, r2);
        let gamma = vertical_wavenumber(medium.kappa_s, r2);
        SpectralSymbols {
            xi,
            beta,
            gamma,
            denom: beta * gamma + r2,
        }
    }

    pub fn xi_norm_sq(&self) -> f64 {
        self.xi[0] * self.xi[0] + self.xi[1] * self.xi[1]
    }

    /// Symbols with β and γ replaced by −β and −γ (downward modes).
    pub fn flipped(&self) -> Self {
        SpectralSymbols {
            xi: self.xi,
            beta: -self.beta,
            gamma: -self.gamma,
            denom: self.denom,
        }
    }
}

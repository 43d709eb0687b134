//! Free-space elastodynamic Green tensor
//! `G(x, y) = g_s I / μ + ∇∇ᵀ(g_s − g_p) / ω²` with `g = e^{iκr} / (4πr)`.

use crate::error::{Error, Result};
use crate::linalg::{c, Mat3, I};
use crate::medium::ElasticMedium;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Helmholtz fundamental solution `e^{iκr} / (4πr)`.
pub fn scalar_green(kappa: f64, r: f64) -> Complex64 {
    (I * kappa * r).exp() / (4.0 * PI * r)
}

/// Value and Hessian of `e^{iκ|v|} / (4π|v|)` at `v ≠ 0`.
pub fn scalar_green_hessian(kappa: f64, v: [f64; 3]) -> (Complex64, Mat3) {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let g = scalar_green(kappa, r);
    let a = I * kappa - 1.0 / r;
    let g1 = g * a;
    let g2 = g * (a * a + 1.0 / (r * r));
    let e = [v[0] / r, v[1] / r, v[2] / r];
    let h = Mat3::from_fn(|j, k| {
        let ee = e[j] * e[k];
        let id = if j == k { 1.0 } else { 0.0 };
        g2 * ee + g1 / r * (id - ee)
    });
    (g, h)
}

/// Free-space tensor; depends on `x − y` only and is symmetric.
pub fn greens_free(medium: &ElasticMedium, x: [f64; 3], y: [f64; 3]) -> Result<Mat3> {
    let v = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
    let dist = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if dist < 1e-12 {
        return Err(Error::Coincidence { distance: dist });
    }
    let (gs, hs) = scalar_green_hessian(medium.kappa_s, v);
    let (_, hp) = scalar_green_hessian(medium.kappa_p, v);
    Ok(Mat3::identity().scale(gs / medium.mu) + (hs - hp).scale(c(1.0 / medium.omega2(), 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_in_arguments_and_entries() {
        let m = ElasticMedium::new(1.2, 0.9, 1.7).unwrap();
        let (x, y) = ([0.1, 0.5, 0.9], [-0.4, 0.2, 1.6]);
        let a = greens_free(&m, x, y).unwrap();
        let b = greens_free(&m, y, x).unwrap();
        assert!((a - b).max_abs() < 1e-15);
        assert!((a - a.transpose()).max_abs() < 1e-15);
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let v = [0.3, -0.7, 0.5];
        let (_, h) = scalar_green_hessian(1.3, v);
        let d = 1e-4;
        for j in 0..3 {
            for k in 0..3 {
                let f = |dj: f64, dk: f64| {
                    let mut p = v;
                    p[j] += dj;
                    p[k] += dk;
                    scalar_green(1.3, (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt())
                };
                let fd = (f(d, d) - f(d, -d) - f(-d, d) + f(-d, -d)) / (4.0 * d * d);
                assert!((fd - h.0[j][k]).norm() < 1e-6, "{j}{k}");
            }
        }
    }

    #[test]
    fn coincident_points_are_rejected() {
        let m = ElasticMedium::reference();
        assert!(matches!(greens_free(&m, [1.0; 3], [1.0; 3]), Err(Error::Coincidence { .. })));
    }
}

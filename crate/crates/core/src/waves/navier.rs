//! Fourth-order finite-difference residual of the time-harmonic Navier
//! equation `μΔu + (λ+μ)∇∇·u + ω²u`.

use crate::linalg::{Vec3, ZERO};
use crate::medium::ElasticMedium;
use std::f64::consts::TAU;

/// Default step `2π / (50 κ_s)`: about 50 points per shear wavelength.
pub fn default_step(medium: &ElasticMedium) -> f64 {
    TAU / (50.0 * medium.kappa_s)
}

/// Central first-derivative weights at offsets −2, −1, 1, 2 (times 1/(12h)).
const FIRST: [(i32, f64); 4] = [(-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)];

pub fn navier_residual(medium: &ElasticMedium, field: impl Fn([f64; 3]) -> Vec3, x: [f64; 3], h: f64) -> Vec3 {
    let at = |offsets: [(usize, f64); 2]| {
        let mut p = x;
        for (axis, d) in offsets {
            p[axis] += d;
        }
        field(p)
    };
    let u0 = field(x);
    // hess[a][b][j] = ∂_a ∂_b u_j
    let mut hess = [[[ZERO; 3]; 3]; 3];
    for a in 0..3 {
        let f = |k: f64| at([(a, k * h), (a, 0.0)]);
        let (p1, m1, p2, m2) = (f(1.0), f(-1.0), f(2.0), f(-2.0));
        for j in 0..3 {
            hess[a][a][j] = (-p2[j] + 16.0 * p1[j] - 30.0 * u0[j] + 16.0 * m1[j] - m2[j]) / (12.0 * h * h);
        }
    }
    for a in 0..3 {
        for b in (a + 1)..3 {
            let mut acc = [ZERO; 3];
            for (oa, wa) in FIRST {
                for (ob, wb) in FIRST {
                    let v = at([(a, oa as f64 * h), (b, ob as f64 * h)]);
                    for j in 0..3 {
                        acc[j] += v[j] * (wa * wb);
                    }
                }
            }
            for j in 0..3 {
                let d = acc[j] / (144.0 * h * h);
                hess[a][b][j] = d;
                hess[b][a][j] = d;
            }
        }
    }
    let (mu, lambda, w2) = (medium.mu, medium.lambda, medium.omega2());
    std::array::from_fn(|j| {
        let lap = hess[0][0][j] + hess[1][1][j] + hess[2][2][j];
        let grad_div = hess[j][0][0] + hess[j][1][1] + hess[j][2][2];
        lap * mu + grad_div * (lambda + mu) + u0[j] * w2
    })
}

/// Observed convergence orders `log2(r_k / r_{k+1})` of a residual sequence
/// at steps h, h/2, h/4, …
pub fn observed_orders(residuals: &[f64]) -> Vec<f64> {
    residuals.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

//! Comparisons against closed-form fields written out independently here.

use halfspace::greens::greens_free;
use halfspace::linalg::c;
use halfspace::spectral::{apply_dtn, propagate, CellGeometry, Direction, TraceGrid};
use halfspace::waves::{incident_plane_modes, reflected_plane_modes, PlaneWaveSpec};
use halfspace::{Complex64, ElasticMedium};
use std::f64::consts::PI;

const MEDIA: [(f64, f64, f64); 3] = [(2.0, 1.0, 2.0), (0.5, 1.3, 3.1), (7.0, 0.4, 0.9)];

fn media() -> impl Iterator<Item = ElasticMedium> {
    MEDIA.iter().map(|&(l, m, w)| ElasticMedium::new(l, m, w).unwrap())
}

fn upward_sqrt(k: f64, r2: f64) -> Complex64 {
    let d = k * k - r2;
    if d >= 0.0 {
        c(d.sqrt(), 0.0)
    } else {
        c(0.0, (-d).sqrt())
    }
}

fn gap(a: &[Complex64; 3], b: &[Complex64; 3]) -> f64 {
    (0..3).map(|j| (a[j] - b[j]).norm()).fold(0.0, f64::max)
}

#[test]
fn normal_incidence_p_is_a_standing_wave() {
    for m in media() {
        let cp = c(0.7, -0.3);
        let spec = PlaneWaveSpec::new(0.0, 0.4, cp, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let mut total = incident_plane_modes(&m, &spec);
        total.extend(reflected_plane_modes(&m, &spec));
        for z in [0.0, 0.13, 0.9, 2.4] {
            let expect = [c(0.0, 0.0), c(0.0, 0.0), cp * c(0.0, 2.0 * (m.kappa_p * z).sin())];
            assert!(gap(&total.eval([0.3, -1.1, z]), &expect) < 1e-13);
        }
    }
}

#[test]
fn normal_incidence_s_is_a_standing_wave() {
    for m in media() {
        let (phi, cs) = (1.1f64, c(-0.2, 0.9));
        let spec = PlaneWaveSpec::new(0.0, phi, c(0.0, 0.0), cs, c(0.0, 0.0)).unwrap();
        let mut total = incident_plane_modes(&m, &spec);
        total.extend(reflected_plane_modes(&m, &spec));
        for z in [0.0, 0.4, 1.7] {
            let s = cs * c(0.0, -2.0 * (m.kappa_s * z).sin());
            let expect = [s * phi.cos(), s * phi.sin(), c(0.0, 0.0)];
            assert!(gap(&total.eval([2.0, 0.5, z]), &expect) < 1e-13);
        }
    }
}

/// Near the source the time-harmonic tensor approaches the static Kelvin
/// solution of `μΔu + (λ+μ)∇div u = −δ f`.
#[test]
fn free_tensor_matches_kelvin_solution_near_the_source() {
    for m in media() {
        let (l, mu) = (m.lambda, m.mu);
        for dir in [[1.0, 0.0, 0.0], [0.48, -0.6, 0.64], [0.0, 0.6, -0.8]] {
            let r = 1e-5;
            let g = greens_free(&m, [r * dir[0], r * dir[1], r * dir[2]], [0.0; 3]).unwrap();
            let scale = 1.0 / (8.0 * PI * mu * (l + 2.0 * mu) * r);
            for i in 0..3 {
                for j in 0..3 {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    let kelvin = scale * ((l + 3.0 * mu) * delta + (l + mu) * dir[i] * dir[j]);
                    assert!((g.0[i][j].re - kelvin).abs() < 1e-3 * scale, "({i},{j}) {} vs {kelvin}", g.0[i][j].re);
                }
            }
        }
    }
}

/// Single-mode trace: the upward extension is `A_p k_p e^{iβz} + (a − A_p k_p) e^{iγz}`
/// with `A_p = (ξ, γ)·a / (βγ + |ξ|²)`, and the traction of each plane
/// wave `v e^{ik·x}` is `i[μ(k₃v + v₃k) + λ(k·v)e₃]`.
#[test]
fn single_mode_propagation_and_traction() {
    let a = [c(0.4, 0.1), c(-0.3, 0.8), c(1.0, -0.5)];
    for m in media() {
        for xi in [[0.3 * m.kappa_p, 0.1], [0.5 * (m.kappa_p + m.kappa_s), -0.2], [1.7 * m.kappa_s, 0.4 * m.kappa_s]] {
            let r2 = xi[0] * xi[0] + xi[1] * xi[1];
            let (beta, gamma) = (upward_sqrt(m.kappa_p, r2), upward_sqrt(m.kappa_s, r2));
            let d = beta * gamma + r2;
            let ap = (a[0] * xi[0] + a[1] * xi[1] + a[2] * gamma) / d;
            let kp = [c(xi[0], 0.0), c(xi[1], 0.0), beta];
            let ks = [c(xi[0], 0.0), c(xi[1], 0.0), gamma];
            let vp: [Complex64; 3] = std::array::from_fn(|j| ap * kp[j]);
            let vs: [Complex64; 3] = std::array::from_fn(|j| a[j] - vp[j]);
            let traction = |k: &[Complex64; 3], v: &[Complex64; 3]| -> [Complex64; 3] {
                let div = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
                std::array::from_fn(|j| {
                    let t = (k[2] * v[j] + v[2] * k[j]) * m.mu + if j == 2 { div * m.lambda } else { c(0.0, 0.0) };
                    t * c(0.0, 1.0)
                })
            };
            let (tp, ts) = (traction(&kp, &vp), traction(&ks, &vs));

            let geo = CellGeometry::new(4.0, 8, xi, 0.0).unwrap();
            let plane = |x: [f64; 2]| Complex64::from_polar(1.0, xi[0] * x[0] + xi[1] * x[1]);
            let trace = TraceGrid::from_fn(geo, |x| std::array::from_fn(|j| a[j] * plane(x)));
            for z in [0.0, 0.35, 1.2] {
                let up = propagate(&m, &trace, z, Direction::Up).unwrap();
                let t = apply_dtn(&m, &up, Direction::Up);
                let (ep, es) = ((c(0.0, 1.0) * beta * z).exp(), (c(0.0, 1.0) * gamma * z).exp());
                for (i, j) in [(0, 0), (3, 5), (7, 2)] {
                    let e = plane(trace.point(i, j));
                    let u: [Complex64; 3] = std::array::from_fn(|k| (vp[k] * ep + vs[k] * es) * e);
                    let tr: [Complex64; 3] = std::array::from_fn(|k| (tp[k] * ep + ts[k] * es) * e);
                    assert!(gap(&up.values[i * 8 + j], &u) < 1e-12, "u at z={z}, ξ={xi:?}");
                    assert!(gap(&t.values[i * 8 + j], &tr) < 1e-11 * (1.0 + r2), "traction at z={z}, ξ={xi:?}");
                }
            }
        }
    }
}

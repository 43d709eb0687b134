//! Seeded validation suite. Every check compares two independent
//! evaluations of the same quantity and records the measured discrepancy
//! next to its tolerance; a check passes iff `measured ≤ tolerance`.
//! Failures are data: no check aborts the suite.

use crate::error::Result;
use crate::greens::{
    correction_axial, correction_integral, extend_upward, greens_free, greens_halfspace, greens_halfspace_with_rule,
    hat_kernel, asr_hat_kernel, kupradze_decay_diagnostic, layer_potential, CompactTrace, GaussianPatch,
    QuadratureConfig,
};
use crate::linalg::{c, hermitian_eigenvalues, max_abs, sub, Mat, Mat3, Vec3, I, ZERO};
use crate::medium::{ElasticMedium, SpectralSymbols};
use crate::spectral::{
    apply_dtn, decompose_trace, dtn_symbol, flux_identities, kernel_matrices, propagate, rayleigh_coefficients,
    rayleigh_evaluate, traction_matrix, CellGeometry, Direction, FluxReport, TraceGrid, TraceSpectrum,
};
use crate::waves::{
    incident_beam_modes, incident_plane_modes, navier_residual, default_step, observed_orders,
    reflected_beam_modes, reflected_plane_modes, source_density_with_rule, BeamDensity, BeamRule, Bump, ModeSum,
    PlaneWaveSpec, ShearWeight, SpectralBeamSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_3, TAU};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub group: String,
    pub status: Status,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    pub fn graded(group: &str, name: &str, measured: f64, tolerance: f64, detail: String) -> Self {
        let status = if measured <= tolerance { Status::Pass } else { Status::Fail };
        Check { name: name.into(), group: group.into(), status, measured, tolerance, detail }
    }

    pub fn skipped(group: &str, name: &str, tolerance: f64, detail: String) -> Self {
        Check { name: name.into(), group: group.into(), status: Status::Skip, measured: 0.0, tolerance, detail }
    }

    /// A check whose evaluation itself failed (for example a quadrature
    /// error); recorded as a failure with infinite discrepancy.
    pub fn errored(group: &str, name: &str, tolerance: f64, err: impl std::fmt::Display) -> Self {
        Check {
            name: name.into(),
            group: group.into(),
            status: Status::Fail,
            measured: f64::INFINITY,
            tolerance,
            detail: format!("evaluation failed: {err}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn all_pass(&self) -> bool {
        self.count(Status::Fail) == 0
    }
}

/// Check groups in execution order.
pub const GROUPS: [&str; 9] = ["kernels", "dtn", "flux", "propagation", "scattering", "beams", "greens", "layer", "decay"];

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Groups to run; `None` runs all of [`GROUPS`].
    pub groups: Option<Vec<String>>,
    pub quadrature: QuadratureConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, groups: None, quadrature: QuadratureConfig::default() }
    }
}

/// Runs every selected group with its default parameters.
pub fn run_all(medium: &ElasticMedium, config: &SuiteConfig) -> ValidationReport {
    let mut checks = Vec::new();
    for (k, group) in GROUPS.iter().enumerate() {
        if let Some(sel) = &config.groups {
            if !sel.iter().any(|g| g == group) {
                continue;
            }
        }
        // Each group draws from its own stream so that filtering never
        // changes the data seen by the remaining groups.
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(k as u64);
        let q = &config.quadrature;
        match *group {
            "kernels" => checks.extend(check_kernel_identities(medium, &mut rng, 200)),
            "dtn" => {
                let ks = medium.kappa_s;
                checks.push(check_dtn_positivity(medium, &[2.0 * ks, 4.0 * ks, 8.0 * ks], 64));
                checks.push(check_dtn_isotropy(medium, &[1.01 * ks, 2.0 * ks, 4.0 * ks, 8.0 * ks], 64));
                let g = random_geometry(&mut rng, 10.0, 8);
                let t = random_trace(&mut rng, g, |_| true);
                checks.push(check_dtn_consistency(medium, &t));
            }
            "flux" => {
                let reports: Vec<FluxReport> = (0..10)
                    .map(|_| {
                        let g = random_geometry(&mut rng, 10.0, 8);
                        flux_identities(medium, &random_trace(&mut rng, g, |_| true))
                    })
                    .collect();
                checks.extend(flux_checks(&reports));
                let g = random_geometry(&mut rng, 10.0, 8);
                let ks = medium.kappa_s;
                let t = random_trace(&mut rng, g, |xi| xi[0].hypot(xi[1]) > ks);
                checks.push(check_flux_evanescent(medium, &t));
            }
            "propagation" => {
                let g = random_geometry(&mut rng, 10.0, 16);
                let t = random_trace(&mut rng, g, |_| true);
                checks.push(check_propagation_rayleigh(medium, &t, &[0.3, 1.0, 2.5]));
                let ks = medium.kappa_s;
                let t = random_trace(&mut rng, g, |xi| xi[0].hypot(xi[1]) > 1.05 * ks);
                checks.push(check_evanescent_decay(medium, &t, 0.5));
            }
            "scattering" => {
                let heights = [0.25, 1.0, 2.0];
                let p = PlaneWaveSpec::new(0.0, 0.0, c(1.0, 0.0), ZERO, ZERO).expect("valid incidence");
                checks.extend(check_scattering_consistency(medium, &p, &heights, "normal_p"));
                let s = PlaneWaveSpec::new(FRAC_PI_3, 0.4, ZERO, c(1.0, 0.0), c(0.0, 0.5)).expect("valid incidence");
                checks.extend(check_scattering_consistency(medium, &s, &heights, "postcritical_s"));
            }
            "beams" => {
                for (label, spec) in default_beams(medium) {
                    checks.extend(check_beam_consistency(medium, &spec, label));
                }
            }
            "greens" => checks.extend(check_greens(medium, q, &mut rng)),
            "layer" => checks.extend(check_layer_potential(medium, q, &mut rng, 200)),
            "decay" => checks.extend(check_decay(medium, q)),
            _ => unreachable!("unknown group"),
        }
    }
    ValidationReport { seed: config.seed, checks }
}

// ---------------------------------------------------------------------------
// Random data

/// Cell of side `length` with `n²` samples and a random Bloch shift.
pub fn random_geometry(rng: &mut impl Rng, length: f64, n: usize) -> CellGeometry {
    let s = TAU / length;
    let alpha = [rng.gen_range(0.0..s), rng.gen_range(0.0..s)];
    CellGeometry::new(length, n, alpha, 0.0).expect("power-of-two grid")
}

/// Random trace with Fourier coefficients of size `(1 + |m|)⁻²` in mode
/// index `m`, no Nyquist content, restricted to wavevectors accepted by
/// `keep`.
pub fn random_trace(rng: &mut impl Rng, geometry: CellGeometry, keep: impl Fn([f64; 2]) -> bool) -> TraceGrid {
    let mut s = TraceSpectrum::zeros(geometry);
    let n = geometry.n;
    for k1 in 0..n {
        for k2 in 0..n {
            let coeff: Vec3 = std::array::from_fn(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let xi = geometry.wavevector(k1, k2);
            if geometry.is_nyquist(k1, k2) || !keep(xi) {
                continue;
            }
            let m = (geometry.mode_index(k1) as f64).hypot(geometry.mode_index(k2) as f64);
            let scale = (1.0 + m).powi(-2);
            s.coeffs[k1 * n + k2] = coeff.map(|z| z * scale);
        }
    }
    s.to_trace()
}

/// The random trace drawn by `seed` on an `n × n` cell of side `length`
/// (random Bloch shift, same spectrum law as [`random_trace`]).
pub fn seeded_trace(seed: u64, length: f64, n: usize) -> Result<TraceGrid> {
    CellGeometry::new(length, n, [0.0, 0.0], 0.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_geometry(&mut rng, length, n);
    Ok(random_trace(&mut rng, g, |_| true))
}

fn random_xi(rng: &mut impl Rng, radius: f64) -> [f64; 2] {
    let r = rng.gen_range(0.0..radius);
    let t = rng.gen_range(0.0..TAU);
    [r * t.cos(), r * t.sin()]
}

// ---------------------------------------------------------------------------
// Kernel algebra

/// DtN symbol assembled from mode tractions: split the trace into its P
/// and S parts with the reflection rule, then apply the traction matrix of
/// each mode. Flipped symbols give the downward map.
fn dtn_from_modes(medium: &ElasticMedium, s: &SpectralSymbols) -> Mat3 {
    let (x1, x2) = (c(s.xi[0], 0.0), c(s.xi[1], 0.0));
    let kp = [x1, x2, s.beta];
    let ks = [x1, x2, s.gamma];
    let p_part = Mat3::outer(&kp, &ks).scale(s.denom.inv());
    let s_part = Mat3::identity() - p_part;
    (traction_matrix(medium, &kp) * p_part + traction_matrix(medium, &ks) * s_part).scale(-I)
}

fn rel<const R: usize, const C: usize>(a: &Mat<R, C>, b: &Mat<R, C>, scale: f64) -> f64 {
    (*a - *b).max_abs() / scale.max(f64::MIN_POSITIVE)
}

pub fn check_kernel_identities(medium: &ElasticMedium, rng: &mut impl Rng, samples: usize) -> Vec<Check> {
    let mut worst = [0.0f64; 5];
    for _ in 0..samples {
        let xi = random_xi(rng, 3.0 * medium.kappa_s);
        let k = kernel_matrices(medium, xi);
        let d = k.symbols.denom;
        let id_d = Mat3::identity().scale(d);
        let e0 = rel(&(k.m_p + k.m_s), &id_d, d.norm().max(k.m_p.max_abs()));
        let e1 = rel(&(k.g * k.d), &k.m, k.m.max_abs().max(k.g.max_abs() * k.d.max_abs()));
        let mut stacked = Mat::<4, 3>::zeros();
        for j in 0..3 {
            stacked.0[j][j] = c(1.0, 0.0);
        }
        let e2 = rel(&(k.dtilde * k.d), &stacked, k.dtilde.max_abs() * k.d.max_abs());
        let e3 = rel(&(k.mtilde_p + k.mtilde_s), &k.v.scale(d), k.mtilde_p.max_abs().max(d.norm() * k.v.max_abs()));
        let up = dtn_from_modes(medium, &k.symbols);
        let down = dtn_from_modes(medium, &k.symbols.flipped());
        let e4 = rel(&k.m, &up, up.max_abs()).max(rel(&k.m_minus, &down, down.max_abs()));
        for (w, e) in worst.iter_mut().zip([e0, e1, e2, e3, e4]) {
            *w = w.max(e);
        }
    }
    let names = [
        ("kernels.mode_split", "M_p + M_s = (βγ+|ξ|²) I"),
        ("kernels.dtn_factorization", "G D = M"),
        ("kernels.decomposition_inverse", "D̃ D = [I; 0]"),
        ("kernels.correction_split", "M̃_p + M̃_s = (βγ+|ξ|²) V"),
        ("kernels.dtn_from_mode_tractions", "M and M⁻ against tractions of split P/S modes"),
    ];
    names
        .iter()
        .zip(worst)
        .map(|((name, what), w)| {
            Check::graded("kernels", name, w, 1e-13, format!("{what}; max relative error over {samples} random ξ"))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// DtN map

fn dtn_eigenvalues(medium: &ElasticMedium, xi: [f64; 2]) -> [f64; 3] {
    let m = dtn_symbol(medium, &medium.symbols(xi));
    hermitian_eigenvalues(&m.scale(-I).hermitian_part())
}

/// Smallest eigenvalue of the Hermitian part of `−iM(ξ)` on rings of the
/// given radii; radii within `1.1 κ_s` are reported but not graded.
pub fn check_dtn_positivity(medium: &ElasticMedium, radii: &[f64], n_angles: usize) -> Check {
    let mut graded = f64::INFINITY;
    let mut near = f64::INFINITY;
    for &r in radii {
        for k in 0..n_angles {
            let t = TAU * k as f64 / n_angles as f64;
            let lmin = dtn_eigenvalues(medium, [r * t.cos(), r * t.sin()])[0];
            if r > 1.1 * medium.kappa_s {
                graded = graded.min(lmin);
            } else {
                near = near.min(lmin);
            }
        }
    }
    let mut detail = format!("min eigenvalue of Re(−iM) = {graded:.6e} over |ξ| ∈ {radii:?}, {n_angles} angles");
    if near.is_finite() {
        detail.push_str(&format!("; near-circle samples (not graded) min {near:.6e}"));
    }
    Check::graded("dtn", "dtn.positivity", -graded, 0.0, detail)
}

/// Spread of the eigenvalues of `Re(−iM)` around each ring, relative to
/// their size.
pub fn check_dtn_isotropy(medium: &ElasticMedium, radii: &[f64], n_angles: usize) -> Check {
    let mut worst = 0.0f64;
    for &r in radii {
        let base = dtn_eigenvalues(medium, [r, 0.0]);
        let scale = base.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for k in 1..n_angles {
            let t = TAU * k as f64 / n_angles as f64;
            let e = dtn_eigenvalues(medium, [r * t.cos(), r * t.sin()]);
            for (a, b) in base.iter().zip(e) {
                worst = worst.max((a - b).abs() / scale);
            }
        }
    }
    Check::graded("dtn", "dtn.isotropy", worst, 1e-12, format!("eigenvalues of Re(−iM) along rings {radii:?}"))
}

/// FFT-based `apply_dtn` against the traction synthesized from the P/S
/// mode gradients of the same trace.
pub fn check_dtn_consistency(medium: &ElasticMedium, trace: &TraceGrid) -> Check {
    let via_dtn = apply_dtn(medium, trace, Direction::Up).spectrum();
    let dec = decompose_trace(medium, trace);
    let (mu, lambda) = (medium.mu, medium.lambda);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (mode, t) in dec.modes.iter().zip(&via_dtn.coeffs) {
        let g = mode.gradient_coefficient();
        let div = g[0][0] + g[1][1] + g[2][2];
        // T_j = μ(∂₃u_j + ∂_j u₃) + λ (∇·u) δ_j3
        let direct: Vec3 = std::array::from_fn(|j| {
            let d = if j == 2 { div * lambda } else { ZERO };
            (g[j][2] + g[2][j]) * mu + d
        });
        worst = worst.max(max_abs(&sub(t, &direct)));
        scale = scale.max(max_abs(t));
    }
    Check::graded(
        "dtn",
        "dtn.apply_vs_mode_traction",
        worst / scale.max(f64::MIN_POSITIVE),
        1e-12,
        format!("random {0}×{0} trace; relative to the largest traction coefficient", trace.n),
    )
}

// ---------------------------------------------------------------------------
// Flux identities

fn flux_checks(reports: &[FluxReport]) -> Vec<Check> {
    let power = reports.iter().map(|r| r.power.relative_gap()).fold(0.0, f64::max);
    let rellich = reports.iter().map(|r| r.rellich.relative_gap()).fold(0.0, f64::max);
    let n = reports.len();
    vec![
        Check::graded("flux", "flux.power", power, 1e-9, format!("Im∫Tu·ū against mode sum; max relative gap over {n} traces")),
        Check::graded(
            "flux",
            "flux.rellich",
            rellich,
            1e-9,
            format!("∫2Re(Tu·∂₃ū) − ℰ(u,ū) + ω²|u|² against mode sum; max relative gap over {n} traces"),
        ),
    ]
}

/// Both flux identities on one trace; skipped for the zero trace.
pub fn check_flux_identities(medium: &ElasticMedium, trace: &TraceGrid) -> Vec<Check> {
    if trace.max_abs() == 0.0 {
        return ["flux.power", "flux.rellich"]
            .iter()
            .map(|n| Check::skipped("flux", n, 1e-9, "trace is identically zero".into()))
            .collect();
    }
    flux_checks(&[flux_identities(medium, trace)])
}

/// For traces without propagating content the mode sums are empty; the
/// surface integrals must vanish to rounding relative to their integrands.
pub fn check_flux_evanescent(medium: &ElasticMedium, trace: &TraceGrid) -> Check {
    let r = flux_identities(medium, trace);
    let measured = [r.power, r.rellich]
        .iter()
        .map(|s| s.surface.abs().max(s.modes.abs()) / s.reference)
        .fold(0.0, f64::max);
    Check::graded(
        "flux",
        "flux.evanescent_zero",
        measured,
        1e-12,
        format!(
            "mode sums {:e}, {:e}; surface sides {:e}, {:e} (relative to integrand mass)",
            r.power.modes, r.rellich.modes, r.power.surface, r.rellich.surface
        ),
    )
}

// ---------------------------------------------------------------------------
// Propagation

/// FFT propagation against direct Rayleigh summation at the sample points.
pub fn check_propagation_rayleigh(medium: &ElasticMedium, trace: &TraceGrid, heights: &[f64]) -> Check {
    let expansion = rayleigh_coefficients(medium, trace);
    let scale = trace.max_abs();
    let mut worst = 0.0f64;
    for &h in heights {
        match propagate(medium, trace, h, Direction::Up) {
            Ok(up) => {
                for i in 0..trace.n {
                    for j in 0..trace.n {
                        let p = trace.point(i, j);
                        let direct = rayleigh_evaluate(&expansion, [p[0], p[1], trace.height + h]);
                        worst = worst.max(max_abs(&sub(&up.values[i * trace.n + j], &direct)));
                    }
                }
            }
            Err(e) => return Check::errored("propagation", "propagation.rayleigh", 1e-10, e),
        }
    }
    Check::graded(
        "propagation",
        "propagation.rayleigh",
        worst / scale,
        1e-10,
        format!("{0}×{0} trace at heights {heights:?}; relative to max trace value", trace.n),
    )
}

/// P/S amplitude norm of an evanescent-only trace shrinks at least like
/// `e^{−q dz}` with `q` the smallest decay rate present.
pub fn check_evanescent_decay(medium: &ElasticMedium, trace: &TraceGrid, dz: f64) -> Check {
    let before = decompose_trace(medium, trace);
    let amp_norm = |d: &crate::spectral::SpectralDecomposition| {
        d.modes
            .iter()
            .map(|m| m.a_p.norm_sqr() + m.a_s.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    };
    let coeffs = trace.spectrum().coeffs;
    let largest = coeffs.iter().fold(0.0f64, |a, v| a.max(max_abs(v)));
    let mut q = f64::INFINITY;
    for (m, coeff) in before.modes.iter().zip(&coeffs) {
        // Bins at rounding level of the synthesis are not part of the trace.
        if max_abs(coeff) > 1e-12 * largest {
            q = q.min(m.symbols.beta.im.min(m.symbols.gamma.im));
        }
    }
    let up = match propagate(medium, trace, dz, Direction::Up) {
        Ok(t) => t,
        Err(e) => return Check::errored("propagation", "propagation.evanescent_decay", 1e-12, e),
    };
    let after = decompose_trace(medium, &up);
    let ratio = amp_norm(&after) / amp_norm(&before);
    let bound = (-q * dz).exp();
    Check::graded(
        "propagation",
        "propagation.evanescent_decay",
        ratio / bound - 1.0,
        1e-12,
        format!("amplitude norm ratio {ratio:.6e} vs e^(−q dz) = {bound:.6e}, q = {q:.6e}, dz = {dz}"),
    )
}

// ---------------------------------------------------------------------------
// Plane-wave scattering

/// Observed FD orders of the Navier residual at steps h, h/2, h/4; returns
/// the smallest order and the residual norms.
fn navier_orders(medium: &ElasticMedium, field: impl Fn([f64; 3]) -> Vec3, x: [f64; 3], h: f64) -> (f64, Vec<f64>) {
    let res: Vec<f64> = [h, h / 2.0, h / 4.0].iter().map(|&s| max_abs(&navier_residual(medium, &field, x, s))).collect();
    if res.iter().all(|&r| r == 0.0) {
        return (f64::INFINITY, res);
    }
    let order = observed_orders(&res).into_iter().fold(f64::INFINITY, f64::min);
    (order, res)
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}

fn order_check(group: &str, name: &str, order: f64, res: &[f64], what: &str) -> Check {
    let measured = if order.is_finite() { 4.0 - order } else { 0.0 };
    let order_text = if order.is_finite() { format!("{order:.3}") } else { "n/a (zero residual)".into() };
    Check::graded(group, name, measured, 0.5, format!("{what}: observed order {order_text} (4 − order graded); residuals {}", fmt_list(res)))
}

pub fn check_scattering_consistency(medium: &ElasticMedium, spec: &PlaneWaveSpec, heights: &[f64], label: &str) -> Vec<Check> {
    let group = "scattering";
    let inc = incident_plane_modes(medium, spec);
    let refl = reflected_plane_modes(medium, spec);
    let mut total = inc.clone();
    total.extend(refl.clone());

    let mut bc = 0.0f64;
    for i in 0..10 {
        for j in 0..10 {
            let x = [-5.0 + 1.1 * i as f64, -5.0 + 1.05 * j as f64, 0.0];
            bc = bc.max(max_abs(&total.eval(x)));
        }
    }
    let desc = format!("θ = {:.4}, φ = {:.4}", spec.theta, spec.phi);

    // Each incident mode and its two reflected modes share a horizontal
    // wavevector, so they fit a quasi-periodic cell with that Bloch shift.
    let mut prop = 0.0f64;
    let top = heights.iter().fold(0.0f64, |a, &b| a.max(b)) + 0.5;
    for (k, m) in inc.modes.iter().enumerate() {
        let alpha = [m.wavevector[0].re, m.wavevector[1].re];
        let pair = ModeSum::new(refl.modes[2 * k..2 * k + 2].to_vec());
        let single = ModeSum::new(vec![*m]);
        let g = CellGeometry::new(3.0, 4, alpha, 0.0).expect("valid cell");
        let up_trace = TraceGrid::from_fn(g, |p| pair.eval([p[0], p[1], 0.0]));
        let gt = CellGeometry::new(3.0, 4, alpha, top).expect("valid cell");
        let down_trace = TraceGrid::from_fn(gt, |p| single.eval([p[0], p[1], top]));
        for &h in heights {
            let up = propagate(medium, &up_trace, h, Direction::Up);
            let down = propagate(medium, &down_trace, top - h, Direction::Down);
            let (up, down) = match (up, down) {
                (Ok(u), Ok(d)) => (u, d),
                (Err(e), _) | (_, Err(e)) => {
                    return vec![Check::errored(group, &format!("scattering.{label}.propagation"), 1e-11, e)]
                }
            };
            for i in 0..4 {
                for j in 0..4 {
                    let p = g.point(i, j);
                    let x = [p[0], p[1], h];
                    prop = prop.max(max_abs(&sub(&up.values[i * 4 + j], &pair.eval(x))));
                    prop = prop.max(max_abs(&sub(&down.values[i * 4 + j], &single.eval(x))));
                }
            }
        }
    }

    let x0 = [0.3, -0.2, 0.7];
    let (order, res) = navier_orders(medium, |x| total.eval(x), x0, default_step(medium));
    vec![
        Check::graded(group, &format!("scattering.{label}.boundary"), bc, 1e-12, format!("{desc}; max |u_in + u_ref| at 100 points of x3 = 0")),
        Check::graded(
            group,
            &format!("scattering.{label}.propagation"),
            prop,
            1e-11,
            format!("{desc}; angular spectrum propagation vs closed form at heights {heights:?}"),
        ),
        order_check(group, &format!("scattering.{label}.navier_order"), order, &res, &desc),
    ]
}

// ---------------------------------------------------------------------------
// Beams

fn default_beams(medium: &ElasticMedium) -> Vec<(&'static str, SpectralBeamSpec)> {
    let p = BeamDensity::Pressure(vec![Bump { center: [0.2, -0.1], width: 0.5, weight: c(1.0, 0.0) }]);
    let q = [c(0.3, 0.0), c(1.0, 0.0), c(0.2, 0.1)];
    let s = BeamDensity::Shear(vec![Bump { center: [0.5, 0.3], width: 0.8, weight: ShearWeight::Fixed(q) }]);
    vec![
        ("p", SpectralBeamSpec::new(medium, p, 0.8 * medium.kappa_p, 1.0).expect("valid beam")),
        ("s", SpectralBeamSpec::new(medium, s, 0.75 * medium.kappa_s, 1.0).expect("valid beam")),
    ]
}

/// Rigid boundary residual, the surface source density against mode
/// tractions, and the Navier residual order of the total beam field, all
/// with one fixed node set.
pub fn check_beam_consistency(medium: &ElasticMedium, spec: &SpectralBeamSpec, label: &str) -> Vec<Check> {
    let group = "beams";
    let rule = BeamRule { radial: 16, angular: 32 };
    let inc = incident_beam_modes(medium, spec, rule);
    let refl = reflected_beam_modes(medium, spec, rule);
    let mut total = inc.clone();
    total.extend(refl);

    let mut bc = 0.0f64;
    let mut scale = 0.0f64;
    let mut src = 0.0f64;
    let mut src_scale = 0.0f64;
    for i in 0..7 {
        for j in 0..7 {
            let x = [-3.0 + i as f64, -3.0 + j as f64, 0.0];
            bc = bc.max(max_abs(&total.eval(x)));
            scale = scale.max(max_abs(&inc.eval(x)));
            if i % 3 == 0 && j % 3 == 0 {
                let closed = source_density_with_rule(medium, spec, [x[0], x[1]], rule);
                let mut direct = [ZERO; 3];
                for m in &inc.modes {
                    let s = medium.symbols([m.wavevector[0].re, m.wavevector[1].re]);
                    let a = m.eval(x);
                    let t = m.traction(medium, x);
                    let dtn = dtn_from_modes(medium, &s).mul_vec(&a);
                    for k in 0..3 {
                        direct[k] += t[k] - I * dtn[k];
                    }
                }
                src = src.max(max_abs(&sub(&closed, &direct)));
                src_scale = src_scale.max(max_abs(&direct));
            }
        }
    }
    let x0 = [0.2, 0.1, 0.4];
    let (order, res) = navier_orders(medium, |x| total.eval(x), x0, default_step(medium));
    vec![
        Check::graded(group, &format!("beams.{label}.boundary"), bc / scale, 1e-12, "max |u_in + u_ref| on x3 = 0 relative to max |u_in|".into()),
        Check::graded(
            group,
            &format!("beams.{label}.source_density"),
            src / src_scale,
            1e-10,
            "closed-form surface source vs Tu_in − i M u_in from mode tractions".into(),
        ),
        order_check(group, &format!("beams.{label}.navier_order"), order, &res, "incident + reflected beam"),
    ]
}

// ---------------------------------------------------------------------------
// Green tensors

fn random_point(rng: &mut impl Rng, lateral: f64, lo: f64, hi: f64) -> [f64; 3] {
    [rng.gen_range(-lateral..lateral), rng.gen_range(-lateral..lateral), rng.gen_range(lo..hi)]
}

pub fn check_greens(medium: &ElasticMedium, config: &QuadratureConfig, rng: &mut impl Rng) -> Vec<Check> {
    let group = "greens";
    let mut checks = Vec::new();

    // Dirichlet trace in the source variable.
    let mut worst: Result<f64> = Ok(0.0);
    for _ in 0..20 {
        let x = random_point(rng, 1.5, 0.2, 1.5);
        let mut y = random_point(rng, 1.5, 0.0, 1.0);
        y[2] = 0.0;
        worst = worst.and_then(|w| Ok(w.max(greens_halfspace(medium, x, y, config)?.value.max_abs())));
    }
    checks.push(match worst {
        Ok(w) => Check::graded(group, "greens.dirichlet_trace", w, config.tolerance, "max |G_H(x, (y', 0))| over 20 pairs".into()),
        Err(e) => Check::errored(group, "greens.dirichlet_trace", config.tolerance, e),
    });

    // Transpose symmetry and parts recombination.
    let mut sym: Result<(f64, f64)> = Ok((0.0, 0.0));
    for _ in 0..10 {
        let x = random_point(rng, 1.5, 0.2, 1.5);
        let y = random_point(rng, 1.5, 0.2, 1.5);
        sym = sym.and_then(|(s, p)| {
            let a = greens_halfspace(medium, x, y, config)?;
            let b = greens_halfspace(medium, y, x, config)?;
            let gap = (a.value - b.value.transpose()).max_abs();
            let allowed = 10.0 * a.error_estimate.max(b.error_estimate);
            let parts = a.parts.expect("parts are always returned");
            let recomb = (a.value - (parts.free - parts.image + parts.correction)).max_abs();
            Ok((s.max(gap / allowed), p.max(recomb)))
        });
    }
    match sym {
        Ok((s, p)) => {
            checks.push(Check::graded(group, "greens.symmetry", s, 1.0, "max |G_H(x,y) − G_H(y,x)ᵀ| / (10 · error estimate) over 10 pairs".into()));
            checks.push(Check::graded(group, "greens.parts", p, 0.0, "value − (free − image + correction)".into()));
        }
        Err(e) => {
            checks.push(Check::errored(group, "greens.symmetry", 1.0, &e));
            checks.push(Check::errored(group, "greens.parts", 0.0, &e));
        }
    }

    // Vertically aligned points: full polar quadrature vs radial reduction.
    let axial = (|| -> Result<f64> {
        let full = correction_integral(medium, [0.2, 0.1, 0.9], [0.2, 0.1, 0.4], config)?;
        let red = correction_axial(medium, 0.9, 0.4, config)?;
        Ok(((full.p + full.s) - (red.p + red.s)).max_abs())
    })();
    checks.push(match axial {
        Ok(v) => Check::graded(group, "greens.axial_reduction", v, 1e-9, "polar quadrature vs radial integral for x' = y'".into()),
        Err(e) => Check::errored(group, "greens.axial_reduction", 1e-9, e),
    });

    // Navier residual of the columns, as functions of y.
    let x = [0.2, -0.1, 0.9];
    let y0 = [0.8, 0.4, 0.6];
    let h = default_step(medium);
    let mut free_order = f64::INFINITY;
    let mut free_res = Vec::new();
    for col in 0..3 {
        let (o, r) = navier_orders(medium, |y| greens_free(medium, x, y).expect("distinct points").column(col), y0, h);
        if o < free_order {
            free_order = o;
            free_res = r;
        }
    }
    checks.push(order_check(group, "greens.free_navier_order", free_order, &free_res, "columns of G(x, ·)"));
    match correction_integral(medium, x, y0, config) {
        Ok(corr) => {
            let mut order = f64::INFINITY;
            let mut res = Vec::new();
            for col in 0..3 {
                let field = |y: [f64; 3]| greens_halfspace_with_rule(medium, &corr.rule, x, y).expect("distinct points").column(col);
                let (o, r) = navier_orders(medium, field, y0, h);
                if o < order {
                    order = o;
                    res = r;
                }
            }
            checks.push(order_check(group, "greens.halfspace_navier_order", order, &res, "columns of G_H(x, ·) with a fixed radial rule"));
        }
        Err(e) => checks.push(Check::errored(group, "greens.halfspace_navier_order", 0.5, e)),
    }
    checks
}

// ---------------------------------------------------------------------------
// Layer potential

/// The hat kernel against the angular spectrum kernel at random `(ξ, x₃)`,
/// and the layer potential of a Gaussian patch against FFT propagation of
/// its samples on a large periodic cell.
pub fn check_layer_potential(medium: &ElasticMedium, config: &QuadratureConfig, rng: &mut impl Rng, samples: usize) -> Vec<Check> {
    let group = "layer";
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let xi = random_xi(rng, 3.0 * medium.kappa_s);
        let x = random_point(rng, 2.0, 0.01, 3.0);
        let a = hat_kernel(medium, xi, x);
        let b = asr_hat_kernel(medium, xi, x);
        worst = worst.max((a - b).max_abs() / b.max_abs());
    }
    let mut checks = vec![Check::graded(
        group,
        "layer.hat_kernel_identity",
        worst,
        1e-10,
        format!("hat kernel vs angular spectrum kernel; max relative error over {samples} random (ξ, x)"),
    )];

    let patch = GaussianPatch::new([c(1.0, 0.0), c(0.3, -0.2), c(-0.5, 0.4)], [0.0, 0.0], 1.5, [7.0, 0.5])
        .expect("valid patch");
    let two_path = layer_two_path(medium, &patch, config, 32.0, 256, &[0.25, 0.5], 2);
    checks.push(match two_path {
        Ok((gap, targets)) => Check::graded(
            group,
            "layer.two_path",
            gap,
            1e-4,
            format!("layer potential vs FFT propagation of the sampled patch at {targets} targets; relative to max |u|"),
        ),
        Err(e) => Check::errored(group, "layer.two_path", 1e-4, e),
    });
    checks
}

/// Compares `layer_potential` (and `extend_upward`) with FFT propagation of
/// the patch sampled on a cell of side `length` centred on the patch.
/// Targets are grid points near the patch at the given heights. Returns the
/// largest gap relative to the field size and the number of targets.
pub fn layer_two_path(
    medium: &ElasticMedium,
    patch: &GaussianPatch,
    config: &QuadratureConfig,
    length: f64,
    n: usize,
    heights: &[f64],
    per_height: usize,
) -> Result<(f64, usize)> {
    let g = CellGeometry::new(length, n, [0.0, 0.0], 0.0)?;
    let (center, _) = patch.support();
    let wrap = |v: f64, c: f64| {
        let d = (v - c).rem_euclid(length);
        if d >= 0.5 * length {
            c + d - length
        } else {
            c + d
        }
    };
    let trace = TraceGrid::from_fn(g, |y| patch.value([wrap(y[0], center[0]), wrap(y[1], center[1])]));
    let step = g.spacing();
    let mut gap = 0.0f64;
    let mut scale = 0.0f64;
    let mut count = 0;
    for &h in heights {
        let up = propagate(medium, &trace, h, Direction::Up)?;
        for k in 0..per_height {
            // Walk outwards from the patch centre along a diagonal.
            let off = (3 * k) as i64;
            let i = ((center[0] / step).round() as i64 + off).rem_euclid(n as i64) as usize;
            let j = ((center[1] / step).round() as i64 - off).rem_euclid(n as i64) as usize;
            let p = g.point(i, j);
            let x = [wrap(p[0], center[0]), wrap(p[1], center[1]), h];
            let a = layer_potential(medium, patch, x, config)?;
            let b = extend_upward(medium, patch, x, config)?;
            let v = up.values[i * n + j];
            gap = gap.max(max_abs(&sub(&a.value, &v))).max(max_abs(&sub(&a.value, &b.value)));
            scale = scale.max(max_abs(&v));
            count += 1;
        }
    }
    Ok((gap / scale, count))
}

// ---------------------------------------------------------------------------
// Far-field decay

pub fn check_decay(medium: &ElasticMedium, config: &QuadratureConfig) -> Vec<Check> {
    let group = "decay";
    let d = [0.5, 0.2, 0.71f64.sqrt()];
    let y = [0.3, -0.2, 0.5];
    let radii: Vec<f64> = (0..8).map(|k| 10.0 * 8f64.powf(k as f64 / 7.0) / medium.kappa_p).collect();
    match kupradze_decay_diagnostic(medium, config, d, y, &radii) {
        Ok(r) => {
            let detail = |s: f64| format!("log-log slope {s:.4} for r ∈ [10, 80]/κ_p along {d:.3?}; |slope + 1| graded");
            vec![
                Check::graded(group, "decay.correction_p", (r.slope_p + 1.0).abs(), 0.3, detail(r.slope_p)),
                Check::graded(group, "decay.correction_s", (r.slope_s + 1.0).abs(), 0.3, detail(r.slope_s)),
                Check::graded(group, "decay.correction", (r.slope + 1.0).abs(), 0.3, detail(r.slope)),
                Check::graded(
                    group,
                    "decay.free_reference",
                    (r.reference_slope + 1.0).abs(),
                    0.05,
                    format!("slope {:.4} of |e^(iκ_p r)/(4πr)| on the same radii", r.reference_slope),
                ),
            ]
        }
        Err(e) => ["decay.correction_p", "decay.correction_s", "decay.correction", "decay.free_reference"]
            .iter()
            .map(|n| Check::errored(group, n, 0.3, &e))
            .collect(),
    }
}

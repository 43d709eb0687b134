//! Per-wavevector kernel matrices of the angular spectrum representation.

use crate::linalg::{c, Mat, Mat3, Vec3, I, ONE, ZERO};
use crate::medium::{ElasticMedium, SpectralSymbols};

/// Every matrix attached to one horizontal wavevector ξ.
///
/// Notation: β, γ are the vertical wavenumbers of the upward P and S modes
/// and `denom = βγ + |ξ|²`.
#[derive(Clone, Copy, Debug)]
pub struct KernelMatrices {
    pub symbols: SpectralSymbols,
    /// Coefficient matrix of the 4×4 system linking a Dirichlet trace to
    /// the amplitudes `(A_p, A_s)`.
    pub dtilde: Mat<4, 4>,
    /// Left inverse of `dtilde` restricted to `(A_s · (ξ, γ) = 0)`:
    /// maps a trace to `(A_p, A_s)`.
    pub d: Mat<4, 3>,
    /// `(ξ, β) ⊗ (ξ, γ)`
    pub m_p: Mat3,
    /// `denom · I − m_p`
    pub m_s: Mat3,
    /// `(ξ, −β) ⊗ (ξ, −γ)`
    pub m_p_down: Mat3,
    pub m_s_down: Mat3,
    /// Spectral traction of the amplitude vector `(A_p, A_s)`.
    pub g: Mat<3, 4>,
    /// Upward Dirichlet-to-Neumann symbol: traction = i·M·trace.
    pub m: Mat3,
    /// Downward Dirichlet-to-Neumann symbol.
    pub m_minus: Mat3,
    pub v: Mat3,
    pub mtilde_p: Mat3,
    pub mtilde_s: Mat3,
    /// Traction of an upward P mode amplitude: `T(a e^{i(ξ,β)·x}) = T_p a e^{…}`.
    pub t_p: Mat3,
    /// Same for an upward S mode.
    pub t_s: Mat3,
}

pub fn kernel_matrices(medium: &ElasticMedium, xi: [f64; 2]) -> KernelMatrices {
    let s = medium.symbols(xi);
    let (x1, x2) = (c(xi[0], 0.0), c(xi[1], 0.0));
    let (b, g, d) = (s.beta, s.gamma, s.denom);
    let r2 = c(s.xi_norm_sq(), 0.0);

    let dtilde = Mat([
        [x1, ONE, ZERO, ZERO],
        [x2, ZERO, ONE, ZERO],
        [b, ZERO, ZERO, ONE],
        [ZERO, x1, x2, g],
    ]);
    let dm = Mat([
        [x1, x2, g],
        [b * g + x2 * x2, -x1 * x2, -x1 * g],
        [-x1 * x2, b * g + x1 * x1, -x2 * g],
        [-x1 * b, -x2 * b, r2],
    ])
    .scale(d.inv());

    let m_p = Mat3::outer(&[x1, x2, b], &[x1, x2, g]);
    let m_s = Mat3::identity().scale(d) - m_p;
    let m_p_down = Mat3::outer(&[x1, x2, -b], &[x1, x2, -g]);
    let m_s_down = Mat3::identity().scale(d) - m_p_down;

    let (mu, lambda) = (medium.mu, medium.lambda);
    let kp2 = medium.kappa_p * medium.kappa_p;
    let gm = Mat([
        [b * x1 * (2.0 * mu), g * mu, ZERO, x1 * mu],
        [b * x2 * (2.0 * mu), ZERO, g * mu, x2 * mu],
        [b * b * (2.0 * mu) + lambda * kp2, ZERO, ZERO, g * (2.0 * mu)],
    ]);

    let v = Mat([[ZERO, ZERO, x1], [ZERO, ZERO, x2], [x1, x2, ZERO]]);
    let mtilde_p = m_p * v;
    let mtilde_s = m_s * v;

    KernelMatrices {
        symbols: s,
        dtilde,
        d: dm,
        m_p,
        m_s,
        m_p_down,
        m_s_down,
        g: gm,
        m: dtn_symbol(medium, &s),
        m_minus: dtn_symbol(medium, &s.flipped()),
        v,
        mtilde_p,
        mtilde_s,
        t_p: traction_matrix(medium, &[x1, x2, b]),
        t_s: traction_matrix(medium, &[x1, x2, g]),
    }
}

/// Closed-form Dirichlet-to-Neumann symbol M(ξ). Passing flipped symbols
/// (β, γ → −β, −γ) yields the downward symbol M⁻(ξ).
pub fn dtn_symbol(medium: &ElasticMedium, s: &SpectralSymbols) -> Mat3 {
    let (x1, x2) = (s.xi[0], s.xi[1]);
    let (b, g) = (s.beta, s.gamma);
    let mu = medium.mu;
    let w2 = medium.omega2();
    let ks2 = medium.kappa_s * medium.kappa_s;
    let r2 = s.xi_norm_sq();
    let cc = (b * g) * (2.0 * mu) + (2.0 * mu * r2 - w2);
    let gb = g - b;
    Mat([
        [(gb * x2 * x2 + b * ks2) * mu, -gb * (mu * x1 * x2), cc * x1],
        [-gb * (mu * x1 * x2), (gb * x1 * x1 + b * ks2) * mu, cc * x2],
        [-cc * x1, -cc * x2, g * w2],
    ])
    .scale(s.denom.inv())
}

/// Traction matrix of a plane mode `a e^{i k·x}` on a horizontal plane:
/// `T(a e^{ik·x}) = T_k a e^{ik·x}` with
/// `T u = 2μ ∂₃u + λ (∇·u) e₃ + μ e₃ × (∇×u)`.
pub fn traction_matrix(medium: &ElasticMedium, k: &Vec3) -> Mat3 {
    let (mu, lambda) = (medium.mu, medium.lambda);
    Mat([
        [k[2] * mu, ZERO, k[0] * mu],
        [ZERO, k[2] * mu, k[1] * mu],
        [k[0] * lambda, k[1] * lambda, k[2] * (lambda + 2.0 * mu)],
    ])
    .scale(I)
}

/// Mode-wise angular spectrum kernel moving a trace a height `dz ≥ 0` up
/// (or down).
pub fn asr_kernel(s: &SpectralSymbols, dz: f64, upward: bool) -> Mat3 {
    let (x1, x2) = (c(s.xi[0], 0.0), c(s.xi[1], 0.0));
    let sign = if upward { 1.0 } else { -1.0 };
    let (b, g) = (s.beta * sign, s.gamma * sign);
    let mp = Mat3::outer(&[x1, x2, b], &[x1, x2, g]).scale(s.denom.inv());
    // Downward modes travel towards −x₃, so the exponent is e^{iβ·dz} in
    // both directions.
    let eb = (I * s.beta * dz).exp();
    let eg = (I * s.gamma * dz).exp();
    Mat3::from_fn(|r, col| {
        let id = if r == col { ONE } else { ZERO };
        mp.0[r][col] * eb + (id - mp.0[r][col]) * eg
    })
}

/// Vertical wavevectors of the upward P and S modes.
pub fn upward_wavevectors(s: &SpectralSymbols) -> (Vec3, Vec3) {
    let (x1, x2) = (c(s.xi[0], 0.0), c(s.xi[1], 0.0));
    ([x1, x2, s.beta], [x1, x2, s.gamma])
}

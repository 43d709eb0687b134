//! Free-space and rigid half-space Green tensors, the spectral correction
//! integral, layer potentials over the rigid plane and far-field decay.

mod decay;
mod free;
mod halfspace;
mod layer;

pub use decay::{kupradze_decay_diagnostic, loglog_slope, DecayReport};
pub use free::{greens_free, scalar_green, scalar_green_hessian};
pub use halfspace::{
    correction_axial, correction_integral, greens_halfspace, greens_halfspace_with_rule, CorrectionIntegral,
    GreensParts, GreensResult, QuadratureConfig, RadialNode, RadialRule, XiMaxPolicy,
};
pub use layer::{
    asr_hat_kernel, correction_traction_transform, extend_upward, greens_plane_transform, hat_kernel,
    layer_potential, CompactTrace, GaussianPatch, LayerPotential,
};

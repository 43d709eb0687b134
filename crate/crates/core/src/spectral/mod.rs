//! Spectral kernels, trace grids and the mode-wise operators built on them.

pub mod flux;
pub mod kernels;
pub mod ops;
pub mod trace;

pub use flux::{flux_identities, FluxReport, FluxSides};
pub use kernels::{asr_kernel, dtn_symbol, kernel_matrices, traction_matrix, KernelMatrices};
pub use ops::{
    apply_dtn, decompose_trace, propagate, rayleigh_coefficients, rayleigh_evaluate, Direction, ModeAmplitudes,
    RayleighExpansion, RayleighMode, SpectralDecomposition,
};
pub use trace::{CellGeometry, TraceGrid, TraceSpectrum};

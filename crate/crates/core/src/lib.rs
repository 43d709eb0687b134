//! Time-harmonic elastic waves above a rigid plane.
//!
//! The crate collects the kernels needed to work with elastic fields in the
//! upper half-space `x3 > 0` bounded by a rigid (Dirichlet) plane:
//!
//! * [`medium`]: Lamé parameters, wavenumbers and the vertical symbols β, γ.
//! * [`spectral`]: per-wavevector kernel matrices, trace grids, angular
//!   spectrum propagation, Dirichlet-to-Neumann maps, Rayleigh expansions
//!   and the surface energy-flux identities.
//! * [`waves`]: plane waves and spectral beams together with their
//!   reflections, tractions and a finite-difference Navier residual.
//! * [`greens`]: free-space and half-space Green tensors, the layer
//!   potential on the rigid plane and a far-field decay diagnostic.
//! * [`validate`]: a seeded suite that checks all of the above against
//!   independent code paths and reports the results.

pub mod error;
pub mod greens;
pub mod linalg;
pub mod medium;
pub mod quadrature;
pub mod spectral;
pub mod validate;
pub mod waves;

pub use error::{Error, Result};
pub use medium::{ElasticMedium, SpectralSymbols};
pub use num_complex::Complex64;

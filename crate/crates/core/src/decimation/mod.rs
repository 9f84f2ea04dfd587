//! Closed-form spectral decimation.
//!
//! The scale-m operator is spectrally similar to the scale-(m-1) operator
//! with functions
//!
//! ```text
//! phi0(z) = cos 2b / (2 (1 - z))
//! phi1(z) = (-2z^2 + 4z - 1 + cos 2b) / (2 (1 - z))
//! ```
//!
//! where `b = beta_m`, so eigenvalues at scale `m` are preimages of scale
//! `m - 1` eigenvalues under `R = phi1 / phi0`, plus the value `1`.

mod extension;
mod functions;
mod renormalize;
mod schur;
mod spectrum;

pub use extension::{
    eigen_residual, extend_eigenfunction, extend_with_form, from_symmetric, max_edge_difference,
    to_symmetric,
};
pub use functions::{
    decimation_map, inverse_branches, phi_pair, DecimationFunctions, COLLISION_RADICAND,
    DEGENERATE_COS, ILL_CONDITIONED_COS,
};
pub use renormalize::{
    admissible_limit, fractal_spectrum, psi_derivative, psi_factor, AdmissibleSequence, Branch,
    FractalEigenvalue, FractalSpectrum, RenormalizedLimit,
};
pub use schur::{schur_complement, SchurSplit, MAX_RESOLVENT_CONDITION};
pub use spectrum::{
    dirichlet_dimension, level_spectrum, refine, unit_multiplicity, SpectrumRow, SpectrumTable,
    MERGE_TOLERANCE,
};

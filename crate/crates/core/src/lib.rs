//! Graph approximations of the diamond lattice fractal, magnetic operators
//! on them, and their spectra by spectral decimation and by dense
//! eigensolves.

pub mod assembly;
pub mod decimation;
pub mod error;
pub mod gauge;
pub mod oracle;
pub mod topology;

pub use assembly::{
    assemble, assemble_schedule, form_value, gauge_conjugate, laplacian, BoundaryMode,
    HermitianOperator, VertexFunction,
};
pub use decimation::{
    admissible_limit, fractal_spectrum, level_spectrum, psi_derivative, AdmissibleSequence,
    DecimationFunctions, FractalSpectrum, SpectrumRow, SpectrumTable,
};
pub use error::{Error, Result};
pub use gauge::{
    discrete_flux, hilbert_norm_sq, realize_one_form, uniform_schedule, BetaSchedule,
    EdgeOneForm, ScheduleKind,
};
pub use oracle::{compare, eigensolve, verify_similarity, ComparisonReport, EigenDecomposition};
pub use topology::{
    build_level_graph, build_level_graph_with_order, cell_area, cell_boundary, CellWord,
    ChildOrder, Embedding, LevelGraph,
};

pub use num_complex::Complex64;

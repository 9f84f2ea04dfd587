use thiserror::Error;

/// Errors produced by graph construction, field realization, operator
/// assembly and the decimation machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("address error: {0}")]
    Address(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("schedule covers scales 1..={available} but scale {requested} was requested")]
    ScheduleLength { requested: usize, available: usize },

    #[error("cell {word} at scale {cell_scale} has no hole in a scale-{form_scale} form")]
    NoHole {
        word: String,
        cell_scale: usize,
        form_scale: usize,
    },

    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("pole at z = 1")]
    Pole,

    #[error("degenerate field: |cos 2beta| = {cos2beta:.3e} is below the decimation threshold")]
    DegenerateField { cos2beta: f64 },

    #[error("resolvent error: fine block Q - z is numerically singular (condition {condition:.3e})")]
    Resolvent { condition: f64 },

    #[error("admissibility error: {0}")]
    Admissibility(String),

    #[error("zero factor in derivative product at scale {scale}")]
    ZeroProduct { scale: usize },

    #[error("dimension {dim} exceeds the dense eigensolver cap {cap}; lower the level (m <= 5 fits the default cap)")]
    OracleCap { dim: usize, cap: usize },

    #[error("z-grid point {z} is within {distance:.3e} of the fine-block spectrum (margin {margin:.1e})")]
    Grid { z: String, distance: f64, margin: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Library side of the `dspec` command: schedule sources, sweeps, CSV and
//! SVG output, and the verification suites.

pub mod csvio;
pub mod figures;
pub mod schedule;
pub mod svg;
pub mod verify;

/// Sizes the global rayon pool from `DSPEC_THREADS` when it is set to a
/// positive integer. Returns the value that was applied.
pub fn configure_threads() -> Option<usize> {
    let n = std::env::var("DSPEC_THREADS").ok()?.trim().parse::<usize>().ok()?;
    if n == 0 {
        return None;
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok()?;
    Some(n)
}

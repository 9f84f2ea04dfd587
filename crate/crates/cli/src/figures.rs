//! Field-strength sweeps and the consistency checks run on them.

use rayon::prelude::*;

use dlf_core::decimation::decimation_map;
use dlf_core::oracle::DEFAULT_CLUSTER_GAP;
use dlf_core::{
    build_level_graph, compare, eigensolve, fractal_spectrum, laplacian, level_spectrum,
    uniform_schedule, BoundaryMode, ComparisonReport, Error, FractalSpectrum, Result,
    SpectrumTable,
};

use crate::schedule::geometric_schedule;

/// Inclusive grid `beta_min..=beta_max` with `steps` points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaGrid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Default for BetaGrid {
    fn default() -> Self {
        BetaGrid {
            min: 0.0,
            max: std::f64::consts::PI,
            steps: 64,
        }
    }
}

impl BetaGrid {
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Domain("beta grid needs at least one step".into()));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.max < self.min {
            return Err(Error::Domain(format!(
                "beta range [{}, {}] is not a finite interval",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.min + (self.max - self.min) * i as f64 / last)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ButterflyColumn {
    pub beta: f64,
    pub table: SpectrumTable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FractalColumn {
    pub beta: f64,
    pub spectrum: FractalSpectrum,
}

pub fn butterfly_sweep(grid: &BetaGrid, ratio: f64, level: usize) -> Result<Vec<ButterflyColumn>> {
    grid.validate()?;
    if level > 12 {
        return Err(Error::Domain(format!("butterfly level {level} exceeds 12")));
    }
    grid.points()
        .into_par_iter()
        .map(|beta| {
            let table = level_spectrum(&geometric_schedule(beta, ratio, level)?, level)?;
            Ok(ButterflyColumn { beta, table })
        })
        .collect()
}

pub fn fractal_sweep(
    grid: &BetaGrid,
    ratio: f64,
    depth: usize,
    count: usize,
) -> Result<Vec<FractalColumn>> {
    grid.validate()?;
    if !(ratio > 0.0 && ratio < 0.25) {
        return Err(Error::Admissibility(format!(
            "fractal spectra need 0 < r < 1/4, got r = {ratio}"
        )));
    }
    grid.points()
        .into_par_iter()
        .map(|beta| {
            let spectrum = fractal_spectrum(&uniform_schedule(beta, ratio, depth)?, count, depth)?;
            Ok(FractalColumn { beta, spectrum })
        })
        .collect()
}

/// Zero-field Dirichlet spectrum in closed form: `1 - cos(j pi / 2^m)` for
/// `j = 2^(b-1) * odd`, born at level `b` with multiplicity `(4^b + 2) / 3`.
/// Returned as `(value, multiplicity, birth_level)` in increasing order.
pub fn zero_field_closed_form(m: usize) -> Vec<(f64, u64, usize)> {
    let n = 1u64 << m;
    (1..n)
        .map(|j| {
            let b = j.trailing_zeros() as usize + 1;
            let value = 1.0 - (std::f64::consts::PI * j as f64 / n as f64).cos();
            (value, (4u64.pow(b as u32) + 2) / 3, b)
        })
        .collect()
}

/// Agreement of a zero-field table with the closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReductionCheck {
    pub max_error: f64,
    pub mismatches: usize,
}

pub fn reduction_against_closed_form(table: &SpectrumTable) -> ReductionCheck {
    let exact = zero_field_closed_form(table.scale());
    let mut mismatches = exact.len().abs_diff(table.rows().len());
    let mut max_error = 0.0f64;
    for (row, (value, mult, birth)) in table.rows().iter().zip(&exact) {
        max_error = max_error.max((row.value - value).abs());
        if (row.multiplicity, row.birth_level) != (*mult, *birth) {
            mismatches += 1;
        }
    }
    ReductionCheck {
        max_error,
        mismatches,
    }
}

/// Compares a table with the dense spectrum of the plain Laplacian.
pub fn reduction_against_oracle(table: &SpectrumTable) -> Result<ComparisonReport> {
    let op = laplacian(&build_level_graph(table.scale()), BoundaryMode::Dirichlet)?;
    compare(table, &eigensolve(&op)?, DEFAULT_CLUSTER_GAP)
}

/// Outcome of pushing every fine row down to the coarse level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PersistenceCheck {
    /// Largest distance between a mapped fine value and its coarse row.
    pub max_error: f64,
    /// Fine rows whose image matched no coarse row or matched one with a
    /// different birth level.
    pub lost_rows: usize,
    /// Coarse rows whose descendants do not carry `4^(fine - coarse)` times
    /// their multiplicity.
    pub multiplicity_mismatches: usize,
}

impl PersistenceCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_error <= tol && self.lost_rows == 0 && self.multiplicity_mismatches == 0
    }
}

/// Every coarse eigenvalue must reappear in the fine table as a full
/// preimage tree: mapping each inherited fine row through
/// `R_coarse+1 o ... o R_fine` lands on a coarse row with the same birth
/// level, and the fine multiplicities over each coarse row add up to
/// `2^(fine - coarse)` copies of it.
pub fn persistence(
    coarse: &SpectrumTable,
    fine: &SpectrumTable,
    betas: &[f64],
    tol: f64,
) -> Result<PersistenceCheck> {
    let (mc, mf) = (coarse.scale(), fine.scale());
    if mf <= mc || betas.len() < mf {
        return Err(Error::Domain(format!(
            "persistence needs coarse < fine <= schedule length, got {mc}, {mf}, {}",
            betas.len()
        )));
    }
    let mut carried = vec![0u64; coarse.rows().len()];
    let mut check = PersistenceCheck {
        max_error: 0.0,
        lost_rows: 0,
        multiplicity_mismatches: 0,
    };
    for row in fine.rows().iter().filter(|r| r.birth_level <= mc) {
        let mut z = row.value;
        for k in (mc + 1..=mf).rev() {
            z = decimation_map(z, betas[k - 1])?;
        }
        let nearest = coarse
            .rows()
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.value - z).abs().total_cmp(&(b.1.value - z).abs()));
        match nearest {
            Some((i, c)) if (c.value - z).abs() <= tol && c.birth_level == row.birth_level => {
                check.max_error = check.max_error.max((c.value - z).abs());
                carried[i] += row.multiplicity;
            }
            _ => check.lost_rows += 1,
        }
    }
    let copies = 1u64 << (mf - mc);
    check.multiplicity_mismatches = coarse
        .rows()
        .iter()
        .zip(&carried)
        .filter(|(c, &n)| n != copies * c.multiplicity)
        .count();
    Ok(check)
}

/// `max |lambda_k(beta) - lambda_k(0)| / lambda_k(0)` over the sweep,
/// ranks compared position by position against the `beta = 0` column.
pub fn max_relative_deviation(columns: &[FractalColumn]) -> Result<f64> {
    let base = columns
        .iter()
        .find(|c| c.beta == 0.0)
        .ok_or_else(|| Error::Domain("sweep has no beta = 0 column".into()))?;
    let mut worst = 0.0f64;
    for col in columns {
        for (v, v0) in col.spectrum.values.iter().zip(&base.spectrum.values) {
            worst = worst.max((v.lambda - v0.lambda).abs() / v0.lambda);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = BetaGrid {
            min: -1.0,
            max: 1.0,
            steps: 5,
        };
        assert_eq!(g.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        let one = BetaGrid { steps: 1, ..g };
        assert_eq!(one.points(), vec![-1.0]);
        assert!(BetaGrid { steps: 0, ..g }.validate().is_err());
        assert_eq!(BetaGrid::default().points().len(), 64);
    }

    #[test]
    fn closed_form_level_two() {
        let rows = zero_field_closed_form(2);
        let mults: Vec<u64> = rows.iter().map(|r| r.1).collect();
        assert_eq!(mults, vec![2, 6, 2]);
        assert_eq!(rows[1].2, 2);
    }
}

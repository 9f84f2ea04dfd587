use std::f64::consts::FRAC_1_SQRT_2;

use super::functions::{DecimationFunctions, COLLISION_RADICAND, ILL_CONDITIONED_COS};
use crate::error::{Error, Result};
use crate::gauge::BetaSchedule;

/// Rows closer than this are merged.
pub const MERGE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumRow {
    pub value: f64,
    pub multiplicity: u64,
    /// Level at which the lineage of this eigenvalue starts as the value `1`.
    pub birth_level: usize,
}

/// Dirichlet spectrum of a level operator with exact multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumTable {
    scale: usize,
    rows: Vec<SpectrumRow>,
    warnings: Vec<String>,
}

/// `(2/3)(4^m - 1)`, the Dirichlet dimension at scale `m`.
pub fn dirichlet_dimension(m: usize) -> u64 {
    (2 * (4u64.pow(m as u32) - 1)) / 3
}

/// `(1/3)(4^m + 2)`, the multiplicity of the eigenvalue `1` at scale `m`.
pub fn unit_multiplicity(m: usize) -> u64 {
    (4u64.pow(m as u32) + 2) / 3
}

impl SpectrumTable {
    /// Builds a table from raw rows, sorting and merging them.
    pub fn from_rows(scale: usize, rows: Vec<SpectrumRow>) -> Self {
        let mut t = SpectrumTable {
            scale,
            rows,
            warnings: Vec::new(),
        };
        t.merge();
        t
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn rows(&self) -> &[SpectrumRow] {
        &self.rows
    }

    pub fn rows_mut(&mut self) -> &mut [SpectrumRow] {
        &mut self.rows
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.rows.iter().map(|r| r.multiplicity).sum()
    }

    /// Total multiplicity of rows within `tol` of `value`.
    pub fn multiplicity_near(&self, value: f64, tol: f64) -> u64 {
        self.rows
            .iter()
            .filter(|r| (r.value - value).abs() <= tol)
            .map(|r| r.multiplicity)
            .sum()
    }

    fn merge(&mut self) {
        self.rows.sort_by(|a, b| a.value.total_cmp(&b.value));
        let mut merged: Vec<SpectrumRow> = Vec::with_capacity(self.rows.len());
        for r in self.rows.drain(..) {
            match merged.last_mut() {
                Some(last) if (r.value - last.value).abs() <= MERGE_TOLERANCE => {
                    last.multiplicity += r.multiplicity;
                    last.birth_level = last.birth_level.min(r.birth_level);
                }
                _ => merged.push(r),
            }
        }
        self.rows = merged;
    }
}

/// Dirichlet spectrum of the scale-m operator by recursive preimages.
pub fn level_spectrum(sched: &BetaSchedule, m: usize) -> Result<SpectrumTable> {
    if m == 0 {
        return Err(Error::Domain(
            "the scale-0 Dirichlet operator is empty; level spectra start at m = 1".into(),
        ));
    }
    if m > 1 {
        sched.beta(m)?;
    }
    let mut table = SpectrumTable {
        scale: 1,
        rows: vec![SpectrumRow {
            value: 1.0,
            multiplicity: unit_multiplicity(1),
            birth_level: 1,
        }],
        warnings: Vec::new(),
    };
    for k in 2..=m {
        table = refine(&table, sched.beta(k)?, k)?;
    }
    Ok(table)
}

/// One decimation step from scale `k - 1` to scale `k` with coefficient `beta`.
pub fn refine(parent: &SpectrumTable, beta: f64, k: usize) -> Result<SpectrumTable> {
    let f = DecimationFunctions::new(beta);
    let mut warnings = parent.warnings.clone();
    let new_row = SpectrumRow {
        value: 1.0,
        multiplicity: unit_multiplicity(k),
        birth_level: k,
    };
    let mut rows = Vec::with_capacity(2 * parent.rows.len() + 1);
    if f.is_degenerate() {
        let mult = dirichlet_dimension(k - 1);
        for value in [1.0 - FRAC_1_SQRT_2, 1.0 + FRAC_1_SQRT_2] {
            rows.push(SpectrumRow {
                value,
                multiplicity: mult,
                birth_level: k,
            });
        }
    } else {
        if f.cos2beta().abs() < ILL_CONDITIONED_COS {
            warnings.push(format!(
                "scale {k}: |cos 2beta| = {:.3e} is close to zero; R is ill-conditioned",
                f.cos2beta().abs()
            ));
        }
        for r in &parent.rows {
            if f.radicand(r.value).abs() < COLLISION_RADICAND {
                warnings.push(format!(
                    "scale {k}: branches of the parent value {} collide at z = 1",
                    r.value
                ));
                rows.push(SpectrumRow {
                    value: 1.0,
                    multiplicity: 2 * r.multiplicity,
                    birth_level: r.birth_level,
                });
                continue;
            }
            let (lo, hi) = f.inverse(r.value)?;
            for value in [lo, hi] {
                rows.push(SpectrumRow {
                    value,
                    multiplicity: r.multiplicity,
                    birth_level: r.birth_level,
                });
            }
        }
    }
    rows.push(new_row);
    let mut table = SpectrumTable {
        scale: k,
        rows,
        warnings,
    };
    table.merge();
    let total = table.total_multiplicity();
    if total != dirichlet_dimension(k) {
        return Err(Error::Internal(format!(
            "scale {k}: multiplicities sum to {total}, expected {}",
            dirichlet_dimension(k)
        )));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn values(t: &SpectrumTable) -> Vec<(f64, u64)> {
        t.rows().iter().map(|r| (r.value, r.multiplicity)).collect()
    }

    #[test]
    fn level_one() {
        let t = level_spectrum(&BetaSchedule::zero(1), 1).unwrap();
        assert_eq!(t.rows(), &[SpectrumRow { value: 1.0, multiplicity: 2, birth_level: 1 }]);
    }

    #[test]
    fn level_two_zero_field() {
        let t = level_spectrum(&BetaSchedule::zero(2), 2).unwrap();
        let v = values(&t);
        assert_eq!(v.len(), 3);
        assert!((v[0].0 - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-15 && v[0].1 == 2);
        assert!(v[1] == (1.0, 6));
        assert!((v[2].0 - (1.0 + FRAC_1_SQRT_2)).abs() < 1e-15 && v[2].1 == 2);
    }

    #[test]
    fn degenerate_branch() {
        let t = level_spectrum(&BetaSchedule::explicit(0.0, vec![0.0, FRAC_PI_4]), 2).unwrap();
        assert_eq!(values(&t).iter().map(|v| v.1).collect::<Vec<_>>(), vec![2, 6, 2]);
        let t = level_spectrum(&BetaSchedule::explicit(0.0, vec![0.0, 0.0, FRAC_PI_4]), 3).unwrap();
        assert_eq!(t.multiplicity_near(1.0 - FRAC_1_SQRT_2, 1e-12), 10);
        assert_eq!(t.multiplicity_near(1.0, 1e-12), 22);
    }

    #[test]
    fn short_schedule() {
        assert!(matches!(
            level_spectrum(&BetaSchedule::zero(2), 3),
            Err(Error::ScheduleLength { .. })
        ));
        assert!(level_spectrum(&BetaSchedule::zero(2), 0).is_err());
    }

    #[test]
    fn dimension_formulas() {
        assert_eq!(dirichlet_dimension(2), 10);
        assert_eq!(unit_multiplicity(2), 6);
        assert_eq!(dirichlet_dimension(10), 699050);
    }
}

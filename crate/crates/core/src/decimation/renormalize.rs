use super::functions::{DecimationFunctions, DEGENERATE_COS};
use super::spectrum::level_spectrum;
use crate::error::{Error, Result};
use crate::gauge::BetaSchedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Minus,
    Plus,
}

/// A starting eigenvalue and the branch choices for the following scales;
/// every scale past the listed choices takes the minus branch.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleSequence {
    pub start_scale: usize,
    pub start_value: f64,
    pub branches: Vec<Branch>,
}

impl AdmissibleSequence {
    pub fn all_minus(start_scale: usize, start_value: f64) -> Self {
        AdmissibleSequence {
            start_scale,
            start_value,
            branches: Vec::new(),
        }
    }

    /// Index after which every branch is minus.
    pub fn tail_index(&self) -> usize {
        let last_plus = self.branches.iter().rposition(|&b| b == Branch::Plus);
        self.start_scale + last_plus.map_or(0, |i| i + 1)
    }

    /// `z_m` for `m = start_scale..=depth`.
    pub fn iterates(&self, sched: &BetaSchedule, depth: usize) -> Result<Vec<f64>> {
        if depth < self.start_scale + self.branches.len() {
            return Err(Error::Admissibility(format!(
                "depth {depth} does not cover the {} listed branch choices after scale {}",
                self.branches.len(),
                self.start_scale
            )));
        }
        let mut z = vec![self.start_value];
        for m in self.start_scale + 1..=depth {
            let f = DecimationFunctions::new(sched.beta(m)?);
            let (lo, hi) = f.inverse(*z.last().expect("nonempty"))?;
            let branch = self
                .branches
                .get(m - self.start_scale - 1)
                .copied()
                .unwrap_or(Branch::Minus);
            z.push(match branch {
                Branch::Minus => lo,
                Branch::Plus => hi,
            });
        }
        Ok(z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenormalizedLimit {
    /// `4^M z_M`
    pub lambda: f64,
    /// `|4^M z_M - 4^(M-1) z_(M-1)|`
    pub cauchy_gap: f64,
}

fn check_decay(sched: &BetaSchedule) -> Result<()> {
    if sched.decay_admissible() {
        Ok(())
    } else {
        Err(Error::Admissibility(
            "the schedule's decay beta_m = o(4^-m) cannot be certified; \
             use a uniform field with r < 1/4 or allow slow decay explicitly"
                .into(),
        ))
    }
}

pub fn admissible_limit(
    seq: &AdmissibleSequence,
    sched: &BetaSchedule,
    depth: usize,
) -> Result<RenormalizedLimit> {
    check_decay(sched)?;
    if depth <= seq.start_scale {
        return Err(Error::Admissibility(format!(
            "depth {depth} must exceed the start scale {}",
            seq.start_scale
        )));
    }
    let z = seq.iterates(sched, depth)?;
    let n = z.len();
    let lambda = 4f64.powi(depth as i32) * z[n - 1];
    let previous = 4f64.powi(depth as i32 - 1) * z[n - 2];
    Ok(RenormalizedLimit {
        lambda,
        cauchy_gap: (lambda - previous).abs(),
    })
}

/// `prod_{m=n+1}^{M} sqrt(2) cos 2beta_m / sqrt(1 + cos 2beta_m)`, the
/// derivative at `0` of the renormalized all-minus composition.
pub fn psi_derivative(sched: &BetaSchedule, n: usize) -> Result<f64> {
    let mut product = 1.0;
    for m in n + 1..=sched.max_scale() {
        product *= psi_factor(sched.beta(m)?).ok_or(Error::ZeroProduct { scale: m })?;
    }
    Ok(product)
}

/// One factor of [`psi_derivative`], `4 dS^-/dw (0)`.
pub fn psi_factor(beta: f64) -> Option<f64> {
    let c = (2.0 * beta).cos();
    if c.abs() < DEGENERATE_COS || 1.0 + c <= 0.0 {
        return None;
    }
    Some(std::f64::consts::SQRT_2 * c / (1.0 + c).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FractalEigenvalue {
    pub lambda: f64,
    pub multiplicity: u64,
    pub cauchy_gap: f64,
    pub birth_level: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FractalSpectrum {
    pub depth: usize,
    pub values: Vec<FractalEigenvalue>,
    pub warnings: Vec<String>,
}

/// The `count` smallest renormalized eigenvalues `4^M z` at depth `M`.
///
/// Every row of the depth-M table is the endpoint of exactly one admissible
/// sequence whose branch choices are read off its preimage lineage, and the
/// smallest values are those with the longest all-minus tails, so the table
/// rows enumerate the sequences directly. The gap compares with the parent
/// value `4^(M-1) R_M(z)`.
pub fn fractal_spectrum(sched: &BetaSchedule, count: usize, depth: usize) -> Result<FractalSpectrum> {
    check_decay(sched)?;
    if depth < 2 {
        return Err(Error::Domain(format!("depth {depth} must be at least 2")));
    }
    let table = level_spectrum(sched, depth)?;
    let f = DecimationFunctions::new(sched.beta(depth)?);
    let scale = 4f64.powi(depth as i32);
    let mut warnings = table.warnings().to_vec();
    let mut values = Vec::with_capacity(count);
    for row in table.rows().iter().take(count) {
        let lambda = scale * row.value;
        let cauchy_gap = match f.map(row.value) {
            Ok(parent) => (lambda - scale / 4.0 * parent).abs(),
            Err(_) => f64::NAN,
        };
        values.push(FractalEigenvalue {
            lambda,
            multiplicity: row.multiplicity,
            cauchy_gap,
            birth_level: row.birth_level,
        });
    }
    if values.len() < count {
        warnings.push(format!(
            "only {} distinct eigenvalues exist at depth {depth}; {count} were requested",
            values.len()
        ));
    }
    Ok(FractalSpectrum {
        depth,
        values,
        warnings,
    })
}

use std::path::{Path, PathBuf};

use dlf_core::{uniform_schedule, BetaSchedule, Error, Result};

/// Where a command gets its field from.
#[derive(Clone, Debug, PartialEq)]
pub enum ScheduleSource {
    Uniform { beta: f64, ratio: f64 },
    File(PathBuf),
}

impl ScheduleSource {
    /// A schedule covering scales `1..=m`.
    ///
    /// Graph-level spectra need no decay, so a uniform field with
    /// `r >= 1/4` is accepted here as an explicit geometric schedule.
    pub fn load(&self, m: usize) -> Result<BetaSchedule> {
        match self {
            ScheduleSource::Uniform { beta, ratio } => geometric_schedule(*beta, *ratio, m),
            ScheduleSource::File(path) => {
                let sched = read_schedule(path)?;
                if sched.max_scale() < m {
                    return Err(Error::ScheduleLength {
                        requested: m,
                        available: sched.max_scale(),
                    });
                }
                Ok(sched)
            }
        }
    }
}

pub fn read_schedule(path: &Path) -> Result<BetaSchedule> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    BetaSchedule::parse(&text)
}

/// `beta_n = beta r^n`, uniform when `r < 1/4` and explicit otherwise.
pub fn geometric_schedule(beta: f64, ratio: f64, m: usize) -> Result<BetaSchedule> {
    if ratio > 0.0 && ratio < 0.25 {
        return uniform_schedule(beta, ratio, m);
    }
    if !(ratio > 0.0 && ratio.is_finite() && beta.is_finite()) {
        return Err(Error::Domain(format!(
            "uniform field needs finite beta and r > 0, got beta = {beta}, r = {ratio}"
        )));
    }
    let betas = (1..=m).map(|n| beta * ratio.powi(n as i32)).collect();
    Ok(BetaSchedule::explicit(0.0, betas))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slow_ratio_is_explicit_with_same_values() {
        let s = geometric_schedule(0.5, 0.5, 3).unwrap();
        assert_eq!(s.betas(), &[0.25, 0.125, 0.0625]);
        assert!(!s.decay_admissible());
        assert!(geometric_schedule(0.5, 0.1, 3).unwrap().decay_admissible());
        assert!(geometric_schedule(0.5, 0.0, 3).is_err());
    }
}

#![allow(dead_code)]

use dlf_core::BetaSchedule;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a0` and every `beta_n` drawn uniformly from `[-1, 1]`.
pub fn random_schedule(rng: &mut ChaCha8Rng, m: usize) -> BetaSchedule {
    let a0 = rng.random_range(-1.0..=1.0);
    let betas = (0..m).map(|_| rng.random_range(-1.0..=1.0)).collect();
    BetaSchedule::explicit(a0, betas)
}

/// Zero-field Dirichlet spectrum from the closed form: the values
/// `1 - cos(j pi / 2^m)`, `j = 1..2^m - 1`, where `j = 2^(b-1) * odd`
/// carries multiplicity `(4^b + 2) / 3`.
pub fn zero_field_spectrum(m: usize) -> Vec<(f64, u64, usize)> {
    let n = 1u64 << m;
    (1..n)
        .map(|j| {
            let b = j.trailing_zeros() as usize + 1;
            let value = 1.0 - (std::f64::consts::PI * j as f64 / n as f64).cos();
            (value, (4u64.pow(b as u32) + 2) / 3, b)
        })
        .collect()
}

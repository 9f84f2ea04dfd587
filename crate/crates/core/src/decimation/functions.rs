use num_complex::Complex64;

use crate::error::{Error, Result};

/// Below this `|cos 2 beta|` the map `R` is undefined and the dedicated
/// branch is used.
pub const DEGENERATE_COS: f64 = 1e-12;

/// Between [`DEGENERATE_COS`] and this value the generic branch is used but
/// `R` is badly conditioned.
pub const ILL_CONDITIONED_COS: f64 = 1e-8;

/// Radicand `1 + (1 - w) cos 2 beta` below which the two inverse branches
/// are treated as a double root at `z = 1`.
pub const COLLISION_RADICAND: f64 = 1e-14;

/// The spectral similarity functions for one scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecimationFunctions {
    beta: f64,
    cos2: f64,
    /// `1 - cos 2 beta`, computed as `2 sin^2 beta` to avoid cancellation.
    one_minus_cos2: f64,
}

impl DecimationFunctions {
    pub fn new(beta: f64) -> Self {
        let s = beta.sin();
        DecimationFunctions {
            beta,
            cos2: (2.0 * beta).cos(),
            one_minus_cos2: 2.0 * s * s,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn cos2beta(&self) -> f64 {
        self.cos2
    }

    pub fn is_degenerate(&self) -> bool {
        self.cos2.abs() < DEGENERATE_COS
    }

    /// `(phi0(z), phi1(z))`.
    pub fn phi(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let d = 2.0 * (1.0 - z);
        if d == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole);
        }
        let one_minus_z = 1.0 - z;
        let numerator = 1.0 + self.cos2 - 2.0 * one_minus_z * one_minus_z;
        Ok((Complex64::new(self.cos2, 0.0) / d, numerator / d))
    }

    /// `R(z) = phi1(z) / phi0(z) = (-2z^2 + 4z - 1 + cos 2 beta) / cos 2 beta`.
    pub fn map(&self, z: f64) -> Result<f64> {
        if self.is_degenerate() {
            return Err(Error::DegenerateField {
                cos2beta: self.cos2.abs(),
            });
        }
        let d = 1.0 - z;
        Ok((1.0 + self.cos2 - 2.0 * d * d) / self.cos2)
    }

    /// `R'(z) = 4 (1 - z) / cos 2 beta`.
    pub fn map_derivative(&self, z: f64) -> Result<f64> {
        if self.is_degenerate() {
            return Err(Error::DegenerateField {
                cos2beta: self.cos2.abs(),
            });
        }
        Ok(4.0 * (1.0 - z) / self.cos2)
    }

    /// `1 + (1 - w) cos 2 beta`, the radicand of the inverse branches.
    pub fn radicand(&self, w: f64) -> f64 {
        // 1 + (1 - w) c = (1 - c) + (2 - w) c keeps both terms small near w = 2, c = 1.
        if self.cos2 >= 0.0 {
            self.one_minus_cos2 + (2.0 - w) * self.cos2
        } else {
            1.0 + (1.0 - w) * self.cos2
        }
    }

    /// `S^-(w) = 1 - sqrt(u)` and `S^+(w) = 1 + sqrt(u)` with
    /// `u = (1 + (1 - w) cos 2 beta) / 2`.
    pub fn inverse(&self, w: f64) -> Result<(f64, f64)> {
        let rad = self.radicand(w);
        if rad < -COLLISION_RADICAND {
            return Err(Error::Domain(format!(
                "inverse branches of R at w = {w} have negative radicand {rad:.3e}"
            )));
        }
        let u = 0.5 * rad.max(0.0);
        let root = u.sqrt();
        // 1 - sqrt(u) = (1 - u) / (1 + sqrt(u)) and 1 - u = (1 - c + w c) / 2.
        let one_minus_u = if self.cos2 >= 0.0 {
            0.5 * (self.one_minus_cos2 + w * self.cos2)
        } else {
            1.0 - u
        };
        Ok((one_minus_u / (1.0 + root), 1.0 + root))
    }

    /// `dS^-/dw = cos 2 beta / (4 sqrt(u))`.
    pub fn inverse_minus_derivative(&self, w: f64) -> Result<f64> {
        let u = 0.5 * self.radicand(w);
        if u <= 0.0 {
            return Err(Error::Domain(format!(
                "S^- is not differentiable at the double root w = {w}"
            )));
        }
        Ok(self.cos2 / (4.0 * u.sqrt()))
    }
}

/// `(phi0, phi1)` at `z` for the field coefficient `beta`.
pub fn phi_pair(z: Complex64, beta: f64) -> Result<(Complex64, Complex64)> {
    DecimationFunctions::new(beta).phi(z)
}

/// The rational map `R`.
pub fn decimation_map(z: f64, beta: f64) -> Result<f64> {
    DecimationFunctions::new(beta).map(z)
}

/// `(S^-(w), S^+(w))`.
pub fn inverse_branches(w: f64, beta: f64) -> Result<(f64, f64)> {
    DecimationFunctions::new(beta).inverse(w)
}

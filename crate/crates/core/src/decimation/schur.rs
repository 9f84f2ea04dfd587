use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::assembly::{Blocks, HermitianOperator};
use crate::error::{Error, Result};

/// Largest acceptable condition number of `Q - z`.
pub const MAX_RESOLVENT_CONDITION: f64 = 1e12;

/// Coarse/fine block split of an operator with the fine block diagonalized
/// once, so that Schur complements at many `z` are cheap.
#[derive(Clone, Debug)]
pub struct SchurSplit {
    blocks: Blocks,
    fine_values: Vec<f64>,
    fine_vectors: DMatrix<Complex64>,
    /// `U* X`, the coarse coupling in the eigenbasis of `Q`.
    x_rotated: DMatrix<Complex64>,
}

impl SchurSplit {
    pub fn new(op: &HermitianOperator) -> Result<Self> {
        let blocks = op.blocks();
        let eig = blocks.q.clone().symmetric_eigen();
        let fine_values = eig.eigenvalues.iter().copied().collect();
        let x_rotated = eig.eigenvectors.adjoint() * &blocks.x;
        Ok(SchurSplit {
            blocks,
            fine_values,
            fine_vectors: eig.eigenvectors,
            x_rotated,
        })
    }

    pub fn blocks(&self) -> &Blocks {
        &self.blocks
    }

    /// Spectrum of the fine block `Q`.
    pub fn fine_spectrum(&self) -> &[f64] {
        &self.fine_values
    }

    /// Distance from `z` to the spectrum of `Q`.
    pub fn fine_distance(&self, z: Complex64) -> f64 {
        self.fine_values
            .iter()
            .map(|&l| (Complex64::new(l, 0.0) - z).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn inverse_shifts(&self, z: Complex64) -> Result<Vec<Complex64>> {
        let dist: Vec<f64> = self
            .fine_values
            .iter()
            .map(|&l| (Complex64::new(l, 0.0) - z).norm())
            .collect();
        let min = dist.iter().copied().fold(f64::INFINITY, f64::min);
        let max = dist.iter().copied().fold(1.0, f64::max);
        let condition = max / min;
        if !(condition <= MAX_RESOLVENT_CONDITION) {
            return Err(Error::Resolvent { condition });
        }
        Ok(self
            .fine_values
            .iter()
            .map(|&l| 1.0 / (Complex64::new(l, 0.0) - z))
            .collect())
    }

    /// `S - z - X~ (Q - z)^{-1} X`.
    pub fn complement(&self, z: Complex64) -> Result<DMatrix<Complex64>> {
        let inv = self.inverse_shifts(z)?;
        let mut scaled = self.x_rotated.clone();
        for (mut row, d) in scaled.row_iter_mut().zip(&inv) {
            row *= *d;
        }
        let c = self.blocks.s.nrows();
        let correction = self.x_rotated.adjoint() * scaled;
        Ok(&self.blocks.s - DMatrix::from_diagonal_element(c, c, z) - correction)
    }

    /// `(Q - z)^{-1} X v` for a coarse vector `v`.
    pub fn fine_response(&self, z: Complex64, coarse: &[Complex64]) -> Result<Vec<Complex64>> {
        let inv = self.inverse_shifts(z)?;
        let v = nalgebra::DVector::from_column_slice(coarse);
        let mut rotated = &self.x_rotated * v;
        for (r, d) in rotated.iter_mut().zip(&inv) {
            *r *= *d;
        }
        Ok((&self.fine_vectors * rotated).iter().copied().collect())
    }
}

/// Schur complement of `op` onto its coarse block at `z`.
pub fn schur_complement(op: &HermitianOperator, z: Complex64) -> Result<DMatrix<Complex64>> {
    SchurSplit::new(op)?.complement(z)
}

//! Validated wrappers for operators and state vectors.
//!
//! `OperatorMatrix` guarantees squareness (and, via [`OperatorMatrix::hermitian`],
//! Hermiticity at construction); `StateVector` guarantees normalization within
//! [`crate::NORM_TOL`]. Both deref to their `ndarray` representation so the
//! numerics read like plain array code.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::linalg::{expectation, hermiticity_residual, inner, max_abs, C64, CMat, CVec};
use crate::{HERMITICITY_TOL, NORM_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    mat: CMat,
}

impl OperatorMatrix {
    /// Wrap a square matrix without any Hermiticity requirement.
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        Ok(OperatorMatrix { mat })
    }

    /// Wrap a square matrix, requiring ‖A − A†‖∞ ≤ tol · max(1, ‖A‖∞).
    pub fn hermitian(mat: CMat) -> Result<Self> {
        let op = Self::new(mat)?;
        let residual = hermiticity_residual(&op.mat);
        if residual > HERMITICITY_TOL * max_abs(&op.mat).max(1.0) {
            return Err(Error::NotHermitian { residual });
        }
        Ok(op)
    }

    pub fn identity(dim: usize) -> Self {
        OperatorMatrix { mat: CMat::eye(dim) }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.mat)
    }

    /// ⟨ψ|A|ψ⟩.
    pub fn expectation(&self, psi: &StateVector) -> C64 {
        expectation(&self.mat, psi)
    }
}

impl Deref for OperatorMatrix {
    type Target = CMat;

    fn deref(&self) -> &CMat {
        &self.mat
    }
}

#[derive(Clone, Debug)]
pub struct StateVector {
    amp: CVec,
}

impl StateVector {
    /// Wrap an amplitude vector, requiring |‖ψ‖ − 1| ≤ [`NORM_TOL`].
    pub fn new(amp: CVec) -> Result<Self> {
        let norm = amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let defect = (norm - 1.0).abs();
        if !defect.is_finite() || defect > NORM_TOL {
            return Err(Error::NotNormalized { defect });
        }
        Ok(StateVector { amp })
    }

    /// Wrap without the norm check. Used by the evolver, which records the
    /// drift itself, and by tests that construct states to be normalized next.
    pub(crate) fn raw(amp: CVec) -> Self {
        StateVector { amp }
    }

    /// Computational basis state |idx⟩.
    pub fn basis_state(dim: usize, idx: usize) -> Result<Self> {
        if idx >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {idx} out of range for dimension {dim}"
            )));
        }
        let mut amp = CVec::zeros(dim);
        amp[idx] = C64::new(1.0, 0.0);
        Ok(StateVector { amp })
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amp
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Fresh copy scaled to unit norm.
    pub fn normalized(&self) -> StateVector {
        let n = self.norm();
        StateVector {
            amp: self.amp.mapv(|z| z / n),
        }
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &StateVector) -> C64 {
        inner(&self.amp, &other.amp)
    }
}

impl Deref for StateVector {
    type Target = CVec;

    fn deref(&self) -> &CVec {
        &self.amp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rejects_non_square() {
        let m = CMat::zeros((2, 3));
        assert!(matches!(
            OperatorMatrix::new(m),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn hermitian_gate() {
        let good = array![[c(1.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(0.0, 0.0)]];
        assert!(OperatorMatrix::hermitian(good).is_ok());
        let bad = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
        assert!(matches!(
            OperatorMatrix::hermitian(bad),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn state_norm_gate() {
        let ok = StateVector::new(array![c(0.6, 0.0), c(0.8, 0.0)]);
        assert!(ok.is_ok());
        let bad = StateVector::new(array![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(bad, Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn basis_state_and_overlap() {
        let e0 = StateVector::basis_state(3, 0).unwrap();
        let e2 = StateVector::basis_state(3, 2).unwrap();
        assert_eq!(e0.overlap(&e2), c(0.0, 0.0));
        assert_eq!(e0.overlap(&e0), c(1.0, 0.0));
        assert!(StateVector::basis_state(3, 3).is_err());
    }

    #[test]
    fn normalized_copy() {
        let s = StateVector::raw(array![c(3.0, 0.0), c(4.0, 0.0)]);
        let n = s.normalized();
        assert!((n.norm() - 1.0).abs() < 1e-15);
        assert!((n[0].re - 0.6).abs() < 1e-15);
    }
}

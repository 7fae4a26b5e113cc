//! Small dense complex linear-algebra helpers shared across the crate.
//!
//! Everything is built on `ndarray` with LAPACK (via `ndarray-linalg`) doing
//! the eigendecompositions. Matrices are dense `Array2<Complex64>`; the
//! dimensions in scope (≤ a few dozen) make sparsity pointless.

use ndarray::{Array1, Array2, ShapeBuilder};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = Array2<C64>;
pub type CVec = Array1<C64>;

pub use ndarray::linalg::kron;

/// Conjugate transpose.
pub fn dagger(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a.dot(b) - b.dot(a)
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a.dot(b) + b.dot(a)
}

/// Entrywise max-abs norm; the ‖·‖∞ used by every residual tolerance here.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

/// ‖A − A†‖∞.
pub fn hermiticity_residual(a: &CMat) -> f64 {
    max_abs(&(a - &dagger(a)))
}

pub fn trace(a: &CMat) -> C64 {
    a.diag().sum()
}

/// ⟨ψ|A|ψ⟩ (no normalization applied).
pub fn expectation(a: &CMat, psi: &CVec) -> C64 {
    let apsi = a.dot(psi);
    inner(psi, &apsi)
}

/// ⟨a|b⟩ with the physics convention (conjugate-linear in the first slot).
pub fn inner(a: &CVec, b: &CVec) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Hermitian eigendecomposition; eigenvalues ascending, columns are the
/// corresponding orthonormal eigenvectors (A = V·diag(w)·V†).
///
/// The input is copied into column-major layout first: the LAPACK binding
/// reads the buffer column-major, and feeding it a row-major complex matrix
/// silently diagonalizes the transpose (= conjugate, for Hermitian input).
pub fn eigh_c(a: &CMat) -> Result<(Array1<f64>, CMat)> {
    let mut af = CMat::zeros(a.raw_dim().f());
    af.assign(a);
    af.eigh(UPLO::Lower).map_err(Error::from)
}

/// exp(i·s·H) for Hermitian H, by spectral decomposition. Exact up to
/// roundoff, which is the point: no series truncation anywhere.
pub fn exp_i_hermitian(h: &CMat, s: f64) -> Result<CMat> {
    let (w, v) = eigh_c(h)?;
    let mut scaled = v.clone();
    for (k, mut col) in scaled.columns_mut().into_iter().enumerate() {
        let phase = C64::from_polar(1.0, s * w[k]);
        col.map_inplace(|z| *z *= phase);
    }
    Ok(scaled.dot(&dagger(&v)))
}

/// Solve the symmetric positive semi-definite system G·x = b by spectral
/// pseudo-inverse, dropping directions below a relative cutoff. Used for
/// least-squares projections where G is a Gram matrix that may be singular
/// (e.g. when the identity already lies in the generator span).
pub fn solve_psd(g: &Array2<f64>, b: &Array1<f64>) -> Result<Array1<f64>> {
    let (w, v) = g.eigh(UPLO::Lower).map_err(Error::from)?;
    let wmax = w.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
    let cutoff = wmax * 1e-12;
    let vtb = v.t().dot(b);
    let damped = Array1::from_iter(
        w.iter()
            .zip(vtb.iter())
            .map(|(&wi, &yi)| if wi > cutoff { yi / wi } else { 0.0 }),
    );
    Ok(v.dot(&damped))
}

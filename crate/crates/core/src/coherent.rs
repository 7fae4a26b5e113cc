//! Generalized coherent states and the total-fluctuation quantumness Δ.
//!
//! The reference is the extremal-weight state (ground state of a fixed
//! generic Cartan functional); coherent states are its images under group
//! displacements exp(Σ α·E⁺ − α̅·E⁻) over the coset ladder pairs. Δ(ψ) is the
//! summed variance of the orthonormal generators; it attains its minimum
//! Δ_min exactly on the coherent orbit, and Δ − Δ_min is the g-entanglement.

use crate::algebra::AlgebraRep;
use crate::error::{Error, Result};
use crate::linalg::{eigh_c, exp_i_hermitian, hermiticity_residual, max_abs, C64, CMat};
use crate::operator::StateVector;
use crate::NORM_TOL;

/// One complex amplitude per ladder pair of the rep.
#[derive(Clone, Debug, PartialEq)]
pub struct DisplacementParams {
    alphas: Vec<C64>,
}

impl DisplacementParams {
    pub fn new(alphas: Vec<C64>) -> Self {
        DisplacementParams { alphas }
    }

    pub fn zero(len: usize) -> Self {
        DisplacementParams {
            alphas: vec![C64::new(0.0, 0.0); len],
        }
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn alphas(&self) -> &[C64] {
        &self.alphas
    }
}

/// Displacement amplitude putting an su(2) factor at Bloch angles (θ, φ),
/// with the sign convention ⟨J⟩ = −j(sinθcosφ, sinθsinφ, cosθ) for the
/// lowest-weight reference |j,−j⟩.
pub fn su2_alpha(theta: f64, phi: f64) -> C64 {
    C64::from_polar(-theta / 2.0, -phi)
}

/// Extremal-weight reference state of the rep (cached).
pub fn reference_state(rep: &AlgebraRep) -> Result<StateVector> {
    if let Some(s) = rep.reference_cache().get() {
        return Ok(s.clone());
    }
    let (w, v) = eigh_c(rep.reference_energy())?;
    if rep.dim_hilbert() > 1 && w[1] - w[0] < 1e-6 {
        return Err(Error::InvalidArgument(
            "reference functional has a degenerate ground state".into(),
        ));
    }
    let mut amp = v.column(0).to_owned();
    // Deterministic global phase: largest component real positive.
    let (kmax, _) = amp
        .iter()
        .enumerate()
        .fold((0, 0.0_f64), |(ib, vb), (i, z)| {
            if z.norm() > vb {
                (i, z.norm())
            } else {
                (ib, vb)
            }
        });
    let phase = amp[kmax] / amp[kmax].norm();
    amp.map_inplace(|z| *z /= phase);
    let state = StateVector::new(amp)?;
    let _ = rep.reference_cache().set(state.clone());
    Ok(state)
}

/// Apply the displacement exp(Σ α_i·E_i⁺ − α̅_i·E_i⁻) to the reference.
/// Pairs that annihilate the reference are skipped (their α is ignored).
pub fn displace(rep: &AlgebraRep, params: &DisplacementParams) -> Result<StateVector> {
    let pairs = rep.ladder_pairs();
    if params.len() != pairs.len() {
        return Err(Error::DimensionMismatch {
            expected: pairs.len(),
            got: params.len(),
        });
    }
    let reference = reference_state(rep)?;
    let dim = rep.dim_hilbert();
    let mut x = CMat::zeros((dim, dim));
    for (alpha, pair) in params.alphas().iter().zip(pairs) {
        let moved = pair.raising.dot(reference.amplitudes());
        if moved.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() < 1e-12 {
            continue;
        }
        x = x + pair.raising.mapv(|z| z * alpha) - pair.lowering.mapv(|z| z * alpha.conj());
    }
    // x is anti-Hermitian; K = i·x is Hermitian and exp(x) = exp(−i·K).
    let k = x.mapv(|z| z * C64::new(0.0, 1.0));
    debug_assert!(hermiticity_residual(&k) < 1e-12 * max_abs(&k).max(1.0));
    let u = exp_i_hermitian(&k, -1.0)?;
    StateVector::new(u.dot(reference.amplitudes()))
}

/// su(2) coherent state at Bloch angles (θ, φ).
pub fn coherent_su2(rep: &AlgebraRep, theta: f64, phi: f64) -> Result<StateVector> {
    if rep.label().spin_j().is_none() {
        return Err(Error::UnsupportedRep {
            context: "coherent_su2",
            label: rep.name().to_string(),
        });
    }
    displace(rep, &DisplacementParams::new(vec![su2_alpha(theta, phi)]))
}

fn check_state(rep: &AlgebraRep, psi: &StateVector) -> Result<()> {
    if psi.dim() != rep.dim_hilbert() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim_hilbert(),
            got: psi.dim(),
        });
    }
    let defect = (psi.norm() - 1.0).abs();
    if defect > NORM_TOL {
        return Err(Error::NotNormalized { defect });
    }
    Ok(())
}

/// Total fluctuation Δ(ψ) = Σ_a (⟨L_a²⟩ − ⟨L_a⟩²).
pub fn delta(rep: &AlgebraRep, psi: &StateVector) -> Result<f64> {
    check_state(rep, psi)?;
    let mut total = 0.0;
    for g in rep.generators() {
        let gpsi = g.dot(psi.amplitudes());
        let second = gpsi.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let first = crate::linalg::inner(psi.amplitudes(), &gpsi).re;
        total += second - first * first;
    }
    Ok(total)
}

/// Same quantity through the cached Casimir: ⟨C₂⟩ − Σ_a ⟨L_a⟩².
pub fn delta_via_casimir(rep: &AlgebraRep, psi: &StateVector) -> Result<f64> {
    check_state(rep, psi)?;
    let mut mean_sq = 0.0;
    for g in rep.generators() {
        let m = g.expectation(psi).re;
        mean_sq += m * m;
    }
    Ok(rep.casimir().expectation(psi).re - mean_sq)
}

/// Minimal Δ over the coherent orbit — attained at the reference (cached).
pub fn delta_min(rep: &AlgebraRep) -> Result<f64> {
    if let Some(&v) = rep.delta_min_cache().get() {
        return Ok(v);
    }
    let v = delta(rep, &reference_state(rep)?)?;
    let _ = rep.delta_min_cache().set(v);
    Ok(v)
}

/// Δ(ψ) − Δ_min, clamped at 0 from below (roundoff only; Δ_min is minimal).
pub fn g_entanglement(rep: &AlgebraRep, psi: &StateVector) -> Result<f64> {
    let raw = delta(rep, psi)? - delta_min(rep)?;
    Ok(raw.max(0.0))
}

/// True iff the g-entanglement lies below tol.
pub fn is_coherent(rep: &AlgebraRep, psi: &StateVector, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("coherence tol must be > 0".into()));
    }
    Ok(g_entanglement(rep, psi)? < tol)
}

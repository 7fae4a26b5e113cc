//! Model Hamiltonians built from algebra generators, and the
//! dynamical-symmetry integrability classifier.
//!
//! A Hamiltonian is classified Integrable when it commutes with every
//! operator of a provided subalgebra chain (it then shares their joint
//! eigenbasis), or when it is an affine combination of the algebra
//! generators and the identity (the evolution then maps coherent states to
//! coherent states). Otherwise it is Nonintegrable with respect to the
//! provided evidence.

use std::fmt;

use ndarray::{Array1, Array2};

use crate::algebra::{AlgebraRep, IrrepLabel, SubalgebraChain};
use crate::error::{Error, Result};
use crate::linalg::{commutator, dagger, max_abs, trace, CMat};
use crate::operator::OperatorMatrix;
use crate::{CHAIN_COMMUTE_TOL, LINEARITY_TOL};

/// Parameters of the supported model families.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelParams {
    /// H = ω_z J_z − 2 ω_x J_x + μ J_z² on a single spin-j.
    SingleSpin { omega_z: f64, omega_x: f64, mu: f64 },
    /// H = (1−μ)(J_z¹ + J_z²) + μ J_x¹ J_x² on a two-spin sum.
    CoupledSpins { mu: f64 },
    /// H = Σ_i ω_i E_ii − μ Σ_{i≠j} E_ij² on the su(3) symmetric irrep.
    LipkinBoson { omega: [f64; 3], mu: f64 },
    /// H = Σ_i ω_i E_ii on a u(N) fermion sector.
    FreeFermions { omega: Vec<f64> },
}

impl ModelParams {
    pub fn model_id(&self) -> &'static str {
        match self {
            ModelParams::SingleSpin { .. } => "single-spin",
            ModelParams::CoupledSpins { .. } => "coupled-spins",
            ModelParams::LipkinBoson { .. } => "lipkin-boson",
            ModelParams::FreeFermions { .. } => "free-fermions",
        }
    }

    fn values(&self) -> Vec<f64> {
        match self {
            ModelParams::SingleSpin {
                omega_z,
                omega_x,
                mu,
            } => vec![*omega_z, *omega_x, *mu],
            ModelParams::CoupledSpins { mu } => vec![*mu],
            ModelParams::LipkinBoson { omega, mu } => {
                let mut v = omega.to_vec();
                v.push(*mu);
                v
            }
            ModelParams::FreeFermions { omega } => omega.clone(),
        }
    }
}

/// A model bound to the rep it acts on.
#[derive(Clone, Copy)]
pub struct HamiltonianSpec<'a> {
    pub rep: &'a AlgebraRep,
    pub params: &'a ModelParams,
}

impl HamiltonianSpec<'_> {
    pub fn build(&self) -> Result<OperatorMatrix> {
        for v in self.params.values() {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "non-finite parameter in {} model",
                    self.params.model_id()
                )));
            }
        }
        match self.params {
            ModelParams::SingleSpin {
                omega_z,
                omega_x,
                mu,
            } => hamiltonian_single_spin(self.rep, *omega_z, *omega_x, *mu),
            ModelParams::CoupledSpins { mu } => hamiltonian_coupled_spins(self.rep, *mu),
            ModelParams::LipkinBoson { omega, mu } => {
                hamiltonian_lipkin_boson(self.rep, *omega, *mu)
            }
            ModelParams::FreeFermions { omega } => hamiltonian_free_fermions(self.rep, omega),
        }
    }
}

fn unsupported(context: &'static str, rep: &AlgebraRep) -> Error {
    Error::UnsupportedRep {
        context,
        label: rep.name().to_string(),
    }
}

/// H = ω_z J_z − 2 ω_x J_x + μ J_z².
pub fn hamiltonian_single_spin(
    rep: &AlgebraRep,
    omega_z: f64,
    omega_x: f64,
    mu: f64,
) -> Result<OperatorMatrix> {
    if rep.label().spin_j().is_none() {
        return Err(unsupported("single-spin model", rep));
    }
    let jx = rep.generator(0).matrix();
    let jz = rep.generator(2).matrix();
    let h = jz.mapv(|z| z * omega_z) - jx.mapv(|z| z * (2.0 * omega_x))
        + jz.dot(jz).mapv(|z| z * mu);
    OperatorMatrix::hermitian(h)
}

fn two_spin_factors(rep: &AlgebraRep) -> Option<(usize, usize)> {
    let f = rep.factors();
    if !matches!(rep.label(), IrrepLabel::Sum(_)) || f.len() != 2 {
        return None;
    }
    if f.iter().any(|m| m.label.spin_j().is_none()) {
        return None;
    }
    Some((f[0].gen_range.start, f[1].gen_range.start))
}

/// H = (1−μ)(J_z¹ + J_z²) + μ J_x¹ J_x².
pub fn hamiltonian_coupled_spins(rep: &AlgebraRep, mu: f64) -> Result<OperatorMatrix> {
    let (g1, g2) = two_spin_factors(rep).ok_or_else(|| unsupported("coupled-spins model", rep))?;
    let jz1 = rep.generator(g1 + 2).matrix();
    let jz2 = rep.generator(g2 + 2).matrix();
    let jx1 = rep.generator(g1).matrix();
    let jx2 = rep.generator(g2).matrix();
    let h = (jz1 + jz2).mapv(|z| z * (1.0 - mu)) + jx1.dot(jx2).mapv(|z| z * mu);
    OperatorMatrix::hermitian(h)
}

/// H = Σ_i ω_i E_ii − μ Σ_{i≠j} E_ij².
pub fn hamiltonian_lipkin_boson(
    rep: &AlgebraRep,
    omega: [f64; 3],
    mu: f64,
) -> Result<OperatorMatrix> {
    if !matches!(rep.label(), IrrepLabel::SymmetricBoson { .. }) {
        return Err(unsupported("lipkin-boson model", rep));
    }
    let dim = rep.dim_hilbert();
    let mut h = CMat::zeros((dim, dim));
    for i in 0..3 {
        let eii = rep.weyl_op(i, i).expect("boson rep carries weyl grid");
        h = h + eii.mapv(|z| z * omega[i]);
        for j in 0..3 {
            if i == j {
                continue;
            }
            let eij = rep.weyl_op(i, j).expect("boson rep carries weyl grid");
            h = h - eij.dot(eij).mapv(|z| z * mu);
        }
    }
    OperatorMatrix::hermitian(h)
}

/// H = Σ_i ω_i E_ii on the fermion sector.
pub fn hamiltonian_free_fermions(rep: &AlgebraRep, omega: &[f64]) -> Result<OperatorMatrix> {
    let modes = match rep.label() {
        IrrepLabel::FermionSector { modes, .. } => *modes as usize,
        _ => return Err(unsupported("free-fermions model", rep)),
    };
    if omega.len() != modes {
        return Err(Error::DimensionMismatch {
            expected: modes,
            got: omega.len(),
        });
    }
    let dim = rep.dim_hilbert();
    let mut h = CMat::zeros((dim, dim));
    for (i, w) in omega.iter().enumerate() {
        let nii = rep.weyl_op(i, i).expect("fermion rep carries weyl grid");
        h = h + nii.mapv(|z| z * *w);
    }
    OperatorMatrix::hermitian(h)
}

/// Commutator residuals ‖[H, Q_i]‖∞ against each chain operator; passes when
/// every residual is below `tol`.
pub fn check_dynamical_symmetry(
    h: &OperatorMatrix,
    chain: &SubalgebraChain,
    tol: f64,
) -> Result<(bool, Vec<f64>)> {
    let dim = h.dim();
    let residuals: Vec<f64> = chain
        .operators()
        .iter()
        .map(|q| {
            if q.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: q.dim(),
                });
            }
            Ok(max_abs(&commutator(h.matrix(), q.matrix())))
        })
        .collect::<Result<_>>()?;
    let ok = residuals.iter().all(|&r| r < tol);
    Ok((ok, residuals))
}

/// Least-squares residual of projecting `h` onto span{I, ops…}, relative to
/// max(1, ‖h‖∞). The Gram matrix may be singular (the identity can already
/// lie in the span), so a pseudo-inverse solve is used.
pub fn linear_projection_residual(h: &CMat, ops: &[&CMat]) -> Result<f64> {
    let dim = h.nrows();
    let mut basis: Vec<CMat> = Vec::with_capacity(ops.len() + 1);
    basis.push(Array2::eye(dim));
    for op in ops {
        if op.nrows() != dim || op.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: op.nrows(),
            });
        }
        basis.push((*op).clone());
    }
    let k = basis.len();
    let mut gram = Array2::<f64>::zeros((k, k));
    let mut rhs = Array1::<f64>::zeros(k);
    for a in 0..k {
        for b in a..k {
            let g = trace(&dagger(&basis[a]).dot(&basis[b])).re;
            gram[[a, b]] = g;
            gram[[b, a]] = g;
        }
        rhs[a] = trace(&dagger(&basis[a]).dot(h)).re;
    }
    let coeff = crate::linalg::solve_psd(&gram, &rhs)?;
    let mut recon = CMat::zeros((dim, dim));
    for (c, b) in coeff.iter().zip(&basis) {
        recon = recon + b.mapv(|z| z * *c);
    }
    Ok(max_abs(&(h - &recon)) / max_abs(h).max(1.0))
}

/// True iff `h` is an affine combination of identity and generators.
pub fn is_linear_in_generators(
    h: &OperatorMatrix,
    rep: &AlgebraRep,
    tol: f64,
) -> Result<(bool, f64)> {
    if h.dim() != rep.dim_hilbert() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim_hilbert(),
            got: h.dim(),
        });
    }
    let ops: Vec<&CMat> = rep.generators().iter().map(|g| g.matrix()).collect();
    let residual = linear_projection_residual(h.matrix(), &ops)?;
    Ok((residual < tol, residual))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Integrable,
    Nonintegrable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Integrable => write!(f, "Integrable"),
            Verdict::Nonintegrable => write!(f, "Nonintegrable"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegrabilityReason {
    ChainSymmetry,
    LinearInGenerators,
}

impl fmt::Display for IntegrabilityReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegrabilityReason::ChainSymmetry => write!(f, "ChainSymmetry"),
            IntegrabilityReason::LinearInGenerators => write!(f, "LinearInGenerators"),
        }
    }
}

/// Classifier outcome with the residual evidence for both tests.
#[derive(Clone, Debug)]
pub struct IntegrabilityVerdict {
    pub verdict: Verdict,
    pub reason: Option<IntegrabilityReason>,
    pub chain_name: String,
    pub chain_residuals: Vec<f64>,
    pub linear_residual: f64,
}

impl IntegrabilityVerdict {
    pub fn is_integrable(&self) -> bool {
        self.verdict == Verdict::Integrable
    }

    pub fn max_chain_residual(&self) -> f64 {
        self.chain_residuals.iter().cloned().fold(0.0, f64::max)
    }

    /// The residual backing the verdict: the reason's own residual for an
    /// integrable case, the smaller of the two failures otherwise.
    pub fn headline_residual(&self) -> f64 {
        match self.reason {
            Some(IntegrabilityReason::ChainSymmetry) => self.max_chain_residual(),
            Some(IntegrabilityReason::LinearInGenerators) => self.linear_residual,
            None => self.max_chain_residual().min(self.linear_residual),
        }
    }
}

/// Classify a model against a chain: chain symmetry is checked first, then
/// linearity in the generators; both failing yields Nonintegrable.
pub fn classify_integrability(
    spec: &HamiltonianSpec<'_>,
    chain: &SubalgebraChain,
) -> Result<IntegrabilityVerdict> {
    let h = spec.build()?;
    let scale = max_abs(h.matrix()).max(1.0);
    let (chain_ok, chain_residuals) =
        check_dynamical_symmetry(&h, chain, CHAIN_COMMUTE_TOL * scale)?;
    let (linear_ok, linear_residual) = is_linear_in_generators(&h, spec.rep, LINEARITY_TOL)?;
    let reason = if chain_ok {
        Some(IntegrabilityReason::ChainSymmetry)
    } else if linear_ok {
        Some(IntegrabilityReason::LinearInGenerators)
    } else {
        None
    };
    Ok(IntegrabilityVerdict {
        verdict: if reason.is_some() {
            Verdict::Integrable
        } else {
            Verdict::Nonintegrable
        },
        reason,
        chain_name: chain.name().to_string(),
        chain_residuals,
        linear_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        build_chain, build_su2_irrep, build_su3_symmetric_irrep, build_un_fermion_sector,
        tensor_sum_rep, ChainId,
    };
    use crate::linalg::hermiticity_residual;

    fn half_pair() -> crate::algebra::AlgebraRep {
        let half = build_su2_irrep(1).unwrap();
        tensor_sum_rep(&[&half, &half]).unwrap()
    }

    #[test]
    fn single_spin_limits() {
        let rep = build_su2_irrep(6).unwrap();
        let h = hamiltonian_single_spin(&rep, 1.0, 0.0, 0.0).unwrap();
        assert!(max_abs(&(h.matrix() - rep.generator(2).matrix())) < 1e-14);
        let h2 = hamiltonian_single_spin(&rep, 0.0, 1.0, 0.0).unwrap();
        assert!(max_abs(&(h2.matrix() + &rep.generator(0).matrix().mapv(|z| z * 2.0))) < 1e-14);
    }

    #[test]
    fn quadratic_term_on_half_is_scalar() {
        let rep = build_su2_irrep(1).unwrap();
        let h = hamiltonian_single_spin(&rep, 0.0, 0.0, 4.0).unwrap();
        // μ J_z² = μ/4 · I on spin-1/2
        assert!(max_abs(&(h.matrix() - &CMat::eye(2))) < 1e-14);
    }

    #[test]
    fn coupled_spins_affine_in_mu() {
        let rep = half_pair();
        let h0 = hamiltonian_coupled_spins(&rep, 0.0).unwrap();
        let h1 = hamiltonian_coupled_spins(&rep, 1.0).unwrap();
        let hm = hamiltonian_coupled_spins(&rep, 0.3).unwrap();
        let mix = h0.matrix().mapv(|z| z * 0.7) + h1.matrix().mapv(|z| z * 0.3);
        assert!(max_abs(&(hm.matrix() - &mix)) < 1e-14);
    }

    #[test]
    fn coupling_is_collective_quadratic() {
        // J_x¹J_x² = ((J_x^tot)² − 1/2)/2 on two spin-1/2
        let rep = half_pair();
        let h = hamiltonian_coupled_spins(&rep, 1.0).unwrap();
        let jxtot = rep.generator(0).matrix() + rep.generator(3).matrix();
        let want = (jxtot.dot(&jxtot) - &CMat::eye(4).mapv(|z| z * 0.5)).mapv(|z| z * 0.5);
        assert!(max_abs(&(h.matrix() - &want)) < 1e-14);
    }

    #[test]
    fn lipkin_diagonal_part() {
        let rep = build_su3_symmetric_irrep(2).unwrap();
        let h = hamiltonian_lipkin_boson(&rep, [1.0, 1.0, 1.0], 0.0).unwrap();
        // Σ E_ii is the total boson number N
        assert!(max_abs(&(h.matrix() - &CMat::eye(6).mapv(|z| z * 2.0))) < 1e-14);
    }

    #[test]
    fn free_fermion_spectrum() {
        let rep = build_un_fermion_sector(4, 2).unwrap();
        let h = hamiltonian_free_fermions(&rep, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let mut diag: Vec<f64> = (0..6).map(|k| h.matrix()[[k, k]].re).collect();
        diag.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(diag, vec![3.0, 4.0, 5.0, 5.0, 6.0, 7.0]);
        assert!(hamiltonian_free_fermions(&rep, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn builders_are_hermitian() {
        let spin = build_su2_irrep(6).unwrap();
        let pair = half_pair();
        let boson = build_su3_symmetric_irrep(4).unwrap();
        let ferm = build_un_fermion_sector(4, 2).unwrap();
        let hs = [
            hamiltonian_single_spin(&spin, 1.0, 1.0, 1.0).unwrap(),
            hamiltonian_coupled_spins(&pair, 0.5).unwrap(),
            hamiltonian_lipkin_boson(&boson, [1.0, 1.5, 2.0], 1.0 / 6.0).unwrap(),
            hamiltonian_free_fermions(&ferm, &[1.0, 2.0, 3.0, 4.0]).unwrap(),
        ];
        for h in &hs {
            assert!(hermiticity_residual(h.matrix()) < 1e-12);
        }
    }

    #[test]
    fn rejects_wrong_rep_family() {
        let spin = build_su2_irrep(6).unwrap();
        let boson = build_su3_symmetric_irrep(2).unwrap();
        assert!(hamiltonian_single_spin(&boson, 1.0, 1.0, 0.0).is_err());
        assert!(hamiltonian_coupled_spins(&spin, 0.5).is_err());
        assert!(hamiltonian_lipkin_boson(&spin, [1.0; 3], 0.0).is_err());
        assert!(hamiltonian_free_fermions(&spin, &[1.0]).is_err());
        let spec = HamiltonianSpec {
            rep: &spin,
            params: &ModelParams::SingleSpin {
                omega_z: f64::NAN,
                omega_x: 0.0,
                mu: 0.0,
            },
        };
        assert!(spec.build().is_err());
    }

    #[test]
    fn symmetry_check_detects_commuting_chain() {
        let rep = build_su2_irrep(6).unwrap();
        let chain = build_chain(&rep, ChainId::Su2Jz).unwrap();
        let h = hamiltonian_single_spin(&rep, 1.0, 0.0, 0.7).unwrap();
        let (ok, res) = check_dynamical_symmetry(&h, &chain, 1e-9).unwrap();
        assert!(ok);
        assert_eq!(res.len(), 2);
        let hx = hamiltonian_single_spin(&rep, 1.0, 1.0, 0.0).unwrap();
        let (ok2, res2) = check_dynamical_symmetry(&hx, &chain, 1e-9).unwrap();
        assert!(!ok2);
        assert!(res2[1] > 0.1);
    }

    #[test]
    fn linearity_detection() {
        let rep = build_su2_irrep(6).unwrap();
        let lin = hamiltonian_single_spin(&rep, 1.0, 1.0, 0.0).unwrap();
        let (ok, res) = is_linear_in_generators(&lin, &rep, LINEARITY_TOL).unwrap();
        assert!(ok);
        assert!(res < 1e-12);
        let quad = hamiltonian_single_spin(&rep, 1.0, 1.0, 1.0).unwrap();
        let (ok2, res2) = is_linear_in_generators(&quad, &rep, LINEARITY_TOL).unwrap();
        assert!(!ok2);
        assert!(res2 > 1e-3);
        // On spin-1/2 the quadratic term is scalar, hence still affine.
        let half = build_su2_irrep(1).unwrap();
        let hh = hamiltonian_single_spin(&half, 1.0, 1.0, 1.0).unwrap();
        let (ok3, _) = is_linear_in_generators(&hh, &half, LINEARITY_TOL).unwrap();
        assert!(ok3);
    }

    #[test]
    fn classify_six_cases() {
        let spin = build_su2_irrep(6).unwrap();
        let spin_chain = build_chain(&spin, ChainId::Su2Jz).unwrap();
        let pair = half_pair();
        let alpha_chain = build_chain(&pair, ChainId::Su2xSu2Alpha).unwrap();
        let coll_chain = build_chain(&pair, ChainId::Su2CollectiveX).unwrap();
        let boson = build_su3_symmetric_irrep(4).unwrap();
        let iso_chain = build_chain(&boson, ChainId::Su3Isospin).unwrap();

        let cases: Vec<(HamiltonianSpec, &SubalgebraChain, Verdict, Option<IntegrabilityReason>)> = vec![
            (
                HamiltonianSpec {
                    rep: &spin,
                    params: &ModelParams::SingleSpin {
                        omega_z: 1.0,
                        omega_x: 1.0,
                        mu: 0.0,
                    },
                },
                &spin_chain,
                Verdict::Integrable,
                Some(IntegrabilityReason::LinearInGenerators),
            ),
            (
                HamiltonianSpec {
                    rep: &spin,
                    params: &ModelParams::SingleSpin {
                        omega_z: 1.0,
                        omega_x: 1.0,
                        mu: 1.0,
                    },
                },
                &spin_chain,
                Verdict::Nonintegrable,
                None,
            ),
            // μ=0 commutes with the whole alpha chain, so the chain-first
            // ordering reports ChainSymmetry even though H is also linear.
            (
                HamiltonianSpec {
                    rep: &pair,
                    params: &ModelParams::CoupledSpins { mu: 0.0 },
                },
                &alpha_chain,
                Verdict::Integrable,
                Some(IntegrabilityReason::ChainSymmetry),
            ),
            (
                HamiltonianSpec {
                    rep: &pair,
                    params: &ModelParams::CoupledSpins { mu: 0.5 },
                },
                &alpha_chain,
                Verdict::Nonintegrable,
                None,
            ),
            (
                HamiltonianSpec {
                    rep: &pair,
                    params: &ModelParams::CoupledSpins { mu: 1.0 },
                },
                &coll_chain,
                Verdict::Integrable,
                Some(IntegrabilityReason::ChainSymmetry),
            ),
            (
                HamiltonianSpec {
                    rep: &boson,
                    params: &ModelParams::LipkinBoson {
                        omega: [1.0, 1.0, 1.0],
                        mu: 0.0,
                    },
                },
                &iso_chain,
                Verdict::Integrable,
                Some(IntegrabilityReason::ChainSymmetry),
            ),
        ];
        for (spec, chain, verdict, reason) in cases {
            let out = classify_integrability(&spec, chain).unwrap();
            assert_eq!(out.verdict, verdict, "model {}", spec.params.model_id());
            assert_eq!(out.reason, reason, "model {}", spec.params.model_id());
            assert_eq!(out.chain_residuals.len(), chain.len());
        }
        let nonint = classify_integrability(
            &HamiltonianSpec {
                rep: &boson,
                params: &ModelParams::LipkinBoson {
                    omega: [1.0, 1.0, 1.0],
                    mu: 1.0 / 6.0,
                },
            },
            &iso_chain,
        )
        .unwrap();
        assert_eq!(nonint.verdict, Verdict::Nonintegrable);
        assert!(nonint.headline_residual() > 1e-6);
    }

    #[test]
    fn verdict_display() {
        assert_eq!(Verdict::Integrable.to_string(), "Integrable");
        assert_eq!(
            IntegrabilityReason::LinearInGenerators.to_string(),
            "LinearInGenerators"
        );
    }
}

//! Spin-j irrep of su(2).
//!
//! Basis |j,m⟩ ordered by descending m (index 0 ↔ m = j, last ↔ m = −j).
//! Generators [J_x, J_y, J_z], orthonormal in the defining spin-1/2 rep:
//! Tr(σ_a σ_b)/4 = δ_ab/2. The extremal-weight reference is |j,−j⟩, the
//! ground state of the J_z reference functional.

use super::{FactorMeta, IrrepLabel, RepParts};
use crate::error::{Error, Result};
use crate::linalg::{C64, CMat};

/// J_z, J_+ and J_− for spin j = two_j/2 in the descending-m basis.
pub(crate) fn jz_jp_jm(two_j: u32) -> (CMat, CMat, CMat) {
    let j = two_j as f64 / 2.0;
    let dim = two_j as usize + 1;
    let mut jz = CMat::zeros((dim, dim));
    let mut jp = CMat::zeros((dim, dim));
    for k in 0..dim {
        let m = j - k as f64;
        jz[[k, k]] = C64::new(m, 0.0);
        if k > 0 {
            // J₊|j,m⟩ = √(j(j+1) − m(m+1)) |j,m+1⟩
            jp[[k - 1, k]] = C64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.t().mapv(|z| z.conj());
    (jz, jp, jm)
}

/// Cartesian generators [J_x, J_y, J_z] for spin j = two_j/2.
pub(crate) fn cartesian(two_j: u32) -> Vec<CMat> {
    let (jz, jp, jm) = jz_jp_jm(two_j);
    let half = C64::new(0.5, 0.0);
    let half_i = C64::new(0.0, -0.5);
    let jx = (&jp + &jm).mapv(|z| z * half);
    let jy = (&jp - &jm).mapv(|z| z * half_i);
    vec![jx, jy, jz]
}

/// Build the spin-j irrep, j = two_j/2 ≥ 1/2.
pub fn build_su2_irrep(two_j: u32) -> Result<super::AlgebraRep> {
    if two_j == 0 {
        return Err(Error::InvalidArgument(
            "spin must be at least 1/2 (two_j ≥ 1)".into(),
        ));
    }
    let dim = two_j as usize + 1;
    let generators = cartesian(two_j);
    let (jz, jp, jm) = jz_jp_jm(two_j);
    let label = IrrepLabel::SpinJ { two_j };
    let factors = vec![FactorMeta {
        label: label.clone(),
        dim_hilbert: dim,
        gen_range: 0..3,
        ladder_range: 0..1,
    }];
    RepParts {
        label,
        dim_hilbert: dim,
        generators,
        defining: cartesian(1),
        cartan_indices: vec![2],
        ladders: vec![(jp, jm)],
        factors,
        reference_energy: jz,
        weyl: None,
    }
    .assemble()
}

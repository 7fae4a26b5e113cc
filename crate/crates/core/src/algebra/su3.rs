//! Symmetric irrep (N,0) of su(3), realized bosonically: three modes,
//! E_ij = a_i†a_j on the N-particle Fock space. Dimension (N+1)(N+2)/2.
//!
//! Basis: occupation triples (n₁,n₂,n₃), n₁ descending then n₂ descending,
//! so index 0 is the highest-weight reference (N,0,0). Generators are the
//! images of the half-Gell-Mann matrices λ_a/2, orthonormal in the defining
//! 3×3 rep.

use super::{AlgebraRep, FactorMeta, IrrepLabel, RepParts};
use crate::error::{Error, Result};
use crate::linalg::{C64, CMat};

/// The eight λ_a/2 matrices in the standard order.
pub(crate) fn gell_mann_half() -> Vec<CMat> {
    let z = C64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(8);
    let mat = |entries: [[C64; 3]; 3]| {
        let mut m = CMat::zeros((3, 3));
        for (r, row) in entries.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m[[r, c]] = *v;
            }
        }
        m.mapv(|x| x * C64::new(0.5, 0.0))
    };
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    out.push(mat([[z, one, z], [one, z, z], [z, z, z]]));
    out.push(mat([[z, -i, z], [i, z, z], [z, z, z]]));
    out.push(mat([[one, z, z], [z, -one, z], [z, z, z]]));
    out.push(mat([[z, z, one], [z, z, z], [one, z, z]]));
    out.push(mat([[z, z, -i], [z, z, z], [i, z, z]]));
    out.push(mat([[z, z, z], [z, z, one], [z, one, z]]));
    out.push(mat([[z, z, z], [z, z, -i], [z, i, z]]));
    let s = C64::new(1.0 / 3.0_f64.sqrt(), 0.0);
    out.push(mat([[s, z, z], [z, s, z], [z, z, s * -2.0]]));
    out
}

/// Occupation triples summing to n, ordered n₁ then n₂ descending.
pub(crate) fn fock_basis(n: u32) -> Vec<[u32; 3]> {
    let mut states = Vec::new();
    for n1 in (0..=n).rev() {
        for n2 in (0..=(n - n1)).rev() {
            states.push([n1, n2, n - n1 - n2]);
        }
    }
    states
}

/// Matrices of E_ij = a_i†a_j on the N-boson sector (zero-based i, j).
pub(crate) fn weyl_ops(n: u32) -> Vec<Vec<CMat>> {
    let states = fock_basis(n);
    let dim = states.len();
    let index = |s: &[u32; 3]| states.iter().position(|t| t == s).unwrap();
    let mut e = vec![vec![CMat::zeros((dim, dim)); 3]; 3];
    for (col, s) in states.iter().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                if s[j] == 0 {
                    continue;
                }
                if i == j {
                    e[i][i][[col, col]] += C64::new(s[i] as f64, 0.0);
                } else {
                    let mut t = *s;
                    t[j] -= 1;
                    let amp = ((s[j] as f64) * (t[i] as f64 + 1.0)).sqrt();
                    t[i] += 1;
                    e[i][j][[index(&t), col]] += C64::new(amp, 0.0);
                }
            }
        }
    }
    e
}

/// Build (N,0) of su(3) for N ≥ 1.
pub fn build_su3_symmetric_irrep(n: u32) -> Result<AlgebraRep> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "boson number N must be at least 1".into(),
        ));
    }
    let e = weyl_ops(n);
    let dim = e[0][0].nrows();
    let defining = gell_mann_half();

    // Image of a 3×3 one-body matrix under c ↦ Σ c_ij E_ij.
    let image = |c: &CMat| -> CMat {
        let mut m = CMat::zeros((dim, dim));
        for i in 0..3 {
            for j in 0..3 {
                if c[[i, j]].norm() > 0.0 {
                    m = m + e[i][j].mapv(|z| z * c[[i, j]]);
                }
            }
        }
        m
    };
    let generators: Vec<CMat> = defining.iter().map(&image).collect();

    // Reference functional n₂ + 2n₃: unique ground state (N,0,0), gap 1.
    let reference_energy = &e[1][1] + &e[2][2].mapv(|z| z * 2.0);

    let label = IrrepLabel::SymmetricBoson { n };
    let factors = vec![FactorMeta {
        label: label.clone(),
        dim_hilbert: dim,
        gen_range: 0..8,
        ladder_range: 0..2,
    }];
    RepParts {
        label,
        dim_hilbert: dim,
        generators,
        defining,
        cartan_indices: vec![2, 7],
        // Coset ladders off (N,0,0): E₂₁ and E₃₁ raise, adjoints lower.
        ladders: vec![
            (e[1][0].clone(), e[0][1].clone()),
            (e[2][0].clone(), e[0][2].clone()),
        ],
        factors,
        reference_energy,
        weyl: Some(e),
    }
    .assemble()
}

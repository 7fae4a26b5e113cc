//! Fundamental (defining) representation of u(N).
//!
//! Generator layout, shared with the fermion-sector rep: for each pair i<j a
//! symmetric and an antisymmetric combination of E_ij, E_ji; then the N−1
//! traceless diagonal Cartans; the normalized trace generator last. All are
//! orthonormal under Tr(L_a L_b) = δ_ab/2 in the fundamental.

use super::{AlgebraRep, FactorMeta, IrrepLabel, RepParts};
use crate::error::{Error, Result};
use crate::linalg::{C64, CMat};

/// Elementary matrices e_ij as an N×N grid.
pub(crate) fn elementary_grid(n: usize) -> Vec<Vec<CMat>> {
    let mut e = vec![vec![CMat::zeros((n, n)); n]; n];
    for (i, row) in e.iter_mut().enumerate() {
        for (j, m) in row.iter_mut().enumerate() {
            m[[i, j]] = C64::new(1.0, 0.0);
        }
    }
    e
}

/// Orthonormal u(N) generators built from any Weyl grid E_ij that satisfies
/// the u(N) commutation relations. Order: (S_ij, A_ij) for i<j lexicographic,
/// then Cartans H_1..H_{N−1}, then the trace generator.
pub(crate) fn generators_from_weyl(e: &[Vec<CMat>]) -> Vec<CMat> {
    let n = e.len();
    let dim = e[0][0].nrows();
    let half = C64::new(0.5, 0.0);
    let minus_half_i = C64::new(0.0, -0.5);
    let mut gens = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in (i + 1)..n {
            gens.push((&e[i][j] + &e[j][i]).mapv(|z| z * half));
            gens.push((&e[i][j] - &e[j][i]).mapv(|z| z * minus_half_i));
        }
    }
    for k in 1..n {
        // diag(1,…,1,−k,0,…)/√(2k(k+1)) with k ones.
        let norm = 1.0 / (2.0 * k as f64 * (k as f64 + 1.0)).sqrt();
        let mut h = CMat::zeros((dim, dim));
        for (i, row) in e.iter().enumerate().take(k) {
            h = h + row[i].mapv(|z| z * norm);
        }
        h = h - e[k][k].mapv(|z| z * (norm * k as f64));
        gens.push(h);
    }
    let mut tracegen = CMat::zeros((dim, dim));
    for (i, row) in e.iter().enumerate() {
        tracegen = tracegen + &row[i];
    }
    gens.push(tracegen.mapv(|z| z / (2.0 * n as f64).sqrt()));
    gens
}

/// Build the fundamental rep of u(N), N ≥ 2.
pub fn build_un_fundamental(n: u32) -> Result<AlgebraRep> {
    if n < 2 {
        return Err(Error::InvalidArgument("u(N) needs N ≥ 2".into()));
    }
    let nn = n as usize;
    let e = elementary_grid(nn);
    let generators = generators_from_weyl(&e);
    let defining = generators.clone();

    // Reference functional diag(0,1,…,N−1): ground state e₁, gap 1.
    let mut reference_energy = CMat::zeros((nn, nn));
    for i in 0..nn {
        reference_energy[[i, i]] = C64::new(i as f64, 0.0);
    }

    let n_gens = nn * nn;
    let label = IrrepLabel::Fundamental { n };
    let factors = vec![FactorMeta {
        label: label.clone(),
        dim_hilbert: nn,
        gen_range: 0..n_gens,
        ladder_range: 0..(nn - 1),
    }];
    RepParts {
        label,
        dim_hilbert: nn,
        generators,
        defining,
        cartan_indices: (nn * (nn - 1)..n_gens).collect(),
        // Coset ladders off e₁: E_i1 raises, E_1i lowers (i > 1).
        ladders: (1..nn).map(|i| (e[i][0].clone(), e[0][i].clone())).collect(),
        factors,
        reference_energy,
        weyl: Some(e),
    }
    .assemble()
}

//! u(N) acting on the k-fermion sector of N modes.
//!
//! Basis: occupation bitmasks with k set bits, ascending numeric order, so
//! the Fermi-sea reference |1…1 0…0⟩ (modes 0..k occupied) is index 0.
//! E_ij = c_i†c_j with Jordan–Wigner phases; the generator layout and the
//! u(N) defining rep are shared with [`super::un`], so orthonormality and
//! structure constants refer to the same abstract algebra.

use super::un::{elementary_grid, generators_from_weyl};
use super::{AlgebraRep, FactorMeta, IrrepLabel, RepParts};
use crate::error::{Error, Result};
use crate::linalg::{C64, CMat};

fn sector_masks(modes: u32, particles: u32) -> Vec<u32> {
    (0u32..1 << modes)
        .filter(|m| m.count_ones() == particles)
        .collect()
}

/// Sign from anticommuting c_j (or c_j†) past the occupied modes below j.
fn jw_sign(mask: u32, j: u32) -> f64 {
    let below = mask & ((1 << j) - 1);
    if below.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Matrices of E_ij = c_i†c_j on the sector (zero-based mode indices).
pub(crate) fn sector_weyl(modes: u32, particles: u32) -> Vec<Vec<CMat>> {
    let basis = sector_masks(modes, particles);
    let dim = basis.len();
    let index = |m: u32| basis.binary_search(&m).unwrap();
    let nn = modes as usize;
    let mut e = vec![vec![CMat::zeros((dim, dim)); nn]; nn];
    for (col, &s) in basis.iter().enumerate() {
        for j in 0..modes {
            if s & (1 << j) == 0 {
                continue;
            }
            let sign_j = jw_sign(s, j);
            let t = s & !(1 << j);
            for i in 0..modes {
                if t & (1 << i) != 0 {
                    continue;
                }
                let sign_i = jw_sign(t, i);
                let out = t | (1 << i);
                e[i as usize][j as usize][[index(out), col]] +=
                    C64::new(sign_i * sign_j, 0.0);
            }
        }
    }
    e
}

/// Build u(N) on the k-particle fermionic sector, 1 ≤ k < N.
pub fn build_un_fermion_sector(modes: u32, particles: u32) -> Result<AlgebraRep> {
    if modes < 2 || particles == 0 || particles >= modes {
        return Err(Error::InvalidArgument(format!(
            "fermion sector needs N ≥ 2 and 1 ≤ k < N (got N={modes}, k={particles})"
        )));
    }
    let nn = modes as usize;
    let kk = particles as usize;
    let e = sector_weyl(modes, particles);
    let dim = e[0][0].nrows();
    let generators = generators_from_weyl(&e);
    let defining = generators_from_weyl(&elementary_grid(nn));

    // Reference functional Σ_i i·n_i: unique ground state is the Fermi sea.
    let mut reference_energy = CMat::zeros((dim, dim));
    for (i, row) in e.iter().enumerate() {
        reference_energy = reference_energy + row[i].mapv(|z| z * i as f64);
    }

    // Particle-hole ladders off the Fermi sea: E_ij with j occupied (< k)
    // and i virtual (≥ k).
    let mut ladders = Vec::with_capacity(kk * (nn - kk));
    for i in kk..nn {
        for j in 0..kk {
            ladders.push((e[i][j].clone(), e[j][i].clone()));
        }
    }
    let n_ladders = ladders.len();

    let n_gens = nn * nn;
    let label = IrrepLabel::FermionSector { modes, particles };
    let factors = vec![FactorMeta {
        label: label.clone(),
        dim_hilbert: dim,
        gen_range: 0..n_gens,
        ladder_range: 0..n_ladders,
    }];
    RepParts {
        label,
        dim_hilbert: dim,
        generators,
        defining,
        cartan_indices: (nn * (nn - 1)..n_gens).collect(),
        ladders,
        factors,
        reference_energy,
        weyl: Some(e),
    }
    .assemble()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, max_abs};

    #[test]
    fn dimension_is_binomial() {
        let rep = build_un_fermion_sector(4, 2).unwrap();
        assert_eq!(rep.dim_hilbert(), 6);
        assert_eq!(rep.dim_algebra(), 16);
        assert_eq!(rep.rank(), 4);
        assert_eq!(rep.ladder_pairs().len(), 4);
    }

    #[test]
    fn weyl_commutators_hold_despite_jw_signs() {
        // [E_ij, E_kl] = δ_jk E_il − δ_li E_kj on the sector.
        let e = sector_weyl(4, 2);
        let dim = e[0][0].nrows();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let lhs = commutator(&e[i][j], &e[k][l]);
                        let mut rhs = CMat::zeros((dim, dim));
                        if j == k {
                            rhs = rhs + &e[i][l];
                        }
                        if l == i {
                            rhs = rhs - &e[k][j];
                        }
                        assert!(max_abs(&(lhs - rhs)) < 1e-12, "{i}{j}{k}{l}");
                    }
                }
            }
        }
    }

    #[test]
    fn validation_passes() {
        let rep = build_un_fermion_sector(4, 2).unwrap();
        let d = rep.diagnostics().unwrap();
        assert!(d.max_residual() < 1e-11, "{d:?}");
    }

    #[test]
    fn casimir_value() {
        // Σ_a L_a² = (k + k(N−k))/2 · I on the sector (direct expansion).
        let rep = build_un_fermion_sector(4, 2).unwrap();
        let c2 = rep.casimir();
        let expect = (2.0 + 2.0 * 2.0) / 2.0;
        for i in 0..rep.dim_hilbert() {
            assert!((c2[[i, i]].re - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_trivial_sectors() {
        assert!(build_un_fermion_sector(4, 0).is_err());
        assert!(build_un_fermion_sector(4, 4).is_err());
        assert!(build_un_fermion_sector(1, 1).is_err());
    }
}

//! Named subalgebra chains and their CSCO operator lists.
//!
//! A chain is an ordered list of commuting Hermitian operators (Casimirs of
//! the nested subalgebras plus Cartan labels). Degree-of-freedom counting
//! walks the list and counts the operators that actually refine the joint
//! eigenspace partition; see [`super::count_idf`].

use std::fmt;
use std::str::FromStr;

use super::{AlgebraRep, IrrepLabel};
use crate::error::{Error, Result};
use crate::linalg::{anticommutator, commutator, max_abs, trace, CMat};
use crate::operator::OperatorMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainId {
    /// su(2) ⊃ u(1): {J², J_z}.
    Su2Jz,
    /// su(2)⊕su(2) ⊃ u(1)⊕u(1): factor Casimirs and factor J_z's.
    Su2xSu2Alpha,
    /// Collective (diagonal) su(2) of a spin sum, quantized along x:
    /// {(J^tot)², J^tot_x}.
    Su2CollectiveX,
    /// su(3) ⊃ su(2)_T × u(1)_Y: {C₂, C₃, Y, T², T_z}.
    Su3Isospin,
    /// u(N) ⊃ u(N−1) ⊃ … ⊃ u(1): all Gelfand invariants C_i^{u(k)}.
    UnTower,
    /// Mode occupations n_1..n_N of the free-fermion chain.
    UnFermionFree,
}

impl ChainId {
    pub const ALL: [ChainId; 6] = [
        ChainId::Su2Jz,
        ChainId::Su2xSu2Alpha,
        ChainId::Su2CollectiveX,
        ChainId::Su3Isospin,
        ChainId::UnTower,
        ChainId::UnFermionFree,
    ];
}

impl fmt::Display for ChainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ChainId::Su2Jz => "su2-Jz",
            ChainId::Su2xSu2Alpha => "su2xsu2-alpha",
            ChainId::Su2CollectiveX => "su2-collective-x",
            ChainId::Su3Isospin => "su3-isospin",
            ChainId::UnTower => "uN-tower",
            ChainId::UnFermionFree => "uN-fermion-free",
        };
        f.write_str(s)
    }
}

impl FromStr for ChainId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "su2-Jz" => Ok(ChainId::Su2Jz),
            "su2xsu2-alpha" | "su2xsu2-α" => Ok(ChainId::Su2xSu2Alpha),
            "su2-collective-x" => Ok(ChainId::Su2CollectiveX),
            "su3-isospin" => Ok(ChainId::Su3Isospin),
            "uN-tower" => Ok(ChainId::UnTower),
            "uN-fermion-free" => Ok(ChainId::UnFermionFree),
            other => Err(Error::UnknownChain(other.to_string())),
        }
    }
}

/// CSCO operators of one chain, with human-readable labels.
#[derive(Clone, Debug)]
pub struct SubalgebraChain {
    name: String,
    ops: Vec<OperatorMatrix>,
    labels: Vec<String>,
}

impl SubalgebraChain {
    /// Assemble a chain from caller-supplied CSCO operators (one label per
    /// operator). Operators must be Hermitian, of one common dimension, and
    /// pairwise commuting.
    pub fn from_operators(
        name: impl Into<String>,
        ops: Vec<OperatorMatrix>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if ops.is_empty() || ops.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "chain needs matching operator/label counts, got {}/{}",
                ops.len(),
                labels.len()
            )));
        }
        let dim = ops[0].dim();
        for q in &ops {
            if q.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: q.dim(),
                });
            }
            let scale = max_abs(q.matrix()).max(1.0);
            if q.hermiticity_residual() > crate::HERMITICITY_TOL * scale {
                return Err(Error::NotHermitian {
                    residual: q.hermiticity_residual(),
                });
            }
        }
        let chain = SubalgebraChain {
            name: name.into(),
            ops,
            labels,
        };
        chain.check_commuting()?;
        Ok(chain)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn operators(&self) -> &[OperatorMatrix] {
        &self.ops
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Max pairwise ‖[Q_i, Q_j]‖∞.
    pub fn max_commutator_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.ops.len() {
            for j in (i + 1)..self.ops.len() {
                worst = worst.max(max_abs(&commutator(&self.ops[i], &self.ops[j])));
            }
        }
        worst
    }

    /// Error out unless all operators commute pairwise (scaled tolerance).
    pub fn check_commuting(&self) -> Result<f64> {
        let scale = self
            .ops
            .iter()
            .map(|q| max_abs(q))
            .fold(1.0_f64, f64::max);
        let residual = self.max_commutator_residual();
        if residual > 1e-10 * scale * scale {
            return Err(Error::ChainNotCommuting { residual });
        }
        Ok(residual)
    }

    /// Which operators are scalar (fully degenerate) on this space.
    pub fn scalar_flags(&self) -> Vec<bool> {
        self.ops
            .iter()
            .map(|q| {
                let c0 = trace(q).re / q.dim() as f64;
                let scaled_eye = CMat::eye(q.dim()).mapv(|z| z * c0);
                max_abs(&(q.matrix() - &scaled_eye)) < 1e-8 * c0.abs().max(1.0)
            })
            .collect()
    }
}

fn unsupported(rep: &AlgebraRep) -> Error {
    Error::UnsupportedRep {
        context: "build_chain",
        label: rep.name().to_string(),
    }
}

/// Sum over a factor's generator squares (its embedded Casimir).
fn factor_casimir(rep: &AlgebraRep, f: usize) -> CMat {
    let dim = rep.dim_hilbert();
    let mut c = CMat::zeros((dim, dim));
    for i in rep.factors()[f].gen_range.clone() {
        c = c + rep.generator(i).dot(rep.generator(i).matrix());
    }
    c
}

/// Gelfand invariants C_1..C_kmax of the u(k) subalgebra spanned by the first
/// k Weyl indices: C_i = Σ tr over operator-valued powers of the E grid.
fn gelfand_invariants(e: &[Vec<CMat>], k: usize, dim: usize) -> Vec<CMat> {
    // power[a][b] starts as E_ab (a,b < k) and is multiplied by one more E
    // layer per order; C_i = Σ_a power_i[a][a].
    let mut power: Vec<Vec<CMat>> = (0..k)
        .map(|a| (0..k).map(|b| e[a][b].clone()).collect())
        .collect();
    let mut out = Vec::with_capacity(k);
    for order in 1..=k {
        let mut c = CMat::zeros((dim, dim));
        for (a, row) in power.iter().enumerate() {
            c = c + &row[a];
        }
        out.push(c);
        if order == k {
            break;
        }
        let mut next: Vec<Vec<CMat>> = vec![vec![CMat::zeros((dim, dim)); k]; k];
        for a in 0..k {
            for b in 0..k {
                let mut acc = CMat::zeros((dim, dim));
                for c in 0..k {
                    acc = acc + power[a][c].dot(&e[c][b]);
                }
                next[a][b] = acc;
            }
        }
        power = next;
    }
    out
}

/// Build one of the named chains on the given rep.
pub fn build_chain(rep: &AlgebraRep, id: ChainId) -> Result<SubalgebraChain> {
    let dim = rep.dim_hilbert();
    let mut ops: Vec<CMat> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    match id {
        ChainId::Su2Jz => {
            if !matches!(rep.label(), IrrepLabel::SpinJ { .. }) {
                return Err(unsupported(rep));
            }
            ops.push(rep.casimir().matrix().clone());
            ops.push(rep.generator(2).matrix().clone());
            labels.push("J^2".into());
            labels.push("J_z".into());
        }
        ChainId::Su2xSu2Alpha => {
            let ok = rep.factors().len() == 2
                && rep
                    .factors()
                    .iter()
                    .all(|f| matches!(f.label, IrrepLabel::SpinJ { .. }))
                && matches!(rep.label(), IrrepLabel::Sum(_));
            if !ok {
                return Err(unsupported(rep));
            }
            for f in 0..2 {
                ops.push(factor_casimir(rep, f));
                labels.push(format!("J{}^2", f + 1));
            }
            for (f, meta) in rep.factors().iter().enumerate() {
                ops.push(rep.generator(meta.gen_range.start + 2).matrix().clone());
                labels.push(format!("J{}_z", f + 1));
            }
        }
        ChainId::Su2CollectiveX => {
            let ok = matches!(rep.label(), IrrepLabel::Sum(_))
                && rep
                    .factors()
                    .iter()
                    .all(|f| matches!(f.label, IrrepLabel::SpinJ { .. }));
            if !ok {
                return Err(unsupported(rep));
            }
            let mut total = vec![CMat::zeros((dim, dim)); 3];
            for meta in rep.factors() {
                for (a, t) in total.iter_mut().enumerate() {
                    *t = &*t + rep.generator(meta.gen_range.start + a).matrix();
                }
            }
            let mut c2 = CMat::zeros((dim, dim));
            for t in &total {
                c2 = c2 + t.dot(t);
            }
            ops.push(c2);
            labels.push("Jtot^2".into());
            ops.push(total[0].clone());
            labels.push("Jtot_x".into());
        }
        ChainId::Su3Isospin => {
            if !matches!(rep.label(), IrrepLabel::SymmetricBoson { .. }) {
                return Err(unsupported(rep));
            }
            ops.push(rep.casimir().matrix().clone());
            labels.push("C2".into());

            // Cubic Casimir from the fully symmetric d-tensor of the
            // defining rep: d_abc = 2·Tr({L_a, L_b} L_c).
            let def = rep.defining();
            let n = def.len();
            let mut c3 = CMat::zeros((dim, dim));
            for a in 0..n {
                for b in 0..n {
                    let acom = anticommutator(&def[a], &def[b]);
                    let ab = rep.generator(a).dot(rep.generator(b).matrix());
                    for (c, defc) in def.iter().enumerate() {
                        let d_abc = 2.0 * trace(&acom.dot(defc)).re;
                        if d_abc.abs() > 1e-12 {
                            let term = ab.dot(rep.generator(c).matrix());
                            c3 = c3 + term.mapv(|z| z * d_abc);
                        }
                    }
                }
            }
            ops.push(c3);
            labels.push("C3".into());

            // Hypercharge Y = (2/√3)·L₈, isospin T over the first two modes.
            ops.push(
                rep.generator(7)
                    .mapv(|z| z * (2.0 / 3.0_f64.sqrt())),
            );
            labels.push("Y".into());
            let mut t2 = CMat::zeros((dim, dim));
            for a in 0..3 {
                t2 = t2 + rep.generator(a).dot(rep.generator(a).matrix());
            }
            ops.push(t2);
            labels.push("T^2".into());
            ops.push(rep.generator(2).matrix().clone());
            labels.push("T_z".into());
        }
        ChainId::UnTower => {
            if !rep.has_weyl() {
                return Err(unsupported(rep));
            }
            let e: Vec<Vec<CMat>> = {
                let n = match rep.label() {
                    IrrepLabel::SymmetricBoson { .. } => 3,
                    IrrepLabel::Fundamental { n } => *n as usize,
                    IrrepLabel::FermionSector { modes, .. } => *modes as usize,
                    _ => return Err(unsupported(rep)),
                };
                (0..n)
                    .map(|i| (0..n).map(|j| rep.weyl_op(i, j).unwrap().clone()).collect())
                    .collect()
            };
            let n = e.len();
            for k in 1..=n {
                for (i, c) in gelfand_invariants(&e, k, dim).into_iter().enumerate() {
                    ops.push(c);
                    labels.push(format!("C{}(u{})", i + 1, k));
                }
            }
        }
        ChainId::UnFermionFree => {
            let n = match rep.label() {
                IrrepLabel::FermionSector { modes, .. } => *modes as usize,
                _ => return Err(unsupported(rep)),
            };
            for i in 0..n {
                ops.push(rep.weyl_op(i, i).unwrap().clone());
                labels.push(format!("n_{}", i + 1));
            }
        }
    }
    let ops = ops
        .into_iter()
        .map(OperatorMatrix::hermitian)
        .collect::<Result<Vec<_>>>()?;
    let chain = SubalgebraChain {
        name: id.to_string(),
        ops,
        labels,
    };
    chain.check_commuting()?;
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        build_su2_irrep, build_su3_symmetric_irrep, build_un_fermion_sector,
        build_un_fundamental, tensor_sum_rep,
    };

    #[test]
    fn chain_id_round_trip() {
        for id in ChainId::ALL {
            assert_eq!(ChainId::from_str(&id.to_string()).unwrap(), id);
        }
        assert_eq!(
            ChainId::from_str("su2xsu2-α").unwrap(),
            ChainId::Su2xSu2Alpha
        );
        assert!(ChainId::from_str("nope").is_err());
    }

    #[test]
    fn su2_chain_ops() {
        let rep = build_su2_irrep(6).unwrap();
        let chain = build_chain(&rep, ChainId::Su2Jz).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain.scalar_flags(), vec![true, false]);
    }

    #[test]
    fn tower_matches_projector_formula_in_fundamental() {
        // In the fundamental, C_i^{u(k)} = k^{i−1}·P_k with P_k the projector
        // onto the first k coordinates.
        let rep = build_un_fundamental(4).unwrap();
        let chain = build_chain(&rep, ChainId::UnTower).unwrap();
        assert_eq!(chain.len(), 10);
        let mut idx = 0;
        for k in 1..=4usize {
            for i in 1..=k {
                let op = &chain.operators()[idx];
                for r in 0..4 {
                    let expect = if r < k {
                        (k as f64).powi(i as i32 - 1)
                    } else {
                        0.0
                    };
                    assert!(
                        (op[[r, r]].re - expect).abs() < 1e-10,
                        "k={k} i={i} r={r}"
                    );
                }
                idx += 1;
            }
        }
    }

    #[test]
    fn isospin_chain_on_n4() {
        let rep = build_su3_symmetric_irrep(4).unwrap();
        let chain = build_chain(&rep, ChainId::Su3Isospin).unwrap();
        assert_eq!(chain.len(), 5);
        assert!(chain.check_commuting().unwrap() < 1e-10);
        // C₂ = N(N+3)/3 = 28/3 and C₃ = 154/9 are scalars on (4,0).
        let flags = chain.scalar_flags();
        assert_eq!(flags, vec![true, true, false, false, false]);
        let c2 = &chain.operators()[0];
        assert!((c2[[0, 0]].re - 28.0 / 3.0).abs() < 1e-10);
        let c3 = &chain.operators()[1];
        assert!((c3[[0, 0]].re - 154.0 / 9.0).abs() < 1e-10);
    }

    #[test]
    fn fermion_free_chain() {
        let rep = build_un_fermion_sector(4, 2).unwrap();
        let chain = build_chain(&rep, ChainId::UnFermionFree).unwrap();
        assert_eq!(chain.len(), 4);
        assert!(chain.max_commutator_residual() < 1e-14);
    }

    #[test]
    fn collective_chain_commutes() {
        let half = build_su2_irrep(1).unwrap();
        let pair = tensor_sum_rep(&[&half, &half]).unwrap();
        let chain = build_chain(&pair, ChainId::Su2CollectiveX).unwrap();
        assert_eq!(chain.len(), 2);
        assert!(chain.max_commutator_residual() < 1e-12);
    }

    #[test]
    fn wrong_family_is_rejected() {
        let su2 = build_su2_irrep(2).unwrap();
        assert!(build_chain(&su2, ChainId::Su3Isospin).is_err());
        assert!(build_chain(&su2, ChainId::UnTower).is_err());
        let u3 = build_un_fundamental(3).unwrap();
        assert!(build_chain(&u3, ChainId::Su2Jz).is_err());
        assert!(build_chain(&u3, ChainId::UnFermionFree).is_err());
    }

    #[test]
    fn custom_chain_construction() {
        let rep = build_su2_irrep(4).unwrap();
        let jsq = rep.casimir().clone();
        let jz = rep.generator(2).clone();
        let chain = SubalgebraChain::from_operators(
            "custom",
            vec![jsq, jz.clone()],
            vec!["J²".into(), "J_z".into()],
        )
        .unwrap();
        assert_eq!(chain.len(), 2);

        let jx = rep.generator(0).clone();
        assert!(SubalgebraChain::from_operators(
            "bad",
            vec![jx, jz],
            vec!["J_x".into(), "J_z".into()],
        )
        .is_err());
        assert!(
            SubalgebraChain::from_operators("empty", vec![], vec![]).is_err()
        );
    }
}

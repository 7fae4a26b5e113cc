//! Direct-sum algebra g₁ ⊕ g₂ ⊕ … acting on the tensor product of the factor
//! Hilbert spaces. Each factor's generators are embedded as I ⊗ … ⊗ L ⊗ … ⊗ I;
//! the defining rep is the block-diagonal sum of the factor definings, which
//! keeps the Tr = δ/2 orthonormality and makes cross-factor structure
//! constants vanish identically.

use super::{AlgebraRep, FactorMeta, IrrepLabel, RepParts};
use crate::error::{Error, Result};
use crate::linalg::{kron, CMat};

fn embed(dims: &[usize], which: usize, op: &CMat) -> CMat {
    let mut out = CMat::eye(1);
    for (f, &d) in dims.iter().enumerate() {
        let block = if f == which {
            op.clone()
        } else {
            CMat::eye(d)
        };
        out = kron(&out, &block);
    }
    out
}

/// Combine simple (non-sum) reps into one rep of the direct-sum algebra on
/// the tensor-product space.
pub fn tensor_sum_rep(reps: &[&AlgebraRep]) -> Result<AlgebraRep> {
    if reps.len() < 2 {
        return Err(Error::InvalidArgument(
            "tensor sum needs at least two factors".into(),
        ));
    }
    for r in reps {
        if matches!(r.label(), IrrepLabel::Sum(_)) {
            return Err(Error::UnsupportedRep {
                context: "tensor_sum_rep",
                label: r.name().to_string(),
            });
        }
    }
    let dims: Vec<usize> = reps.iter().map(|r| r.dim_hilbert()).collect();
    let dim_total: usize = dims.iter().product();

    let mut generators = Vec::new();
    let mut defining_blocks: Vec<CMat> = Vec::new();
    let mut cartan_indices = Vec::new();
    let mut ladders = Vec::new();
    let mut factors = Vec::new();
    let mut reference_energy = CMat::zeros((dim_total, dim_total));
    let def_dims: Vec<usize> = reps.iter().map(|r| r.defining()[0].nrows()).collect();
    let def_total: usize = def_dims.iter().sum();

    for (f, rep) in reps.iter().enumerate() {
        let gen_start = generators.len();
        let ladder_start = ladders.len();
        for g in rep.generators() {
            generators.push(embed(&dims, f, g.matrix()));
        }
        for d in rep.defining() {
            // embed the defining image into this factor's diagonal block
            let mut padded = CMat::zeros((def_total, def_total));
            let off: usize = def_dims[..f].iter().sum();
            padded
                .slice_mut(ndarray::s![off..off + d.nrows(), off..off + d.nrows()])
                .assign(d);
            defining_blocks.push(padded);
        }
        for &c in rep.cartan_indices() {
            cartan_indices.push(gen_start + c);
        }
        for pair in rep.ladder_pairs() {
            ladders.push((
                embed(&dims, f, pair.raising.matrix()),
                embed(&dims, f, pair.lowering.matrix()),
            ));
        }
        reference_energy = reference_energy + embed(&dims, f, rep.reference_energy());
        factors.push(FactorMeta {
            label: rep.label().clone(),
            dim_hilbert: rep.dim_hilbert(),
            gen_range: gen_start..generators.len(),
            ladder_range: ladder_start..ladders.len(),
        });
    }

    RepParts {
        label: IrrepLabel::Sum(reps.iter().map(|r| r.label().clone()).collect()),
        dim_hilbert: dim_total,
        generators,
        defining: defining_blocks,
        cartan_indices,
        ladders,
        factors,
        reference_energy,
        weyl: None,
    }
    .assemble()
}

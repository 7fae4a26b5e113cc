//! Independent-degree-of-freedom counting.
//!
//! Walk the chain's CSCO list, maintaining the common-eigenspace partition of
//! the Hilbert space accumulated so far. An operator counts toward the IDF
//! exactly when it splits at least one current block — scalars and operators
//! whose spectrum is already resolved by earlier labels contribute nothing.

use ndarray::s;

use super::chains::SubalgebraChain;
use super::AlgebraRep;
use crate::error::{Error, Result};
use crate::linalg::{dagger, eigh_c, CMat};
use crate::EIG_CLUSTER_TOL;

/// Count the chain operators that refine the joint eigenspace partition on
/// the rep's Hilbert space.
pub fn count_idf(rep: &AlgebraRep, chain: &SubalgebraChain) -> Result<usize> {
    let dim = rep.dim_hilbert();
    for q in chain.operators() {
        if q.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: q.dim(),
            });
        }
    }
    chain.check_commuting()?;

    // Blocks are matrices of orthonormal columns spanning the current common
    // eigenspaces; start with the full space.
    let mut blocks: Vec<CMat> = vec![CMat::eye(dim)];
    let mut idf = 0;
    for q in chain.operators() {
        let mut next = Vec::with_capacity(blocks.len());
        let mut refined = false;
        for b in &blocks {
            if b.ncols() == 1 {
                next.push(b.clone());
                continue;
            }
            // Restriction of q to the block is Hermitian since q commutes
            // with everything that carved the block out.
            let sub = dagger(b).dot(q.matrix()).dot(b);
            let (w, v) = eigh_c(&sub)?;
            let mut start = 0;
            let mut groups: Vec<(usize, usize)> = Vec::new();
            for k in 1..w.len() {
                if w[k] - w[k - 1] > EIG_CLUSTER_TOL {
                    groups.push((start, k));
                    start = k;
                }
            }
            groups.push((start, w.len()));
            if groups.len() > 1 {
                refined = true;
            }
            for (lo, hi) in groups {
                next.push(b.dot(&v.slice(s![.., lo..hi])));
            }
        }
        if refined {
            idf += 1;
        }
        blocks = next;
    }
    Ok(idf)
}

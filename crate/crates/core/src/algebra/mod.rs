//! Concrete irreducible representations of the dynamical algebras in scope
//! — su(2) spin-j, su(3) symmetric (N,0), u(N) fundamental, u(N) on a fixed
//! fermion-number sector, and tensor sums of su(2) factors — plus subalgebra
//! chains and degree-of-freedom counting on their joint spectra.
//!
//! Convention: generator bases are orthonormalized against the *defining*
//! representation, Tr_def(L_a L_b) = δ_ab/2. Structure constants are computed
//! numerically from the defining matrices and closure is re-verified on the
//! actual irrep, so a construction bug in either layer shows up as a residual.

mod fermion;
mod su2;
mod su3;
mod tensor;
mod un;

pub mod chains;
mod idf;

pub use chains::{build_chain, ChainId, SubalgebraChain};
pub use fermion::build_un_fermion_sector;
pub use idf::count_idf;
pub use su2::build_su2_irrep;
pub use su3::build_su3_symmetric_irrep;
pub use tensor::tensor_sum_rep;
pub use un::build_un_fundamental;

use std::fmt;
use std::ops::Range;
use std::sync::OnceLock;

use ndarray::{Array1, Array2, Array3};
use ndarray_linalg::{Eigh, UPLO};

use crate::error::{Error, Result};
use crate::linalg::{commutator, dagger, max_abs, trace, CMat};
use crate::operator::{OperatorMatrix, StateVector};
use crate::CLOSURE_TOL;

/// Which irrep a rep (or a factor of a tensor sum) carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrrepLabel {
    /// su(2) spin j = two_j / 2.
    SpinJ { two_j: u32 },
    /// su(3) symmetric irrep (N, 0) on the N-boson three-mode Fock space.
    SymmetricBoson { n: u32 },
    /// u(N) defining (fundamental) representation.
    Fundamental { n: u32 },
    /// u(N) on the k-fermion antisymmetric sector of N modes.
    FermionSector { modes: u32, particles: u32 },
    /// Direct sum algebra acting on the tensor product of factor spaces.
    Sum(Vec<IrrepLabel>),
}

impl IrrepLabel {
    /// Spin j if this is an su(2) label.
    pub fn spin_j(&self) -> Option<f64> {
        match self {
            IrrepLabel::SpinJ { two_j } => Some(*two_j as f64 / 2.0),
            _ => None,
        }
    }
}

fn fmt_half_integer(two_j: u32, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if two_j % 2 == 0 {
        write!(f, "{}", two_j / 2)
    } else {
        write!(f, "{two_j}/2")
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepLabel::SpinJ { two_j } => {
                write!(f, "su(2) j=")?;
                fmt_half_integer(*two_j, f)
            }
            IrrepLabel::SymmetricBoson { n } => write!(f, "su(3) ({n},0)"),
            IrrepLabel::Fundamental { n } => write!(f, "u({n}) fundamental"),
            IrrepLabel::FermionSector { modes, particles } => {
                write!(f, "u({modes}) fermion k={particles}")
            }
            IrrepLabel::Sum(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ⊕ ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

/// A raising/lowering pair attached to the reference-state orbit; the
/// displacement exponent is Σ α·raising − α̅·lowering.
#[derive(Clone, Debug)]
pub struct LadderPair {
    pub raising: OperatorMatrix,
    pub lowering: OperatorMatrix,
}

/// Slice bookkeeping for one factor of a (possibly trivial) tensor sum.
#[derive(Clone, Debug)]
pub struct FactorMeta {
    pub label: IrrepLabel,
    pub dim_hilbert: usize,
    /// Index range of this factor's generators in `AlgebraRep::generators`.
    pub gen_range: Range<usize>,
    /// Index range of this factor's ladder pairs in `AlgebraRep::ladder_pairs`.
    pub ladder_range: Range<usize>,
}

/// Validation residuals; each should sit below [`CLOSURE_TOL`] (Hermiticity
/// well below) for a correctly built rep.
#[derive(Clone, Copy, Debug)]
pub struct RepDiagnostics {
    /// max over generators of ‖L − L†‖∞.
    pub hermiticity: f64,
    /// max |Tr_def(L_a L_b) − δ_ab/2|.
    pub gram: f64,
    /// max over pairs of ‖[L_a, L_b] − i Σ_c f_abc L_c‖∞ on the irrep.
    pub closure: f64,
    /// max |f_abc + f_bac|.
    pub antisymmetry: f64,
    /// ‖C₂ − c·I‖∞ / max(1, |c|).
    pub casimir_scalarity: f64,
}

impl RepDiagnostics {
    pub fn max_residual(&self) -> f64 {
        self.hermiticity
            .max(self.gram)
            .max(self.closure)
            .max(self.antisymmetry)
            .max(self.casimir_scalarity)
    }
}

/// A concrete irrep of a dynamical algebra: Hermitian generator matrices on
/// the model Hilbert space, the defining-rep images fixing the orthonormality
/// convention, Cartan bookkeeping, and the ladder pairs used to displace the
/// reference state.
#[derive(Debug)]
pub struct AlgebraRep {
    name: String,
    label: IrrepLabel,
    dim_hilbert: usize,
    generators: Vec<OperatorMatrix>,
    defining: Vec<CMat>,
    cartan_indices: Vec<usize>,
    ladders: Vec<LadderPair>,
    factors: Vec<FactorMeta>,
    /// Diagonal in spirit: a generic Cartan functional whose unique ground
    /// state is the extremal-weight reference.
    reference_energy: CMat,
    /// Weyl-basis operators E_ij (i,j zero-based) where the algebra has them.
    weyl: Option<Vec<Vec<CMat>>>,
    casimir_cache: OnceLock<OperatorMatrix>,
    reference_cache: OnceLock<StateVector>,
    delta_min_cache: OnceLock<f64>,
}

/// Ingredients handed over by the per-family builders.
pub(crate) struct RepParts {
    pub label: IrrepLabel,
    pub dim_hilbert: usize,
    pub generators: Vec<CMat>,
    pub defining: Vec<CMat>,
    pub cartan_indices: Vec<usize>,
    pub ladders: Vec<(CMat, CMat)>,
    pub factors: Vec<FactorMeta>,
    pub reference_energy: CMat,
    pub weyl: Option<Vec<Vec<CMat>>>,
}

impl RepParts {
    pub(crate) fn assemble(self) -> Result<AlgebraRep> {
        let n = self.generators.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty generator set".into()));
        }
        if self.defining.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.defining.len(),
            });
        }
        let mut generators = Vec::with_capacity(n);
        for g in self.generators {
            if g.nrows() != self.dim_hilbert {
                return Err(Error::DimensionMismatch {
                    expected: self.dim_hilbert,
                    got: g.nrows(),
                });
            }
            generators.push(OperatorMatrix::hermitian(g)?);
        }
        for &c in &self.cartan_indices {
            if c >= n {
                return Err(Error::InvalidArgument(format!(
                    "cartan index {c} out of range for {n} generators"
                )));
            }
        }
        let mut ladders = Vec::with_capacity(self.ladders.len());
        for (up, down) in self.ladders {
            let resid = max_abs(&(&down - &dagger(&up)));
            if resid > 1e-12 * max_abs(&up).max(1.0) {
                return Err(Error::InvalidArgument(format!(
                    "ladder pair is not mutually adjoint (residual {resid:.3e})"
                )));
            }
            ladders.push(LadderPair {
                raising: OperatorMatrix::new(up)?,
                lowering: OperatorMatrix::new(down)?,
            });
        }
        for f in &self.factors {
            if f.gen_range.end > n || f.ladder_range.end > ladders.len() {
                return Err(Error::InvalidArgument(
                    "factor ranges exceed generator/ladder lists".into(),
                ));
            }
        }
        if self.reference_energy.nrows() != self.dim_hilbert {
            return Err(Error::DimensionMismatch {
                expected: self.dim_hilbert,
                got: self.reference_energy.nrows(),
            });
        }
        Ok(AlgebraRep {
            name: self.label.to_string(),
            label: self.label,
            dim_hilbert: self.dim_hilbert,
            generators,
            defining: self.defining,
            cartan_indices: self.cartan_indices,
            ladders,
            factors: self.factors,
            reference_energy: self.reference_energy,
            weyl: self.weyl,
            casimir_cache: OnceLock::new(),
            reference_cache: OnceLock::new(),
            delta_min_cache: OnceLock::new(),
        })
    }
}

impl AlgebraRep {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn label(&self) -> &IrrepLabel {
        &self.label
    }

    pub fn dim_hilbert(&self) -> usize {
        self.dim_hilbert
    }

    /// Number of generators n.
    pub fn dim_algebra(&self) -> usize {
        self.generators.len()
    }

    /// Rank l: number of Cartan generators.
    pub fn rank(&self) -> usize {
        self.cartan_indices.len()
    }

    pub fn generators(&self) -> &[OperatorMatrix] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &OperatorMatrix {
        &self.generators[i]
    }

    pub fn defining(&self) -> &[CMat] {
        &self.defining
    }

    pub fn cartan_indices(&self) -> &[usize] {
        &self.cartan_indices
    }

    pub fn ladder_pairs(&self) -> &[LadderPair] {
        &self.ladders
    }

    pub fn factors(&self) -> &[FactorMeta] {
        &self.factors
    }

    /// E_ij in the Weyl basis (zero-based mode indices), where available.
    pub fn weyl_op(&self, i: usize, j: usize) -> Option<&CMat> {
        self.weyl.as_ref().and_then(|e| e.get(i)).and_then(|row| row.get(j))
    }

    pub fn has_weyl(&self) -> bool {
        self.weyl.is_some()
    }

    pub(crate) fn reference_energy(&self) -> &CMat {
        &self.reference_energy
    }

    pub(crate) fn reference_cache(&self) -> &OnceLock<StateVector> {
        &self.reference_cache
    }

    pub(crate) fn delta_min_cache(&self) -> &OnceLock<f64> {
        &self.delta_min_cache
    }

    /// Σ_a L_a², cached after the first call. Scalar on every rep built here.
    pub fn casimir(&self) -> &OperatorMatrix {
        self.casimir_cache.get_or_init(|| {
            let mut c = CMat::zeros((self.dim_hilbert, self.dim_hilbert));
            for g in &self.generators {
                c = c + g.dot(g.matrix());
            }
            OperatorMatrix::new(c).expect("casimir inherits squareness")
        })
    }

    /// Structure constants f_abc (all index pairs, for the antisymmetry
    /// check) from the defining rep: [L_a, L_b] = i Σ_c f_abc L_c, solved in
    /// the least-squares sense against the defining Gram matrix.
    pub fn structure_constants(&self) -> Result<Array3<f64>> {
        let n = self.defining.len();
        let mut gram = Array2::<f64>::zeros((n, n));
        for a in 0..n {
            for b in a..n {
                let t = trace(&self.defining[a].dot(&self.defining[b])).re;
                gram[[a, b]] = t;
                gram[[b, a]] = t;
            }
        }
        let (w, v) = gram.eigh(UPLO::Lower).map_err(Error::from)?;
        let wmax = w.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
        let cutoff = wmax * 1e-12;
        let pinv_apply = |b: &Array1<f64>| -> Array1<f64> {
            let vtb = v.t().dot(b);
            let damped = Array1::from_iter(
                w.iter()
                    .zip(vtb.iter())
                    .map(|(&wi, &yi)| if wi > cutoff { yi / wi } else { 0.0 }),
            );
            v.dot(&damped)
        };
        let mut f = Array3::<f64>::zeros((n, n, n));
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                // X = −i[L_a, L_b] is Hermitian; expand over the generators.
                let x = commutator(&self.defining[a], &self.defining[b])
                    .mapv(|z| z * crate::linalg::C64::new(0.0, -1.0));
                let rhs = Array1::from_iter(
                    self.defining.iter().map(|l| trace(&l.dot(&x)).re),
                );
                let coeff = pinv_apply(&rhs);
                for c in 0..n {
                    f[[a, b, c]] = coeff[c];
                }
            }
        }
        Ok(f)
    }

    /// Construction residuals: Hermiticity, defining-rep orthonormality,
    /// closure of the irrep generators under the defining structure
    /// constants, antisymmetry of those constants, and Casimir scalarity.
    pub fn diagnostics(&self) -> Result<RepDiagnostics> {
        let n = self.generators.len();
        let hermiticity = self
            .generators
            .iter()
            .map(|g| g.hermiticity_residual())
            .fold(0.0_f64, f64::max);

        let mut gram = 0.0_f64;
        for a in 0..n {
            for b in a..n {
                let t = trace(&self.defining[a].dot(&self.defining[b]));
                let target = if a == b { 0.5 } else { 0.0 };
                gram = gram.max((t.re - target).abs()).max(t.im.abs());
            }
        }

        let f = self.structure_constants()?;
        let mut antisymmetry = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    antisymmetry = antisymmetry.max((f[[a, b, c]] + f[[b, a, c]]).abs());
                }
            }
        }

        let mut closure = 0.0_f64;
        let i1 = crate::linalg::C64::new(0.0, 1.0);
        for a in 0..n {
            for b in (a + 1)..n {
                let mut rhs = CMat::zeros((self.dim_hilbert, self.dim_hilbert));
                for c in 0..n {
                    let fc = f[[a, b, c]];
                    if fc.abs() > 1e-14 {
                        rhs = rhs + self.generators[c].mapv(|z| z * i1 * fc);
                    }
                }
                let lhs = commutator(&self.generators[a], &self.generators[b]);
                closure = closure.max(max_abs(&(lhs - rhs)));
            }
        }

        let c2 = self.casimir();
        let c0 = trace(c2).re / self.dim_hilbert as f64;
        let scalar_part = CMat::eye(self.dim_hilbert).mapv(|z| z * c0);
        let casimir_scalarity = max_abs(&(c2.matrix() - &scalar_part)) / c0.abs().max(1.0);

        Ok(RepDiagnostics {
            hermiticity,
            gram,
            closure,
            antisymmetry,
            casimir_scalarity,
        })
    }

    /// Convenience: true when every diagnostic sits below [`CLOSURE_TOL`].
    pub fn validate(&self) -> Result<()> {
        let d = self.diagnostics()?;
        if d.max_residual() > CLOSURE_TOL {
            return Err(Error::InvalidArgument(format!(
                "representation fails validation (max residual {:.3e})",
                d.max_residual()
            )));
        }
        Ok(())
    }
}

/// Σ_a L_a² as an owned operator.
pub fn quadratic_casimir(rep: &AlgebraRep) -> OperatorMatrix {
    rep.casimir().clone()
}

/// Number of CSCO operators a full chain of this algebra carries:
/// d = l + (n − l)/2 (Cartans plus one per root pair).
pub fn csco_count(rep: &AlgebraRep) -> usize {
    let n = rep.dim_algebra();
    let l = rep.rank();
    debug_assert!((n - l) % 2 == 0, "root space must pair up");
    l + (n - l) / 2
}

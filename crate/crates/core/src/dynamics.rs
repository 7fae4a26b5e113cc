//! Exact quantum time evolution and the classical Hamiltonian flow on the
//! coherent-state manifold.
//!
//! Quantum evolution uses the spectral propagator U = exp(−iH·dt) applied on
//! a fixed time grid; Δ, energy and norm error are recorded per sample and
//! checked against drift bounds. The classical model is the flow of
//! H_cl(α) = ⟨α|H|α⟩ in per-factor su(2) charts (φ, p = j·cosθ).

use crate::algebra::AlgebraRep;
use crate::coherent::{delta, displace, su2_alpha, DisplacementParams};
use crate::error::{Error, Result};
use crate::linalg::{hermiticity_residual, max_abs};
use crate::operator::{OperatorMatrix, StateVector};
use crate::{ENERGY_DRIFT_TOL, HERMITICITY_TOL, NORM_TOL};

/// Sampled quantum trajectory on a uniform time grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<StateVector>,
    delta_series: Vec<f64>,
    energy_series: Vec<f64>,
    norm_error_series: Vec<f64>,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn delta_series(&self) -> &[f64] {
        &self.delta_series
    }

    pub fn energy_series(&self) -> &[f64] {
        &self.energy_series
    }

    pub fn norm_error_series(&self) -> &[f64] {
        &self.norm_error_series
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_delta(&self) -> f64 {
        self.delta_series.iter().cloned().fold(f64::NAN, f64::max)
    }

    /// Drift invariants: strictly increasing grid, norm error below 1e−9 at
    /// every sample, energy constant to 1e−8 relative.
    pub fn validate(&self) -> Result<()> {
        let n = self.times.len();
        if self.states.len() != n
            || self.delta_series.len() != n
            || self.energy_series.len() != n
            || self.norm_error_series.len() != n
        {
            return Err(Error::InvalidArgument(
                "trajectory series lengths differ".into(),
            ));
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "trajectory time grid is not strictly increasing".into(),
            ));
        }
        if let Some((k, &e)) = self
            .norm_error_series
            .iter()
            .enumerate()
            .find(|(_, &e)| !(e < NORM_TOL))
        {
            return Err(Error::NumericalDrift(format!(
                "norm error {e:.3e} at sample {k} exceeds {NORM_TOL:.0e}"
            )));
        }
        let e0 = self.energy_series[0];
        let scale = e0.abs().max(1.0);
        if let Some((k, &e)) = self
            .energy_series
            .iter()
            .enumerate()
            .find(|(_, &e)| !((e - e0).abs() / scale < ENERGY_DRIFT_TOL))
        {
            return Err(Error::NumericalDrift(format!(
                "energy drift {:.3e} at sample {k} exceeds {ENERGY_DRIFT_TOL:.0e} relative",
                (e - e0).abs() / scale
            )));
        }
        Ok(())
    }
}

fn check_hermitian(h: &OperatorMatrix) -> Result<()> {
    let scale = max_abs(h.matrix()).max(1.0);
    let res = hermiticity_residual(h.matrix());
    if res > HERMITICITY_TOL * scale {
        return Err(Error::NotHermitian { residual: res });
    }
    Ok(())
}

/// U = exp(−iH·dt) by Hermitian eigendecomposition.
pub fn propagator(h: &OperatorMatrix, dt: f64) -> Result<OperatorMatrix> {
    if !dt.is_finite() {
        return Err(Error::InvalidArgument("dt must be finite".into()));
    }
    check_hermitian(h)?;
    let u = crate::linalg::exp_i_hermitian(h.matrix(), -dt)?;
    OperatorMatrix::new(u)
}

fn grid_steps(t_max: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument("dt must be positive".into()));
    }
    if !(t_max >= dt) || !t_max.is_finite() {
        return Err(Error::InvalidArgument("t_max must be at least dt".into()));
    }
    Ok((t_max / dt).round().max(1.0) as usize)
}

/// Evolve `psi0` under `h` on a fixed grid, recording Δ, energy and norm
/// error per sample; drift bounds are enforced before returning.
pub fn evolve(
    h: &OperatorMatrix,
    psi0: &StateVector,
    t_max: f64,
    dt: f64,
    rep: &AlgebraRep,
) -> Result<Trajectory> {
    if h.dim() != rep.dim_hilbert() || psi0.dim() != rep.dim_hilbert() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim_hilbert(),
            got: if h.dim() != rep.dim_hilbert() {
                h.dim()
            } else {
                psi0.dim()
            },
        });
    }
    let defect = (psi0.norm() - 1.0).abs();
    if defect > NORM_TOL {
        return Err(Error::NotNormalized { defect });
    }
    let steps = grid_steps(t_max, dt)?;
    let u = propagator(h, dt)?;
    let n = steps + 1;
    let mut traj = Trajectory {
        times: Vec::with_capacity(n),
        states: Vec::with_capacity(n),
        delta_series: Vec::with_capacity(n),
        energy_series: Vec::with_capacity(n),
        norm_error_series: Vec::with_capacity(n),
    };
    let mut psi = psi0.clone();
    for k in 0..=steps {
        let norm_error = (psi.norm() - 1.0).abs();
        let unit = psi.normalized();
        traj.times.push(k as f64 * dt);
        traj.delta_series.push(delta(rep, &unit)?);
        traj.energy_series.push(h.expectation(&unit).re);
        traj.norm_error_series.push(norm_error);
        traj.states.push(unit);
        if k < steps {
            psi = StateVector::raw(u.dot(psi.amplitudes()));
        }
    }
    traj.validate()?;
    Ok(traj)
}

/// Recompute Δ at every stored state (idempotent with the cached series).
pub fn delta_series(rep: &AlgebraRep, traj: &Trajectory) -> Result<Vec<f64>> {
    traj.states.iter().map(|s| delta(rep, s)).collect()
}

/// ⟨α|H|α⟩ on the displaced coherent state.
pub fn classical_energy(
    rep: &AlgebraRep,
    h: &OperatorMatrix,
    params: &DisplacementParams,
) -> Result<f64> {
    check_hermitian(h)?;
    if h.dim() != rep.dim_hilbert() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim_hilbert(),
            got: h.dim(),
        });
    }
    let psi = displace(rep, params)?;
    Ok(h.expectation(&psi).re)
}

/// Phase-space point of one su(2) factor: angle q = φ and momentum
/// p = j·cosθ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalState {
    pub q: f64,
    pub p: f64,
}

/// Classical trajectory: one `ClassicalState` per su(2) factor per sample.
#[derive(Clone, Debug)]
pub struct ClassicalTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<ClassicalState>>,
    pub energy_series: Vec<f64>,
}

fn su2_factor_spins(rep: &AlgebraRep) -> Result<Vec<f64>> {
    rep.factors()
        .iter()
        .map(|f| {
            f.label.spin_j().ok_or(Error::UnsupportedRep {
                context: "classical su(2) chart",
                label: rep.name().to_string(),
            })
        })
        .collect()
}

/// Displacement amplitudes for the coherent state at the given chart
/// coordinates: α_f = su2_alpha(acos(p/j), q) in each factor's ladder slot.
pub fn coherent_from_classical(
    rep: &AlgebraRep,
    coords: &[ClassicalState],
) -> Result<DisplacementParams> {
    let spins = su2_factor_spins(rep)?;
    if coords.len() != spins.len() {
        return Err(Error::DimensionMismatch {
            expected: spins.len(),
            got: coords.len(),
        });
    }
    let mut alphas = vec![crate::linalg::C64::new(0.0, 0.0); rep.ladder_pairs().len()];
    for ((state, j), meta) in coords.iter().zip(&spins).zip(rep.factors()) {
        let theta = (state.p / j).clamp(-1.0, 1.0).acos();
        alphas[meta.ladder_range.start] = su2_alpha(theta, state.q);
    }
    Ok(DisplacementParams::new(alphas))
}

const FD_STEP: f64 = 1e-5;

/// Canonical flow of H_cl on the su(2) charts, integrated by fixed-step
/// fourth-order Runge–Kutta with central-difference gradients.
///
/// With the lowest-weight convention ⟨J⟩ = −j·n̂(θ,φ) the chart (q=φ, p)
/// carries the symplectic orientation q̇ = −∂H_cl/∂p, ṗ = +∂H_cl/∂q; this is
/// the orientation under which H = J_z generates the precession
/// φ(t) = φ₀ + t matching the quantum Bloch flow.
pub fn classical_trajectory_su2(
    rep: &AlgebraRep,
    h: &OperatorMatrix,
    initial: &[ClassicalState],
    t_max: f64,
    dt: f64,
) -> Result<ClassicalTrajectory> {
    let spins = su2_factor_spins(rep)?;
    if initial.len() != spins.len() {
        return Err(Error::DimensionMismatch {
            expected: spins.len(),
            got: initial.len(),
        });
    }
    for (state, j) in initial.iter().zip(&spins) {
        if state.p.abs() > j + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "initial |p| = {} exceeds j = {j}",
                state.p.abs()
            )));
        }
    }
    check_hermitian(h)?;
    let steps = grid_steps(t_max, dt)?;

    let pack = |coords: &[ClassicalState]| -> Vec<f64> {
        coords.iter().flat_map(|s| [s.q, s.p]).collect()
    };
    let unpack = |y: &[f64]| -> Vec<ClassicalState> {
        y.chunks_exact(2)
            .map(|c| ClassicalState { q: c[0], p: c[1] })
            .collect()
    };
    let energy = |y: &[f64]| -> Result<f64> {
        let params = coherent_from_classical(rep, &unpack(y))?;
        classical_energy(rep, h, &params)
    };
    let flow = |y: &[f64]| -> Result<Vec<f64>> {
        let mut dy = vec![0.0; y.len()];
        let mut probe = y.to_vec();
        for i in 0..y.len() {
            probe[i] = y[i] + FD_STEP;
            let plus = energy(&probe)?;
            probe[i] = y[i] - FD_STEP;
            let minus = energy(&probe)?;
            probe[i] = y[i];
            let grad = (plus - minus) / (2.0 * FD_STEP);
            if i % 2 == 0 {
                dy[i + 1] = grad; // ṗ = +∂H/∂q
            } else {
                dy[i - 1] = -grad; // q̇ = −∂H/∂p
            }
        }
        Ok(dy)
    };

    let mut y = pack(initial);
    let mut out = ClassicalTrajectory {
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        energy_series: Vec::with_capacity(steps + 1),
    };
    for k in 0..=steps {
        out.times.push(k as f64 * dt);
        out.states.push(unpack(&y));
        out.energy_series.push(energy(&y)?);
        if k == steps {
            break;
        }
        let k1 = flow(&y)?;
        let y2: Vec<f64> = y.iter().zip(&k1).map(|(a, b)| a + 0.5 * dt * b).collect();
        let k2 = flow(&y2)?;
        let y3: Vec<f64> = y.iter().zip(&k2).map(|(a, b)| a + 0.5 * dt * b).collect();
        let k3 = flow(&y3)?;
        let y4: Vec<f64> = y.iter().zip(&k3).map(|(a, b)| a + dt * b).collect();
        let k4 = flow(&y4)?;
        for i in 0..y.len() {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_su2_irrep, tensor_sum_rep};
    use crate::coherent::coherent_su2;
    use crate::linalg::{dagger, C64, CMat};
    use crate::models::hamiltonian_single_spin;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn propagator_limits() {
        let rep = build_su2_irrep(2).unwrap();
        let h = hamiltonian_single_spin(&rep, 1.0, 0.0, 0.0).unwrap();
        let u0 = propagator(&h, 0.0).unwrap();
        assert!(max_abs(&(u0.matrix() - &CMat::eye(3))) < 1e-14);
        // integer spectrum → period 2π
        let u = propagator(&h, TAU).unwrap();
        assert!(max_abs(&(u.matrix() - &CMat::eye(3))) < 1e-10);
        let udag_u = dagger(u.matrix()).dot(u.matrix());
        assert!(max_abs(&(&udag_u - &CMat::eye(3))) < 1e-10);
    }

    #[test]
    fn propagator_rejects_nonhermitian() {
        let mut m = CMat::zeros((2, 2));
        m[[0, 1]] = C64::new(1.0, 0.0);
        let op = OperatorMatrix::new(m).unwrap();
        assert!(matches!(
            propagator(&op, 1.0),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn precession_matches_closed_form() {
        let rep = build_su2_irrep(6).unwrap();
        let h = hamiltonian_single_spin(&rep, 1.0, 0.0, 0.0).unwrap();
        let theta = 1.1;
        let phi0 = 0.3;
        let psi0 = coherent_su2(&rep, theta, phi0).unwrap();
        let traj = evolve(&h, &psi0, 10.0, 0.05, &rep).unwrap();
        let jx = rep.generator(0);
        for (t, s) in traj.times().iter().zip(traj.states()) {
            let want = -3.0 * theta.sin() * (phi0 + t).cos();
            assert!((jx.expectation(s).re - want).abs() < 1e-8, "t={t}");
        }
        // Δ constant on the coherent orbit of a linear Hamiltonian
        for d in traj.delta_series() {
            assert!((d - 3.0).abs() < 1e-10);
        }
        assert!((traj.max_delta() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn step_halving_agrees() {
        let rep = build_su2_irrep(6).unwrap();
        let h = hamiltonian_single_spin(&rep, 1.0, 1.0, 1.0).unwrap();
        let psi0 = coherent_su2(&rep, 2.0, 0.0).unwrap();
        let a = evolve(&h, &psi0, 5.0, 0.01, &rep).unwrap();
        let b = evolve(&h, &psi0, 5.0, 0.005, &rep).unwrap();
        // exact propagator: the final states agree regardless of step
        let last_a = a.states().last().unwrap();
        let last_b = b.states().last().unwrap();
        let fid = last_a.overlap(last_b).norm();
        assert!((fid - 1.0).abs() < 1e-10);
        assert!((a.delta_series().last().unwrap() - b.delta_series().last().unwrap()).abs() < 1e-9);
    }

    #[test]
    fn delta_series_idempotent() {
        let rep = build_su2_irrep(6).unwrap();
        let h = hamiltonian_single_spin(&rep, 1.0, 1.0, 1.0).unwrap();
        let psi0 = coherent_su2(&rep, 2.0, 0.0).unwrap();
        let traj = evolve(&h, &psi0, 2.0, 0.01, &rep).unwrap();
        let again = delta_series(&rep, &traj).unwrap();
        for (x, y) in traj.delta_series().iter().zip(&again) {
            assert_eq!(x, y);
        }
        assert_eq!(traj.delta_series()[0], again[0]);
    }

    #[test]
    fn evolve_input_checks() {
        let rep = build_su2_irrep(6).unwrap();
        let h = hamiltonian_single_spin(&rep, 1.0, 0.0, 0.0).unwrap();
        let psi0 = coherent_su2(&rep, 1.0, 0.0).unwrap();
        assert!(evolve(&h, &psi0, 1.0, 0.0, &rep).is_err());
        assert!(evolve(&h, &psi0, 0.001, 0.01, &rep).is_err());
        let wrong = StateVector::basis_state(5, 0).unwrap();
        assert!(evolve(&h, &wrong, 1.0, 0.01, &rep).is_err());
    }

    #[test]
    fn validate_flags_synthetic_drift() {
        let mk = |energy: Vec<f64>, norm_err: Vec<f64>| Trajectory {
            times: vec![0.0, 1.0],
            states: vec![
                StateVector::basis_state(2, 0).unwrap(),
                StateVector::basis_state(2, 0).unwrap(),
            ],
            delta_series: vec![0.5, 0.5],
            energy_series: energy,
            norm_error_series: norm_err,
        };
        assert!(mk(vec![1.0, 1.0], vec![0.0, 0.0]).validate().is_ok());
        let bad_energy = mk(vec![1.0, 1.1], vec![0.0, 0.0]).validate();
        assert!(matches!(bad_energy, Err(Error::NumericalDrift(_))));
        let bad_norm = mk(vec![1.0, 1.0], vec![0.0, 1e-6]).validate();
        assert!(matches!(bad_norm, Err(Error::NumericalDrift(_))));
    }

    #[test]
    fn classical_energy_closed_forms() {
        let rep = build_su2_irrep(6).unwrap();
        let jz = hamiltonian_single_spin(&rep, 1.0, 0.0, 0.0).unwrap();
        for (theta, phi) in [(0.0, 0.0), (1.0, 0.5), (PI / 2.0, -1.0), (2.5, 2.0)] {
            let params = DisplacementParams::new(vec![su2_alpha(theta, phi)]);
            let e = classical_energy(&rep, &jz, &params).unwrap();
            assert!((e + 3.0 * theta.cos()).abs() < 1e-10);
        }
        // quadratic term: ⟨J_z²⟩ = j(j−1/2)cos²θ + j/2 on coherent states
        let j = 3.0;
        let quad = hamiltonian_single_spin(&rep, 0.0, 0.0, 1.0).unwrap();
        for theta in [0.0, 0.7, 1.9, PI] {
            let params = DisplacementParams::new(vec![su2_alpha(theta, 0.2)]);
            let e = classical_energy(&rep, &quad, &params).unwrap();
            let want = j * (j - 0.5) * theta.cos() * theta.cos() + j / 2.0;
            assert!((e - want).abs() < 1e-10, "theta={theta}");
        }
    }

    #[test]
    fn classical_precession() {
        let rep = build_su2_irrep(6).unwrap();
        let h = hamiltonian_single_spin(&rep, 1.0, 0.0, 0.0).unwrap();
        let theta0: f64 = 1.3;
        let init = [ClassicalState {
            q: 0.4,
            p: 3.0 * theta0.cos(),
        }];
        let traj = classical_trajectory_su2(&rep, &h, &init, 20.0, 0.01).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            assert!((s[0].q - (0.4 + t)).abs() < 1e-6, "t={t}");
            assert!((s[0].p - init[0].p).abs() < 1e-6);
        }
        let e0 = traj.energy_series[0];
        for e in &traj.energy_series {
            assert!((e - e0).abs() < 1e-7);
        }
    }

    #[test]
    fn classical_input_checks() {
        let rep = build_su2_irrep(6).unwrap();
        let h = hamiltonian_single_spin(&rep, 1.0, 0.0, 0.0).unwrap();
        let too_fast = [ClassicalState { q: 0.0, p: 3.5 }];
        assert!(classical_trajectory_su2(&rep, &h, &too_fast, 1.0, 0.01).is_err());
        let half = build_su2_irrep(1).unwrap();
        let pair = tensor_sum_rep(&[&half, &half]).unwrap();
        let hp = crate::models::hamiltonian_coupled_spins(&pair, 0.0).unwrap();
        let one = [ClassicalState { q: 0.0, p: 0.0 }];
        assert!(classical_trajectory_su2(&pair, &hp, &one, 1.0, 0.01).is_err());
    }

    #[test]
    fn coupled_classical_charts() {
        // μ=0: two decoupled precessions at rate (1−μ) = 1
        let half = build_su2_irrep(1).unwrap();
        let pair = tensor_sum_rep(&[&half, &half]).unwrap();
        let h = crate::models::hamiltonian_coupled_spins(&pair, 0.0).unwrap();
        let init = [
            ClassicalState { q: 0.0, p: 0.1 },
            ClassicalState { q: 1.0, p: -0.2 },
        ];
        let traj = classical_trajectory_su2(&pair, &h, &init, 5.0, 0.01).unwrap();
        let last = traj.states.last().unwrap();
        assert!((last[0].q - 5.0).abs() < 1e-5);
        assert!((last[1].q - 6.0).abs() < 1e-5);
        assert!((last[0].p - 0.1).abs() < 1e-6);
    }
}

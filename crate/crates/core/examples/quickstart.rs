//! Minimal tour: build a spin irrep, score a coherent state, classify a
//! Hamiltonian, count degrees of freedom, and evolve.

use dynalg::algebra::{build_chain, build_su2_irrep, count_idf, ChainId};
use dynalg::coherent::{coherent_su2, delta, delta_min};
use dynalg::dynamics::evolve;
use dynalg::models::{classify_integrability, HamiltonianSpec, ModelParams};

fn main() -> dynalg::Result<()> {
    // Spin j = 3 (two_j = 6): the coherent orbit sits at Δ = j.
    let rep = build_su2_irrep(6)?;
    let psi = coherent_su2(&rep, 2.0, 0.0)?;
    println!("delta     = {}", delta(&rep, &psi)?);
    println!("delta_min = {}", delta_min(&rep)?);

    // One-axis twisting (μ J_z²) breaks linearity in the generators.
    let params = ModelParams::SingleSpin {
        omega_z: 1.0,
        omega_x: 1.0,
        mu: 1.0,
    };
    let spec = HamiltonianSpec {
        rep: &rep,
        params: &params,
    };
    let chain = build_chain(&rep, ChainId::Su2Jz)?;
    let verdict = classify_integrability(&spec, &chain)?;
    println!("verdict   = {}", verdict.verdict);
    println!("idf       = {}", count_idf(&rep, &chain)?);

    // Exact evolution; Δ grows away from the coherent floor.
    let h = spec.build()?;
    let traj = evolve(&h, &psi, 20.0, 0.01, &rep)?;
    let max_delta = traj
        .delta_series()
        .iter()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    println!("max delta = {max_delta:.3}");
    Ok(())
}

//! Numerical diagonalization of the particle-photon Hamiltonian.

pub mod block;
pub mod charged;
pub mod label;
pub mod tridiag;

pub use block::{
    build_spin_half_block, build_spin_j_block, residual, solve_block, BasisState, BlockMatrix,
    Eigenpair,
};
pub use charged::{
    build_charged_block, build_h_prime_block, charged_splitting_numeric, perturbation_h2,
    ChargedWindow, PerturbationResult,
};
pub use label::{find_label, label_states, LabeledEigenpair};

use crate::error::{ModelError, Result};
use crate::model::{HalfInt, Particle, PhotonField, Recoil};

/// Dressed state ψ_{j,N0} of a spin-J particle: the eigenpair of the sector
/// containing |j, N0⟩ that continues to that bare state.
pub fn dressed_level_numeric(
    field: &PhotonField,
    particle: &Particle,
    j: HalfInt,
    recoil: Recoil,
) -> Result<LabeledEigenpair> {
    let block = build_spin_j_block(field, particle, j, recoil)?;
    let labels = label_states(&block)?;
    find_label(&labels, j)
        .cloned()
        .ok_or_else(|| ModelError::Domain(format!("no dressed state labeled {j}")))
}

/// ψ_{j,N0} for every j = −J..J, ascending in j.
pub fn dressed_levels_numeric(
    field: &PhotonField,
    particle: &Particle,
    recoil: Recoil,
) -> Result<Vec<LabeledEigenpair>> {
    particle
        .j_total
        .projections()
        .map(|j| dressed_level_numeric(field, particle, j, recoil))
        .collect()
}

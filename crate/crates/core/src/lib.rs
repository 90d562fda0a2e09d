//! Spin particles dressed by a circularly polarized electromagnetic wave.
//!
//! The crate has three layers. `analytic` holds closed-form energies and
//! splittings, `oracle` diagonalizes the particle-photon Hamiltonian in
//! finite blocks, and `observables` builds spin expectations, transition
//! spectra and magnetization on top of both. `verify` cross-checks the
//! layers against each other.

pub mod analytic;
pub mod error;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod units;
pub mod verify;

pub use error::{enforce, ModelError, Result, Warning};
pub use model::{HalfInt, Handedness, Particle, PhotonField, Recoil};

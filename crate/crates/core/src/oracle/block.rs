//! Finite blocks of the particle-photon Hamiltonian.
//!
//! The interaction only trades one unit of angular momentum projection for
//! one photon, so l_z = J_z + h·N (h = +1 clockwise, −1 counterclockwise) is
//! conserved and each sector is a real symmetric tridiagonal matrix of size at
//! most 2J + 1. Blocks are built in the clockwise frame and relabeled, so the
//! matrices of mirrored sectors are identical bit for bit.

use serde::Serialize;

use crate::analytic::{omega_shifted, Branch};
use crate::error::{ModelError, Result};
use crate::model::{HalfInt, Handedness, Particle, PhotonField, Recoil};
use crate::units::HBAR;

use super::tridiag;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisState {
    /// Lab-frame J_z projection.
    pub n: HalfInt,
    /// Photon occupation N.
    pub photons: f64,
    /// N − N0.
    pub photon_offset: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockMatrix {
    /// Diagonal relative to `reference`, erg.
    pub diag: Vec<f64>,
    /// `offdiag[i]` couples basis states `i` and `i + 1`, erg.
    pub offdiag: Vec<f64>,
    pub basis: Vec<BasisState>,
    /// Conserved l_z shared by every basis state.
    pub sector: f64,
    /// Bare energy ħ²k²/2m + N0ħω0 added back to every eigenvalue, erg.
    pub reference: f64,
    /// Bare energy of each basis state, erg. Equals `reference + diag` up to
    /// rounding but is evaluated directly, so small totals keep their digits.
    pub bare: Vec<f64>,
    pub handedness: Handedness,
}

impl BlockMatrix {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Largest absolute entry, a cheap norm scale.
    pub fn scale(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.offdiag)
            .fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Copy with every off-diagonal multiplied by `lambda`.
    pub fn with_coupling_scaled(&self, lambda: f64) -> Self {
        let mut out = self.clone();
        out.offdiag.iter_mut().for_each(|x| *x *= lambda);
        out
    }

    /// Index of a basis state by lab projection.
    pub fn index_of(&self, n: HalfInt) -> Option<usize> {
        self.basis.iter().position(|b| b.n == n)
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.offdiag[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }
}

/// One eigenpair of a block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenpair {
    /// Eigenvalue relative to the block reference, erg.
    pub shift: f64,
    /// `reference + shift`, erg.
    pub energy: f64,
    /// Coefficients in the block's basis order.
    pub vector: Vec<f64>,
}

/// ħ²k'²/2m + (N0 + l)ħω0 for the state holding `l` extra photons; with
/// exact recoil the particle momentum is k' = k − l·k0·ẑ.
pub(crate) fn bare_energy(
    field: &PhotonField,
    particle: &Particle,
    l: i64,
    recoil: Recoil,
) -> Result<f64> {
    let n = field.integer_n0()? + l as f64;
    let mut moved = particle.clone();
    if recoil == Recoil::Exact {
        moved.k[2] -= l as f64 * field.k0();
    }
    Ok(moved.kinetic_energy() + n * HBAR * field.omega0())
}

pub(crate) fn lab_sector(handedness: Handedness, n: HalfInt, photons: f64) -> f64 {
    n.value() + f64::from(handedness.sign()) * photons
}

/// Sector block of the spin-J Hamiltonian containing the bare state
/// |j_sector, N0⟩.
///
/// Basis |n, N0 + j − n⟩ (clockwise frame), diagonal N0ħω0 + lħω_l with
/// l = j − n, and off-diagonal −(μH̃0/√2 J)·sqrt((N0+j−n)(J+n+1)(J−n))
/// between n and n+1. States with negative photon number are dropped.
pub fn build_spin_j_block(
    field: &PhotonField,
    particle: &Particle,
    j_sector: HalfInt,
    recoil: Recoil,
) -> Result<BlockMatrix> {
    particle.validate()?;
    let big_j = particle.j_total;
    if big_j.int_diff(j_sector).is_none() {
        return Err(ModelError::Domain(format!(
            "sector label {j_sector} does not match J = {big_j}"
        )));
    }
    let n0 = field.integer_n0()?;
    let h_tilde = field.h_tilde()?;
    let handedness = field.handedness();
    let jm = handedness.frame(j_sector);
    let jv = big_j.value();

    let mut basis = Vec::new();
    let mut diag = Vec::new();
    let mut bare = Vec::new();
    let mut frame_m = Vec::new();
    for m in big_j.projections() {
        let l = jm.int_diff(m).expect("parity checked");
        let photons = n0 + l as f64;
        if photons < 0.0 {
            continue;
        }
        diag.push(l as f64 * HBAR * omega_shifted(field, particle, l, recoil));
        bare.push(bare_energy(field, particle, l, recoil)?);
        basis.push(BasisState {
            n: handedness.frame(m),
            photons,
            photon_offset: l,
        });
        frame_m.push(m);
    }
    if basis.is_empty() {
        return Err(ModelError::EmptyBasis {
            sector: lab_sector(handedness, j_sector, n0),
        });
    }
    let prefactor = -particle.mu * h_tilde / (std::f64::consts::SQRT_2 * jv);
    let offdiag = frame_m
        .windows(2)
        .zip(&basis)
        .map(|(w, b)| {
            let m = w[0].value();
            let angular = (jv + m + 1.0) * (jv - m);
            prefactor * (b.photons * angular).sqrt()
        })
        .collect();
    Ok(BlockMatrix {
        diag,
        offdiag,
        sector: lab_sector(handedness, j_sector, n0),
        basis,
        reference: particle.kinetic_energy() + n0 * HBAR * field.omega0(),
        bare,
        handedness,
    })
}

/// Spin-1/2 sector built directly from σ± and the ladder relations of the
/// photon operators, without going through the general-J construction.
pub fn build_spin_half_block(
    field: &PhotonField,
    particle: &Particle,
    branch: Branch,
    recoil: Recoil,
) -> Result<BlockMatrix> {
    particle.validate()?;
    if particle.j_total != HalfInt::HALF {
        return Err(ModelError::Domain(format!(
            "spin-1/2 block requested for J = {}",
            particle.j_total
        )));
    }
    let n0 = field.integer_n0()?;
    let h_tilde = field.h_tilde()?;
    let handedness = field.handedness();
    let frame_branch = Branch::from_j(handedness.frame(branch.j()))?;
    let up = handedness.frame(HalfInt::HALF);
    let down = handedness.frame(HalfInt::MINUS_HALF);
    let g = std::f64::consts::SQRT_2 * particle.mu * h_tilde;
    let state = |n, l: i64| BasisState {
        n,
        photons: n0 + l as f64,
        photon_offset: l,
    };

    let (diag, offdiag, basis) = match frame_branch {
        Branch::Plus => {
            // |-1/2, N0+1⟩, |+1/2, N0⟩
            let hw = HBAR * omega_shifted(field, particle, 1, recoil);
            (
                vec![hw, 0.0],
                vec![-g * (n0 + 1.0).sqrt()],
                vec![state(down, 1), state(up, 0)],
            )
        }
        Branch::Minus if n0 == 0.0 => (vec![0.0], vec![], vec![state(down, 0)]),
        Branch::Minus => {
            // |-1/2, N0⟩, |+1/2, N0-1⟩
            let hw = HBAR * omega_shifted(field, particle, -1, recoil);
            (
                vec![0.0, -hw],
                vec![-g * n0.sqrt()],
                vec![state(down, 0), state(up, -1)],
            )
        }
    };
    let bare = basis
        .iter()
        .map(|b| bare_energy(field, particle, b.photon_offset, recoil))
        .collect::<Result<_>>()?;
    Ok(BlockMatrix {
        diag,
        offdiag,
        basis,
        bare,
        sector: lab_sector(handedness, branch.j(), n0),
        reference: particle.kinetic_energy() + n0 * HBAR * field.omega0(),
        handedness,
    })
}

/// All eigenpairs, ascending in energy.
pub fn solve_block(block: &BlockMatrix) -> Vec<Eigenpair> {
    let eig = tridiag::eigh(&block.diag, &block.offdiag);
    eig.values
        .into_iter()
        .zip(eig.vectors)
        .map(|(shift, vector)| Eigenpair {
            shift,
            energy: block.reference + shift,
            vector,
        })
        .collect()
}

/// ‖Hv − εv‖ for an eigenpair, in block-relative units.
pub fn residual(block: &BlockMatrix, pair: &Eigenpair) -> f64 {
    block
        .apply(&pair.vector)
        .iter()
        .zip(&pair.vector)
        .map(|(hv, v)| (hv - pair.shift * v).powi(2))
        .sum::<f64>()
        .sqrt()
}

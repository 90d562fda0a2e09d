//! Charged spin-1/2 particle: the spin-orbit-modified Hamiltonian H′ + H″.
//!
//! H′ keeps the σ± structure of the neutral problem but gives the photon term
//! a spin-dependent frequency,
//! a†a·[ħω0 + (eH̃0²/mcω0²)(ec + (2μa + μB)ω0 s)], s = ±1,
//! so it still splits into 2×2 sectors. H″ carries the transverse momentum:
//! it moves one photon without flipping the spin, with amplitude
//! −(H̃0/m)(e/ω0 + μa/c + μB/2c)·ħ(kx ± iky)/√2 times the photon factor √N.
//! A basis phase e^{−iφ(N+s)} (φ the azimuth of k⊥) makes every amplitude real,
//! so only |k⊥| enters.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::analytic::{omega_shifted, Branch, SplittingResult};
use crate::error::{ModelError, Result, Warning};
use crate::model::{HalfInt, Handedness, Particle, PhotonField, Recoil};
use crate::units::{C_LIGHT, HBAR};

use super::block::{lab_sector, BasisState, BlockMatrix};
use super::label::{label_states, LabeledEigenpair};

/// Ratio of second-order correction to level spacing that triggers a warning.
pub const PERTURBATION_WARN: f64 = 0.1;

/// Coefficients of the charged Hamiltonian, all in erg.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChargedTerms {
    /// Spin-independent photon-term shift e²H̃0²/mω0² per photon.
    pub ponderomotive: f64,
    /// Spin-dependent photon-term shift eH̃0²(2μa + μB)/mcω0 per photon.
    pub spin_photon: f64,
    /// H″ amplitude per √N: −(H̃0/m)(e/ω0 + μa/c + μB/2c)·ħk⊥/√2.
    pub hopping: f64,
}

pub fn charged_terms(field: &PhotonField, particle: &Particle) -> Result<ChargedTerms> {
    let h_tilde = field.h_tilde()?;
    let w0 = field.omega0();
    let m = particle.mass;
    let e = particle.charge;
    let mu_b = particle.bohr_magneton();
    let mu_a = particle.mu_anomalous;
    let kappa = e / w0 + mu_a / C_LIGHT + mu_b / (2.0 * C_LIGHT);
    Ok(ChargedTerms {
        ponderomotive: e * e * h_tilde * h_tilde / (m * w0 * w0),
        spin_photon: e * h_tilde * h_tilde * (2.0 * mu_a + mu_b) / (m * C_LIGHT * w0),
        hopping: -(h_tilde / m) * kappa * HBAR * particle.k_perp() / std::f64::consts::SQRT_2,
    })
}

fn require_charge(particle: &Particle) -> Result<()> {
    if particle.is_charged() {
        Ok(())
    } else {
        Err(ModelError::Domain(format!(
            "{} carries no charge",
            particle.name
        )))
    }
}

/// ħ²k²/2m + N0ħω0 + N0·e²H̃0²/mω0², the common reference of all charged
/// blocks.
fn charged_reference(
    field: &PhotonField,
    particle: &Particle,
    terms: &ChargedTerms,
) -> Result<f64> {
    let n0 = field.n0()?;
    Ok(particle.kinetic_energy() + n0 * (HBAR * field.omega0() + terms.ponderomotive))
}

/// Diagonal of H′ for frame spin `up` and photon number `photons`, relative
/// to the charged reference.
fn h_prime_diagonal(
    field: &PhotonField,
    particle: &Particle,
    terms: &ChargedTerms,
    up: bool,
    photons: f64,
    recoil: Recoil,
) -> Result<f64> {
    let n0 = field.integer_n0()?;
    let l = (photons - n0) as i64;
    let sigma = if up { 1.0 } else { -1.0 };
    Ok(
        l as f64 * (HBAR * omega_shifted(field, particle, l, recoil) + terms.ponderomotive)
            + photons * sigma * terms.spin_photon,
    )
}

/// Coupling of frame states |+1/2, N⟩ and |−1/2, N + 1⟩.
fn h_prime_offdiagonal(particle: &Particle, h_tilde: f64, up_photons: f64) -> f64 {
    -std::f64::consts::SQRT_2 * particle.mu * h_tilde * (up_photons + 1.0).sqrt()
}

fn frame_state(handedness: Handedness, up: bool, photons: f64, n0: f64) -> BasisState {
    let m = if up {
        HalfInt::HALF
    } else {
        HalfInt::MINUS_HALF
    };
    BasisState {
        n: handedness.frame(m),
        photons,
        photon_offset: (photons - n0) as i64,
    }
}

/// H′ sector holding frame states |−1/2, N+1⟩ and |+1/2, N⟩ (in that order),
/// N = `up_photons`. N = −1 leaves only |−1/2, 0⟩.
fn h_prime_sector(
    field: &PhotonField,
    particle: &Particle,
    up_photons: f64,
    recoil: Recoil,
) -> Result<BlockMatrix> {
    let terms = charged_terms(field, particle)?;
    let n0 = field.integer_n0()?;
    let h_tilde = field.h_tilde()?;
    let handedness = field.handedness();
    let down_photons = up_photons + 1.0;
    if down_photons < 0.0 {
        return Err(ModelError::EmptyBasis {
            sector: down_photons,
        });
    }
    let mut diag = vec![h_prime_diagonal(
        field,
        particle,
        &terms,
        false,
        down_photons,
        recoil,
    )?];
    let mut basis = vec![frame_state(handedness, false, down_photons, n0)];
    let mut offdiag = vec![];
    if up_photons >= 0.0 {
        diag.push(h_prime_diagonal(
            field, particle, &terms, true, up_photons, recoil,
        )?);
        basis.push(frame_state(handedness, true, up_photons, n0));
        offdiag.push(h_prime_offdiagonal(particle, h_tilde, up_photons));
    }
    let reference = charged_reference(field, particle, &terms)?;
    Ok(BlockMatrix {
        bare: diag.iter().map(|d| reference + d).collect(),
        diag,
        offdiag,
        sector: lab_sector(handedness, basis[0].n, down_photons),
        basis,
        reference,
        handedness,
    })
}

fn up_photons_for(field: &PhotonField, branch: Branch) -> Result<f64> {
    let n0 = field.integer_n0()?;
    let frame_plus = field.handedness().frame(branch.j()) == HalfInt::HALF;
    Ok(if frame_plus { n0 } else { n0 - 1.0 })
}

/// 2×2 H′ block containing the bare state |j, N0⟩.
pub fn build_h_prime_block(
    field: &PhotonField,
    particle: &Particle,
    branch: Branch,
    recoil: Recoil,
) -> Result<BlockMatrix> {
    require_charge(particle)?;
    h_prime_sector(field, particle, up_photons_for(field, branch)?, recoil)
}

/// Dense H′ + H″ over photon numbers N0 − W ..= N0 + W and both spins.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargedWindow {
    /// Basis ordered by photon number, spin down before spin up (frame).
    pub basis: Vec<BasisState>,
    /// Matrix relative to `reference`, erg.
    pub matrix: DMatrix<f64>,
    pub reference: f64,
    pub handedness: Handedness,
}

impl ChargedWindow {
    /// Eigenvalues ascending with their eigenvectors as columns.
    pub fn solve(&self) -> (Vec<f64>, DMatrix<f64>) {
        let eig = SymmetricEigen::new(self.matrix.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.matrix.nrows(), order.len(), |r, c| {
            eig.eigenvectors[(r, order[c])]
        });
        (values, vectors)
    }

    pub fn index_of(&self, n: HalfInt, photons: f64) -> Option<usize> {
        self.basis
            .iter()
            .position(|b| b.n == n && b.photons == photons)
    }
}

/// Builds the window matrix. Every coupling between states inside the window
/// is kept; states outside are dropped.
pub fn build_charged_block(
    field: &PhotonField,
    particle: &Particle,
    window: u32,
    recoil: Recoil,
) -> Result<ChargedWindow> {
    require_charge(particle)?;
    if window < 1 {
        return Err(ModelError::Domain(
            "window half-width must be at least 1".into(),
        ));
    }
    let n0 = field.integer_n0()?;
    let w = f64::from(window);
    if n0 - w < 0.0 {
        return Err(ModelError::Domain(format!(
            "window ±{window} reaches below zero photons at N0 = {n0}"
        )));
    }
    let terms = charged_terms(field, particle)?;
    let h_tilde = field.h_tilde()?;
    let handedness = field.handedness();

    let mut basis = Vec::new();
    let mut frame_up = Vec::new();
    for k in 0..=2 * window {
        let photons = n0 - w + f64::from(k);
        for up in [false, true] {
            basis.push(frame_state(handedness, up, photons, n0));
            frame_up.push(up);
        }
    }
    let dim = basis.len();
    let mut matrix = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        matrix[(i, i)] = h_prime_diagonal(
            field,
            particle,
            &terms,
            frame_up[i],
            basis[i].photons,
            recoil,
        )?;
        for k in i + 1..dim {
            let (a, b) = (basis[i].photons, basis[k].photons);
            let value = if frame_up[i] == frame_up[k] && b - a == 1.0 {
                terms.hopping * b.sqrt()
            } else if frame_up[i] && !frame_up[k] && b - a == 1.0 {
                h_prime_offdiagonal(particle, h_tilde, a)
            } else {
                0.0
            };
            matrix[(i, k)] = value;
            matrix[(k, i)] = value;
        }
    }
    Ok(ChargedWindow {
        basis,
        matrix,
        reference: charged_reference(field, particle, &terms)?,
        handedness,
    })
}

/// Splitting ε(upper) − ε(lower) of the two dressed states |±1/2, N0⟩ from
/// the exact H′ blocks (H″ is absent at k⊥ = 0).
pub fn charged_splitting_numeric(
    field: &PhotonField,
    particle: &Particle,
    recoil: Recoil,
) -> Result<SplittingResult> {
    require_charge(particle)?;
    let level = |branch: Branch| -> Result<f64> {
        let block = build_h_prime_block(field, particle, branch, recoil)?;
        let labels = label_states(&block)?;
        labels
            .iter()
            .find(|l| l.j == branch.j() && l.photon_offset == 0)
            .map(|l| l.shift)
            .ok_or_else(|| ModelError::Domain(format!("no state labeled {}", branch.j())))
    };
    let (lower, upper) = match field.handedness() {
        Handedness::Clockwise => (Branch::Plus, Branch::Minus),
        Handedness::Counterclockwise => (Branch::Minus, Branch::Plus),
    };
    let delta_eps = level(upper)? - level(lower)?;
    let w0 = field.omega0();
    Ok(SplittingResult {
        delta_eps,
        big_omega: delta_eps / HBAR + w0,
        h0: field.h0()?,
        omega0: w0,
        mu: particle.mu,
        warnings: Vec::new(),
    })
}

/// Second-order energy shift of an H′ eigenstate due to H″.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationResult {
    /// Σ |⟨m|H″|ψ⟩|²/(ε_ψ − ε_m), erg.
    pub correction: f64,
    /// Unperturbed H′ energy relative to the charged reference, erg.
    pub unperturbed_shift: f64,
    pub warnings: Vec<Warning>,
}

/// Second-order correction from H″ for a labeled eigenstate of an H′ block
/// built by [`build_h_prime_block`].
///
/// H″ connects the state to the two neighbouring H′ sectors (one photon more
/// and one fewer); the sum runs over the eigenstates of both.
pub fn perturbation_h2(
    field: &PhotonField,
    particle: &Particle,
    state: &LabeledEigenpair,
    recoil: Recoil,
) -> Result<PerturbationResult> {
    require_charge(particle)?;
    let terms = charged_terms(field, particle)?;
    let handedness = field.handedness();
    let is_up = |b: &BasisState| handedness.frame(b.n) == HalfInt::HALF;
    let up_photons = state
        .basis
        .iter()
        .find(|b| is_up(b))
        .map(|b| b.photons)
        .unwrap_or_else(|| state.basis[0].photons - 1.0);

    let mut correction = 0.0;
    let mut smallest_gap = f64::INFINITY;
    for neighbour in [up_photons - 1.0, up_photons + 1.0] {
        if neighbour + 1.0 < 0.0 {
            continue;
        }
        let block = h_prime_sector(field, particle, neighbour, recoil)?;
        for (index, pair) in super::block::solve_block(&block).into_iter().enumerate() {
            let mut element = 0.0;
            for (b, c) in state.basis.iter().zip(&state.coefficients) {
                for (bm, cm) in block.basis.iter().zip(&pair.vector) {
                    if is_up(b) == is_up(bm) && (b.photons - bm.photons).abs() == 1.0 {
                        element += c * cm * terms.hopping * b.photons.max(bm.photons).sqrt();
                    }
                }
            }
            if element == 0.0 {
                continue;
            }
            let denominator = state.shift - pair.shift;
            if denominator == 0.0 {
                return Err(ModelError::DegeneratePerturbation {
                    state: index,
                    denominator,
                });
            }
            smallest_gap = smallest_gap.min(denominator.abs());
            correction += element * element / denominator;
        }
    }
    let mut warnings = Vec::new();
    if smallest_gap.is_finite() {
        let ratio = correction.abs() / smallest_gap;
        if ratio > PERTURBATION_WARN {
            warnings.push(Warning::LargeCorrection { ratio });
        }
    }
    Ok(PerturbationResult {
        correction,
        unperturbed_shift: state.shift,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::splitting_charged;
    use crate::oracle::block::build_spin_half_block;
    use crate::units;

    fn omega() -> f64 {
        units::wavelength_to_omega(1.0).unwrap()
    }

    /// Field with p0/mc = `ratio` for the electron at occupation `n0`.
    fn electron_field(ratio: f64, n0: f64) -> PhotonField {
        let e = Particle::electron();
        let w = omega();
        let h0 = ratio * e.mass * C_LIGHT * w / e.charge;
        PhotonField::new(w, Some(n0), None, Some(h0)).unwrap()
    }

    #[test]
    fn hopping_vanishes_without_transverse_momentum() {
        let e = Particle::electron().with_k([0.0, 0.0, 3e4]);
        let f = electron_field(1e-3, 100.0);
        assert_eq!(charged_terms(&f, &e).unwrap().hopping, 0.0);
        let win = build_charged_block(&f, &e, 2, Recoil::Exact).unwrap();
        for i in 0..win.basis.len() {
            for k in 0..win.basis.len() {
                if win.basis[i].n == win.basis[k].n && i != k {
                    assert_eq!(win.matrix[(i, k)], 0.0);
                }
            }
        }
    }

    #[test]
    fn zero_transverse_momentum_window_reproduces_two_by_two_blocks() {
        let e = Particle::electron();
        let f = electron_field(1e-3, 100.0);
        let win = build_charged_block(&f, &e, 2, Recoil::Exact).unwrap();
        let (values, _) = win.solve();
        let block = build_h_prime_block(&f, &e, Branch::Plus, Recoil::Exact).unwrap();
        for pair in super::super::block::solve_block(&block) {
            let closest = values
                .iter()
                .map(|v| (v - pair.shift).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(closest <= 1e-12 * block.scale());
        }
    }

    #[test]
    fn neutral_reduction() {
        // e → 0 with μa → μ: every charged term vanishes and H′ is the
        // neutral spin-1/2 block.
        let mu = 2e-21;
        let mut p = Particle::neutral("formal", mu, HalfInt::HALF, units::ELECTRON_MASS).unwrap();
        p.mu_anomalous = mu;
        let f = PhotonField::fock(omega(), 30.0, 0.5).unwrap();
        let terms = charged_terms(&f, &p).unwrap();
        assert_eq!(terms.ponderomotive, 0.0);
        assert_eq!(terms.spin_photon, 0.0);
        for branch in [Branch::Plus, Branch::Minus] {
            let charged =
                h_prime_sector(&f, &p, up_photons_for(&f, branch).unwrap(), Recoil::Exact).unwrap();
            let neutral = build_spin_half_block(&f, &p, branch, Recoil::Exact).unwrap();
            assert_eq!(charged.diag, neutral.diag);
            assert_eq!(charged.offdiag, neutral.offdiag);
            assert_eq!(charged.basis, neutral.basis);
        }
    }

    #[test]
    fn numeric_splitting_converges_like_inverse_occupation() {
        let e = Particle::electron();
        let dev = |n0: f64| {
            let f = electron_field(1e-3, n0);
            let numeric = charged_splitting_numeric(&f, &e, Recoil::Neglected)
                .unwrap()
                .delta_eps;
            let closed = splitting_charged(&f.classicalize().unwrap(), &e)
                .unwrap()
                .delta_eps;
            numeric - closed
        };
        let d3 = dev(1e3);
        let d4 = dev(1e4);
        let d5 = dev(1e5);
        // the O(1/N0) part dominates at small N0
        let ratio = (d3 - d4) / (d4 - d5);
        assert!((ratio - 10.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn window_preconditions() {
        let e = Particle::electron();
        let f = electron_field(1e-3, 1.0);
        assert!(build_charged_block(&f, &e, 0, Recoil::Exact).is_err());
        assert!(build_charged_block(&f, &e, 2, Recoil::Exact).is_err());
        assert!(build_charged_block(&f, &Particle::neutron(), 1, Recoil::Exact).is_err());
    }

    fn pt_vs_exact(k_perp: f64) -> (f64, f64) {
        let e = Particle::electron().with_k([k_perp, 0.0, 0.0]);
        let f = electron_field(1e-2, 1e4);
        let block = build_h_prime_block(&f, &e, Branch::Plus, Recoil::Exact).unwrap();
        let state = label_states(&block)
            .unwrap()
            .into_iter()
            .find(|l| l.photon_offset == 0)
            .unwrap();
        let pt = perturbation_h2(&f, &e, &state, Recoil::Exact).unwrap();
        let win = build_charged_block(&f, &e, 4, Recoil::Exact).unwrap();
        let (values, vectors) = win.solve();
        let target = win.index_of(HalfInt::HALF, f.n0().unwrap()).unwrap();
        let col = (0..values.len())
            .max_by(|&a, &b| {
                vectors[(target, a)]
                    .abs()
                    .total_cmp(&vectors[(target, b)].abs())
            })
            .unwrap();
        (pt.correction, values[col] - state.shift)
    }

    #[test]
    fn second_order_scales_as_transverse_momentum_squared() {
        let (a, _) = pt_vs_exact(1e5);
        let (b, _) = pt_vs_exact(2e5);
        assert!(a != 0.0);
        assert!((b / a - 4.0).abs() < 1e-9, "ratio {}", b / a);
        assert_eq!(pt_vs_exact(0.0).0, 0.0);
    }

    #[test]
    fn perturbation_matches_window_to_fourth_order() {
        let (pt1, ex1) = pt_vs_exact(1e5);
        let (pt2, ex2) = pt_vs_exact(2e5);
        assert!(((ex1 - pt1) / pt1).abs() < 1e-2);
        let ratio = (ex2 - pt2) / (ex1 - pt1);
        assert!((ratio - 16.0).abs() < 0.3, "ratio {ratio}");
    }
}

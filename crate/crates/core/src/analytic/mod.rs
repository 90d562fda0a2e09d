//! Closed-form dressed states, energies and splittings.
//!
//! Energies are returned both as totals and as a `shift` relative to the bare
//! energy ħ²k²/2m + N0ħω0, since the total carries N0ħω0 and loses every
//! interesting digit once N0 is large.

mod charged;

pub use charged::{momentum_rotating, splitting_charged, splitting_charged_vacuum};

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result, Warning};
use crate::model::{HalfInt, Handedness, Particle, PhotonField, Recoil};
use crate::units::{C_LIGHT, HBAR};

/// Below this occupation the single-mode Hamiltonian is not trusted.
pub const INTENSIVE_N0: f64 = 100.0;

/// The spin-J limit form wants N0 ≫ 2J; checked as N0 ≥ this factor times (2J+1).
pub const SPIN_J_N0_FACTOR: f64 = 100.0;

/// Spin-1/2 dressed-state label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// j = +1/2
    Plus,
    /// j = -1/2
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn j(self) -> HalfInt {
        match self {
            Branch::Plus => HalfInt::HALF,
            Branch::Minus => HalfInt::MINUS_HALF,
        }
    }

    pub fn from_j(j: HalfInt) -> Result<Self> {
        match j.twice() {
            1 => Ok(Branch::Plus),
            -1 => Ok(Branch::Minus),
            _ => Err(ModelError::Domain(format!(
                "spin-1/2 label must be ±1/2, got {j}"
            ))),
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    /// Label seen in the clockwise frame.
    fn in_frame(self, handedness: Handedness) -> Self {
        match handedness {
            Handedness::Clockwise => self,
            Handedness::Counterclockwise => self.opposite(),
        }
    }
}

/// ω_l = ω0(1 − ħk_z/mc + lħk0/2mc). The spin-1/2 ω± are l = ±1.
pub fn omega_shifted(field: &PhotonField, particle: &Particle, l: i64, recoil: Recoil) -> f64 {
    let w0 = field.omega0();
    match recoil {
        Recoil::Neglected => w0,
        Recoil::Exact => {
            let mc = particle.mass * C_LIGHT;
            let kz_term = HBAR * particle.k[2] / mc;
            let k0_term = l as f64 * HBAR * field.k0() / (2.0 * mc);
            w0 * (1.0 - kz_term + k0_term)
        }
    }
}

/// Single-photon coupling μH̃0/ħ in rad/s (signed with μ).
pub fn coupling(field: &PhotonField, particle: &Particle) -> Result<f64> {
    Ok(particle.mu * field.h_tilde()? / HBAR)
}

fn photons_absorbed(branch: Branch, n0: f64) -> f64 {
    match branch {
        Branch::Plus => n0 + 1.0,
        Branch::Minus => n0,
    }
}

/// Ω± = sqrt(8(N0 + 1/2 ± 1/2)(μH̃0/ħ)² + ω±²), evaluated in the clockwise
/// frame for the requested lab label.
pub fn rabi_frequency(
    field: &PhotonField,
    particle: &Particle,
    branch: Branch,
    recoil: Recoil,
) -> Result<f64> {
    let b = branch.in_frame(field.handedness());
    let g = coupling(field, particle)?;
    let w = omega_shifted(field, particle, b.sign() as i64, recoil);
    let n = photons_absorbed(b, field.n0()?);
    Ok((8.0 * n * g * g + w * w).sqrt())
}

/// Closed-form spin-1/2 dressed state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinHalfSolution {
    /// Lab-frame label.
    pub j: Branch,
    pub handedness: Handedness,
    /// Total energy, erg.
    pub energy: f64,
    /// Energy relative to ħ²k²/2m + N0ħω0, erg.
    pub shift: f64,
    /// Amplitude of the bare state |j, N0⟩.
    pub c_keep: f64,
    /// Amplitude of the spin-flipped state with one photon more or less.
    pub c_flip: f64,
    /// ω± in rad/s.
    pub omega_pm: f64,
    /// Ω± in rad/s.
    pub big_omega_pm: f64,
    pub warnings: Vec<Warning>,
}

impl SpinHalfSolution {
    /// Photon number of the flipped component relative to N0.
    pub fn flip_photon_offset(&self) -> i64 {
        match self.j.in_frame(self.handedness) {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }
}

/// Dressed spin-1/2 state ψ_{±1/2,N0}: amplitudes and energy.
///
/// The sign of the flipped amplitude is `±sign(μ)`; for μ > 0 this is the
/// textbook `±`.
pub fn dressed_spin_half(
    field: &PhotonField,
    particle: &Particle,
    j: Branch,
    recoil: Recoil,
) -> Result<SpinHalfSolution> {
    let n0 = field.n0()?;
    let b = j.in_frame(field.handedness());
    if b == Branch::Minus && n0 == 0.0 {
        return Err(ModelError::Domain(
            "the -1/2 state needs N0 >= 1: its flipped component would hold -1 photons".into(),
        ));
    }
    let g = coupling(field, particle)?;
    let w = omega_shifted(field, particle, b.sign() as i64, recoil);
    let coupling_sq = 8.0 * photons_absorbed(b, n0) * g * g;
    let big = (coupling_sq + w * w).sqrt();
    // Ω − ω without cancellation when ω > 0
    let gap = if w > 0.0 {
        coupling_sq / (big + w)
    } else {
        big - w
    };

    let (c_keep, c_flip) = if big == 0.0 {
        (1.0, 0.0)
    } else {
        let keep = ((big + w) / (2.0 * big)).sqrt();
        let flip = (gap / (2.0 * big)).sqrt();
        let sign = b.sign() * if particle.mu < 0.0 { -1.0 } else { 1.0 };
        (keep, sign * flip)
    };
    // ±ħω/2 ∓ ħΩ/2 = ∓ħ(Ω − ω)/2
    let shift = -b.sign() * HBAR * gap / 2.0;
    let base = particle.kinetic_energy() + n0 * HBAR * field.omega0();
    let mut warnings = Vec::new();
    if n0 < INTENSIVE_N0 {
        warnings.push(Warning::LowOccupation {
            n0,
            threshold: INTENSIVE_N0,
        });
    }
    Ok(SpinHalfSolution {
        j,
        handedness: field.handedness(),
        energy: base + shift,
        shift,
        c_keep,
        c_flip,
        omega_pm: w,
        big_omega_pm: big,
        warnings,
    })
}

/// Ω = sqrt((2μH0/ħ)² + ω0²).
pub fn omega_classical(field: &PhotonField, particle: &Particle) -> Result<f64> {
    let x = 2.0 * particle.mu * field.h0()? / HBAR;
    Ok(x.hypot(field.omega0()))
}

/// Splitting with the inputs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingResult {
    /// Δε, erg.
    pub delta_eps: f64,
    /// Ω, rad/s.
    pub big_omega: f64,
    pub h0: f64,
    pub omega0: f64,
    pub mu: f64,
    pub warnings: Vec<Warning>,
}

/// sqrt(a² + b²) − b for b > 0, without cancellation.
pub(crate) fn hypot_minus(a: f64, b: f64) -> f64 {
    let a2 = a * a;
    if a2 == 0.0 {
        return 0.0;
    }
    a2 / (a.hypot(b) + b)
}

/// Stationary spin splitting of a neutral particle,
/// Δε = sqrt((2μH0)² + (ħω0)²) − ħω0.
pub fn splitting_neutral(field: &PhotonField, particle: &Particle) -> Result<SplittingResult> {
    let h0 = field.h0()?;
    let hw = HBAR * field.omega0();
    Ok(SplittingResult {
        delta_eps: hypot_minus(2.0 * particle.mu * h0, hw),
        big_omega: omega_classical(field, particle)?,
        h0,
        omega0: field.omega0(),
        mu: particle.mu,
        warnings: Vec::new(),
    })
}

/// Intensive-limit level of a spin-J particle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitLevel {
    pub j: HalfInt,
    pub energy: f64,
    /// Energy relative to ħ²k²/2m + N0ħω0.
    pub shift: f64,
    pub warnings: Vec<Warning>,
}

/// ε_j = ħ²k²/2m + (N0 + j)ħω0 − j·sqrt((μH0/J)² + (ħω0)²).
pub fn energies_spin_j_limit(
    field: &PhotonField,
    particle: &Particle,
    j: HalfInt,
) -> Result<LimitLevel> {
    let big_j = particle.j_total;
    if j.abs() > big_j || big_j.int_diff(j).is_none() {
        return Err(ModelError::Domain(format!(
            "projection {j} not in -{big_j}..{big_j}"
        )));
    }
    let n0 = field.n0()?;
    let h0 = field.h0()?;
    let hw = HBAR * field.omega0();
    let jf = field.handedness().frame(j).value();
    let dressed = (particle.mu * h0 / big_j.value()).hypot(hw);
    // jħω0 − j·sqrt(...) = −j·(sqrt(...) − ħω0)
    let shift = -jf * hypot_minus(particle.mu * h0 / big_j.value(), hw);
    debug_assert!((shift - (jf * hw - jf * dressed)).abs() <= 1e-9 * dressed.abs().max(hw));
    let threshold = SPIN_J_N0_FACTOR * f64::from(big_j.twice() + 1);
    let mut warnings = Vec::new();
    if n0 < threshold {
        warnings.push(Warning::LowOccupation { n0, threshold });
    }
    Ok(LimitLevel {
        j,
        energy: particle.kinetic_energy() + n0 * hw + shift,
        shift,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units;
    use approx::assert_relative_eq;

    fn omega_1um() -> f64 {
        units::wavelength_to_omega(1.0).unwrap()
    }

    fn field_with_coupling(g_over_w: f64, n0: f64, p: &Particle) -> PhotonField {
        let w = omega_1um();
        let h_tilde = g_over_w * w * HBAR / p.mu;
        PhotonField::fock(w, n0, h_tilde).unwrap()
    }

    fn spin_half(mu: f64) -> Particle {
        Particle::neutral("test", mu, HalfInt::HALF, units::NEUTRON_MASS).unwrap()
    }

    #[test]
    fn omega_shifted_examples() {
        let p = spin_half(1e-23);
        let f = PhotonField::classical(omega_1um(), 1.0).unwrap();
        assert_eq!(omega_shifted(&f, &p, 0, Recoil::Exact), f.omega0());
        let plus = omega_shifted(&f, &p, 1, Recoil::Exact);
        let minus = omega_shifted(&f, &p, -1, Recoil::Exact);
        let w0 = f.omega0();
        assert_relative_eq!((plus + minus) / 2.0, w0, max_relative = 1e-15);
        let expected = w0 * HBAR * f.k0() / (p.mass * C_LIGHT);
        assert_relative_eq!(plus - minus, expected, max_relative = 1e-6);
    }

    #[test]
    fn omega_shifted_neutron_hand_value() {
        // kz = 1e5 /cm, λ = 1 μm, l = +1, evaluated term by term by hand:
        // ħkz/mc = 1.0546e-22 / (1.6749e-24 * 2.9979e10) = 2.1003e-9
        // ħk0/2mc = 1.0546e-27 * 6.2832e4 / (2 * 5.0213e-14) = 6.5983e-10
        let p = Particle::neutron().with_k([0.0, 0.0, 1e5]);
        let f = PhotonField::classical(omega_1um(), 1.0).unwrap();
        let w = omega_shifted(&f, &p, 1, Recoil::Exact);
        let expected = f.omega0() * (1.0 - 2.1003e-9 + 6.5983e-10);
        assert_relative_eq!(w, expected, max_relative = 1e-12);
        assert_eq!(omega_shifted(&f, &p, 1, Recoil::Neglected), f.omega0());
    }

    #[test]
    fn rabi_frequency_limits() {
        let p = spin_half(0.0);
        let f = PhotonField::fock(omega_1um(), 10.0, 1.0).unwrap();
        for b in [Branch::Plus, Branch::Minus] {
            let w = omega_shifted(&f, &p, b.sign() as i64, Recoil::Exact);
            assert_eq!(rabi_frequency(&f, &p, b, Recoil::Exact).unwrap(), w.abs());
        }
        let p = spin_half(1e-20);
        let f = PhotonField::fock(omega_1um(), 0.0, 3.0).unwrap();
        let w = omega_shifted(&f, &p, -1, Recoil::Exact);
        assert_eq!(
            rabi_frequency(&f, &p, Branch::Minus, Recoil::Exact).unwrap(),
            w
        );
    }

    #[test]
    fn rabi_frequency_tends_to_classical() {
        let p = spin_half(1e-20);
        let f = field_with_coupling(1e-4, 1e8, &p);
        let fc = f.classicalize().unwrap();
        let classical = omega_classical(&fc, &p).unwrap();
        for b in [Branch::Plus, Branch::Minus] {
            let big = rabi_frequency(&f, &p, b, Recoil::Neglected).unwrap();
            assert!(((big - classical) / classical).abs() <= 1e-7);
        }
    }

    #[test]
    fn interaction_off() {
        let p = spin_half(0.0).with_k([1e4, 0.0, 2e4]);
        let f = PhotonField::fock(omega_1um(), 7.0, 2.0).unwrap();
        for b in [Branch::Plus, Branch::Minus] {
            let s = dressed_spin_half(&f, &p, b, Recoil::Exact).unwrap();
            assert_eq!(s.c_keep, 1.0);
            assert_eq!(s.c_flip, 0.0);
            assert_eq!(s.shift, 0.0);
            assert_relative_eq!(
                s.energy,
                p.kinetic_energy() + 7.0 * HBAR * f.omega0(),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn coefficient_identities() {
        let p = spin_half(2e-21);
        for &g in &[1e-3, 0.3, 1.0, 3.0] {
            let f = field_with_coupling(g, 10.0, &p);
            for b in [Branch::Plus, Branch::Minus] {
                let s = dressed_spin_half(&f, &p, b, Recoil::Exact).unwrap();
                assert_relative_eq!(s.c_keep.powi(2) + s.c_flip.powi(2), 1.0, epsilon = 1e-14);
                assert_relative_eq!(
                    s.c_keep.powi(2) - s.c_flip.powi(2),
                    s.omega_pm / s.big_omega_pm,
                    epsilon = 1e-14
                );
                assert!(s.big_omega_pm >= s.omega_pm.abs());
                assert_eq!(s.c_flip.signum(), b.sign());
            }
        }
    }

    #[test]
    fn flip_sign_follows_moment_sign() {
        let f = field_with_coupling(0.3, 10.0, &spin_half(2e-21));
        let pos = dressed_spin_half(&f, &spin_half(2e-21), Branch::Plus, Recoil::Exact).unwrap();
        let neg = dressed_spin_half(&f, &spin_half(-2e-21), Branch::Plus, Recoil::Exact).unwrap();
        assert_eq!(pos.c_flip, -neg.c_flip);
        assert_eq!(pos.energy, neg.energy);
    }

    #[test]
    fn minus_state_needs_a_photon() {
        let p = spin_half(1e-21);
        let f = PhotonField::fock(omega_1um(), 0.0, 1.0).unwrap();
        assert!(dressed_spin_half(&f, &p, Branch::Minus, Recoil::Exact).is_err());
        let s = dressed_spin_half(&f, &p, Branch::Plus, Recoil::Exact).unwrap();
        assert!(matches!(s.warnings[0], Warning::LowOccupation { .. }));
        let f = f.with_handedness(Handedness::Counterclockwise);
        assert!(dressed_spin_half(&f, &p, Branch::Plus, Recoil::Exact).is_err());
    }

    #[test]
    fn ground_state_is_plus() {
        let p = spin_half(1e-21);
        let f = field_with_coupling(0.3, 1e3, &p);
        let plus = dressed_spin_half(&f, &p, Branch::Plus, Recoil::Exact).unwrap();
        let minus = dressed_spin_half(&f, &p, Branch::Minus, Recoil::Exact).unwrap();
        assert!(plus.energy < minus.energy);
        assert!(plus.shift < 0.0 && minus.shift > 0.0);
    }

    #[test]
    fn omega_classical_examples() {
        let p = spin_half(1e-20);
        let w = omega_1um();
        assert_eq!(
            omega_classical(&PhotonField::classical(w, 0.0).unwrap(), &p).unwrap(),
            w
        );
        let h0 = 3f64.sqrt() * HBAR * w / (2.0 * p.mu);
        let f = PhotonField::classical(w, h0).unwrap();
        assert_relative_eq!(
            omega_classical(&f, &p).unwrap(),
            2.0 * w,
            max_relative = 1e-15
        );
    }

    #[test]
    fn omega_classical_small_coupling() {
        let p = Particle::hydrogen();
        let w = omega_1um();
        let f = PhotonField::classical(w, 920.0).unwrap();
        let x = 2.0 * p.mu * 920.0 / (HBAR * w);
        let lhs = omega_classical(&f, &p).unwrap() / w - 1.0;
        assert_relative_eq!(lhs, 0.5 * x * x, max_relative = 1e-6);
    }

    #[test]
    fn splitting_neutral_examples() {
        let w = omega_1um();
        let f = PhotonField::classical(w, 500.0).unwrap();
        assert_eq!(
            splitting_neutral(&f, &spin_half(0.0)).unwrap().delta_eps,
            0.0
        );
        let p = spin_half(1e-20);
        let h0 = 3f64.sqrt() * HBAR * w / (2.0 * p.mu);
        let f = PhotonField::classical(w, h0).unwrap();
        let s = splitting_neutral(&f, &p).unwrap();
        assert_relative_eq!(s.delta_eps, HBAR * w, max_relative = 1e-14);
    }

    #[test]
    fn spin_j_limit_interaction_off() {
        let p = Particle::neutral("x", 0.0, HalfInt::from_twice(3), 1e-24).unwrap();
        let f = PhotonField::fock(omega_1um(), 1e6, 1e-3).unwrap();
        for j in p.j_total.projections() {
            let l = energies_spin_j_limit(&f, &p, j).unwrap();
            assert_eq!(l.shift, 0.0);
            assert!(l.warnings.is_empty());
        }
        assert!(energies_spin_j_limit(&f, &p, HalfInt::from_twice(5)).is_err());
        assert!(energies_spin_j_limit(&f, &p, HalfInt::from_twice(2)).is_err());
    }

    #[test]
    fn spin_j_limit_reduces_to_spin_half() {
        let p = spin_half(3e-21);
        let f = field_with_coupling(0.2, 1e6, &p).classicalize().unwrap();
        let split = splitting_neutral(&f, &p).unwrap().delta_eps;
        let plus = energies_spin_j_limit(&f, &p, HalfInt::HALF).unwrap();
        let minus = energies_spin_j_limit(&f, &p, HalfInt::MINUS_HALF).unwrap();
        assert_relative_eq!(minus.shift - plus.shift, split, max_relative = 1e-14);
        let big = omega_classical(&f, &p).unwrap();
        let hw = HBAR * f.omega0();
        assert_relative_eq!(
            plus.shift,
            hw / 2.0 - HBAR * big / 2.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn spin_j_limit_equal_spacing() {
        let p = Particle::neutral("x", 2e-21, HalfInt::from_twice(3), 1e-24).unwrap();
        let f = PhotonField::new(omega_1um(), Some(1e6), None, Some(1e7)).unwrap();
        let levels: Vec<f64> = p
            .j_total
            .projections()
            .map(|j| energies_spin_j_limit(&f, &p, j).unwrap().shift)
            .collect();
        let hw = HBAR * f.omega0();
        let expected = (p.mu * 1e7 / 1.5).hypot(hw) - hw;
        for w in levels.windows(2) {
            assert_relative_eq!(w[0] - w[1], expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn spin_j_limit_low_occupation_warns() {
        let p = Particle::neutral("x", 2e-21, HalfInt::from_twice(3), 1e-24).unwrap();
        let f = PhotonField::fock(omega_1um(), 50.0, 1.0).unwrap();
        let l = energies_spin_j_limit(&f, &p, HalfInt::HALF).unwrap();
        assert_eq!(
            l.warnings,
            vec![Warning::LowOccupation {
                n0: 50.0,
                threshold: 400.0
            }]
        );
    }

    #[test]
    fn handedness_relabels() {
        let p = spin_half(2e-21).with_k([0.0, 0.0, 3e4]);
        let cw = field_with_coupling(0.3, 40.0, &p);
        let ccw = cw.clone().with_handedness(Handedness::Counterclockwise);
        for b in [Branch::Plus, Branch::Minus] {
            let a = dressed_spin_half(&cw, &p, b, Recoil::Exact).unwrap();
            let c = dressed_spin_half(&ccw, &p, b.opposite(), Recoil::Exact).unwrap();
            assert_eq!(a.energy.to_bits(), c.energy.to_bits());
            assert_eq!(a.c_keep, c.c_keep);
        }
    }
}

//! Photon mode and particle descriptions shared by every calculation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::units::{self, C_LIGHT, E_CHARGE, HBAR};

/// Relative tolerance for `h0 = sqrt(2 n0) h_tilde` when all three are given.
pub const PARAMETRIZATION_RTOL: f64 = 1e-14;

/// A half-integer stored as twice its value, so 3/2 is `HalfInt(3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const HALF: HalfInt = HalfInt(1);
    pub const MINUS_HALF: HalfInt = HalfInt(-1);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// True for 1/2, 3/2, ...
    pub fn is_half_odd(self) -> bool {
        self.0.rem_euclid(2) == 1
    }

    /// `self - other` when it is a whole number.
    pub fn int_diff(self, other: HalfInt) -> Option<i64> {
        let d = i64::from(self.0) - i64::from(other.0);
        (d % 2 == 0).then_some(d / 2)
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// Projections -J, -J+1, ..., J.
    pub fn projections(self) -> impl DoubleEndedIterator<Item = HalfInt> + Clone {
        let j = self.0.abs();
        (0..=j).map(move |k| HalfInt(2 * k - j))
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = ModelError;

    /// Accepts "3/2", "-1/2", "2" or "1.5".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || ModelError::Domain(format!("not a half-integer: {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            let den: i32 = den.trim().parse().map_err(|_| bad())?;
            return match den {
                1 => Ok(HalfInt(2 * num)),
                2 => Ok(HalfInt(num)),
                _ => Err(bad()),
            };
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        let twice = 2.0 * v;
        if twice.fract() != 0.0 || twice.abs() > f64::from(i32::MAX) {
            return Err(bad());
        }
        Ok(HalfInt(twice as i32))
    }
}

/// Rotation sense of the circular polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    #[default]
    Clockwise,
    Counterclockwise,
}

impl Handedness {
    /// +1 for clockwise, -1 for counterclockwise. Counterclockwise results are
    /// clockwise results with every angular momentum projection negated.
    pub fn sign(self) -> i32 {
        match self {
            Handedness::Clockwise => 1,
            Handedness::Counterclockwise => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Handedness::Clockwise => Handedness::Counterclockwise,
            Handedness::Counterclockwise => Handedness::Clockwise,
        }
    }

    /// Maps a lab-frame projection to the clockwise frame and back.
    pub fn frame(self, m: HalfInt) -> HalfInt {
        HalfInt(self.sign() * m.twice())
    }
}

/// Whether the photon-recoil corrections ħk_z/mc and ħk0/2mc enter ω_l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Recoil {
    #[default]
    Exact,
    Neglected,
}

/// Single circularly polarized photon mode.
///
/// The mode is parametrized either quantum mechanically (occupation `n0` and
/// single-photon field `h_tilde`) or classically (amplitude `h0`). Both views
/// may coexist as long as `h0 = sqrt(2 n0) h_tilde`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonField {
    omega0: f64,
    handedness: Handedness,
    n0: Option<f64>,
    h_tilde: Option<f64>,
    h0: Option<f64>,
    volume: Option<f64>,
}

impl PhotonField {
    /// General constructor; checks every invariant between the supplied values.
    pub fn new(
        omega0: f64,
        n0: Option<f64>,
        h_tilde: Option<f64>,
        h0: Option<f64>,
    ) -> Result<Self> {
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(ModelError::Domain(format!(
                "omega0 must be positive, got {omega0}"
            )));
        }
        check_nonneg("n0", n0)?;
        check_nonneg("h_tilde", h_tilde)?;
        check_nonneg("h0", h0)?;

        let mut h_tilde = h_tilde;
        match (n0, h_tilde, h0) {
            (Some(n), Some(ht), Some(h)) => {
                let derived = (2.0 * n).sqrt() * ht;
                let scale = h.abs().max(derived.abs());
                if (derived - h).abs() > PARAMETRIZATION_RTOL * scale {
                    return Err(ModelError::InconsistentParametrization(format!(
                        "h0 = {h} G but sqrt(2 n0) h_tilde = {derived} G"
                    )));
                }
            }
            (Some(n), None, Some(h)) => {
                if n > 0.0 {
                    h_tilde = Some(h / (2.0 * n).sqrt());
                } else if h > 0.0 {
                    return Err(ModelError::InconsistentParametrization(format!(
                        "n0 = 0 cannot carry a classical amplitude h0 = {h} G"
                    )));
                }
            }
            _ => {}
        }
        Ok(Self {
            omega0,
            handedness: Handedness::Clockwise,
            n0,
            h_tilde,
            h0,
            volume: None,
        })
    }

    /// Fock parametrization: occupation and single-photon field scale.
    pub fn fock(omega0: f64, n0: f64, h_tilde: f64) -> Result<Self> {
        Self::new(omega0, Some(n0), Some(h_tilde), None)
    }

    /// Classical parametrization by the field amplitude only.
    pub fn classical(omega0: f64, h0: f64) -> Result<Self> {
        Self::new(omega0, None, None, Some(h0))
    }

    /// Fock parametrization with H̃0 = sqrt(2πħω0/V).
    pub fn from_volume(omega0: f64, n0: f64, volume_cm3: f64) -> Result<Self> {
        if !(volume_cm3 > 0.0) {
            return Err(ModelError::Domain(format!(
                "volume must be positive, got {volume_cm3}"
            )));
        }
        let h_tilde = (2.0 * std::f64::consts::PI * HBAR * omega0 / volume_cm3).sqrt();
        let mut field = Self::fock(omega0, n0, h_tilde)?;
        field.volume = Some(volume_cm3);
        Ok(field)
    }

    pub fn with_handedness(mut self, handedness: Handedness) -> Self {
        self.handedness = handedness;
        self
    }

    /// Same mode with occupation `n0` at fixed single-photon scale.
    pub fn with_occupation(&self, n0: f64) -> Result<Self> {
        let h_tilde = self.h_tilde()?;
        let mut out = Self::fock(self.omega0, n0, h_tilde)?;
        out.handedness = self.handedness;
        out.volume = self.volume;
        Ok(out)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// k0 = ω0/c.
    pub fn k0(&self) -> f64 {
        self.omega0 / C_LIGHT
    }

    pub fn handedness(&self) -> Handedness {
        self.handedness
    }

    pub fn volume(&self) -> Option<f64> {
        self.volume
    }

    pub fn n0_opt(&self) -> Option<f64> {
        self.n0
    }

    pub fn h_tilde_opt(&self) -> Option<f64> {
        self.h_tilde
    }

    pub fn h0_opt(&self) -> Option<f64> {
        self.h0
    }

    pub fn n0(&self) -> Result<f64> {
        self.n0.ok_or_else(|| {
            ModelError::IncompleteParametrization("photon occupation n0 is not set".into())
        })
    }

    pub fn h_tilde(&self) -> Result<f64> {
        self.h_tilde.ok_or_else(|| {
            ModelError::IncompleteParametrization("single-photon field h_tilde is not set".into())
        })
    }

    /// Occupation that must be a non-negative integer for exact Fock blocks.
    pub fn integer_n0(&self) -> Result<f64> {
        let n0 = self.n0()?;
        if n0.fract() != 0.0 {
            return Err(ModelError::Domain(format!(
                "exact Fock calculations need an integer n0, got {n0}"
            )));
        }
        Ok(n0)
    }

    /// Classical amplitude: the stored `h0`, or `sqrt(2 n0) h_tilde`.
    pub fn h0(&self) -> Result<f64> {
        match (self.h0, self.n0, self.h_tilde) {
            (Some(h), _, _) => Ok(h),
            (None, Some(n), Some(ht)) => Ok((2.0 * n).sqrt() * ht),
            _ => Err(ModelError::IncompleteParametrization(
                "need h0, or both n0 and h_tilde".into(),
            )),
        }
    }

    /// Populates `h0 = sqrt(2 n0) h_tilde` from the Fock parameters.
    pub fn classicalize(&self) -> Result<Self> {
        let n0 = self.n0()?;
        let ht = self.h_tilde()?;
        let mut out = self.clone();
        out.h0 = Some((2.0 * n0).sqrt() * ht);
        Ok(out)
    }
}

fn check_nonneg(name: &str, v: Option<f64>) -> Result<()> {
    match v {
        Some(x) if !(x >= 0.0) || !x.is_finite() => Err(ModelError::Domain(format!(
            "{name} must be finite and non-negative, got {x}"
        ))),
        _ => Ok(()),
    }
}

/// Particle carrying a magnetic moment.
///
/// Charges and moments are stored as magnitudes with a common sign
/// convention; only products such as eμ_a enter the results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Particle {
    pub name: String,
    /// Total magnetic moment μ, erg/G.
    pub mu: f64,
    pub j_total: HalfInt,
    /// Mass, g.
    pub mass: f64,
    /// Charge, esu. Zero for neutral particles.
    pub charge: f64,
    /// Anomalous moment μa, erg/G. Ignored for neutral particles.
    pub mu_anomalous: f64,
    /// Wave vector (kx, ky, kz), 1/cm.
    pub k: [f64; 3],
}

impl Particle {
    pub fn neutral(name: &str, mu: f64, j_total: HalfInt, mass: f64) -> Result<Self> {
        let p = Self {
            name: name.to_string(),
            mu,
            j_total,
            mass,
            charge: 0.0,
            mu_anomalous: 0.0,
            k: [0.0; 3],
        };
        p.validate()?;
        Ok(p)
    }

    pub fn charged(name: &str, mu: f64, mu_anomalous: f64, mass: f64, charge: f64) -> Result<Self> {
        let p = Self {
            name: name.to_string(),
            mu,
            j_total: HalfInt::HALF,
            mass,
            charge,
            mu_anomalous,
            k: [0.0; 3],
        };
        p.validate()?;
        Ok(p)
    }

    /// Free neutron: μ = -1.913 nuclear magnetons, J = 1/2.
    pub fn neutron() -> Self {
        Self::neutral(
            "neutron",
            -1.913 * units::nuclear_magneton(),
            HalfInt::HALF,
            units::NEUTRON_MASS,
        )
        .expect("preset is valid")
    }

    /// Free electron: μ = μB + μa with μa = (α/2π)μB.
    pub fn electron() -> Self {
        let mu_b = units::bohr_magneton();
        let mu_a = units::ALPHA / std::f64::consts::TAU * mu_b;
        Self::charged(
            "electron",
            mu_b + mu_a,
            mu_a,
            units::ELECTRON_MASS,
            E_CHARGE,
        )
        .expect("preset is valid")
    }

    /// Hydrogen 1S treated as a neutral particle with μ ≈ μB.
    pub fn hydrogen() -> Self {
        Self::neutral(
            "hydrogen",
            units::bohr_magneton(),
            HalfInt::HALF,
            units::HYDROGEN_MASS,
        )
        .expect("preset is valid")
    }

    pub fn with_k(mut self, k: [f64; 3]) -> Self {
        self.k = k;
        self
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0) || !self.mass.is_finite() {
            return Err(ModelError::Domain(format!(
                "mass must be positive, got {}",
                self.mass
            )));
        }
        if self.j_total.twice() < 1 {
            return Err(ModelError::Domain(format!(
                "total angular momentum must be >= 1/2, got {}",
                self.j_total
            )));
        }
        if !self.mu.is_finite() || !self.charge.is_finite() || !self.mu_anomalous.is_finite() {
            return Err(ModelError::Domain("non-finite moment or charge".into()));
        }
        Ok(())
    }

    pub fn is_charged(&self) -> bool {
        self.charge != 0.0
    }

    /// μB = eħ/2mc for this particle's own charge and mass.
    pub fn bohr_magneton(&self) -> f64 {
        self.charge * HBAR / (2.0 * self.mass * C_LIGHT)
    }

    pub fn kinetic_energy(&self) -> f64 {
        let k2 = self.k.iter().map(|x| x * x).sum::<f64>();
        HBAR * HBAR * k2 / (2.0 * self.mass)
    }

    pub fn k_perp(&self) -> f64 {
        self.k[0].hypot(self.k[1])
    }
}

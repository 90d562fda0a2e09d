//! Physical constants and unit conversions.
//!
//! Everything inside the crate is Gaussian CGS with ħ kept explicit: energies
//! in erg, fields in gauss, frequencies in rad/s, lengths in cm. User-facing
//! quantities (eV, μm, W/cm², kelvin) pass through the helpers here.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

/// Reduced Planck constant, erg·s.
pub const HBAR: f64 = 1.054_571_817e-27;
/// Speed of light, cm/s.
pub const C_LIGHT: f64 = 2.997_924_58e10;
/// Elementary charge, esu.
pub const E_CHARGE: f64 = 4.803_204_712_570_263e-10;
/// One electron-volt in erg.
pub const ERG_PER_EV: f64 = 1.602_176_634e-12;
/// Boltzmann constant, erg/K.
pub const K_BOLTZMANN: f64 = 1.380_649e-16;
/// Fine-structure constant.
pub const ALPHA: f64 = 7.297_352_569_3e-3;
/// Electron mass, g.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-28;
/// Proton mass, g.
pub const PROTON_MASS: f64 = 1.672_621_923_69e-24;
/// Neutron mass, g.
pub const NEUTRON_MASS: f64 = 1.674_927_498_04e-24;
/// Hydrogen atom mass, g.
pub const HYDROGEN_MASS: f64 = 1.673_557_5e-24;

const CM_PER_UM: f64 = 1e-4;
const ERG_PER_S_PER_WATT: f64 = 1e7;

/// Bohr magneton eħ/2m_e c, erg/G.
pub fn bohr_magneton() -> f64 {
    E_CHARGE * HBAR / (2.0 * ELECTRON_MASS * C_LIGHT)
}

/// Nuclear magneton eħ/2m_p c, erg/G.
pub fn nuclear_magneton() -> f64 {
    E_CHARGE * HBAR / (2.0 * PROTON_MASS * C_LIGHT)
}

pub fn ev_to_erg(ev: f64) -> f64 {
    ev * ERG_PER_EV
}

pub fn erg_to_ev(erg: f64) -> f64 {
    erg / ERG_PER_EV
}

/// Photon energy ħω (eV) to angular frequency ω (rad/s).
pub fn ev_to_omega(ev: f64) -> f64 {
    ev_to_erg(ev) / HBAR
}

pub fn omega_to_ev(omega: f64) -> f64 {
    erg_to_ev(HBAR * omega)
}

pub fn kelvin_to_erg(kelvin: f64) -> f64 {
    kelvin * K_BOLTZMANN
}

pub fn erg_to_kelvin(erg: f64) -> f64 {
    erg / K_BOLTZMANN
}

/// Vacuum wavelength in μm to angular frequency ω0 = 2πc/λ.
pub fn wavelength_to_omega(lambda_um: f64) -> Result<f64> {
    if !(lambda_um > 0.0) || !lambda_um.is_finite() {
        return Err(ModelError::Domain(format!(
            "wavelength must be positive, got {lambda_um} μm"
        )));
    }
    Ok(std::f64::consts::TAU * C_LIGHT / (lambda_um * CM_PER_UM))
}

/// Angular frequency back to wavelength in μm.
pub fn omega_to_wavelength(omega: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(ModelError::Domain(format!(
            "angular frequency must be positive, got {omega} rad/s"
        )));
    }
    Ok(std::f64::consts::TAU * C_LIGHT / omega / CM_PER_UM)
}

/// Intensity convention for a circularly polarized plane wave: the magnitude
/// of the rotating field is constant, so I = c·H0²/8π carries no extra 1/2.
pub const INTENSITY_CONVENTION: &str =
    "I = c*H0^2/(8*pi), H0 = sqrt(8*pi*I/c) (cgs; circular polarization, constant |H|)";

/// Intensity in W/cm² to classical field amplitude H0 in gauss.
pub fn intensity_to_amplitude(intensity_w_cm2: f64) -> Result<f64> {
    if !(intensity_w_cm2 >= 0.0) || !intensity_w_cm2.is_finite() {
        return Err(ModelError::Domain(format!(
            "intensity must be non-negative, got {intensity_w_cm2} W/cm^2"
        )));
    }
    let flux = intensity_w_cm2 * ERG_PER_S_PER_WATT;
    Ok((8.0 * std::f64::consts::PI * flux / C_LIGHT).sqrt())
}

/// Field amplitude H0 in gauss to intensity in W/cm².
pub fn amplitude_to_intensity(h0_gauss: f64) -> Result<f64> {
    if !(h0_gauss >= 0.0) || !h0_gauss.is_finite() {
        return Err(ModelError::Domain(format!(
            "field amplitude must be non-negative, got {h0_gauss} G"
        )));
    }
    Ok(C_LIGHT * h0_gauss * h0_gauss / (8.0 * std::f64::consts::PI) / ERG_PER_S_PER_WATT)
}

/// Describes the unit system used by every output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitContext {
    pub system: String,
    pub intensity_convention: String,
}

impl Default for UnitContext {
    fn default() -> Self {
        Self {
            system: "gaussian-cgs internal (erg, G, rad/s, cm); I/O in eV, G, um, W/cm^2, K"
                .to_string(),
            intensity_convention: INTENSITY_CONVENTION.to_string(),
        }
    }
}

//! Splittings of a charged spin-1/2 particle set rotating by the wave.

use crate::error::{ModelError, Result, Warning};
use crate::model::{Particle, PhotonField};
use crate::units::{C_LIGHT, HBAR};

use super::{hypot_minus, SplittingResult};

/// p0/mc above which the small-rotation results get a warning.
pub const ROTATION_WARN: f64 = 0.01;
/// p0/mc above which the small-rotation expansion is considered broken.
pub const ROTATION_LIMIT: f64 = 0.1;

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

/// p0 = eH0/ω0, momentum of the particle rotating in the wave (g·cm/s).
pub fn momentum_rotating(field: &PhotonField, particle: &Particle) -> Result<f64> {
    require_charge(particle)?;
    Ok(particle.charge * field.h0()? / field.omega0())
}

fn rotation_warnings(field: &PhotonField, particle: &Particle) -> Result<Vec<Warning>> {
    let ratio = (momentum_rotating(field, particle)? / (particle.mass * C_LIGHT)).abs();
    let mut out = Vec::new();
    if ratio > ROTATION_LIMIT {
        out.push(Warning::FastRotation {
            ratio,
            bound: ROTATION_LIMIT,
        });
    } else if ratio > ROTATION_WARN {
        out.push(Warning::FastRotation {
            ratio,
            bound: ROTATION_WARN,
        });
    }
    Ok(out)
}

/// Spin splitting of a free charged particle including the spin-orbit term:
///
/// Δε = 2·sqrt((μH0)² − (ħeH0²/mc)(μa + μB/2) + (ħω0/2)²) − ħω0.
///
/// With d = μ − μB the radicand is rewritten as
/// H0²[d² + 2μB(d − μa)] + (ħω0/2)², which is the same polynomial but keeps
/// the μa² remainder accurate when μ = μa + μB.
pub fn splitting_charged(field: &PhotonField, particle: &Particle) -> Result<SplittingResult> {
    let warnings = rotation_warnings(field, particle)?;
    let h0 = field.h0()?;
    let hw = HBAR * field.omega0();
    let mu_b = particle.bohr_magneton();
    let d = particle.mu - mu_b;
    let coupling_part = h0 * h0 * (d * d + 2.0 * mu_b * (d - particle.mu_anomalous));
    let half = hw / 2.0;
    let radicand = coupling_part + half * half;
    if radicand < 0.0 {
        return Err(ModelError::ModelValidity(format!(
            "negative radicand {radicand:e} erg^2 in the charged splitting"
        )));
    }
    let root = radicand.sqrt();
    // 2√R − ħω0 = 4(R − (ħω0/2)²)/(2√R + ħω0)
    let delta_eps = 4.0 * coupling_part / (2.0 * root + hw);
    Ok(SplittingResult {
        delta_eps,
        big_omega: 2.0 * root / HBAR,
        h0,
        omega0: field.omega0(),
        mu: particle.mu,
        warnings,
    })
}

/// Vacuum form Δε = sqrt((2μaH0)² + (ħω0)²) − ħω0; only μa survives.
pub fn splitting_charged_vacuum(
    field: &PhotonField,
    particle: &Particle,
) -> Result<SplittingResult> {
    let warnings = rotation_warnings(field, particle)?;
    let h0 = field.h0()?;
    let hw = HBAR * field.omega0();
    let x = 2.0 * particle.mu_anomalous * h0;
    Ok(SplittingResult {
        delta_eps: hypot_minus(x, hw),
        big_omega: (x / HBAR).hypot(field.omega0()),
        h0,
        omega0: field.omega0(),
        mu: particle.mu_anomalous,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::splitting_neutral;
    use crate::units;
    use approx::assert_relative_eq;

    fn omega_1um() -> f64 {
        units::wavelength_to_omega(1.0).unwrap()
    }

    #[test]
    fn zero_field() {
        let f = PhotonField::classical(omega_1um(), 0.0).unwrap();
        let e = Particle::electron();
        assert_eq!(splitting_charged(&f, &e).unwrap().delta_eps, 0.0);
        assert_eq!(splitting_charged_vacuum(&f, &e).unwrap().delta_eps, 0.0);
        assert_eq!(momentum_rotating(&f, &e).unwrap(), 0.0);
    }

    #[test]
    fn neutral_particles_rejected() {
        let f = PhotonField::classical(omega_1um(), 1.0).unwrap();
        assert!(momentum_rotating(&f, &Particle::neutron()).is_err());
        assert!(splitting_charged(&f, &Particle::neutron()).is_err());
    }

    #[test]
    fn momentum_is_linear() {
        let e = Particle::electron();
        let a = momentum_rotating(&PhotonField::classical(omega_1um(), 1e3).unwrap(), &e).unwrap();
        let b = momentum_rotating(&PhotonField::classical(omega_1um(), 2e3).unwrap(), &e).unwrap();
        assert_relative_eq!(b, 2.0 * a, max_relative = 1e-15);
    }

    #[test]
    fn electron_rotation_hand_value() {
        // eH0/ω0 = 4.8032e-10 * 1e3 / 1.88365e15 = 2.54995e-22 g cm/s
        // m_e c = 9.10938e-28 * 2.99792e10 = 2.73092e-17
        let e = Particle::electron();
        let f = PhotonField::classical(omega_1um(), 1e3).unwrap();
        let ratio = momentum_rotating(&f, &e).unwrap() / (e.mass * C_LIGHT);
        assert_relative_eq!(ratio, 2.54995e-22 / 2.73092e-17, max_relative = 1e-4);
    }

    #[test]
    fn middle_term_cancels_for_half_bohr_anomaly() {
        // μa = −μB/2 removes the spin-orbit term; μ = μa + μB = μB/2.
        let base = Particle::electron();
        let mu_b = base.bohr_magneton();
        let p = Particle::charged("test", mu_b / 2.0, -mu_b / 2.0, base.mass, base.charge).unwrap();
        let f = PhotonField::classical(omega_1um(), 3e5).unwrap();
        let neutral = Particle::neutral("n", mu_b / 2.0, p.j_total, p.mass).unwrap();
        let charged = splitting_charged(&f, &p).unwrap().delta_eps;
        let expected = splitting_neutral(&f, &neutral).unwrap().delta_eps;
        assert_relative_eq!(charged, expected, max_relative = 1e-13);
    }

    #[test]
    fn vacuum_form_matches_neutral_with_anomalous_moment() {
        let e = Particle::electron();
        let f = PhotonField::classical(omega_1um(), 5e5).unwrap();
        let n = Particle::neutral("n", e.mu_anomalous, e.j_total, e.mass).unwrap();
        assert_eq!(
            splitting_charged_vacuum(&f, &e).unwrap().delta_eps,
            splitting_neutral(&f, &n).unwrap().delta_eps
        );
        let no_anomaly = Particle::charged("e0", e.bohr_magneton(), 0.0, e.mass, e.charge).unwrap();
        assert_eq!(
            splitting_charged_vacuum(&f, &no_anomaly).unwrap().delta_eps,
            0.0
        );
    }

    #[test]
    fn negative_radicand_is_a_validity_error() {
        let base = Particle::electron();
        let mu_b = base.bohr_magneton();
        // μ = 0 with a large μa: radicand is H0²(μB² − 2μBμa − μB²) + ... < 0
        let p = Particle::charged("odd", 0.0, 5.0 * mu_b, base.mass, base.charge).unwrap();
        let f = PhotonField::classical(omega_1um(), 1e9).unwrap();
        assert!(matches!(
            splitting_charged(&f, &p),
            Err(ModelError::ModelValidity(_))
        ));
    }

    #[test]
    fn rotation_guards() {
        let e = Particle::electron();
        let w = omega_1um();
        let h_for = |r: f64| r * e.mass * C_LIGHT * w / e.charge;
        let quiet = PhotonField::classical(w, h_for(1e-3)).unwrap();
        assert!(splitting_charged(&quiet, &e).unwrap().warnings.is_empty());
        let warn = PhotonField::classical(w, h_for(0.05)).unwrap();
        assert!(matches!(
            splitting_charged(&warn, &e).unwrap().warnings[..],
            [Warning::FastRotation { bound, .. }] if bound == ROTATION_WARN
        ));
        let outside = PhotonField::classical(w, h_for(0.5)).unwrap();
        assert!(matches!(
            splitting_charged_vacuum(&outside, &e).unwrap().warnings[..],
            [Warning::FastRotation { bound, .. }] if bound == ROTATION_LIMIT
        ));
    }
}

//! Randomized invariants.

use photodress::analytic::{dressed_spin_half, energies_spin_j_limit, splitting_neutral, Branch};
use photodress::model::{HalfInt, Handedness, Particle, PhotonField, Recoil};
use photodress::observables::{
    magnetization, selection_rule_check, spin_expectation, transition_spectrum, Regime,
};
use photodress::oracle::{build_spin_j_block, label_states, solve_block};
use photodress::units::{self, HBAR};
use proptest::prelude::*;

fn omega() -> f64 {
    units::wavelength_to_omega(1.0).unwrap()
}

fn neutral(mu: f64, twice_j: i32) -> Particle {
    Particle::neutral("p", mu, HalfInt::from_twice(twice_j), units::NEUTRON_MASS).unwrap()
}

/// Fock field with μH̃0/ħω0 = `g`.
fn fock(g: f64, n0: f64, mu: f64) -> PhotonField {
    PhotonField::fock(omega(), n0, (g * HBAR * omega() / mu).abs()).unwrap()
}

/// Field of amplitude `h0` gauss at a large occupation.
fn intense(h0: f64) -> PhotonField {
    PhotonField::new(omega(), Some(1e12), None, Some(h0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_round_trips(x in 1e-6f64..1e6) {
        let back = units::amplitude_to_intensity(units::intensity_to_amplitude(x).unwrap()).unwrap();
        prop_assert!((back / x - 1.0).abs() <= 1e-12);
        let back = units::omega_to_ev(units::ev_to_omega(x));
        prop_assert!((back / x - 1.0).abs() <= 1e-12);
        let back = units::omega_to_wavelength(units::wavelength_to_omega(x).unwrap()).unwrap();
        prop_assert!((back / x - 1.0).abs() <= 1e-12);
        prop_assert_eq!(units::ev_to_erg(x).to_bits(), units::ev_to_erg(x).to_bits());
    }

    #[test]
    fn classicalize_is_idempotent(n0 in 1.0f64..1e12, h in 1e-3f64..1e3) {
        let f = PhotonField::fock(omega(), n0.round(), h).unwrap();
        let once = f.classicalize().unwrap();
        prop_assert_eq!(once.classicalize().unwrap(), once);
    }

    #[test]
    fn splitting_is_nonnegative_and_monotone(log_h in -2.0f64..8.0, factor in 1.01f64..3.0) {
        let p = Particle::neutron();
        let h0 = 10f64.powf(log_h);
        let at = |h: f64, w: f64| splitting_neutral(&PhotonField::classical(w, h).unwrap(), &p).unwrap().delta_eps;
        let w = omega();
        let base = at(h0, w);
        prop_assert!(base >= 0.0);
        prop_assert!(at(h0 * factor, w) > base);
        prop_assert!(at(h0, w * factor) < base);
    }

    #[test]
    fn spin_half_amplitudes_normalized(g in 0.0f64..5.0, n0 in 1u32..10_000, kz in -1e5f64..1e5) {
        let p = neutral(-1e-23, 1).with_k([0.0, 0.0, kz]);
        let f = fock(g, f64::from(n0), p.mu);
        for b in [Branch::Plus, Branch::Minus] {
            let s = dressed_spin_half(&f, &p, b, Recoil::Exact).unwrap();
            prop_assert!((s.c_keep.powi(2) + s.c_flip.powi(2) - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn blocks_are_orthonormal_and_conserve_the_sector(
        g in 0.01f64..3.0, n0 in 0u32..200, twice_j in 1i32..8, pick in 0usize..8,
    ) {
        let p = neutral(2e-23, twice_j);
        let f = fock(g, f64::from(n0), p.mu);
        let j = p.j_total.projections().nth(pick % (twice_j as usize + 1)).unwrap();
        let block = match build_spin_j_block(&f, &p, j, Recoil::Exact) {
            Ok(b) => b,
            Err(_) => return Ok(()),
        };
        for s in &block.basis {
            prop_assert_eq!(s.n.value() + s.photons, block.sector);
        }
        let pairs = solve_block(&block);
        for a in &pairs {
            for b in &pairs {
                let dot: f64 = a.vector.iter().zip(&b.vector).map(|(x, y)| x * y).sum();
                let expect = if std::ptr::eq(a, b) { 1.0 } else { 0.0 };
                prop_assert!((dot - expect).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn handedness_flip_mirrors_labels(g in 0.01f64..2.0, n0 in 1u32..100, twice_j in 1i32..6) {
        let p = neutral(2e-23, twice_j).with_k([0.0, 0.0, 5e4]);
        let cw = fock(g, f64::from(n0), p.mu);
        let ccw = cw.clone().with_handedness(Handedness::Counterclockwise);
        for j in p.j_total.projections() {
            let a = label_states(&build_spin_j_block(&cw, &p, j, Recoil::Exact).unwrap());
            let b = label_states(&build_spin_j_block(&ccw, &p, -j, Recoil::Exact).unwrap());
            if let (Ok(a), Ok(b)) = (a, b) {
                for (x, y) in a.iter().zip(&b) {
                    prop_assert_eq!(x.energy.to_bits(), y.energy.to_bits());
                    prop_assert_eq!(x.j, -y.j);
                }
            }
        }
    }

    #[test]
    fn spin_polarization_bounded_and_decreasing(log_h in 2.0f64..6.0) {
        let p = neutral(1e-20, 1);
        let at = |h: f64| {
            let f = intense(h);
            spin_expectation(&dressed_spin_half(&f, &p, Branch::Plus, Recoil::Neglected).unwrap())[2]
        };
        let h = 10f64.powf(log_h);
        let s = at(h);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert!(at(h * 2.0) < s);
        let f = intense(h).with_handedness(Handedness::Counterclockwise);
        let mirrored = spin_expectation(&dressed_spin_half(&f, &p, Branch::Minus, Recoil::Neglected).unwrap())[2];
        prop_assert_eq!(mirrored, -s);
    }

    #[test]
    fn magnetization_bounded_and_odd(log_h in 0.0f64..7.0, t in 1e-3f64..1e3, n in 1e10f64..1e20) {
        let f = intense(10f64.powf(log_h));
        let temperature = units::kelvin_to_erg(t);
        let p = neutral(1e-20, 1);
        let m = magnetization(&f, &p, n, temperature).unwrap();
        prop_assert!(m.magnitude.abs() <= p.mu.abs() * n);
        let q = neutral(-1e-20, 1);
        prop_assert_eq!(magnetization(&f, &q, n, temperature).unwrap().magnitude, -m.magnitude);
    }

    #[test]
    fn selection_rule_holds(log_h in 0.0f64..7.0, ground in any::<bool>(), ccw in any::<bool>()) {
        let mut f = intense(10f64.powf(log_h));
        if ccw {
            f = f.with_handedness(Handedness::Counterclockwise);
        }
        let lines = transition_spectrum(&f, &neutral(1e-20, 1), ground, Regime::IntensiveLimit).unwrap();
        prop_assert!(selection_rule_check(&lines).passed());
        prop_assert!(lines.windows(2).all(|w| w[0].frequency <= w[1].frequency));
    }

    #[test]
    fn spin_j_limit_at_half_matches_splitting(log_h in 0.0f64..7.0) {
        let p = neutral(1e-20, 1);
        let f = intense(10f64.powf(log_h));
        let lo = energies_spin_j_limit(&f, &p, HalfInt::HALF).unwrap().shift;
        let hi = energies_spin_j_limit(&f, &p, HalfInt::MINUS_HALF).unwrap().shift;
        let split = splitting_neutral(&f, &p).unwrap().delta_eps;
        prop_assert!(((hi - lo) - split).abs() <= 1e-9 * split + 4.0 * f64::EPSILON * HBAR * omega());
    }
}

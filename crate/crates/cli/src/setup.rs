//! Particle and field options shared by every physics command.

use clap::{Args, ValueEnum};
use photodress::model::{HalfInt, Handedness, Particle, PhotonField};
use photodress::units::{self, E_CHARGE, NEUTRON_MASS};
use serde::Serialize;

use crate::error::CliError;
use crate::sweep::{SweepParam, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Neutron,
    Electron,
    Hydrogen,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Hand {
    #[value(name = "cw")]
    #[serde(rename = "cw")]
    Clockwise,
    #[value(name = "ccw")]
    #[serde(rename = "ccw")]
    Counterclockwise,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Setup {
    /// Particle preset; --mu-bohr or --mu-nuclear alone selects custom.
    #[arg(long, value_enum)]
    pub particle: Option<Preset>,
    /// Magnetic moment in Bohr magnetons (overrides the preset).
    #[arg(long, conflicts_with = "mu_nuclear", allow_negative_numbers = true)]
    pub mu_bohr: Option<f64>,
    /// Magnetic moment in nuclear magnetons (overrides the preset).
    #[arg(long, allow_negative_numbers = true)]
    pub mu_nuclear: Option<f64>,
    /// Anomalous moment in Bohr magnetons (charged particles).
    #[arg(long, allow_negative_numbers = true)]
    pub mu_anomalous_bohr: Option<f64>,
    /// Total angular momentum J of a neutral particle, e.g. "3/2".
    #[arg(long)]
    pub spin: Option<String>,
    /// Mass of a custom particle in grams [default: neutron mass].
    #[arg(long)]
    pub mass_g: Option<f64>,
    /// Charge of a custom particle in units of e [default: 0].
    #[arg(long, allow_negative_numbers = true)]
    pub charge_e: Option<f64>,

    /// Photon occupation N0 of the mode.
    #[arg(long)]
    pub n0: Option<f64>,
    /// Classical field amplitude H0, gauss.
    #[arg(long, conflicts_with = "intensity_wcm2")]
    pub h0_gauss: Option<f64>,
    /// Intensity in W/cm^2, converted with I = c H0^2 / 8 pi.
    #[arg(long)]
    pub intensity_wcm2: Option<f64>,
    /// Single-photon field scale H~0, gauss; needs --n0.
    #[arg(long)]
    pub h_tilde_gauss: Option<f64>,
    /// Photon energy, eV.
    #[arg(long, conflicts_with = "wavelength_um")]
    pub omega0_ev: Option<f64>,
    /// Wavelength, micrometres [default: 1].
    #[arg(long)]
    pub wavelength_um: Option<f64>,
    /// Particle wave vector components, 1/cm.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub kx: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub ky: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub kz: f64,
    #[arg(long, value_enum, default_value = "cw")]
    pub handedness: Hand,
    /// name=start:stop:steps[:log]; names h0, omega0, wavelength, intensity,
    /// n0, mu (Bohr magnetons), temperature (K).
    #[arg(long)]
    pub sweep: Option<SweepSpec>,
}

/// One evaluation point: the resolved model plus the swept value, if any.
#[derive(Debug, Clone)]
pub struct Point {
    pub swept: Option<f64>,
    pub particle: Particle,
    pub field: PhotonField,
    pub temperature_k: Option<f64>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl Setup {
    fn preset(&self) -> Preset {
        match self.particle {
            Some(p) => p,
            None if self.mu_bohr.is_some() || self.mu_nuclear.is_some() => Preset::Custom,
            None => Preset::Neutron,
        }
    }

    fn moment_override(&self) -> Option<f64> {
        self.mu_bohr
            .map(|m| m * units::bohr_magneton())
            .or(self.mu_nuclear.map(|m| m * units::nuclear_magneton()))
    }

    fn particle(&self, mu_bohr: Option<f64>) -> Result<Particle, CliError> {
        let preset = self.preset();
        if preset != Preset::Custom && (self.mass_g.is_some() || self.charge_e.is_some()) {
            return Err(usage(
                "--mass-g and --charge-e apply to --particle custom only",
            ));
        }
        let moment = mu_bohr
            .map(|m| m * units::bohr_magneton())
            .or(self.moment_override());
        let mut p = match preset {
            Preset::Neutron => Particle::neutron(),
            Preset::Electron => Particle::electron(),
            Preset::Hydrogen => Particle::hydrogen(),
            Preset::Custom => {
                let mu = moment
                    .ok_or_else(|| usage("custom particle needs --mu-bohr or --mu-nuclear"))?;
                let mass = self.mass_g.unwrap_or(NEUTRON_MASS);
                let charge = self.charge_e.unwrap_or(0.0) * E_CHARGE;
                if charge != 0.0 {
                    Particle::charged("custom", mu, 0.0, mass, charge)?
                } else {
                    Particle::neutral("custom", mu, HalfInt::HALF, mass)?
                }
            }
        };
        if let Some(mu) = moment {
            p.mu = mu;
        }
        if let Some(a) = self.mu_anomalous_bohr {
            if !p.is_charged() {
                return Err(usage("--mu-anomalous-bohr needs a charged particle"));
            }
            p.mu_anomalous = a * units::bohr_magneton();
            if moment.is_none() {
                p.mu = p.bohr_magneton() + p.mu_anomalous;
            }
        }
        if let Some(spin) = &self.spin {
            let j: HalfInt = spin.parse().map_err(|e| usage(format!("--spin: {e}")))?;
            if p.is_charged() && j != HalfInt::HALF {
                return Err(usage("charged particles are spin 1/2"));
            }
            p.j_total = j;
        }
        p = p.with_k([self.kx, self.ky, self.kz]);
        p.validate()?;
        Ok(p)
    }

    fn omega0(&self, over: Option<(SweepParam, f64)>) -> Result<f64, CliError> {
        Ok(match over {
            Some((SweepParam::Omega0, v)) => units::ev_to_omega(v),
            Some((SweepParam::Wavelength, v)) => units::wavelength_to_omega(v)?,
            _ => match (self.omega0_ev, self.wavelength_um) {
                (Some(ev), _) => units::ev_to_omega(ev),
                (None, Some(um)) => units::wavelength_to_omega(um)?,
                (None, None) => units::wavelength_to_omega(1.0)?,
            },
        })
    }

    fn field(&self, over: Option<(SweepParam, f64)>) -> Result<PhotonField, CliError> {
        let omega0 = self.omega0(over)?;
        if !(omega0 > 0.0) {
            return Err(usage("photon frequency must be positive"));
        }
        let n0 = match over {
            Some((SweepParam::N0, v)) => Some(v),
            _ => self.n0,
        };
        let h0 = match over {
            Some((SweepParam::H0, v)) => Some(v),
            Some((SweepParam::Intensity, v)) => Some(units::intensity_to_amplitude(v)?),
            _ => match (self.h0_gauss, self.intensity_wcm2) {
                (Some(h), _) => Some(h),
                (None, Some(i)) => Some(units::intensity_to_amplitude(i)?),
                (None, None) => None,
            },
        };
        if self.h_tilde_gauss.is_some() && n0.is_none() {
            return Err(usage("--h-tilde-gauss needs --n0"));
        }
        let field = PhotonField::new(omega0, n0, self.h_tilde_gauss, h0)?;
        let hand = match self.handedness {
            Hand::Clockwise => Handedness::Clockwise,
            Hand::Counterclockwise => Handedness::Counterclockwise,
        };
        Ok(field.with_handedness(hand))
    }

    /// Every evaluation point, in sweep order.
    pub fn points(&self, temperature_k: Option<f64>) -> Result<Vec<Point>, CliError> {
        let values: Vec<Option<f64>> = match &self.sweep {
            Some(s) => s.values().into_iter().map(Some).collect(),
            None => vec![None],
        };
        let param = self.sweep.as_ref().map(|s| s.parameter);
        if param == Some(SweepParam::Temperature) && temperature_k.is_none() {
            return Err(usage(
                "a temperature sweep is only meaningful for magnetization",
            ));
        }
        if matches!(param, Some(SweepParam::Omega0 | SweepParam::Wavelength))
            && (self.omega0_ev.is_some() || self.wavelength_um.is_some())
        {
            return Err(usage(
                "the swept frequency conflicts with --omega0-ev/--wavelength-um",
            ));
        }
        if matches!(param, Some(SweepParam::H0 | SweepParam::Intensity))
            && (self.h0_gauss.is_some() || self.intensity_wcm2.is_some())
        {
            return Err(usage(
                "the swept amplitude conflicts with --h0-gauss/--intensity-wcm2",
            ));
        }
        values
            .into_iter()
            .map(|v| {
                let over = param.zip(v);
                let mu_bohr = match over {
                    Some((SweepParam::Mu, m)) => Some(m),
                    _ => None,
                };
                let temperature_k = match over {
                    Some((SweepParam::Temperature, t)) => Some(t),
                    _ => temperature_k,
                };
                Ok(Point {
                    swept: v,
                    particle: self.particle(mu_bohr)?,
                    field: self.field(over)?,
                    temperature_k,
                })
            })
            .collect()
    }

    /// Leading sweep column header, if sweeping.
    pub fn sweep_column(&self) -> Option<String> {
        self.sweep.as_ref().map(|s| s.parameter.column())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[derive(Parser)]
    struct Wrap {
        #[command(flatten)]
        setup: Setup,
    }

    fn setup(args: &[&str]) -> Setup {
        let mut full = vec!["x"];
        full.extend_from_slice(args);
        Wrap::try_parse_from(full).unwrap().setup
    }

    #[test]
    fn moment_flag_alone_selects_custom() {
        let s = setup(&["--mu-bohr", "1"]);
        let p = &s.points(None).unwrap()[0].particle;
        assert_eq!(p.name, "custom");
        assert_eq!(p.mu, units::bohr_magneton());
    }

    #[test]
    fn electron_anomalous_override_updates_total_moment() {
        let s = setup(&["--particle", "electron", "--mu-anomalous-bohr", "0.5"]);
        let p = &s.points(None).unwrap()[0].particle;
        assert!((p.mu / units::bohr_magneton() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn conflicting_fock_and_classical_inputs() {
        let s = setup(&["--n0", "100", "--h-tilde-gauss", "1", "--h0-gauss", "3"]);
        assert!(matches!(s.points(None), Err(CliError::Model(_))));
        let s = setup(&["--h-tilde-gauss", "1"]);
        assert!(matches!(s.points(None), Err(CliError::Usage(_))));
    }

    #[test]
    fn sweep_overrides_one_parameter() {
        let s = setup(&["--mu-bohr", "1", "--sweep", "intensity=1e4:1e8:5:log"]);
        let pts = s.points(None).unwrap();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[0].swept, Some(1e4));
        assert!(pts[4].field.h0().unwrap() > pts[0].field.h0().unwrap());
        let s = setup(&["--h0-gauss", "1", "--sweep", "intensity=1:2:2"]);
        assert!(s.points(None).is_err());
    }

    #[test]
    fn spin_flag() {
        let s = setup(&["--mu-bohr", "1", "--spin", "3/2"]);
        assert_eq!(
            s.points(None).unwrap()[0].particle.j_total,
            HalfInt::from_twice(3)
        );
        let s = setup(&["--particle", "electron", "--spin", "3/2"]);
        assert!(s.points(None).is_err());
    }
}

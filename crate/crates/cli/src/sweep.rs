//! `--sweep name=start:stop:steps[:log]`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    H0,
    Omega0,
    Wavelength,
    Intensity,
    N0,
    Mu,
    Temperature,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::H0 => "h0",
            SweepParam::Omega0 => "omega0",
            SweepParam::Wavelength => "wavelength",
            SweepParam::Intensity => "intensity",
            SweepParam::N0 => "n0",
            SweepParam::Mu => "mu",
            SweepParam::Temperature => "temperature",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            SweepParam::H0 => "G",
            SweepParam::Omega0 => "eV",
            SweepParam::Wavelength => "um",
            SweepParam::Intensity => "W/cm^2",
            SweepParam::N0 => "photons",
            SweepParam::Mu => "mu_B",
            SweepParam::Temperature => "K",
        }
    }

    /// Header of the leading sweep column.
    pub fn column(self) -> String {
        format!("{} [{}]", self.name(), self.unit())
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "h0" => SweepParam::H0,
            "omega0" => SweepParam::Omega0,
            "wavelength" => SweepParam::Wavelength,
            "intensity" => SweepParam::Intensity,
            "n0" => SweepParam::N0,
            "mu" => SweepParam::Mu,
            "temperature" => SweepParam::Temperature,
            _ => {
                return Err(format!(
                    "unknown sweep parameter {s:?} (h0, omega0, wavelength, intensity, n0, mu, temperature)"
                ))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub parameter: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub scale: Scale,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let t = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.start + t * (self.stop - self.start),
                    Scale::Log => self.start * (self.stop / self.start).powf(t),
                }
            })
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| format!("sweep {s:?} is not of the form name=start:stop:steps[:log]"))?;
        let parameter: SweepParam = name.trim().parse()?;
        let parts: Vec<&str> = range.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(format!(
                "sweep range {range:?} needs start:stop:steps[:log]"
            ));
        }
        let number = |t: &str| -> Result<f64, String> {
            let v: f64 = t
                .trim()
                .parse()
                .map_err(|_| format!("bad number {t:?} in sweep"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("non-finite value {t:?} in sweep"))
            }
        };
        let start = number(parts[0])?;
        let stop = number(parts[1])?;
        let steps: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("steps must be a positive integer, got {:?}", parts[2]))?;
        if steps < 1 {
            return Err("steps must be at least 1".into());
        }
        let scale = match parts.get(3).map(|t| t.trim()) {
            None | Some("linear") | Some("lin") => Scale::Linear,
            Some("log") => Scale::Log,
            Some(other) => return Err(format!("unknown sweep scale {other:?} (linear or log)")),
        };
        match scale {
            Scale::Linear if stop < start => {
                return Err(format!(
                    "linear sweep needs stop >= start, got {start}..{stop}"
                ))
            }
            Scale::Log if !(start > 0.0 && stop > 0.0) => {
                return Err(format!(
                    "log sweep needs positive endpoints, got {start}..{stop}"
                ))
            }
            _ => {}
        }
        Ok(Self {
            parameter,
            start,
            stop,
            steps,
            scale,
        })
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}={}:{}:{}",
            self.parameter.name(),
            self.start,
            self.stop,
            self.steps
        )?;
        if self.scale == Scale::Log {
            write!(f, ":log")?;
        }
        Ok(())
    }
}

//! Row producers for each subcommand.

use clap::{Args, ValueEnum};
use photodress::analytic::{
    dressed_spin_half, energies_spin_j_limit, splitting_charged, splitting_charged_vacuum,
    splitting_neutral, Branch, SplittingResult,
};
use photodress::model::{HalfInt, Recoil};
use photodress::observables::{magnetization, spin_expectation, transition_spectrum, Regime};
use photodress::oracle::dressed_level_numeric;
use photodress::units::{self, HBAR};
use photodress::Warning;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::output::Table;
use crate::setup::{Point, Setup};

/// Largest J accepted by `levels`.
pub const MAX_TWICE_J: i32 = 25;

type Rows = (Vec<Vec<Value>>, Vec<Warning>);

fn num(x: f64) -> Value {
    // no negative zero in the output
    json!(x + 0.0)
}

fn ev(erg: f64) -> Value {
    num(units::erg_to_ev(erg))
}

/// Evaluates every point on the pool, keeping sweep order.
fn evaluate(
    setup: &Setup,
    points: Vec<Point>,
    jobs: usize,
    columns: Vec<&str>,
    eval: impl Fn(&Point) -> Result<Rows, CliError> + Sync,
) -> Result<(Table, Vec<Warning>), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Io(e.into()))?;
    let results: Vec<Rows> =
        pool.install(|| points.par_iter().map(&eval).collect::<Result<_, _>>())?;
    let mut header: Vec<String> = setup.sweep_column().into_iter().collect();
    header.extend(columns.iter().map(|c| c.to_string()));
    let mut table = Table::new(header);
    let mut warnings = Vec::new();
    for (point, (rows, w)) in points.iter().zip(results) {
        for row in rows {
            let mut full: Vec<Value> = point
                .swept
                .filter(|_| setup.sweep.is_some())
                .map(num)
                .into_iter()
                .collect();
            full.extend(row);
            table.rows.push(full);
        }
        warnings.extend(w);
    }
    Ok((table, warnings))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Neutral form for neutral particles, charged form otherwise.
    Auto,
    Neutral,
    Charged,
    /// Charged form with only the anomalous moment.
    Vacuum,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SplittingArgs {
    #[command(flatten)]
    pub setup: Setup,
    #[arg(long, value_enum, default_value = "auto")]
    pub variant: Variant,
}

pub const SPLITTING_COLUMNS: [&str; 7] = [
    "variant",
    "h0 [G]",
    "omega0 [rad/s]",
    "2 mu H0/hbar [rad/s]",
    "Omega [rad/s]",
    "delta_eps [eV]",
    "delta_eps [erg]",
];

pub fn splitting(args: &SplittingArgs, jobs: usize) -> Result<(Table, Vec<Warning>), CliError> {
    let points = args.setup.points(None)?;
    evaluate(&args.setup, points, jobs, SPLITTING_COLUMNS.to_vec(), |p| {
        let variant = match args.variant {
            Variant::Auto if p.particle.is_charged() => Variant::Charged,
            Variant::Auto => Variant::Neutral,
            v => v,
        };
        if matches!(variant, Variant::Charged | Variant::Vacuum) && !p.particle.is_charged() {
            return Err(CliError::Usage(format!(
                "{variant:?} splitting needs a charged particle"
            )));
        }
        let r: SplittingResult = match variant {
            Variant::Charged => splitting_charged(&p.field, &p.particle)?,
            Variant::Vacuum => splitting_charged_vacuum(&p.field, &p.particle)?,
            _ => splitting_neutral(&p.field, &p.particle)?,
        };
        let name = match variant {
            Variant::Charged => "charged",
            Variant::Vacuum => "vacuum",
            _ => "neutral",
        };
        let row = vec![
            json!(name),
            num(r.h0),
            num(r.omega0),
            num(2.0 * r.mu * r.h0 / HBAR),
            num(r.big_omega),
            ev(r.delta_eps),
            num(r.delta_eps),
        ];
        Ok((vec![row], r.warnings))
    })
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LevelsArgs {
    #[command(flatten)]
    pub setup: Setup,
}

pub const LEVELS_COLUMNS: [&str; 6] = [
    "j",
    "photon offset",
    "energy [eV]",
    "shift [eV]",
    "limit shift [eV]",
    "sigma_z",
];

pub fn levels(args: &LevelsArgs, jobs: usize) -> Result<(Table, Vec<Warning>), CliError> {
    let points = args.setup.points(None)?;
    if points.iter().any(|p| p.field.n0_opt().is_none()) {
        return Err(CliError::Usage("levels needs --n0 (or an n0 sweep)".into()));
    }
    if let Some(p) = points
        .iter()
        .find(|p| p.particle.j_total.twice() > MAX_TWICE_J)
    {
        return Err(CliError::Usage(format!(
            "J = {} exceeds the 25/2 bound",
            p.particle.j_total
        )));
    }
    evaluate(&args.setup, points, jobs, LEVELS_COLUMNS.to_vec(), |p| {
        let mut rows = Vec::new();
        let mut warnings = Vec::new();
        for j in p.particle.j_total.projections() {
            let numeric = dressed_level_numeric(&p.field, &p.particle, j, Recoil::Exact)?;
            let limit = match p.field.h0() {
                Ok(_) => {
                    let l = energies_spin_j_limit(&p.field, &p.particle, j)?;
                    warnings.extend(l.warnings.iter().cloned());
                    ev(l.shift)
                }
                Err(_) => Value::Null,
            };
            let sigma = if p.particle.j_total == HalfInt::HALF && p.field.n0()? >= 1.0 {
                let s =
                    dressed_spin_half(&p.field, &p.particle, Branch::from_j(j)?, Recoil::Exact)?;
                warnings.extend(s.warnings.iter().cloned());
                num(spin_expectation(&s)[2])
            } else {
                Value::Null
            };
            rows.push(vec![
                json!(j.to_string()),
                json!(numeric.photon_offset),
                ev(numeric.energy),
                ev(numeric.shift),
                limit,
                sigma,
            ]);
        }
        Ok((rows, warnings))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeArg {
    /// N0 → ∞ at fixed H0.
    Limit,
    /// Exact spin-1/2 levels at each photon number; needs --n0.
    Exact,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TransitionsArgs {
    #[command(flatten)]
    pub setup: Setup,
    /// Only the lines starting at the ground state.
    #[arg(long)]
    pub ground_only: bool,
    #[arg(long, value_enum, default_value = "limit")]
    pub regime: RegimeArg,
}

pub const TRANSITIONS_COLUMNS: [&str; 13] = [
    "initial j",
    "initial photon offset",
    "final j",
    "final photon offset",
    "family",
    "channel",
    "delta l_z",
    "frequency [rad/s]",
    "frequency [eV]",
    "energy change [eV]",
    "element [|mu|]",
    "element [erg/G]",
    "regime",
];

pub fn transitions(args: &TransitionsArgs, jobs: usize) -> Result<(Table, Vec<Warning>), CliError> {
    let points = args.setup.points(None)?;
    let regime = match args.regime {
        RegimeArg::Limit => Regime::IntensiveLimit,
        RegimeArg::Exact => Regime::Exact,
    };
    evaluate(
        &args.setup,
        points,
        jobs,
        TRANSITIONS_COLUMNS.to_vec(),
        |p| {
            if p.particle.j_total != HalfInt::HALF {
                return Err(CliError::Usage(
                    "transitions are defined for J = 1/2".into(),
                ));
            }
            let lines = transition_spectrum(&p.field, &p.particle, args.ground_only, regime)?;
            let rows = lines
                .iter()
                .map(|l| {
                    vec![
                        json!(l.initial.j.to_string()),
                        json!(l.initial.photon_offset),
                        json!(l.final_state.j.to_string()),
                        json!(l.final_state.photon_offset),
                        json!(l.family.as_str()),
                        json!(l.channel.as_str()),
                        json!(l.delta_lz),
                        num(l.frequency),
                        num(units::omega_to_ev(l.frequency)),
                        ev(l.energy_change),
                        num(l.element_ratio),
                        num(l.element_magnitude),
                        json!(match args.regime {
                            RegimeArg::Limit => "limit",
                            RegimeArg::Exact => "exact",
                        }),
                    ]
                })
                .collect();
            Ok((rows, Vec::new()))
        },
    )
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MagnetizationArgs {
    #[command(flatten)]
    pub setup: Setup,
    /// Gas temperature, kelvin; must be positive.
    #[arg(long)]
    pub temperature_k: Option<f64>,
    /// Number density, 1/cm^3.
    #[arg(long, default_value_t = 1.0)]
    pub density_cm3: f64,
}

pub const MAGNETIZATION_COLUMNS: [&str; 8] = [
    "temperature [K]",
    "h0 [G]",
    "M [erg/(G cm^3)]",
    "M/(mu n)",
    "direction [e_z]",
    "delta_eps [eV]",
    "Omega [rad/s]",
    "density [1/cm^3]",
];

pub fn magnetization_cmd(
    args: &MagnetizationArgs,
    jobs: usize,
) -> Result<(Table, Vec<Warning>), CliError> {
    let swept_t = args
        .setup
        .sweep
        .as_ref()
        .is_some_and(|s| s.parameter == crate::sweep::SweepParam::Temperature);
    let t = match (args.temperature_k, swept_t) {
        (Some(t), false) => t,
        (None, true) => f64::NAN,
        (Some(_), true) => {
            return Err(CliError::Usage(
                "--temperature-k conflicts with a temperature sweep".into(),
            ))
        }
        (None, false) => {
            return Err(CliError::Usage(
                "magnetization needs --temperature-k".into(),
            ))
        }
    };
    if !(args.density_cm3 >= 0.0) {
        return Err(CliError::Usage("--density-cm3 must be non-negative".into()));
    }
    let points = args.setup.points(Some(t))?;
    for p in &points {
        match p.temperature_k {
            Some(t) if t > 0.0 && t.is_finite() => {}
            other => {
                return Err(CliError::Usage(format!(
                    "temperature must be positive, got {}",
                    other.unwrap_or(f64::NAN)
                )))
            }
        }
    }
    evaluate(
        &args.setup,
        points,
        jobs,
        MAGNETIZATION_COLUMNS.to_vec(),
        |p| {
            let t_k = p.temperature_k.expect("checked above");
            let m = magnetization(
                &p.field,
                &p.particle,
                args.density_cm3,
                units::kelvin_to_erg(t_k),
            )?;
            let row = vec![
                num(t_k),
                num(p.field.h0()?),
                num(m.magnitude),
                num(m.reduced),
                num(m.direction),
                ev(m.delta_eps),
                num(m.big_omega),
                num(m.density),
            ];
            Ok((vec![row], Vec::new()))
        },
    )
}

//! `photodress`: spin splittings, dressed levels, transition lines and
//! magnetization of a magnetic-moment particle in a circularly polarized wave.

mod commands;
mod error;
mod output;
mod setup;
mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use photodress::verify::{self, VerifyConfig};
use photodress::{enforce, Warning};
use serde::Serialize;
use serde_json::json;

use commands::{LevelsArgs, MagnetizationArgs, SplittingArgs, TransitionsArgs};
use error::CliError;
use output::{write_table, Format, RunManifest, Table};

#[derive(Debug, Parser, Serialize)]
#[command(name = "photodress", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output encoding. verify prints a text report unless this is given.
    #[arg(long, value_enum, global = true)]
    output: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps [default: all cores].
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Turn regime warnings into errors (exit 3).
    #[arg(long, global = true)]
    strict: bool,
    /// Leave the manifest timestamp out, making output byte-stable.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Spin splitting Δε and Ω.
    ///
    /// Columns: variant, h0 [G], omega0 [rad/s], 2 mu H0/hbar [rad/s],
    /// Omega [rad/s], delta_eps [eV], delta_eps [erg].
    Splitting(SplittingArgs),
    /// Dressed levels ψ_{j,N0} for every j, from the labeled block.
    ///
    /// Columns: j, photon offset, energy [eV], shift [eV] (relative to
    /// ħ²k²/2m + N0ħω0), limit shift [eV] (intensive limit), sigma_z
    /// (J = 1/2 only).
    Levels(LevelsArgs),
    /// Magnetodipole lines between dressed states.
    ///
    /// Columns: initial j, initial photon offset, final j, final photon offset,
    /// family, channel, delta l_z, frequency [rad/s], frequency [eV],
    /// energy change [eV], element [|mu|], element [erg/G], regime.
    Transitions(TransitionsArgs),
    /// Magnetization of a nondegenerate gas.
    ///
    /// Columns: temperature [K], h0 [G], M [erg/(G cm^3)], M/(mu n),
    /// direction [e_z], delta_eps [eV], Omega [rad/s], density [1/cm^3].
    Magnetization(MagnetizationArgs),
    /// Runs the analytic-vs-numeric checks; exit 2 if any fails.
    ///
    /// Columns: check, name, max deviation, tolerance, passed, detail.
    Verify(VerifyArgs),
}

#[derive(Debug, clap::Args, Serialize)]
struct VerifyArgs {
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    /// Replace every check's tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
}

fn sink(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(cli: &Cli, name: &str, table: &Table, warnings: &[Warning]) -> Result<(), CliError> {
    let mut unique: Vec<String> = Vec::new();
    for w in warnings {
        let s = w.to_string();
        if !unique.contains(&s) {
            unique.push(s);
        }
    }
    for w in &unique {
        eprintln!("warning: {w}");
    }
    let mut manifest = RunManifest::new(name, json!(cli), !cli.no_timestamp);
    manifest.warnings = unique;
    let mut out = sink(&cli.out)?;
    write_table(
        &mut out,
        &manifest,
        table,
        cli.output.unwrap_or(Format::Csv),
    )?;
    out.flush().map_err(anyhow::Error::from)?;
    Ok(())
}

fn run_verify(cli: &Cli, args: &VerifyArgs) -> Result<(), CliError> {
    if let Some(t) = args.tolerance {
        if !(t >= 0.0) {
            return Err(CliError::Usage("--tolerance must be non-negative".into()));
        }
    }
    let report = verify::run_all(&VerifyConfig {
        seed: args.seed,
        tolerance_override: args.tolerance,
    });
    match cli.output {
        None => {
            let mut out = sink(&cli.out)?;
            out.write_all(report.render().as_bytes())
                .map_err(anyhow::Error::from)?;
            out.flush().map_err(anyhow::Error::from)?;
        }
        Some(_) => {
            let mut table = Table::new(
                [
                    "check",
                    "name",
                    "max deviation",
                    "tolerance",
                    "passed",
                    "detail",
                ]
                .map(String::from)
                .to_vec(),
            );
            for o in &report.outcomes {
                table.rows.push(vec![
                    json!(o.id),
                    json!(o.name),
                    json!(o.max_deviation),
                    json!(o.tolerance),
                    json!(o.passed),
                    json!(o.detail),
                ]);
            }
            emit(cli, "verify", &table, &[])?;
        }
    }
    let failing: Vec<String> = report
        .failing()
        .iter()
        .map(|o| format!("check {} {}", o.id, o.name))
        .collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verify(failing.join(", ")))
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let jobs = match cli.jobs {
        Some(0) => return Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(n) => n,
        None => 0,
    };
    let (name, (table, warnings)) = match &cli.command {
        Command::Splitting(a) => ("splitting", commands::splitting(a, jobs)?),
        Command::Levels(a) => ("levels", commands::levels(a, jobs)?),
        Command::Transitions(a) => ("transitions", commands::transitions(a, jobs)?),
        Command::Magnetization(a) => ("magnetization", commands::magnetization_cmd(a, jobs)?),
        Command::Verify(a) => return run_verify(cli, a),
    };
    enforce(&warnings, cli.strict)?;
    emit(cli, name, &table, &warnings)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

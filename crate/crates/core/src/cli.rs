//! Command-line front end.
//!
//! Configurations are JSON files. `simulate` writes JSON Lines (one event per
//! line, then a termination record) and `limit-sweep` writes CSV; every other
//! subcommand prints a single JSON report. Exit codes:
//!
//! | code | meaning                                  |
//! |------|------------------------------------------|
//! | 0    | success, free flight or detected collapse |
//! | 2    | invalid configuration                     |
//! | 3    | direct multiple collision                 |
//! | 4    | event budget exhausted                    |
//! | 5    | I/O failure                               |

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::forms::{self, MassVector, Signature, SystemClass};
use crate::gravlimit::{self, LimitConfig};
use crate::sampling;
use crate::simulator::{self, CollapsePrediction, ParticleState, SimulationLimits, Termination};
use crate::spectral;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_MULTIPLE_COLLISION: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_IO: i32 = 5;

/// Environment variable holding the log filter.
pub const LOG_ENV: &str = "SIGNED_BILLIARDS_LOG";

/// A mass system with optional initial data.
///
/// Missing positions or velocities are drawn from `seed`: momentum-free data
/// with negative energy for negative-gas masses, bounded random data
/// otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub masses: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocities: Option<Vec<f64>>,
    #[serde(default)]
    pub limits: SimulationLimits,
    #[serde(default)]
    pub seed: u64,
}

impl SystemConfig {
    /// Masses for analysis only; zero pair sums are allowed.
    pub fn analysis_masses(&self) -> Result<MassVector, Error> {
        MassVector::for_analysis(self.masses.clone())
    }

    pub fn masses(&self) -> Result<MassVector, Error> {
        MassVector::new(self.masses.clone())
    }

    /// Fills in missing initial data from the seed.
    pub fn completed(&self) -> Result<Self, Error> {
        if self.positions.is_some() && self.velocities.is_some() {
            return Ok(self.clone());
        }
        let masses = self.masses()?;
        let mut rng = sampling::rng(self.seed);
        let drawn = if forms::gas_neg(&masses) {
            sampling::negative_energy_state(&mut rng, &masses)?
        } else {
            sampling::bounded_state(&mut rng, masses.len())
        };
        Ok(Self {
            positions: Some(self.positions.clone().unwrap_or(drawn.x)),
            velocities: Some(self.velocities.clone().unwrap_or(drawn.v)),
            ..self.clone()
        })
    }

    pub fn state(&self) -> Result<ParticleState, Error> {
        let c = self.completed()?;
        let (x, v) = (c.positions.unwrap(), c.velocities.unwrap());
        if x.len() != self.masses.len() || v.len() != self.masses.len() {
            return Err(Error::DimensionMismatch {
                expected: self.masses.len(),
                got: if x.len() != self.masses.len() { x.len() } else { v.len() },
            });
        }
        ParticleState::new(0.0, x, v)
    }
}

#[derive(Debug, Parser)]
#[command(name = "signed-billiards", version, about = "Elastic collisions of particles with signed masses")]
pub struct Cli {
    /// Write the effective configuration (overrides and drawn data applied)
    /// to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub emit_config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Signatures, class and predicted behaviour of a mass system.
    Classify(ConfigArg),
    /// Event-driven run; JSON Lines event log.
    Simulate(SimulateArgs),
    /// Inertia polynomial and collapse times.
    Predict(ConfigArg),
    /// Three-particle composed map and its eigenvalues.
    Spectral(ConfigArg),
    /// Vanishing-mass graviton sweep; CSV table.
    LimitSweep(LimitArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// System configuration (JSON).
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// System configuration (JSON).
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Event log destination; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Override of `limits.max_events`.
    #[arg(long, value_name = "N")]
    pub max_events: Option<u64>,
    /// Override of `limits.t_max`.
    #[arg(long, value_name = "X")]
    pub t_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Limit configuration; the symmetric default when absent.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// CSV destination; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Qualitative verdict of `classify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PredictedBehavior {
    FiniteCollisions,
    CollapsePossible,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub signature: Signature,
    pub restricted_signature: Signature,
    pub class: SystemClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub glashow_mittag: Option<bool>,
    pub predicted_behavior: PredictedBehavior,
}

pub fn classify_report(masses: &MassVector) -> ClassifyReport {
    let restricted = forms::restricted_signature(masses);
    let predicted_behavior = if restricted.degenerate {
        PredictedBehavior::Degenerate
    } else if restricted.is_definite() || masses.len() == 2 {
        PredictedBehavior::FiniteCollisions
    } else {
        PredictedBehavior::CollapsePossible
    };
    let m = masses.as_slice();
    ClassifyReport {
        signature: forms::full_signature(masses),
        restricted_signature: restricted,
        class: forms::classify(masses),
        glashow_mittag: (m.len() == 3).then(|| forms::glashow_mittag(m[0], m[1], m[2])),
        predicted_behavior,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictReport {
    pub p_coeffs: [f64; 3],
    pub roots: Vec<f64>,
    pub gas_neg: bool,
    pub energy_sign: i8,
    pub applicable: bool,
    pub prediction: CollapsePrediction,
}

pub fn predict_report(masses: &MassVector, state: &ParticleState) -> Result<PredictReport, Error> {
    let p = simulator::predict_collapse(masses, state)?;
    let energy = p.energy();
    let tol = 1e-14 * state.v.iter().zip(masses.as_slice()).map(|(v, m)| m.abs() * v * v).sum::<f64>();
    Ok(PredictReport {
        p_coeffs: p.p_coeffs(),
        roots: p.roots.clone(),
        gas_neg: p.gas_neg,
        energy_sign: if energy > tol {
            1
        } else if energy < -tol {
            -1
        } else {
            0
        },
        applicable: p.applicable(),
        prediction: p,
    })
}

/// Exit code of a finished simulation.
pub fn exit_code(termination: &Termination) -> i32 {
    match termination {
        Termination::FreeFlight { .. } | Termination::CollapseDetected { .. } => EXIT_OK,
        Termination::DirectMultipleCollision { .. } => EXIT_MULTIPLE_COLLISION,
        Termination::EventBudgetExhausted { .. } => EXIT_BUDGET,
    }
}

enum Failure {
    Invalid(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn load_system(path: &Path, emit: Option<&Path>) -> Result<SystemConfig, Failure> {
    let config: SystemConfig = read_json(path)?;
    if let Some(p) = emit {
        write_json(p, &config.completed().unwrap_or_else(|_| config.clone()))?;
    }
    Ok(config)
}

fn execute(cli: &Cli) -> Result<i32, Failure> {
    let emit = cli.emit_config.as_deref();
    match &cli.command {
        Command::Classify(a) => {
            let config = load_system(&a.config, emit)?;
            print_json(&classify_report(&config.analysis_masses()?))?;
            Ok(EXIT_OK)
        }
        Command::Predict(a) => {
            let config = load_system(&a.config, emit)?;
            print_json(&predict_report(&config.masses()?, &config.state()?)?)?;
            Ok(EXIT_OK)
        }
        Command::Spectral(a) => {
            let config = load_system(&a.config, emit)?;
            print_json(&spectral::composed_map(&config.masses()?)?)?;
            Ok(EXIT_OK)
        }
        Command::Simulate(a) => {
            let mut config: SystemConfig = read_json(&a.config)?;
            if let Some(n) = a.max_events {
                config.limits.max_events = n;
            }
            if let Some(t) = a.t_max {
                config.limits.t_max = Some(t);
            }
            let config = config.completed()?;
            if let Some(p) = emit {
                write_json(p, &config)?;
            }
            let masses = config.masses()?;
            let traj = simulator::simulate(&masses, &config.state()?, &config.limits)?;
            let mut out = output(a.out.as_deref())?;
            for e in &traj.events {
                serde_json::to_writer(&mut out, e)?;
                writeln!(out)?;
            }
            serde_json::to_writer(&mut out, &traj.termination)?;
            writeln!(out)?;
            out.flush()?;
            log::info!("{} events, {:?}", traj.events.len(), traj.termination);
            Ok(exit_code(&traj.termination))
        }
        Command::LimitSweep(a) => {
            let config: LimitConfig = match &a.config {
                Some(p) => read_json(p)?,
                None => LimitConfig::default(),
            };
            if let Some(p) = emit {
                write_json(p, &config)?;
            }
            let rows = gravlimit::sweep(&config)?;
            if !gravlimit::is_converging(&rows, 0.1) {
                log::warn!("limit sweep is not converging within 10% noise");
            }
            gravlimit::write_csv(&rows, output(a.out.as_deref())?).map_err(|e| match e.kind() {
                csv::ErrorKind::Io(_) => Failure::Io(e.to_string()),
                _ => Failure::Invalid(e.to_string()),
            })?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses arguments, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Io(msg)) => {
            eprintln!("I/O error: {msg}");
            EXIT_IO
        }
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::new().filter(LOG_ENV)).init();
    run(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(m: &[f64]) -> ClassifyReport {
        classify_report(&MassVector::for_analysis(m.to_vec()).unwrap())
    }

    #[test]
    fn classify_examples() {
        let g = report(&[1.0, -0.5, 1.0]);
        assert_eq!(g.class.tag, forms::ClassTag::Graviton);
        assert_eq!(g.predicted_behavior, PredictedBehavior::CollapsePossible);
        assert_eq!(g.glashow_mittag, Some(false));
        assert_eq!(report(&[1.0, 1.0, 1.0]).predicted_behavior, PredictedBehavior::FiniteCollisions);
        let d = report(&[1.0, -1.0]);
        assert_eq!(d.predicted_behavior, PredictedBehavior::Degenerate);
        assert_eq!(d.glashow_mittag, None);
    }

    #[test]
    fn missing_data_is_drawn_deterministically() {
        let c = SystemConfig {
            masses: vec![1.0, -0.5, 1.0],
            positions: None,
            velocities: None,
            limits: SimulationLimits::default(),
            seed: 11,
        };
        let a = c.completed().unwrap();
        assert_eq!(a, c.completed().unwrap());
        let m = c.masses().unwrap();
        assert!(forms::kinetic_energy(&m, a.velocities.as_ref().unwrap()).unwrap() < 0.0);
    }

    #[test]
    fn exit_codes_follow_termination() {
        assert_eq!(exit_code(&Termination::EventBudgetExhausted { t: 1.0 }), EXIT_BUDGET);
        assert_eq!(
            exit_code(&Termination::DirectMultipleCollision {
                t: 0.0,
                particles: vec![0, 1, 2]
            }),
            EXIT_MULTIPLE_COLLISION
        );
        assert_eq!(
            exit_code(&Termination::CollapseDetected {
                t_star: 1.0,
                estimate_error: 0.0
            }),
            EXIT_OK
        );
    }
}

//! The vanishing-mass limit of the three-particle toy graviton.
//!
//! Two positive masses start at rest, symmetric about the origin in the
//! momentum sense (`m1 x1 + m3 x3 = 0`), and a negative mass `m2` starts at
//! the origin with kinetic energy `U0 < 0`. As `m2 → 0` at fixed `U0`, the
//! outer pair behaves as if bound by the potential `U(r) = U0 r0² / r²`, so
//! `T + U` tends to the constant `E = U0` and the separation tends to
//! `r(t) = sqrt(r0² + t² E / a)` with `a = m1 m3 / (2 (m1 + m3))`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::MassVector;
use crate::simulator::{simulate, ParticleState, SimulationLimits, Trajectory};

/// Parameters of a limit experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LimitConfig {
    pub m1: f64,
    pub m3: f64,
    pub x1_0: f64,
    #[serde(rename = "U0")]
    pub u0: f64,
    pub m2_list: Vec<f64>,
    /// Defaults to 21 uniform points in `[-0.9 s, 0.9 s]`.
    pub sample_times: Option<Vec<f64>>,
    /// Direction of the initial velocity of the negative mass, `+1` towards
    /// particle 3.
    pub v2_sign: f64,
    pub limits: SimulationLimits,
}

impl Default for LimitConfig {
    fn default() -> Self {
        Self {
            m1: 1.0,
            m3: 1.0,
            x1_0: -1.0,
            u0: -1.0,
            m2_list: vec![-1e-2, -1e-3, -1e-4],
            sample_times: None,
            v2_sign: 1.0,
            limits: SimulationLimits::default(),
        }
    }
}

impl LimitConfig {
    pub fn x3_0(&self) -> f64 {
        -self.m1 * self.x1_0 / self.m3
    }

    pub fn r0(&self) -> f64 {
        self.x3_0() - self.x1_0
    }

    pub fn i0(&self) -> f64 {
        self.m1 * self.x1_0 * self.x1_0 + self.m3 * self.x3_0().powi(2)
    }

    /// `a = m1 m3 / (2 (m1 + m3))`.
    pub fn a(&self) -> f64 {
        self.m1 * self.m3 / (2.0 * (self.m1 + self.m3))
    }

    pub fn energy(&self) -> f64 {
        self.u0
    }

    /// Positive root of `I0 + 2 t² E`.
    pub fn s(&self) -> f64 {
        (self.i0() / (-2.0 * self.u0)).sqrt()
    }

    /// Limit separation `sqrt(r0² + t² E / a)`.
    pub fn r_theory(&self, t: f64) -> f64 {
        (self.r0().powi(2) + t * t * self.u0 / self.a()).max(0.0).sqrt()
    }

    pub fn potential(&self, r: f64) -> f64 {
        self.u0 * self.r0().powi(2) / (r * r)
    }

    pub fn sample_times(&self) -> Vec<f64> {
        match &self.sample_times {
            Some(t) => t.clone(),
            None => {
                let edge = 0.9 * self.s();
                (0..21).map(|k| -edge + 2.0 * edge * k as f64 / 20.0).collect()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if !(self.m1 > 0.0 && self.m3 > 0.0) {
            return bad("end masses must be positive");
        }
        if !(self.x1_0 < 0.0) {
            return bad("x1_0 must be negative");
        }
        if !(self.u0 < 0.0) {
            return bad("U0 must be negative");
        }
        if self.v2_sign != 1.0 && self.v2_sign != -1.0 {
            return bad("v2_sign must be +1 or -1");
        }
        Ok(())
    }
}

/// Masses and initial state for one value of `m2`.
pub fn setup(config: &LimitConfig, m2: f64) -> Result<(MassVector, ParticleState)> {
    config.validate()?;
    if !(m2 < 0.0) {
        return Err(Error::InvalidConfig(format!("m2 must be negative, got {m2}")));
    }
    if !(config.m1 + m2 > 0.0 && m2 + config.m3 > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "m2 = {m2} breaks the graviton condition |m2| < min(m1, m3)"
        )));
    }
    let masses = MassVector::new(vec![config.m1, m2, config.m3])?;
    let v2 = config.v2_sign * (2.0 * config.u0 / m2).sqrt();
    let state = ParticleState::new(
        0.0,
        vec![config.x1_0, 0.0, config.x3_0()],
        vec![0.0, v2, 0.0],
    )?;
    Ok((masses, state))
}

/// Observables of one run at one sample time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitObservables {
    pub m2: f64,
    pub t: f64,
    pub r: f64,
    pub t_kin: f64,
    pub u_pot: f64,
    /// `T + U - E`.
    pub residual: f64,
    pub r_theory: f64,
    pub positions: [f64; 3],
    pub velocities: [f64; 3],
}

/// All sample points of one `m2`, with the event count of the runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRun {
    pub m2: f64,
    pub samples: Vec<LimitObservables>,
    pub events_used: usize,
}

/// Samples the run for one `m2`. Negative sample times are reached by
/// running the time-reversed solution forward.
pub fn run_limit_point(config: &LimitConfig, m2: f64) -> Result<LimitRun> {
    let (masses, state) = setup(config, m2)?;
    let s = config.s();
    let mut times = config.sample_times();
    if let Some(&t) = times.iter().find(|t| !(t.abs() < s)) {
        return Err(Error::TimeOutOfRange {
            t,
            start: -s,
            end: s,
        });
    }
    times.sort_by(f64::total_cmp);

    let backward: Vec<f64> = times.iter().filter(|t| **t < 0.0).rev().map(|t| -t).collect();
    let forward: Vec<f64> = times.iter().copied().filter(|t| *t >= 0.0).collect();

    let mut samples = Vec::with_capacity(times.len());
    let mut events_used = 0;
    for (direction, ts) in [(-1.0, &backward), (1.0, &forward)] {
        if ts.is_empty() {
            continue;
        }
        let start = if direction < 0.0 { state.reversed() } else { state.clone() };
        let limits = SimulationLimits {
            t_max: Some(ts.iter().copied().fold(0.0, f64::max)),
            ..config.limits
        };
        let traj: Trajectory = simulate(&masses, &start, &limits)?;
        events_used += traj.events.len();
        let mut obs: Vec<LimitObservables> = traj
            .states_at(ts)?
            .into_iter()
            .map(|st| {
                let st = if direction < 0.0 { st.reversed() } else { st };
                observe(config, m2, direction * st.t, &st)
            })
            .collect();
        if direction < 0.0 {
            obs.reverse();
        }
        samples.extend(obs);
    }
    Ok(LimitRun {
        m2,
        samples,
        events_used,
    })
}

fn observe(config: &LimitConfig, m2: f64, t: f64, st: &ParticleState) -> LimitObservables {
    let r = st.x[2] - st.x[0];
    let t_kin = 0.5 * config.m1 * st.v[0] * st.v[0] + 0.5 * config.m3 * st.v[2] * st.v[2];
    let u_pot = config.potential(r);
    LimitObservables {
        m2,
        t,
        r,
        t_kin,
        u_pot,
        residual: t_kin + u_pot - config.energy(),
        r_theory: config.r_theory(t),
        positions: [st.x[0], st.x[1], st.x[2]],
        velocities: [st.v[0], st.v[1], st.v[2]],
    }
}

/// One row of the convergence table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub m2: f64,
    pub max_residual: f64,
    pub max_r_error: f64,
    pub events_used: usize,
}

impl From<&LimitRun> for SweepRow {
    fn from(run: &LimitRun) -> Self {
        let max = |f: &dyn Fn(&LimitObservables) -> f64| run.samples.iter().map(f).fold(0.0, f64::max);
        Self {
            m2: run.m2,
            max_residual: max(&|o| o.residual.abs()),
            max_r_error: max(&|o| (o.r - o.r_theory).abs()),
            events_used: run.events_used,
        }
    }
}

/// Runs every `m2` of the config concurrently; rows keep the config order.
pub fn sweep_runs(config: &LimitConfig) -> Result<Vec<LimitRun>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .m2_list
            .iter()
            .map(|&m2| scope.spawn(move || run_limit_point(config, m2)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("limit run panicked"))
            .collect()
    })
}

pub fn sweep(config: &LimitConfig) -> Result<Vec<SweepRow>> {
    Ok(sweep_runs(config)?.iter().map(SweepRow::from).collect())
}

/// Both error columns shrink down the table, each row allowed to exceed its
/// predecessor by at most `slack` (relative).
pub fn is_converging(rows: &[SweepRow], slack: f64) -> bool {
    rows.windows(2).all(|w| {
        w[1].max_residual <= (1.0 + slack) * w[0].max_residual
            && w[1].max_r_error <= (1.0 + slack) * w[0].max_r_error
    })
}

/// Writes the table as CSV with columns `m2, max_residual, max_r_error,
/// events_used`.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

use serde::{Deserialize, Serialize};

use super::ParticleState;
use crate::collision::apply_collision_map;
use crate::error::{Error, Result};
use crate::forms::MassVector;

/// One resolved collision of the pair `(i, i + 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionEvent {
    pub t: f64,
    /// Free-flight time since the previous collision instant (or the start).
    /// Zero for the second and later pairs of a simultaneous group.
    pub dt: f64,
    pub pair: [usize; 2],
    pub v_before: [f64; 2],
    pub v_after: [f64; 2],
    pub x_contact: f64,
}

impl CollisionEvent {
    /// Momentum and kinetic-energy changes across the collision.
    pub fn residuals(&self, masses: &MassVector) -> (f64, f64) {
        let (mi, mj) = (masses.get(self.pair[0]), masses.get(self.pair[1]));
        let [vi, vj] = self.v_before;
        let [wi, wj] = self.v_after;
        let dp = (mi * wi + mj * wj) - (mi * vi + mj * vj);
        let de = 0.5 * (mi * wi * wi + mj * wj * wj) - 0.5 * (mi * vi * vi + mj * vj * vj);
        (dp, de)
    }
}

/// How a simulation ended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "termination")]
pub enum Termination {
    /// No collision occurs after `after`, or none before `horizon` when the
    /// run was cut at a time limit.
    FreeFlight {
        after: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<f64>,
    },
    /// Collision times accumulate geometrically at `t_star`.
    CollapseDetected { t_star: f64, estimate_error: f64 },
    DirectMultipleCollision { t: f64, particles: Vec<usize> },
    EventBudgetExhausted { t: f64 },
}

/// Initial state, ordered collision log and the termination verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub initial: ParticleState,
    pub events: Vec<CollisionEvent>,
    pub termination: Termination,
}

impl Trajectory {
    /// Latest time at which the state is defined.
    pub fn end_time(&self) -> f64 {
        match &self.termination {
            Termination::FreeFlight { horizon, .. } => horizon.unwrap_or(f64::INFINITY),
            Termination::CollapseDetected { .. } | Termination::EventBudgetExhausted { .. } => {
                self.last_event_time()
            }
            Termination::DirectMultipleCollision { t, .. } => *t,
        }
    }

    pub fn last_event_time(&self) -> f64 {
        self.events.last().map_or(self.initial.t, |e| e.t)
    }

    pub fn collapse_time(&self) -> Option<f64> {
        match self.termination {
            Termination::CollapseDetected { t_star, .. } => Some(t_star),
            _ => None,
        }
    }

    /// States at the given (increasing) times, replaying the log. A time that
    /// coincides with a collision sees the post-collision velocities.
    pub fn states_at(&self, times: &[f64]) -> Result<Vec<ParticleState>> {
        let (start, end) = (self.initial.t, self.end_time());
        let mut out = Vec::with_capacity(times.len());
        let mut replay = Replay::new(self);
        let mut prev = f64::NEG_INFINITY;
        for &t in times {
            if !(start..=end).contains(&t) {
                return Err(Error::TimeOutOfRange { t, start, end });
            }
            if t < prev {
                return Err(Error::Precondition("sample times must be increasing".into()));
            }
            prev = t;
            replay.advance_through(t);
            let mut s = replay.state.clone();
            s.advance(t - s.t);
            s.t = t;
            out.push(s);
        }
        Ok(out)
    }

    pub fn state_at(&self, t: f64) -> Result<ParticleState> {
        Ok(self.states_at(&[t])?.remove(0))
    }

    /// States right after each collision instant.
    pub fn event_states(&self) -> Vec<ParticleState> {
        let mut replay = Replay::new(self);
        let mut out = Vec::new();
        while replay.next < self.events.len() {
            let t = self.events[replay.next].t;
            replay.advance_through(t);
            out.push(replay.state.clone());
        }
        out
    }
}

/// Re-applies logged events exactly as the simulator did.
struct Replay<'a> {
    traj: &'a Trajectory,
    state: ParticleState,
    next: usize,
}

impl<'a> Replay<'a> {
    fn new(traj: &'a Trajectory) -> Self {
        Self {
            traj,
            state: traj.initial.clone(),
            next: 0,
        }
    }

    fn advance_through(&mut self, t: f64) {
        while let Some(e) = self.traj.events.get(self.next) {
            if e.t > t {
                break;
            }
            self.state.advance(e.dt);
            let [i, j] = e.pair;
            self.state.x[i] = e.x_contact;
            self.state.x[j] = e.x_contact;
            self.state.v[i] = e.v_after[0];
            self.state.v[j] = e.v_after[1];
            self.next += 1;
        }
    }
}

/// Max-norm of `T_1 ∘ ... ∘ T_n (x(t)) - (x(0) + t v(0))`, where `T_k` are the
/// collision maps of the events up to time `t`. Zero in exact arithmetic:
/// undoing every collision straightens the trajectory.
pub fn unfold_residual(masses: &MassVector, trajectory: &Trajectory, t: f64) -> Result<f64> {
    let state = trajectory.state_at(t)?;
    let mut y = state.x;
    let applied = trajectory.events.iter().take_while(|e| e.t <= t);
    for e in applied.collect::<Vec<_>>().into_iter().rev() {
        apply_collision_map(masses, e.pair[0], e.pair[1], &mut y)?;
    }
    let init = &trajectory.initial;
    let elapsed = t - init.t;
    Ok(y.iter()
        .zip(init.x.iter().zip(&init.v))
        .map(|(yi, (x0, v0))| (yi - (x0 + elapsed * v0)).abs())
        .fold(0.0, f64::max))
}

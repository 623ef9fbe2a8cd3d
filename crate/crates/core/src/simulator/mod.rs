//! Event-driven evolution of particles on a line.
//!
//! Between collisions every particle moves with constant velocity, so the
//! simulation jumps from one collision time to the next. Only adjacent
//! particles can meet. Collisions of disjoint pairs at the same instant are
//! resolved together; three or more particles meeting at once ends the run.

mod collapse;
mod trajectory;

pub use collapse::{predict_collapse, CollapseDetector, CollapsePrediction, InertiaPolynomial};
pub use trajectory::{unfold_residual, CollisionEvent, Termination, Trajectory};

use log::debug;
use serde::{Deserialize, Serialize};

use crate::collision::CollisionCoefficient;
use crate::error::{Error, Result};
use crate::forms::{self, MassVector};

/// Relative time window inside which two collisions count as simultaneous.
pub const SIMULTANEITY_REL_TOL: f64 = 1e-12;

/// A pair approaches only if `v_i - v_{i+1}` exceeds this fraction of the
/// larger of the two speeds.
pub const APPROACH_REL_TOL: f64 = 1e-14;

/// A non-colliding neighbour closer than this fraction of the local position
/// magnitude counts as touching the colliding pair.
pub const CONTACT_REL_TOL: f64 = 1e-12;

/// Phase point: positions and velocities at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleState {
    pub t: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

impl ParticleState {
    /// A state at time `t`; positions must be weakly increasing.
    pub fn new(t: f64, x: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if x.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: v.len(),
            });
        }
        if let Some(index) = x.windows(2).position(|w| !(w[0] <= w[1])) {
            return Err(Error::Unordered {
                index,
                left: x[index],
                right: x[index + 1],
            });
        }
        if !(t.is_finite() && x.iter().chain(&v).all(|a| a.is_finite())) {
            return Err(Error::InvalidConfig("non-finite state value".into()));
        }
        Ok(Self { t, x, v })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Free flight for `dt`.
    pub fn advance(&mut self, dt: f64) {
        for (x, v) in self.x.iter_mut().zip(&self.v) {
            *x += v * dt;
        }
        self.t += dt;
    }

    /// The same state with all velocities negated.
    pub fn reversed(&self) -> Self {
        Self {
            t: self.t,
            x: self.x.clone(),
            v: self.v.iter().map(|v| -v).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.v.windows(2).all(|w| w[0] == w[1])
    }
}

/// Positivity of the moment of inertia on the ordered part of `P0`: for
/// masses satisfying the cone condition, `I(x) > 0` unless `x = 0`.
pub fn cone_positivity_check(masses: &MassVector, x: &[f64]) -> Result<bool> {
    masses.check_dim(x)?;
    if !forms::cone_condition(masses) {
        return Err(Error::Precondition("masses violate the cone condition".into()));
    }
    if let Some(index) = x.windows(2).position(|w| w[0] > w[1]) {
        return Err(Error::Unordered {
            index,
            left: x[index],
            right: x[index + 1],
        });
    }
    let m = masses.as_slice();
    let momentum: f64 = m.iter().zip(x).map(|(m, x)| m * x).sum();
    let size: f64 = m.iter().zip(x).map(|(m, x)| (m * x).abs()).sum();
    if momentum.abs() > 1e-12 * size {
        return Err(Error::Precondition("configuration is not in P0".into()));
    }
    if x.iter().all(|&xi| xi == 0.0) {
        return Ok(true);
    }
    Ok(moment_of_inertia(masses, x)? > 0.0)
}

/// Reference magnitude of a run: `max(|x|,1) max(|v|,1) max(|m|,1)`.
pub fn run_scale(masses: &MassVector, state: &ParticleState) -> f64 {
    let max_abs = |s: &[f64]| s.iter().fold(1.0_f64, |a, b| a.max(b.abs()));
    max_abs(&state.x) * max_abs(&state.v) * masses.max_abs().max(1.0)
}

/// `I(x) = Q(x) = Σ m_i x_i^2`.
pub fn moment_of_inertia(masses: &MassVector, x: &[f64]) -> Result<f64> {
    forms::quadratic(masses, x)
}

/// Galilean shift to the frame where the center of mass rests at the origin.
pub fn center_of_mass_frame(masses: &MassVector, state: &ParticleState) -> Result<ParticleState> {
    masses.check_dim(&state.x)?;
    if masses.total_sign() == 0 {
        return Err(Error::ZeroTotalMass);
    }
    let m = masses.as_slice();
    let total = masses.total();
    let center = forms::bilinear_unchecked(m, &state.x, &vec![1.0; m.len()]) / total;
    let drift = forms::bilinear_unchecked(m, &state.v, &vec![1.0; m.len()]) / total;
    Ok(ParticleState {
        t: state.t,
        x: state.x.iter().map(|x| x - center).collect(),
        v: state.v.iter().map(|v| v - drift).collect(),
    })
}

/// The earliest upcoming collision time and every adjacent pair colliding then.
#[derive(Debug, Clone, PartialEq)]
pub struct NextCollision {
    pub t: f64,
    /// Time from the current state to the collision.
    pub dt: f64,
    /// Left indices `i` of the colliding pairs `(i, i + 1)`, increasing.
    pub pairs: Vec<usize>,
}

/// Finds the next collision among adjacent pairs.
///
/// Pairs whose collision time lies within `eps_t` (relative to the time to the
/// earliest collision) of the minimum are reported together. The returned
/// pairs may overlap; [`step`] rejects that as a multiple collision.
pub fn next_collision(state: &ParticleState, eps_t: f64) -> Option<NextCollision> {
    let candidates: Vec<(usize, f64)> = (0..state.len().saturating_sub(1))
        .filter_map(|i| {
            let rel = state.v[i] - state.v[i + 1];
            let speed = state.v[i].abs().max(state.v[i + 1].abs());
            (rel > APPROACH_REL_TOL * speed)
                .then(|| (i, (state.x[i + 1] - state.x[i]).max(0.0) / rel))
        })
        .collect();
    let dt = candidates.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    if !dt.is_finite() {
        return None;
    }
    let window = eps_t * dt;
    let pairs = candidates
        .iter()
        .filter(|c| c.1 - dt <= window)
        .map(|c| c.0)
        .collect();
    Some(NextCollision {
        t: state.t + dt,
        dt,
        pairs,
    })
}

/// Resolves the collisions of `pairs` (left indices) in a state already
/// advanced to the contact instant.
///
/// Each colliding pair is snapped to its common contact position before the
/// velocities are updated.
pub fn step(
    masses: &MassVector,
    state: &ParticleState,
    pairs: &[usize],
) -> Result<(ParticleState, Vec<CollisionEvent>)> {
    masses.check_dim(&state.x)?;
    let n = state.len();
    let mut sorted = pairs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&i) = sorted.iter().find(|&&i| i + 1 >= n) {
        return Err(Error::Precondition(format!("pair ({i}, {}) out of range", i + 1)));
    }

    for w in sorted.windows(2) {
        if w[1] == w[0] + 1 {
            return Err(Error::DirectMultipleCollision {
                t: state.t,
                particles: vec![w[0], w[0] + 1, w[0] + 2],
            });
        }
    }
    for &i in &sorted {
        let gap = state.x[i + 1] - state.x[i];
        let magnitude = state.x[i].abs().max(state.x[i + 1].abs());
        if gap.abs() > 1e-8 * magnitude.max(f64::MIN_POSITIVE) && gap != 0.0 {
            return Err(Error::NotInContact { i, j: i + 1, gap });
        }
        let touching = |a: usize, b: usize| {
            let scale = state.x[a.saturating_sub(1)..=(b + 1).min(n - 1)]
                .iter()
                .fold(0.0_f64, |acc, x| acc.max(x.abs()));
            state.x[b] - state.x[a] <= CONTACT_REL_TOL * scale
        };
        let mut cluster = vec![i, i + 1];
        if i > 0 && touching(i - 1, i) {
            cluster.insert(0, i - 1);
        }
        if i + 2 < n && touching(i + 1, i + 2) {
            cluster.push(i + 2);
        }
        if cluster.len() > 2 {
            return Err(Error::DirectMultipleCollision {
                t: state.t,
                particles: cluster,
            });
        }
    }

    let mut next = state.clone();
    let mut events = Vec::with_capacity(sorted.len());
    for &i in &sorted {
        let coeff = CollisionCoefficient::new(masses.get(i), masses.get(i + 1)).map_err(|_| {
            Error::ZeroPairMass {
                i,
                j: i + 1,
                mi: masses.get(i),
                mj: masses.get(i + 1),
            }
        })?;
        let contact = 0.5 * (state.x[i] + state.x[i + 1]);
        let before = [state.v[i], state.v[i + 1]];
        let (wi, wj) = coeff.apply(before[0], before[1]);
        next.x[i] = contact;
        next.x[i + 1] = contact;
        next.v[i] = wi;
        next.v[i + 1] = wj;
        events.push(CollisionEvent {
            t: state.t,
            dt: 0.0,
            pair: [i, i + 1],
            v_before: before,
            v_after: [wi, wj],
            x_contact: contact,
        });
    }
    Ok((next, events))
}

/// Stopping rules and collapse-detector parameters for [`simulate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationLimits {
    pub max_events: u64,
    /// Absolute time horizon; `None` runs until the dynamics stop.
    pub t_max: Option<f64>,
    /// Largest block length (in collision instants) the collapse detector
    /// compares.
    pub collapse_window: usize,
    /// Required contraction ratio between consecutive blocks.
    pub collapse_theta: f64,
    /// Collapse is declared once the extrapolated remaining time falls below
    /// this fraction of the elapsed time.
    pub collapse_eps: f64,
}

impl Default for SimulationLimits {
    fn default() -> Self {
        Self {
            max_events: 1_000_000,
            t_max: None,
            collapse_window: 32,
            collapse_theta: 0.95,
            collapse_eps: 1e-12,
        }
    }
}

/// Runs the event-driven simulation from `initial` until free flight, a
/// detected collapse, a multiple collision, or the event budget.
pub fn simulate(
    masses: &MassVector,
    initial: &ParticleState,
    limits: &SimulationLimits,
) -> Result<Trajectory> {
    if let Some((i, j)) = masses.zero_pair_sum() {
        return Err(Error::ZeroPairMass {
            i,
            j,
            mi: masses.get(i),
            mj: masses.get(j),
        });
    }
    masses.check_dim(&initial.x)?;
    masses.check_dim(&initial.v)?;
    let checked = ParticleState::new(initial.t, initial.x.clone(), initial.v.clone())?;

    let mut state = checked.clone();
    let mut events: Vec<CollisionEvent> = Vec::new();
    let mut detector = CollapseDetector::new(masses.len(), limits);
    let t_max = limits.t_max.unwrap_or(f64::INFINITY);

    let termination = loop {
        if events.len() as u64 >= limits.max_events {
            break Termination::EventBudgetExhausted { t: state.t };
        }
        let Some(next) = next_collision(&state, SIMULTANEITY_REL_TOL) else {
            break Termination::FreeFlight {
                after: state.t,
                horizon: None,
            };
        };
        if next.t > t_max {
            break Termination::FreeFlight {
                after: state.t,
                horizon: Some(t_max),
            };
        }
        state.advance(next.dt);
        let (after, mut batch) = match step(masses, &state, &next.pairs) {
            Ok(r) => r,
            Err(Error::DirectMultipleCollision { t, particles }) => {
                break Termination::DirectMultipleCollision { t, particles };
            }
            Err(e) => return Err(e),
        };
        batch[0].dt = next.dt;
        state = after;
        events.append(&mut batch);

        if let Some((t_star, estimate_error)) = detector.push(state.t - checked.t, next.dt, &next.pairs) {
            debug!(
                "collapse detected after {} events: t* = {t_star}, error {estimate_error:e}",
                events.len()
            );
            break Termination::CollapseDetected {
                t_star: checked.t + t_star,
                estimate_error,
            };
        }
    };

    Ok(Trajectory {
        initial: checked,
        events,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mv(m: &[f64]) -> MassVector {
        MassVector::new(m.to_vec()).unwrap()
    }

    fn st(x: &[f64], v: &[f64]) -> ParticleState {
        ParticleState::new(0.0, x.to_vec(), v.to_vec()).unwrap()
    }

    #[test]
    fn inertia_examples() {
        let g = mv(&[1.0, -0.5, 1.0]);
        assert_eq!(moment_of_inertia(&g, &[0.0; 3]).unwrap(), 0.0);
        assert_eq!(moment_of_inertia(&g, &[-1.0, 0.0, 1.0]).unwrap(), 2.0);
        assert_eq!(moment_of_inertia(&mv(&[1.0, 1.0]), &[1.0, 2.0]).unwrap(), 5.0);
    }

    #[test]
    fn center_of_mass_examples() {
        let c = center_of_mass_frame(&mv(&[1.0, 1.0]), &st(&[0.0, 2.0], &[0.0, 0.0])).unwrap();
        assert_eq!(c.x, vec![-1.0, 1.0]);

        let g = mv(&[1.0, -0.5, 1.0]);
        let c = center_of_mass_frame(&g, &st(&[-1.0, 0.0, 2.0], &[0.0; 3])).unwrap();
        let expected = [-5.0 / 3.0, -2.0 / 3.0, 4.0 / 3.0];
        for (a, b) in c.x.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }

        let centered = st(&[-1.0, 0.0, 1.0], &[0.0, 2.0, 1.0]);
        let c = center_of_mass_frame(&g, &centered).unwrap();
        assert_eq!(c, centered);

        let zero = MassVector::for_analysis(vec![1.0, -1.0]).unwrap();
        assert_eq!(
            center_of_mass_frame(&zero, &st(&[0.0, 1.0], &[0.0, 0.0])),
            Err(Error::ZeroTotalMass)
        );
    }

    #[test]
    fn next_collision_examples() {
        assert_eq!(next_collision(&st(&[0.0, 1.0, 2.0], &[0.5; 3]), 1e-12), None);
        let nc = next_collision(&st(&[0.0, 1.0], &[1.0, 0.0]), 1e-12).unwrap();
        assert_eq!((nc.t, nc.pairs), (1.0, vec![0]));
        let nc = next_collision(&st(&[0.0, 1.0, 2.0, 3.0], &[1.0, 0.0, 1.0, 0.0]), 1e-12).unwrap();
        assert_eq!((nc.t, nc.pairs), (1.0, vec![0, 2]));
    }

    #[test]
    fn unordered_state_is_rejected() {
        assert!(matches!(
            ParticleState::new(0.0, vec![1.0, 0.0], vec![0.0, 0.0]),
            Err(Error::Unordered { index: 0, .. })
        ));
    }

    #[test]
    fn step_examples() {
        let (s, ev) = step(&mv(&[1.0, 1.0]), &st(&[0.5, 0.5], &[1.0, -1.0]), &[0]).unwrap();
        assert_eq!(s.v, vec![-1.0, 1.0]);
        assert_eq!(ev.len(), 1);

        let g = mv(&[1.0, -0.5, 1.0]);
        let (s, ev) = step(&g, &st(&[0.0, 0.0, 1.0], &[0.0, -1.0, 0.0]), &[0]).unwrap();
        assert_eq!(s.v, vec![2.0, 3.0, 0.0]);
        assert_eq!(ev[0].v_before, [0.0, -1.0]);
        assert_eq!(ev[0].v_after, [2.0, 3.0]);

        let triple = st(&[1.0, 1.0, 1.0], &[1.0, 0.0, -1.0]);
        assert!(matches!(
            step(&mv(&[1.0, 1.0, 1.0]), &triple, &[0, 1]),
            Err(Error::DirectMultipleCollision { .. })
        ));
        // a resting neighbour in contact also makes it a multiple collision
        let touching = st(&[1.0, 1.0, 1.0], &[1.0, 0.0, 0.0]);
        assert!(matches!(
            step(&mv(&[1.0, 1.0, 1.0]), &touching, &[0]),
            Err(Error::DirectMultipleCollision { .. })
        ));
    }

    #[test]
    fn simulate_two_equal_masses() {
        let traj = simulate(
            &mv(&[1.0, 1.0]),
            &st(&[0.0, 1.0], &[1.0, -1.0]),
            &SimulationLimits::default(),
        )
        .unwrap();
        assert_eq!(traj.events.len(), 1);
        assert_eq!(traj.events[0].t, 0.5);
        assert_eq!(traj.termination, Termination::FreeFlight {
                after: 0.5,
                horizon: None
            });
    }

    #[test]
    fn simulate_reports_triple_collision() {
        let traj = simulate(
            &mv(&[1.0, 2.0, 1.0]),
            &st(&[0.0, 1.0, 2.0], &[1.0, 0.0, -1.0]),
            &SimulationLimits::default(),
        )
        .unwrap();
        assert!(matches!(
            traj.termination,
            Termination::DirectMultipleCollision { t, .. } if t == 1.0
        ));
    }

    #[test]
    fn simulate_respects_budget_and_horizon() {
        let g = mv(&[1.0, -0.5, 1.0]);
        let s = st(&[-1.0, 0.0, 1.0], &[0.0, 2.0, 0.0]);
        let limits = SimulationLimits {
            max_events: 3,
            ..Default::default()
        };
        let traj = simulate(&g, &s, &limits).unwrap();
        assert_eq!(traj.events.len(), 3);
        assert!(matches!(traj.termination, Termination::EventBudgetExhausted { .. }));

        let limits = SimulationLimits {
            t_max: Some(0.4),
            ..Default::default()
        };
        let traj = simulate(&g, &s, &limits).unwrap();
        assert!(traj.events.iter().all(|e| e.t <= 0.4));
        assert!(matches!(traj.termination, Termination::FreeFlight { .. }));
    }

    #[test]
    fn simulate_rejects_zero_pair_sum() {
        let m = MassVector::for_analysis(vec![1.0, -1.0, 3.0]).unwrap();
        assert!(matches!(
            simulate(&m, &st(&[0.0, 1.0, 2.0], &[0.0; 3]), &SimulationLimits::default()),
            Err(Error::ZeroPairMass { .. })
        ));
    }

    #[test]
    fn cone_positivity_examples() {
        let g = mv(&[1.0, -0.5, 1.0]);
        assert!(cone_positivity_check(&g, &[0.0; 3]).unwrap());
        assert!(cone_positivity_check(&g, &[-1.0, 0.0, 1.0]).unwrap());
        assert!(matches!(
            cone_positivity_check(&g, &[1.0, 0.0, -1.0]),
            Err(Error::Unordered { .. })
        ));
        assert!(matches!(
            cone_positivity_check(&g, &[0.0, 0.0, 1.0]),
            Err(Error::Precondition(_))
        ));
    }
}

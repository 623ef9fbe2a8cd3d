//! Collapse detection during a run and collapse-time prediction from the
//! initial data.
//!
//! Along any solution the moment of inertia is the quadratic
//! `p(t) = I(x0) + 2 t B(x0, v0) + 2 t^2 E`, because undoing the collisions
//! turns the motion into a straight line and collisions preserve `Q`. For the
//! negative-gas systems `I` is positive on the ordered cone of the
//! center-of-mass frame, so a root of `p` is a time beyond which the
//! solution cannot continue.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{center_of_mass_frame, ParticleState, SimulationLimits};
use crate::error::Result;
use crate::forms::{self, MassVector};

/// `p(t) = i0 + 2 b0 t + 2 energy t^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InertiaPolynomial {
    pub i0: f64,
    pub b0: f64,
    pub energy: f64,
}

impl InertiaPolynomial {
    pub fn from_state(masses: &MassVector, state: &ParticleState) -> Result<Self> {
        Ok(Self {
            i0: forms::quadratic(masses, &state.x)?,
            b0: forms::bilinear(masses, &state.x, &state.v)?,
            energy: forms::kinetic_energy(masses, &state.v)?,
        })
    }

    /// Coefficients `[I0, 2B(x0,v0), 2E]` in increasing degree.
    pub fn coeffs(&self) -> [f64; 3] {
        [self.i0, 2.0 * self.b0, 2.0 * self.energy]
    }

    pub fn eval(&self, t: f64) -> f64 {
        let [c0, c1, c2] = self.coeffs();
        c0 + t * (c1 + t * c2)
    }

    /// Real roots in increasing order. `energy_scale` and `cross_scale` set
    /// the thresholds below which the quadratic and linear terms count as
    /// absent.
    pub fn roots(&self, energy_scale: f64, cross_scale: f64) -> Vec<f64> {
        let [c0, c1, c2] = self.coeffs();
        if c2.abs() <= 1e-14 * energy_scale {
            if c1.abs() <= 1e-14 * cross_scale {
                return Vec::new();
            }
            return vec![-c0 / c1];
        }
        let disc = c1 * c1 - 4.0 * c2 * c0;
        if disc < 0.0 {
            return Vec::new();
        }
        // cancellation-free form
        let sign = if c1 >= 0.0 { 1.0 } else { -1.0 };
        let q = -0.5 * (c1 + sign * disc.sqrt());
        let mut r = if q == 0.0 {
            vec![0.0, 0.0]
        } else {
            vec![q / c2, c0 / q]
        };
        r.sort_by(f64::total_cmp);
        r
    }
}

/// Prediction of the collapse times of a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapsePrediction {
    /// Inertia polynomial in the frame the state was given in.
    pub raw: InertiaPolynomial,
    /// Inertia polynomial in the center-of-mass frame (equal to `raw` when
    /// the total mass vanishes and no such frame exists).
    pub polynomial: InertiaPolynomial,
    /// Real roots of `polynomial`, increasing.
    pub roots: Vec<f64>,
    /// The masses satisfy the negative-gas condition, so the roots are
    /// collapse times.
    pub gas_neg: bool,
    /// All velocities equal: nothing ever collides and no prediction applies.
    pub trivial: bool,
    pub centered: bool,
}

impl CollapsePrediction {
    /// `[I0, 2B(x0,v0), 2E]` of the center-of-mass polynomial.
    pub fn p_coeffs(&self) -> [f64; 3] {
        self.polynomial.coeffs()
    }

    pub fn energy(&self) -> f64 {
        self.polynomial.energy
    }

    pub fn applicable(&self) -> bool {
        self.gas_neg && !self.trivial
    }

    /// Earliest positive root, measured from the state's time.
    pub fn forward(&self) -> Option<f64> {
        self.roots.iter().copied().find(|&r| r > 0.0)
    }

    /// Latest negative root.
    pub fn backward(&self) -> Option<f64> {
        self.roots.iter().copied().rev().find(|&r| r < 0.0)
    }
}

/// Computes `p(t)` and its roots. Roots are relative to `state.t`.
pub fn predict_collapse(masses: &MassVector, state: &ParticleState) -> Result<CollapsePrediction> {
    let raw = InertiaPolynomial::from_state(masses, state)?;
    let trivial = state.is_trivial();
    let (frame, centered) = match center_of_mass_frame(masses, state) {
        Ok(c) => (c, true),
        Err(_) => (state.clone(), false),
    };
    let polynomial = InertiaPolynomial::from_state(masses, &frame)?;
    let m = masses.as_slice();
    let energy_scale: f64 = m.iter().zip(&frame.v).map(|(m, v)| m.abs() * v * v).sum();
    let cross_scale: f64 = m
        .iter()
        .zip(frame.x.iter().zip(&frame.v))
        .map(|(m, (x, v))| (m * x * v).abs())
        .sum();
    let roots = if trivial {
        Vec::new()
    } else {
        polynomial.roots(energy_scale, cross_scale)
    };
    Ok(CollapsePrediction {
        raw,
        polynomial,
        roots,
        gas_neg: forms::gas_neg(masses),
        trivial,
        centered,
    })
}

/// Watches the gaps between collision instants for geometric accumulation.
///
/// For every block length `L` from `N - 1` up to `collapse_window`, the sums
/// of the last three blocks of `L` gaps are compared. Collapse is declared
/// when
///
/// - both block ratios are at most `collapse_theta` and within a factor
///   [`RATIO_SPREAD`] of each other,
/// - every adjacent pair collides inside each of the three blocks (collapses
///   of negative-gas systems are global, so a shrinking sub-cluster alone is
///   a transient),
/// - the geometric tail `S r / (1 - r)` is below `collapse_eps` times the
///   elapsed time.
#[derive(Debug, Clone)]
pub struct CollapseDetector {
    /// Recent gaps with the pairs that collided at the end of each gap.
    recent: VecDeque<(f64, Vec<usize>)>,
    seen_first: bool,
    min_block: usize,
    max_block: usize,
    theta: f64,
    eps: f64,
    suffix: Vec<f64>,
    covered: Vec<bool>,
}

/// Largest accepted quotient between the two block ratios.
pub const RATIO_SPREAD: f64 = 4.0;

impl CollapseDetector {
    pub fn new(particles: usize, limits: &SimulationLimits) -> Self {
        let pairs = particles.saturating_sub(1).max(1);
        let max_block = limits.collapse_window.max(pairs);
        Self {
            recent: VecDeque::with_capacity(3 * max_block + 1),
            seen_first: false,
            min_block: pairs,
            max_block,
            theta: limits.collapse_theta,
            eps: limits.collapse_eps,
            suffix: Vec::with_capacity(3 * max_block + 1),
            covered: vec![false; pairs],
        }
    }

    /// Records a collision instant reached after `gap` of free flight, at
    /// `elapsed` time since the start, where the pairs `(i, i + 1)` for `i`
    /// in `pairs` collided. Returns the extrapolated collapse time (relative
    /// to the start) and an error estimate once collapse is evident.
    pub fn push(&mut self, elapsed: f64, gap: f64, pairs: &[usize]) -> Option<(f64, f64)> {
        if !self.seen_first {
            // flight time to the first collision is not an inter-event gap
            self.seen_first = true;
            return None;
        }
        if self.recent.len() == 3 * self.max_block {
            self.recent.pop_front();
        }
        self.recent.push_back((gap, pairs.to_vec()));
        let depth = self.recent.len();
        if depth < 3 * self.min_block {
            return None;
        }

        // suffix[k] = sum of the last k gaps, accumulated smallest first
        self.suffix.clear();
        self.suffix.push(0.0);
        let mut acc = 0.0;
        for (g, _) in self.recent.iter().rev() {
            acc += g;
            self.suffix.push(acc);
        }

        let limit = self.eps * elapsed;
        for len in self.min_block..=self.max_block {
            if 3 * len > depth {
                break;
            }
            let s0 = self.suffix[len];
            let s1 = self.suffix[2 * len] - self.suffix[len];
            let s2 = self.suffix[3 * len] - self.suffix[2 * len];
            if !(s1 > 0.0 && s2 > 0.0) {
                continue;
            }
            let (r0, r1) = (s0 / s1, s1 / s2);
            if r0 > self.theta || r1 > self.theta {
                continue;
            }
            if r0 * RATIO_SPREAD < r1 || r1 * RATIO_SPREAD < r0 {
                continue;
            }
            let tail = s0 * r0 / (1.0 - r0);
            if tail > limit || !self.blocks_are_global(len) {
                continue;
            }
            let alt = s0 * r1 / (1.0 - r1);
            let error = (alt - tail).abs() + f64::EPSILON * elapsed;
            return Some((elapsed + tail, error));
        }
        None
    }

    fn blocks_are_global(&mut self, len: usize) -> bool {
        let depth = self.recent.len();
        (0..3).all(|b| {
            self.covered.iter_mut().for_each(|c| *c = false);
            for (_, pairs) in self.recent.range(depth - (b + 1) * len..depth - b * len) {
                for &i in pairs {
                    if let Some(c) = self.covered.get_mut(i) {
                        *c = true;
                    }
                }
            }
            self.covered.iter().all(|c| *c)
        })
    }
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
    fn symmetric_graviton_prediction() {
        let p = predict_collapse(&mv(&[1.0, -0.5, 1.0]), &st(&[-1.0, 0.0, 1.0], &[0.0, 2.0, 0.0]))
            .unwrap();
        // the state carries momentum 1, so the center-of-mass frame differs
        assert_eq!(p.raw.coeffs(), [2.0, 0.0, -2.0]);
        assert!(p.gas_neg && p.applicable());
        assert_eq!(p.roots.len(), 2);
        assert!(p.roots[0] < 0.0 && p.roots[1] > 0.0);
    }

    #[test]
    fn centered_graviton_roots_are_plus_minus_one() {
        // momentum-free velocities with E = -1 on the same positions
        let m = mv(&[1.0, -0.5, 1.0]);
        let a = 1.0 / 3.0_f64.sqrt();
        let s = st(&[-1.0, 0.0, 1.0], &[a, 4.0 * a, a]);
        let p = predict_collapse(&m, &s).unwrap();
        let [c0, c1, c2] = p.p_coeffs();
        assert_eq!((c0, c1), (2.0, 0.0));
        assert!((c2 + 2.0).abs() < 1e-14);
        assert!((p.forward().unwrap() - 1.0).abs() < 1e-14);
        assert!((p.backward().unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_energy_branch_is_linear() {
        let r3 = 3.0_f64.sqrt();
        let m = mv(&[1.0, -0.5, 1.0]);
        let s = st(&[-1.0, 0.0, 1.0], &[(1.0 + r3) / 2.0, 2.0, (1.0 - r3) / 2.0]);
        let p = predict_collapse(&m, &s).unwrap();
        assert!(p.energy().abs() < 1e-14);
        assert_eq!(p.roots.len(), 1);
        assert!((p.roots[0] - 1.0 / r3).abs() < 1e-14);
    }

    #[test]
    fn trivial_solution_has_no_prediction() {
        let p = predict_collapse(&mv(&[1.0, -0.5, 1.0]), &st(&[-1.0, 0.0, 1.0], &[0.7; 3])).unwrap();
        assert!(p.trivial && !p.applicable());
        assert!(p.roots.is_empty());
    }

    #[test]
    fn positive_energy_gas_neg_has_a_root() {
        let m = mv(&[1.0, -0.5, 1.0]);
        let s = st(&[-1.0, 0.0, 1.0], &[1.0, 0.5, -0.75]);
        let p = predict_collapse(&m, &s).unwrap();
        assert!(p.energy() > 0.0);
        assert!(!p.roots.is_empty());
    }

    #[test]
    fn root_finder_handles_cancellation() {
        let p = InertiaPolynomial { i0: 1e-12, b0: -1e4, energy: 0.5 };
        let r = p.roots(1.0, 1.0);
        assert_eq!(r.len(), 2);
        for root in r {
            assert!(p.eval(root).abs() < 1e-10 * (1.0 + root.abs() * 2e4));
        }
        assert!((p.roots(1.0, 1.0)[0] - 5e-17).abs() < 1e-25);
    }

    #[test]
    fn detector_finds_geometric_accumulation() {
        let limits = SimulationLimits::default();
        let mut d = CollapseDetector::new(3, &limits);
        let (mut t, mut g) = (0.0, 0.5);
        let mut found = None;
        for k in 0..400 {
            t += g;
            if let Some(hit) = d.push(t, g, &[k % 2]) {
                found = Some(hit);
                break;
            }
            g *= 0.6;
        }
        let (t_star, err) = found.expect("collapse not detected");
        // first gap is skipped, the rest sum to 0.5 / 0.4 * 0.6 ... analytically 1.25
        assert!((t_star - 1.25).abs() < 1e-12, "{t_star}");
        assert!(err < 1e-10);
    }

    #[test]
    fn detector_ignores_steady_gaps() {
        let limits = SimulationLimits::default();
        let mut d = CollapseDetector::new(3, &limits);
        let mut t = 0.0;
        for k in 0..1000 {
            let g = if k % 2 == 0 { 0.3 } else { 0.01 };
            t += g;
            assert!(d.push(t, g, &[k % 2]).is_none());
        }
    }
}

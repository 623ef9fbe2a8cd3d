//! Seeded generators of random mass systems and initial data.
//!
//! Every generator keeps all pair sums and all masses at least
//! [`MIN_REL_SEPARATION`] times the largest mass away from zero, so the
//! collision coefficients stay bounded.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::forms::{self, MassVector};
use crate::simulator::{center_of_mass_frame, ParticleState};

pub const MIN_REL_SEPARATION: f64 = 0.05;

/// Deterministic generator used by the examples, tests and the CLI.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn well_separated(m: &[f64]) -> bool {
    let scale = m.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let floor = MIN_REL_SEPARATION * scale;
    m.iter().all(|x| x.abs() >= floor)
        && m.iter().enumerate().all(|(i, a)| m[i + 1..].iter().all(|b| (a + b).abs() >= floor))
}

fn accept(m: Vec<f64>, check: impl Fn(&MassVector) -> bool) -> Option<MassVector> {
    if !well_separated(&m) {
        return None;
    }
    MassVector::new(m).ok().filter(check)
}

/// `n` weights in `[0.2, 1]` normalised to sum to one.
fn split<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Masses with `B` definite on `P0`: all of one sign, or exactly one mass
/// carrying the sign of the total.
pub fn definite_masses<R: Rng>(rng: &mut R, n: usize) -> MassVector {
    loop {
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let m: Vec<f64> = if rng.random_bool(0.5) {
            (0..n).map(|_| sign * rng.random_range(0.2..2.0)).collect()
        } else {
            let mut m: Vec<f64> = (0..n).map(|_| -sign * rng.random_range(0.2..1.0)).collect();
            let others: f64 = m.iter().map(|x| x.abs()).sum();
            let k = rng.random_range(0..n);
            m[k] = sign * others * rng.random_range(1.2..2.0);
            m
        };
        if let Some(mv) = accept(m, forms::is_definite_on_p0) {
            return mv;
        }
    }
}

/// Toy graviton: positive end masses, negative interior whose total
/// magnitude is below both end masses.
pub fn graviton_masses<R: Rng>(rng: &mut R, n: usize) -> MassVector {
    assert!(n >= 3, "a graviton needs at least three particles");
    loop {
        let m1: f64 = rng.random_range(0.5..2.0);
        let mn = rng.random_range(0.5..2.0);
        let total = m1.min(mn) * rng.random_range(0.15..0.9);
        let mut m = vec![m1];
        m.extend(split(rng, n - 2).into_iter().map(|w| -w * total));
        m.push(mn);
        if let Some(mv) = accept(m, forms::is_graviton) {
            return mv;
        }
    }
}

/// Compressor: one positive mass on the left, negative total mass, and
/// `m_1 + ... + m_{N-1} > 0`.
pub fn compressor_masses<R: Rng>(rng: &mut R, n: usize) -> MassVector {
    assert!(n >= 3, "a compressor needs at least three particles");
    loop {
        let neg: Vec<f64> = (1..n).map(|_| -rng.random_range(0.2..1.0)).collect();
        let inner: f64 = neg[..n - 2].iter().map(|x| x.abs()).sum();
        let last = neg[n - 2].abs();
        let m1 = inner + last * rng.random_range(0.15..0.85);
        let mut m = vec![m1];
        m.extend(neg);
        if let Some(mv) = accept(m, forms::is_compressor) {
            return mv;
        }
    }
}

/// Ordered positions with gaps in `[0.1, 1]` and velocities in `[-1, 1]`.
pub fn bounded_state<R: Rng>(rng: &mut R, n: usize) -> ParticleState {
    let mut x = Vec::with_capacity(n);
    let mut pos = rng.random_range(-1.0..0.0);
    for _ in 0..n {
        x.push(pos);
        pos += rng.random_range(0.1..1.0);
    }
    let v = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    ParticleState::new(0.0, x, v).expect("generated state is ordered and finite")
}

/// Momentum-free initial data at the origin with negative kinetic energy.
///
/// Velocities of negative masses are amplified so that negative energy is
/// common; the draw is repeated until `E < -0.05 Σ |m_i| v_i^2`.
pub fn negative_energy_state<R: Rng>(rng: &mut R, masses: &MassVector) -> Result<ParticleState> {
    let m = masses.as_slice();
    let pos: f64 = m.iter().filter(|x| **x > 0.0).sum();
    let neg: f64 = m.iter().filter(|x| **x < 0.0).map(|x| x.abs()).sum();
    let boost = 2.0 * (pos / neg).sqrt();
    loop {
        let mut s = bounded_state(rng, m.len());
        for (v, mi) in s.v.iter_mut().zip(m) {
            if *mi < 0.0 {
                *v *= boost;
            }
        }
        let c = center_of_mass_frame(masses, &s)?;
        let e = forms::kinetic_energy(masses, &c.v)?;
        let size: f64 = m.iter().zip(&c.v).map(|(mi, v)| mi.abs() * v * v).sum();
        if e < -0.05 * size && !c.is_trivial() {
            return Ok(c);
        }
    }
}

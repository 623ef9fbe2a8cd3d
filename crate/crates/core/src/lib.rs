//! Event-driven simulation and analysis of one-dimensional elastic
//! collisions between point particles whose masses may be negative.
//!
//! Collisions conserve momentum and kinetic energy, so with mixed signs the
//! quadratic form `Q(v) = Σ m_i v_i^2` is indefinite and the usual
//! finiteness results for collisions no longer hold: some systems collapse,
//! with infinitely many collisions in finite time.
//!
//! - [`forms`]: the form `B`, signatures and mass classification.
//! - [`collision`]: the two-body law, collision maps and wall reflections.
//! - [`simulator`]: event-driven runs, collapse detection and prediction.
//! - [`spectral`]: the composed three-particle map and its eigenvalues.
//! - [`gravlimit`]: the vanishing-mass limit of the toy graviton.
//! - [`sampling`]: seeded random systems and initial data.
//! - [`cli`]: the command-line front end.
//!
//! ```
//! use signed_billiards::simulator::{predict_collapse, simulate, SimulationLimits};
//! use signed_billiards::{forms, MassVector, ParticleState, Termination};
//!
//! let masses = MassVector::new(vec![1.0, -0.5, 1.0])?;
//! assert_eq!(forms::classify(&masses).tag, forms::ClassTag::Graviton);
//!
//! let a = 1.0 / 3f64.sqrt();
//! let state = ParticleState::new(0.0, vec![-1.0, 0.0, 1.0], vec![a, 4.0 * a, a])?;
//! let prediction = predict_collapse(&masses, &state)?;
//! let trajectory = simulate(&masses, &state, &SimulationLimits::default())?;
//! let Termination::CollapseDetected { t_star, .. } = trajectory.termination else {
//!     panic!("a graviton with negative energy collapses");
//! };
//! assert!((t_star - prediction.forward().unwrap()).abs() < 1e-6);
//! # Ok::<(), signed_billiards::Error>(())
//! ```

// `!(a < b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod collision;
pub mod error;
pub mod forms;
pub mod gravlimit;
pub mod sampling;
pub mod simulator;
pub mod spectral;

pub use error::{Error, Result};
pub use forms::MassVector;
pub use simulator::{simulate, ParticleState, SimulationLimits, Termination, Trajectory};

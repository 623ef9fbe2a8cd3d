//! A three-particle graviton with negative kinetic energy: the predicted
//! collapse time from the inertia polynomial against the simulated one.
//!
//! Run with `cargo run --example graviton_collapse`.

use signed_billiards::simulator::{predict_collapse, simulate, SimulationLimits};
use signed_billiards::{MassVector, ParticleState};

fn main() -> signed_billiards::Result<()> {
    let masses = MassVector::new(vec![1.0, -0.5, 1.0])?;
    let a = 1.0 / 3f64.sqrt();
    let state = ParticleState::new(0.0, vec![-1.0, 0.0, 1.0], vec![a, 4.0 * a, a])?;

    let prediction = predict_collapse(&masses, &state)?;
    let [i0, b2, e2] = prediction.p_coeffs();
    println!("p(t) = {i0:.6} + {b2:.6} t + {e2:.6} t^2, roots {:?}", prediction.roots);

    let traj = simulate(&masses, &state, &SimulationLimits::default())?;
    println!("{} collisions, {:?}", traj.events.len(), traj.termination);
    for e in traj.events.iter().take(6) {
        println!("  t = {:.12}  pair {:?}  v -> {:?}", e.t, e.pair, e.v_after);
    }
    if let (Some(t_star), Some(s2)) = (traj.collapse_time(), prediction.forward()) {
        println!("simulated t* = {t_star:.15}, predicted s2 = {s2:.15}");
    }
    Ok(())
}

//! A compressor: one positive mass pushes a chain of negative masses. In the
//! centre-of-mass frame every particle stays at or left of the origin while
//! the system collapses.
//!
//! Run with `cargo run --example compressor`.

use signed_billiards::simulator::{center_of_mass_frame, simulate, SimulationLimits};
use signed_billiards::{MassVector, ParticleState};

fn main() -> signed_billiards::Result<()> {
    let masses = MassVector::new(vec![1.0, -0.4, -0.4, -0.4])?;
    let start = ParticleState::new(0.0, vec![-2.0, -0.5, 0.5, 2.0], vec![1.0, 0.0, 0.0, 0.0])?;
    let state = center_of_mass_frame(&masses, &start)?;
    println!("centred start x = {:?}", state.x);

    let traj = simulate(&masses, &state, &SimulationLimits::default())?;
    let rightmost = traj
        .event_states()
        .iter()
        .flat_map(|s| s.x.clone())
        .fold(f64::NEG_INFINITY, f64::max);
    println!("{} collisions, {:?}", traj.events.len(), traj.termination);
    println!("largest position over all collisions: {rightmost:e}");
    Ok(())
}

//! Runs a random four-particle system drawn from a seed and writes the
//! event log as JSON Lines, the same format as the `simulate` subcommand.
//!
//! Run with `cargo run --example event_log [seed]`.

use std::io::Write;

use signed_billiards::sampling;
use signed_billiards::simulator::{simulate, SimulationLimits};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(7);
    let mut rng = sampling::rng(seed);
    let masses = sampling::graviton_masses(&mut rng, 4);
    let state = sampling::negative_energy_state(&mut rng, &masses)?;
    eprintln!("masses {:?}", masses.as_slice());
    eprintln!("x {:?}\nv {:?}", state.x, state.v);

    let traj = simulate(&masses, &state, &SimulationLimits::default())?;
    let mut out = std::io::stdout().lock();
    for e in &traj.events {
        writeln!(out, "{}", serde_json::to_string(e)?)?;
    }
    writeln!(out, "{}", serde_json::to_string(&traj.termination)?)?;
    Ok(())
}

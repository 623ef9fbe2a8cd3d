//! The composed collision map of three particles restricted to the
//! centre-of-mass plane, its eigenvalues, and the decay of the unfolded
//! wall images during a collapse.
//!
//! Run with `cargo run --example spectral_map`.

use signed_billiards::spectral::{composed_map, wall_image_decay};
use signed_billiards::{MassVector, ParticleState};

fn rows(m: &nalgebra::Matrix2<f64>) -> String {
    format!("[[{}, {}], [{}, {}]]", m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}

fn main() -> signed_billiards::Result<()> {
    for m in [[1.0, 1.0, 1.0], [1.0, -0.5, 1.0], [1.0, -0.1, 1.0]] {
        let masses = MassVector::new(m.to_vec())?;
        let map = composed_map(&masses)?;
        println!("masses {m:?}");
        println!("  A1 = {}", rows(&map.a1));
        println!("  A2 = {}, det {:.12}", rows(&map.a2), map.det());
        println!("  eigenvalues {:?}", map.eigenvalues);
        if let Some(r) = map.gap_ratio() {
            println!("  limiting ratio of even collision gaps {r:.6e}");
        }
    }

    let masses = MassVector::new(vec![1.0, -0.5, 1.0])?;
    let a = 1.0 / 3f64.sqrt();
    let state = ParticleState::new(0.0, vec![-1.0, 0.0, 1.0], vec![a, 4.0 * a, a])?;
    println!("wall images Q(x0 + t_2k v0): {:?}", wall_image_decay(&masses, &state)?);
    Ok(())
}

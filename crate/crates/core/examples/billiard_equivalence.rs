//! A collision of the pair `(i, i + 1)` is the reflection of the velocity
//! vector across the wall `x_i = x_{i+1}`, taken with respect to the
//! mass-weighted form. This example checks that for a graviton.
//!
//! Run with `cargo run --example billiard_equivalence`.

use signed_billiards::collision::{apply_collision_map, reflect, WallNormal};
use signed_billiards::forms::{self, MassVector};

fn main() -> signed_billiards::Result<()> {
    let masses = MassVector::new(vec![1.0, -0.5, 1.0])?;
    let v = [0.3, -1.0, 0.2];
    for i in 0..2 {
        let normal = WallNormal::new(&masses, i, i + 1)?;
        let reflected = reflect(&masses, &normal, &v)?;
        let mut mapped = v.to_vec();
        apply_collision_map(&masses, i, i + 1, &mut mapped)?;
        println!("pair ({i}, {}): normal {:?}, Q(n) = {}", i + 1, normal.n, normal.norm_sq(&masses));
        println!("  reflection    {reflected:?}");
        println!("  collision map {mapped:?}");
        println!(
            "  Q(v) = {:.15}, Q(w) = {:.15}",
            forms::quadratic(&masses, &v)?,
            forms::quadratic(&masses, &reflected)?
        );
    }
    Ok(())
}

//! Classifies a handful of mass systems and prints the signature of the
//! kinetic form on the centre-of-mass hyperplane.
//!
//! Run with `cargo run --example classify_systems`.

use signed_billiards::forms::{self, MassVector};

fn main() -> signed_billiards::Result<()> {
    let systems: [&[f64]; 6] = [
        &[1.0, 2.0, 3.0],
        &[3.0, -0.5, -0.5, -0.5],
        &[1.0, -0.5, 1.0],
        &[1.0, -0.4, -0.4, -0.4],
        &[1.0, -2.0, 1.0],
        &[1.0, -1.0, 2.0, -2.0],
    ];
    println!("{:<28} {:>10} {:>12} {:>18} {:>8}", "masses", "full", "restricted", "class", "gas_neg");
    for m in systems {
        let masses = MassVector::for_analysis(m.to_vec())?;
        let full = forms::full_signature(&masses);
        let p0 = forms::restricted_signature(&masses);
        let class = forms::classify(&masses);
        let degenerate = if p0.degenerate { "*" } else { "" };
        println!(
            "{:<28} {:>10} {:>12} {:>18} {:>8}",
            format!("{m:?}"),
            format!("({}, {})", full.p, full.q),
            format!("({}, {}){degenerate}", p0.p, p0.q),
            format!("{:?}", class.tag),
            class.gas_neg,
        );
    }
    println!("* degenerate on the hyperplane");
    Ok(())
}

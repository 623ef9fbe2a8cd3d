//! The vanishing-mass limit of the toy graviton: as the negative mass tends
//! to zero at fixed kinetic energy, the outer pair moves in the effective
//! potential `U0 r0² / r²`.
//!
//! Run with `cargo run --release --example graviton_limit`.

use signed_billiards::gravlimit::{self, LimitConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = LimitConfig {
        m2_list: vec![-1e-2, -1e-3, -1e-4, -1e-5],
        ..LimitConfig::default()
    };
    let rows = gravlimit::sweep(&config)?;
    gravlimit::write_csv(&rows, std::io::stdout())?;
    println!("converging: {}", gravlimit::is_converging(&rows, 0.1));

    let run = gravlimit::run_limit_point(&config, -1e-4)?;
    println!("{:>8} {:>12} {:>12} {:>12}", "t", "r", "r_theory", "T+U-E");
    for o in run.samples.iter().step_by(4) {
        println!("{:>8.4} {:>12.8} {:>12.8} {:>12.3e}", o.t, o.r, o.r_theory, o.residual);
    }
    Ok(())
}

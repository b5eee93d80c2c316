//! The shifted-helicoid foliation: leaves, bands and the consistency checks.

use std::error::Error;
use std::f64::consts::PI;

use zmc_surfaces::foliation::{band, boundary_values, foliation_check, leaf_height, leaf_of_point};
use zmc_surfaces::meshio::GridSpec;

pub fn run() -> Result<(), Box<dyn Error>> {
    for x in [1.0, 5.0, 8.0, -4.0] {
        println!(
            "F({x}, 0.5) = {:+.12} (band {})",
            leaf_height(x, 0.5)?,
            band(x)
        );
    }
    for k in -1..=1 {
        let (l, r) = boundary_values(k, 0.7);
        println!("boundary x = {}π: {l:+.15} | {r:+.15}", 2 * k + 1);
    }
    let z = leaf_height(2.0, -1.0)? + 0.25;
    println!(
        "(2, -1, {z:.6}) lies on the leaf t = {}",
        leaf_of_point(2.0, -1.0, z)?
    );

    let grid = GridSpec::with_margin((-3.0 * PI, 3.0 * PI, 61), (-2.0, 2.0, 21), 1e-3)?;
    let (cont, round) = foliation_check(&grid, &[0.0, 0.5, -1.25])?;
    println!(
        "continuity: max {:.1e}, pass {}",
        cont.max_abs_err, cont.pass
    );
    println!(
        "round trip: max {:.1e}, pass {}",
        round.max_abs_err, round.pass
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

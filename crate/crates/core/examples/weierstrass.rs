//! Weierstrass–Enneper points, the associated family, and inversion of the
//! horizontal projection.

use std::error::Error;
use std::f64::consts::PI;

use zmc_surfaces::expr::{AnalyticExpr, C64};
use zmc_surfaces::meshio::{sample_graph_by_inversion, GridSpec};
use zmc_surfaces::reps::{
    associated_family_point, invert_parametrization, we_param_jet, we_point, WEData, WEMode,
};
use zmc_surfaces::zmc::{zmc_numerator_from_jet, SignatureMetric};

pub fn run() -> Result<(), Box<dyn Error>> {
    let enneper = WEData::enneper();
    let zeta = C64::new(0.5, 0.25);
    println!("Enneper X({zeta}) = {:?}", we_point(&enneper, zeta)?);

    for theta in [0.0, PI / 4.0, PI / 2.0] {
        println!(
            "  θ = {theta:.3}: {:?}",
            associated_family_point(&enneper, zeta, theta)?
        );
    }

    // A maximal surface in Lorentz–Minkowski space.
    let max = WEData::new(
        AnalyticExpr::parse("1", "w")?,
        AnalyticExpr::parse("w/2", "w")?,
        WEMode::Maximal,
    );
    let jet = we_param_jet(&max, zeta)?;
    let num = zmc_numerator_from_jet(&jet, SignatureMetric::L3, zeta.re, zeta.im)?;
    println!("maximal data, ZMC numerator in L3: {num:.1e}");

    // Recover ζ from (x, y) and sample z as a graph.
    let p = we_point(&enneper, zeta)?;
    let back = invert_parametrization(&enneper, p[0], p[1], C64::new(0.0, 0.0))?;
    println!("inverted ({:.6}, {:.6}) -> ζ = {back:.12}", p[0], p[1]);
    let grid: GridSpec = "-0.5:0.5:11,-0.5:0.5:11".parse()?;
    let (patch, _) = sample_graph_by_inversion(&enneper, &grid, C64::new(0.0, 0.0))?;
    println!(
        "graph sample: {} of {} points valid",
        patch.valid_count(),
        grid.len()
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

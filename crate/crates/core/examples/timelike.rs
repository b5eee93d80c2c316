//! Timelike minimal surfaces and Born–Infeld solutions from their integral
//! representations, checked with the parametric ZMC numerator.

use std::error::Error;

use zmc_surfaces::expr::AnalyticExpr;
use zmc_surfaces::meshio::GridSpec;
use zmc_surfaces::reps::{bc_point, tlms_point, BCData, TLMSData, TlmsVariant};
use zmc_surfaces::zmc::{parametric_sweep, SignatureMetric};

pub fn run() -> Result<(), Box<dyn Error>> {
    let e = |s: &str, v: &str| AnalyticExpr::parse(s, v);
    let grid: GridSpec = "0.1:0.9:9,0.1:0.9:9".parse()?;

    let mut tlms = TLMSData::new(
        e("1 + u^2", "u")?,
        e("u", "u")?,
        e("2", "v")?,
        e("v^3 - 0.5", "v")?,
    );
    for variant in [TlmsVariant::Null, TlmsVariant::Literal] {
        tlms.variant = variant;
        let r = parametric_sweep(
            "tlms",
            |u, v| tlms_point(&tlms, u, v).map_err(|e| e.to_string()),
            SignatureMetric::L3X,
            &grid,
            1e-4,
            1e-6,
        );
        println!(
            "TLMS {variant:?}: max numerator {:.2e}, pass {}",
            r.max_abs_err, r.pass
        );
    }

    let bc = BCData {
        f: e("r + r^3/3", "r")?,
        g: e("sin(s)", "s")?,
    };
    let grid: GridSpec = "0.1:0.9:9,-0.9:-0.1:9".parse()?;
    let r = parametric_sweep(
        "bc",
        |r, s| bc_point(&bc, r, s).map_err(|e| e.to_string()),
        SignatureMetric::L3P,
        &grid,
        1e-4,
        1e-6,
    );
    println!(
        "Barbishov–Charnikov: max numerator {:.2e}, pass {}",
        r.max_abs_err, r.pass
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

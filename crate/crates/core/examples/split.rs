//! Splitting reduced Weierstrass data into weighted or expression parts whose
//! heights add up.

use std::error::Error;

use zmc_surfaces::expr::{AnalyticExpr, C64};
use zmc_surfaces::reps::{split_weierstrass, split_weierstrass_exprs, we_point, WEData};

pub fn run() -> Result<(), Box<dyn Error>> {
    let data = WEData::reduced(AnalyticExpr::parse("1/(1 - w^4/4)", "w")?);
    let zeta = C64::new(0.4, -0.3);
    let whole = we_point(&data, zeta)?[2];

    let parts = split_weierstrass(&data, &[0.25, 0.75])?;
    let sum: f64 = parts
        .iter()
        .map(|p| we_point(p, zeta).map(|x| x[2]))
        .sum::<Result<f64, _>>()?;
    println!("weights: z = {whole:.15}, Σ z_i = {sum:.15}");

    let exprs = [
        AnalyticExpr::parse("1", "w")?,
        AnalyticExpr::parse("(w^4/4)/(1 - w^4/4)", "w")?,
    ];
    let samples = [C64::new(0.3, 0.1), C64::new(-0.2, 0.5)];
    match split_weierstrass_exprs(&data, &exprs, &samples) {
        Ok(parts) => {
            let sum: f64 = parts
                .iter()
                .map(|p| we_point(p, zeta).map(|x| x[2]))
                .sum::<Result<f64, _>>()?;
            println!("expressions: Σ z_i = {sum:.15}");
        }
        Err(e) => println!("expressions rejected: {e}"),
    }

    if let Err(e) = split_weierstrass(&data, &[0.5, 0.4]) {
        println!("bad weights: {e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

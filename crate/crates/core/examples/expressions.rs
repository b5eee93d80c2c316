//! Parsing, printing, differentiating and evaluating analytic expressions.

use std::error::Error;

use zmc_surfaces::expr::{parse_complex, AnalyticExpr, BivariateExpr, C64};

pub fn run() -> Result<(), Box<dyn Error>> {
    let f = AnalyticExpr::parse("exp(w)/(1 - w^2)", "w")?;
    let w = parse_complex("0.3 + 0.2*i")?;
    println!("f(w)  = {f}");
    println!("f'(w) = {}", f.differentiate());
    println!("f({w}) = {}", f.eval(w)?);
    println!("f'({w}) = {}", f.differentiate().eval(w)?);

    // Poles are reported, not returned as infinities.
    match f.eval(C64::new(1.0, 0.0)) {
        Ok(v) => println!("f(1) = {v}"),
        Err(e) => println!("f(1): {e}"),
    }

    let z = BivariateExpr::parse("log(cos(y)/cos(x))", "x", "y")?;
    let zx = z.partial(0);
    println!(
        "Z_x at (0.4, 0.1) = {} (tan 0.4 = {})",
        zx.eval(C64::from(0.4), C64::from(0.1))?,
        0.4f64.tan()
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

//! Partial sums of the arctangent and cosine-product series.

use std::error::Error;

use zmc_surfaces::catalog::{er_series_partial, SeriesKind};

pub fn run() -> Result<(), Box<dyn Error>> {
    let (a, b): (f64, f64) = (0.7, 1.1);
    let arctan_limit = (a.tanh() / b.tan()).atan();
    let log_limit = (a.cos() / b.cos()).ln();
    println!("limits: {arctan_limit:.15} and {log_limit:.15}");
    for k in [10, 100, 1000, 10_000] {
        let s = er_series_partial(SeriesKind::ArctanSum, a, b, k)?;
        let p = er_series_partial(SeriesKind::CosProduct, a, b, k)?;
        println!(
            "K = {k:>5}: arctan error {:.2e}, product error {:.2e}",
            (s - arctan_limit).abs(),
            (p - log_limit).abs()
        );
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

//! The built-in height surfaces, their domains and their graph residuals.

use std::error::Error;

use zmc_surfaces::catalog::builtin_surface;
use zmc_surfaces::meshio::GridSpec;
use zmc_surfaces::zmc::{graph_jet, graph_residual, residual_sweep, GraphEquation, JetMethod};

pub fn run() -> Result<(), Box<dyn Error>> {
    let cases = [
        ("scherk2", GraphEquation::Minimal),
        ("scherk1(pi/3)", GraphEquation::Minimal),
        ("helicoid", GraphEquation::Minimal),
        ("scherk2max", GraphEquation::Maximal),
        ("scherkBI", GraphEquation::BiSoliton),
        ("leaf(0.5)", GraphEquation::Minimal),
    ];
    for (id, eq) in cases {
        let s = builtin_surface(id)?;
        let (x, y) = (0.4, 0.3);
        let jet = graph_jet(&s, x, y, JetMethod::Exact)?;
        println!(
            "{id:>14} [{}]: Z({x}, {y}) = {:+.12}, {eq} residual {:.1e}",
            s.kind.name(),
            s.eval(x, y)?,
            graph_residual(eq, &jet)
        );
    }

    let s = builtin_surface("scherk2")?;
    println!(
        "scherk2 defined at (1.6, 0)? {}",
        s.in_domain(1.6, 0.0, 0.0)
    );
    println!(
        "scherk2 defined at (2.0, 2.0)? {}",
        s.in_domain(2.0, 2.0, 0.0)
    );

    // A sweep skips the points masked by the grid margin.
    let grid: GridSpec = "-2:2:41,-1:1:21,0.05".parse()?;
    let report = residual_sweep(
        &s,
        GraphEquation::Minimal,
        &grid,
        JetMethod::CentralDiff(1e-3),
        1e-4,
    );
    println!(
        "central-difference sweep: {} points, {} skipped, max {:.2e}, pass {}",
        report.points_checked, report.points_skipped, report.max_abs_err, report.pass
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

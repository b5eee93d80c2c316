//! Sampling surfaces on grids and writing OBJ and CSV files.

use std::error::Error;

use zmc_surfaces::catalog::builtin_surface;
use zmc_surfaces::expr::C64;
use zmc_surfaces::meshio::{sample_patch, write_csv, write_obj, GridSpec, PatchSource};
use zmc_surfaces::reps::{we_point, WEData};

pub fn run() -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir().join("zmc-mesh-example");
    std::fs::create_dir_all(&dir)?;

    let s = builtin_surface("scherk2")?;
    let grid: GridSpec = "-4:4:81,-4:4:81,0.05".parse()?;
    let patch = sample_patch(&PatchSource::Height(&s), &grid)?;
    write_obj(&patch, dir.join("scherk2.obj"))?;
    println!(
        "scherk2: {} of {} vertices, {} quads",
        patch.valid_count(),
        grid.len(),
        patch.quads().len()
    );

    let enneper = WEData::enneper();
    let polar = |r: f64, t: f64| we_point(&enneper, C64::from_polar(r, t)).ok();
    let grid: GridSpec = "0:1.5:31,0:2*pi:61".parse()?;
    let patch = sample_patch(&PatchSource::Parametric(&polar), &grid)?;
    write_csv(&patch, dir.join("enneper.csv"))?;
    println!(
        "enneper: {} vertices written to {}",
        patch.valid_count(),
        dir.display()
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

//! Driving the `zmc` command line from code.

use std::error::Error;

use zmc_surfaces::cli;

pub fn run() -> Result<(), Box<dyn Error>> {
    let report = std::env::temp_dir().join("zmc-cli-example.json");
    let report = report.to_string_lossy();
    let argv = [
        "zmc",
        "identity",
        "verify",
        "--identity",
        "kamien-decomp",
        "--n",
        "3",
        "--params",
        "beta=pi/4",
        "--grid=-1:1:21,0.5:2.5:21",
        "--report",
        &report,
    ];
    let code = cli::run(argv);
    println!("exit code {code}, report in {report}");
    if code != 0 {
        return Err(format!("identity check exited with {code}").into());
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

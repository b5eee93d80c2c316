//! Finite decomposition identities checked on real grids and complex probes.

use std::error::Error;

use zmc_surfaces::catalog::{
    complex_probes, identity_terms, verify_at_points, verify_identity, BranchPolicy, IdentityParams,
};
use zmc_surfaces::meshio::GridSpec;

pub fn run() -> Result<(), Box<dyn Error>> {
    let runs = [
        ("scherk2-decomp", 4, vec![], "-1:1:31,-1:1:31"),
        ("scherk2max-decomp", 3, vec![], "-2:2:21,-2:2:21"),
        ("scherkBI-decomp", 3, vec![], "-1.2:1.2:21,-2:2:21"),
        ("kamien-decomp", 3, vec!["beta=pi/5"], "-1:1:21,0.5:2.5:21"),
        ("helicoid-decomp", 3, vec![], "0.5:2.9:21,-1:1:21"),
        (
            "general-scaled",
            2,
            vec!["a=2;-1", "b=0.1;0", "c=3;1.5", "d=0;0.2"],
            "-1:1:11,-1:1:11",
        ),
    ];
    for (id, n, params, grid) in runs {
        let inst = identity_terms(id, n, &IdentityParams::from_pairs(params)?)?;
        let grid: GridSpec = grid.parse()?;
        let r = verify_identity(&inst, &grid, 1e-9)?;
        println!(
            "{id:>18} n={n}: max {:.2e} over {} points ({})",
            r.max_abs_err, r.points_checked, r.policy
        );
    }

    // Off the real plane the same identity holds up to branch choices.
    let inst = identity_terms("scherk2-decomp", 3, &IdentityParams::default())?;
    let probes = complex_probes(&inst, 200, 0.5, 0.05, 7);
    for policy in [BranchPolicy::Principal, BranchPolicy::Multiplicative] {
        let r = verify_at_points(&inst.clone().with_policy(policy), &probes, 0.05, 1e-9)?;
        println!(
            "complex probes, {policy:>14}: max {:.2e}, pass {}",
            r.max_abs_err, r.pass
        );
    }

    // Grids that touch a singular line are rejected up front.
    let bad: GridSpec = "-pi/2:pi/2:5,0:1:3".parse()?;
    if let Err(e) = verify_identity(&inst, &bad, 1e-9) {
        println!(
            "rejected: {}",
            e.to_string().lines().next().unwrap_or_default()
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

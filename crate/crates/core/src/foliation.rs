//! Piecewise helicoid leaves `z = F(x, y) + t` filling space minus the lines
//! `(2kπ, 0, z)`.
//!
//! On the band `(2k−1)π ≤ x ≤ (2k+1)π`, `F(x, y) = (−1)^k atan(y / (x − 2kπ))`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map};
use thiserror::Error;

use crate::catalog::{HeightSurface, SurfaceDef};
use crate::expr::C64;
use crate::meshio::GridSpec;
use crate::report::{ErrorAccumulator, VerificationReport};

/// Offset used for boundary-straddling pairs.
pub const BOUNDARY_DELTA: f64 = 1e-7;
pub const CONTINUITY_TOL: f64 = 1e-6;
pub const ROUNDTRIP_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FoliationError {
    #[error("({x}, {y}) lies on an excluded line x = 2kπ, y = 0")]
    ExcludedPoint { x: f64, y: f64 },
    #[error("grid has no admissible points")]
    EmptyGrid,
}

/// Band index `k = round(x / 2π)`.
pub fn band(x: f64) -> i64 {
    (x / (2.0 * PI)).round() as i64
}

fn band_value(k: i64, x: f64, y: f64) -> f64 {
    local_value(k, x - 2.0 * k as f64 * PI, y)
}

/// Band-`k` formula in terms of the local offset `s = x − 2kπ`.
fn local_value(k: i64, s: f64, y: f64) -> f64 {
    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign * (y / s).atan()
}

pub fn is_excluded(x: f64, y: f64) -> bool {
    y == 0.0 && (x - 2.0 * band(x) as f64 * PI).abs() < 1e-12
}

pub fn leaf_height(x: f64, y: f64) -> Result<f64, FoliationError> {
    if is_excluded(x, y) {
        return Err(FoliationError::ExcludedPoint { x, y });
    }
    Ok(band_value(band(x), x, y))
}

/// The `t` of the unique leaf through `(x, y, z)`.
pub fn leaf_of_point(x: f64, y: f64, z: f64) -> Result<f64, FoliationError> {
    Ok(z - leaf_height(x, y)?)
}

/// The leaf `z = F(x, y) + t` as a height surface.
pub fn leaf_surface(t: f64) -> HeightSurface {
    HeightSurface::new(SurfaceDef::Leaf { t })
}

/// Both band formulas at `x = (2k+1)π`, each with its local offset taken from
/// the integer band indices (`+π` and `−π`); they agree exactly.
pub fn boundary_values(k: i64, y: f64) -> (f64, f64) {
    let b = 2 * k + 1;
    (
        local_value(k, (b - 2 * k) as f64 * PI, y),
        local_value(k + 1, (b - 2 * (k + 1)) as f64 * PI, y),
    )
}

/// Two reports over the admissible points of `grid`:
///
/// - `foliation-continuity`: `|F(b − δ, y) − F(b + δ, y)|` for every band
///   boundary `b = (2k+1)π` inside the grid's x range (or the nearest one) and
///   every grid `y`, against [`CONTINUITY_TOL`];
/// - `foliation-roundtrip`: `|leaf_of_point(x, y, F(x, y) + t) − t|` for every
///   grid point and every `t` in `t_samples`, against [`ROUNDTRIP_TOL`].
pub fn foliation_check(
    grid: &GridSpec,
    t_samples: &[f64],
) -> Result<(VerificationReport, VerificationReport), FoliationError> {
    let admissible: Vec<(f64, f64)> = grid
        .points()
        .into_iter()
        .filter(|(x, y)| {
            let k = band(*x) as f64;
            (x - 2.0 * k * PI).hypot(*y) >= grid.margin.max(1e-6)
        })
        .collect();
    if admissible.is_empty() {
        return Err(FoliationError::EmptyGrid);
    }
    let lo = ((grid.u_min / PI - 1.0) / 2.0).ceil() as i64;
    let hi = ((grid.u_max / PI - 1.0) / 2.0).floor() as i64;
    let boundaries: Vec<i64> = if lo <= hi {
        (lo..=hi).collect()
    } else {
        vec![band(0.5 * (grid.u_min + grid.u_max))]
    };
    let mut cont = ErrorAccumulator::new();
    for &k in &boundaries {
        let b = (2 * k + 1) as f64 * PI;
        for j in 0..grid.nv {
            let y = grid.v(j);
            let (l, r) = (b - BOUNDARY_DELTA, b + BOUNDARY_DELTA);
            let fl = band_value(band(l), l, y);
            let fr = band_value(band(r), r, y);
            cont.push(
                (fl - fr).abs(),
                &[C64::new(b, 0.0), C64::new(y, 0.0)],
                fl.into(),
                fr.into(),
            );
        }
    }
    let params = |extra: Map<String, serde_json::Value>| {
        let mut m = Map::new();
        m.insert("t_samples".into(), json!(t_samples));
        m.insert("delta".into(), json!(BOUNDARY_DELTA));
        m.extend(extra);
        m
    };
    let mut bmap = Map::new();
    bmap.insert("boundaries".into(), json!(boundaries));
    let continuity = cont.finish(
        "foliation-continuity",
        params(bmap),
        Some(*grid),
        "principal",
        CONTINUITY_TOL,
    );

    let mut round = ErrorAccumulator::new();
    for &(x, y) in &admissible {
        let f = leaf_height(x, y)?;
        for &t in t_samples {
            let back = leaf_of_point(x, y, f + t)?;
            round.push(
                (back - t).abs(),
                &[C64::new(x, 0.0), C64::new(y, 0.0)],
                back.into(),
                t.into(),
            );
        }
    }
    for _ in admissible.len()..grid.len() {
        round.skip();
    }
    let roundtrip = round.finish(
        "foliation-roundtrip",
        params(Map::new()),
        Some(*grid),
        "principal",
        ROUNDTRIP_TOL,
    );
    Ok((continuity, roundtrip))
}

/// Maximum `|leaf_of_point(p) − t|` over `count` random admissible points
/// `p = (x, y, F(x, y) + t)` with `x ∈ [−5π, 5π]`, `y ∈ [−3, 3]`, `t ∈ [−5, 5]`.
pub fn random_roundtrip_error(count: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < count {
        let x = rng.gen_range(-5.0 * PI..5.0 * PI);
        let y = rng.gen_range(-3.0..3.0);
        let t = rng.gen_range(-5.0..5.0);
        let Ok(f) = leaf_height(x, y) else { continue };
        let z = f + t;
        let Ok(back) = leaf_of_point(x, y, z) else {
            continue;
        };
        // re-embedding the recovered leaf must give back the same z
        let z2 = leaf_height(x, y).map(|f| f + back).unwrap_or(f64::NAN);
        worst = worst.max((back - t).abs()).max((z2 - z).abs());
        done += 1;
    }
    worst
}

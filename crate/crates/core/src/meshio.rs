//! Structured sampling grids, surface patches and their OBJ/CSV exports.
//!
//! Both text formats are byte-deterministic: row-major lattice order, LF line
//! endings and every coordinate written with 17 significant digits.

use std::fmt::{self, Write as _};
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::HeightSurface;
use crate::expr::{parse_real, C64};
use crate::reps::{invert_parametrization, we_point, WEData};

pub const DEFAULT_MARGIN: f64 = 0.05;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("invalid grid spec `{spec}`: {reason}")]
    BadGrid { spec: String, reason: String },
    #[error("no valid point on the grid")]
    EmptyGrid,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A `nu × nv` lattice over `[u_min, u_max] × [v_min, v_max]` with a
/// singularity standoff `margin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub u_min: f64,
    pub u_max: f64,
    pub nu: usize,
    pub v_min: f64,
    pub v_max: f64,
    pub nv: usize,
    pub margin: f64,
}

impl GridSpec {
    pub fn new(u: (f64, f64, usize), v: (f64, f64, usize)) -> Result<Self, MeshError> {
        Self::with_margin(u, v, DEFAULT_MARGIN)
    }

    pub fn with_margin(
        (u_min, u_max, nu): (f64, f64, usize),
        (v_min, v_max, nv): (f64, f64, usize),
        margin: f64,
    ) -> Result<Self, MeshError> {
        let g = GridSpec {
            u_min,
            u_max,
            nu,
            v_min,
            v_max,
            nv,
            margin,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), MeshError> {
        let bad = |reason: &str| MeshError::BadGrid {
            spec: self.to_string(),
            reason: reason.to_string(),
        };
        if !(self.u_min < self.u_max && self.v_min < self.v_max) {
            return Err(bad("ranges must satisfy min < max"));
        }
        if self.nu < 2 || self.nv < 2 {
            return Err(bad("at least 2 points per direction"));
        }
        if self.margin.is_nan() || self.margin < 0.0 {
            return Err(bad("margin must be non-negative"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn u(&self, i: usize) -> f64 {
        lattice(self.u_min, self.u_max, self.nu, i)
    }

    pub fn v(&self, j: usize) -> f64 {
        lattice(self.v_min, self.v_max, self.nv, j)
    }

    /// Row-major index: `i * nv + j`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nv + j
    }

    /// All lattice points in row-major order.
    pub fn points(&self) -> Vec<(f64, f64)> {
        (0..self.nu)
            .flat_map(|i| (0..self.nv).map(move |j| (i, j)))
            .map(|(i, j)| (self.u(i), self.v(j)))
            .collect()
    }
}

fn lattice(lo: f64, hi: f64, n: usize, k: usize) -> f64 {
    if k + 1 == n {
        hi
    } else {
        lo + (hi - lo) * (k as f64) / ((n - 1) as f64)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{},{}:{}:{},{}",
            self.u_min, self.u_max, self.nu, self.v_min, self.v_max, self.nv, self.margin
        )
    }
}

/// Parses `umin:umax:nu,vmin:vmax:nv[,margin]`. Bounds may be constant
/// expressions and may use `pi`.
impl FromStr for GridSpec {
    type Err = MeshError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: String| MeshError::BadGrid {
            spec: s.to_string(),
            reason,
        };
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 2 && parts.len() != 3 {
            return Err(bad("expected `umin:umax:nu,vmin:vmax:nv[,margin]`".into()));
        }
        let axis = |text: &str| -> Result<(f64, f64, usize), MeshError> {
            let f: Vec<&str> = text.split(':').map(str::trim).collect();
            if f.len() != 3 {
                return Err(bad(format!("axis `{text}` must be min:max:count")));
            }
            let lo = parse_real(f[0]).map_err(|e| bad(e.to_string()))?;
            let hi = parse_real(f[1]).map_err(|e| bad(e.to_string()))?;
            let n = f[2]
                .parse::<usize>()
                .map_err(|_| bad(format!("count `{}` is not a positive integer", f[2])))?;
            Ok((lo, hi, n))
        };
        let u = axis(parts[0])?;
        let v = axis(parts[1])?;
        let margin = match parts.get(2) {
            Some(m) => parse_real(m).map_err(|e| bad(e.to_string()))?,
            None => DEFAULT_MARGIN,
        };
        GridSpec::with_margin(u, v, margin)
    }
}

/// Structured `nu × nv` patch of points with a validity mask.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePatch {
    pub nu: usize,
    pub nv: usize,
    pub points: Vec<[f64; 3]>,
    pub valid: Vec<bool>,
}

impl SurfacePatch {
    pub fn from_samples(nu: usize, nv: usize, samples: Vec<Option<[f64; 3]>>) -> Self {
        assert_eq!(samples.len(), nu * nv, "sample count must be nu*nv");
        let valid: Vec<bool> = samples
            .iter()
            .map(|s| s.is_some_and(|p| p.iter().all(|c| c.is_finite())))
            .collect();
        let points = samples
            .into_iter()
            .zip(&valid)
            .map(|(s, ok)| if *ok { s.unwrap_or([0.0; 3]) } else { [0.0; 3] })
            .collect();
        SurfacePatch {
            nu,
            nv,
            points,
            valid,
        }
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.nv + j
    }

    /// Cells whose four corners are valid, as lattice indices.
    pub fn quads(&self) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for i in 0..self.nu.saturating_sub(1) {
            for j in 0..self.nv.saturating_sub(1) {
                let q = [
                    self.idx(i, j),
                    self.idx(i + 1, j),
                    self.idx(i + 1, j + 1),
                    self.idx(i, j + 1),
                ];
                if q.iter().all(|k| self.valid[*k]) {
                    out.push(q);
                }
            }
        }
        out
    }
}

/// What to sample.
pub enum PatchSource<'a> {
    /// `(x, y) ↦ (x, y, Z(x, y))`, masked by the surface domain and the grid margin.
    Height(&'a HeightSurface),
    /// Any `(u, v) ↦ (x, y, z)` map; `None` marks the point invalid.
    Parametric(&'a (dyn Fn(f64, f64) -> Option<[f64; 3]> + Sync)),
}

pub fn sample_patch(source: &PatchSource<'_>, grid: &GridSpec) -> Result<SurfacePatch, MeshError> {
    let samples: Vec<Option<[f64; 3]>> = grid
        .points()
        .into_par_iter()
        .map(|(u, v)| match source {
            PatchSource::Height(s) => {
                if !s.in_domain(u, v, grid.margin) {
                    return None;
                }
                s.eval(u, v).ok().map(|z| [u, v, z])
            }
            PatchSource::Parametric(f) => f(u, v),
        })
        .collect();
    let patch = SurfacePatch::from_samples(grid.nu, grid.nv, samples);
    if patch.valid_count() == 0 {
        return Err(MeshError::EmptyGrid);
    }
    Ok(patch)
}

/// Samples the height function `z(x, y)` of Weierstrass–Enneper data over an
/// `(x, y)` grid by inverting `ζ ↦ (x, y)` point by point. Each Newton solve is
/// seeded from the previous point in its row, or from the first point of the
/// previous row, or from `seed`. Points where Newton fails are masked.
///
/// Also returns the recovered parameters `ζ` (NaN where invalid).
pub fn sample_graph_by_inversion(
    data: &WEData,
    grid: &GridSpec,
    seed: C64,
) -> Result<(SurfacePatch, Vec<C64>), MeshError> {
    let mut samples = vec![None; grid.len()];
    let mut zetas = vec![C64::new(f64::NAN, f64::NAN); grid.len()];
    for i in 0..grid.nu {
        for j in 0..grid.nv {
            let guess = [
                (j > 0).then(|| grid.index(i, j - 1)),
                (i > 0).then(|| grid.index(i - 1, j)),
            ]
            .into_iter()
            .flatten()
            .map(|k| zetas[k])
            .find(|z| z.is_finite())
            .unwrap_or(seed);
            let (x, y) = (grid.u(i), grid.v(j));
            if let Ok(zeta) = invert_parametrization(data, x, y, guess) {
                if let Ok(p) = we_point(data, zeta) {
                    let k = grid.index(i, j);
                    samples[k] = Some([x, y, p[2]]);
                    zetas[k] = zeta;
                }
            }
        }
    }
    let patch = SurfacePatch::from_samples(grid.nu, grid.nv, samples);
    if patch.valid_count() == 0 {
        return Err(MeshError::EmptyGrid);
    }
    Ok((patch, zetas))
}

fn push_num(out: &mut String, x: f64) {
    let _ = write!(out, "{x:.16e}");
}

pub fn obj_string(patch: &SurfacePatch) -> String {
    let mut out = String::new();
    let mut vertex_id = vec![0usize; patch.points.len()];
    let mut next = 1;
    for (k, p) in patch.points.iter().enumerate() {
        if !patch.valid[k] {
            continue;
        }
        out.push('v');
        for c in p {
            out.push(' ');
            push_num(&mut out, *c);
        }
        out.push('\n');
        vertex_id[k] = next;
        next += 1;
    }
    for q in patch.quads() {
        let _ = writeln!(
            out,
            "f {} {} {} {}",
            vertex_id[q[0]], vertex_id[q[1]], vertex_id[q[2]], vertex_id[q[3]]
        );
    }
    out
}

pub const CSV_HEADER: &str = "u_index,v_index,x,y,z,valid";

pub fn csv_string(patch: &SurfacePatch) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for i in 0..patch.nu {
        for j in 0..patch.nv {
            let k = patch.idx(i, j);
            let _ = write!(out, "{i},{j}");
            for c in patch.points[k] {
                out.push(',');
                push_num(&mut out, if c.is_finite() { c } else { 0.0 });
            }
            let _ = writeln!(out, ",{}", u8::from(patch.valid[k]));
        }
    }
    out
}

pub fn write_obj(patch: &SurfacePatch, path: impl AsRef<Path>) -> Result<(), MeshError> {
    Ok(write_atomic(path.as_ref(), obj_string(patch).as_bytes())?)
}

pub fn write_csv(patch: &SurfacePatch, path: impl AsRef<Path>) -> Result<(), MeshError> {
    Ok(write_atomic(path.as_ref(), csv_string(patch).as_bytes())?)
}

/// Writes to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

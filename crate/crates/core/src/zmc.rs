//! Derivative jets of graph surfaces, the graph ZMC equations, and a
//! signature-aware parametric ZMC check.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Map};
use thiserror::Error;

use crate::catalog::{HeightSurface, SurfaceDef, SurfaceKind};
use crate::expr::{BivariateExpr, C64};
use crate::meshio::GridSpec;
use crate::report::{ErrorAccumulator, VerificationReport};

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZmcError {
    #[error("({x}, {y}) or its stencil lies outside the domain of `{surface}`")]
    DomainViolation { surface: String, x: f64, y: f64 },
    #[error("no exact jet available for `{0}`")]
    ExactUnavailable(String),
    #[error("first fundamental form is degenerate at ({u}, {v}): EG - F^2 = {det:e}")]
    DegenerateMetric { u: f64, v: f64, det: f64 },
    #[error("sampler failed at ({u}, {v}): {reason}")]
    Sampler { u: f64, v: f64, reason: String },
}

/// Scalars a jet can be built from: `f64` or `C64`.
pub trait JetScalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + From<f64>
{
}

impl<T> JetScalar for T where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + From<f64>
{
}

/// `z` and its partial derivatives up to second order at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphJet<T = f64> {
    pub z: T,
    pub z_x: T,
    pub z_y: T,
    pub z_xx: T,
    pub z_xy: T,
    pub z_yy: T,
}

impl GraphJet<f64> {
    pub fn entries(&self) -> [f64; 6] {
        [self.z, self.z_x, self.z_y, self.z_xx, self.z_xy, self.z_yy]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphEquation {
    Minimal,
    Maximal,
    BiSoliton,
}

impl GraphEquation {
    pub fn name(self) -> &'static str {
        match self {
            GraphEquation::Minimal => "minimal",
            GraphEquation::Maximal => "maximal",
            GraphEquation::BiSoliton => "bi",
        }
    }

    /// The graph equation matching a surface kind, if it has one.
    pub fn for_kind(kind: SurfaceKind) -> Option<Self> {
        match kind {
            SurfaceKind::Minimal => Some(GraphEquation::Minimal),
            SurfaceKind::Maximal => Some(GraphEquation::Maximal),
            SurfaceKind::BiSoliton => Some(GraphEquation::BiSoliton),
            SurfaceKind::Timelike | SurfaceKind::Generic => None,
        }
    }
}

impl fmt::Display for GraphEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for GraphEquation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minimal" => Ok(GraphEquation::Minimal),
            "maximal" => Ok(GraphEquation::Maximal),
            "bi" | "bi-soliton" => Ok(GraphEquation::BiSoliton),
            _ => Err(format!(
                "unknown equation `{s}` (expected minimal, maximal or bi)"
            )),
        }
    }
}

/// Left-hand side of the selected graph equation.
pub fn graph_residual<T: JetScalar>(eq: GraphEquation, jet: &GraphJet<T>) -> T {
    let one = T::from(1.0);
    let two = T::from(2.0);
    let GraphJet {
        z_x,
        z_y,
        z_xx,
        z_xy,
        z_yy,
        ..
    } = *jet;
    match eq {
        GraphEquation::Minimal => {
            (one + z_x * z_x) * z_yy - two * z_x * z_y * z_xy + (one + z_y * z_y) * z_xx
        }
        GraphEquation::Maximal => {
            (one - z_x * z_x) * z_yy + two * z_x * z_y * z_xy + (one - z_y * z_y) * z_xx
        }
        GraphEquation::BiSoliton => {
            (one - z_y * z_y) * z_xx + two * z_x * z_y * z_xy - (one + z_x * z_x) * z_yy
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JetMethod {
    Exact,
    CentralDiff(f64),
}

pub fn graph_jet(
    surface: &HeightSurface,
    x: f64,
    y: f64,
    method: JetMethod,
) -> Result<GraphJet, ZmcError> {
    match method {
        JetMethod::Exact => {
            if !surface.in_domain(x, y, 0.0) {
                return Err(outside(surface, x, y));
            }
            let j = exact_jet(&surface.def, x, y)?;
            let jet = GraphJet {
                z: j.v,
                z_x: j.x,
                z_y: j.y,
                z_xx: j.xx,
                z_xy: j.xy,
                z_yy: j.yy,
            };
            if jet.entries().iter().all(|v| v.is_finite()) {
                Ok(jet)
            } else {
                Err(outside(surface, x, y))
            }
        }
        JetMethod::CentralDiff(h) => central_jet(surface, x, y, h),
    }
}

fn outside(surface: &HeightSurface, x: f64, y: f64) -> ZmcError {
    ZmcError::DomainViolation {
        surface: surface.id.clone(),
        x,
        y,
    }
}

/// Five-point first-derivative weights at offsets -2, -1, 1, 2 (over 12h).
const D1: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
/// Five-point second-derivative weights at offsets -2..=2 (over 12h²).
const D2: [(f64, f64); 5] = [
    (-2.0, -1.0),
    (-1.0, 16.0),
    (0.0, -30.0),
    (1.0, 16.0),
    (2.0, -1.0),
];

fn central_jet(surface: &HeightSurface, x: f64, y: f64, h: f64) -> Result<GraphJet, ZmcError> {
    let f = |dx: f64, dy: f64| -> Result<f64, ZmcError> {
        let (px, py) = (x + dx * h, y + dy * h);
        if !surface.in_domain(px, py, 0.0) {
            return Err(outside(surface, x, y));
        }
        surface.eval(px, py).map_err(|_| outside(surface, x, y))
    };
    let mut jet = GraphJet {
        z: f(0.0, 0.0)?,
        z_x: 0.0,
        z_y: 0.0,
        z_xx: 0.0,
        z_xy: 0.0,
        z_yy: 0.0,
    };
    for (o, w) in D1 {
        jet.z_x += w * f(o, 0.0)?;
        jet.z_y += w * f(0.0, o)?;
    }
    for (o, w) in D2 {
        jet.z_xx += w * f(o, 0.0)?;
        jet.z_yy += w * f(0.0, o)?;
    }
    for (oi, wi) in D1 {
        for (oj, wj) in D1 {
            jet.z_xy += wi * wj * f(oi, oj)?;
        }
    }
    jet.z_x /= 12.0 * h;
    jet.z_y /= 12.0 * h;
    jet.z_xx /= 12.0 * h * h;
    jet.z_yy /= 12.0 * h * h;
    jet.z_xy /= 144.0 * h * h;
    Ok(jet)
}

/// Second-order forward-mode jet in two variables.
#[derive(Clone, Copy, Debug)]
struct J {
    v: f64,
    x: f64,
    y: f64,
    xx: f64,
    xy: f64,
    yy: f64,
}

impl J {
    fn cst(v: f64) -> J {
        J {
            v,
            x: 0.0,
            y: 0.0,
            xx: 0.0,
            xy: 0.0,
            yy: 0.0,
        }
    }

    fn var_x(v: f64) -> J {
        J {
            x: 1.0,
            ..J::cst(v)
        }
    }

    fn var_y(v: f64) -> J {
        J {
            y: 1.0,
            ..J::cst(v)
        }
    }

    fn add(self, o: J) -> J {
        J {
            v: self.v + o.v,
            x: self.x + o.x,
            y: self.y + o.y,
            xx: self.xx + o.xx,
            xy: self.xy + o.xy,
            yy: self.yy + o.yy,
        }
    }

    fn scale(self, s: f64) -> J {
        J {
            v: s * self.v,
            x: s * self.x,
            y: s * self.y,
            xx: s * self.xx,
            xy: s * self.xy,
            yy: s * self.yy,
        }
    }

    fn sub(self, o: J) -> J {
        self.add(o.scale(-1.0))
    }

    fn mul(self, o: J) -> J {
        J {
            v: self.v * o.v,
            x: self.x * o.v + self.v * o.x,
            y: self.y * o.v + self.v * o.y,
            xx: self.xx * o.v + 2.0 * self.x * o.x + self.v * o.xx,
            xy: self.xy * o.v + self.x * o.y + self.y * o.x + self.v * o.xy,
            yy: self.yy * o.v + 2.0 * self.y * o.y + self.v * o.yy,
        }
    }

    /// `g ∘ self` given `g`, `g'`, `g''` at `self.v`.
    fn chain(self, g0: f64, g1: f64, g2: f64) -> J {
        J {
            v: g0,
            x: g1 * self.x,
            y: g1 * self.y,
            xx: g2 * self.x * self.x + g1 * self.xx,
            xy: g2 * self.x * self.y + g1 * self.xy,
            yy: g2 * self.y * self.y + g1 * self.yy,
        }
    }

    fn recip(self) -> J {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    fn div(self, o: J) -> J {
        self.mul(o.recip())
    }

    /// `ln|v|`, which has the derivatives of `ln v`.
    fn ln(self) -> J {
        let r = 1.0 / self.v;
        self.chain(self.v.abs().ln(), r, -r * r)
    }

    fn cos(self) -> J {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    fn cosh(self) -> J {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(c, s, c)
    }

    fn tan(self) -> J {
        let t = self.v.tan();
        let d = 1.0 + t * t;
        self.chain(t, d, 2.0 * t * d)
    }

    fn tanh(self) -> J {
        let t = self.v.tanh();
        let d = 1.0 - t * t;
        self.chain(t, d, -2.0 * t * d)
    }

    fn atan(self) -> J {
        let d = 1.0 / (1.0 + self.v * self.v);
        self.chain(self.v.atan(), d, -2.0 * self.v * d * d)
    }
}

fn exact_jet(def: &SurfaceDef, x: f64, y: f64) -> Result<J, ZmcError> {
    let (jx, jy) = (J::var_x(x), J::var_y(y));
    Ok(match def {
        SurfaceDef::Scherk2 => jy.cos().ln().sub(jx.cos().ln()),
        SurfaceDef::Scherk1 { alpha } => {
            let num = jx.scale(0.5 * alpha.sin()).tanh();
            let den = jy.scale((0.5 * alpha).sin()).tan();
            num.div(den).atan().scale(-1.0 / (0.5 * alpha).cos())
        }
        SurfaceDef::Helicoid => jy.div(jx).atan(),
        SurfaceDef::Scherk2Max => jy.cosh().ln().sub(jx.cosh().ln()),
        SurfaceDef::ScherkBI => jy.cosh().ln().sub(jx.cos().ln()),
        SurfaceDef::Plane { a, b } => jx.scale(*a).add(jy.scale(*b)),
        SurfaceDef::Expr(e) => return expr_jet(e, x, y),
        SurfaceDef::Transformed {
            base,
            a,
            b,
            d,
            factor,
        } => {
            let j = exact_jet(base, (x - b) / a, (y - d) / a)?;
            let s1 = factor / a;
            let s2 = s1 / a;
            J {
                v: factor * j.v,
                x: s1 * j.x,
                y: s1 * j.y,
                xx: s2 * j.xx,
                xy: s2 * j.xy,
                yy: s2 * j.yy,
            }
        }
        SurfaceDef::Leaf { t } => {
            let k = (x / (2.0 * PI)).round();
            let sign = if k.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
            let shifted = jx.sub(J::cst(2.0 * k * PI));
            jy.div(shifted).atan().scale(sign).add(J::cst(*t))
        }
    })
}

fn expr_jet(e: &BivariateExpr, x: f64, y: f64) -> Result<J, ZmcError> {
    let j = expr_jet_complex(e, C64::new(x, 0.0), C64::new(y, 0.0))?;
    let parts = [j.z, j.z_x, j.z_y, j.z_xx, j.z_xy, j.z_yy];
    if parts
        .iter()
        .any(|p| p.im.abs() > 1e-12 * (1.0 + p.re.abs()))
    {
        return Err(ZmcError::ExactUnavailable(format!(
            "expr:{e} is not real at ({x}, {y})"
        )));
    }
    Ok(J {
        v: parts[0].re,
        x: parts[1].re,
        y: parts[2].re,
        xx: parts[3].re,
        xy: parts[4].re,
        yy: parts[5].re,
    })
}

fn expr_jet_complex(e: &BivariateExpr, x: C64, y: C64) -> Result<GraphJet<C64>, ZmcError> {
    let fail = || ZmcError::DomainViolation {
        surface: format!("expr:{e}"),
        x: x.re,
        y: y.re,
    };
    let ex = e.partial(0);
    let ey = e.partial(1);
    let ev = |f: &BivariateExpr| f.eval(x, y).map_err(|_| fail());
    Ok(GraphJet {
        z: ev(e)?,
        z_x: ev(&ex)?,
        z_y: ev(&ey)?,
        z_xx: ev(&ex.partial(0))?,
        z_xy: ev(&ex.partial(1))?,
        z_yy: ev(&ey.partial(1))?,
    })
}

/// Exact jet at a complex point from symbolic differentiation. Available for
/// `expr:` surfaces only.
pub fn graph_jet_complex(
    surface: &HeightSurface,
    x: C64,
    y: C64,
) -> Result<GraphJet<C64>, ZmcError> {
    match &surface.def {
        SurfaceDef::Expr(e) => expr_jet_complex(e, x, y),
        _ => Err(ZmcError::ExactUnavailable(surface.id.clone())),
    }
}

/// Diagonal ambient metric `diag(ε₁, ε₂, ε₃)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignatureMetric {
    pub signs: [i8; 3],
}

impl SignatureMetric {
    /// `dx² + dy² + dz²`
    pub const EUCLID: Self = SignatureMetric { signs: [1, 1, 1] };
    /// `dx² + dy² − dz²`
    pub const L3: Self = SignatureMetric { signs: [1, 1, -1] };
    /// `dx² − dy² + dz²`
    pub const L3P: Self = SignatureMetric { signs: [1, -1, 1] };
    /// `−dx² + dy² + dz²`
    pub const L3X: Self = SignatureMetric { signs: [-1, 1, 1] };

    pub fn name(self) -> &'static str {
        match self.signs {
            [1, 1, 1] => "euclid",
            [1, 1, -1] => "l3",
            [1, -1, 1] => "l3p",
            [-1, 1, 1] => "l3x",
            _ => "custom",
        }
    }

    pub fn inner(self, a: [f64; 3], b: [f64; 3]) -> f64 {
        (0..3).map(|i| f64::from(self.signs[i]) * a[i] * b[i]).sum()
    }
}

impl FromStr for SignatureMetric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euclid" => Ok(Self::EUCLID),
            "l3" => Ok(Self::L3),
            "l3p" => Ok(Self::L3P),
            "l3x" => Ok(Self::L3X),
            _ => Err(format!(
                "unknown metric `{s}` (expected euclid, l3, l3p or l3x)"
            )),
        }
    }
}

impl fmt::Display for SignatureMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// First and second partial derivatives of a parametrization at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamJet {
    pub xu: [f64; 3],
    pub xv: [f64; 3],
    pub xuu: [f64; 3],
    pub xuv: [f64; 3],
    pub xvv: [f64; 3],
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Central-difference [`ParamJet`] of `sampler` at `(u, v)` with step `h`.
pub fn param_jet_fd<F>(sampler: F, u: f64, v: f64, h: f64) -> Result<ParamJet, ZmcError>
where
    F: Fn(f64, f64) -> Result<[f64; 3], String>,
{
    let at = |du: f64, dv: f64| {
        sampler(u + du * h, v + dv * h).map_err(|reason| ZmcError::Sampler { u, v, reason })
    };
    let mut j = ParamJet {
        xu: [0.0; 3],
        xv: [0.0; 3],
        xuu: [0.0; 3],
        xuv: [0.0; 3],
        xvv: [0.0; 3],
    };
    let acc = |dst: &mut [f64; 3], w: f64, p: [f64; 3]| {
        for k in 0..3 {
            dst[k] += w * p[k];
        }
    };
    for (o, w) in D1 {
        acc(&mut j.xu, w / (12.0 * h), at(o, 0.0)?);
        acc(&mut j.xv, w / (12.0 * h), at(0.0, o)?);
    }
    for (o, w) in D2 {
        acc(&mut j.xuu, w / (12.0 * h * h), at(o, 0.0)?);
        acc(&mut j.xvv, w / (12.0 * h * h), at(0.0, o)?);
    }
    for (oi, wi) in D1 {
        for (oj, wj) in D1 {
            acc(&mut j.xuv, wi * wj / (144.0 * h * h), at(oi, oj)?);
        }
    }
    Ok(j)
}

/// Normalized ZMC numerator `(E⟨X_vv,N⟩ − 2F⟨X_uv,N⟩ + G⟨X_uu,N⟩) / ((|E|+|F|+|G|)·|N|)`
/// with `N = diag(ε)(X_u × X_v)`. `(u, v)` is only used in error messages.
pub fn zmc_numerator_from_jet(
    jet: &ParamJet,
    metric: SignatureMetric,
    u: f64,
    v: f64,
) -> Result<f64, ZmcError> {
    let e = metric.inner(jet.xu, jet.xu);
    let f = metric.inner(jet.xu, jet.xv);
    let g = metric.inner(jet.xv, jet.xv);
    let c = cross(jet.xu, jet.xv);
    let n = [0, 1, 2].map(|i| f64::from(metric.signs[i]) * c[i]);
    let scale = e.abs() + f.abs() + g.abs();
    let det = e * g - f * f;
    let n_norm = n.iter().map(|c| c * c).sum::<f64>().sqrt();
    if det.is_nan() || det.abs() < 1e-12 * scale * scale || n_norm == 0.0 {
        return Err(ZmcError::DegenerateMetric { u, v, det });
    }
    let num = e * metric.inner(jet.xvv, n) - 2.0 * f * metric.inner(jet.xuv, n)
        + g * metric.inner(jet.xuu, n);
    Ok(num / (scale * n_norm))
}

/// [`zmc_numerator_from_jet`] on a central-difference jet.
pub fn parametric_zmc_numerator<F>(
    sampler: F,
    metric: SignatureMetric,
    u: f64,
    v: f64,
    h: f64,
) -> Result<f64, ZmcError>
where
    F: Fn(f64, f64) -> Result<[f64; 3], String>,
{
    let jet = param_jet_fd(sampler, u, v, h)?;
    zmc_numerator_from_jet(&jet, metric, u, v)
}

/// Graph jet of `z(x, y)` for a parametrized surface, from its parametric jet
/// and the chain rule through `(u, v) ↦ (x, y)`.
pub fn graph_jet_from_param(jet: &ParamJet, z: f64) -> Option<GraphJet> {
    let (xu, yu, zu) = (jet.xu[0], jet.xu[1], jet.xu[2]);
    let (xv, yv, zv) = (jet.xv[0], jet.xv[1], jet.xv[2]);
    let det = xu * yv - xv * yu;
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    // K = J⁻¹ with J = [[x_u, x_v], [y_u, y_v]]
    let k = [[yv / det, -xv / det], [-yu / det, xu / det]];
    let z_x = zu * k[0][0] + zv * k[1][0];
    let z_y = zu * k[0][1] + zv * k[1][1];
    let a = |second: [f64; 3]| second[2] - z_x * second[0] - z_y * second[1];
    let (auu, auv, avv) = (a(jet.xuu), a(jet.xuv), a(jet.xvv));
    // H = Kᵀ A K
    let h = |i: usize, j: usize| {
        k[0][i] * (auu * k[0][j] + auv * k[1][j]) + k[1][i] * (auv * k[0][j] + avv * k[1][j])
    };
    Some(GraphJet {
        z,
        z_x,
        z_y,
        z_xx: h(0, 0),
        z_xy: h(0, 1),
        z_yy: h(1, 1),
    })
}

fn sweep<F>(grid: &GridSpec, f: F) -> ErrorAccumulator
where
    F: Fn(f64, f64) -> Option<f64> + Sync,
{
    let values: Vec<Option<f64>> = grid
        .points()
        .into_par_iter()
        .map(|(u, v)| f(u, v))
        .collect();
    let mut acc = ErrorAccumulator::new();
    for ((u, v), r) in grid.points().into_iter().zip(values) {
        match r {
            Some(r) => acc.push(r.abs(), &[u.into(), v.into()], r.into(), C64::new(0.0, 0.0)),
            None => acc.skip(),
        }
    }
    acc
}

/// `|graph_residual|` over the grid points inside the surface domain.
pub fn residual_sweep(
    surface: &HeightSurface,
    eq: GraphEquation,
    grid: &GridSpec,
    method: JetMethod,
    tol: f64,
) -> VerificationReport {
    let acc = sweep(grid, |x, y| {
        if !surface.in_domain(x, y, grid.margin) {
            return None;
        }
        graph_jet(surface, x, y, method)
            .ok()
            .map(|j| graph_residual(eq, &j))
    });
    let mut params = Map::new();
    params.insert("surface".into(), json!(surface.id));
    params.insert("kind".into(), json!(surface.kind.name()));
    params.insert(
        "method".into(),
        json!(match method {
            JetMethod::Exact => "exact".to_string(),
            JetMethod::CentralDiff(h) => format!("central-diff({h:e})"),
        }),
    );
    acc.finish(
        format!("{}-residual", eq.name()),
        params,
        Some(*grid),
        "principal",
        tol,
    )
}

/// `|parametric ZMC numerator|` of a central-difference jet over the grid.
/// Points where the sampler fails or the metric degenerates are skipped.
pub fn parametric_sweep<F>(
    subject: &str,
    sampler: F,
    metric: SignatureMetric,
    grid: &GridSpec,
    h: f64,
    tol: f64,
) -> VerificationReport
where
    F: Fn(f64, f64) -> Result<[f64; 3], String> + Sync,
{
    let acc = sweep(grid, |u, v| {
        parametric_zmc_numerator(&sampler, metric, u, v, h).ok()
    });
    let mut params = Map::new();
    params.insert("metric".into(), json!(metric.name()));
    params.insert("h".into(), json!(h));
    acc.finish(subject, params, Some(*grid), "principal", tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_surface;

    fn jet(id: &str, x: f64, y: f64) -> GraphJet {
        graph_jet(&builtin_surface(id).unwrap(), x, y, JetMethod::Exact).unwrap()
    }

    #[test]
    fn scherk2_exact_jet() {
        let (x, y) = (0.3, 0.2);
        let j = jet("scherk2", x, y);
        assert!((j.z_x - x.tan()).abs() < 1e-15);
        assert!((j.z_y + y.tan()).abs() < 1e-15);
        assert_eq!(j.z_xy, 0.0);
        assert!((j.z_xx - 1.0 / (x.cos() * x.cos())).abs() < 1e-14);
        assert!((j.z_yy + 1.0 / (y.cos() * y.cos())).abs() < 1e-14);
    }

    #[test]
    fn exact_and_central_agree() {
        let s = builtin_surface("scherk2").unwrap();
        let e = graph_jet(&s, 0.3, 0.2, JetMethod::Exact).unwrap();
        let c = graph_jet(&s, 0.3, 0.2, JetMethod::CentralDiff(DEFAULT_STEP)).unwrap();
        for (a, b) in e.entries().iter().zip(c.entries()) {
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
    }

    #[test]
    fn plane_has_no_curvature() {
        let j = jet("plane(0.3,-0.7)", 0.4, 2.0);
        assert_eq!((j.z_x, j.z_y), (0.3, -0.7));
        assert_eq!((j.z_xx, j.z_xy, j.z_yy), (0.0, 0.0, 0.0));
    }

    #[test]
    fn residual_examples() {
        let r = graph_residual(GraphEquation::Minimal, &jet("scherk2", 0.3, 0.2));
        assert!(r.abs() < 1e-12, "{r}");
        let r = graph_residual(GraphEquation::Maximal, &jet("scherk2max", 0.5, -0.4));
        assert!(r.abs() < 1e-12, "{r}");
        let r = graph_residual(GraphEquation::BiSoliton, &jet("scherkBI", 0.3, 1.0));
        assert!(r.abs() < 1e-12, "{r}");
        let r = graph_residual(GraphEquation::Minimal, &jet("expr:x*x+y*y", 1.0, 1.0));
        assert!((r - 20.0).abs() < 1e-12, "{r}");
    }

    #[test]
    fn expr_jets_match_builtin_jets() {
        for (id, src) in [
            ("scherk2", "log(cos(y)/cos(x))"),
            ("scherk2max", "log(cosh(y)/cosh(x))"),
            ("scherkBI", "log(cosh(y)/cos(x))"),
            ("helicoid", "atan(y/x)"),
            (
                "scherk1(1.1)",
                "-atan(tanh(0.5*x*sin(1.1))/tan(y*sin(0.55)))/cos(0.55)",
            ),
        ] {
            let a = jet(id, 0.4, 0.7);
            let b = jet(&format!("expr:{src}"), 0.4, 0.7);
            for (p, q) in a.entries().iter().zip(b.entries()) {
                assert!((p - q).abs() < 1e-13 * (1.0 + q.abs()), "{id}: {p} vs {q}");
            }
        }
    }

    #[test]
    fn leaf_jet_is_shifted_helicoid() {
        let a = jet("leaf(0.5)", 2.0 * PI + 0.4, 0.3);
        let b = jet("helicoid", 0.4, 0.3);
        assert!((a.z + b.z - 0.5).abs() < 1e-15);
        assert!((a.z_xy + b.z_xy).abs() < 1e-13);
    }

    #[test]
    fn exact_jet_outside_domain() {
        let s = builtin_surface("scherk2").unwrap();
        assert!(matches!(
            graph_jet(&s, 2.0, 0.0, JetMethod::Exact),
            Err(ZmcError::DomainViolation { .. })
        ));
    }

    #[test]
    fn parametric_plane_and_sphere() {
        for m in [
            SignatureMetric::EUCLID,
            SignatureMetric::L3,
            SignatureMetric::L3P,
        ] {
            let r = parametric_zmc_numerator(|u, v| Ok([u, v, 0.0]), m, 0.3, 0.4, DEFAULT_STEP)
                .unwrap();
            assert_eq!(r, 0.0);
        }
        let sphere = |u: f64, v: f64| Ok([u.cos() * v.cos(), u.sin() * v.cos(), v.sin()]);
        let r = parametric_zmc_numerator(sphere, SignatureMetric::EUCLID, 0.5, 0.0, DEFAULT_STEP)
            .unwrap();
        assert!(r.abs() > 0.1, "{r}");
    }

    #[test]
    fn scherk2_graph_lift_is_parametrically_minimal() {
        let s = builtin_surface("scherk2").unwrap();
        let lift = |u: f64, v: f64| s.eval(u, v).map(|z| [u, v, z]).map_err(|e| e.to_string());
        for (u, v) in [(0.3, 0.2), (-0.8, 0.5), (1.0, -1.0)] {
            let r = parametric_zmc_numerator(lift, SignatureMetric::EUCLID, u, v, DEFAULT_STEP)
                .unwrap();
            assert!(r.abs() < 1e-6, "{r}");
        }
    }

    #[test]
    fn degenerate_metric() {
        let line = |u: f64, _v: f64| Ok([u, 0.0, 0.0]);
        assert!(matches!(
            parametric_zmc_numerator(line, SignatureMetric::EUCLID, 0.0, 0.0, DEFAULT_STEP),
            Err(ZmcError::DegenerateMetric { .. })
        ));
    }

    #[test]
    fn metric_names_round_trip() {
        for name in ["euclid", "l3", "l3p", "l3x"] {
            assert_eq!(name.parse::<SignatureMetric>().unwrap().name(), name);
        }
    }
}

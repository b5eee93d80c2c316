//! Integral representations: Weierstrass–Enneper (minimal, maximal and the
//! reduced `R` form), the associated family, splitting of `R`, Newton
//! inversion of `ζ ↦ (x, y)`, the timelike (TLMS) representation and the
//! Barbishov–Charnikov solution of the Born–Infeld equation.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::expr::{AnalyticExpr, ExprError, C64};
use crate::quad::{integrate_interval, integrate_segment, QuadError, DEFAULT_TOL};
use crate::zmc::ParamJet;

/// Newton stops once the update is this small.
pub const NEWTON_STEP_TOL: f64 = 1e-12;
/// Required final residual `|(x(ζ), y(ζ)) − (x, y)|`.
pub const NEWTON_RESIDUAL_TOL: f64 = 1e-10;
pub const NEWTON_MAX_ITER: usize = 50;
pub const NEWTON_MAX_HALVINGS: usize = 20;
pub const JACOBIAN_MIN_DET: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("weight {index} is zero")]
    ZeroWeight { index: usize },
    #[error("weights sum to {sum}, not 1")]
    WeightSumError { sum: f64 },
    #[error("part {index} vanishes near {at}")]
    VanishingPart { index: usize, at: C64 },
    #[error("parts do not sum to the data at {at}: difference {diff:e}")]
    PartSumMismatch { at: C64, diff: f64 },
    #[error("Newton did not converge after {iterations} iterations (residual {residual:e})")]
    NewtonDiverged { iterations: usize, residual: f64 },
    #[error("Jacobian is singular at ζ = {zeta} (det = {det:e})")]
    JacobianSingular { zeta: C64, det: f64 },
    #[error("`{expr}` is not real at {t}")]
    NonReal { expr: String, t: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WEMode {
    Minimal,
    Maximal,
    /// `f` plays the role of `R` and `g(w) = w`.
    ReducedR,
}

impl WEMode {
    pub fn name(self) -> &'static str {
        match self {
            WEMode::Minimal => "minimal",
            WEMode::Maximal => "maximal",
            WEMode::ReducedR => "reduced-R",
        }
    }
}

impl fmt::Display for WEMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for WEMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minimal" => Ok(WEMode::Minimal),
            "maximal" => Ok(WEMode::Maximal),
            "reduced-R" | "reduced-r" => Ok(WEMode::ReducedR),
            _ => Err(format!(
                "unknown mode `{s}` (expected minimal, maximal or reduced-R)"
            )),
        }
    }
}

/// Weierstrass–Enneper data.
#[derive(Clone, Debug, PartialEq)]
pub struct WEData {
    pub f: AnalyticExpr,
    pub g: AnalyticExpr,
    pub zeta0: C64,
    pub x0: [f64; 3],
    pub mode: WEMode,
}

impl WEData {
    pub fn new(f: AnalyticExpr, g: AnalyticExpr, mode: WEMode) -> Self {
        let g = if mode == WEMode::ReducedR {
            AnalyticExpr::identity(f.varname())
        } else {
            g
        };
        WEData {
            f,
            g,
            zeta0: C64::new(0.0, 0.0),
            x0: [0.0; 3],
            mode,
        }
    }

    /// Reduced form with the single function `R`.
    pub fn reduced(r: AnalyticExpr) -> Self {
        let g = AnalyticExpr::identity(r.varname());
        WEData::new(r, g, WEMode::ReducedR)
    }

    /// Enneper's surface: `f = 1`, `g = w`, based at 0.
    pub fn enneper() -> Self {
        WEData::new(
            AnalyticExpr::constant(C64::new(1.0, 0.0), "w"),
            AnalyticExpr::identity("w"),
            WEMode::Minimal,
        )
    }

    pub fn with_base(mut self, zeta0: C64, x0: [f64; 3]) -> Self {
        self.zeta0 = zeta0;
        self.x0 = x0;
        self
    }

    fn is_maximal(&self) -> bool {
        self.mode == WEMode::Maximal
    }

    /// The integrand triple `Φ(w)`.
    pub fn integrand(&self, w: C64) -> Result<[C64; 3], ExprError> {
        let f = self.f.eval(w)?;
        let g = if self.mode == WEMode::ReducedR {
            w
        } else {
            self.g.eval(w)?
        };
        let g2 = g * g;
        let one = C64::new(1.0, 0.0);
        let i = C64::i();
        Ok(if self.is_maximal() {
            [(one + g2) * f, i * (one - g2) * f, -2.0 * g * f]
        } else {
            [(one - g2) * f, i * (one + g2) * f, 2.0 * g * f]
        })
    }

    /// `Φ'(w)` from the symbolic derivatives of `f` and `g`.
    pub fn integrand_derivative(&self, w: C64) -> Result<[C64; 3], ExprError> {
        let f = self.f.eval(w)?;
        let df = self.f.differentiate().eval(w)?;
        let (g, dg) = if self.mode == WEMode::ReducedR {
            (w, C64::new(1.0, 0.0))
        } else {
            (self.g.eval(w)?, self.g.differentiate().eval(w)?)
        };
        let one = C64::new(1.0, 0.0);
        let i = C64::i();
        let ggf = 2.0 * g * dg * f;
        let g2 = g * g;
        let gf = dg * f + g * df;
        Ok(if self.is_maximal() {
            [
                ggf + (one + g2) * df,
                i * (-ggf + (one - g2) * df),
                -2.0 * gf,
            ]
        } else {
            [
                -ggf + (one - g2) * df,
                i * (ggf + (one + g2) * df),
                2.0 * gf,
            ]
        })
    }
}

/// `∫_{ζ₀}^{ζ} Φ(w) dw` along the straight segment.
pub fn we_integrals(data: &WEData, zeta: C64) -> Result<[C64; 3], RepError> {
    Ok(integrate_segment(
        data.zeta0,
        zeta,
        |w| data.integrand(w).map_err(|e| e.to_string()),
        DEFAULT_TOL,
    )?)
}

pub fn we_point(data: &WEData, zeta: C64) -> Result<[f64; 3], RepError> {
    let i = we_integrals(data, zeta)?;
    Ok([0, 1, 2].map(|k| data.x0[k] + i[k].re))
}

/// `cos θ · (Re ∫Φ + X₀) + sin θ · (Im ∫Φ + X₀)`.
pub fn associated_family_point(data: &WEData, zeta: C64, theta: f64) -> Result<[f64; 3], RepError> {
    let i = we_integrals(data, zeta)?;
    let (s, c) = theta.sin_cos();
    Ok([0, 1, 2].map(|k| c * (i[k].re + data.x0[k]) + s * (i[k].im + data.x0[k])))
}

/// Exact derivatives of `we_point` with respect to `(ζ₁, ζ₂)`.
pub fn we_param_jet(data: &WEData, zeta: C64) -> Result<ParamJet, RepError> {
    let p = data.integrand(zeta)?;
    let dp = data.integrand_derivative(zeta)?;
    Ok(ParamJet {
        xu: p.map(|c| c.re),
        xv: p.map(|c| -c.im),
        xuu: dp.map(|c| c.re),
        xuv: dp.map(|c| -c.im),
        xvv: dp.map(|c| -c.re),
    })
}

/// Splits `f` (the `R` of the reduced form) into `λᵢ · f`. Offsets of the
/// parts are zero, so their `z` components sum to the `z` of `data` when its
/// own offset is zero.
pub fn split_weierstrass(data: &WEData, weights: &[f64]) -> Result<Vec<WEData>, RepError> {
    if let Some(index) = weights.iter().position(|w| *w == 0.0) {
        return Err(RepError::ZeroWeight { index });
    }
    let sum: f64 = weights.iter().sum();
    if weights.is_empty() || (sum - 1.0).abs() > 1e-12 {
        return Err(RepError::WeightSumError { sum });
    }
    Ok(weights
        .iter()
        .map(|w| WEData {
            f: data.f.scaled(C64::new(*w, 0.0)),
            x0: [0.0; 3],
            ..data.clone()
        })
        .collect())
}

/// Splits `f` into arbitrary expression parts. The parts must sum to `f` and
/// must not vanish at any of `samples`; both are checked only there.
pub fn split_weierstrass_exprs(
    data: &WEData,
    parts: &[AnalyticExpr],
    samples: &[C64],
) -> Result<Vec<WEData>, RepError> {
    for &at in samples {
        let mut total = C64::new(0.0, 0.0);
        for (index, p) in parts.iter().enumerate() {
            let v = p.eval(at)?;
            if v.norm() < 1e-12 {
                return Err(RepError::VanishingPart { index, at });
            }
            total += v;
        }
        let f = data.f.eval(at)?;
        let diff = (total - f).norm();
        if diff > 1e-10 * (1.0 + f.norm()) {
            return Err(RepError::PartSumMismatch { at, diff });
        }
    }
    Ok(parts
        .iter()
        .map(|p| WEData {
            f: p.clone(),
            x0: [0.0; 3],
            ..data.clone()
        })
        .collect())
}

/// Solves `(x(ζ), y(ζ)) = (x, y)` by damped Newton from `guess`.
pub fn invert_parametrization(data: &WEData, x: f64, y: f64, guess: C64) -> Result<C64, RepError> {
    let residual = |zeta: C64| -> Result<(f64, f64), RepError> {
        let p = we_point(data, zeta)?;
        Ok((p[0] - x, p[1] - y))
    };
    let mut zeta = guess;
    let mut r = residual(zeta)?;
    let mut rn = r.0.hypot(r.1);
    for iteration in 0..NEWTON_MAX_ITER {
        let phi = data.integrand(zeta)?;
        // columns: ∂/∂ζ₁ = Re Φ, ∂/∂ζ₂ = −Im Φ
        let (a, b) = (phi[0].re, -phi[0].im);
        let (c, d) = (phi[1].re, -phi[1].im);
        let det = a * d - b * c;
        if det.is_nan() || det.abs() < JACOBIAN_MIN_DET {
            return Err(RepError::JacobianSingular { zeta, det });
        }
        let step = C64::new((d * r.0 - b * r.1) / det, (-c * r.0 + a * r.1) / det);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=NEWTON_MAX_HALVINGS {
            let cand = zeta - step * lambda;
            if let Ok(rc) = residual(cand) {
                let rcn = rc.0.hypot(rc.1);
                if rcn < rn || rcn == 0.0 {
                    accepted = Some((cand, rc, rcn));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let update = step.norm() * lambda;
        match accepted {
            Some((cand, rc, rcn)) => {
                zeta = cand;
                r = rc;
                rn = rcn;
            }
            None if rn < NEWTON_RESIDUAL_TOL => return Ok(zeta),
            None => {
                return Err(RepError::NewtonDiverged {
                    iterations: iteration + 1,
                    residual: rn,
                })
            }
        }
        if update < NEWTON_STEP_TOL || rn == 0.0 {
            return if rn < NEWTON_RESIDUAL_TOL {
                Ok(zeta)
            } else {
                Err(RepError::NewtonDiverged {
                    iterations: iteration + 1,
                    residual: rn,
                })
            };
        }
    }
    if rn < NEWTON_RESIDUAL_TOL {
        Ok(zeta)
    } else {
        Err(RepError::NewtonDiverged {
            iterations: NEWTON_MAX_ITER,
            residual: rn,
        })
    }
}

fn eval_real(e: &AnalyticExpr, t: f64) -> Result<f64, String> {
    let v = e.eval(C64::new(t, 0.0)).map_err(|err| err.to_string())?;
    if v.im.abs() > 1e-12 * (1.0 + v.re.abs()) {
        return Err(RepError::NonReal {
            expr: e.to_string(),
            t,
        }
        .to_string());
    }
    Ok(v.re)
}

/// Which `x` line of the timelike representation to assemble.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TlmsVariant {
    /// `x = ½[∫(1+q²)f du − ∫(1+r²)g dv]`; with `y` and `z` below, both
    /// coordinate curves are null for `−dx² + dy² + dz²`.
    #[default]
    Null,
    /// `x = ½[∫(1+q²)f du − ∫(1−r²)g dv]`.
    Literal,
}

/// Timelike minimal surface data; `f`, `q` are functions of `u` and `g`, `r`
/// of `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct TLMSData {
    pub f: AnalyticExpr,
    pub q: AnalyticExpr,
    pub g: AnalyticExpr,
    pub r: AnalyticExpr,
    pub u0: f64,
    pub v0: f64,
    pub variant: TlmsVariant,
}

impl TLMSData {
    pub fn new(f: AnalyticExpr, q: AnalyticExpr, g: AnalyticExpr, r: AnalyticExpr) -> Self {
        TLMSData {
            f,
            q,
            g,
            r,
            u0: 0.0,
            v0: 0.0,
            variant: TlmsVariant::Null,
        }
    }
}

/// `(x, y, z)` with `y = −½[∫(1−q²)f du + ∫(1−r²)g dv]` and
/// `z = −∫qf du + ∫rg dv`; `x` follows [`TlmsVariant`].
pub fn tlms_point(data: &TLMSData, u: f64, v: f64) -> Result<[f64; 3], RepError> {
    let [a1, a2, a3] = integrate_interval(
        data.u0,
        u,
        |t| {
            let f = eval_real(&data.f, t)?;
            let q = eval_real(&data.q, t)?;
            Ok([(1.0 + q * q) * f, (1.0 - q * q) * f, q * f])
        },
        DEFAULT_TOL,
    )?;
    let [b_plus, b_minus, b3] = integrate_interval(
        data.v0,
        v,
        |t| {
            let g = eval_real(&data.g, t)?;
            let r = eval_real(&data.r, t)?;
            Ok([(1.0 + r * r) * g, (1.0 - r * r) * g, r * g])
        },
        DEFAULT_TOL,
    )?;
    let bx = match data.variant {
        TlmsVariant::Null => b_plus,
        TlmsVariant::Literal => b_minus,
    };
    Ok([0.5 * (a1 - bx), -0.5 * (a2 + b_minus), -a3 + b3])
}

/// Barbishov–Charnikov data `F(r)`, `G(s)`, based at `(0, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BCData {
    pub f: AnalyticExpr,
    pub g: AnalyticExpr,
}

pub fn bc_point(data: &BCData, r: f64, s: f64) -> Result<[f64; 3], RepError> {
    let df = data.f.differentiate();
    let dg = data.g.differentiate();
    let [r2f, rf] = integrate_interval(
        0.0,
        r,
        |t| {
            let d = eval_real(&df, t)?;
            Ok([t * t * d, t * d])
        },
        DEFAULT_TOL,
    )?;
    let [s2g, sg] = integrate_interval(
        0.0,
        s,
        |t| {
            let d = eval_real(&dg, t)?;
            Ok([t * t * d, t * d])
        },
        DEFAULT_TOL,
    )?;
    let fv = eval_real(&data.f, r).map_err(|_| nonreal(&data.f, r))?;
    let gv = eval_real(&data.g, s).map_err(|_| nonreal(&data.g, s))?;
    Ok([
        0.5 * (fv + gv - s2g - r2f),
        0.5 * (gv - fv - r2f + s2g),
        rf + sg,
    ])
}

fn nonreal(e: &AnalyticExpr, t: f64) -> RepError {
    match e.eval(C64::new(t, 0.0)) {
        Err(err) => RepError::Expr(err),
        Ok(_) => RepError::NonReal {
            expr: e.to_string(),
            t,
        },
    }
}

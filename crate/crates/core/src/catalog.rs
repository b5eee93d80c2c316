//! Closed-form height surfaces, the finite decomposition identities built
//! from them, and truncated Euler–Ramanujan series used as oracles.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::expr::{parse_real, BivariateExpr, ExprError, C64};
use crate::foliation;
use crate::meshio::GridSpec;
use crate::report::{ErrorAccumulator, VerificationReport};

/// Default identity tolerance.
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown surface `{0}`")]
    UnknownSurface(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("parameter out of domain: {0}")]
    ParamDomain(String),
    #[error("{} point(s) violate the domain of `{subject}`; first: {}", points.len(), fmt_points(points))]
    DomainViolation {
        subject: String,
        points: Vec<(C64, C64)>,
    },
    #[error("grid has no points")]
    EmptyGrid,
    #[error("singular argument for {kind} series at a = {a}, b = {b}")]
    SingularArgument { kind: &'static str, a: f64, b: f64 },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

fn fmt_points(points: &[(C64, C64)]) -> String {
    points
        .iter()
        .take(5)
        .map(|(x, y)| format!("({x}, {y})"))
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    Minimal,
    Maximal,
    BiSoliton,
    Timelike,
    Generic,
}

impl SurfaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceKind::Minimal => "minimal",
            SurfaceKind::Maximal => "maximal",
            SurfaceKind::BiSoliton => "bi-soliton",
            SurfaceKind::Timelike => "timelike",
            SurfaceKind::Generic => "generic",
        }
    }
}

/// The formula behind a [`HeightSurface`].
#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceDef {
    /// `ln(cos y / cos x)`
    Scherk2,
    /// `-sec(α/2) · atan(tanh(½ x sin α) / tan(y sin(α/2)))`
    Scherk1 {
        alpha: f64,
    },
    /// `atan(y / x)`
    Helicoid,
    /// `ln(cosh y / cosh x)`
    Scherk2Max,
    /// `ln(cosh y / cos x)`
    ScherkBI,
    /// `a x + b y`
    Plane {
        a: f64,
        b: f64,
    },
    Expr(BivariateExpr),
    /// `factor · base((x - b)/a, (y - d)/a)`
    Transformed {
        base: Box<SurfaceDef>,
        a: f64,
        b: f64,
        d: f64,
        factor: f64,
    },
    /// Shifted helicoid leaf `F(x, y) + t`.
    Leaf {
        t: f64,
    },
}

fn cot(z: C64) -> C64 {
    z.cos() / z.sin()
}

impl SurfaceDef {
    pub fn eval_complex(&self, x: C64, y: C64) -> Result<C64, CatalogError> {
        let v = match self {
            SurfaceDef::Scherk2 => (y.cos() / x.cos()).ln(),
            SurfaceDef::Scherk1 { alpha } => {
                let s = (0.5 * alpha).cos().recip();
                let num = (x * (0.5 * alpha.sin())).tanh();
                -s * (num * cot(y * (0.5 * alpha).sin())).atan()
            }
            SurfaceDef::Helicoid => (y / x).atan(),
            SurfaceDef::Scherk2Max => (y.cosh() / x.cosh()).ln(),
            SurfaceDef::ScherkBI => (y.cosh() / x.cos()).ln(),
            SurfaceDef::Plane { a, b } => x * *a + y * *b,
            SurfaceDef::Expr(e) => e.eval(x, y)?,
            SurfaceDef::Transformed {
                base,
                a,
                b,
                d,
                factor,
            } => base.eval_complex((x - *b) / *a, (y - *d) / *a)? * *factor,
            SurfaceDef::Leaf { .. } => {
                if x.im != 0.0 || y.im != 0.0 {
                    return Err(self.violation("leaf", x, y));
                }
                C64::from(self.eval(x.re, y.re)?)
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.violation(&self.to_string(), x, y))
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64, CatalogError> {
        let v = match self {
            SurfaceDef::Scherk2 => (y.cos() / x.cos()).ln(),
            SurfaceDef::Scherk1 { alpha } => {
                let num = (0.5 * x * alpha.sin()).tanh();
                -(num / (y * (0.5 * alpha).sin()).tan()).atan() / (0.5 * alpha).cos()
            }
            SurfaceDef::Helicoid => (y / x).atan(),
            SurfaceDef::Scherk2Max => (y.cosh() / x.cosh()).ln(),
            SurfaceDef::ScherkBI => (y.cosh() / x.cos()).ln(),
            SurfaceDef::Plane { a, b } => a * x + b * y,
            SurfaceDef::Expr(e) => {
                let z = e.eval(C64::new(x, 0.0), C64::new(y, 0.0))?;
                if z.im.abs() > 1e-12 * (1.0 + z.re.abs()) {
                    return Err(self.violation("non-real value", x.into(), y.into()));
                }
                z.re
            }
            SurfaceDef::Transformed {
                base,
                a,
                b,
                d,
                factor,
            } => factor * base.eval((x - b) / a, (y - d) / a)?,
            SurfaceDef::Leaf { t } => {
                foliation::leaf_height(x, y)
                    .map_err(|_| self.violation("leaf", x.into(), y.into()))?
                    + t
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.violation(&self.to_string(), x.into(), y.into()))
        }
    }

    fn violation(&self, subject: &str, x: C64, y: C64) -> CatalogError {
        CatalogError::DomainViolation {
            subject: subject.to_string(),
            points: vec![(x, y)],
        }
    }

    /// Keeps every singular factor at least `margin` away from zero. Works for
    /// complex arguments too, where the same moduli are tested.
    pub fn in_domain_complex(&self, x: C64, y: C64, margin: f64) -> bool {
        let ok = |z: C64| z.norm() > margin;
        match self {
            SurfaceDef::Scherk2 => ok(x.cos()) && ok(y.cos()),
            SurfaceDef::Scherk1 { alpha } => {
                ok((y * (0.5 * alpha).sin()).sin()) && ok((x * (0.5 * alpha.sin())).cosh())
            }
            SurfaceDef::Helicoid => ok(x),
            SurfaceDef::Scherk2Max => ok(x.cosh()) && ok(y.cosh()),
            SurfaceDef::ScherkBI => ok(x.cos()) && ok(y.cosh()),
            SurfaceDef::Plane { .. } => true,
            SurfaceDef::Expr(e) => e.eval(x, y).is_ok(),
            SurfaceDef::Transformed { base, a, b, d, .. } => {
                base.in_domain_complex((x - *b) / *a, (y - *d) / *a, margin)
            }
            SurfaceDef::Leaf { .. } => {
                x.im == 0.0 && y.im == 0.0 && self.in_domain(x.re, y.re, margin)
            }
        }
    }

    /// Real domain: as [`Self::in_domain_complex`], and additionally requires
    /// the logarithm arguments to be positive so that values are real.
    pub fn in_domain(&self, x: f64, y: f64, margin: f64) -> bool {
        match self {
            SurfaceDef::Scherk2 => {
                x.cos().abs() > margin && y.cos().abs() > margin && y.cos() / x.cos() > 0.0
            }
            SurfaceDef::ScherkBI => x.cos() > margin,
            SurfaceDef::Expr(e) => e
                .eval(C64::new(x, 0.0), C64::new(y, 0.0))
                .is_ok_and(|z| z.im.abs() <= 1e-12 * (1.0 + z.re.abs())),
            SurfaceDef::Transformed { base, a, b, d, .. } => {
                base.in_domain((x - b) / a, (y - d) / a, margin)
            }
            SurfaceDef::Leaf { .. } => {
                let k = (x / (2.0 * PI)).round();
                (x - 2.0 * k * PI).hypot(y) > margin
            }
            _ => self.in_domain_complex(x.into(), y.into(), margin),
        }
    }

    pub fn kind(&self) -> SurfaceKind {
        match self {
            SurfaceDef::Scherk2
            | SurfaceDef::Scherk1 { .. }
            | SurfaceDef::Helicoid
            | SurfaceDef::Plane { .. }
            | SurfaceDef::Leaf { .. } => SurfaceKind::Minimal,
            SurfaceDef::Scherk2Max => SurfaceKind::Maximal,
            SurfaceDef::ScherkBI => SurfaceKind::BiSoliton,
            SurfaceDef::Expr(_) => SurfaceKind::Generic,
            SurfaceDef::Transformed { base, .. } => base.kind(),
        }
    }

    /// A 41×41 grid inside the domain, used for residual sweeps.
    pub fn default_grid(&self) -> GridSpec {
        let (u, v) = self.default_box();
        GridSpec::new((u.0, u.1, 41), (v.0, v.1, 41)).expect("default box is valid")
    }

    fn default_box(&self) -> ((f64, f64), (f64, f64)) {
        match self {
            SurfaceDef::Helicoid => ((0.2, 1.2), (-1.0, 1.0)),
            SurfaceDef::Scherk1 { .. } => ((-1.0, 1.0), (0.3, 1.5)),
            SurfaceDef::Leaf { .. } => ((0.2, 3.0), (-1.0, 1.0)),
            SurfaceDef::Transformed { base, a, b, d, .. } => {
                let ((u0, u1), (v0, v1)) = base.default_box();
                let map = |lo: f64, hi: f64, off: f64| {
                    let (p, q) = (a * lo + off, a * hi + off);
                    (p.min(q), p.max(q))
                };
                (map(u0, u1, *b), map(v0, v1, *d))
            }
            _ => ((-1.0, 1.0), (-1.0, 1.0)),
        }
    }
}

impl fmt::Display for SurfaceDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceDef::Scherk2 => write!(f, "scherk2"),
            SurfaceDef::Scherk1 { alpha } => write!(f, "scherk1({alpha:?})"),
            SurfaceDef::Helicoid => write!(f, "helicoid"),
            SurfaceDef::Scherk2Max => write!(f, "scherk2max"),
            SurfaceDef::ScherkBI => write!(f, "scherkBI"),
            SurfaceDef::Plane { a, b } => write!(f, "plane({a:?},{b:?})"),
            SurfaceDef::Expr(e) => write!(f, "expr:{e}"),
            SurfaceDef::Transformed {
                base,
                a,
                b,
                d,
                factor,
            } => write!(f, "{factor:?}*{base}[a={a:?},b={b:?},d={d:?}]"),
            SurfaceDef::Leaf { t } => write!(f, "leaf({t:?})"),
        }
    }
}

/// A named graph surface `z = Z(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightSurface {
    pub id: String,
    pub def: SurfaceDef,
    pub kind: SurfaceKind,
}

impl HeightSurface {
    pub fn new(def: SurfaceDef) -> Self {
        HeightSurface {
            id: def.to_string(),
            kind: def.kind(),
            def,
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64, CatalogError> {
        self.def.eval(x, y)
    }

    pub fn eval_complex(&self, x: C64, y: C64) -> Result<C64, CatalogError> {
        self.def.eval_complex(x, y)
    }

    pub fn in_domain(&self, x: f64, y: f64, margin: f64) -> bool {
        self.def.in_domain(x, y, margin)
    }

    pub fn default_grid(&self) -> GridSpec {
        self.def.default_grid()
    }
}

/// Looks up a surface by id: `scherk2`, `scherk1` or `scherk1(<alpha>)`,
/// `helicoid`, `scherk2max`, `scherkBI`, `plane(<a>,<b>)`, `leaf(<t>)`, or
/// `expr:<Z(x,y)>`.
pub fn builtin_surface(id: &str) -> Result<HeightSurface, CatalogError> {
    let id = id.trim();
    if let Some(src) = id.strip_prefix("expr:") {
        let e = BivariateExpr::parse(src, "x", "y")?;
        return Ok(HeightSurface {
            id: id.to_string(),
            kind: SurfaceKind::Generic,
            def: SurfaceDef::Expr(e),
        });
    }
    let unknown = || CatalogError::UnknownSurface(id.to_string());
    let (name, args) = match id.split_once('(') {
        Some((name, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(unknown)?;
            let args = inner
                .split(',')
                .map(|a| parse_real(a.trim()))
                .collect::<Result<Vec<f64>, _>>()?;
            (name.trim(), args)
        }
        None => (id, Vec::new()),
    };
    let def = match (name, args.as_slice()) {
        ("scherk2", []) => SurfaceDef::Scherk2,
        ("scherk1", []) => SurfaceDef::Scherk1 { alpha: PI / 2.0 },
        ("scherk1", [alpha]) => SurfaceDef::Scherk1 { alpha: *alpha },
        ("helicoid", []) => SurfaceDef::Helicoid,
        ("scherk2max", []) => SurfaceDef::Scherk2Max,
        ("scherkBI", []) => SurfaceDef::ScherkBI,
        ("plane", []) => SurfaceDef::Plane { a: 0.0, b: 0.0 },
        ("plane", [a, b]) => SurfaceDef::Plane { a: *a, b: *b },
        ("leaf", []) => SurfaceDef::Leaf { t: 0.0 },
        ("leaf", [t]) => SurfaceDef::Leaf { t: *t },
        _ => return Err(unknown()),
    };
    Ok(HeightSurface {
        id: id.to_string(),
        kind: def.kind(),
        def,
    })
}

/// `c(m) = (2m − n + 1)π / (2n)`.
pub fn scherk_shift(m: usize, n: usize) -> f64 {
    let k = 2 * m as i64 - n as i64 + 1;
    k as f64 * PI / (2 * n) as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BranchPolicy {
    Principal,
    ModPi,
    Mod2PiI,
    Multiplicative,
}

impl BranchPolicy {
    pub fn name(self) -> &'static str {
        match self {
            BranchPolicy::Principal => "principal",
            BranchPolicy::ModPi => "mod-pi",
            BranchPolicy::Mod2PiI => "mod-2pi-i",
            BranchPolicy::Multiplicative => "multiplicative",
        }
    }

    /// Discrepancy between `lhs` and `rhs` under this policy. `pi_period` is
    /// the real period used by `mod-pi`.
    pub fn discrepancy(self, lhs: C64, rhs: C64, pi_period: f64) -> f64 {
        let d = lhs - rhs;
        match self {
            BranchPolicy::Principal => d.norm(),
            BranchPolicy::ModPi => {
                let r = d.re - pi_period * (d.re / pi_period).round();
                r.hypot(d.im)
            }
            BranchPolicy::Mod2PiI => {
                let tau = 2.0 * PI;
                let i = d.im - tau * (d.im / tau).round();
                d.re.hypot(i)
            }
            BranchPolicy::Multiplicative => {
                let (el, er) = (lhs.exp(), rhs.exp());
                (el - er).norm() / (1.0 + el.norm())
            }
        }
    }
}

impl fmt::Display for BranchPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for BranchPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "principal" => Ok(BranchPolicy::Principal),
            "mod-pi" => Ok(BranchPolicy::ModPi),
            "mod-2pi-i" => Ok(BranchPolicy::Mod2PiI),
            "multiplicative" => Ok(BranchPolicy::Multiplicative),
            _ => Err(format!(
                "unknown branch policy `{s}` (expected principal, mod-pi, mod-2pi-i or multiplicative)"
            )),
        }
    }
}

/// `(x, y) ↦ (sx·x + ox, sy·y + oy)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub sx: C64,
    pub ox: C64,
    pub sy: C64,
    pub oy: C64,
}

impl Affine {
    pub const IDENTITY: Affine = Affine {
        sx: C64::new(1.0, 0.0),
        ox: C64::new(0.0, 0.0),
        sy: C64::new(1.0, 0.0),
        oy: C64::new(0.0, 0.0),
    };

    pub fn real(sx: f64, ox: f64, sy: f64, oy: f64) -> Self {
        Affine {
            sx: sx.into(),
            ox: ox.into(),
            sy: sy.into(),
            oy: oy.into(),
        }
    }

    pub fn apply(&self, x: C64, y: C64) -> (C64, C64) {
        (self.sx * x + self.ox, self.sy * y + self.oy)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TermFn {
    Surface(SurfaceDef),
    /// `atan(tanh(y) · cot(x))`
    TanhCot,
}

impl TermFn {
    fn eval(&self, x: C64, y: C64) -> Result<C64, CatalogError> {
        match self {
            TermFn::Surface(s) => s.eval_complex(x, y),
            TermFn::TanhCot => {
                let v = (y.tanh() * cot(x)).atan();
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(CatalogError::DomainViolation {
                        subject: "atan(tanh(y)*cot(x))".into(),
                        points: vec![(x, y)],
                    })
                }
            }
        }
    }

    fn in_domain(&self, x: C64, y: C64, margin: f64) -> bool {
        match self {
            TermFn::Surface(s) => s.in_domain_complex(x, y, margin),
            TermFn::TanhCot => x.sin().norm() > margin && y.cosh().norm() > margin,
        }
    }
}

/// `coeff · func(map(x, y))`
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: C64,
    pub func: TermFn,
    pub map: Affine,
}

impl Term {
    pub fn new(coeff: f64, func: TermFn, map: Affine) -> Self {
        Term {
            coeff: coeff.into(),
            func,
            map,
        }
    }

    pub fn eval(&self, x: C64, y: C64) -> Result<C64, CatalogError> {
        let (u, v) = self.map.apply(x, y);
        Ok(self.coeff * self.func.eval(u, v)?)
    }

    pub fn in_domain(&self, x: C64, y: C64, margin: f64) -> bool {
        let (u, v) = self.map.apply(x, y);
        self.func.in_domain(u, v, margin)
    }
}

/// Optional identity parameters, read from `key=value` pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IdentityParams {
    pub beta: Option<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub surface: Option<String>,
}

impl IdentityParams {
    /// Accepts `beta=<real>`, `surface=<id>`, and `a|b|c|d=<v1;v2;...>` (list
    /// entries separated by `;` or `,`).
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = &'a str>) -> Result<Self, CatalogError> {
        let mut p = IdentityParams::default();
        for pair in pairs {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| CatalogError::ParamDomain(format!("`{pair}` is not key=value")))?;
            let list = || -> Result<Vec<f64>, CatalogError> {
                v.split([';', ','])
                    .map(|s| parse_real(s.trim()).map_err(CatalogError::from))
                    .collect()
            };
            match k.trim() {
                "beta" => p.beta = Some(parse_real(v.trim())?),
                "surface" => p.surface = Some(v.trim().to_string()),
                "a" => p.a = list()?,
                "b" => p.b = list()?,
                "c" => p.c = list()?,
                "d" => p.d = list()?,
                other => {
                    return Err(CatalogError::ParamDomain(format!(
                        "unknown parameter `{other}`"
                    )))
                }
            }
        }
        Ok(p)
    }
}

pub const IDENTITY_IDS: [&str; 6] = [
    "scherk2-decomp",
    "kamien-decomp",
    "helicoid-decomp",
    "scherk2max-decomp",
    "scherkBI-decomp",
    "general-scaled",
];

/// One decomposition identity `lhs = Σ rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityInstance {
    pub id: String,
    pub n: usize,
    pub params: Map<String, Value>,
    pub lhs: Term,
    pub rhs: Vec<Term>,
    pub policy: BranchPolicy,
    /// Real period used by the `mod-pi` policy.
    pub pi_period: f64,
}

impl IdentityInstance {
    pub fn with_policy(mut self, policy: BranchPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn lhs_value(&self, x: C64, y: C64) -> Result<C64, CatalogError> {
        self.lhs.eval(x, y)
    }

    pub fn rhs_value(&self, x: C64, y: C64) -> Result<C64, CatalogError> {
        self.rhs
            .iter()
            .try_fold(C64::new(0.0, 0.0), |acc, t| Ok(acc + t.eval(x, y)?))
    }

    pub fn in_domain(&self, x: C64, y: C64, margin: f64) -> bool {
        self.lhs.in_domain(x, y, margin) && self.rhs.iter().all(|t| t.in_domain(x, y, margin))
    }

    /// Discrepancy at one point under the instance's policy, with both sides.
    pub fn discrepancy(&self, x: C64, y: C64) -> Result<(f64, C64, C64), CatalogError> {
        let l = self.lhs_value(x, y)?;
        let r = self.rhs_value(x, y)?;
        Ok((self.policy.discrepancy(l, r, self.pi_period), l, r))
    }
}

fn map_of(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn identity_terms(
    id: &str,
    n: usize,
    params: &IdentityParams,
) -> Result<IdentityInstance, CatalogError> {
    if n == 0 {
        return Err(CatalogError::ParamDomain("n must be at least 1".into()));
    }
    let nf = n as f64;
    let surf = |d: SurfaceDef| TermFn::Surface(d);
    let shifts: Vec<f64> = (0..n).map(|m| scherk_shift(m, n)).collect();
    let mut pi_period = PI;
    let (lhs, rhs, policy, extra) = match id {
        "scherk2-decomp" => {
            let lhs = Term::new(1.0, surf(SurfaceDef::Scherk2), Affine::IDENTITY);
            let rhs = shifts
                .iter()
                .map(|c| {
                    Term::new(
                        1.0,
                        surf(SurfaceDef::Scherk2),
                        Affine::real(1.0 / nf, -c, 1.0 / nf, -c),
                    )
                })
                .collect();
            (
                lhs,
                rhs,
                BranchPolicy::Multiplicative,
                vec![("c", json!(shifts))],
            )
        }
        "scherk2max-decomp" => {
            let lhs = Term::new(1.0, surf(SurfaceDef::Scherk2Max), Affine::IDENTITY);
            let rhs = shifts
                .iter()
                .map(|c| {
                    let map = Affine {
                        sx: (1.0 / nf).into(),
                        ox: C64::new(0.0, *c),
                        sy: (1.0 / nf).into(),
                        oy: C64::new(0.0, *c),
                    };
                    Term::new(1.0, surf(SurfaceDef::Scherk2Max), map)
                })
                .collect();
            (lhs, rhs, BranchPolicy::Mod2PiI, vec![("c", json!(shifts))])
        }
        "scherkBI-decomp" => {
            let lhs = Term::new(1.0, surf(SurfaceDef::ScherkBI), Affine::IDENTITY);
            let rhs = shifts
                .iter()
                .map(|c| {
                    let map = Affine {
                        sx: (1.0 / nf).into(),
                        ox: C64::new(-c, 0.0),
                        sy: (1.0 / nf).into(),
                        oy: C64::new(0.0, *c),
                    };
                    Term::new(1.0, surf(SurfaceDef::ScherkBI), map)
                })
                .collect();
            (lhs, rhs, BranchPolicy::Mod2PiI, vec![("c", json!(shifts))])
        }
        "kamien-decomp" => {
            let beta = params.beta.unwrap_or(PI / 6.0);
            let s = beta.sin() / nf;
            if s.is_nan() || s.abs() > 1.0 {
                return Err(CatalogError::ParamDomain(format!(
                    "|sin β|/n = {} exceeds 1",
                    s.abs()
                )));
            }
            if beta.cos() == 0.0 {
                return Err(CatalogError::ParamDomain("cos β = 0".into()));
            }
            if n > 1 && s == 0.0 {
                return Err(CatalogError::ParamDomain(
                    "sin β = 0 leaves the shifts undefined".into(),
                ));
            }
            let bt = if n == 1 { beta } else { s.asin() };
            let lhs = Term::new(
                1.0,
                surf(SurfaceDef::Scherk1 { alpha: 2.0 * beta }),
                Affine::real(1.0 / beta.cos(), 0.0, 1.0, 0.0),
            );
            let pref = bt.cos() / beta.cos();
            let rhs = (0..n)
                .map(|m| {
                    let shift = m as f64 / nf * PI / bt.sin();
                    Term::new(
                        pref,
                        surf(SurfaceDef::Scherk1 { alpha: 2.0 * bt }),
                        Affine::real(1.0 / bt.cos(), 0.0, 1.0, shift),
                    )
                })
                .collect();
            pi_period = PI / beta.cos().abs();
            (
                lhs,
                rhs,
                BranchPolicy::ModPi,
                vec![
                    ("beta", json!(beta)),
                    ("beta_tilde", json!(bt)),
                    ("prefactor", json!(pref)),
                ],
            )
        }
        "helicoid-decomp" => {
            let lhs = Term::new(1.0, TermFn::TanhCot, Affine::IDENTITY);
            let inv = 1.0 / nf;
            let mut rhs = Vec::with_capacity(5 * n);
            for m in 1..n {
                let mp = m as f64 * PI;
                // atan(tanh(y/n) cot((x + mπ)/n))
                rhs.push(Term::new(
                    1.0,
                    TermFn::TanhCot,
                    Affine::real(inv, mp * inv, inv, 0.0),
                ));
                // −atan((y/n) / ((x + mπ)/n))
                rhs.push(Term::new(
                    -1.0,
                    surf(SurfaceDef::Helicoid),
                    Affine::real(inv, mp * inv, inv, 0.0),
                ));
            }
            rhs.push(Term::new(
                1.0,
                TermFn::TanhCot,
                Affine::real(inv, 0.0, inv, 0.0),
            ));
            for m in 1..n {
                let mp = m as f64 * PI;
                // −atan((y/n) / ((x + mπ)/n − π))
                rhs.push(Term::new(
                    -1.0,
                    surf(SurfaceDef::Helicoid),
                    Affine::real(inv, mp * inv - PI, inv, 0.0),
                ));
            }
            for m in 1..n {
                let mp = m as f64 * PI;
                rhs.push(Term::new(
                    1.0,
                    surf(SurfaceDef::Helicoid),
                    Affine::real(1.0, mp, 1.0, 0.0),
                ));
            }
            for m in 1..n {
                let mp = m as f64 * PI;
                rhs.push(Term::new(
                    1.0,
                    surf(SurfaceDef::Helicoid),
                    Affine::real(1.0, -mp, 1.0, 0.0),
                ));
            }
            (lhs, rhs, BranchPolicy::ModPi, vec![])
        }
        "general-scaled" => {
            let base_id = params.surface.as_deref().unwrap_or("scherk2");
            let base = builtin_surface(base_id)?.def;
            let list = |v: &Vec<f64>, name: &str, default: f64| -> Result<Vec<f64>, CatalogError> {
                match v.len() {
                    0 => Ok(vec![default; n]),
                    k if k == n => Ok(v.clone()),
                    k => Err(CatalogError::ParamDomain(format!(
                        "`{name}` has {k} entries, expected n = {n}"
                    ))),
                }
            };
            let a = list(&params.a, "a", 1.0)?;
            let b = list(&params.b, "b", 0.0)?;
            let c = list(&params.c, "c", 1.0)?;
            let d = list(&params.d, "d", 0.0)?;
            if a.contains(&0.0) {
                return Err(CatalogError::ParamDomain(
                    "every a_m must be nonzero".into(),
                ));
            }
            if c.contains(&0.0) {
                return Err(CatalogError::ParamDomain(
                    "every c_m must be nonzero".into(),
                ));
            }
            let cn: f64 = c.iter().map(|v| 1.0 / v).sum();
            if cn == 0.0 {
                return Err(CatalogError::ParamDomain("C_n = Σ 1/c_m vanishes".into()));
            }
            let lhs = Term::new(1.0, surf(base.clone()), Affine::IDENTITY);
            let rhs = (0..n)
                .map(|m| {
                    let zm = SurfaceDef::Transformed {
                        base: Box::new(base.clone()),
                        a: a[m],
                        b: b[m],
                        d: d[m],
                        factor: 1.0 / c[m],
                    };
                    Term::new(1.0 / cn, surf(zm), Affine::real(a[m], b[m], a[m], d[m]))
                })
                .collect();
            (
                lhs,
                rhs,
                BranchPolicy::Principal,
                vec![
                    ("surface", json!(base_id)),
                    ("a", json!(a)),
                    ("b", json!(b)),
                    ("c", json!(c)),
                    ("d", json!(d)),
                    ("C_n", json!(cn)),
                ],
            )
        }
        other => return Err(CatalogError::UnknownIdentity(other.to_string())),
    };
    let mut record = vec![("n", json!(n))];
    record.extend(extra);
    Ok(IdentityInstance {
        id: id.to_string(),
        n,
        params: map_of(record),
        lhs,
        rhs,
        policy,
        pi_period,
    })
}

/// The rescaled components `α_m Z_m` of a `general-scaled` instance, where
/// `α_m = c_m a_m`. Each is `a_m Z((x − b_m)/a_m, (y − d_m)/a_m)`, the image of
/// `Z` under the homothety of ratio `a_m` and the translation `(b_m, d_m)`, so
/// it solves the same graph equation as `Z`. Empty for other identities.
pub fn rescaled_components(inst: &IdentityInstance) -> Vec<HeightSurface> {
    if inst.id != "general-scaled" {
        return Vec::new();
    }
    inst.rhs
        .iter()
        .filter_map(|t| match &t.func {
            TermFn::Surface(SurfaceDef::Transformed { base, a, b, d, .. }) => {
                Some(HeightSurface::new(SurfaceDef::Transformed {
                    base: base.clone(),
                    a: *a,
                    b: *b,
                    d: *d,
                    factor: *a,
                }))
            }
            _ => None,
        })
        .collect()
}

/// Checks the identity at every real grid point. Fails with
/// [`CatalogError::DomainViolation`] if any point is within `grid.margin` of a
/// singular set of either side.
pub fn verify_identity(
    inst: &IdentityInstance,
    grid: &GridSpec,
    tol: f64,
) -> Result<VerificationReport, CatalogError> {
    let points: Vec<(C64, C64)> = grid
        .points()
        .into_iter()
        .map(|(x, y)| (C64::from(x), C64::from(y)))
        .collect();
    let mut report = verify_at_points(inst, &points, grid.margin, tol)?;
    report.grid = Some(*grid);
    Ok(report)
}

/// As [`verify_identity`] on an explicit list of (possibly complex) points.
pub fn verify_at_points(
    inst: &IdentityInstance,
    points: &[(C64, C64)],
    margin: f64,
    tol: f64,
) -> Result<VerificationReport, CatalogError> {
    if points.is_empty() {
        return Err(CatalogError::EmptyGrid);
    }
    let bad: Vec<(C64, C64)> = points
        .iter()
        .filter(|(x, y)| !inst.in_domain(*x, *y, margin))
        .copied()
        .collect();
    if !bad.is_empty() {
        return Err(CatalogError::DomainViolation {
            subject: inst.id.clone(),
            points: bad,
        });
    }
    let results: Vec<Result<(f64, C64, C64), CatalogError>> = points
        .par_iter()
        .map(|(x, y)| inst.discrepancy(*x, *y))
        .collect();
    let mut acc = ErrorAccumulator::new();
    for ((x, y), r) in points.iter().zip(results) {
        let (err, l, r) = r?;
        acc.push(err, &[*x, *y], l, r);
    }
    Ok(acc.finish(
        inst.id.clone(),
        inst.params.clone(),
        None,
        inst.policy.name(),
        tol,
    ))
}

/// `count` complex probe pairs with real parts in `[-1, 1]` and imaginary
/// parts in `(-max_im, max_im)`, drawn by rejection so that every term of
/// `inst` stays in its domain.
pub fn complex_probes(
    inst: &IdentityInstance,
    count: usize,
    max_im: f64,
    margin: f64,
    seed: u64,
) -> Vec<(C64, C64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let draw =
        |rng: &mut ChaCha8Rng| C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-max_im..max_im));
    let mut attempts = 0usize;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let (x, y) = (draw(&mut rng), draw(&mut rng));
        if inst.in_domain(x, y, margin) {
            out.push((x, y));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    /// `atan(a/b) + Σ_{k=1..K} [atan(a/(b + kπ)) + atan(a/(b − kπ))]`
    ArctanSum,
    /// `ln |Π_{k=1..K} ((k−½)π − a)((k−½)π + a) / (((k−½)π − b)((k−½)π + b))|`,
    /// which tends to `ln(cos a / cos b)`.
    CosProduct,
    /// `Σ_{k=−K..K} atan(a/(b + kπ))`
    ArctanBilateral,
}

impl SeriesKind {
    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::ArctanSum => "arctan-sum",
            SeriesKind::CosProduct => "cos-product",
            SeriesKind::ArctanBilateral => "arctan-bilateral",
        }
    }
}

impl FromStr for SeriesKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "arctan-sum" => Ok(SeriesKind::ArctanSum),
            "cos-product" => Ok(SeriesKind::CosProduct),
            "arctan-bilateral" => Ok(SeriesKind::ArctanBilateral),
            _ => Err(format!("unknown series kind `{s}`")),
        }
    }
}

/// Truncated Euler–Ramanujan series. The arctangent kinds tend to
/// `atan(tanh(a) cot(b))`; the cosine product tends to `ln(cos a / cos b)`.
pub fn er_series_partial(
    kind: SeriesKind,
    a: f64,
    b: f64,
    k_max: usize,
) -> Result<f64, CatalogError> {
    let singular = || CatalogError::SingularArgument {
        kind: kind.name(),
        a,
        b,
    };
    match kind {
        SeriesKind::ArctanSum | SeriesKind::ArctanBilateral => {
            if b == 0.0 || (b / PI - (b / PI).round()).abs() < 1e-15 {
                return Err(singular());
            }
            let term = |k: f64| (a / (b + k * PI)).atan();
            let mut s = 0.0;
            if kind == SeriesKind::ArctanSum {
                s += term(0.0);
                for k in 1..=k_max {
                    let k = k as f64;
                    s += term(k) + term(-k);
                }
            } else {
                for k in -(k_max as i64)..=(k_max as i64) {
                    s += term(k as f64);
                }
            }
            Ok(s)
        }
        SeriesKind::CosProduct => {
            let half = b / PI - 0.5;
            if (half - half.round()).abs() < 1e-15 {
                return Err(singular());
            }
            let mut s = 0.0;
            for k in 1..=k_max {
                let p = (k as f64 - 0.5) * PI;
                s += (((p - a) * (p + a)) / ((p - b) * (p + b))).abs().ln();
            }
            Ok(s)
        }
    }
}

//! Composite Gauss–Legendre quadrature along real intervals and straight
//! complex segments.
//!
//! The refinement loop doubles the number of equal panels until two
//! successive estimates agree to the requested tolerance.

use std::sync::OnceLock;

use thiserror::Error;

use crate::expr::C64;

/// Nodes per panel.
pub const DEFAULT_ORDER: usize = 32;
/// Successive-refinement tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Maximum panel count (2^10).
pub const MAX_PANELS: usize = 1 << 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("integrand is singular on the path at t = {t}: {reason}")]
    SingularPath { t: f64, reason: String },
    #[error("quadrature did not converge with {panels} panels (last change {change:e})")]
    NoConvergence { panels: usize, change: f64 },
}

/// Nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of P_n by Newton iteration from the Chebyshev-like initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

pub fn default_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(DEFAULT_ORDER))
}

/// Integrates a vector-valued function of `t ∈ [0, 1]` with `panels` equal
/// panels. The integrand receives `t` and returns `N` values or an error
/// message.
fn composite<const N: usize, F>(
    rule: &GaussLegendre,
    panels: usize,
    f: &mut F,
) -> Result<[C64; N], QuadError>
where
    F: FnMut(f64) -> Result<[C64; N], String>,
{
    let mut acc = [C64::new(0.0, 0.0); N];
    let h = 1.0 / panels as f64;
    for p in 0..panels {
        let a = p as f64 * h;
        let mut panel = [C64::new(0.0, 0.0); N];
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let t = a + 0.5 * h * (x + 1.0);
            let vals = f(t).map_err(|reason| QuadError::SingularPath { t, reason })?;
            for (k, v) in vals.iter().enumerate() {
                if !v.is_finite() {
                    return Err(QuadError::SingularPath {
                        t,
                        reason: "non-finite integrand".into(),
                    });
                }
                panel[k] += v * *w;
            }
        }
        for k in 0..N {
            acc[k] += panel[k] * (0.5 * h);
        }
    }
    Ok(acc)
}

/// Adaptive composite integration of `f` over `t ∈ [0, 1]`.
pub fn integrate_unit<const N: usize, F>(mut f: F, tol: f64) -> Result<[C64; N], QuadError>
where
    F: FnMut(f64) -> Result<[C64; N], String>,
{
    let rule = default_rule();
    let mut prev = composite(rule, 1, &mut f)?;
    let mut panels = 2;
    let mut change = f64::INFINITY;
    while panels <= MAX_PANELS {
        let next = composite(rule, panels, &mut f)?;
        change = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let scale = next.iter().map(|v| v.norm()).fold(1.0, f64::max);
        if change < tol * scale {
            return Ok(next);
        }
        prev = next;
        panels *= 2;
    }
    Err(QuadError::NoConvergence {
        panels: MAX_PANELS,
        change,
    })
}

/// `∫ f(w) dw` along the straight segment from `a` to `b`, for a vector of
/// integrands evaluated together.
pub fn integrate_segment<const N: usize, F>(
    a: C64,
    b: C64,
    mut f: F,
    tol: f64,
) -> Result<[C64; N], QuadError>
where
    F: FnMut(C64) -> Result<[C64; N], String>,
{
    let d = b - a;
    if d == C64::new(0.0, 0.0) {
        return Ok([C64::new(0.0, 0.0); N]);
    }
    let mut out = integrate_unit(|t| f(a + d * t), tol)?;
    for v in out.iter_mut() {
        *v *= d;
    }
    Ok(out)
}

/// Real interval `∫_a^b f(t) dt` for a vector of real integrands.
pub fn integrate_interval<const N: usize, F>(
    a: f64,
    b: f64,
    mut f: F,
    tol: f64,
) -> Result<[f64; N], QuadError>
where
    F: FnMut(f64) -> Result<[f64; N], String>,
{
    let out = integrate_segment(
        C64::new(a, 0.0),
        C64::new(b, 0.0),
        |w| f(w.re).map(|vals| vals.map(|v| C64::new(v, 0.0))),
        tol,
    )?;
    Ok(out.map(|v| v.re))
}

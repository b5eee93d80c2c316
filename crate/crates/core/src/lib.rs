//! Zero-mean-curvature surfaces in Euclidean and Lorentz–Minkowski space.
//!
//! - [`expr`]: complex-analytic expressions, the input format for all data.
//! - [`catalog`]: closed-form height surfaces and their finite decomposition
//!   identities, with policy-aware verification.
//! - [`zmc`]: graph ZMC equations and a parametric ZMC check for any diagonal
//!   signature.
//! - [`reps`]: Weierstrass–Enneper, timelike and Barbishov–Charnikov
//!   representations, splitting and inversion.
//! - [`foliation`]: the shifted-helicoid foliation.
//! - [`meshio`]: grids, patches, OBJ and CSV export.
//! - [`cli`]: the `zmc` command line.

pub mod catalog;
pub mod cli;
pub mod expr;
pub mod foliation;
pub mod meshio;
pub mod quad;
pub mod report;
pub mod reps;
pub mod zmc;

pub use catalog::{
    builtin_surface, identity_terms, verify_identity, HeightSurface, IdentityInstance,
};
pub use expr::{AnalyticExpr, C64};
pub use meshio::{GridSpec, SurfacePatch};
pub use report::VerificationReport;

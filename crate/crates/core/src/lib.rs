//! Volumes of central hyperplane sections and projections of `ℓ_p` balls
//! through their probabilistic first-moment formulas, plus numerical checks
//! of the stability inequalities around the extremal direction
//! `(e₁+e₂)/√2`.
//!
//! Monte Carlo estimates are keyed by `(seed, sample index)`, so every
//! result is reproducible and independent of the rayon pool size.

pub mod distributions;
pub mod domain;
pub mod error;
pub mod inequality_lab;
pub mod mc;
pub mod phase;
pub mod projections;
pub mod quad;
pub mod sections;
pub mod special;
pub mod stability;
pub mod sweeps;

pub use domain::{
    canonicalize, deficit, lp_norm, Direction, Exponent, LemmaId, LemmaVerdict, MCEstimate, Relation, StabilityReport,
    VerdictStatus,
};
pub use error::{Error, Result};
pub use projections::{estimate_projection_ratio, ProjectionQuery};
pub use sections::{estimate_section_ratio, SectionQuery};

//! Convergence acceleration for slowly convergent series by nonlinear
//! condensation combined with a Levin-type (delta) sequence transformation,
//! with applications: Lerch's transcendent, the Riemann and Hurwitz zeta
//! functions, the Lerch family of discrete probability distributions,
//! plate-contact boundary series, and a high-precision verification harness
//! for a digamma-series identity.
//!
//! The crate is generic over the floating kernel via the [`real::Real`]
//! trait, with two implementations: native `f64` and the arbitrary-precision
//! [`real::BigReal`].

pub mod bailey;
pub mod condensation;
pub mod distributions;
pub mod driver;
pub mod error;
pub mod lerch;
pub mod levin;
pub mod numerics;
pub mod real;
pub mod series;

pub use driver::{accelerate, accelerate_alternating, AccelerationResult, Termination};
pub use error::{Error, Result};
pub use numerics::PrecisionContext;
pub use real::{BigReal, Real};
pub use series::{PlateKind, SignProfile, TermSource};

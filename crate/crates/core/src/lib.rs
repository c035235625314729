//! Nonnegative matrix factorization under a Lévy observation model, with the
//! usual Euclidean / KL / Itakura-Saito baselines, positive α-stable sampling,
//! Wiener-style separation and the synthetic experiments built on them.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.

pub mod error;
pub mod experiments;
pub mod matrix;
pub mod metrics;
pub mod nmf;
pub mod random;
pub mod scalar;
pub mod separation;
pub mod signal;
pub mod stable;

pub use error::{Error, Result};
pub use matrix::NonnegMatrix;
pub use nmf::{fit, FactorPair, FitConfig, FitTrace, Model, Rule};
pub use scalar::Scalar;
pub use stable::StableParams;

pub type Matrix = NonnegMatrix<f64>;
pub type Factors = FactorPair<f64>;
pub type Config = FitConfig<f64>;
pub type Params = StableParams<f64>;
pub type Components = separation::ComponentSet<f64>;

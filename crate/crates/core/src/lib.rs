//! Exact algebra and desk-scale experiments around image sets `f(A, B, C)`
//! of trivariate quadratics.
//!
//! - [`poly`], [`parse`], [`matrix`]: rational multivariate polynomials,
//!   their text grammar and exact determinants.
//! - [`quadratic`]: the degenerate / Falconer-type classification.
//! - [`reduction`]: lifting maps, the bilinear phase and its curvature
//!   determinant, bad sets and fiber counts.
//! - [`finite_field`]: brute-force image sets over prime fields.
//! - [`fractal`]: Cantor covers, interval image measures and near-zero mass.
//! - [`threshold`]: exact dimension-threshold arithmetic.

pub mod error;
pub mod finite_field;
pub mod fractal;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod quadratic;
pub mod rational;
pub mod reduction;
pub mod report;
pub mod threshold;

pub use error::{Error, Result};
pub use poly::MPoly;
pub use quadratic::{classify, Classification, Quadratic3};
pub use rational::Rational;

//! Urysohn width machinery: simplicial complexes and their maps, widths of
//! maps and covers, local-join decompositions of `R^n`, foliation
//! interpolation with width certificates, the skeletal waist construction
//! and the block-scaled bundle metric.

pub mod bundlemetric;
pub mod cert;
pub mod cli;
pub mod complex;
pub mod error;
pub mod foliation;
pub mod geometry;
pub mod localjoin;
pub mod sampling;
pub mod scalar;
pub mod unionfind;
pub mod waist;
pub mod width;

pub use error::{Error, Result};

/// Join decomposition over `f64`.
pub type JoinDecomposition64 = localjoin::JoinDecomposition<f64>;
pub type JoinDecomposition32 = localjoin::JoinDecomposition<f32>;
pub type Theorem22Map64 = localjoin::Theorem22Map<f64>;
pub type GromovCube64 = localjoin::GromovCube<f64>;
/// Exact rationals for closed-form constants.
pub type Rational = num_rational::BigRational;
pub type WaistConstants64 = waist::WaistConstants<f64>;
pub type WaistConstantsExact = waist::WaistConstants<Rational>;

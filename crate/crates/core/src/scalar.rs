//! Scalar abstractions shared by the geometric and arithmetic code.
//!
//! Geometry (points, barycentric solves, bump profiles, join coordinates) is
//! written against [`Real`]; closed-form constants and recurrences only need
//! field arithmetic and are written against [`Field`], so they evaluate
//! exactly over rationals as well as over floats.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, Num, NumCast};

/// Floating point scalar: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + NumCast + Debug + Default + Send + Sync + 'static {
    /// Converts an `f64` literal, panicking only for non-representable input.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Field scalar for closed-form constants: floats or exact rationals.
pub trait Field: Num + Clone + PartialOrd + Debug {
    fn from_u64(n: u64) -> Self;
}

impl Field for f64 {
    fn from_u64(n: u64) -> Self {
        n as f64
    }
}

impl Field for f32 {
    fn from_u64(n: u64) -> Self {
        n as f32
    }
}

impl Field for num_rational::Ratio<i64> {
    fn from_u64(n: u64) -> Self {
        num_rational::Ratio::from_integer(n as i64)
    }
}

impl Field for num_rational::BigRational {
    fn from_u64(n: u64) -> Self {
        num_rational::BigRational::from_integer(n.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_roundtrip() {
        assert_eq!(<f32 as Real>::lit(0.5), 0.5f32);
        assert_eq!(<f64 as Field>::from_u64(7), 7.0);
        let r = <num_rational::Ratio<i64> as Field>::from_u64(3);
        assert_eq!(r, num_rational::Ratio::from_integer(3));
    }
}

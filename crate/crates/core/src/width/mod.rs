//! Widths of maps and covers.

mod cover;
mod exact;

pub use cover::{
    compose_covers, cover_from_map, nerve_map_from_cover, restrict, Cover, DepthFn, MultiplicityReport, NerveMap,
    Piece,
};
pub use exact::{fiber_diameter_exact, map_width, map_width_sampled, FiberIndex, MapWidthReport, TargetPoint};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Closed-form width of the unit ball `B^n` against `(n-1)`-dimensional
/// targets: `sqrt((2n + 2) / n)`.
pub fn ball_width_reference<S: Real>(n: usize) -> Result<S> {
    if n == 0 {
        return Err(Error::InvalidParameter("ball dimension must be at least 1".into()));
    }
    let n = S::from_usize(n).unwrap();
    Ok(((S::lit(2.0) * n + S::lit(2.0)) / n).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemicontinuityReport {
    pub y: f64,
    pub bound_at_y: f64,
    pub nearby: Vec<(f64, f64)>,
    pub limsup: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares a fiber-width bound at `y` with the bounds along a sequence
/// approaching `y`; the tail half of the sequence estimates the limsup.
pub fn semicontinuity_probe<F>(bound: F, y: f64, sequence: &[f64], tolerance: f64) -> SemicontinuityReport
where
    F: Fn(f64) -> f64,
{
    let bound_at_y = bound(y);
    let nearby: Vec<(f64, f64)> = sequence.iter().map(|&s| (s, bound(s))).collect();
    let tail = &nearby[nearby.len() / 2..];
    let limsup = tail.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let passed = tail.is_empty() || bound_at_y >= limsup - tolerance;
    SemicontinuityReport { y, bound_at_y, nearby, limsup, tolerance, passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_reference_values() {
        assert_eq!(ball_width_reference::<f64>(1).unwrap(), 2.0);
        assert!((ball_width_reference::<f64>(2).unwrap() - 3f64.sqrt()).abs() < 1e-12);
        assert!((ball_width_reference::<f64>(3).unwrap() - 1.632_993_161_855_452).abs() < 1e-12);
        assert!(ball_width_reference::<f64>(0).is_err());
        let v: Vec<f64> = (1..200).map(|n| ball_width_reference(n).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] < w[0]));
        assert!((v[198] - 2f64.sqrt()).abs() < 1e-2);
        assert!((ball_width_reference::<f32>(2).unwrap() - 3f32.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn constant_family_probe() {
        let seq: Vec<f64> = (1..20).map(|k| 0.5 + 1.0 / k as f64).collect();
        let r = semicontinuity_probe(|_| 1.0, 0.5, &seq, 0.0);
        assert!(r.passed);
        assert_eq!(r.limsup, r.bound_at_y);
    }
}

//! A trivial bundle `F × Y → Y` with a metric whose total space has large
//! width while every fiber has small width: the projection is perturbed by
//! the join map of a local join structure on `F`, and the metric is squeezed
//! away from a euclidean core in the perturbed coordinates.

mod construction;
mod distance;
mod witness;

pub use construction::{regular_simplex, simplex_distance, BundleConstruction, BundleManifest, JacobianMode};
pub use distance::DistanceGraph;
pub use witness::{
    core_identity_check, fiber_witness_bundle, metric_eigen_range, witness_scaling, BundleWitness, CoreIdentityReport,
    ScalingRow,
};

/// Cut-off profile: 1 on `[0, 1]`, 0 on `[1.1, ∞)`, quintic smoothstep in
/// between.
pub fn phi1(s: f64) -> f64 {
    if s <= 1.0 {
        1.0
    } else if s >= 1.1 {
        0.0
    } else {
        let u = (s - 1.0) / 0.1;
        1.0 - u * u * u * (u * (6.0 * u - 15.0) + 10.0)
    }
}

/// `φ_r(x) = φ1(|x| / r)`.
pub fn bump(r: f64, x: &[f64]) -> f64 {
    phi1(x.iter().map(|c| c * c).sum::<f64>().sqrt() / r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_sandwich() {
        let mut prev = 1.0;
        for i in 0..=3000 {
            let s = i as f64 * 1e-3;
            let v = phi1(s);
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= prev);
            prev = v;
            if s <= 1.0 {
                assert_eq!(v, 1.0);
            }
            if s >= 1.1 {
                assert_eq!(v, 0.0);
            }
        }
        assert_eq!(bump(2.0, &[1.2, 1.6]), 1.0);
        assert_eq!(bump(2.0, &[0.0, 2.2]), 0.0);
    }
}

//! Local join decomposition induced by grouping colors into `m + 1` blocks
//! of `d + 1` consecutive colors.

use serde::{Deserialize, Serialize};

use super::triangulation::ColoredTriangulation;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JoinDecomposition<S> {
    pub tri: ColoredTriangulation<S>,
    pub m: usize,
    pub d: usize,
}

/// `x = Σ t_i z_i`; `z[i]` is `None` exactly when `t[i] == 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JoinCoords<S> {
    pub t: Vec<S>,
    pub z: Vec<Option<Vec<S>>>,
}

impl<S: Real> JoinCoords<S> {
    pub fn reconstruct(&self) -> Vec<S> {
        let n = self.z.iter().flatten().next().map_or(0, Vec::len);
        let mut x = vec![S::zero(); n];
        for (ti, zi) in self.t.iter().zip(&self.z) {
            if let Some(zi) = zi {
                for (a, b) in x.iter_mut().zip(zi) {
                    *a = *a + *ti * *b;
                }
            }
        }
        x
    }
}

impl<S: Real> JoinDecomposition<S> {
    pub fn new(m: usize, d: usize, h: S) -> Self {
        let n = (m + 1) * (d + 1) - 1;
        assert!(n >= 1, "ambient dimension must be positive");
        Self { tri: ColoredTriangulation::new(n, h), m, d }
    }

    pub fn n(&self) -> usize {
        self.tri.n
    }

    pub fn block(&self, color: usize) -> usize {
        color / (self.d + 1)
    }

    pub fn join_coords(&self, x: &[S]) -> JoinCoords<S> {
        let (simplex, w) = self.tri.locate(x);
        let n = self.n();
        let mut t = vec![S::zero(); self.m + 1];
        let mut acc = vec![vec![S::zero(); n]; self.m + 1];
        for (v, &wk) in simplex.vertices().iter().zip(&w) {
            if wk == S::zero() {
                continue;
            }
            let i = self.block(self.tri.color(v));
            t[i] = t[i] + wk;
            for (a, p) in acc[i].iter_mut().zip(self.tri.position(v)) {
                *a = *a + wk * p;
            }
        }
        let z = t
            .iter()
            .zip(acc)
            .map(|(&ti, a)| (ti > S::zero()).then(|| a.into_iter().map(|c| c / ti).collect()))
            .collect();
        JoinCoords { t, z }
    }

    pub fn tau(&self, x: &[S]) -> Vec<S> {
        self.join_coords(x).t
    }

    /// Retraction onto `Z_i`, defined off the dual complex.
    pub fn pi_i(&self, x: &[S], i: usize) -> Result<Vec<S>> {
        let z = self.join_coords(x).z.swap_remove(i);
        let z = z.ok_or(Error::PointInDualComplex)?;
        let bound = self.tri.simplex_diameter();
        let moved = crate::geometry::dist(&z, x);
        if moved >= bound {
            return Err(Error::WidthBound {
                context: "retraction displacement".into(),
                measured: moved.to_f64_lossy(),
                bound: bound.to_f64_lossy(),
            });
        }
        Ok(z)
    }
}

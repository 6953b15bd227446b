//! The join map restricted to the unit ball, with retraction witnesses
//! showing every fiber has small `d`-width.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::join::JoinDecomposition;
use crate::error::{Error, Result};
use crate::geometry::{diameter, dist, norm};
use crate::sampling::rng;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem22Map<S> {
    pub join: JoinDecomposition<S>,
    pub eps: S,
}

/// Builds `τ|_{B^n}` on a grid fine enough that every retraction moves
/// points by less than `eps / 2`.
pub fn theorem22_construct<S: Real>(m: usize, d: usize, eps: S) -> Result<Theorem22Map<S>> {
    if !(eps > S::zero()) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps:?}")));
    }
    let n = (m + 1) * (d + 1) - 1;
    if n == 0 {
        return Err(Error::InvalidParameter("m = d = 0 gives a 0-dimensional ball".into()));
    }
    let root_n = S::from_usize(n).unwrap().sqrt();
    let h = eps / (S::lit(2.0) * root_n) * S::lit(0.99);
    Ok(Theorem22Map { join: JoinDecomposition::new(m, d, h), eps })
}

/// Result of probing one fiber `f^{-1}(t)` through `π_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberWitness {
    pub i: usize,
    pub fiber_points: usize,
    pub groups: usize,
    pub max_diameter: f64,
    /// Largest `|y - π_i(y)|` over fiber points; below `eps / 2` certifies the width.
    pub max_displacement: f64,
}

/// Index used for the witness: largest `t_i`, ties to the smallest index.
pub fn witness_index<S: Real>(t: &[S]) -> usize {
    let mut best = 0;
    for (i, &ti) in t.iter().enumerate() {
        if ti > t[best] {
            best = i;
        }
    }
    best
}

impl<S: Real> Theorem22Map<S> {
    pub fn n(&self) -> usize {
        self.join.n()
    }

    pub fn eval(&self, x: &[S]) -> Vec<S> {
        self.join.tau(x)
    }

    /// Pushes a domain sample onto the fiber over `t` inside its own simplex:
    /// keeps `z_i(x)` and rebuilds `Σ t_j z_j`, where each other `z_j` is
    /// either kept or replaced by a random point of the block-`j` face.
    /// Returns `z_i` and the fiber points sharing it.
    fn fiber_group(&self, x: &[S], t: &[S], i: usize, variants: usize, seed: u64) -> (Vec<S>, Vec<Vec<S>>) {
        let tri = &self.join.tri;
        let (simplex, w) = tri.locate(x);
        let verts = simplex.vertices();
        let n = self.n();
        let blocks = self.join.m + 1;
        let mut faces: Vec<Vec<Vec<S>>> = vec![Vec::new(); blocks];
        let mut acc = vec![vec![S::zero(); n]; blocks];
        let mut mass = vec![S::zero(); blocks];
        for (v, &wk) in verts.iter().zip(&w) {
            let j = self.join.block(tri.color(v));
            let p = tri.position(v);
            for (a, c) in acc[j].iter_mut().zip(&p) {
                *a = *a + wk * *c;
            }
            mass[j] = mass[j] + wk;
            faces[j].push(p);
        }
        let own: Vec<Vec<S>> = (0..blocks)
            .map(|j| {
                if mass[j] > S::zero() {
                    acc[j].iter().map(|&a| a / mass[j]).collect()
                } else {
                    let k = S::from_usize(faces[j].len()).unwrap();
                    (0..n).map(|c| faces[j].iter().fold(S::zero(), |s, p| s + p[c]) / k).collect()
                }
            })
            .collect();
        let combine = |z: &[Vec<S>]| -> Vec<S> {
            (0..n).map(|c| (0..blocks).fold(S::zero(), |s, j| s + t[j] * z[j][c])).collect()
        };
        let mut out = vec![combine(&own)];
        let mut r = rng(seed);
        for _ in 0..variants {
            let z: Vec<Vec<S>> = (0..blocks)
                .map(|j| {
                    if j == i {
                        return own[i].clone();
                    }
                    let raw: Vec<f64> = faces[j].iter().map(|_| -r.gen::<f64>().ln()).collect();
                    let total: f64 = raw.iter().sum();
                    (0..n)
                        .map(|c| faces[j].iter().zip(&raw).fold(S::zero(), |s, (p, &e)| s + S::lit(e / total) * p[c]))
                        .collect()
                })
                .collect();
            out.push(combine(&z));
        }
        (own[i].clone(), out)
    }

    /// Measures `π_i` restricted to `f^{-1}(t)`. Fiber points are produced from
    /// the domain samples; points with the same `π_i` image form exact
    /// witness fibers, which are then merged when their images share a
    /// `delta`-cell.
    pub fn fiber_witness(
        &self,
        t: &[S],
        samples: &[Vec<S>],
        variants: usize,
        delta: f64,
        seed: u64,
    ) -> Result<FiberWitness> {
        let m = self.join.m;
        let total = t.iter().fold(S::zero(), |s, &x| s + x);
        if t.len() != m + 1 || t.iter().any(|&x| x < S::zero()) || (total - S::one()).abs() > S::lit(1e-9) {
            return Err(Error::InvalidParameter(format!("target {t:?} is not a point of the {m}-simplex")));
        }
        let i = witness_index(t);
        let groups: Vec<(Vec<i64>, Vec<Vec<S>>, f64)> = samples
            .par_iter()
            .enumerate()
            .filter_map(|(k, x)| {
                let (zi, pts) = self.fiber_group(x, t, i, variants, seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let pts: Vec<Vec<S>> = pts.into_iter().filter(|p| norm(p) <= S::one()).collect();
                if pts.is_empty() {
                    return None;
                }
                let moved = pts.iter().map(|p| dist(p, &zi).to_f64_lossy()).fold(0.0, f64::max);
                let key = zi.iter().map(|c| (c.to_f64_lossy() / delta).round() as i64).collect();
                Some((key, pts, moved))
            })
            .collect();
        if groups.is_empty() {
            return Err(Error::EmptyFiber);
        }
        let fiber_points = groups.iter().map(|g| g.1.len()).sum();
        let max_displacement = groups.iter().map(|g| g.2).fold(0.0, f64::max);
        let mut bins: HashMap<Vec<i64>, Vec<Vec<S>>> = HashMap::new();
        for (key, pts, _) in groups {
            bins.entry(key).or_default().extend(pts);
        }
        let max_diameter = bins
            .par_iter()
            .map(|(_, pts)| diameter::<S, _>(pts).to_f64_lossy())
            .reduce(|| 0.0, f64::max);
        Ok(FiberWitness { i, fiber_points, groups: bins.len(), max_diameter, max_displacement })
    }
}

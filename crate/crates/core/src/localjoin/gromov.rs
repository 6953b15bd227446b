//! The cube example: `f = d_0 / (d_0 + d_1)` for the 1-skeleta of a cubical
//! grid and of its dual grid, with radial retraction witnesses.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{brute_diameter, dist};
use crate::sampling::rng;
use crate::scalar::Real;

/// Which skeleton: `0` is the grid (offset 0), `1` the dual grid (offset 1/2).
pub type Side = usize;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GromovCube<S> {
    pub eps: S,
    pub cells: usize,
}

fn offset<S: Real>(side: Side) -> S {
    if side == 0 {
        S::zero()
    } else {
        S::lit(0.5)
    }
}

impl<S: Real> GromovCube<S> {
    pub fn new(eps: S) -> Result<Self> {
        let inv = S::one() / eps;
        if !(eps > S::zero()) || (inv - inv.round()).abs() > S::lit(1e-9) {
            return Err(Error::InvalidParameter(format!("1/eps must be a positive integer, got eps = {eps:?}")));
        }
        Ok(Self { eps, cells: inv.round().to_usize().unwrap() })
    }

    fn snap(&self, c: S, side: Side) -> S {
        let o = offset::<S>(side);
        ((c / self.eps - o).round() + o) * self.eps
    }

    fn residuals(&self, x: &[S], side: Side) -> Vec<S> {
        x.iter().map(|&c| (c - self.snap(c, side)).abs()).collect()
    }

    /// Axis of the nearest skeleton line: the coordinate left free.
    fn free_axis(&self, x: &[S], side: Side) -> usize {
        let r = self.residuals(x, side);
        (0..3).fold(0, |b, a| if r[a] > r[b] { a } else { b })
    }

    pub fn skeleton_dist(&self, x: &[S], side: Side) -> S {
        let mut r = self.residuals(x, side);
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        (r[0] * r[0] + r[1] * r[1]).sqrt()
    }

    pub fn nearest_skeleton_point(&self, x: &[S], side: Side) -> (Vec<S>, usize) {
        let a = self.free_axis(x, side);
        let p = (0..3).map(|k| if k == a { x[k] } else { self.snap(x[k], side) }).collect();
        (p, a)
    }

    pub fn eval(&self, x: &[S]) -> S {
        let d0 = self.skeleton_dist(x, 0);
        let d1 = self.skeleton_dist(x, 1);
        d0 / (d0 + d1)
    }

    /// Witness retraction onto skeleton `side`: radial projection from the
    /// centre of the surrounding dual cell to its boundary, then from the
    /// centre of the hit 2-face to that face's boundary edges.
    pub fn retract(&self, x: &[S], side: Side) -> Option<Vec<S>> {
        let half = self.eps / S::lit(2.0);
        let c: Vec<S> = x.iter().map(|&v| self.snap(v, 1 - side)).collect();
        let s: Vec<S> = x.iter().zip(&c).map(|(&a, &b)| a - b).collect();
        let k = (0..3).fold(0, |b, a| if s[a].abs() > s[b].abs() { a } else { b });
        if s[k] == S::zero() {
            return None;
        }
        let scale = half / s[k].abs();
        let p: Vec<S> = (0..3).map(|a| c[a] + s[a] * scale).collect();
        let q: Vec<S> = (0..3).map(|a| if a == k { p[a] } else { c[a] }).collect();
        let u: Vec<S> = (0..3).map(|a| p[a] - q[a]).collect();
        let j = (0..3).filter(|&a| a != k).fold(if k == 0 { 1 } else { 0 }, |b, a| if u[a].abs() > u[b].abs() { a } else { b });
        if u[j] == S::zero() {
            return None;
        }
        let scale = half / u[j].abs();
        Some((0..3).map(|a| q[a] + u[a] * scale).collect())
    }

    pub fn in_cube(&self, x: &[S]) -> bool {
        let tol = S::lit(1e-12);
        x.iter().all(|&c| c >= -tol && c <= S::one() + tol)
    }

    /// First point with `f = y` on the segment `a -> b`, given `f(a)` and
    /// `f(b)` on opposite sides of `y`.
    fn level_on_segment(&self, a: &[S], b: &[S], y: S) -> Vec<S> {
        let fa = self.eval(a);
        let (mut lo, mut hi) = (S::zero(), S::one());
        let at = |s: S| -> Vec<S> { a.iter().zip(b).map(|(&p, &q)| p + (q - p) * s).collect() };
        for _ in 0..64 {
            let mid = (lo + hi) / S::lit(2.0);
            let below = (self.eval(&at(mid)) - y) * (fa - y) > S::zero();
            if below {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        at((lo + hi) / S::lit(2.0))
    }

    /// Moves `x` onto the level set `f = y` along the segment between its
    /// nearest points on the two skeleta.
    pub fn level_point(&self, x: &[S], y: S) -> Vec<S> {
        let (a, _) = self.nearest_skeleton_point(x, 0);
        let (b, _) = self.nearest_skeleton_point(x, 1);
        self.level_on_segment(&a, &b, y)
    }

    /// Points of `r_y^{-1}(r)` inside `f^{-1}(y)`, where `r` lies on a line of
    /// skeleton `side` parallel to `axis`. The preimage is swept by rays from
    /// `r` into the triangles (cell centre, face centre, r) of the cells around
    /// the edge; only points that retract back to `r` are kept.
    pub fn witness_fiber(&self, r: &[S], axis: usize, side: Side, y: S, rays: usize) -> Vec<Vec<S>> {
        let half = self.eps / S::lit(2.0);
        let others: Vec<usize> = (0..3).filter(|&a| a != axis).collect();
        let mut out = Vec::new();
        for sb in [-S::one(), S::one()] {
            for sc in [-S::one(), S::one()] {
                let mut c = r.to_vec();
                c[axis] = self.snap(r[axis], 1 - side);
                c[others[0]] = r[others[0]] + sb * half;
                c[others[1]] = r[others[1]] + sc * half;
                for &face in &others {
                    let mut q = c.clone();
                    q[face] = r[face];
                    for k in 0..=rays {
                        let u = S::from_usize(k).unwrap() / S::from_usize(rays.max(1)).unwrap();
                        let w: Vec<S> = c.iter().zip(&q).map(|(&a, &b)| a + (b - a) * u).collect();
                        let p = self.level_on_segment(r, &w, y);
                        if !self.in_cube(&p) {
                            continue;
                        }
                        if let Some(back) = self.retract(&p, side) {
                            if dist(&back, r) < S::lit(1e-9) {
                                out.push(p);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideReport {
    pub y: f64,
    pub side: Side,
    pub fibers: usize,
    pub max_diameter: f64,
    pub max_displacement: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GromovReport {
    pub eps: f64,
    pub rows: Vec<SideReport>,
    pub max_diameter: f64,
    /// Measured constant: `max_diameter / eps`.
    pub c: f64,
    pub all_sides_witnessed: bool,
}

/// Sweeps the levels `ys`; levels below 1/2 use the grid retraction, above
/// 1/2 the dual one, and 1/2 itself both.
pub fn gromov_witness_sweep(cube: &GromovCube<f64>, ys: &[f64], edges: usize, rays: usize, seed: u64) -> GromovReport {
    let jobs: Vec<(f64, Side)> = ys
        .iter()
        .flat_map(|&y| {
            let mut v = Vec::new();
            if y <= 0.5 {
                v.push((y, 0));
            }
            if y >= 0.5 {
                v.push((y, 1));
            }
            v
        })
        .collect();
    let rows: Vec<SideReport> = jobs
        .par_iter()
        .enumerate()
        .map(|(j, &(y, side))| {
            let mut g = rng(seed.wrapping_add(j as u64));
            let mut fibers = 0;
            let mut max_diameter: f64 = 0.0;
            let mut max_displacement: f64 = 0.0;
            for _ in 0..edges {
                let x: Vec<f64> = (0..3).map(|_| g.gen::<f64>()).collect();
                let (r, axis) = cube.nearest_skeleton_point(&x, side);
                let pts = cube.witness_fiber(&r, axis, side, y, rays);
                if pts.is_empty() {
                    continue;
                }
                fibers += 1;
                max_diameter = max_diameter.max(brute_diameter::<f64, _>(&pts));
                for p in &pts {
                    max_displacement = max_displacement.max(dist(p, &r));
                }
            }
            SideReport { y, side, fibers, max_diameter, max_displacement }
        })
        .collect();
    let max_diameter = rows.iter().map(|r| r.max_diameter).fold(0.0, f64::max);
    GromovReport {
        eps: cube.eps,
        all_sides_witnessed: rows.iter().all(|r| r.fibers > 0),
        c: max_diameter / cube.eps,
        max_diameter,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skeleta_values() {
        let g = GromovCube::<f64>::new(0.25).unwrap();
        assert_eq!(g.eval(&[0.25, 0.5, 0.13]), 0.0);
        assert_eq!(g.eval(&[0.125, 0.375, 0.9]), 1.0);
        // every coordinate halfway between the two lattices
        let e = g.eval(&[0.0625, 0.3125, 0.5625]);
        assert!((e - 0.5).abs() < 1e-12);
        assert!(GromovCube::new(0.3).is_err());
    }

    #[test]
    fn skeleton_distance_matches_brute_force() {
        let g = GromovCube::new(0.25).unwrap();
        let mut r = rng(3);
        for _ in 0..200 {
            let x: Vec<f64> = (0..3).map(|_| r.gen::<f64>()).collect();
            for side in 0..2 {
                let o = if side == 0 { 0.0 } else { 0.5 };
                let lattice: Vec<f64> = (-1..=5).map(|k| (k as f64 + o) * 0.25).collect();
                let mut best = f64::INFINITY;
                for a in 0..3 {
                    let (b, c) = ((a + 1) % 3, (a + 2) % 3);
                    for &lb in &lattice {
                        for &lc in &lattice {
                            best = best.min(((x[b] - lb).powi(2) + (x[c] - lc).powi(2)).sqrt());
                        }
                    }
                }
                assert!((g.skeleton_dist(&x, side) - best).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn retraction_lands_on_skeleton() {
        let g = GromovCube::new(0.125).unwrap();
        let mut r = rng(5);
        for _ in 0..500 {
            let x: Vec<f64> = (0..3).map(|_| r.gen::<f64>()).collect();
            for side in 0..2 {
                let p = g.retract(&x, side).unwrap();
                assert!(g.skeleton_dist(&p, side) < 1e-12);
                assert!(dist(&p, &x) <= 0.125 * 3f64.sqrt() + 1e-12);
                let level = g.level_point(&x, 0.3);
                assert!((g.eval(&level) - 0.3).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn witness_fibers_small() {
        for eps in [0.25, 0.125] {
            let g = GromovCube::new(eps).unwrap();
            let rep = gromov_witness_sweep(&g, &[0.2, 0.5, 0.8], 20, 8, 1);
            assert!(rep.all_sides_witnessed, "{rep:?}");
            assert!(rep.c > 0.1 && rep.c < 6.0, "{rep:?}");
        }
    }
}

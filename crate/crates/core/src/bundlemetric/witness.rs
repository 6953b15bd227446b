use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bump;
use super::construction::BundleConstruction;
use crate::error::{Error, Result};
use crate::geometry::{brute_diameter, diameter, dist, norm};
use crate::localjoin::LatticeSimplex;
use crate::sampling::{ball_points, box_points};
use crate::width::ball_width_reference;

const CONTAINMENT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleWitness {
    pub m: usize,
    pub k: usize,
    pub eps: f64,
    pub y: Vec<f64>,
    pub i: usize,
    pub samples: usize,
    /// Distinct non-⋆ fibers examined.
    pub fibers: usize,
    pub star_points: usize,
    /// Upper bound on the largest non-⋆ fiber diameter in `X`.
    pub non_star_width: f64,
    /// Diameter of the sampled ⋆-fiber in `X` (exact for the samples).
    pub star_width: f64,
    pub width: f64,
    /// `width / ε`.
    pub c: f64,
    pub containment_violations: usize,
    pub whole_fiber_squeezed: bool,
}

impl BundleConstruction {
    /// Witness index for `y`: the smallest `i` whose opposite facet is more
    /// than 2.2 away.
    pub fn witness_index(&self, y: &[f64]) -> Result<usize> {
        (0..=self.m)
            .find(|&i| self.face_distance(y, i) > 2.2)
            .ok_or_else(|| Error::InvalidParameter(format!("no facet of the simplex is 2.2 away from {y:?}")))
    }

    /// The witness map on `X_y`: `(π_i(f), τ(f))`, or `None` for the point ⋆.
    pub fn witness_map(&self, i: usize, f: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        let jc = self.join.join_coords(f);
        let z = jc.z[i].clone()?;
        Some((z, jc.t))
    }

    /// Freudenthal simplices containing every vertex of `face`.
    fn star_simplices(&self, face: &[Vec<i64>]) -> Vec<LatticeSimplex> {
        let n = self.n_f();
        let v = &face[0];
        let mut out = Vec::new();
        for perm in (0..n).permutations(n) {
            for r in 0..=n {
                let mut base = v.clone();
                for &a in &perm[..r] {
                    base[a] -= 1;
                }
                let s = LatticeSimplex { base, perm: perm.clone() };
                let verts = s.vertices();
                if face.iter().all(|u| verts.contains(u)) {
                    out.push(s);
                }
            }
        }
        out
    }

    /// Extreme points of `τ^{-1}(t) ∩ π_i^{-1}(z)`, where `f` lies on it.
    fn fiber_extremes(&self, f: &[f64], i: usize) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
        let tri = &self.join.tri;
        let (simplex, w) = tri.locate(f);
        let jc = self.join.join_coords(f);
        let z = jc.z[i].clone().expect("t_i > 0");
        let t = jc.t;
        let face: Vec<Vec<i64>> = simplex
            .vertices()
            .into_iter()
            .zip(&w)
            .filter(|(v, &wk)| wk > 0.0 && self.join.block(tri.color(v)) == i)
            .map(|(v, _)| v)
            .collect();
        let n = self.n_f();
        let mut pts = Vec::new();
        for s in self.star_simplices(&face) {
            let mut per_block: Vec<Vec<Vec<f64>>> = vec![Vec::new(); self.m + 1];
            for v in s.vertices() {
                per_block[self.join.block(tri.color(&v))].push(tri.position(&v));
            }
            let others: Vec<usize> = (0..=self.m).filter(|&j| j != i && t[j] > 0.0).collect();
            for choice in others.iter().map(|&j| per_block[j].iter()).multi_cartesian_product() {
                let mut p: Vec<f64> = z.iter().map(|c| t[i] * c).collect();
                for (&j, v) in others.iter().zip(&choice) {
                    for c in 0..n {
                        p[c] += t[j] * v[c];
                    }
                }
                pts.push(p);
            }
            if others.is_empty() {
                pts.push(z.iter().map(|c| t[i] * c).collect());
            }
        }
        (z, t, pts)
    }
}

/// Samples `X_y` and measures the fibers of the witness map.
pub fn fiber_witness_bundle(b: &BundleConstruction, y: &[f64], samples: usize, seed: u64) -> Result<BundleWitness> {
    if y.len() != b.m {
        return Err(Error::InvalidParameter(format!("y must have {} coordinates", b.m)));
    }
    let i = b.witness_index(y)?;
    let fs = ball_points(b.n_f(), b.f_radius, samples, seed);
    let slack = b.join.tri.simplex_diameter();
    // non-⋆ fibers, keyed by their (z, t) image
    let rows: Vec<(Vec<i64>, f64, usize)> = fs
        .par_iter()
        .filter_map(|f| {
            let t = b.join.tau(f);
            if t[i] <= 0.0 {
                return None;
            }
            let (z, t, pts) = b.fiber_extremes(f, i);
            let violations = pts
                .iter()
                .filter(|p| {
                    let jc = b.join.join_coords(p);
                    let bad_t = jc.t.iter().zip(&t).any(|(a, c)| (a - c).abs() > CONTAINMENT_TOL);
                    let bad_z = jc.z[i].as_ref().map_or(true, |zi| dist(zi, &z) > CONTAINMENT_TOL);
                    bad_t || bad_z
                })
                .count();
            let yp: Vec<f64> = y.iter().zip(b.simplex_point(&t)).map(|(a, c)| a - c).collect();
            let r = (norm(&z) - slack).max(0.0);
            let c_max = b.eps + (1.0 - b.eps) * bump(2.0, &yp) * super::phi1(r / 2.0);
            let w = c_max.sqrt() * brute_diameter::<f64, _>(&pts);
            let key = z.iter().chain(&t).map(|x| (x * 1e9).round() as i64).collect();
            Some((key, w, violations))
        })
        .collect();
    let containment_violations = rows.iter().map(|r| r.2).sum();
    let non_star_width = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let fibers = rows.iter().map(|r| &r.0).unique().count();
    // ⋆-fiber: push samples onto Z_i^∨ along the join lines
    let star: Vec<Vec<f64>> = fs
        .par_iter()
        .filter_map(|f| {
            let jc = b.join.join_coords(f);
            if jc.t[i] >= 1.0 {
                return None;
            }
            let rest = 1.0 - jc.t[i];
            let mut fs = vec![0.0; b.n_f()];
            for (j, zj) in jc.z.iter().enumerate() {
                if let (true, Some(zj)) = (j != i, zj) {
                    fs.iter_mut().zip(zj).for_each(|(a, c)| *a += jc.t[j] / rest * c);
                }
            }
            if norm(&fs) > b.f_radius {
                return None;
            }
            let mut x = fs;
            x.extend_from_slice(y);
            Some(b.phi(&x))
        })
        .collect();
    // the straight Φ-segments between ⋆ points keep y' in y minus the
    // opposite facet, which is > 2.2 from the origin: the metric is ε·I there
    let star_width = b.eps.sqrt() * diameter::<f64, _>(&star);
    let width = non_star_width.max(star_width);
    Ok(BundleWitness {
        m: b.m,
        k: b.k,
        eps: b.eps,
        y: y.to_vec(),
        i,
        samples,
        fibers,
        star_points: star.len(),
        non_star_width,
        star_width,
        width,
        c: width / b.eps,
        containment_violations,
        whole_fiber_squeezed: super::simplex_distance(y, &b.delta) > 2.2,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoreIdentityReport {
    pub n: usize,
    pub samples: usize,
    pub max_deviation: f64,
    pub reference_width: f64,
    /// Largest `|g' − ε I|` on the carrier boundary `|f| = 3`.
    pub boundary_deviation: f64,
    pub ok: bool,
}

/// `g'` is the identity wherever both coordinate norms are at most 2, so the
/// unit ball there is euclidean and has width above 1.
pub fn core_identity_check(b: &BundleConstruction, samples: usize, seed: u64) -> Result<CoreIdentityReport> {
    let n = b.n();
    let fs = ball_points(b.n_f(), 2.0, samples, seed);
    let ys = ball_points(b.m, 2.0, samples, seed ^ 0xA5A5);
    let eye = nalgebra::DMatrix::<f64>::identity(n, n);
    let dev = |x: &[f64], target: &nalgebra::DMatrix<f64>| (b.metric_prime(x) - target).abs().max();
    let max_deviation = fs
        .par_iter()
        .zip(&ys)
        .map(|(f, y)| {
            let mut x = f.clone();
            x.extend_from_slice(y);
            dev(&x, &eye)
        })
        .reduce(|| 0.0, f64::max);
    let eps_eye = &eye * b.eps;
    let boundary_deviation = fs
        .iter()
        .zip(&ys)
        .take(1000)
        .filter(|(f, _)| norm(f) > 0.0)
        .map(|(f, y)| {
            let s = b.f_radius / norm(f);
            let mut x: Vec<f64> = f.iter().map(|c| c * s).collect();
            x.extend_from_slice(y);
            dev(&x, &eps_eye)
        })
        .fold(0.0, f64::max);
    let reference_width = ball_width_reference::<f64>(n)?;
    let ok = max_deviation <= 1e-12 && reference_width > 1.0 && boundary_deviation <= 1e-12;
    if !ok {
        return Err(Error::WidthBound { context: "core identity".into(), measured: max_deviation, bound: 1e-12 });
    }
    Ok(CoreIdentityReport { n, samples: fs.len(), max_deviation, reference_width, boundary_deviation, ok })
}

/// Smallest and largest eigenvalue of `g'` over a box covering the carrier.
pub fn metric_eigen_range(b: &BundleConstruction, samples: usize, seed: u64) -> (f64, f64) {
    let r = b.y_radius + b.m as f64 * super::construction::INRADIUS;
    box_points(b.n(), -r, r, samples, seed)
        .par_iter()
        .map(|x| {
            let ev = b.metric_prime(x).symmetric_eigen().eigenvalues;
            (ev.min(), ev.max())
        })
        .reduce(|| (f64::INFINITY, f64::NEG_INFINITY), |a, c| (a.0.min(c.0), a.1.max(c.1)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub eps: f64,
    pub non_star_width: f64,
    pub star_width: f64,
    pub width: f64,
    pub c: f64,
}

/// Worst witness widths over `ys` for each `ε`.
pub fn witness_scaling(m: usize, k: usize, eps: &[f64], ys: &[Vec<f64>], samples: usize, seed: u64) -> Result<Vec<ScalingRow>> {
    eps.iter()
        .map(|&e| {
            let b = BundleConstruction::new(m, k, e)?;
            let mut row = ScalingRow { eps: e, non_star_width: 0.0, star_width: 0.0, width: 0.0, c: 0.0 };
            for y in ys {
                let w = fiber_witness_bundle(&b, y, samples, seed)?;
                row.non_star_width = row.non_star_width.max(w.non_star_width);
                row.star_width = row.star_width.max(w.star_width);
            }
            row.width = row.non_star_width.max(row.star_width);
            row.c = row.width / e;
            Ok(row)
        })
        .collect()
}

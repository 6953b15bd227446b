use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::bump;
use crate::error::{Error, Result};
use crate::localjoin::JoinDecomposition;
use crate::sampling::ball_points;

/// Vertices of a regular `m`-simplex in `R^m` centered at the origin.
pub fn regular_simplex(m: usize, inradius: f64) -> Vec<Vec<f64>> {
    let c = 1.0 / (m + 1) as f64;
    let us: Vec<Vec<f64>> = (0..=m).map(|i| (0..=m).map(|j| if i == j { 1.0 - c } else { -c }).collect()).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for u in us.iter().take(m) {
        let mut v = u.clone();
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(b).for_each(|(a, b)| *a -= d * b);
        }
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        basis.push(v.into_iter().map(|a| a / n).collect());
    }
    // regular simplex: circumradius = m · inradius
    let scale = inradius * m as f64 / (m as f64 / (m + 1) as f64).sqrt();
    us.iter().map(|u| basis.iter().map(|b| scale * u.iter().zip(b).map(|(a, b)| a * b).sum::<f64>()).collect()).collect()
}

/// Euclidean distance from `p` to the simplex spanned by `verts`.
pub fn simplex_distance(p: &[f64], verts: &[Vec<f64>]) -> f64 {
    let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    if verts.len() == 1 {
        return d(p, &verts[0]);
    }
    let dim = p.len();
    let k = verts.len() - 1;
    let a = DMatrix::from_fn(dim, k, |r, c| verts[c + 1][r] - verts[0][r]);
    let rhs = DVector::from_fn(dim, |r, _| p[r] - verts[0][r]);
    if let Some(coef) = (a.transpose() * &a).lu().solve(&(a.transpose() * rhs)) {
        let s: f64 = coef.iter().sum();
        if coef.iter().all(|&c| c >= 0.0) && s <= 1.0 {
            let q: Vec<f64> = (0..dim).map(|r| verts[0][r] + (0..k).map(|c| coef[c] * a[(r, c)]).sum::<f64>()).collect();
            return d(p, &q);
        }
    }
    (0..verts.len())
        .map(|skip| {
            let face: Vec<Vec<f64>> = verts.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, v)| v.clone()).collect();
            simplex_distance(p, &face)
        })
        .fold(f64::INFINITY, f64::min)
}

/// How the piecewise constant Jacobian of the join map is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum JacobianMode {
    /// Exact on open simplices; faces are rejected.
    Strict,
    /// Averaged against a `C^1` kernel of the given radius.
    Mollified(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleManifest {
    pub m: usize,
    pub k: usize,
    pub eps: f64,
    pub h: f64,
    pub n: usize,
    pub f_radius: f64,
    pub y_radius: f64,
    pub inradius: f64,
    pub mode: JacobianMode,
}

#[derive(Clone, Debug)]
pub struct BundleConstruction {
    pub m: usize,
    pub k: usize,
    pub eps: f64,
    pub h: f64,
    pub join: JoinDecomposition<f64>,
    /// Vertices `v_0..v_m` of the simplex in `Y = R^m`.
    pub delta: Vec<Vec<f64>>,
    pub f_radius: f64,
    pub y_radius: f64,
    pub mode: JacobianMode,
}

pub const INRADIUS: f64 = 3.0;

impl BundleConstruction {
    pub fn new(m: usize, k: usize, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("m must be positive".into()));
        }
        let nf = m * k + m + k;
        let h = 0.99 * eps / (2.0 * (nf as f64).sqrt());
        Ok(Self {
            m,
            k,
            eps,
            h,
            join: JoinDecomposition::new(m, k, h),
            delta: regular_simplex(m, INRADIUS),
            f_radius: 3.0,
            y_radius: 3.0 + m as f64,
            mode: JacobianMode::Mollified(h / 10.0),
        })
    }

    pub fn with_mode(mut self, mode: JacobianMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn n_f(&self) -> usize {
        self.join.n()
    }

    pub fn n(&self) -> usize {
        self.n_f() + self.m
    }

    pub fn manifest(&self) -> BundleManifest {
        BundleManifest {
            m: self.m,
            k: self.k,
            eps: self.eps,
            h: self.h,
            n: self.n(),
            f_radius: self.f_radius,
            y_radius: self.y_radius,
            inradius: INRADIUS,
            mode: self.mode,
        }
    }

    /// The point of `Δ^m ⊂ R^m` with barycentric weights `t`.
    pub fn simplex_point(&self, t: &[f64]) -> Vec<f64> {
        (0..self.m).map(|c| t.iter().zip(&self.delta).map(|(w, v)| w * v[c]).sum()).collect()
    }

    pub fn tau_point(&self, f: &[f64]) -> Vec<f64> {
        self.simplex_point(&self.join.tau(f))
    }

    pub fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        x.split_at(self.n_f())
    }

    /// `p^τ = p − τ∘p_F`.
    pub fn p_tau(&self, x: &[f64]) -> Vec<f64> {
        let (f, y) = self.split(x);
        y.iter().zip(self.tau_point(f)).map(|(a, b)| a - b).collect()
    }

    /// `Φ = (p_F, p^τ)`.
    pub fn phi(&self, x: &[f64]) -> Vec<f64> {
        let mut out = self.split(x).0.to_vec();
        out.extend(self.p_tau(x));
        out
    }

    pub fn phi_inv(&self, xp: &[f64]) -> Vec<f64> {
        let (f, yp) = self.split(xp);
        let mut out = f.to_vec();
        out.extend(yp.iter().zip(self.tau_point(f)).map(|(a, b)| a + b));
        out
    }

    /// Scalar of the metric in `Φ`-coordinates: `ε + (1−ε)·φ_2(y')·φ_2(f)`.
    pub fn conformal(&self, xp: &[f64]) -> f64 {
        let (f, yp) = self.split(xp);
        self.eps + (1.0 - self.eps) * bump(2.0, yp) * bump(2.0, f)
    }

    pub fn metric_prime(&self, xp: &[f64]) -> DMatrix<f64> {
        DMatrix::identity(self.n(), self.n()) * self.conformal(xp)
    }

    /// Jacobian of `t = τ(f)` on the simplex containing `f`, `(m+1) × n_F`.
    fn tau_jacobian_exact(&self, f: &[f64]) -> Result<DMatrix<f64>> {
        let tri = &self.join.tri;
        let (simplex, w) = tri.locate(f);
        if w.iter().any(|&x| x <= 1e-12) {
            return Err(Error::NonSmoothLocus);
        }
        let n = self.n_f();
        let verts = simplex.vertices();
        let pos: Vec<Vec<f64>> = verts.iter().map(|v| tri.position(v)).collect();
        let a = DMatrix::from_fn(n, n, |r, c| pos[c + 1][r] - pos[0][r]);
        let inv = a.try_inverse().ok_or(Error::NonSmoothLocus)?;
        let mut dt = DMatrix::zeros(self.m + 1, n);
        for (l, v) in verts.iter().enumerate() {
            let i = self.join.block(tri.color(v));
            for c in 0..n {
                let g = if l == 0 { -(0..n).map(|r| inv[(r, c)]).sum::<f64>() } else { inv[(l - 1, c)] };
                dt[(i, c)] += g;
            }
        }
        Ok(dt)
    }

    pub fn tau_jacobian(&self, f: &[f64]) -> Result<DMatrix<f64>> {
        match self.mode {
            JacobianMode::Strict => self.tau_jacobian_exact(f),
            JacobianMode::Mollified(r) => {
                let n = self.n_f();
                let mut acc = DMatrix::zeros(self.m + 1, n);
                let mut total = 0.0;
                for u in ball_points(n, 1.0, 64, 0x5EED) {
                    let weight = (1.0 - u.iter().map(|x| x * x).sum::<f64>()).powi(2);
                    let q: Vec<f64> = f.iter().zip(&u).map(|(a, b)| a + r * b).collect();
                    if let Ok(j) = self.tau_jacobian_exact(&q) {
                        acc += j * weight;
                        total += weight;
                    }
                }
                if total == 0.0 {
                    return Err(Error::NonSmoothLocus);
                }
                Ok(acc / total)
            }
        }
    }

    /// Jacobian of `Φ` at `x`.
    pub fn phi_jacobian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let (nf, n) = (self.n_f(), self.n());
        let dt = self.tau_jacobian(self.split(x).0)?;
        let v = DMatrix::from_fn(self.m, self.m + 1, |r, c| self.delta[c][r]);
        let dy = -(v * dt);
        let mut j = DMatrix::identity(n, n);
        j.view_mut((nf, 0), (self.m, nf)).copy_from(&dy);
        Ok(j)
    }

    /// `g_X = Φ^* g'` at `x`.
    pub fn metric_pullback(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let j = self.phi_jacobian(x)?;
        let g = self.metric_prime(&self.phi(x));
        Ok(j.transpose() * g * j)
    }

    pub fn in_carrier(&self, x: &[f64]) -> bool {
        let (f, y) = self.split(x);
        let norm = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
        norm(f) <= self.f_radius + 1e-12 && norm(y) <= self.y_radius + 1e-12
    }

    /// Distance from `y` to the face of `Δ^m` opposite `v_i`.
    pub fn face_distance(&self, y: &[f64], i: usize) -> f64 {
        let face: Vec<Vec<f64>> = self.delta.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect();
        simplex_distance(y, &face)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::box_points;

    #[test]
    fn simplex_has_inradius_three() {
        for m in 1..=4 {
            let d = regular_simplex(m, 3.0);
            let o = vec![0.0; m];
            for i in 0..=m {
                let face: Vec<Vec<f64>> = d.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect();
                assert!((simplex_distance(&o, &face) - 3.0).abs() < 1e-12, "m={m}");
            }
        }
        assert!((regular_simplex(1, 3.0)[0][0].abs() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn dimensions_and_radii() {
        let b = BundleConstruction::new(1, 1, 0.1).unwrap();
        assert_eq!((b.n_f(), b.n()), (3, 4));
        assert_eq!((b.f_radius, b.y_radius), (3.0, 4.0));
        assert!(BundleConstruction::new(1, 0, 1.0).is_err());
    }

    #[test]
    fn p_tau_on_block_vertices_and_barycenters() {
        let b = BundleConstruction::new(1, 1, 0.2).unwrap();
        let tri = &b.join.tri;
        // vertex of color 2 lies in Z_1
        let v = [1i64, 1, 0];
        assert_eq!(b.join.block(tri.color(&v)), 1);
        let mut x = tri.position(&v);
        x.push(0.5);
        assert!((b.p_tau(&x)[0] - (0.5 - b.delta[1][0])).abs() < 1e-12);
        // barycenter of a simplex: equal block weights
        let (s, _) = tri.locate(&[0.013, 0.007, 0.002]);
        let verts = s.vertices();
        let mut c = vec![0.0; 3];
        for v in &verts {
            for (a, p) in c.iter_mut().zip(tri.position(v)) {
                *a += p / 4.0;
            }
        }
        c.push(0.7);
        assert!((b.p_tau(&c)[0] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn p_tau_continuous() {
        let b = BundleConstruction::new(1, 1, 0.5).unwrap();
        // τ is affine on simplices with gradient at most √n / h per weight
        let lip = 6.0 * 2.0 * 3f64.sqrt() / b.h;
        for x in box_points(4, -2.0, 2.0, 5000, 3) {
            for axis in 0..3 {
                let mut y = x.clone();
                y[axis] += 1e-7;
                let jump = (b.p_tau(&x)[0] - b.p_tau(&y)[0]).abs();
                assert!(jump < 1e-5 && jump <= lip * 1e-7 + 1e-12, "{jump}");
            }
        }
    }

    #[test]
    fn phi_round_trip() {
        let b = BundleConstruction::new(2, 0, 0.2).unwrap();
        for x in box_points(4, -1.0, 1.0, 50, 1) {
            let back = b.phi_inv(&b.phi(&x));
            assert!(x.iter().zip(&back).all(|(a, c)| (a - c).abs() < 1e-12));
        }
    }

    #[test]
    fn metric_prime_regions() {
        let b = BundleConstruction::new(1, 1, 0.05).unwrap();
        assert_eq!(b.metric_prime(&[1.0, 1.0, 0.5, -1.9]), DMatrix::identity(4, 4));
        assert_eq!(b.conformal(&[0.0, 0.0, 0.0, 2.3]), 0.05);
        let s1 = b.conformal(&[2.05, 0.0, 0.0, 0.0]);
        let s2 = b.conformal(&[2.15, 0.0, 0.0, 0.0]);
        assert!(0.05 < s2 && s2 < s1 && s1 < 1.0);
    }

    #[test]
    fn pullback_in_core_is_jtj() {
        let b = BundleConstruction::new(1, 1, 0.1).unwrap().with_mode(JacobianMode::Strict);
        let x = [0.0131, 0.0047, 0.0222, 0.3];
        let j = b.phi_jacobian(&x).unwrap();
        let g = b.metric_pullback(&x).unwrap();
        let c = b.conformal(&b.phi(&x));
        assert!((&g - j.transpose() * &j * c).abs().max() < 1e-9);
        // deep in the core, with both coordinate norms below 2
        let inner = b.phi_inv(&[0.0131, 0.0047, 0.0222, 0.3]);
        let ji = b.phi_jacobian(&inner).unwrap();
        assert_eq!(b.conformal(&b.phi(&inner)), 1.0);
        assert!((b.metric_pullback(&inner).unwrap() - ji.transpose() * &ji).abs().max() < 1e-12);
        assert!((g.determinant() - c.powi(4) * j.determinant().powi(2)).abs() < 1e-9 * g.determinant().abs().max(1.0));
        assert!(g.clone().symmetric_eigen().eigenvalues.min() > 0.0);
        // faces are rejected in strict mode, accepted when mollified
        let face = [0.0, 0.0, 0.0, 0.3];
        assert!(matches!(b.metric_pullback(&face), Err(Error::NonSmoothLocus)));
        let soft = b.clone().with_mode(JacobianMode::Mollified(b.h / 10.0));
        assert!(soft.metric_pullback(&face).is_ok());
    }

    #[test]
    fn far_region_spectral_bound() {
        let b = BundleConstruction::new(1, 0, 0.1).unwrap().with_mode(JacobianMode::Strict);
        let x = [2.71234, 3.9];
        let j = b.phi_jacobian(&x).unwrap();
        let g = b.metric_pullback(&x).unwrap();
        let smin = j.singular_values().min();
        let lmin = g.symmetric_eigen().eigenvalues.min();
        assert!(lmin >= 0.1 * smin * smin - 1e-9);
    }
}

//! Freudenthal–Kuhn triangulation of the scaled integer lattice with the
//! coordinate-sum coloring.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// A Freudenthal simplex: `v_0 = base`, `v_k = v_{k-1} + e_{perm[k-1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSimplex {
    pub base: Vec<i64>,
    pub perm: Vec<usize>,
}

impl LatticeSimplex {
    /// Lattice coordinates of the `n + 1` vertices in chain order.
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        let mut v = self.base.clone();
        let mut out = vec![v.clone()];
        for &axis in &self.perm {
            v[axis] += 1;
            out.push(v.clone());
        }
        out
    }
}

/// Implicit triangulation of `R^n` at grid scale `h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColoredTriangulation<S> {
    pub n: usize,
    pub h: S,
}

impl<S: Real> ColoredTriangulation<S> {
    pub fn new(n: usize, h: S) -> Self {
        assert!(n >= 1 && h > S::zero(), "dimension and grid scale must be positive");
        Self { n, h }
    }

    /// Color of a lattice vertex: coordinate sum mod `n + 1`.
    pub fn color(&self, v: &[i64]) -> usize {
        v.iter().sum::<i64>().rem_euclid(self.n as i64 + 1) as usize
    }

    pub fn position(&self, v: &[i64]) -> Vec<S> {
        v.iter().map(|&c| S::from_i64(c).expect("lattice coordinate") * self.h).collect()
    }

    /// Diameter of every simplex: the lattice diagonal `h * sqrt(n)`.
    pub fn simplex_diameter(&self) -> S {
        self.h * S::from_usize(self.n).expect("dimension").sqrt()
    }

    /// Simplex containing `x` with its barycentric weights (chain order).
    /// Ties between equal fractional parts go to the smaller axis first,
    /// which yields the lexicographically smallest sorting permutation.
    pub fn locate(&self, x: &[S]) -> (LatticeSimplex, Vec<S>) {
        assert_eq!(x.len(), self.n, "point dimension");
        let scaled: Vec<S> = x.iter().map(|&c| c / self.h).collect();
        let base: Vec<i64> = scaled.iter().map(|c| c.floor().to_i64().expect("finite point")).collect();
        let frac: Vec<S> = scaled.iter().zip(&base).map(|(&c, &b)| c - S::from_i64(b).unwrap()).collect();
        let mut perm: Vec<usize> = (0..self.n).collect();
        perm.sort_by(|&a, &b| frac[b].partial_cmp(&frac[a]).unwrap().then(a.cmp(&b)));
        let mut w = Vec::with_capacity(self.n + 1);
        w.push(S::one() - frac[perm[0]]);
        for k in 1..self.n {
            w.push(frac[perm[k - 1]] - frac[perm[k]]);
        }
        w.push(frac[perm[self.n - 1]]);
        (LatticeSimplex { base, perm }, w)
    }

    pub fn locate_simplex(&self, x: &[S]) -> LatticeSimplex {
        self.locate(x).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::barycentric;

    #[test]
    fn one_dimensional_edge() {
        let t = ColoredTriangulation::new(1, 1.0);
        let s = t.locate_simplex(&[0.5]);
        assert_eq!(s.vertices(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn planar_example_by_barycentric_solve() {
        let t = ColoredTriangulation::new(2, 1.0);
        let (s, w) = t.locate(&[0.7, 0.2]);
        assert_eq!(s.vertices(), vec![vec![0, 0], vec![1, 0], vec![1, 1]]);
        let pos: Vec<Vec<f64>> = s.vertices().iter().map(|v| t.position(v)).collect();
        let l = barycentric(&pos, &[0.7, 0.2]).unwrap();
        for (a, b) in l.iter().zip(&w) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn lattice_point_weight_one() {
        let t = ColoredTriangulation::new(3, 0.5);
        let (s, w) = t.locate(&[1.0, -0.5, 2.0]);
        assert_eq!(s.perm, vec![0, 1, 2]);
        assert_eq!(w[0], 1.0);
        assert!(w[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn colors_distinct_on_simplex() {
        let t = ColoredTriangulation::new(4, 1.0f32);
        let (s, _) = t.locate(&[0.3, -2.9, 5.5, 0.01]);
        let mut c: Vec<usize> = s.vertices().iter().map(|v| t.color(v)).collect();
        c.sort_unstable();
        assert_eq!(c, vec![0, 1, 2, 3, 4]);
        assert!((t.simplex_diameter() - 2.0).abs() < 1e-6);
    }
}

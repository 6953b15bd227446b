//! Small dense-vector geometry, generic over the scalar type.

use crate::scalar::Real;

pub fn sub<S: Real>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn dot<S: Real>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm<S: Real>(a: &[S]) -> S {
    dot(a, a).sqrt()
}

pub fn dist2<S: Real>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
}

pub fn dist<S: Real>(a: &[S], b: &[S]) -> S {
    dist2(a, b).sqrt()
}

/// `(1 - t) a + t b`.
pub fn lerp<S: Real>(a: &[S], b: &[S], t: S) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x + t * (y - x)).collect()
}

/// Diameter of a finite point set. Planar inputs go through the convex hull;
/// other dimensions use all pairs.
pub fn diameter<S: Real, P: AsRef<[S]>>(points: &[P]) -> S {
    if points.len() < 2 {
        return S::zero();
    }
    if points[0].as_ref().len() == 2 && points.len() > 16 {
        let hull = convex_hull_2d(points);
        return brute_diameter(&hull);
    }
    brute_diameter(points)
}

pub fn brute_diameter<S: Real, P: AsRef<[S]>>(points: &[P]) -> S {
    let mut best = S::zero();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = dist2(points[i].as_ref(), points[j].as_ref());
            if d > best {
                best = d;
            }
        }
    }
    best.sqrt()
}

/// Vertices of the planar convex hull (monotone chain), collinear points dropped.
pub fn convex_hull_2d<S: Real, P: AsRef<[S]>>(points: &[P]) -> Vec<[S; 2]> {
    let mut pts: Vec<[S; 2]> = points.iter().map(|p| [p.as_ref()[0], p.as_ref()[1]]).collect();
    pts.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap().then(a[1].partial_cmp(&b[1]).unwrap()));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [S; 2], a: [S; 2], b: [S; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[S; 2]> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= S::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= S::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Solves the square system `a x = b` by partial-pivot elimination.
/// Returns `None` for (numerically) singular systems.
pub fn solve<S: Real>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() <= S::epsilon() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            if factor == S::zero() {
                continue;
            }
            for c in col..n {
                let v = a[col][c];
                a[r][c] = a[r][c] - factor * v;
            }
            b[r] = b[r] - factor * b[col];
        }
    }
    let mut x = vec![S::zero(); n];
    for r in (0..n).rev() {
        let s = (r + 1..n).fold(b[r], |acc, c| acc - a[r][c] * x[c]);
        x[r] = s / a[r][r];
    }
    Some(x)
}

/// Barycentric coordinates of `x` in a full-dimensional simplex of `R^n`.
pub fn barycentric<S: Real>(vertices: &[Vec<S>], x: &[S]) -> Option<Vec<S>> {
    let n = x.len();
    if vertices.len() != n + 1 {
        return None;
    }
    let a: Vec<Vec<S>> = (0..n).map(|i| (1..=n).map(|j| vertices[j][i] - vertices[0][i]).collect()).collect();
    let rhs = sub(x, &vertices[0]);
    let l = solve(a, rhs)?;
    let l0 = l.iter().fold(S::one(), |acc, &v| acc - v);
    Some(std::iter::once(l0).chain(l).collect())
}

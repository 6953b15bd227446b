//! Integer homology ranks through the Smith normal form of boundary matrices.
//! Torsion is computed as part of the diagonal but only ranks are reported.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed};

use super::{SimplicialComplex, Simplex};
use crate::error::{Error, Result};

/// Nonzero diagonal entries of the Smith normal form of `a` (row-major,
/// dense). Each entry divides the next. Overflow of the scalar type is
/// reported as [`Error::Overflow`].
pub fn smith_diagonal<T>(mut a: Vec<Vec<T>>) -> Result<Vec<T>>
where
    T: Integer + Signed + Clone + CheckedAdd + CheckedSub + CheckedMul,
{
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_abs_entry(&a, t, t, m, n) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q, t)?;
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..m {
                    let v = a[i][t].checked_mul(&q).ok_or(Error::Overflow)?;
                    a[i][j] = a[i][j].checked_sub(&v).ok_or(Error::Overflow)?;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // bring the smallest remainder of row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..m {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.1 == t {
                    a.swap(t, best.0);
                } else {
                    for row in a.iter_mut() {
                        row.swap(t, best.1);
                    }
                }
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => row_axpy(&mut a, t, i, &(-T::one()), t)?,
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    Ok(diag)
}

fn min_abs_entry<T: Integer + Signed>(
    a: &[Vec<T>],
    r0: usize,
    c0: usize,
    m: usize,
    n: usize,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().take(m).skip(r0) {
        for (j, v) in row.iter().enumerate().take(n).skip(c0) {
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[bi][bj].abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
            if v.abs().is_one() {
                return best;
            }
        }
    }
    best
}

/// `row[i] -= q * row[src]` over columns `from..`.
fn row_axpy<T>(a: &mut [Vec<T>], i: usize, src: usize, q: &T, from: usize) -> Result<()>
where
    T: Integer + Clone + CheckedSub + CheckedMul,
{
    let n = a[i].len();
    for j in from..n {
        if a[src][j].is_zero() {
            continue;
        }
        let v = a[src][j].checked_mul(q).ok_or(Error::Overflow)?;
        a[i][j] = a[i][j].checked_sub(&v).ok_or(Error::Overflow)?;
    }
    Ok(())
}

/// Rank over the rationals of an integer matrix, via the Smith diagonal.
/// Falls back to big integers when `i64` arithmetic overflows.
pub fn integer_rank(a: &[Vec<i64>]) -> usize {
    if a.is_empty() || a[0].is_empty() {
        return 0;
    }
    match smith_diagonal(a.to_vec()) {
        Ok(d) => d.len(),
        Err(_) => {
            let big: Vec<Vec<BigInt>> =
                a.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
            smith_diagonal(big).map(|d| d.len()).unwrap_or(0)
        }
    }
}

pub(crate) fn index_of(c: &SimplicialComplex, k: usize) -> BTreeMap<Simplex, usize> {
    c.simplices_of_dim(k).cloned().enumerate().map(|(i, s)| (s, i)).collect()
}

/// Boundary matrix of dimension `k` (rows: (k-1)-simplices, columns: k-simplices).
pub(crate) fn boundary_matrix(c: &SimplicialComplex, k: usize) -> Vec<Vec<i64>> {
    let rows = index_of(c, k - 1);
    let cols = index_of(c, k);
    let mut a = vec![vec![0i64; cols.len()]; rows.len()];
    for (s, &j) in &cols {
        for drop in 0..s.len() {
            let mut f = s.clone();
            f.remove(drop);
            let sign = if drop % 2 == 0 { 1 } else { -1 };
            a[rows[&f]][j] = sign;
        }
    }
    a
}

/// Rank of `H_k(K; Z)` modulo torsion, for `k = 0..=dim`.
pub fn betti_numbers(c: &SimplicialComplex) -> Vec<usize> {
    let Some(dim) = c.dim() else { return Vec::new() };
    let ranks: Vec<usize> = (0..=dim + 1)
        .map(|k| if k == 0 || k > dim { 0 } else { integer_rank(&boundary_matrix(c, k)) })
        .collect();
    (0..=dim).map(|k| c.simplices_of_dim(k).count() - ranks[k] - ranks[k + 1]).collect()
}

/// Free rank of the first integer homology (first Betti number).
pub fn h1_rank(c: &SimplicialComplex) -> usize {
    let n1 = c.simplices_of_dim(1).count();
    if n1 == 0 {
        return 0;
    }
    let r1 = integer_rank(&boundary_matrix(c, 1));
    let r2 = if c.simplices_of_dim(2).next().is_some() {
        integer_rank(&boundary_matrix(c, 2))
    } else {
        0
    };
    n1 - r1 - r2
}

#[cfg(test)]
mod tests {
    use super::super::shapes;
    use super::*;

    #[test]
    fn smith_of_known_matrix() {
        // diag(2, 6) up to unimodular changes
        let a = vec![vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let d = smith_diagonal(a).unwrap();
        assert_eq!(d, vec![2, 6, 12]);
        let z = vec![vec![0i64, 0], vec![0, 0]];
        assert!(smith_diagonal(z).unwrap().is_empty());
    }

    #[test]
    fn smith_generic_over_bigint() {
        let a: Vec<Vec<BigInt>> = vec![vec![2.into(), 0.into()], vec![0.into(), 3.into()]];
        let d = smith_diagonal(a).unwrap();
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn circle_sphere_wedge() {
        assert_eq!(h1_rank(&shapes::cycle(3)), 1);
        assert_eq!(h1_rank(&shapes::simplex_boundary(3)), 0);
        let wedge = SimplicialComplex::new(5, [[0, 1], [1, 2], [0, 2], [0, 3], [3, 4], [0, 4]])
            .unwrap();
        assert_eq!(h1_rank(&wedge), 2);
        assert_eq!(h1_rank(&SimplicialComplex::empty()), 0);
    }

    #[test]
    fn wedge_boundary_matrices_by_hand() {
        // ∂1 of the wedge has rank V - 1 = 4; there are no 2-simplices.
        let wedge = SimplicialComplex::new(5, [[0, 1], [1, 2], [0, 2], [0, 3], [3, 4], [0, 4]])
            .unwrap();
        assert_eq!(integer_rank(&boundary_matrix(&wedge, 1)), 4);
        assert_eq!(betti_numbers(&wedge), vec![1, 2]);
    }

    #[test]
    fn torus_betti() {
        assert_eq!(betti_numbers(&shapes::torus(3, 3)), vec![1, 2, 1]);
        assert_eq!(betti_numbers(&shapes::simplex_boundary(3)), vec![1, 0, 1]);
    }
}

//! Example pairs of simple foliations on surfaces with boundary.

use rand::Rng;

use super::simple::{common_refinement, Foliation};
use crate::complex::{factor_to_simple_graph, shapes, SimplicialComplex, SimplicialMap};
use crate::error::Result;
use crate::sampling::rng;

#[derive(Clone, Debug)]
pub struct Demo {
    pub name: &'static str,
    pub beta: usize,
    pub p0: Foliation,
    pub p1: Foliation,
}

/// Connected factorization of a map into a graph, as a simple foliation.
pub fn simple_foliation(sigma: SimplicialComplex, target: SimplicialComplex, vmap: Vec<usize>) -> Result<Foliation> {
    let f = SimplicialMap::new(sigma, target, vmap)?;
    Foliation::new(factor_to_simple_graph(&f)?.map)
}

/// Simple foliations on a common subdivision from two maps of one complex
/// into graphs.
pub fn pair(f0: &SimplicialMap, f1: &SimplicialMap) -> Result<(Foliation, Foliation)> {
    common_refinement(f0, f1, 16)
}

/// Level sets of a linear function, binned finely enough to stay simplicial.
pub fn linear_foliation(sigma: &SimplicialComplex, dir: &[f64]) -> Result<Foliation> {
    let coords = sigma.coords().expect("embedded complex");
    let h: Vec<f64> = coords.iter().map(|x| x.iter().zip(dir).map(|(a, b)| a * b).sum()).collect();
    let step = sigma.edges().map(|(u, v)| (h[u] - h[v]).abs()).fold(0.0, f64::max).max(1e-9) * (1.0 + 1e-9);
    let lo = h.iter().copied().fold(f64::INFINITY, f64::min);
    let bins: Vec<usize> = h.iter().map(|&x| ((x - lo) / step).floor() as usize).collect();
    let n = bins.iter().max().unwrap() + 1;
    simple_foliation(sigma.clone(), shapes::path(n), bins)
}

pub fn random_linear_foliation(sigma: &SimplicialComplex, seed: u64) -> Result<Foliation> {
    let d = sigma.embedding_dim().expect("embedded complex");
    let mut r = rng(seed);
    let mut dir: Vec<f64> = (0..d).map(|_| r.gen_range(-1.0..1.0)).collect();
    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-9);
    dir.iter_mut().for_each(|x| *x /= norm);
    linear_foliation(sigma, &dir)
}

/// Grid disk foliated by columns and by rows.
pub fn disk(k: usize) -> Result<Demo> {
    let g = shapes::square_grid(k);
    let cols = (0..g.n_vertices()).map(|v| v % (k + 1)).collect();
    let rows = (0..g.n_vertices()).map(|v| v / (k + 1)).collect();
    Ok(Demo {
        name: "disk",
        beta: 0,
        p0: simple_foliation(g.clone(), shapes::path(k + 1), cols)?,
        p1: simple_foliation(g, shapes::path(k + 1), rows)?,
    })
}

pub fn annulus_complex(rings: usize, sectors: usize) -> SimplicialComplex {
    let id = |k: usize, j: usize| k * sectors + j % sectors;
    let mut tris = Vec::new();
    for k in 0..rings {
        for j in 0..sectors {
            tris.push([id(k, j), id(k + 1, j), id(k + 1, j + 1)]);
            tris.push([id(k, j), id(k + 1, j + 1), id(k, j + 1)]);
        }
    }
    let mut coords = Vec::new();
    for k in 0..=rings {
        let r = 1.0 + k as f64 / rings as f64;
        for j in 0..sectors {
            let a = std::f64::consts::TAU * j as f64 / sectors as f64;
            coords.push(vec![r * a.cos(), r * a.sin()]);
        }
    }
    SimplicialComplex::new((rings + 1) * sectors, tris).and_then(|c| c.with_coords(coords)).expect("valid annulus")
}

/// Annulus foliated by circles and by radial segments.
pub fn annulus(rings: usize, sectors: usize) -> Result<Demo> {
    let a = annulus_complex(rings, sectors);
    let n = a.n_vertices();
    let radial = (0..n).map(|v| v / sectors).collect();
    let angular = (0..n).map(|v| v % sectors).collect();
    Ok(Demo {
        name: "annulus",
        beta: 1,
        p0: simple_foliation(a.clone(), shapes::path(rings + 1), radial)?,
        p1: simple_foliation(a, shapes::cycle(sectors), angular)?,
    })
}

/// `k x k` grid with `2 x 2` blocks of cells removed (lower-left cells
/// given), dropping the isolated vertex at each block center. Returns the
/// complex and the grid position `(i, j)` of every vertex.
pub fn holed_grid(k: usize, holes: &[(usize, usize)]) -> (SimplicialComplex, Vec<(usize, usize)>) {
    let in_hole = |i: usize, j: usize| holes.iter().any(|&(a, b)| (a..a + 2).contains(&i) && (b..b + 2).contains(&j));
    let centers: Vec<(usize, usize)> = holes.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
    let mut id = vec![usize::MAX; (k + 1) * (k + 1)];
    let mut pos = Vec::new();
    for j in 0..=k {
        for i in 0..=k {
            if !centers.contains(&(i, j)) {
                id[j * (k + 1) + i] = pos.len();
                pos.push((i, j));
            }
        }
    }
    let v = |i: usize, j: usize| id[j * (k + 1) + i];
    let mut tris = Vec::new();
    for j in 0..k {
        for i in 0..k {
            if !in_hole(i, j) {
                tris.push([v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
                tris.push([v(i, j), v(i + 1, j + 1), v(i, j + 1)]);
            }
        }
    }
    let coords = pos.iter().map(|&(i, j)| vec![i as f64 / k as f64, j as f64 / k as f64]).collect();
    let c = SimplicialComplex::new(pos.len(), tris).and_then(|c| c.with_coords(coords)).expect("valid holed grid");
    (c, pos)
}

/// Square with two holes, foliated by columns and by rows.
pub fn two_holes(k: usize) -> Result<Demo> {
    assert!(k >= 7);
    let (g, pos) = holed_grid(k, &[(1, 1), (k - 3, k - 3)]);
    let cols = pos.iter().map(|p| p.0).collect();
    let rows = pos.iter().map(|p| p.1).collect();
    let f0 = SimplicialMap::new(g.clone(), shapes::path(k + 1), cols)?;
    let f1 = SimplicialMap::new(g, shapes::path(k + 1), rows)?;
    let (p0, p1) = pair(&f0, &f1)?;
    Ok(Demo { name: "two-holes", beta: 2, p0, p1 })
}

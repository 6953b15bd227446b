//! Finite simplicial complexes with optional euclidean embeddings, simplicial
//! maps, integer homology ranks and the connected (Reeb-style) factorization.

mod factor;
mod graph;
mod homology;
mod map;
mod subdivide;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

pub use factor::{connected_factorization, factor_to_simple_graph, ReebCell, ReebSpace, SimpleGraphFactor};
pub use graph::Graph;
pub use homology::{h1_rank, integer_rank, smith_diagonal, betti_numbers};
pub use map::{check_map_connected, h1_onto_check, ConnectivityReport, SimplicialMap};
pub use subdivide::{barycentric_carriers, barycentric_subdivide};

/// A simplex as a sorted tuple of vertex ids.
pub type Simplex = Vec<usize>;

/// Finite simplicial complex on dense vertex ids `0..n`.
///
/// The simplex set always contains every face of every listed simplex,
/// including the vertices themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialComplex {
    n_vertices: usize,
    coords: Option<Vec<Vec<f64>>>,
    simplices: BTreeSet<Simplex>,
}

impl SimplicialComplex {
    /// Builds the complex generated by `generators` (closed under faces).
    /// Every vertex `0..n_vertices` is included as a 0-simplex.
    pub fn new<I, S>(n_vertices: usize, generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let mut simplices: BTreeSet<Simplex> = (0..n_vertices).map(|v| vec![v]).collect();
        for g in generators {
            let mut s: Vec<usize> = g.as_ref().to_vec();
            s.sort_unstable();
            let before = s.len();
            s.dedup();
            if s.len() != before {
                return Err(Error::InvalidComplex(format!("repeated vertex in {s:?}")));
            }
            if s.is_empty() {
                continue;
            }
            if let Some(&v) = s.last() {
                if v >= n_vertices {
                    return Err(Error::InvalidComplex(format!("vertex {v} out of range")));
                }
            }
            insert_closure(&mut simplices, &s);
        }
        Ok(Self { n_vertices, coords: None, simplices })
    }

    /// The empty complex.
    pub fn empty() -> Self {
        Self { n_vertices: 0, coords: None, simplices: BTreeSet::new() }
    }

    /// Attaches an embedding; all coordinate vectors must share one dimension.
    pub fn with_coords(mut self, coords: Vec<Vec<f64>>) -> Result<Self> {
        if coords.len() != self.n_vertices {
            return Err(Error::InvalidComplex(format!(
                "{} coordinate vectors for {} vertices",
                coords.len(),
                self.n_vertices
            )));
        }
        if let Some(first) = coords.first() {
            let d = first.len();
            if coords.iter().any(|c| c.len() != d) {
                return Err(Error::InvalidComplex("mixed embedding dimensions".into()));
            }
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn is_empty(&self) -> bool {
        self.n_vertices == 0
    }

    /// Dimension of the complex, `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn n_simplices(&self) -> usize {
        self.simplices.len()
    }

    pub fn simplices_of_dim(&self, k: usize) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().filter(move |s| s.len() == k + 1)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.simplices_of_dim(1).map(|s| (s[0], s[1]))
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.simplices.contains(s)
    }

    /// Maximal simplices (not a proper face of another simplex).
    pub fn facets(&self) -> Vec<Simplex> {
        let mut covered: BTreeSet<Simplex> = BTreeSet::new();
        for s in self.simplices.iter().filter(|s| s.len() > 1) {
            for i in 0..s.len() {
                let mut f = s.clone();
                f.remove(i);
                covered.insert(f);
            }
        }
        self.simplices.iter().filter(|s| !covered.contains(*s)).cloned().collect()
    }

    /// Simplices having `s` as a proper face.
    pub fn cofaces_of<'a>(&'a self, s: &'a [usize]) -> impl Iterator<Item = &'a Simplex> + 'a {
        self.simplices
            .iter()
            .filter(move |t| t.len() > s.len() && s.iter().all(|v| t.binary_search(v).is_ok()))
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    pub fn coord(&self, v: usize) -> Option<&[f64]> {
        self.coords.as_ref().map(|c| c[v].as_slice())
    }

    pub fn embedding_dim(&self) -> Option<usize> {
        self.coords.as_ref().and_then(|c| c.first().map(Vec::len))
    }

    /// Checks the face-closure invariant on every simplex.
    pub fn check_face_closure(&self) -> Result<()> {
        for s in &self.simplices {
            if s.len() < 2 {
                continue;
            }
            for i in 0..s.len() {
                let mut f = s.clone();
                f.remove(i);
                if !self.simplices.contains(&f) {
                    return Err(Error::InvalidComplex(format!("face {f:?} of {s:?} missing")));
                }
            }
        }
        Ok(())
    }

    /// Connected component label of every vertex, and the component count.
    pub fn vertex_components(&self) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.n_vertices);
        for (a, b) in self.edges() {
            uf.union(a, b);
        }
        uf.labels()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_components().1 <= 1
    }

    /// Vertex adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for (a, b) in self.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Subcomplex spanned by simplices whose vertices all satisfy `keep`.
    /// Vertex ids are preserved; excluded vertices stay as isolated ids only
    /// if `keep` accepts them.
    pub fn full_subcomplex_simplices(&self, keep: impl Fn(usize) -> bool) -> Vec<Simplex> {
        self.simplices.iter().filter(|s| s.iter().all(|&v| keep(v))).cloned().collect()
    }

    /// Splits edge `{u, w}` at `x = (1 - lambda) u + lambda w`, replacing every
    /// simplex containing both endpoints by its two halves. Returns the new
    /// vertex id. Coordinates (when present) are interpolated.
    pub fn split_edge(&mut self, u: usize, w: usize, lambda: f64) -> usize {
        let x = self.n_vertices;
        self.n_vertices += 1;
        if let Some(coords) = self.coords.as_mut() {
            let p: Vec<f64> = coords[u]
                .iter()
                .zip(&coords[w])
                .map(|(a, b)| a + lambda * (b - a))
                .collect();
            coords.push(p);
        }
        let (lo, hi) = if u < w { (u, w) } else { (w, u) };
        let hit: Vec<Simplex> = self
            .simplices
            .iter()
            .filter(|s| s.binary_search(&lo).is_ok() && s.binary_search(&hi).is_ok())
            .cloned()
            .collect();
        self.simplices.insert(vec![x]);
        for s in &hit {
            self.simplices.remove(s);
        }
        for s in &hit {
            for drop in [lo, hi] {
                let mut t: Vec<usize> = s.iter().copied().filter(|&v| v != drop).collect();
                t.push(x);
                t.sort_unstable();
                insert_closure(&mut self.simplices, &t);
            }
        }
        x
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            vertices: (0..self.n_vertices)
                .map(|id| VertexJson { id, coords: self.coords.as_ref().map(|c| c[id].clone()) })
                .collect(),
            simplices: self.facets(),
        }
    }

    pub fn from_json(j: &ComplexJson) -> Result<Self> {
        let n = j.vertices.len();
        let mut seen = vec![false; n];
        for v in &j.vertices {
            if v.id >= n || seen[v.id] {
                return Err(Error::InvalidComplex(format!("vertex ids must be dense 0..{n}")));
            }
            seen[v.id] = true;
        }
        let c = Self::new(n, j.simplices.iter())?;
        let with: Vec<_> = j.vertices.iter().filter(|v| v.coords.is_some()).collect();
        if with.is_empty() {
            return Ok(c);
        }
        if with.len() != n {
            return Err(Error::InvalidComplex("coordinates given for some vertices only".into()));
        }
        let mut coords = vec![Vec::new(); n];
        for v in &j.vertices {
            coords[v.id] = v.coords.clone().unwrap_or_default();
        }
        c.with_coords(coords)
    }
}

fn insert_closure(set: &mut BTreeSet<Simplex>, s: &[usize]) {
    if set.contains(s) {
        return;
    }
    let k = s.len();
    // all nonempty subsets; complexes here are low dimensional
    for mask in 1u32..(1u32 << k) {
        let f: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
        set.insert(f);
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VertexJson {
    pub id: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coords: Option<Vec<f64>>,
}

/// JSON form: `{"vertices":[{"id":..,"coords":[..]}],"simplices":[[..]]}`.
/// Only facets are written; reading closes under faces.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComplexJson {
    pub vertices: Vec<VertexJson>,
    pub simplices: Vec<Simplex>,
}

/// JSON form of a vertex map, with sorted keys.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VertexMapJson {
    pub vertex_map: BTreeMap<usize, usize>,
}

/// Standard small complexes used across tests and demos.
pub mod shapes {
    use super::SimplicialComplex;

    /// Boundary of the `k`-simplex on vertices `0..=k`.
    pub fn simplex_boundary(k: usize) -> SimplicialComplex {
        let gens: Vec<Vec<usize>> =
            (0..=k).map(|skip| (0..=k).filter(|&v| v != skip).collect()).collect();
        SimplicialComplex::new(k + 1, gens).expect("valid boundary")
    }

    /// Full `k`-simplex.
    pub fn simplex(k: usize) -> SimplicialComplex {
        SimplicialComplex::new(k + 1, [(0..=k).collect::<Vec<_>>()]).expect("valid simplex")
    }

    /// Cycle graph on `n >= 3` vertices.
    pub fn cycle(n: usize) -> SimplicialComplex {
        SimplicialComplex::new(n, (0..n).map(|i| [i, (i + 1) % n])).expect("valid cycle")
    }

    /// Path graph on `n` vertices.
    pub fn path(n: usize) -> SimplicialComplex {
        SimplicialComplex::new(n, (1..n).map(|i| [i - 1, i])).expect("valid path")
    }

    /// Hollow unit square with corners (0,0),(1,0),(1,1),(0,1).
    pub fn hollow_unit_square() -> SimplicialComplex {
        cycle(4)
            .with_coords(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]])
            .expect("coords")
    }

    /// Filled unit square triangulated along the diagonal (0,0)-(1,1).
    pub fn unit_square() -> SimplicialComplex {
        SimplicialComplex::new(4, [[0, 1, 2], [0, 2, 3]])
            .and_then(|c| {
                c.with_coords(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]])
            })
            .expect("valid square")
    }

    /// Grid triangulation of `[0,1]^2` with `k x k` squares, row-major ids.
    pub fn square_grid(k: usize) -> SimplicialComplex {
        let id = |i: usize, j: usize| j * (k + 1) + i;
        let mut tris = Vec::new();
        for j in 0..k {
            for i in 0..k {
                tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        let mut coords = Vec::new();
        for j in 0..=k {
            for i in 0..=k {
                coords.push(vec![i as f64 / k as f64, j as f64 / k as f64]);
            }
        }
        SimplicialComplex::new((k + 1) * (k + 1), tris)
            .and_then(|c| c.with_coords(coords))
            .expect("valid grid")
    }

    /// Triangulated torus as a `a x b` periodic grid (a, b >= 3).
    pub fn torus(a: usize, b: usize) -> SimplicialComplex {
        let id = |i: usize, j: usize| (j % b) * a + (i % a);
        let mut tris = Vec::new();
        for j in 0..b {
            for i in 0..a {
                tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        SimplicialComplex::new(a * b, tris).expect("valid torus")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_dims() {
        let t = shapes::simplex(2);
        assert_eq!(t.n_simplices(), 7);
        assert_eq!(t.dim(), Some(2));
        t.check_face_closure().unwrap();
        assert_eq!(t.facets(), vec![vec![0, 1, 2]]);
        assert_eq!(SimplicialComplex::empty().dim(), None);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SimplicialComplex::new(2, [[0, 5]]).is_err());
        assert!(SimplicialComplex::new(2, [[0, 0]]).is_err());
        let c = shapes::path(3);
        assert!(c.clone().with_coords(vec![vec![0.0]; 2]).is_err());
        assert!(c.with_coords(vec![vec![0.0], vec![1.0, 2.0], vec![0.0]]).is_err());
    }

    #[test]
    fn split_edge_keeps_closure() {
        let mut c = shapes::unit_square();
        let x = c.split_edge(0, 2, 0.5);
        c.check_face_closure().unwrap();
        assert_eq!(c.coord(x).unwrap(), &[0.5, 0.5]);
        assert_eq!(c.simplices_of_dim(2).count(), 4);
        assert!(!c.contains(&[0, 2]));
    }

    #[test]
    fn json_roundtrip_sorted_keys() {
        let c = shapes::unit_square();
        let s = serde_json::to_string(&c.to_json()).unwrap();
        let back = SimplicialComplex::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, c);
        let m = VertexMapJson { vertex_map: [(2, 0), (0, 1)].into_iter().collect() };
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"vertex_map":{"0":1,"2":0}}"#);
    }
}

use std::collections::BTreeMap;

use serde::Serialize;

use super::homology::{boundary_matrix, index_of, integer_rank};
use super::{Simplex, SimplicialComplex, VertexMapJson};
use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// Vertex map between complexes that sends every source simplex onto a
/// target simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialMap {
    source: SimplicialComplex,
    target: SimplicialComplex,
    vertex_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(source: SimplicialComplex, target: SimplicialComplex, vertex_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.n_vertices() {
            return Err(Error::InvalidParameter(format!(
                "vertex map has {} entries for {} source vertices",
                vertex_map.len(),
                source.n_vertices()
            )));
        }
        if let Some(&v) = vertex_map.iter().find(|&&v| v >= target.n_vertices()) {
            return Err(Error::InvalidParameter(format!("target vertex {v} out of range")));
        }
        let f = Self { source, target, vertex_map };
        for s in f.source.simplices() {
            if !f.target.contains(&f.image(s)) {
                return Err(Error::NonSimplicial { simplex: s.clone() });
            }
        }
        Ok(f)
    }

    pub fn from_json(source: SimplicialComplex, target: SimplicialComplex, j: &VertexMapJson) -> Result<Self> {
        let n = source.n_vertices();
        if j.vertex_map.len() != n || j.vertex_map.keys().any(|&k| k >= n) {
            return Err(Error::InvalidParameter("vertex map must be total on the source".into()));
        }
        Self::new(source, target, j.vertex_map.values().copied().collect())
    }

    pub fn to_json(&self) -> VertexMapJson {
        VertexMapJson { vertex_map: self.vertex_map.iter().copied().enumerate().collect() }
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn apply(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    /// Image simplex of `s` (sorted, deduplicated vertex images).
    pub fn image(&self, s: &[usize]) -> Simplex {
        let mut t: Vec<usize> = s.iter().map(|&v| self.vertex_map[v]).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    /// Source simplices grouped by image, split into the connected components
    /// of the preimage of each open target cell.
    pub fn open_cell_components(&self) -> BTreeMap<Simplex, Vec<Vec<Simplex>>> {
        let mut groups: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
        for s in self.source.simplices() {
            groups.entry(self.image(s)).or_default().push(s.clone());
        }
        groups
            .into_iter()
            .map(|(img, members)| {
                let idx: BTreeMap<&Simplex, usize> = members.iter().enumerate().map(|(i, s)| (s, i)).collect();
                let mut uf = UnionFind::new(members.len());
                for (i, s) in members.iter().enumerate() {
                    for drop in 0..s.len() {
                        if s.len() == 1 {
                            break;
                        }
                        let mut f = s.clone();
                        f.remove(drop);
                        if let Some(&j) = idx.get(&f) {
                            uf.union(i, j);
                        }
                    }
                }
                let (labels, k) = uf.labels();
                let mut comps = vec![Vec::new(); k];
                for (s, l) in members.into_iter().zip(labels) {
                    comps[l].push(s);
                }
                (img, comps)
            })
            .collect()
    }
}

/// Result of a fiber connectivity check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectivityReport {
    pub connected: bool,
    /// Target cell whose open preimage is empty or disconnected.
    pub witness: Option<Simplex>,
    pub components: usize,
}

/// Checks that every fiber is nonempty and path-connected. The preimage of
/// an open target cell is a product of the cell with the fiber, so it
/// suffices to count components per open cell.
pub fn check_map_connected(f: &SimplicialMap) -> ConnectivityReport {
    let comps = f.open_cell_components();
    for t in f.target.simplices() {
        let k = comps.get(t).map_or(0, Vec::len);
        if k != 1 {
            return ConnectivityReport { connected: false, witness: Some(t.clone()), components: k };
        }
    }
    ConnectivityReport { connected: true, witness: None, components: 1 }
}

/// Whether `f_*: H_1(X) -> H_1(Y)` is onto, for a connected map.
pub fn h1_onto_check(f: &SimplicialMap) -> Result<bool> {
    let rep = check_map_connected(f);
    if !rep.connected {
        return Err(Error::NotConnected { cell: rep.witness.unwrap_or_default(), components: rep.components });
    }
    let y = &f.target;
    let x = &f.source;
    let y_edges = index_of(y, 1);
    let n1y = y_edges.len();
    if n1y == 0 {
        return Ok(true);
    }
    let x_edges = index_of(x, 1);
    let n0x = x.n_vertices();
    let d1x = if x_edges.is_empty() { vec![vec![]; n0x] } else { boundary_matrix(x, 1) };
    let d2y = if y.simplices_of_dim(2).next().is_some() { boundary_matrix(y, 2) } else { vec![vec![]; n1y] };
    let n2y = d2y.first().map_or(0, Vec::len);
    let ncols = x_edges.len() + n2y;
    // [[d1X, 0], [f#, d2Y]]
    let mut big = vec![vec![0i64; ncols]; n0x + n1y];
    for (i, row) in d1x.iter().enumerate() {
        big[i][..row.len()].copy_from_slice(row);
    }
    for (e, &j) in &x_edges {
        let (a, b) = (f.apply(e[0]), f.apply(e[1]));
        if a == b {
            continue;
        }
        let key = if a < b { vec![a, b] } else { vec![b, a] };
        big[n0x + y_edges[&key]][j] = if a < b { 1 } else { -1 };
    }
    for (i, row) in d2y.iter().enumerate() {
        big[n0x + i][x_edges.len()..].copy_from_slice(row);
    }
    let image_rank = integer_rank(&big) - if x_edges.is_empty() { 0 } else { integer_rank(&d1x) };
    let cycles_y = n1y - integer_rank(&boundary_matrix(y, 1));
    Ok(image_rank == cycles_y)
}

#[cfg(test)]
mod tests {
    use super::super::shapes;
    use super::*;

    #[test]
    fn rejects_non_simplicial() {
        let src = shapes::simplex(1);
        let tgt = SimplicialComplex::new(2, Vec::<Vec<usize>>::new()).unwrap();
        assert!(matches!(SimplicialMap::new(src, tgt, vec![0, 1]), Err(Error::NonSimplicial { .. })));
    }

    #[test]
    fn identity_and_two_points() {
        let c = shapes::cycle(4);
        let id = SimplicialMap::new(c.clone(), c, vec![0, 1, 2, 3]).unwrap();
        assert!(check_map_connected(&id).connected);
        let two = SimplicialComplex::new(2, Vec::<Vec<usize>>::new()).unwrap();
        let pt = SimplicialComplex::new(1, Vec::<Vec<usize>>::new()).unwrap();
        let f = SimplicialMap::new(two, pt, vec![0, 0]).unwrap();
        let r = check_map_connected(&f);
        assert!(!r.connected);
        assert_eq!(r.witness, Some(vec![0]));
        assert_eq!(r.components, 2);
    }

    #[test]
    fn reeb_height_map_disconnected() {
        // square boundary 0-1-2-3, height: 0,1 -> bottom, 2,3 -> top
        let f = SimplicialMap::new(shapes::hollow_unit_square(), shapes::path(2), vec![0, 0, 1, 1]).unwrap();
        let r = check_map_connected(&f);
        assert!(!r.connected);
        assert_eq!(r.witness, Some(vec![0, 1]));
        assert!(matches!(h1_onto_check(&f), Err(Error::NotConnected { .. })));
    }

    #[test]
    fn onto_for_point_and_torus_projection() {
        let disk = shapes::simplex(2);
        let pt = SimplicialComplex::new(1, Vec::<Vec<usize>>::new()).unwrap();
        let f = SimplicialMap::new(disk, pt, vec![0, 0, 0]).unwrap();
        assert!(h1_onto_check(&f).unwrap());
        // torus (4 x 3 grid) projected onto its first circle factor
        let t = shapes::torus(4, 3);
        let proj: Vec<usize> = (0..12).map(|v| v % 4).collect();
        let p = SimplicialMap::new(t, shapes::cycle(4), proj).unwrap();
        assert!(check_map_connected(&p).connected);
        assert!(h1_onto_check(&p).unwrap());
    }
}

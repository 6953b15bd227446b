//! Connected (Reeb-style) factorization `f = q ∘ f̃` of a simplicial map.
//!
//! Cells of the leaf space are pairs (open target cell, component of its
//! preimage), glued along closure incidence.

use std::collections::BTreeMap;

use super::{h1_rank, Simplex, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ReebCell {
    /// Target simplex whose open cell this leaf-space cell lies over.
    pub target: Simplex,
    /// Codimension-one faces (cell ids), one per codimension-one face of `target`.
    pub faces: Vec<usize>,
    /// Source simplices forming this preimage component.
    pub members: Vec<Simplex>,
}

impl ReebCell {
    pub fn dim(&self) -> usize {
        self.target.len() - 1
    }
}

/// Leaf space of a simplicial map as a cell complex, with `f̃` on vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ReebSpace {
    pub cells: Vec<ReebCell>,
    /// `f̃`: source vertex to the vertex cell containing it.
    pub vertex_cell: Vec<usize>,
}

impl ReebSpace {
    pub fn n_cells_of_dim(&self, k: usize) -> usize {
        self.cells.iter().filter(|c| c.dim() == k).count()
    }

    pub fn dim(&self) -> Option<usize> {
        self.cells.iter().map(ReebCell::dim).max()
    }

    /// `q` on cells: the target simplex a cell lies over.
    pub fn q(&self, cell: usize) -> &Simplex {
        &self.cells[cell].target
    }

    /// Vertex cells reachable through iterated faces.
    pub fn vertex_cells_of(&self, cell: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![cell];
        while let Some(c) = stack.pop() {
            if self.cells[c].dim() == 0 {
                out.push(c);
            } else {
                stack.extend(&self.cells[c].faces);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Order complex of the face poset (a triangulation of the leaf space).
    pub fn order_complex(&self) -> SimplicialComplex {
        let mut chains: Vec<Vec<usize>> = Vec::new();
        for top in 0..self.cells.len() {
            let mut stack = vec![vec![top]];
            while let Some(chain) = stack.pop() {
                let last = *chain.last().expect("nonempty chain");
                if self.cells[last].faces.is_empty() {
                    chains.push(chain);
                } else {
                    for &f in &self.cells[last].faces {
                        let mut c = chain.clone();
                        c.push(f);
                        stack.push(c);
                    }
                }
            }
        }
        SimplicialComplex::new(self.cells.len(), chains).expect("chains of the face poset")
    }

    /// First Betti number of the leaf space.
    pub fn h1_rank(&self) -> usize {
        match self.dim() {
            None => 0,
            Some(0) | Some(1) => {
                let v = self.n_cells_of_dim(0);
                let e = self.n_cells_of_dim(1);
                let mut uf = crate::unionfind::UnionFind::new(self.cells.len());
                for (i, c) in self.cells.iter().enumerate() {
                    for &f in &c.faces {
                        uf.union(i, f);
                    }
                }
                let comps = {
                    let mut roots: Vec<usize> =
                        (0..self.cells.len()).filter(|&i| self.cells[i].dim() == 0).map(|i| uf.find(i)).collect();
                    roots.sort_unstable();
                    roots.dedup();
                    roots.len()
                };
                e + comps - v
            }
            Some(_) => h1_rank(&self.order_complex()),
        }
    }

    /// The leaf space as a simplicial complex, when every cell is determined
    /// by its distinct vertices. Returns the complex, `f̃` as a simplicial map
    /// and `q` as a simplicial map to the original target.
    pub fn as_simplicial(&self, f: &SimplicialMap) -> Option<(SimplicialMap, SimplicialMap)> {
        let verts: Vec<usize> = (0..self.cells.len()).filter(|&c| self.cells[c].dim() == 0).collect();
        let renum: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut seen = std::collections::BTreeSet::new();
        let mut gens = Vec::new();
        for c in 0..self.cells.len() {
            let vs: Vec<usize> = self.vertex_cells_of(c).iter().map(|v| renum[v]).collect();
            if vs.len() != self.cells[c].dim() + 1 || !seen.insert(vs.clone()) {
                return None;
            }
            gens.push(vs);
        }
        let y = SimplicialComplex::new(verts.len(), gens).ok()?;
        let ft = SimplicialMap::new(
            f.source().clone(),
            y.clone(),
            self.vertex_cell.iter().map(|c| renum[c]).collect(),
        )
        .ok()?;
        let q = SimplicialMap::new(y, f.target().clone(), verts.iter().map(|&c| self.cells[c].target[0]).collect())
            .ok()?;
        Some((ft, q))
    }
}

/// Connected factorization of a simplicial map.
pub fn connected_factorization(f: &SimplicialMap) -> ReebSpace {
    let comps = f.open_cell_components();
    let mut cells = Vec::new();
    let mut cell_of: BTreeMap<Simplex, usize> = BTreeMap::new();
    // low-dimensional cells first so faces are resolved by id
    let mut ordered: Vec<(&Simplex, &Vec<Vec<Simplex>>)> = comps.iter().collect();
    ordered.sort_by_key(|(t, _)| t.len());
    for (target, components) in ordered {
        for members in components {
            let id = cells.len();
            for s in members {
                cell_of.insert(s.clone(), id);
            }
            let faces = if target.len() == 1 {
                Vec::new()
            } else {
                let rep = &members[0];
                (0..target.len())
                    .map(|drop| {
                        let face_target: Vec<usize> =
                            target.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
                        let face: Vec<usize> = rep
                            .iter()
                            .copied()
                            .filter(|&v| face_target.binary_search(&f.apply(v)).is_ok())
                            .collect();
                        cell_of[&face]
                    })
                    .collect()
            };
            cells.push(ReebCell { target: target.clone(), faces, members: members.clone() });
        }
    }
    let vertex_cell = (0..f.source().n_vertices()).map(|v| cell_of[&vec![v]]).collect();
    ReebSpace { cells, vertex_cell }
}

/// Connected factorization of a map onto a graph, realized simplicially by
/// splitting all but one of each bundle of parallel leaf-space edges at its
/// midpoint (the source is refined along the corresponding mid-fibers).
#[derive(Clone, Debug)]
pub struct SimpleGraphFactor {
    /// `f̃` from the refined source onto the simple leaf graph.
    pub map: SimplicialMap,
    /// Image of each leaf-graph vertex in the original target, as
    /// `(a, b, s)`: the point at fraction `s` from `a` to `b`.
    pub over: Vec<(usize, usize, f64)>,
    /// Source edge splits `(u, w, lambda)` in the order applied; split `k`
    /// created source vertex `n + k`.
    pub splits: Vec<(usize, usize, f64)>,
}

pub fn factor_to_simple_graph(f: &SimplicialMap) -> Result<SimpleGraphFactor> {
    if f.target().dim().unwrap_or(0) > 1 {
        return Err(Error::InvalidParameter("target must be a graph".into()));
    }
    let reeb = connected_factorization(f);
    let verts: Vec<usize> = (0..reeb.cells.len()).filter(|&c| reeb.cells[c].dim() == 0).collect();
    let renum: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut over: Vec<(usize, usize, f64)> =
        verts.iter().map(|&c| (reeb.cells[c].target[0], reeb.cells[c].target[0], 0.0)).collect();
    let mut source = f.source().clone();
    let mut vmap: Vec<usize> = reeb.vertex_cell.iter().map(|c| renum[c]).collect();
    let mut splits = Vec::new();
    let mut bundles: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (c, cell) in reeb.cells.iter().enumerate() {
        if cell.dim() == 1 {
            let (a, b) = (renum[&cell.faces[0]], renum[&cell.faces[1]]);
            bundles.entry((a.min(b), a.max(b))).or_default().push(c);
        }
    }
    for cs in bundles.values() {
        for &c in cs.iter().skip(1) {
            let cell = &reeb.cells[c];
            let mid = over.len();
            over.push((cell.target[0], cell.target[1], 0.5));
            for e in cell.members.iter().filter(|s| s.len() == 2) {
                let (u, w) = if f.apply(e[0]) == cell.target[0] { (e[0], e[1]) } else { (e[1], e[0]) };
                source.split_edge(u, w, 0.5);
                splits.push((u, w, 0.5));
                vmap.push(mid);
            }
        }
    }
    let mut gens: Vec<Vec<usize>> = Vec::new();
    for (a, b) in source.edges() {
        if vmap[a] != vmap[b] {
            gens.push(vec![vmap[a], vmap[b]]);
        }
    }
    let leaf = SimplicialComplex::new(over.len(), gens)?;
    let map = SimplicialMap::new(source, leaf, vmap)?;
    Ok(SimpleGraphFactor { map, over, splits })
}

#[cfg(test)]
mod tests {
    use super::super::{check_map_connected, h1_onto_check, shapes};
    use super::*;

    fn reeb_example() -> SimplicialMap {
        SimplicialMap::new(shapes::hollow_unit_square(), shapes::path(2), vec![0, 0, 1, 1]).unwrap()
    }

    #[test]
    fn already_connected_is_identity() {
        let c = shapes::cycle(4);
        let f = SimplicialMap::new(c.clone(), c, vec![0, 1, 2, 3]).unwrap();
        let r = connected_factorization(&f);
        assert_eq!(r.n_cells_of_dim(0), 4);
        assert_eq!(r.n_cells_of_dim(1), 4);
        let (ft, q) = r.as_simplicial(&f).unwrap();
        for v in 0..4 {
            assert_eq!(q.apply(ft.apply(v)), f.apply(v));
        }
    }

    #[test]
    fn disjoint_edges_separate() {
        let src = SimplicialComplex::new(4, [[0, 1], [2, 3]]).unwrap();
        let f = SimplicialMap::new(src, shapes::path(2), vec![0, 1, 0, 1]).unwrap();
        let r = connected_factorization(&f);
        assert_eq!((r.n_cells_of_dim(0), r.n_cells_of_dim(1)), (4, 2));
        assert_eq!(r.h1_rank(), 0);
    }

    #[test]
    fn reeb_square_has_parallel_edges() {
        let f = reeb_example();
        let r = connected_factorization(&f);
        // brute force: fibers over the bottom and top vertices are single
        // edges (connected); the open edge has two components (left, right)
        assert_eq!((r.n_cells_of_dim(0), r.n_cells_of_dim(1)), (2, 2));
        assert_eq!(r.h1_rank(), 1);
        assert!(r.as_simplicial(&f).is_none());
        let g = factor_to_simple_graph(&f).unwrap();
        assert!(check_map_connected(&g.map).connected);
        assert!(h1_onto_check(&g.map).unwrap());
        assert_eq!(g.map.target().n_vertices(), 3);
        g.map.source().check_face_closure().unwrap();
    }
}

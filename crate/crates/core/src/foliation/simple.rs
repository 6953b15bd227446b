//! Simple foliations (connected PL maps onto graphs) and simplification of
//! arbitrary maps to graphs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::refine::{GraphPoint, Region, Work};
use crate::complex::{check_map_connected, factor_to_simple_graph, ComplexJson, Graph, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::geometry::brute_diameter;
use crate::width::map_width;

/// Exact width of a simplicial map: the largest vertex-fiber diameter.
/// Pairwise distances inside a fiber piece are convex along open target
/// cells, so nothing larger occurs over edge interiors.
pub fn exact_width(map: &SimplicialMap) -> f64 {
    let src = map.source();
    let coords = src.coords().expect("embedded source");
    let mut groups: Vec<Vec<&[f64]>> = vec![Vec::new(); map.target().n_vertices()];
    for v in 0..src.n_vertices() {
        groups[map.apply(v)].push(&coords[v]);
    }
    groups.iter().map(|g| brute_diameter::<f64, _>(g)).fold(0.0, f64::max)
}

/// A simple foliation: surjective simplicial map from an embedded complex to
/// a graph with nonempty connected fibers.
#[derive(Clone, Debug)]
pub struct Foliation {
    pub map: SimplicialMap,
    pub width: f64,
}

impl Foliation {
    pub fn new(map: SimplicialMap) -> Result<Self> {
        if map.source().coords().is_none() {
            return Err(Error::InvalidComplex("foliations need an embedded source".into()));
        }
        if map.target().dim().unwrap_or(0) > 1 {
            return Err(Error::InvalidParameter("foliation target must be a graph".into()));
        }
        let rep = check_map_connected(&map);
        if !rep.connected {
            return Err(Error::NotConnected { cell: rep.witness.unwrap_or_default(), components: rep.components });
        }
        let width = exact_width(&map);
        Ok(Self { map, width })
    }

    pub fn sigma(&self) -> &SimplicialComplex {
        self.map.source()
    }

    pub fn graph(&self) -> Graph {
        Graph::unit(self.map.target().clone()).expect("unit lengths")
    }

    /// Same foliation with the metric of `Σ` scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let src = self.sigma();
        let coords = src.coords().unwrap().iter().map(|c| c.iter().map(|x| x * factor).collect()).collect();
        let sigma = src.clone().with_coords(coords).expect("same vertex count");
        let map = SimplicialMap::new(sigma, self.map.target().clone(), self.map.vertex_map().to_vec()).unwrap();
        Self { map, width: self.width * factor }
    }

    pub fn to_json(&self) -> FoliationJson {
        FoliationJson {
            sigma: self.sigma().to_json(),
            z: self.map.target().to_json(),
            vertex_map: self.map.vertex_map().to_vec(),
            width: self.width,
        }
    }

    pub fn from_json(j: &FoliationJson) -> Result<Self> {
        let sigma = SimplicialComplex::from_json(&j.sigma)?;
        let z = SimplicialComplex::from_json(&j.z)?;
        Self::new(SimplicialMap::new(sigma, z, j.vertex_map.clone())?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoliationJson {
    pub sigma: ComplexJson,
    pub z: ComplexJson,
    pub vertex_map: Vec<usize>,
    pub width: f64,
}

/// Subdivides the target until every vertex star has preimage of diameter
/// below `bound`, makes the map simplicial on the matching subdivision of
/// the source, and replaces it by its connected factorization.
pub fn make_simple(p: &SimplicialMap, bound: f64, max_depth: usize) -> Result<Foliation> {
    if p.source().coords().is_none() {
        return Err(Error::InvalidComplex("make_simple needs an embedded source".into()));
    }
    let z = Graph::unit(p.target().clone())?;
    let w = map_width(p, 0)?.width;
    if !(w < bound) {
        return Err(Error::CannotSimplify { bound, depth: 0 });
    }
    let vals: Vec<GraphPoint> = p.vertex_map().iter().map(|&v| GraphPoint::vertex(v)).collect();
    let mut level: BTreeMap<(usize, usize), usize> = z.edges().map(|e| (e, 0)).collect();
    loop {
        let params: BTreeMap<(usize, usize), Vec<f64>> = level
            .iter()
            .filter(|(_, &l)| l > 0)
            .map(|(&e, &l)| (e, (1..(1usize << l)).map(|j| j as f64 / (1usize << l) as f64).collect()))
            .collect();
        let mut work = Work::new(p.source().clone(), vec![vals.clone()]);
        let refined = work.make_simplicial(0, &z, Region::All, &params);
        let vmap: Vec<usize> = work.vals[0].iter().map(|q| refined.vertex_of(q).expect("refined vertex")).collect();
        let fine = SimplicialMap::new(work.sigma.clone(), refined.graph.complex().clone(), vmap)?;
        // preimage of a closed vertex star: source vertices over the vertex or its neighbours
        let adj = fine.target().adjacency();
        let coords = fine.source().coords().unwrap();
        let mut over: Vec<Vec<usize>> = vec![Vec::new(); fine.target().n_vertices()];
        for v in 0..fine.source().n_vertices() {
            over[fine.apply(v)].push(v);
        }
        let mut bad_edges = Vec::new();
        for (v, nbrs) in adj.iter().enumerate() {
            let pts: Vec<&[f64]> = std::iter::once(v)
                .chain(nbrs.iter().copied())
                .flat_map(|u| over[u].iter().map(|&x| coords[x].as_slice()))
                .collect();
            if brute_diameter::<f64, _>(&pts) >= bound {
                let q = refined.points[v];
                match q.as_vertex() {
                    Some(orig) => bad_edges.extend(z.edges().filter(|&(a, b)| a == orig || b == orig)),
                    None => bad_edges.push((q.a, q.b)),
                }
            }
        }
        if bad_edges.is_empty() {
            let simple = factor_to_simple_graph(&fine)?;
            return Foliation::new(simple.map);
        }
        for e in bad_edges {
            let l = level.get_mut(&e).unwrap();
            if *l >= max_depth {
                return Err(Error::CannotSimplify { bound, depth: max_depth });
            }
            *l += 1;
        }
    }
}

/// Refines two maps of one complex into graphs onto a common subdivision
/// on which both are simple foliations.
pub fn common_refinement(p0: &SimplicialMap, p1: &SimplicialMap, max_rounds: usize) -> Result<(Foliation, Foliation)> {
    if p0.source() != p1.source() {
        return Err(Error::InvalidParameter("the two maps live on different complexes".into()));
    }
    let vals = |f: &SimplicialMap| f.vertex_map().iter().map(|&v| GraphPoint::vertex(v)).collect::<Vec<_>>();
    let mut work = Work::new(p0.source().clone(), vec![vals(p0), vals(p1)]);
    let mut z = [p0.target().clone(), p1.target().clone()];
    let cap = 64 * p0.source().n_vertices();
    for _ in 0..max_rounds {
        if work.sigma.n_vertices() > cap {
            break;
        }
        let mut changed = false;
        let mut maps = Vec::with_capacity(2);
        for c in 0..2 {
            let zc = Graph::unit(z[c].clone())?;
            let n_before = work.sigma.n_vertices();
            let refined = work.make_simplicial(c, &zc, Region::All, &BTreeMap::new());
            let vmap: Vec<usize> = work.vals[c].iter().map(|q| refined.vertex_of(q).expect("refined vertex")).collect();
            let f = SimplicialMap::new(work.sigma.clone(), refined.graph.complex().clone(), vmap)?;
            let fac = factor_to_simple_graph(&f)?;
            for &(u, w, lam) in &fac.splits {
                work.split(u, w, lam);
            }
            changed |= work.sigma.n_vertices() != n_before || refined.graph.n_vertices() != z[c].n_vertices();
            work.vals[c] = fac.map.vertex_map().iter().map(|&v| GraphPoint::vertex(v)).collect();
            z[c] = fac.map.target().clone();
            maps.push(fac.map);
        }
        if !changed {
            let f1 = maps.pop().unwrap();
            let f0 = maps.pop().unwrap();
            return Ok((Foliation::new(f0)?, Foliation::new(f1)?));
        }
    }
    Err(Error::CannotSimplify { bound: f64::INFINITY, depth: max_rounds })
}

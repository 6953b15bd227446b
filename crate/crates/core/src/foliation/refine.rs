//! Points of graphs, PL maps into graphs given by vertex values, and the
//! subdivisions that make such maps simplicial.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::complex::{Graph, SimplicialComplex};

const SNAP: f64 = 1e-12;

/// A point of a graph: vertex `a` when `a == b`, otherwise the point at
/// fraction `s` from `a` to `b` on edge `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphPoint {
    pub a: usize,
    pub b: usize,
    pub s: f64,
}

pub(crate) type PointKey = (usize, usize, u64);

impl GraphPoint {
    pub fn vertex(v: usize) -> Self {
        Self { a: v, b: v, s: 0.0 }
    }

    pub fn on_edge(a: usize, b: usize, s: f64) -> Self {
        if s <= 0.0 {
            Self::vertex(a)
        } else if s >= 1.0 {
            Self::vertex(b)
        } else if a < b {
            Self { a, b, s }
        } else {
            Self { a: b, b: a, s: 1.0 - s }
        }
    }

    pub fn as_vertex(&self) -> Option<usize> {
        (self.a == self.b).then_some(self.a)
    }

    /// Position along edge `(a, b)`, `a < b`, if the point lies on it.
    pub fn param_on(&self, a: usize, b: usize) -> Option<f64> {
        match self.as_vertex() {
            Some(v) if v == a => Some(0.0),
            Some(v) if v == b => Some(1.0),
            Some(_) => None,
            None => (self.a == a && self.b == b).then_some(self.s),
        }
    }

    /// Closed edge carrying both points (`None` if they are one vertex).
    pub fn common_edge(p: &Self, q: &Self) -> Option<(usize, usize)> {
        if p.as_vertex().is_none() {
            Some((p.a, p.b))
        } else if q.as_vertex().is_none() {
            Some((q.a, q.b))
        } else if p.a != q.a {
            Some((p.a.min(q.a), p.a.max(q.a)))
        } else {
            None
        }
    }

    /// Affine interpolation along a common closed edge.
    pub fn lerp(p: &Self, q: &Self, lambda: f64) -> Self {
        if p == q {
            return *p;
        }
        let (a, b) = Self::common_edge(p, q).expect("points on a common edge");
        let pa = p.param_on(a, b).expect("first point on the edge");
        let qa = q.param_on(a, b).expect("second point on the edge");
        Self::on_edge(a, b, pa + lambda * (qa - pa))
    }

    pub(crate) fn key(&self) -> PointKey {
        (self.a, self.b, self.s.to_bits())
    }
}

/// A subdivision of a graph together with the original position of every
/// new vertex.
#[derive(Clone, Debug)]
pub struct RefinedGraph {
    pub graph: Graph,
    pub points: Vec<GraphPoint>,
    pub(crate) index: HashMap<PointKey, usize>,
}

impl RefinedGraph {
    /// Inserts the sorted interior parameters `params[e]` on each edge.
    pub fn new(z: &Graph, params: &BTreeMap<(usize, usize), Vec<f64>>) -> Self {
        let n = z.n_vertices();
        let mut points: Vec<GraphPoint> = (0..n).map(GraphPoint::vertex).collect();
        let mut edges = Vec::new();
        let mut lengths = BTreeMap::new();
        for (a, b) in z.edges() {
            let len = z.length(a, b).unwrap_or(1.0);
            let mut prev = (a, 0.0);
            for &s in params.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[]) {
                let id = points.len();
                points.push(GraphPoint::on_edge(a, b, s));
                edges.push([prev.0, id]);
                lengths.insert((prev.0.min(id), prev.0.max(id)), ((s - prev.1) * len).max(f64::MIN_POSITIVE));
                prev = (id, s);
            }
            edges.push([prev.0, b]);
            lengths.insert((prev.0.min(b), prev.0.max(b)), ((1.0 - prev.1) * len).max(f64::MIN_POSITIVE));
        }
        let complex = SimplicialComplex::new(points.len(), edges).expect("subdivided graph");
        let graph = Graph::new(complex, lengths).expect("positive lengths");
        let index = points.iter().enumerate().map(|(i, p)| (p.key(), i)).collect();
        Self { graph, points, index }
    }

    pub fn vertex_of(&self, p: &GraphPoint) -> Option<usize> {
        self.index.get(&p.key()).copied()
    }
}

/// Which vertices take part in a refinement.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Region {
    All,
    AtLeast(f64),
}

/// A refinement of an embedded complex carrying graph-valued vertex data
/// (one channel per map) and a scalar level, all affine on simplices.
#[derive(Clone, Debug)]
pub(crate) struct Work {
    pub sigma: SimplicialComplex,
    pub vals: Vec<Vec<GraphPoint>>,
    pub level: Vec<f64>,
    /// Layer of the foliation each vertex was drawn from; splits take the
    /// lower layer of the two endpoints.
    pub labels: Vec<u8>,
    pub log: Vec<(usize, usize, f64)>,
}

impl Work {
    pub fn new(sigma: SimplicialComplex, vals: Vec<Vec<GraphPoint>>) -> Self {
        let n = sigma.n_vertices();
        Self { sigma, vals, level: vec![0.0; n], labels: vec![0; n], log: Vec::new() }
    }

    pub fn in_region(&self, r: Region, v: usize) -> bool {
        match r {
            Region::All => true,
            Region::AtLeast(t) => self.level[v] >= t,
        }
    }

    pub fn split(&mut self, u: usize, w: usize, lambda: f64) -> usize {
        let x = self.sigma.split_edge(u, w, lambda);
        for ch in &mut self.vals {
            let p = GraphPoint::lerp(&ch[u], &ch[w], lambda);
            ch.push(p);
        }
        let (gu, gw) = (self.level[u], self.level[w]);
        self.level.push(if gu == gw { gu } else { gu + lambda * (gw - gu) });
        self.labels.push(self.labels[u].min(self.labels[w]));
        self.log.push((u, w, lambda));
        x
    }

    /// Snaps the channel values of region vertices per edge, subdivides the
    /// graph at every value (plus `extra`), and splits source edges until the
    /// channel is simplicial on the region.
    pub fn make_simplicial(
        &mut self,
        ch: usize,
        z: &Graph,
        region: Region,
        extra: &BTreeMap<(usize, usize), Vec<f64>>,
    ) -> RefinedGraph {
        let mut params: BTreeMap<(usize, usize), Vec<f64>> = extra.clone();
        for v in 0..self.sigma.n_vertices() {
            let p = self.vals[ch][v];
            if self.in_region(region, v) && p.as_vertex().is_none() {
                params.entry((p.a, p.b)).or_default().push(p.s);
            }
        }
        for ps in params.values_mut() {
            ps.sort_by(f64::total_cmp);
            let mut reps: Vec<f64> = Vec::with_capacity(ps.len());
            for &s in ps.iter() {
                if s <= SNAP || s >= 1.0 - SNAP {
                    continue;
                }
                if reps.last().map_or(true, |&r| s - r > SNAP) {
                    reps.push(s);
                }
            }
            *ps = reps;
        }
        params.retain(|_, v| !v.is_empty());
        for v in 0..self.sigma.n_vertices() {
            if self.in_region(region, v) {
                self.vals[ch][v] = snap_point(&self.vals[ch][v], &params);
            }
        }
        loop {
            let edges: Vec<(usize, usize)> = self.sigma.edges().collect();
            let mut changed = false;
            for (u, w) in edges {
                if !self.in_region(region, u) || !self.in_region(region, w) || !self.sigma.contains(&[u, w]) {
                    continue;
                }
                let (pu, pw) = (self.vals[ch][u], self.vals[ch][w]);
                let Some((a, b)) = GraphPoint::common_edge(&pu, &pw) else { continue };
                let (su, sw) = (pu.param_on(a, b).unwrap(), pw.param_on(a, b).unwrap());
                let Some(ps) = params.get(&(a, b)) else { continue };
                let (lo, hi) = (su.min(sw), su.max(sw));
                let inside = ps.iter().copied().filter(|&r| r > lo && r < hi);
                let r = if su < sw { inside.clone().next() } else { inside.last() };
                if let Some(r) = r {
                    let x = self.split(u, w, (r - su) / (sw - su));
                    self.vals[ch][x] = GraphPoint::on_edge(a, b, r);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        RefinedGraph::new(z, &params)
    }
}

fn snap_point(p: &GraphPoint, params: &BTreeMap<(usize, usize), Vec<f64>>) -> GraphPoint {
    if p.as_vertex().is_some() {
        return *p;
    }
    if p.s <= SNAP {
        return GraphPoint::vertex(p.a);
    }
    if p.s >= 1.0 - SNAP {
        return GraphPoint::vertex(p.b);
    }
    let ps = &params[&(p.a, p.b)];
    let i = ps.partition_point(|&r| r < p.s);
    let best = [i.wrapping_sub(1), i]
        .into_iter()
        .filter_map(|k| ps.get(k))
        .min_by(|x, y| (*x - p.s).abs().total_cmp(&(*y - p.s).abs()))
        .copied()
        .expect("parameter registered");
    GraphPoint { s: best, ..*p }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{shapes, SimplicialMap};

    #[test]
    fn point_normalization() {
        assert_eq!(GraphPoint::on_edge(3, 1, 0.25), GraphPoint { a: 1, b: 3, s: 0.75 });
        assert_eq!(GraphPoint::on_edge(3, 1, 1.0), GraphPoint::vertex(1));
        let p = GraphPoint::lerp(&GraphPoint::vertex(0), &GraphPoint::vertex(1), 0.3);
        assert_eq!(p, GraphPoint { a: 0, b: 1, s: 0.3 });
        let q = GraphPoint::lerp(&p, &GraphPoint::vertex(0), 0.5);
        assert!((q.s - 0.15).abs() < 1e-15);
    }

    #[test]
    fn refined_graph_lengths() {
        let z = Graph::unit(shapes::path(3)).unwrap();
        let mut params = BTreeMap::new();
        params.insert((0, 1), vec![0.25, 0.5]);
        let r = RefinedGraph::new(&z, &params);
        assert_eq!(r.graph.n_vertices(), 5);
        let total: f64 = r.graph.lengths().values().sum();
        assert!((total - 2.0).abs() < 1e-12);
        assert_eq!(r.vertex_of(&GraphPoint::on_edge(0, 1, 0.5)), Some(4));
    }

    #[test]
    fn square_made_simplicial_over_midpoints() {
        // x-coordinate of the unit square into the path 0-1, values at the
        // corners, with an extra vertex at x = 0.3 on the bottom edge
        let sq = shapes::unit_square();
        let z = Graph::unit(shapes::path(2)).unwrap();
        let vals = vec![0, 1, 1, 0].into_iter().map(GraphPoint::vertex).collect();
        let mut w = Work::new(sq, vec![vals]);
        let x = w.split(0, 1, 0.3);
        assert_eq!(w.vals[0][x], GraphPoint::on_edge(0, 1, 0.3));
        let r = w.make_simplicial(0, &z, Region::All, &BTreeMap::new());
        let vmap: Vec<usize> = w.vals[0].iter().map(|p| r.vertex_of(p).unwrap()).collect();
        let f = SimplicialMap::new(w.sigma.clone(), r.graph.complex().clone(), vmap).unwrap();
        assert_eq!(f.target().n_vertices(), 3);
        // the splits keep the embedding consistent with the values
        for v in 0..w.sigma.n_vertices() {
            let c = w.sigma.coord(v).unwrap()[0];
            let p = w.vals[0][v];
            let s = p.param_on(0, 1).unwrap();
            assert!((c - s).abs() < 1e-12);
        }
    }
}

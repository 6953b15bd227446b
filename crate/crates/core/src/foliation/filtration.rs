//! Distance filtrations of graphs normalized to `[1/2, 1]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::refine::{GraphPoint, RefinedGraph};
use crate::complex::Graph;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Filtration {
    pub graph: Graph,
    pub base: usize,
    pub dist: Vec<f64>,
    /// Largest distance from the base over all points, edge interiors included.
    pub sup: f64,
}

pub fn filtration(z: &Graph, base: usize) -> Result<Filtration> {
    if base >= z.n_vertices() {
        return Err(Error::InvalidParameter(format!("base vertex {base} out of range")));
    }
    if !z.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let dist = z.distances_from(base);
    let mut sup = dist.iter().copied().fold(0.0, f64::max);
    for (a, b) in z.edges() {
        let l = z.length(a, b).unwrap();
        sup = sup.max(((dist[a] + dist[b] + l) / 2.0).min(dist[a].max(dist[b]) + l));
    }
    Ok(Filtration { graph: z.clone(), base, dist, sup })
}

impl Filtration {
    fn normalize(&self, d: f64) -> f64 {
        if self.sup == 0.0 {
            0.5
        } else {
            d / (2.0 * self.sup) + 0.5
        }
    }

    pub fn alpha_vertex(&self, v: usize) -> f64 {
        self.normalize(self.dist[v])
    }

    pub fn distance(&self, p: &GraphPoint) -> f64 {
        match p.as_vertex() {
            Some(v) => self.dist[v],
            None => {
                let l = self.graph.length(p.a, p.b).expect("edge of the filtered graph");
                (self.dist[p.a] + p.s * l).min(self.dist[p.b] + (1.0 - p.s) * l)
            }
        }
    }

    pub fn alpha(&self, p: &GraphPoint) -> f64 {
        self.normalize(self.distance(p))
    }

    /// Interior maximum of the distance along edge `(a, b)`, if any.
    pub fn kink(&self, a: usize, b: usize) -> Option<f64> {
        let l = self.graph.length(a, b)?;
        let s = (self.dist[b] - self.dist[a] + l) / (2.0 * l);
        (s > 1e-12 && s < 1.0 - 1e-12).then_some(s)
    }

    pub fn kink_params(&self) -> BTreeMap<(usize, usize), Vec<f64>> {
        self.graph.edges().filter_map(|(a, b)| self.kink(a, b).map(|s| ((a, b), vec![s]))).collect()
    }

    /// Closed (`α ≤ t`) or open (`α < t`) sublevel set.
    pub fn sublevel(&self, t: f64, open: bool) -> Sublevel {
        let below = |a: f64| if open { a < t } else { a <= t };
        let kinked = RefinedGraph::new(&self.graph, &self.kink_params());
        let alpha: Vec<f64> = kinked.points.iter().map(|p| self.alpha(p)).collect();
        let mut points = Vec::new();
        let mut id: BTreeMap<usize, usize> = BTreeMap::new();
        for (v, &a) in alpha.iter().enumerate() {
            if below(a) {
                id.insert(v, points.len());
                points.push(kinked.points[v]);
            }
        }
        let mut edges = Vec::new();
        let mut lengths = BTreeMap::new();
        let mut frontier = Vec::new();
        for (a, b) in kinked.graph.edges() {
            let l = kinked.graph.length(a, b).unwrap();
            match (id.get(&a).copied(), id.get(&b).copied()) {
                (Some(x), Some(y)) => {
                    edges.push([x, y]);
                    lengths.insert((x.min(y), x.max(y)), l);
                }
                (Some(_), None) | (None, Some(_)) => {
                    let (lo, hi) = if id.contains_key(&a) { (a, b) } else { (b, a) };
                    let s = (t - alpha[lo]) / (alpha[hi] - alpha[lo]);
                    if s <= 0.0 {
                        continue;
                    }
                    let x = id[&lo];
                    let y = points.len();
                    points.push(GraphPoint::lerp(&kinked.points[lo], &kinked.points[hi], s));
                    frontier.push(y);
                    edges.push([x, y]);
                    lengths.insert((x.min(y), x.max(y)), s * l);
                }
                (None, None) => {}
            }
        }
        let complex = crate::complex::SimplicialComplex::new(points.len(), edges).expect("sublevel graph");
        let total_length = lengths.values().sum();
        let graph = Graph::new(complex, lengths).expect("positive lengths");
        Sublevel { graph, points, total_length, open, frontier }
    }
}

/// A sublevel set as a subgraph with edges split at the level crossings.
#[derive(Clone, Debug)]
pub struct Sublevel {
    pub graph: Graph,
    pub points: Vec<GraphPoint>,
    pub total_length: f64,
    pub open: bool,
    /// Crossing points; excluded from the set in the open variant.
    pub frontier: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiltrationJson {
    pub base: usize,
    pub sup: f64,
    pub alpha: Vec<f64>,
}

impl Filtration {
    pub fn to_json(&self) -> FiltrationJson {
        FiltrationJson {
            base: self.base,
            sup: self.sup,
            alpha: (0..self.graph.n_vertices()).map(|v| self.alpha_vertex(v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{shapes, SimplicialComplex};
    use proptest::prelude::*;

    #[test]
    fn path_values() {
        let f = filtration(&Graph::unit(shapes::path(3)).unwrap(), 0).unwrap();
        assert_eq!(f.alpha_vertex(0), 0.5);
        assert_eq!(f.alpha_vertex(1), 0.75);
        assert_eq!(f.alpha_vertex(2), 1.0);
        let s = f.sublevel(0.8, false);
        assert!((s.total_length - 1.2).abs() < 1e-12);
        assert!(s.graph.is_connected());
        let half = f.sublevel(0.5, false);
        assert_eq!(half.points, vec![GraphPoint::vertex(0)]);
        assert_eq!(f.sublevel(1.0, false).total_length, 2.0);
        assert_eq!(f.sublevel(0.4, false).points.len(), 0);
        assert_eq!(f.sublevel(0.5, true).points.len(), 0);
    }

    #[test]
    fn cycle_max_is_interior() {
        let f = filtration(&Graph::unit(shapes::cycle(3)).unwrap(), 0).unwrap();
        assert_eq!(f.sup, 1.5);
        let k = f.kink(1, 2).unwrap();
        assert_eq!(k, 0.5);
        assert_eq!(f.alpha(&GraphPoint::on_edge(1, 2, k)), 1.0);
        assert_eq!(f.sublevel(1.0, false).total_length, 3.0);
    }

    #[test]
    fn single_vertex_is_constant() {
        let z = Graph::unit(SimplicialComplex::new(1, Vec::<Vec<usize>>::new()).unwrap()).unwrap();
        let f = filtration(&z, 0).unwrap();
        assert_eq!(f.alpha_vertex(0), 0.5);
        let two = Graph::unit(SimplicialComplex::new(2, Vec::<Vec<usize>>::new()).unwrap()).unwrap();
        assert!(matches!(filtration(&two, 0), Err(Error::DisconnectedGraph)));
    }

    fn torus_skeleton(a: usize, b: usize) -> Graph {
        let t = shapes::torus(a, b);
        let edges: Vec<Vec<usize>> = t.edges().map(|(x, y)| vec![x, y]).collect();
        Graph::unit(SimplicialComplex::new(t.n_vertices(), edges).unwrap()).unwrap()
    }

    proptest! {
        #[test]
        fn sublevels_connected(a in 3usize..7, b in 3usize..7, base in 0usize..9, t in 0.5f64..1.0) {
            let z = torus_skeleton(a, b);
            let f = filtration(&z, base % z.n_vertices()).unwrap();
            let s = f.sublevel(t, false);
            prop_assert!(s.graph.is_connected());
            let max = (0..z.n_vertices()).map(|v| f.alpha_vertex(v)).fold(0.0, f64::max);
            let max_kink = f
                .kink_params()
                .iter()
                .map(|(&(x, y), s)| f.alpha(&GraphPoint::on_edge(x, y, s[0])))
                .fold(max, f64::max);
            prop_assert!((max_kink - 1.0).abs() < 1e-12);
        }
    }
}

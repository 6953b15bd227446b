use kdtree::distance::squared_euclidean;
use kdtree::KdTree;
use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};

use super::construction::BundleConstruction;
use crate::error::{Error, Result};
use crate::sampling::Halton;

/// Metadata describing how a [`DistanceGraph`] resolves the metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub samples: usize,
    pub neighbors: usize,
    pub seed: u64,
    /// Half-widths of the sampled box in `Φ`-coordinates (F part, Y part).
    pub box_f: f64,
    pub box_y: f64,
}

/// Shortest paths on a k-nearest-neighbour graph of quasi-random samples.
/// Everything happens in `Φ`-coordinates, where the metric is a scalar
/// multiple of the euclidean one and `Φ` is an isometry onto them; an edge
/// costs its euclidean length times the square root of the scalar at its
/// midpoint.
pub struct DistanceGraph<'a> {
    bundle: &'a BundleConstruction,
    points: Vec<Vec<f64>>,
    tree: KdTree<f64, usize, Vec<f64>>,
    graph: UnGraph<(), f64>,
    pub resolution: Resolution,
}

impl<'a> DistanceGraph<'a> {
    pub fn new(bundle: &'a BundleConstruction, samples: usize, neighbors: usize, seed: u64) -> Result<Self> {
        let n = bundle.n();
        if n > 16 {
            return Err(Error::InvalidParameter(format!("distance graphs support n <= 16, got {n}")));
        }
        let box_f = bundle.f_radius * 1.1;
        let box_y = bundle.y_radius + bundle.m as f64 * super::construction::INRADIUS + 0.3;
        let nf = bundle.n_f();
        let points: Vec<Vec<f64>> = Halton::new(n, seed)
            .take(samples)
            .map(|u| {
                u.iter()
                    .enumerate()
                    .map(|(c, x)| {
                        let r = if c < nf { box_f } else { box_y };
                        r * (2.0 * x - 1.0)
                    })
                    .collect()
            })
            .collect();
        let mut tree = KdTree::new(n);
        for (i, p) in points.iter().enumerate() {
            tree.add(p.clone(), i).map_err(|e| Error::InvalidParameter(format!("{e:?}")))?;
        }
        let mut graph = UnGraph::with_capacity(samples, samples * neighbors);
        for _ in 0..samples {
            graph.add_node(());
        }
        let mut g = Self {
            bundle,
            points,
            tree,
            graph,
            resolution: Resolution { samples, neighbors, seed, box_f, box_y },
        };
        for i in 0..samples {
            let p = g.points[i].clone();
            for (j, w) in g.neighbours(&p, neighbors + 1) {
                if j > i {
                    g.graph.add_edge(NodeIndex::new(i), NodeIndex::new(j), w);
                }
            }
        }
        Ok(g)
    }

    /// Length of the straight `Φ`-segment from `a` to `b` under the metric,
    /// with the scalar sampled at the midpoint.
    fn edge_cost(&self, a: &[f64], b: &[f64]) -> f64 {
        let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
        let len = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        self.bundle.conformal(&mid).sqrt() * len
    }

    fn neighbours(&self, p: &[f64], k: usize) -> Vec<(usize, f64)> {
        self.tree
            .nearest(p, k, &squared_euclidean)
            .unwrap_or_default()
            .into_iter()
            .map(|(_, &j)| (j, self.edge_cost(p, &self.points[j])))
            .collect()
    }

    /// Estimated distance between two points of `X`.
    pub fn distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        // fixed orientation makes the estimate exactly symmetric
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        let (px, py) = (self.bundle.phi(x), self.bundle.phi(y));
        let mut graph = self.graph.clone();
        let k = self.resolution.neighbors;
        let s = graph.add_node(());
        let t = graph.add_node(());
        for (j, w) in self.neighbours(&px, k) {
            graph.add_edge(s, NodeIndex::new(j), w);
        }
        for (j, w) in self.neighbours(&py, k) {
            graph.add_edge(t, NodeIndex::new(j), w);
        }
        let costs = dijkstra(&graph, s, Some(t), |e| *e.weight());
        match costs.get(&t) {
            Some(&d) => Ok(d),
            None => Err(Error::ResolutionTooCoarse),
        }
    }
}

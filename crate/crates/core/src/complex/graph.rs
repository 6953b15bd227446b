use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use super::SimplicialComplex;
use crate::error::{Error, Result};

/// A 1-dimensional complex with positive edge lengths and its path metric.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    complex: SimplicialComplex,
    lengths: BTreeMap<(usize, usize), f64>,
}

impl Graph {
    pub fn new(complex: SimplicialComplex, lengths: BTreeMap<(usize, usize), f64>) -> Result<Self> {
        if complex.dim().unwrap_or(0) > 1 {
            return Err(Error::InvalidComplex("graph must have dimension <= 1".into()));
        }
        for (a, b) in complex.edges() {
            match lengths.get(&(a, b)) {
                Some(&l) if l > 0.0 && l.is_finite() => {}
                _ => return Err(Error::InvalidParameter(format!("edge ({a},{b}) needs a positive length"))),
            }
        }
        let lengths = lengths.into_iter().filter(|(e, _)| complex.contains(&[e.0, e.1])).collect();
        Ok(Self { complex, lengths })
    }

    /// Graph with all edge lengths equal to one.
    pub fn unit(complex: SimplicialComplex) -> Result<Self> {
        let lengths = complex.edges().map(|e| (e, 1.0)).collect();
        Self::new(complex, lengths)
    }

    /// Graph with edge lengths taken from the embedding.
    pub fn euclidean(complex: SimplicialComplex) -> Result<Self> {
        let coords = complex
            .coords()
            .ok_or_else(|| Error::InvalidComplex("euclidean lengths need an embedding".into()))?;
        let lengths = complex
            .edges()
            .map(|(a, b)| ((a, b), crate::geometry::dist(&coords[a], &coords[b])))
            .collect();
        Self::new(complex, lengths)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn n_vertices(&self) -> usize {
        self.complex.n_vertices()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.complex.edges()
    }

    pub fn length(&self, a: usize, b: usize) -> Option<f64> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.lengths.get(&key).copied()
    }

    pub fn lengths(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.lengths
    }

    pub fn is_connected(&self) -> bool {
        self.complex.is_connected()
    }

    /// Path-metric distances from `source`; unreachable vertices get `inf`.
    pub fn distances_from(&self, source: usize) -> Vec<f64> {
        let adj = self.complex.adjacency();
        let mut dist = vec![f64::INFINITY; self.n_vertices()];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(HeapItem(0.0, source));
        while let Some(HeapItem(d, v)) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &w in &adj[v] {
                let nd = d + self.length(v, w).unwrap_or(1.0);
                if nd < dist[w] {
                    dist[w] = nd;
                    heap.push(HeapItem(nd, w));
                }
            }
        }
        dist
    }

    /// Splits edge `{a, b}` at fraction `s` from `a`; returns the new vertex.
    pub fn split_edge(&mut self, a: usize, b: usize, s: f64) -> usize {
        let len = self.length(a, b).unwrap_or(1.0);
        let m = self.complex.split_edge(a, b, s);
        self.lengths.remove(&if a < b { (a, b) } else { (b, a) });
        self.lengths.insert(if a < m { (a, m) } else { (m, a) }, (s * len).max(f64::MIN_POSITIVE));
        self.lengths.insert(if b < m { (b, m) } else { (m, b) }, ((1.0 - s) * len).max(f64::MIN_POSITIVE));
        m
    }
}

#[derive(PartialEq)]
pub(crate) struct HeapItem(pub f64, pub usize);

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::super::shapes;
    use super::*;

    #[test]
    fn path_metric() {
        let g = Graph::unit(shapes::path(3)).unwrap();
        assert_eq!(g.distances_from(0), vec![0.0, 1.0, 2.0]);
        let c = Graph::unit(shapes::cycle(5)).unwrap();
        assert_eq!(c.distances_from(0), vec![0.0, 1.0, 2.0, 2.0, 1.0]);
    }

    #[test]
    fn rejects_nonpositive_lengths() {
        let mut l = BTreeMap::new();
        l.insert((0, 1), 0.0);
        assert!(Graph::new(shapes::path(2), l).is_err());
        assert!(Graph::unit(shapes::simplex(2)).is_err());
    }

    #[test]
    fn split_keeps_total_length() {
        let mut g = Graph::unit(shapes::path(2)).unwrap();
        let m = g.split_edge(0, 1, 0.25);
        assert_eq!(g.length(0, m), Some(0.25));
        assert_eq!(g.length(m, 1), Some(0.75));
        assert_eq!(g.distances_from(0)[1], 1.0);
    }
}

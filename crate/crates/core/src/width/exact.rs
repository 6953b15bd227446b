//! Fiber diameters of simplicial maps with embedded source, and widths of
//! maps evaluated on sample sets.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cert::{Certificate, Method};
use crate::complex::{Simplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::geometry::diameter;

/// A point of the target: positive barycentric weights on a simplex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetPoint {
    pub simplex: Simplex,
    pub weights: Vec<f64>,
}

impl TargetPoint {
    pub fn vertex(v: usize) -> Self {
        Self { simplex: vec![v], weights: vec![1.0] }
    }

    /// Drops zero weights, sorts by vertex and normalizes.
    pub fn new(simplex: &[usize], weights: &[f64]) -> Result<Self> {
        if simplex.len() != weights.len() || weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::InvalidParameter("target point needs one nonnegative weight per vertex".into()));
        }
        let mut pairs: Vec<(usize, f64)> =
            simplex.iter().copied().zip(weights.iter().copied()).filter(|p| p.1 > 0.0).collect();
        pairs.sort_by_key(|p| p.0);
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        if pairs.is_empty() || pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("degenerate target point".into()));
        }
        Ok(Self { simplex: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1 / total).collect() })
    }
}

/// Source simplices mapped bijectively onto each target simplex. These are
/// the only simplices whose vertex choices produce fiber vertices.
#[derive(Clone, Debug)]
pub struct FiberIndex<'a> {
    map: &'a SimplicialMap,
    carriers: HashMap<Simplex, Vec<Simplex>>,
}

impl<'a> FiberIndex<'a> {
    pub fn new(map: &'a SimplicialMap) -> Result<Self> {
        if map.source().coords().is_none() {
            return Err(Error::InvalidComplex("fiber diameters need an embedded source".into()));
        }
        let mut carriers: HashMap<Simplex, Vec<Simplex>> = HashMap::new();
        for s in map.source().simplices() {
            let img = map.image(s);
            if img.len() == s.len() {
                carriers.entry(img).or_default().push(s.clone());
            }
        }
        Ok(Self { map, carriers })
    }

    /// Vertices of the fiber over `y`. Over a point with weights `y_u`, the
    /// fiber meets a carrier simplex in the points `Σ y_u v_u` with `v_u` its
    /// vertex over `u`; every fiber piece is the convex hull of such points.
    pub fn fiber_vertices(&self, y: &TargetPoint) -> Vec<Vec<f64>> {
        let Some(carriers) = self.carriers.get(&y.simplex) else { return Vec::new() };
        let src = self.map.source();
        let dim = src.embedding_dim().unwrap_or(0);
        carriers
            .iter()
            .map(|s| {
                let mut p = vec![0.0; dim];
                for &v in s {
                    let u = self.map.apply(v);
                    let k = y.simplex.binary_search(&u).expect("carrier maps onto the target simplex");
                    for (a, c) in p.iter_mut().zip(src.coord(v).unwrap()) {
                        *a += y.weights[k] * c;
                    }
                }
                p
            })
            .collect()
    }

    pub fn fiber_diameter(&self, y: &TargetPoint) -> Result<f64> {
        let pts = self.fiber_vertices(y);
        if pts.is_empty() {
            return Err(Error::EmptyFiber);
        }
        Ok(diameter::<f64, _>(&pts))
    }
}

pub fn fiber_diameter_exact(f: &SimplicialMap, y: &TargetPoint) -> Result<f64> {
    FiberIndex::new(f)?.fiber_diameter(y)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapWidthReport {
    pub fibers: BTreeMap<String, f64>,
    pub width: f64,
    pub method: Method,
    /// Number of fibers (or bins) evaluated.
    pub evaluated: usize,
}

impl MapWidthReport {
    fn from_fibers(fibers: BTreeMap<String, f64>, method: Method, evaluated: usize) -> Self {
        let width = fibers.values().copied().fold(0.0, f64::max);
        Self { fibers, width, method, evaluated }
    }

    pub fn certificate<I: Serialize>(&self, name: &str, inputs: &I, seed: u64, bound: Option<f64>) -> Certificate {
        let mut c = Certificate::new(name, inputs, self.method.clone(), seed, self.evaluated);
        for (k, &d) in &self.fibers {
            c.push_fiber(k.clone(), d);
        }
        if let Some(b) = bound {
            c.judge(b, false);
        }
        c
    }
}

/// Positive compositions of `total` into `parts` parts.
fn interior_grid(parts: usize, total: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in interior_grid(parts - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Exact width of a simplicial map. Fibers over target vertices are exact;
/// on each open target cell the fiber vertices move affinely, so pairwise
/// distances are convex along the cell and never exceed the values at its
/// vertices. The interior grid (`grid` points per dimension) is evaluated
/// and recorded as a cross-check.
pub fn map_width(f: &SimplicialMap, grid: usize) -> Result<MapWidthReport> {
    let index = FiberIndex::new(f)?;
    let target = f.target();
    let mut fibers = BTreeMap::new();
    let mut evaluated = 0;
    for v in 0..target.n_vertices() {
        if let Ok(d) = index.fiber_diameter(&TargetPoint::vertex(v)) {
            fibers.insert(format!("v{v}"), d);
            evaluated += 1;
        }
    }
    if grid > 0 {
        let cells: Vec<&Simplex> = target.simplices().filter(|s| s.len() > 1).collect();
        let rows: Vec<(String, f64, usize)> = cells
            .par_iter()
            .filter_map(|s| {
                let mut best: Option<f64> = None;
                let mut count = 0;
                for c in interior_grid(s.len(), grid + 1) {
                    let w: Vec<f64> = c.iter().map(|&k| k as f64 / (grid + 1) as f64).collect();
                    if let Ok(d) = index.fiber_diameter(&TargetPoint { simplex: (*s).clone(), weights: w }) {
                        best = Some(best.map_or(d, |b: f64| b.max(d)));
                        count += 1;
                    }
                }
                best.map(|b| (format!("cell{s:?}"), b, count))
            })
            .collect();
        for (k, d, c) in rows {
            fibers.insert(k, d);
            evaluated += c;
        }
    }
    Ok(MapWidthReport::from_fibers(fibers, Method::Exact, evaluated))
}

/// Sampled width: samples binned by `delta`-cells of their image.
pub fn map_width_sampled<F>(samples: &[Vec<f64>], f: F, delta: f64) -> Result<MapWidthReport>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter("bin tolerance must be positive".into()));
    }
    let keyed: Vec<(Vec<i64>, usize)> = samples
        .par_iter()
        .enumerate()
        .map(|(i, x)| (f(x).iter().map(|y| (y / delta).floor() as i64).collect(), i))
        .collect();
    let mut bins: BTreeMap<Vec<i64>, Vec<&[f64]>> = BTreeMap::new();
    for (k, i) in keyed {
        bins.entry(k).or_default().push(&samples[i]);
    }
    let fibers: BTreeMap<String, f64> = bins
        .par_iter()
        .map(|(k, pts)| (format!("bin{k:?}"), diameter::<f64, _>(pts)))
        .collect();
    Ok(MapWidthReport::from_fibers(fibers, Method::Sampled { delta }, samples.len()))
}

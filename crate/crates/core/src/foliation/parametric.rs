//! Families of simple foliations over a parameter complex, their
//! interpolation to a single foliation over the cone, and the iterated
//! interpolation over a simplex.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::interpolate::{run_pair, PairInput, ParametricFoliation, Split};
use super::refine::{GraphPoint, Work};
use super::simple::Foliation;
use crate::complex::{h1_rank, SimplicialComplex};
use crate::error::{Error, Result};

/// One member of a family: a simple foliation on a refinement of the base
/// complex, reached by replaying `splits`.
#[derive(Clone, Debug)]
pub struct FamilySlice {
    /// Coordinates of the member in the parameter complex.
    pub param: Vec<f64>,
    pub foliation: Foliation,
    pub splits: Vec<Split>,
    pub labels: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct FoliationFamily {
    pub base: SimplicialComplex,
    /// Dimension of the parameter complex.
    pub dim: usize,
    pub slices: Vec<FamilySlice>,
}

impl FoliationFamily {
    pub fn point(p: &Foliation) -> Self {
        Self {
            base: p.sigma().clone(),
            dim: 0,
            slices: vec![FamilySlice {
                param: vec![],
                foliation: p.clone(),
                splits: vec![],
                labels: vec![0; p.sigma().n_vertices()],
            }],
        }
    }

    /// Constant family over `[0, 1]` sampled at `count` parameters.
    pub fn constant_interval(p: &Foliation, count: usize) -> Self {
        let n = p.sigma().n_vertices();
        let slices = (0..count)
            .map(|i| FamilySlice {
                param: vec![i as f64 / (count.max(2) - 1) as f64],
                foliation: p.clone(),
                splits: vec![],
                labels: vec![0; n],
            })
            .collect();
        Self { base: p.sigma().clone(), dim: 1, slices }
    }

    /// The event slices of an interpolation, as a family over `[0, 1]`.
    pub fn from_interpolation(base: &SimplicialComplex, pf: &ParametricFoliation) -> Self {
        let slices = pf
            .events
            .iter()
            .map(|e| FamilySlice {
                param: vec![e.t],
                foliation: e.foliation.clone(),
                splits: e.splits.clone(),
                labels: e.labels.clone(),
            })
            .collect();
        Self { base: base.clone(), dim: 1, slices }
    }

    pub fn width(&self) -> f64 {
        self.slices.iter().map(|s| s.foliation.width).fold(0.0, f64::max)
    }
}

/// Interpolations from every member of a family to one foliation: a family
/// over the cone on the parameter complex, indexed by (member, event).
#[derive(Clone, Debug)]
pub struct ConeFamily {
    pub params: Vec<Vec<f64>>,
    pub runs: Vec<ParametricFoliation>,
    pub beta: usize,
    pub family_width: f64,
    pub w1: f64,
    /// `(β+2)·W(family) + (β+1)·W(p1)`.
    pub bound: f64,
}

impl ConeFamily {
    pub fn width(&self) -> f64 {
        self.runs.iter().map(ParametricFoliation::width).fold(0.0, f64::max)
    }

    pub fn n_slices(&self) -> usize {
        self.runs.iter().map(|r| r.events.len()).sum()
    }

    pub fn chain_violations(&self) -> usize {
        self.runs.iter().map(ParametricFoliation::chain_violations).sum()
    }

    /// Rows `(param..., t, width)` for plotting.
    pub fn curve(&self) -> Vec<Vec<f64>> {
        let mut rows = Vec::new();
        for (p, r) in self.params.iter().zip(&self.runs) {
            for e in &r.events {
                let mut row = p.clone();
                row.push(e.t);
                row.push(e.width);
                rows.push(row);
            }
        }
        rows
    }
}

impl FamilySlice {
    /// The same slice over `base` with different vertex coordinates: the
    /// splits are replayed so refined vertices move affinely.
    pub fn reembed(&self, base: &SimplicialComplex) -> Result<Self> {
        let mut sigma = base.clone();
        for &(u, v, lam) in &self.splits {
            sigma.split_edge(u, v, lam);
        }
        let map = crate::complex::SimplicialMap::new(
            sigma,
            self.foliation.map.target().clone(),
            self.foliation.map.vertex_map().to_vec(),
        )?;
        Ok(Self { foliation: Foliation::new(map)?, ..self.clone() })
    }
}

/// Carries the vertex values of `p` on `base` through a split history.
fn replay(base: &SimplicialComplex, p: &Foliation, splits: &[Split]) -> (SimplicialComplex, Vec<GraphPoint>) {
    let vals = p.map.vertex_map().iter().map(|&v| GraphPoint::vertex(v)).collect();
    let mut w = Work::new(base.clone(), vec![vals]);
    for &(u, v, lam) in splits {
        w.split(u, v, lam);
    }
    (w.sigma, w.vals.pop().unwrap())
}

pub fn parametric_interpolate(family: &FoliationFamily, p1: &Foliation) -> Result<ConeFamily> {
    if family.dim > 2 {
        return Err(Error::InvalidParameter(format!("parameter complex of dimension {} > 2", family.dim)));
    }
    if p1.sigma() != &family.base {
        return Err(Error::InvalidParameter("target foliation lives on a different complex".into()));
    }
    let beta = h1_rank(&family.base);
    let layer = family.slices.iter().flat_map(|s| s.labels.iter().copied()).max().unwrap_or(0) + 1;
    let runs = family
        .slices
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let (sigma, vals) = replay(&family.base, p1, &s.splits);
            if sigma.n_vertices() != s.foliation.sigma().n_vertices() || sigma.n_simplices() != s.foliation.sigma().n_simplices() {
                return Err(Error::MissingProvenance.in_cell(format!("family member {i}")));
            }
            let input = PairInput {
                sigma: s.foliation.sigma().clone(),
                log: s.splits.clone(),
                labels: s.labels.clone(),
                n_base: family.base.n_vertices(),
                z0: s.foliation.graph(),
                p0: s.foliation.map.vertex_map().iter().map(|&v| GraphPoint::vertex(v)).collect(),
                w0: s.foliation.width,
                z1: p1.graph(),
                p1: vals,
                w1: p1.width,
                base_vertex: 0,
                beta,
                layer,
            };
            run_pair(&input, true).map_err(|e| e.in_cell(format!("family member {i}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let family_width = family.width();
    Ok(ConeFamily {
        params: family.slices.iter().map(|s| s.param.clone()).collect(),
        runs,
        beta,
        family_width,
        w1: p1.width,
        bound: super::interpolate::interpolation_bound(beta, family_width, p1.width),
    })
}

pub fn simplex_width_bound(beta: usize, m: usize) -> f64 {
    (2 * beta * m + m * m + m + 1) as f64
}

pub fn discontinuity_bound(beta: usize, m: usize) -> usize {
    (2 * beta + m + 1) * m
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexAudit {
    pub m: usize,
    pub beta: usize,
    /// Factor the metric was divided by so that every input has width ≤ 1.
    pub scale: f64,
    /// Measured family width in the normalized metric.
    pub width: f64,
    pub bound: f64,
    pub within_bound: bool,
    pub slices: usize,
    pub chain_violations: usize,
    /// Largest hop diameter of the layer-piece graph of a fiber.
    pub d_max: usize,
    pub d_bound: usize,
    pub d_exceeding: usize,
}

#[derive(Clone, Debug)]
pub struct SimplexInterpolation {
    pub stages: Vec<ConeFamily>,
    pub audit: SimplexAudit,
}

/// Iterated interpolation over `Δ^m`: first between `p_0` and `p_1`, then
/// from every slice of that family to `p_2`.
pub fn interpolate_simplex(ps: &[Foliation]) -> Result<SimplexInterpolation> {
    let m = ps.len().checked_sub(1).ok_or_else(|| Error::InvalidParameter("no foliations".into()))?;
    if m > 2 {
        return Err(Error::InvalidParameter(format!("simplex dimension {m} > 2")));
    }
    if ps.iter().any(|p| p.sigma() != ps[0].sigma()) {
        return Err(Error::InvalidParameter("foliations live on different complexes".into()));
    }
    let scale = ps.iter().map(|p| p.width).fold(0.0, f64::max);
    if !(scale > 0.0) {
        return Err(Error::InvalidParameter("all inputs have zero width".into()));
    }
    let norm: Vec<Foliation> = ps.iter().map(|p| p.scaled(1.0 / scale)).collect();
    let base = norm[0].sigma().clone();
    let beta = h1_rank(&base);
    let mut stages = Vec::new();
    let mut family = FoliationFamily::point(&norm[0]);
    for p in &norm[1..] {
        let cone = parametric_interpolate(&family, p)?;
        family = cone_to_family(&base, &cone, family.dim + 1);
        stages.push(cone);
    }
    let width = if stages.is_empty() { norm[0].width } else { stages.iter().map(ConeFamily::width).fold(0.0, f64::max) };
    let bound = simplex_width_bound(beta, m);
    let d_bound = discontinuity_bound(beta, m);
    let (d_max, d_exceeding) = family
        .slices
        .par_iter()
        .map(|s| {
            let ds = layer_piece_diameters(&s.foliation, &s.labels);
            (ds.iter().copied().max().unwrap_or(0), ds.iter().filter(|&&d| d > d_bound).count())
        })
        .reduce(|| (0, 0), |a, b| (a.0.max(b.0), a.1 + b.1));
    let audit = SimplexAudit {
        m,
        beta,
        scale,
        width,
        bound,
        within_bound: width <= bound + 1e-9,
        slices: family.slices.len(),
        chain_violations: stages.iter().map(ConeFamily::chain_violations).sum(),
        d_max,
        d_bound,
        d_exceeding,
    };
    Ok(SimplexInterpolation { stages, audit })
}

/// The slices of a cone family as a family one dimension up.
pub fn cone_to_family(base: &SimplicialComplex, cone: &ConeFamily, dim: usize) -> FoliationFamily {
    let mut slices = Vec::new();
    for (p, run) in cone.params.iter().zip(&cone.runs) {
        for e in &run.events {
            let mut param = p.clone();
            param.push(e.t);
            slices.push(FamilySlice {
                param,
                foliation: e.foliation.clone(),
                splits: e.splits.clone(),
                labels: e.labels.clone(),
            });
        }
    }
    FoliationFamily { base: base.clone(), dim, slices }
}

/// Per fiber: split it into pieces drawn from one layer each (connected
/// components of the same-label subgraph) and return the hop diameter of
/// the graph on pieces.
pub fn layer_piece_diameters(f: &Foliation, labels: &[u8]) -> Vec<usize> {
    let sigma = f.sigma();
    let n = sigma.n_vertices();
    let adj = sigma.adjacency();
    let mut fibers: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        fibers.entry(f.map.apply(v)).or_default().push(v);
    }
    let mut piece = vec![usize::MAX; n];
    let mut out = Vec::with_capacity(fibers.len());
    for verts in fibers.values() {
        let leaf = f.map.apply(verts[0]);
        let mut pieces = 0;
        for &s in verts {
            if piece[s] != usize::MAX {
                continue;
            }
            piece[s] = pieces;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &w in &adj[u] {
                    if piece[w] == usize::MAX && f.map.apply(w) == leaf && labels[w] == labels[s] {
                        piece[w] = pieces;
                        q.push_back(w);
                    }
                }
            }
            pieces += 1;
        }
        let mut padj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); pieces];
        for &u in verts {
            for &w in &adj[u] {
                if f.map.apply(w) == leaf && piece[u] != piece[w] {
                    padj[piece[u]].insert(piece[w]);
                }
            }
        }
        let mut diam = 0;
        for s in 0..pieces {
            let mut dist = vec![usize::MAX; pieces];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &w in &padj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        q.push_back(w);
                    }
                }
            }
            diam = diam.max(dist.into_iter().filter(|&d| d != usize::MAX).max().unwrap_or(0));
        }
        out.push(diam);
    }
    out
}

//! The skeletal construction: simple foliations of the fibers of a product
//! bundle `Y × Σ`, interpolated cell by cell over the skeleta of `Y`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::constants::{recurrence_width, waist_constant, Variant};
use crate::complex::{h1_rank, shapes, Simplex, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::foliation::{
    cone_to_family, demo, parametric_interpolate, ConeFamily, FamilySlice, Foliation, FoliationFamily,
};

/// A product bundle `Y × Σ` with one embedding of `Σ` per vertex of `Y`
/// (metrics over a cell interpolate affinely) and, for every simplex of `Y`,
/// a simple foliation of `Σ` used at its center.
#[derive(Clone, Debug)]
pub struct ProductBundleData {
    pub y: SimplicialComplex,
    pub fiber: SimplicialComplex,
    pub embeddings: Vec<Vec<Vec<f64>>>,
    pub centers: BTreeMap<Simplex, SimplicialMap>,
}

impl ProductBundleData {
    pub fn new(
        y: SimplicialComplex,
        fiber: SimplicialComplex,
        embeddings: Vec<Vec<Vec<f64>>>,
        centers: BTreeMap<Simplex, SimplicialMap>,
    ) -> Result<Self> {
        if y.dim().unwrap_or(0) > 2 {
            return Err(Error::InvalidParameter("base of dimension > 2".into()));
        }
        if embeddings.len() != y.n_vertices() || embeddings.iter().any(|e| e.len() != fiber.n_vertices()) {
            return Err(Error::InvalidParameter("one embedding of the fiber per base vertex".into()));
        }
        for s in y.simplices() {
            let f = centers.get(s).ok_or_else(|| Error::InvalidParameter(format!("no center foliation for {s:?}")))?;
            if f.source().n_vertices() != fiber.n_vertices() || f.source().simplices().ne(fiber.simplices()) {
                return Err(Error::InvalidParameter(format!("center foliation of {s:?} is not on the fiber")));
            }
        }
        Ok(Self { y, fiber, embeddings, centers })
    }

    pub fn m(&self) -> usize {
        self.y.dim().unwrap_or(0)
    }

    pub fn beta(&self) -> usize {
        h1_rank(&self.fiber)
    }

    /// Embedding at the barycenter of a cell.
    pub fn center_embedding(&self, cell: &[usize]) -> Vec<Vec<f64>> {
        let k = cell.len() as f64;
        (0..self.fiber.n_vertices())
            .map(|x| {
                let d = self.embeddings[cell[0]][x].len();
                (0..d).map(|i| cell.iter().map(|&v| self.embeddings[v][x][i]).sum::<f64>() / k).collect()
            })
            .collect()
    }

    /// Bound on `|d_y − d_y'|` over a cell: twice the largest displacement
    /// of a fiber vertex between embeddings of the cell.
    pub fn closeness(&self, cell: &[usize]) -> f64 {
        let center = self.center_embedding(cell);
        let mut embs: Vec<&Vec<Vec<f64>>> = cell.iter().map(|&v| &self.embeddings[v]).collect();
        embs.push(&center);
        let mut worst: f64 = 0.0;
        for a in &embs {
            for b in &embs {
                for (p, q) in a.iter().zip(b.iter()) {
                    let d = p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
                    worst = worst.max(d);
                }
            }
        }
        2.0 * worst
    }

    pub fn embedded(&self, coords: Vec<Vec<f64>>) -> Result<SimplicialComplex> {
        self.fiber.clone().with_coords(coords)
    }

    /// Center foliation of a cell, measured in the cell's center metric.
    pub fn center_foliation(&self, cell: &[usize]) -> Result<Foliation> {
        let sigma = self.embedded(self.center_embedding(cell))?;
        let f = &self.centers[cell];
        Foliation::new(SimplicialMap::new(sigma, f.target().clone(), f.vertex_map().to_vec())?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub cell: Vec<usize>,
    pub boundary_width: f64,
    pub center_width: f64,
    pub closeness: f64,
    pub width: f64,
    pub bound: f64,
    pub slices: usize,
    pub chain_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub k: usize,
    pub cells: Vec<CellReport>,
    /// Measured width of the family over the `k`-skeleton.
    pub measured: f64,
    /// Largest boundary-family width met in a center metric.
    pub w_prev: f64,
    pub c: f64,
    pub eps: f64,
    /// Recurrence step fed with `w_prev`, `c` and `ε = 0`; the metric change
    /// is already inside `w_prev`.
    pub bound_measured: f64,
    /// Recurrence from the vertex widths with `ε` scaled by `β + 2`.
    pub bound_recurrence: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkeletalReport {
    pub m: usize,
    pub beta: usize,
    pub w0: f64,
    pub c: f64,
    pub eps: f64,
    pub steps: Vec<StepReport>,
    pub width: f64,
    pub ok: bool,
}

impl SkeletalReport {
    /// Rows `(k, measured, bound_measured, bound_recurrence)`.
    pub fn curve(&self) -> Vec<Vec<f64>> {
        let mut rows = vec![vec![0.0, self.w0, self.w0, self.w0]];
        rows.extend(self.steps.iter().map(|s| vec![s.k as f64, s.measured, s.bound_measured, s.bound_recurrence]));
        rows
    }
}

#[derive(Clone, Debug)]
pub struct SkeletalConstruction {
    pub report: SkeletalReport,
    /// Families over each cell of `Y`, vertices included.
    pub families: BTreeMap<Simplex, FoliationFamily>,
    pub cones: BTreeMap<Simplex, ConeFamily>,
}

pub fn skeletal_construction(b: &ProductBundleData) -> Result<SkeletalConstruction> {
    let m = b.m();
    let beta = b.beta();
    let bf = beta as f64;
    let mut families: BTreeMap<Simplex, FoliationFamily> = BTreeMap::new();
    let mut w0: f64 = 0.0;
    for v in 0..b.y.n_vertices() {
        let cell = vec![v];
        let sigma = b.embedded(b.embeddings[v].clone())?;
        let f = b.centers[&cell].clone();
        let p = Foliation::new(SimplicialMap::new(sigma, f.target().clone(), f.vertex_map().to_vec())?)
            .map_err(|e| e.in_cell(format!("vertex {v}")))?;
        w0 = w0.max(p.width);
        families.insert(cell, FoliationFamily::point(&p));
    }
    let cells_by_dim: Vec<Vec<Simplex>> =
        (1..=m).map(|k| b.y.simplices_of_dim(k).cloned().collect()).collect();
    let c_all = b
        .y
        .simplices()
        .map(|s| b.center_foliation(s).map(|f| f.width))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let eps_all = b.y.simplices().map(|s| b.closeness(s)).fold(0.0, f64::max);
    let mut cones = BTreeMap::new();
    let mut steps = Vec::new();
    let mut w_prev_measured = w0;
    let rec = recurrence_width(w0, c_all, beta as u32, m as u32, (bf + 2.0) * eps_all);
    for (i, cells) in cells_by_dim.iter().enumerate() {
        let k = i + 1;
        let done: Vec<(Simplex, CellReport, ConeFamily, FoliationFamily)> = cells
            .par_iter()
            .map(|cell| {
                let ctx = |e: Error| e.in_cell(format!("cell {cell:?}"));
                let base = b.embedded(b.center_embedding(cell)).map_err(ctx)?;
                let mut slices: Vec<FamilySlice> = Vec::new();
                for face in faces(cell) {
                    for s in &families[&face].slices {
                        slices.push(s.reembed(&base).map_err(ctx)?);
                    }
                }
                let boundary = FoliationFamily { base: base.clone(), dim: k - 1, slices };
                let center = b.center_foliation(cell).map_err(ctx)?;
                let cone = parametric_interpolate(&boundary, &center).map_err(ctx)?;
                let rep = CellReport {
                    cell: cell.clone(),
                    boundary_width: boundary.width(),
                    center_width: center.width,
                    closeness: b.closeness(cell),
                    width: cone.width(),
                    bound: cone.bound,
                    slices: cone.n_slices(),
                    chain_violations: cone.chain_violations(),
                };
                let fam = cone_to_family(&base, &cone, k);
                Ok((cell.clone(), rep, cone, fam))
            })
            .collect::<Result<_>>()?;
        let mut reps = Vec::new();
        for (cell, rep, cone, fam) in done {
            reps.push(rep);
            cones.insert(cell.clone(), cone);
            families.insert(cell, fam);
        }
        let measured = reps.iter().map(|r| r.width).fold(0.0, f64::max);
        let w_prev = reps.iter().map(|r| r.boundary_width).fold(0.0, f64::max);
        let c = reps.iter().map(|r| r.center_width).fold(0.0, f64::max);
        let eps = reps.iter().map(|r| r.closeness).fold(0.0, f64::max);
        let bound_measured = recurrence_width(w_prev, c, beta as u32, 1, 0.0)[0];
        let bound_recurrence = rec[i].max(recurrence_width(w_prev_measured, c, beta as u32, 1, (bf + 2.0) * eps)[0]);
        let tol = 1e-9 * bound_measured.max(1.0);
        let ok = measured <= bound_measured + tol && measured <= bound_recurrence + tol;
        steps.push(StepReport { k, cells: reps, measured, w_prev, c, eps, bound_measured, bound_recurrence, ok });
        w_prev_measured = w_prev_measured.max(measured);
    }
    let width = steps.last().map_or(w0, |s| s.measured.max(w0));
    let ok = steps.iter().all(|s| s.ok);
    let report = SkeletalReport { m, beta, w0, c: c_all, eps: eps_all, steps, width, ok };
    Ok(SkeletalConstruction { report, families, cones })
}

fn faces(cell: &[usize]) -> Vec<Simplex> {
    (0..cell.len()).map(|skip| cell.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContrapositiveReport {
    pub m: usize,
    pub beta: usize,
    pub w0: f64,
    pub measured_width: f64,
    pub reference: f64,
    pub c_basic: f64,
    pub c_improved: f64,
    /// `reference · c_basic`: fibers with foliations below this width
    /// would push the total width below the reference.
    pub threshold: f64,
    pub contradiction: bool,
    pub measured_below_reference: bool,
    pub statement: String,
}

/// Reads the construction as the contrapositive of the waist inequality
/// against a reference value for the `(m+1)`-width of the total space.
pub fn contrapositive_report(r: &SkeletalReport, reference: f64) -> Result<ContrapositiveReport> {
    let m = r.m.max(1) as u32;
    let c_basic: f64 = waist_constant(m, r.beta as u32, Variant::Basic)?;
    let c_improved: f64 = waist_constant(m, r.beta as u32, Variant::Improved)?;
    let threshold = reference * c_basic;
    let contradiction = r.w0 < threshold;
    let statement = format!(
        "fibers admit simple foliations of width <= {:.6}, so the total space has {}-width <= {:.6} (reference {:.6}){}",
        r.w0,
        r.m + 1,
        r.width,
        reference,
        if contradiction { "; contradicts the reference" } else { "" }
    );
    Ok(ContrapositiveReport {
        m: r.m,
        beta: r.beta,
        w0: r.w0,
        measured_width: r.width,
        reference,
        c_basic,
        c_improved,
        threshold,
        contradiction,
        measured_below_reference: r.width < reference,
        statement,
    })
}

/// `Y` = an edge, `Σ` = an annulus with the same metric over all of `Y`;
/// the seed picks the annulus size and the foliations.
pub fn annulus_edge_bundle(seed: u64) -> Result<ProductBundleData> {
    let rings = 2 + (seed % 2) as usize;
    let sectors = 6 + (seed % 3) as usize;
    let d = demo::annulus(rings, sectors)?;
    let sigma = d.p0.sigma().clone();
    let coords = sigma.coords().unwrap().to_vec();
    let pick = |i: u64| if (seed >> i) & 1 == 0 { d.p0.map.clone() } else { d.p1.map.clone() };
    let mut centers = BTreeMap::new();
    centers.insert(vec![0], pick(0));
    centers.insert(vec![1], pick(1));
    centers.insert(vec![0, 1], pick(2));
    ProductBundleData::new(shapes::path(2), sigma, vec![coords.clone(), coords], centers)
}

/// `Y` = a triangle, `Σ` = a grid disk whose horizontal scale grows by
/// `stretch` from one corner of `Y` to the others.
pub fn disk_triangle_bundle(k: usize, stretch: f64) -> Result<ProductBundleData> {
    let d = demo::disk(k)?;
    let sigma = d.p0.sigma().clone();
    let base = sigma.coords().unwrap().to_vec();
    let emb = |s: f64| base.iter().map(|c| vec![c[0] * (1.0 + s), c[1]]).collect::<Vec<_>>();
    let y = shapes::simplex(2);
    let mut centers = BTreeMap::new();
    for s in y.simplices() {
        let f = if s.len() % 2 == 1 { d.p0.map.clone() } else { d.p1.map.clone() };
        centers.insert(s.clone(), f);
    }
    ProductBundleData::new(y, sigma, vec![emb(0.0), emb(stretch), emb(stretch)], centers)
}

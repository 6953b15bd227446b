//! Covers represented on a shared sample set, their nerves, and the two
//! passages between covers and maps.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::geometry::{diameter, dist};
use crate::localjoin::ColoredTriangulation;

/// Signed depth of a point in a piece: positive inside the open piece.
pub type DepthFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct Piece {
    /// Sorted sample indices.
    pub members: Vec<usize>,
    pub depth: Option<DepthFn>,
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Piece").field("members", &self.members.len()).field("depth", &self.depth.is_some()).finish()
    }
}

#[derive(Clone, Debug)]
pub struct Cover {
    pub samples: Arc<Vec<Vec<f64>>>,
    pub pieces: Vec<Piece>,
    pub open: bool,
    diameters: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub max: usize,
    pub witness: Option<Vec<f64>>,
    pub samples: usize,
}

impl Cover {
    pub fn new(samples: Arc<Vec<Vec<f64>>>, mut pieces: Vec<Piece>, open: bool) -> Result<Self> {
        for p in &mut pieces {
            p.members.sort_unstable();
            p.members.dedup();
            if p.members.is_empty() {
                return Err(Error::InvalidParameter("cover pieces must be nonempty".into()));
            }
            if p.members.last().is_some_and(|&i| i >= samples.len()) {
                return Err(Error::InvalidParameter("piece refers to a missing sample".into()));
            }
        }
        let diameters = pieces
            .par_iter()
            .map(|p| diameter::<f64, _>(&p.members.iter().map(|&i| samples[i].as_slice()).collect::<Vec<_>>()))
            .collect();
        Ok(Self { samples, pieces, open, diameters })
    }

    /// Open pieces `{depth > 0}` restricted to the samples; empty ones dropped.
    pub fn from_depths(samples: Arc<Vec<Vec<f64>>>, depths: Vec<DepthFn>) -> Result<Self> {
        let pieces = depths
            .into_iter()
            .filter_map(|d| {
                let members: Vec<usize> = (0..samples.len()).filter(|&i| d(&samples[i]) > 0.0).collect();
                (!members.is_empty()).then_some(Piece { members, depth: Some(d) })
            })
            .collect();
        Self::new(samples, pieces, true)
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn diameters(&self) -> &[f64] {
        &self.diameters
    }

    pub fn max_diameter(&self) -> f64 {
        self.diameters.iter().copied().fold(0.0, f64::max)
    }

    /// Pieces containing each sample.
    pub fn memberships(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.samples.len()];
        for (k, p) in self.pieces.iter().enumerate() {
            for &i in &p.members {
                out[i].push(k);
            }
        }
        out
    }

    pub fn multiplicity(&self) -> MultiplicityReport {
        let m = self.memberships();
        let (i, max) = m.iter().enumerate().map(|(i, v)| (i, v.len())).max_by_key(|p| (p.1, std::cmp::Reverse(p.0))).unwrap_or((0, 0));
        MultiplicityReport { max, witness: self.samples.get(i).cloned(), samples: self.samples.len() }
    }

    pub fn check_multiplicity(&self, bound: usize) -> Result<()> {
        for (i, m) in self.memberships().iter().enumerate() {
            if m.len() > bound {
                return Err(Error::MultiplicityViolation { point: self.samples[i].clone(), count: m.len(), bound });
            }
        }
        Ok(())
    }

    pub fn check_coverage(&self) -> Result<()> {
        match self.memberships().iter().position(Vec::is_empty) {
            Some(i) => Err(Error::CoverageGap { point: self.samples[i].clone() }),
            None => Ok(()),
        }
    }

    /// Partition-of-unity weight of sample `i` in piece `k`: the depth when
    /// known, else the distance to the nearest sample outside the piece.
    fn weight(&self, k: usize, i: usize) -> f64 {
        let p = &self.pieces[k];
        if let Some(d) = &p.depth {
            return d(&self.samples[i]).max(0.0);
        }
        let x = &self.samples[i];
        let mut best = f64::INFINITY;
        let mut it = p.members.iter().peekable();
        for (j, y) in self.samples.iter().enumerate() {
            while it.peek().is_some_and(|&&m| m < j) {
                it.next();
            }
            if it.peek() == Some(&&j) {
                continue;
            }
            best = best.min(dist(x, y));
        }
        if best.is_finite() {
            best
        } else {
            1.0
        }
    }
}

#[derive(Clone, Debug)]
pub struct NerveMap {
    pub nerve: SimplicialComplex,
    /// Barycentric image of every sample: `(piece, weight)` with positive weights.
    pub images: Vec<Vec<(usize, f64)>>,
    /// Largest piece diameter; every fiber sits inside one piece.
    pub width_bound: f64,
    /// Samples whose image support is not contained in their own pieces.
    pub uncertified: usize,
}

impl NerveMap {
    /// Images as points of `R^{pieces}`.
    pub fn image_points(&self) -> Vec<Vec<f64>> {
        let n = self.nerve.n_vertices();
        self.images
            .iter()
            .map(|w| {
                let mut p = vec![0.0; n];
                for &(k, t) in w {
                    p[k] = t;
                }
                p
            })
            .collect()
    }
}

/// Map from the sample set to the nerve of the cover via normalized
/// distance-to-complement weights.
pub fn nerve_map_from_cover(cover: &Cover, multiplicity_bound: usize) -> Result<NerveMap> {
    cover.check_coverage()?;
    cover.check_multiplicity(multiplicity_bound)?;
    let member = cover.memberships();
    let mut gens: BTreeSet<Simplex> = BTreeSet::new();
    for m in &member {
        gens.insert(m.clone());
    }
    let nerve = SimplicialComplex::new(cover.len(), gens)?;
    let images: Vec<Vec<(usize, f64)>> = member
        .par_iter()
        .enumerate()
        .map(|(i, ks)| {
            let w: Vec<(usize, f64)> = ks.iter().map(|&k| (k, cover.weight(k, i))).filter(|p| p.1 > 0.0).collect();
            let total: f64 = w.iter().map(|p| p.1).sum();
            if total > 0.0 {
                w.into_iter().map(|(k, t)| (k, t / total)).collect()
            } else {
                // boundary sample of a closed cover: share evenly
                ks.iter().map(|&k| (k, 1.0 / ks.len() as f64)).collect()
            }
        })
        .collect();
    let uncertified = images
        .iter()
        .zip(&member)
        .filter(|(img, ks)| img.iter().any(|(k, _)| ks.binary_search(k).is_err()))
        .count();
    Ok(NerveMap { nerve, images, width_bound: cover.max_diameter(), uncertified })
}

/// Closed cover of the samples pulled back from the barycentric dual cells
/// of a grid triangulation of the target. `values[i]` is the image of sample
/// `i` in `R^k`; the cell scale is halved until every piece has diameter at
/// most `width + eps`.
pub fn cover_from_map(samples: Arc<Vec<Vec<f64>>>, values: &[Vec<f64>], width: f64, eps: f64) -> Result<Cover> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    if values.len() != samples.len() {
        return Err(Error::InvalidParameter("one image per sample expected".into()));
    }
    let k = values.first().map_or(0, Vec::len);
    if k == 0 {
        return Cover::new(samples.clone(), vec![Piece { members: (0..samples.len()).collect(), depth: None }], false);
    }
    let mut h = eps;
    let mut last = None;
    for _ in 0..40 {
        let tri = ColoredTriangulation::new(k, h);
        let mut cells: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        let owned: Vec<Vec<Vec<i64>>> = values
            .par_iter()
            .map(|y| {
                let (s, w) = tri.locate(y);
                let top = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                s.vertices().into_iter().zip(w).filter(|(_, wv)| *wv >= top - 1e-12).map(|(v, _)| v).collect()
            })
            .collect();
        for (i, vs) in owned.into_iter().enumerate() {
            for v in vs {
                cells.entry(v).or_default().push(i);
            }
        }
        let pieces = cells.into_values().map(|members| Piece { members, depth: None }).collect();
        let cover = Cover::new(samples.clone(), pieces, false)?;
        if cover.max_diameter() <= width + eps {
            return Ok(cover);
        }
        last = Some(cover);
        h /= 2.0;
    }
    Ok(last.expect("at least one refinement"))
}

/// Union of per-piece covers, each covering its outer piece.
pub fn compose_covers(outer: &Cover, inner: &[Cover], outer_bound: usize, inner_bound: usize) -> Result<Cover> {
    if inner.len() != outer.len() {
        return Err(Error::InvalidParameter("one inner cover per outer piece expected".into()));
    }
    let mut pieces = Vec::new();
    for (o, c) in outer.pieces.iter().zip(inner) {
        if !Arc::ptr_eq(&c.samples, &outer.samples) {
            return Err(Error::InvalidParameter("covers must share the sample set".into()));
        }
        let covered: BTreeSet<usize> = c.pieces.iter().flat_map(|p| p.members.iter().copied()).collect();
        if let Some(&i) = o.members.iter().find(|i| !covered.contains(i)) {
            return Err(Error::CoverageGap { point: outer.samples[i].clone() });
        }
        pieces.extend(c.pieces.iter().cloned());
    }
    let cover = Cover::new(outer.samples.clone(), pieces, outer.open && inner.iter().all(|c| c.open))?;
    cover.check_multiplicity(outer_bound * inner_bound)?;
    Ok(cover)
}

/// Restricts a cover to the samples in `keep`.
pub fn restrict(cover: &Cover, keep: &[usize]) -> Result<Cover> {
    let set: HashMap<usize, ()> = keep.iter().map(|&i| (i, ())).collect();
    let pieces = cover
        .pieces
        .iter()
        .filter_map(|p| {
            let members: Vec<usize> = p.members.iter().copied().filter(|i| set.contains_key(i)).collect();
            (!members.is_empty()).then(|| Piece { members, depth: p.depth.clone() })
        })
        .collect();
    Cover::new(cover.samples.clone(), pieces, cover.open)
}

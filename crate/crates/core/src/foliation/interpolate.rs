//! Interpolation between two simple foliations of one polyhedron through
//! simple foliations, evaluated at every combinatorial event.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::filtration::filtration;
use super::refine::{GraphPoint, RefinedGraph, Region, Work};
use super::simple::Foliation;
use crate::complex::{factor_to_simple_graph, h1_rank, Graph, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// An edge split `(u, w, lambda)` of a refinement history.
pub type Split = (usize, usize, f64);

/// One interpolation problem: a refinement of the base complex carrying the
/// values of `p0` and `p1`, both affine on its simplices.
#[derive(Clone, Debug)]
pub(crate) struct PairInput {
    pub sigma: SimplicialComplex,
    pub log: Vec<Split>,
    pub labels: Vec<u8>,
    pub n_base: usize,
    pub z0: Graph,
    pub p0: Vec<GraphPoint>,
    pub w0: f64,
    pub z1: Graph,
    pub p1: Vec<GraphPoint>,
    pub w1: f64,
    pub base_vertex: usize,
    pub beta: usize,
    /// Layer label given to vertices drawn from `p1`.
    pub layer: u8,
}

/// Points of `Z_0` and `Z_1` identified into one leaf of `p_t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeafOrigin {
    pub z1: Vec<GraphPoint>,
    pub z0: Vec<GraphPoint>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChainStats {
    /// Most distinct `Z_1` points in one chain of identifications.
    pub max_z1_in_chain: usize,
    /// Most `Z_1` points identified into a single leaf.
    pub max_z1_in_class: usize,
    pub merges: usize,
    pub exhaustive: bool,
    pub bound: usize,
    pub violations: usize,
}

#[derive(Clone, Debug)]
pub struct EventSlice {
    pub t: f64,
    pub foliation: Foliation,
    /// Refinement of the base complex the slice lives on.
    pub splits: Vec<Split>,
    pub labels: Vec<u8>,
    pub origin: Vec<LeafOrigin>,
    /// Merge provenance: `(leaf of p̃0, index into front_points)`.
    pub merges: Vec<(usize, usize)>,
    pub front_points: Vec<GraphPoint>,
    pub chain: ChainStats,
    pub width: f64,
}

#[derive(Clone, Debug)]
pub struct ParametricFoliation {
    pub events: Vec<EventSlice>,
    pub beta: usize,
    pub w0: f64,
    pub w1: f64,
    pub bound: f64,
    /// For consecutive events, the pairs of leaves sharing a base vertex.
    pub gluing: Vec<Vec<(usize, usize)>>,
}

impl ParametricFoliation {
    pub fn width(&self) -> f64 {
        self.events.iter().map(|e| e.width).fold(0.0, f64::max)
    }

    pub fn chain_violations(&self) -> usize {
        self.events.iter().map(|e| e.chain.violations).sum()
    }

    /// At the last event every leaf comes from exactly one point of `Z_1`,
    /// distinct leaves from distinct points, and each base vertex lands on
    /// its `p1` value.
    pub fn endpoint_matches(&self, p1: &Foliation) -> bool {
        let Some(last) = self.events.last() else { return false };
        if last.t != 1.0 {
            return false;
        }
        let mut seen = BTreeSet::new();
        for o in &last.origin {
            if o.z1.len() != 1 || !seen.insert(o.z1[0].key()) {
                return false;
            }
        }
        (0..p1.sigma().n_vertices()).all(|v| {
            let leaf = last.foliation.map.apply(v);
            last.origin[leaf].z1[0] == GraphPoint::vertex(p1.map.apply(v))
        })
    }

    pub fn curve(&self) -> Vec<Vec<f64>> {
        self.events.iter().map(|e| vec![e.t, e.width, self.bound]).collect()
    }

    pub fn to_json(&self) -> ParametricJson {
        ParametricJson {
            beta: self.beta,
            w0: self.w0,
            w1: self.w1,
            bound: self.bound,
            events: self
                .events
                .iter()
                .map(|e| EventJson {
                    t: e.t,
                    width: e.width,
                    leaves: e.foliation.map.target().n_vertices(),
                    edges: e.foliation.map.target().edges().map(|(a, b)| [a, b]).collect(),
                    origin: e.origin.clone(),
                    merges: e.merges.clone(),
                    chain: e.chain.clone(),
                })
                .collect(),
            gluing: self.gluing.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventJson {
    pub t: f64,
    pub width: f64,
    pub leaves: usize,
    pub edges: Vec<[usize; 2]>,
    pub origin: Vec<LeafOrigin>,
    pub merges: Vec<(usize, usize)>,
    pub chain: ChainStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParametricJson {
    pub beta: usize,
    pub w0: f64,
    pub w1: f64,
    pub bound: f64,
    pub events: Vec<EventJson>,
    pub gluing: Vec<Vec<(usize, usize)>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpolateOptions {
    /// Base vertex of the filtration of `Z_1`.
    pub base: usize,
    /// Also evaluate midpoints between consecutive events.
    pub midpoints: bool,
}

impl Default for InterpolateOptions {
    fn default() -> Self {
        Self { base: 0, midpoints: true }
    }
}

pub fn interpolation_bound(beta: usize, w0: f64, w1: f64) -> f64 {
    (beta as f64 + 2.0) * w0 + (beta as f64 + 1.0) * w1
}

pub fn interpolate(p0: &Foliation, p1: &Foliation) -> Result<ParametricFoliation> {
    interpolate_with(p0, p1, InterpolateOptions::default())
}

pub fn interpolate_with(p0: &Foliation, p1: &Foliation, opts: InterpolateOptions) -> Result<ParametricFoliation> {
    if p0.sigma() != p1.sigma() {
        return Err(Error::InvalidParameter("the two foliations live on different complexes".into()));
    }
    let sigma = p0.sigma().clone();
    let n = sigma.n_vertices();
    let input = PairInput {
        beta: h1_rank(&sigma),
        log: Vec::new(),
        labels: vec![0; n],
        n_base: n,
        z0: p0.graph(),
        p0: p0.map.vertex_map().iter().map(|&v| GraphPoint::vertex(v)).collect(),
        w0: p0.width,
        z1: p1.graph(),
        p1: p1.map.vertex_map().iter().map(|&v| GraphPoint::vertex(v)).collect(),
        w1: p1.width,
        base_vertex: opts.base,
        layer: 1,
        sigma,
    };
    run_pair(&input, opts.midpoints)
}

struct Prepared<'a> {
    input: &'a PairInput,
    work: Work,
    z1r: RefinedGraph,
    alpha: Vec<f64>,
}

fn prepare(input: &PairInput) -> Result<Prepared<'_>> {
    let filt = filtration(&input.z1, input.base_vertex)?;
    let mut work = Work::new(input.sigma.clone(), vec![input.p0.clone(), input.p1.clone()]);
    work.labels = input.labels.clone();
    let z1r = work.make_simplicial(1, &input.z1, Region::All, &filt.kink_params());
    let alpha: Vec<f64> = z1r.points.iter().map(|p| filt.alpha(p)).collect();
    for v in 0..work.sigma.n_vertices() {
        let id = z1r.vertex_of(&work.vals[1][v]).expect("vertex of the refined graph");
        work.vals[1][v] = GraphPoint::vertex(id);
        work.level[v] = alpha[id];
    }
    Ok(Prepared { input, work, z1r, alpha })
}

pub(crate) fn run_pair(input: &PairInput, midpoints: bool) -> Result<ParametricFoliation> {
    let prep = prepare(input)?;
    let mut levels: Vec<f64> = prep.alpha.clone();
    levels.push(0.5);
    levels.push(1.0);
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut times = vec![0.0];
    for (i, &t) in levels.iter().enumerate() {
        if midpoints && i > 0 {
            times.push((levels[i - 1] + t) / 2.0);
        }
        times.push(t);
    }
    let events: Vec<EventSlice> = times.par_iter().map(|&t| event(&prep, t)).collect::<Result<_>>()?;
    let gluing = events
        .windows(2)
        .map(|w| {
            let pairs: BTreeSet<(usize, usize)> = (0..input.n_base)
                .map(|v| (w[0].foliation.map.apply(v), w[1].foliation.map.apply(v)))
                .collect();
            pairs.into_iter().collect()
        })
        .collect();
    Ok(ParametricFoliation {
        events,
        beta: input.beta,
        w0: input.w0,
        w1: input.w1,
        bound: interpolation_bound(input.beta, input.w0, input.w1),
        gluing,
    })
}

/// `p_t` for `t < 1/2`: the first foliation itself.
fn initial_slice(input: &PairInput) -> Result<EventSlice> {
    let vmap: Vec<usize> = input
        .p0
        .iter()
        .map(|p| p.as_vertex().ok_or_else(|| Error::InvalidParameter("first foliation must be simplicial".into())))
        .collect::<Result<_>>()?;
    let foliation = Foliation::new(SimplicialMap::new(input.sigma.clone(), input.z0.complex().clone(), vmap)?)?;
    let origin = (0..input.z0.n_vertices()).map(|v| LeafOrigin { z1: vec![], z0: vec![GraphPoint::vertex(v)] }).collect();
    Ok(EventSlice {
        t: 0.0,
        width: foliation.width,
        foliation,
        splits: input.log.clone(),
        labels: input.labels.clone(),
        origin,
        merges: Vec::new(),
        front_points: Vec::new(),
        chain: ChainStats { exhaustive: true, bound: 1 + input.beta, max_z1_in_chain: 0, ..Default::default() },
    })
}

const NONE: usize = usize::MAX;

/// Splits every source edge over leaf edge `(a, b)` at `lambda` from the
/// `a` side; the new vertices form a new leaf node.
fn split_leaf_edge(w: &mut Work, pt0: &mut Vec<usize>, uf: &mut UnionFind, a: usize, b: usize, lambda: f64) -> Result<usize> {
    let m = uf.push();
    let cross: Vec<(usize, usize)> = w
        .sigma
        .edges()
        .filter_map(|(u, v)| match (pt0[u], pt0[v]) {
            (x, y) if x == a && y == b => Some((u, v)),
            (x, y) if x == b && y == a => Some((v, u)),
            _ => None,
        })
        .collect();
    if cross.is_empty() {
        return Err(Error::InvalidComplex(format!("leaf edge ({a},{b}) has no source edges")));
    }
    for (u, v) in cross {
        let x = w.split(u, v, lambda);
        pt0.resize(w.sigma.n_vertices(), NONE);
        pt0[x] = m;
    }
    Ok(m)
}

fn event(prep: &Prepared<'_>, t: f64) -> Result<EventSlice> {
    let input = prep.input;
    if t < 0.5 {
        return initial_slice(input).map_err(|e| e.in_cell("event t = 0"));
    }
    let ctx = |e: Error| e.in_cell(format!("event t = {t}"));
    let alpha = &prep.alpha;
    let mut w = prep.work.clone();

    // cut the source along the level set of α∘p1
    let crossing: Vec<(usize, usize)> = w
        .sigma
        .edges()
        .filter(|&(u, v)| (w.level[u] - t) * (w.level[v] - t) < 0.0)
        .collect();
    for (u, v) in crossing {
        let (gu, gv) = (w.level[u], w.level[v]);
        let x = w.split(u, v, (t - gu) / (gv - gu));
        w.level[x] = t;
        let (a, b) = (w.vals[1][u].as_vertex().unwrap(), w.vals[1][v].as_vertex().unwrap());
        let (lo, hi) = (a.min(b), a.max(b));
        w.vals[1][x] = GraphPoint { a: lo, b: hi, s: (t - alpha[lo]) / (alpha[hi] - alpha[lo]) };
    }

    // connected factorization of p0 on Σ^(t) = {α∘p1 ≥ t}
    let region = Region::AtLeast(t);
    let z0r = w.make_simplicial(0, &input.z0, region, &BTreeMap::new());
    let n = w.sigma.n_vertices();
    let mut gid: Vec<usize> = (0..n).filter(|&v| w.level[v] >= t).collect();
    let mut lid = vec![NONE; n];
    for (i, &g) in gid.iter().enumerate() {
        lid[g] = i;
    }
    let simplices: Vec<Vec<usize>> = w
        .sigma
        .simplices()
        .filter(|s| s.iter().all(|&v| lid[v] != NONE))
        .map(|s| s.iter().map(|&v| lid[v]).collect())
        .collect();
    let coords = gid.iter().map(|&g| w.sigma.coord(g).unwrap().to_vec()).collect();
    let local = SimplicialComplex::new(gid.len(), simplices).and_then(|c| c.with_coords(coords)).map_err(ctx)?;
    let vm: Vec<usize> = gid.iter().map(|&g| z0r.vertex_of(&w.vals[0][g]).expect("refined value")).collect();
    let f0 = SimplicialMap::new(local, z0r.graph.complex().clone(), vm).map_err(ctx)?;
    let fac = factor_to_simple_graph(&f0).map_err(ctx)?;
    for &(u, v, lam) in &fac.splits {
        let x = w.split(gid[u], gid[v], lam);
        gid.push(x);
    }
    let n_leaf = fac.map.target().n_vertices();
    let mut pt0 = vec![NONE; w.sigma.n_vertices()];
    for (l, &g) in gid.iter().enumerate() {
        pt0[g] = fac.map.apply(l);
    }
    let mut node_pos: HashMap<usize, GraphPoint> = HashMap::new();
    for (i, &(a, b, s)) in fac.over.iter().enumerate() {
        node_pos.insert(i, GraphPoint::lerp(&z0r.points[a], &z0r.points[b], s));
    }

    // identify leaves of p̃0 with the p1-leaves they touch on the front
    let mut uf = UnionFind::new(n_leaf);
    let mut front_index: HashMap<(usize, usize, u64), usize> = HashMap::new();
    let mut front_points: Vec<GraphPoint> = Vec::new();
    let mut front_nodes: Vec<usize> = Vec::new();
    let mut fnode = vec![NONE; w.sigma.n_vertices()];
    let mut merges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for v in 0..w.sigma.n_vertices() {
        if w.level[v] != t {
            continue;
        }
        let p = w.vals[1][v];
        let k = *front_index.entry(p.key()).or_insert_with(|| {
            front_points.push(p);
            front_nodes.push(uf.push());
            front_points.len() - 1
        });
        fnode[v] = front_nodes[k];
        uf.union(pt0[v], front_nodes[k]);
        merges.insert((pt0[v], k));
    }
    let mut collapsed = BTreeSet::new();
    for (u, v) in w.sigma.edges() {
        if fnode[u] != NONE && fnode[v] != NONE && pt0[u] != pt0[v] {
            collapsed.insert((pt0[u].min(pt0[v]), pt0[u].max(pt0[v])));
        }
    }

    // keep the leaf graph simple: split leaf edges that became loops or
    // duplicates under the identification
    let leaf_edges: Vec<(usize, usize)> = fac.map.target().edges().collect();
    let mut used = BTreeSet::new();
    for (a, b) in leaf_edges {
        if collapsed.contains(&(a, b)) {
            continue;
        }
        let (ca, cb) = (uf.find(a), uf.find(b));
        if ca == cb {
            let m1 = split_leaf_edge(&mut w, &mut pt0, &mut uf, a, b, 1.0 / 3.0).map_err(ctx)?;
            node_pos.insert(m1, GraphPoint::lerp(&node_pos[&a], &node_pos[&b], 1.0 / 3.0));
            let m2 = split_leaf_edge(&mut w, &mut pt0, &mut uf, m1, b, 0.5).map_err(ctx)?;
            node_pos.insert(m2, GraphPoint::lerp(&node_pos[&m1], &node_pos[&b], 0.5));
        } else if !used.insert((ca.min(cb), ca.max(cb))) {
            let m = split_leaf_edge(&mut w, &mut pt0, &mut uf, a, b, 0.5).map_err(ctx)?;
            node_pos.insert(m, GraphPoint::lerp(&node_pos[&a], &node_pos[&b], 0.5));
        }
    }

    // same on the sublevel side: a vertex of Z_1^(t) may reach one leaf
    // along several edges of Z_1
    let mut pieces: BTreeMap<(usize, usize), BTreeSet<(usize, usize)>> = BTreeMap::new();
    let mut cross: Vec<(usize, usize, usize, usize, (usize, usize))> = Vec::new();
    for (u, v) in w.sigma.edges() {
        let (lo, fr) = match (w.level[u] < t, w.level[v] < t) {
            (true, false) if w.level[v] == t => (u, v),
            (false, true) if w.level[u] == t => (v, u),
            _ => continue,
        };
        let a = w.vals[1][lo].as_vertex().ok_or_else(|| ctx(Error::MissingProvenance))?;
        let f = w.vals[1][fr];
        let e = match f.as_vertex() {
            Some(b) => (a.min(b), a.max(b)),
            None => (f.a, f.b),
        };
        let c = uf.find(pt0[fr]);
        pieces.entry((a, c)).or_default().insert(e);
        cross.push((lo, fr, a, c, e));
    }
    for ((a, c), es) in pieces {
        for e in es.into_iter().skip(1) {
            for &(lo, fr, a2, c2, e2) in &cross {
                if (a2, c2, e2) == (a, c, e) {
                    w.split(lo, fr, 0.5);
                }
            }
        }
    }

    // assemble p_t
    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    enum Key {
        Low((usize, usize, u64)),
        Class(usize),
    }
    let n = w.sigma.n_vertices();
    let mut ids: BTreeMap<Key, usize> = BTreeMap::new();
    let mut keys: Vec<Key> = Vec::new();
    let mut low_point: HashMap<usize, GraphPoint> = HashMap::new();
    let mut vmap = Vec::with_capacity(n);
    for v in 0..n {
        let key = if w.level[v] < t { Key::Low(w.vals[1][v].key()) } else { Key::Class(uf.find(pt0[v])) };
        let id = *ids.entry(key).or_insert_with(|| {
            keys.push(key);
            keys.len() - 1
        });
        if let Key::Low(_) = key {
            low_point.insert(id, w.vals[1][v]);
        }
        vmap.push(id);
    }
    let edges: BTreeSet<(usize, usize)> = w
        .sigma
        .edges()
        .filter(|&(u, v)| vmap[u] != vmap[v])
        .map(|(u, v)| (vmap[u].min(vmap[v]), vmap[u].max(vmap[v])))
        .collect();
    let zt = SimplicialComplex::new(keys.len(), edges.iter().map(|&(a, b)| [a, b])).map_err(ctx)?;
    let map = SimplicialMap::new(w.sigma.clone(), zt, vmap).map_err(ctx)?;
    let foliation = Foliation::new(map).map_err(ctx)?;

    let bound = interpolation_bound(input.beta, input.w0, input.w1);
    if foliation.width > bound + 1e-9 * bound.max(1.0) {
        return Err(ctx(Error::WidthBound {
            context: "interpolation".into(),
            measured: foliation.width,
            bound,
        }));
    }

    // provenance
    let to_z1 = |p: &GraphPoint| -> GraphPoint {
        match p.as_vertex() {
            Some(v) => prep.z1r.points[v],
            None => GraphPoint::lerp(&prep.z1r.points[p.a], &prep.z1r.points[p.b], p.s),
        }
    };
    let mut members: HashMap<usize, (Vec<GraphPoint>, Vec<GraphPoint>)> = HashMap::new();
    for node in 0..uf.len() {
        let root = uf.find(node);
        let entry = members.entry(root).or_default();
        if let Some(k) = front_nodes.iter().position(|&f| f == node) {
            entry.0.push(to_z1(&front_points[k]));
        } else if let Some(p) = node_pos.get(&node) {
            entry.1.push(*p);
        }
    }
    let origin = keys
        .iter()
        .enumerate()
        .map(|(id, k)| match *k {
            Key::Low(_) => LeafOrigin { z1: vec![to_z1(&low_point[&id])], z0: vec![] },
            Key::Class(c) => {
                let (z1, z0) = members.get(&c).cloned().unwrap_or_default();
                LeafOrigin { z1, z0 }
            }
        })
        .collect();
    let labels = (0..n).map(|v| if w.level[v] <= t { input.layer } else { w.labels[v] }).collect();
    let merges: Vec<(usize, usize)> = merges.into_iter().collect();
    let chain = chain_audit_merges(&merges, front_points.len(), input.beta);
    let mut splits = input.log.clone();
    splits.extend(w.log.iter().copied());
    Ok(EventSlice {
        t,
        width: foliation.width,
        foliation,
        splits,
        labels,
        origin,
        merges,
        front_points: front_points.iter().map(to_z1).collect(),
        chain,
    })
}

/// Longest chains `z'_1 ≈ z_1 ≈ z'_2 ≈ …` with distinct front points, from
/// the merge pairs `(leaf, front point)`: longest simple paths in the graph
/// on front points joined when they touch a common leaf.
pub fn chain_audit_merges(merges: &[(usize, usize)], n_front: usize, beta: usize) -> ChainStats {
    let mut by_leaf: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(leaf, f) in merges {
        by_leaf.entry(leaf).or_default().push(f);
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n_front];
    for fs in by_leaf.values() {
        for &a in fs {
            for &b in fs {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    let mut uf = UnionFind::new(n_front);
    for (a, nb) in adj.iter().enumerate() {
        for &b in nb {
            uf.union(a, b);
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for f in 0..n_front {
        classes.entry(uf.find(f)).or_default().push(f);
    }
    let bound = 1 + beta;
    let mut stats = ChainStats { bound, exhaustive: true, merges: merges.len(), ..Default::default() };
    for class in classes.values() {
        stats.max_z1_in_class = stats.max_z1_in_class.max(class.len());
        let (len, complete) = longest_path(&adj, class, 1 << 20);
        stats.exhaustive &= complete;
        stats.max_z1_in_chain = stats.max_z1_in_chain.max(len);
        if len > bound {
            stats.violations += 1;
        }
    }
    stats
}

fn longest_path(adj: &[BTreeSet<usize>], class: &[usize], budget: usize) -> (usize, bool) {
    if class.len() <= 2 {
        return (class.len(), true);
    }
    fn dfs(adj: &[BTreeSet<usize>], v: usize, seen: &mut BTreeSet<usize>, steps: &mut usize) -> usize {
        if *steps == 0 {
            return seen.len();
        }
        *steps -= 1;
        let mut best = seen.len();
        for &w in &adj[v] {
            if seen.insert(w) {
                best = best.max(dfs(adj, w, seen, steps));
                seen.remove(&w);
            }
        }
        best
    }
    let mut steps = budget;
    let mut best = 1;
    for &s in class {
        let mut seen = BTreeSet::from([s]);
        best = best.max(dfs(adj, s, &mut seen, &mut steps));
        if best == class.len() {
            return (best, true);
        }
    }
    if steps == 0 {
        (class.len(), false)
    } else {
        (best, true)
    }
}

#[cfg(test)]
mod tests {
    use super::super::demo;
    use super::*;

    fn check(d: &demo::Demo) -> ParametricFoliation {
        let pf = interpolate(&d.p0, &d.p1).unwrap();
        assert_eq!(pf.beta, d.beta);
        assert!(pf.width() <= pf.bound + 1e-9, "{}: {} > {}", d.name, pf.width(), pf.bound);
        assert!(pf.endpoint_matches(&d.p1), "{}", d.name);
        assert_eq!(pf.events[0].foliation.map, d.p0.map);
        assert_eq!(pf.gluing.len(), pf.events.len() - 1);
        for e in &pf.events {
            assert!(e.chain.max_z1_in_chain <= 1 + d.beta, "{} t={}: {:?}", d.name, e.t, e.chain);
        }
        pf
    }

    #[test]
    fn disk_rows_to_columns() {
        let pf = check(&demo::disk(4).unwrap());
        assert!(pf.events.len() > 5);
    }

    #[test]
    fn annulus_circles_to_rays() {
        check(&demo::annulus(2, 8).unwrap());
    }

    #[test]
    fn two_holes_columns_to_rows() {
        check(&demo::two_holes(7).unwrap());
    }

    #[test]
    fn swapped_order() {
        let d = demo::disk(3).unwrap();
        let pf = interpolate(&d.p1, &d.p0).unwrap();
        assert!(pf.endpoint_matches(&d.p0));
    }

    #[test]
    fn mismatched_complexes_rejected() {
        let a = demo::disk(3).unwrap();
        let b = demo::disk(4).unwrap();
        assert!(interpolate(&a.p0, &b.p1).is_err());
    }

    #[test]
    fn chain_audit_counts_distinct_front_points() {
        // leaf 0 touches fronts 0,1; leaf 1 touches 1,2: chain of three
        let s = chain_audit_merges(&[(0, 0), (0, 1), (1, 1), (1, 2)], 3, 1);
        assert_eq!(s.max_z1_in_chain, 3);
        assert_eq!(s.violations, 1);
        let s = chain_audit_merges(&[(0, 0), (1, 1)], 2, 0);
        assert_eq!((s.max_z1_in_chain, s.violations), (1, 0));
    }

    #[test]
    fn random_linear_pairs() {
        let shapes = [
            crate::complex::shapes::square_grid(4),
            demo::annulus_complex(2, 8),
            demo::holed_grid(7, &[(1, 1), (4, 4)]).0,
        ];
        let mut ran = 0;
        for (i, sigma) in shapes.iter().enumerate() {
            for seed in 0..6u64 {
                let a = demo::random_linear_foliation(sigma, 2 * seed).unwrap();
                let b = demo::random_linear_foliation(sigma, 2 * seed + 1).unwrap();
                let Ok((p0, p1)) = demo::pair(&a.map, &b.map) else { continue };
                let pf = interpolate(&p0, &p1).unwrap_or_else(|e| panic!("shape {i} seed {seed}: {e}"));
                assert!(pf.width() <= pf.bound + 1e-9);
                assert!(pf.endpoint_matches(&p1), "shape {i} seed {seed}");
                ran += 1;
            }
        }
        assert!(ran >= 12, "only {ran} pairs refined");
    }
}

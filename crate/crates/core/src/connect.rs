//! Short ℓ-paths joining prescribed end-sets through a reservoir, and
//! reservoir selection with explicit verification of the link condition.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_loose, Error, Result};
use crate::hgraph::{UniformHypergraph, Vertex, VertexSet};
use crate::scalar::binomial;
use crate::walks::{validate_path, EllWalk};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConnectStage {
    /// No extendable triple exists.
    Observation,
    /// Triples exist but no `M'` closes two disjoint triples into edges.
    MSelection,
    /// The end edges could not be completed.
    FinalEdge,
}

impl fmt::Display for ConnectStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConnectStage::Observation => "observation stage",
            ConnectStage::MSelection => "M-selection stage",
            ConnectStage::FinalEdge => "final-edge stage",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConnectRequest {
    pub pairs: Vec<(VertexSet, VertexSet)>,
    pub reservoir: VertexSet,
    pub eta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConnectOptions {
    /// Cap on gadget candidates examined per pair.
    pub node_budget: Option<u64>,
}

impl Default for ConnectOptions {
    fn default() -> Self {
        ConnectOptions { node_budget: Some(5_000_000) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendableTriple {
    pub x: Vertex,
    pub l: VertexSet,
    pub y: Vertex,
    pub side_x: usize,
    pub side_y: usize,
}

/// `32 k m / η³`, the reservoir size under which connections are guaranteed.
pub fn reservoir_size_bound(k: usize, m: usize, eta: f64) -> f64 {
    32.0 * k as f64 * m as f64 / eta.powi(3)
}

fn is_edge<H: UniformHypergraph + ?Sized>(h: &H, parts: &[&[Vertex]]) -> bool {
    let mut e: Vec<Vertex> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    e.sort_unstable();
    e.windows(2).all(|w| w[0] < w[1]) && h.contains_sorted(&e)
}

/// Vertices `w` of `pool` with `base ∪ {w}` an edge.
fn neighbours<H: UniformHypergraph + ?Sized>(h: &H, base: &[Vertex], pool: &[Vertex]) -> usize {
    pool.iter().filter(|&&w| !base.contains(&w) && is_edge(h, &[base, &[w]])).count()
}

/// For fixed `L`, the side counts `|N_A(Z ∪ L ∪ {z})|` for every `z ∈ A \ L`.
fn side_counts<H: UniformHypergraph + ?Sized>(h: &H, z: &[Vertex], l: &[Vertex], pool: &[Vertex]) -> Vec<(Vertex, usize)> {
    pool.iter()
        .filter(|v| !l.contains(v))
        .map(|&v| {
            let base: Vec<Vertex> = [z, l, &[v]].concat();
            (v, neighbours(h, &base, pool))
        })
        .collect()
}

fn check_request<H: UniformHypergraph + ?Sized>(h: &H, ell: usize, req: &ConnectRequest) -> Result<()> {
    let k = h.uniformity();
    check_loose(k, ell)?;
    if k < 4 {
        return Err(Error::InvalidParameters("connections need k >= 4".into()));
    }
    if !(req.eta > 0.0 && req.eta <= 1.0) {
        return Err(Error::InvalidParameters(format!("eta = {} must lie in (0, 1]", req.eta)));
    }
    req.reservoir.check_range(h.order())?;
    let mut seen = VertexSet::empty();
    for (i, (x, y)) in req.pairs.iter().enumerate() {
        for set in [x, y] {
            set.check_range(h.order())?;
            if set.len() != ell {
                return Err(Error::InvalidQuery(format!("pair {i}: end-set {set} does not have {ell} vertices")));
            }
            if !set.is_disjoint(&seen) {
                return Err(Error::InvalidQuery(format!("pair {i}: end-set {set} meets another end-set")));
            }
            seen = seen.union(set);
        }
    }
    Ok(())
}

/// Extendable triples `(x, L, y)` in `R \ F` for the end-sets `x_end`, `y_end`,
/// streamed in lexicographic order of `(L, x, y)`. Requires `2ℓ = k - 1`.
pub fn find_extendable_triples<'a, H: UniformHypergraph + ?Sized>(
    h: &'a H,
    x_end: &'a VertexSet,
    y_end: &'a VertexSet,
    reservoir: &VertexSet,
    forbidden: &VertexSet,
    eta: f64,
) -> Result<impl Iterator<Item = ExtendableTriple> + 'a> {
    let k = h.uniformity();
    let ell = x_end.len();
    if 2 * ell + 1 != k || ell < 1 || y_end.len() != ell {
        return Err(Error::InvalidParameters(format!("extendable triples need 2 ell = k - 1 (k = {k}, ell = {ell})")));
    }
    let pool: Vec<Vertex> = reservoir
        .iter()
        .copied()
        .filter(|&v| !forbidden.contains(v) && !x_end.contains(v) && !y_end.contains(v))
        .collect();
    let threshold = eta * reservoir.len() as f64 / 4.0;
    let ls: Vec<Vec<Vertex>> = pool.iter().copied().combinations(ell - 1).collect();
    Ok(ls.into_iter().flat_map(move |l| triples_for(h, x_end, y_end, &l, &pool, threshold)))
}

fn triples_for<H: UniformHypergraph + ?Sized>(
    h: &H,
    x_end: &[Vertex],
    y_end: &[Vertex],
    l: &[Vertex],
    pool: &[Vertex],
    threshold: f64,
) -> Vec<ExtendableTriple> {
    let good = |end: &[Vertex]| -> Vec<(Vertex, usize)> {
        side_counts(h, end, l, pool).into_iter().filter(|&(_, c)| c as f64 >= threshold).collect()
    };
    let xs = good(x_end);
    let ys = good(y_end);
    let lset = VertexSet::new(l.iter().copied());
    let mut out = Vec::new();
    for &(x, side_x) in &xs {
        for &(y, side_y) in &ys {
            if x != y {
                out.push(ExtendableTriple { x, l: lset.clone(), y, side_x, side_y });
            }
        }
    }
    out
}

struct Gadget<'a, H: ?Sized> {
    h: &'a H,
    ell: usize,
    threshold: f64,
    pool: Vec<Vertex>,
    cache: HashMap<Vec<Vertex>, (Vec<Vertex>, Vec<Vertex>)>,
    nodes: u64,
    budget: Option<u64>,
}

impl<H: UniformHypergraph + ?Sized> Gadget<'_, H> {
    /// Good `x` and good `y` vertices for a given `L`, cached.
    fn good(&mut self, x_end: &[Vertex], y_end: &[Vertex], l: &[Vertex]) -> (Vec<Vertex>, Vec<Vertex>) {
        if let Some(v) = self.cache.get(l) {
            return v.clone();
        }
        let pick = |end: &[Vertex]| -> Vec<Vertex> {
            side_counts(self.h, end, l, &self.pool)
                .into_iter()
                .filter(|&(_, c)| c as f64 >= self.threshold)
                .map(|(v, _)| v)
                .collect()
        };
        let v = (pick(x_end), pick(y_end));
        self.cache.insert(l.to_vec(), v.clone());
        v
    }

    fn spend(&mut self) -> bool {
        self.nodes += 1;
        self.budget.is_some_and(|b| self.nodes > b)
    }

    /// Triples `(x, L, y)` in `free` closing an edge with `m`, in
    /// lexicographic order of `(L, x, y)`; `visit` returns `true` to stop.
    fn closing(
        &mut self,
        x_end: &[Vertex],
        y_end: &[Vertex],
        m: &[Vertex],
        free: &[Vertex],
        seen: &mut bool,
        visit: &mut dyn FnMut(&mut Self, Vec<Vertex>, Vertex, Vertex) -> bool,
    ) -> bool {
        for l in free.iter().copied().combinations(self.ell - 1) {
            let (xs, ys) = self.good(x_end, y_end, &l);
            for &x in &xs {
                if !free.contains(&x) || l.contains(&x) {
                    continue;
                }
                for &y in &ys {
                    if y == x || !free.contains(&y) || l.contains(&y) {
                        continue;
                    }
                    *seen = true;
                    if is_edge(self.h, &[m, &l, &[x, y]]) && visit(self, l.clone(), x, y) {
                        return true;
                    }
                }
            }
            if self.spend() {
                return true;
            }
        }
        false
    }

    fn connect(&mut self, x_end: &[Vertex], y_end: &[Vertex]) -> std::result::Result<Vec<Vertex>, ConnectStage> {
        let ell = self.ell;
        let mut stage = ConnectStage::Observation;
        let pool = self.pool.clone();
        for s in pool.iter().copied().combinations(ell - 2) {
            let rest: Vec<Vertex> = pool.iter().copied().filter(|v| !s.contains(v)).collect();
            for mpair in rest.iter().copied().combinations(2) {
                let mut m: Vec<Vertex> = [&s[..], &mpair].concat();
                m.sort_unstable();
                let free: Vec<Vertex> = pool.iter().copied().filter(|v| !m.contains(v)).collect();
                let mut seen = false;
                let mut found = None;
                let mut final_stage = false;
                let stopped = self.closing(x_end, y_end, &m, &free, &mut seen, &mut |g, l, x, y| {
                    let used: Vec<Vertex> = [&l[..], &[x, y]].concat();
                    let free2: Vec<Vertex> = free.iter().copied().filter(|v| !used.contains(v)).collect();
                    let mut inner_seen = false;
                    g.closing(x_end, y_end, &m, &free2, &mut inner_seen, &mut |g, l2, x2, y2| {
                        final_stage = true;
                        if g.spend() {
                            return true;
                        }
                        let taken: Vec<Vertex> = [&m[..], &l, &l2, &[x, y, x2, y2]].concat();
                        let v = pool.iter().copied().find(|w| !taken.contains(w) && is_edge(g.h, &[x_end, &l, &[x, *w]]));
                        let Some(v) = v else { return false };
                        let v2 = pool
                            .iter()
                            .copied()
                            .find(|w| !taken.contains(w) && *w != v && is_edge(g.h, &[y_end, &l2, &[y2, *w]]));
                        let Some(v2) = v2 else { return false };
                        let mut lx: Vec<Vertex> = [&l[..], &[x]].concat();
                        lx.sort_unstable();
                        let mut ly: Vec<Vertex> = [&l2[..], &[y2]].concat();
                        ly.sort_unstable();
                        found = Some([x_end, &[v], &lx, &[y], &m, &[x2], &ly, &[v2], y_end].concat());
                        true
                    })
                });
                if seen && stage == ConnectStage::Observation {
                    stage = ConnectStage::MSelection;
                }
                if final_stage {
                    stage = ConnectStage::FinalEdge;
                }
                if let Some(seq) = found {
                    return Ok(seq);
                }
                if stopped {
                    return Err(stage);
                }
            }
        }
        Err(stage)
    }
}

/// Connects every pair `(X_i, Y_i)` by a vertex-disjoint ℓ-path of size at most
/// four whose interior lies in the reservoir, processing pairs in order.
pub fn connect_all<H: UniformHypergraph + ?Sized>(
    h: &H,
    ell: usize,
    req: &ConnectRequest,
    opts: &ConnectOptions,
) -> Result<Vec<EllWalk>> {
    check_request(h, ell, req)?;
    let k = h.uniformity();
    let mut forbidden: VertexSet = req.pairs.iter().flat_map(|(x, y)| x.iter().chain(y.iter()).copied()).collect();
    let mut out = Vec::with_capacity(req.pairs.len());
    for (i, (x, y)) in req.pairs.iter().enumerate() {
        let pool: Vec<Vertex> = req.reservoir.iter().copied().filter(|&v| !forbidden.contains(v)).collect();
        let seq = if k - 2 >= 2 * ell {
            single_edge(h, x, y, &pool, k - 2 - 2 * ell, opts.node_budget)
                .ok_or(Error::ConnectFailed { pair: i, stage: ConnectStage::FinalEdge })?
        } else {
            let mut g = Gadget {
                h,
                ell,
                threshold: req.eta * req.reservoir.len() as f64 / 4.0,
                pool,
                cache: HashMap::new(),
                nodes: 0,
                budget: opts.node_budget,
            };
            g.connect(x, y).map_err(|stage| Error::ConnectFailed { pair: i, stage })?
        };
        let walk = validate_path(h, &seq, ell).expect("connection is a valid path by construction");
        forbidden = forbidden.union(&walk.vertex_set());
        out.push(walk);
    }
    Ok(out)
}

/// Case `k - 2 >= 2ℓ`: a single edge `X ∪ Y ∪ Z ∪ Z'` with `Z` and the pair `Z'` from the pool.
fn single_edge<H: UniformHypergraph + ?Sized>(
    h: &H,
    x: &[Vertex],
    y: &[Vertex],
    pool: &[Vertex],
    z_size: usize,
    budget: Option<u64>,
) -> Option<Vec<Vertex>> {
    let mut nodes = 0u64;
    for z in pool.iter().copied().combinations(z_size) {
        let rest: Vec<Vertex> = pool.iter().copied().filter(|v| !z.contains(v)).collect();
        for pair in rest.iter().copied().combinations(2) {
            nodes += 1;
            if budget.is_some_and(|b| nodes > b) {
                return None;
            }
            if is_edge(h, &[x, y, &z, &pair]) {
                let mut middle: Vec<Vertex> = [&z[..], &pair].concat();
                middle.sort_unstable();
                return Some([x, &middle, y].concat());
            }
        }
    }
    None
}

/// First `(k-2)`-set `K ⊆ candidates` with fewer than `threshold` link pairs inside `r \ K`.
pub fn link_condition_violation<H: UniformHypergraph + ?Sized>(
    h: &H,
    candidates: &[Vertex],
    r: &VertexSet,
    threshold: f64,
) -> Option<VertexSet> {
    let k = h.uniformity();
    candidates.iter().copied().combinations(k - 2).find_map(|kset| {
        let rest: Vec<Vertex> = r.iter().copied().filter(|v| !kset.contains(v)).collect();
        let mut count = 0usize;
        for pair in rest.iter().copied().combinations(2) {
            if is_edge(h, &[&kset, &pair]) {
                count += 1;
                if count as f64 >= threshold {
                    return None;
                }
            }
        }
        (!(count as f64 >= threshold)).then(|| VertexSet::new(kset))
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReservoirChoice {
    pub set: VertexSet,
    pub attempts: usize,
    /// `32 k m / η³`.
    pub size_bound: f64,
    pub meets_size_bound: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReservoirParams {
    pub epsilon: f64,
    pub eta: f64,
    pub m: usize,
    pub seed: u64,
    pub retry_cap: usize,
}

impl ReservoirParams {
    pub fn new(epsilon: f64, eta: f64, m: usize, seed: u64) -> Self {
        ReservoirParams { epsilon, eta, m, seed, retry_cap: 100 }
    }
}

/// Samples `⌊εn⌋` vertices uniformly until every `(k-2)`-set `K` has at least
/// `(η/2) C(|R|, 2)` link pairs inside `R`.
pub fn reservoir_select<H: UniformHypergraph + ?Sized>(h: &H, p: &ReservoirParams) -> Result<ReservoirChoice> {
    let (n, k) = (h.order(), h.uniformity());
    if !(p.epsilon > 0.0 && p.epsilon <= 1.0) || !(p.eta > 0.0 && p.eta <= 1.0) {
        return Err(Error::InvalidParameters("epsilon and eta must lie in (0, 1]".into()));
    }
    if k < 2 {
        return Err(Error::InvalidParameters("k must be at least 2".into()));
    }
    let size = (p.epsilon * n as f64 + 1e-9).floor() as usize;
    let size_bound = reservoir_size_bound(k, p.m, p.eta);
    if size < 2 {
        return Err(Error::RetryCapExceeded(0));
    }
    let threshold = p.eta / 2.0 * binomial(size, 2) as f64;
    let all: Vec<Vertex> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    for attempt in 1..=p.retry_cap {
        let set = VertexSet::new(sample(&mut rng, n, size).into_iter());
        if link_condition_violation(h, &all, &set, threshold).is_none() {
            return Ok(ReservoirChoice {
                set,
                attempts: attempt,
                size_bound,
                meets_size_bound: size as f64 >= size_bound,
            });
        }
    }
    Err(Error::RetryCapExceeded(p.retry_cap))
}

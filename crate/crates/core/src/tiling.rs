//! Fractional cherry tilings: weighted homomorphic copies of the cherry
//! `C_ℓ` (two k-edges sharing 2ℓ vertices) with per-vertex load at most 1.
//!
//! A [`CherryHom`] lists the images of the cherry's `2k-2ℓ` vertices; the
//! first edge is `phi[..k]`, the second `phi[k-2ℓ..]`.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bits::{self, Mask};
use crate::error::{check_loose, invalid, Error, Result};
use crate::hgraph::{Hypergraph, UniformHypergraph, Vertex};
use crate::lp::PackingLp;
use crate::scalar::{binomial_as, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CherryHom {
    pub phi: Vec<Vertex>,
    /// Both edge windows consist of `k` distinct vertices. Constant padding
    /// maps have this unset.
    pub injective_on_edges: bool,
}

impl CherryHom {
    pub fn new(phi: Vec<Vertex>, k: usize, ell: usize) -> Self {
        let distinct = |w: &[Vertex]| w.iter().all_unique();
        let v = 2 * k - 2 * ell;
        let injective_on_edges = phi.len() == v && distinct(&phi[..k]) && distinct(&phi[k - 2 * ell..]);
        CherryHom { phi, injective_on_edges }
    }

    /// The constant map onto `v`.
    pub fn constant(v: Vertex, k: usize, ell: usize) -> Self {
        CherryHom { phi: vec![v; 2 * k - 2 * ell], injective_on_edges: false }
    }

    pub fn is_constant(&self) -> bool {
        self.phi.windows(2).all(|w| w[0] == w[1])
    }

    pub fn first_edge(&self, k: usize) -> &[Vertex] {
        &self.phi[..k]
    }

    pub fn second_edge(&self, k: usize, ell: usize) -> &[Vertex] {
        &self.phi[k - 2 * ell..]
    }

    /// `(vertex, number of cherry vertices mapped onto it)`, sorted by vertex.
    pub fn loads(&self) -> Vec<(Vertex, usize)> {
        let mut out: Vec<(Vertex, usize)> = Vec::new();
        for v in self.phi.iter().copied().sorted() {
            match out.last_mut() {
                Some((u, c)) if *u == v => *c += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomTiling<T> {
    pub k: usize,
    pub ell: usize,
    pub beta: T,
    pub entries: Vec<(CherryHom, T)>,
}

impl<T: Scalar> HomTiling<T> {
    pub fn new(k: usize, ell: usize, beta: T) -> Self {
        HomTiling { k, ell, beta, entries: Vec::new() }
    }

    pub fn cherry_order(&self) -> usize {
        2 * self.k - 2 * self.ell
    }

    /// Adds weight to `hom`, merging with an existing equal entry.
    pub fn push(&mut self, hom: CherryHom, w: T) {
        match self.entries.iter_mut().find(|(h, _)| *h == hom) {
            Some((_, x)) => *x = x.clone() + w,
            None => self.entries.push((hom, w)),
        }
    }

    pub fn absorb(&mut self, other: HomTiling<T>) {
        for (h, w) in other.entries {
            self.push(h, w);
        }
    }

    /// `w(h) = Σ_φ h(φ)·(2k-2ℓ)`.
    pub fn weight(&self) -> T {
        let v = T::from_count(self.cherry_order());
        self.entries.iter().fold(T::zero(), |acc, (_, w)| acc + w.clone() * v.clone())
    }

    /// `w_h(v)` for `v < t`; out-of-range images are ignored.
    pub fn vertex_weights(&self, t: usize) -> Vec<T> {
        let mut out = vec![T::zero(); t];
        for (h, w) in &self.entries {
            for (v, c) in h.loads() {
                if v < t {
                    out[v] = out[v].clone() + w.clone() * T::from_count(c);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "k": self.k,
            "ell": self.ell,
            "beta": self.beta.to_string(),
            "weight": self.weight().to_string(),
            "entries": self.entries.iter().map(|(h, w)| serde_json::json!({
                "weight": w.to_string(),
                "phi": h.phi,
            })).collect::<Vec<_>>(),
        })
        .to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TilingViolation {
    #[error("beta must be positive")]
    BadBeta,
    #[error("entry {entry}: image has {got} vertices, expected {expected}")]
    BadLength { entry: usize, got: usize, expected: usize },
    #[error("entry {entry}: vertex {vertex} out of range")]
    OutOfRange { entry: usize, vertex: Vertex },
    #[error("entry {entry}: weight {weight} is not a positive multiple of beta")]
    BadWeight { entry: usize, weight: String },
    #[error("entry {entry}: window {window:?} is not an edge")]
    NotAnEdge { entry: usize, window: Vec<Vertex> },
    #[error("entry {entry}: map is neither edge preserving nor constant")]
    NotAHom { entry: usize },
    #[error("vertex {vertex} carries weight {weight} > 1")]
    Overloaded { vertex: Vertex, weight: String },
}

/// Checks every entry and every vertex load; returns `w(h)`.
pub fn tiling_validate<H, T>(r: &H, h: &HomTiling<T>) -> std::result::Result<T, TilingViolation>
where
    H: UniformHypergraph + ?Sized,
    T: Scalar,
{
    if !h.beta.is_positive() {
        return Err(TilingViolation::BadBeta);
    }
    let (k, ell, t) = (h.k, h.ell, r.order());
    let expected = h.cherry_order();
    for (i, (hom, w)) in h.entries.iter().enumerate() {
        if hom.phi.len() != expected {
            return Err(TilingViolation::BadLength { entry: i, got: hom.phi.len(), expected });
        }
        if let Some(&v) = hom.phi.iter().find(|&&v| v >= t) {
            return Err(TilingViolation::OutOfRange { entry: i, vertex: v });
        }
        let units = w.clone() / h.beta.clone();
        if !w.is_positive() || !units.is_integral() || units < T::one() - T::tolerance() {
            return Err(TilingViolation::BadWeight { entry: i, weight: w.to_string() });
        }
        if hom.is_constant() {
            continue;
        }
        if !hom.injective_on_edges {
            return Err(TilingViolation::NotAHom { entry: i });
        }
        for window in [hom.first_edge(k), hom.second_edge(k, ell)] {
            if !r.contains(window) {
                return Err(TilingViolation::NotAnEdge { entry: i, window: window.to_vec() });
            }
        }
    }
    for (v, w) in h.vertex_weights(t).into_iter().enumerate() {
        if !w.approx_le(&T::one()) {
            return Err(TilingViolation::Overloaded { vertex: v, weight: w.to_string() });
        }
    }
    Ok(h.weight())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockVariant {
    /// Weight `q` on `v_1..v_{k-2}` and `q(k-2)/(2(k-ℓ-1))` on `v_{k-1}, v_k`.
    Skewed,
    /// Weight `q` on every vertex.
    Even,
}

impl BlockVariant {
    /// Granularity of the block built with weight `q`.
    pub fn beta<T: Scalar>(&self, k: usize, ell: usize, q: &T) -> T {
        let d = match self {
            BlockVariant::Skewed => 2 * (k - ell - 1),
            BlockVariant::Even => 2 * (k - ell),
        };
        q.clone() / T::from_count(d)
    }
}

/// Tiling supported on the single edge `e = (v_1, ..., v_k)`, built from
/// cyclic shifts of the map sending both cherry edges onto `e`.
///
/// Skewed: the shared part is a cyclic window of `2ℓ-2` vertices among
/// `v_1..v_{k-2}` plus `v_{k-1}, v_k`, shifted `k-2` times. Even: the shared
/// part is a cyclic window of `2ℓ` vertices, shifted `k` times.
pub fn building_block<H, T>(r: &H, e: &[Vertex], ell: usize, q: &T, variant: BlockVariant) -> Result<HomTiling<T>>
where
    H: UniformHypergraph + ?Sized,
    T: Scalar,
{
    let k = e.len();
    check_loose(k, ell)?;
    if k != r.uniformity() || !r.contains(e) {
        return Err(Error::InvalidQuery(format!("{e:?} is not an edge")));
    }
    if !q.is_positive() || *q > T::one() {
        return invalid(format!("block weight {q} must lie in (0, 1]"));
    }
    let beta = variant.beta(k, ell, q);
    let mut h = HomTiling::new(k, ell, beta.clone());
    let (cycle, window, shifts): (&[Vertex], usize, usize) = match variant {
        BlockVariant::Skewed => (&e[..k - 2], 2 * ell - 2, k - 2),
        BlockVariant::Even => (e, 2 * ell, k),
    };
    let len = cycle.len();
    for s in 0..shifts {
        let mut shared: Vec<Vertex> = (0..window).map(|i| cycle[(s + i) % len]).collect();
        if variant == BlockVariant::Skewed {
            shared.extend_from_slice(&e[k - 2..]);
        }
        let rest: Vec<Vertex> = (window..len).map(|i| cycle[(s + i) % len]).collect();
        let phi = rest.iter().chain(&shared).chain(&rest).copied().collect();
        h.push(CherryHom::new(phi, k, ell), beta.clone());
    }
    Ok(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LpTilingOptions {
    pub cap: usize,
    /// Admit constant maps as columns.
    pub include_constant: bool,
}

impl Default for LpTilingOptions {
    fn default() -> Self {
        LpTilingOptions { cap: 16, include_constant: false }
    }
}

#[derive(Clone, Debug)]
pub struct LpTiling<T> {
    pub tiling: HomTiling<T>,
    pub fractional: T,
    pub rounded: T,
    /// Distinct load vectors offered to the LP.
    pub columns: usize,
    pub pivots: usize,
}

/// Cherry homomorphisms into `r`, one per distinct load vector.
///
/// A hom is fixed by the shared image `I` (a 2ℓ-set) and the two private
/// parts `P1, P2` with `I ∪ P1, I ∪ P2 ∈ E`; swapping `P1` and `P2` gives the
/// same loads, so only `P1 <= P2` is listed.
pub fn cherry_homs(r: &Hypergraph, ell: usize) -> Vec<CherryHom> {
    let k = r.k();
    let mut by_shared: BTreeMap<Vec<Vertex>, Vec<Vec<Vertex>>> = BTreeMap::new();
    for e in r.edges() {
        for shared in e.iter().copied().combinations(2 * ell) {
            let rest = e.iter().copied().filter(|v| !shared.contains(v)).collect();
            by_shared.entry(shared).or_default().push(rest);
        }
    }
    let groups: Vec<(Vec<Vertex>, Vec<Vec<Vertex>>)> = by_shared.into_iter().collect();
    let found: Vec<Vec<(Vec<(Vertex, usize)>, CherryHom)>> = groups
        .par_iter()
        .map(|(shared, privs)| {
            let mut out = Vec::new();
            for (i, p1) in privs.iter().enumerate() {
                for p2 in &privs[i..] {
                    let phi: Vec<Vertex> = p1.iter().chain(shared).chain(p2).copied().collect();
                    let hom = CherryHom::new(phi, k, ell);
                    out.push((hom.loads(), hom));
                }
            }
            out
        })
        .collect();
    let mut seen: BTreeMap<Vec<(Vertex, usize)>, CherryHom> = BTreeMap::new();
    for (loads, hom) in found.into_iter().flatten() {
        seen.entry(loads).or_insert(hom);
    }
    seen.into_values().collect()
}

/// Maximum-weight tiling via the LP `max Σ x_φ (2k-2ℓ)` subject to
/// `w_x(v) <= 1`, followed by rounding each `x_φ` down to a multiple of `β`
/// and a greedy pass that tops columns up while loads permit.
pub fn max_tiling_lp<T: Scalar>(r: &Hypergraph, ell: usize, beta: &T, opts: &LpTilingOptions) -> Result<LpTiling<T>> {
    let (t, k) = (r.n(), r.k());
    check_loose(k, ell)?;
    if t > opts.cap {
        return Err(Error::CapExceeded { what: "t", got: t, cap: opts.cap });
    }
    if !beta.is_positive() || *beta > T::one() {
        return invalid(format!("beta = {beta} must lie in (0, 1]"));
    }
    let mut homs = cherry_homs(r, ell);
    if opts.include_constant {
        homs.extend((0..t).map(|v| CherryHom::constant(v, k, ell)));
    }
    let order = T::from_count(2 * k - 2 * ell);
    let mut lp = PackingLp::new(vec![T::one(); t]);
    let loads: Vec<Vec<(Vertex, usize)>> = homs.iter().map(CherryHom::loads).collect();
    for l in &loads {
        lp.push_column(l.iter().map(|&(v, c)| (v, T::from_count(c))).collect(), order.clone());
    }
    let sol = lp.solve()?;

    let mut x: Vec<T> = sol.x.iter().map(|xi| xi.floor_to_multiple(beta)).collect();
    let mut used = vec![T::zero(); t];
    for (xi, l) in x.iter().zip(&loads) {
        for &(v, c) in l {
            used[v] = used[v].clone() + xi.clone() * T::from_count(c);
        }
    }
    // top up, largest fractional values first
    let mut order_idx: Vec<usize> = (0..homs.len()).collect();
    order_idx.sort_by(|&a, &b| sol.x[b].partial_cmp(&sol.x[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    for j in order_idx {
        let mut room: Option<T> = None;
        for &(v, c) in &loads[j] {
            let slack = (T::one() - used[v].clone()) / T::from_count(c);
            let fit = slack.floor_to_multiple(beta);
            room = Some(match room {
                Some(r) => T::min_of(r, fit),
                None => fit,
            });
        }
        let Some(add) = room.filter(|a| a.is_positive() && a.definitely_gt(&T::zero())) else {
            continue;
        };
        for &(v, c) in &loads[j] {
            used[v] = used[v].clone() + add.clone() * T::from_count(c);
        }
        x[j] = x[j].clone() + add;
    }

    let mut tiling = HomTiling::new(k, ell, beta.clone());
    for (hom, xi) in homs.into_iter().zip(x) {
        if xi.definitely_gt(&T::zero()) {
            tiling.entries.push((hom, xi));
        }
    }
    let rounded = tiling.weight();
    Ok(LpTiling { tiling, fractional: sol.objective, rounded, columns: loads.len(), pivots: sol.pivots })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveKind {
    /// Three disjoint link edges between the two cherries.
    Matching,
    /// Two vertices of the first cherry with four distinct link neighbours.
    FourNeighbours,
    /// Extremal pair: weight shift off the non-special vertices, then an even fill.
    WeightShift,
}

/// A cherry taking part in a move: a tiled entry, or a constant padding map
/// at an unsaturated vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MoveUnit {
    Tiled(usize),
    Padding(Vertex),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveParams {
    /// Cap on the number of `(k-2)`-sets tried.
    pub max_k_sets: usize,
    /// Use constant maps at unsaturated vertices as extra cherries.
    pub padding: bool,
}

impl Default for MoveParams {
    fn default() -> Self {
        MoveParams { max_k_sets: 20_000, padding: true }
    }
}

#[derive(Clone, Debug)]
pub struct MoveOutcome<T> {
    pub kind: MoveKind,
    pub k_set: Vec<Vertex>,
    pub cherries: (MoveUnit, MoveUnit),
    pub tiling: HomTiling<T>,
    pub gain: T,
}

fn lcm(a: u128, b: u128) -> u128 {
    a / num_integer::gcd(a, b) * b
}

/// `β / lcm(16·k!, 24(k-ℓ-1)(k-ℓ)(2(k-ℓ)-1))`: every weight produced by a move
/// on a `β`-tiling is a multiple of this.
pub fn refined_beta<T: Scalar>(beta: &T, k: usize, ell: usize) -> T {
    let fact: u128 = (1..=k as u128).product();
    let d = (k - ell) as u128;
    let m = lcm(16 * fact, 24 * (d - 1) * d * (2 * d - 1));
    beta.clone() / T::from_u128(m).expect("refinement factor fits the scalar type")
}

fn max_matching(adj: &[Vec<usize>], right: usize) -> Vec<(usize, usize)> {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    for u in 0..adj.len() {
        let mut seen = vec![false; right];
        augment(u, adj, &mut seen, &mut owner);
    }
    let mut out: Vec<(usize, usize)> = owner.iter().enumerate().filter_map(|(v, o)| o.map(|u| (u, v))).collect();
    out.sort_unstable();
    out
}

struct MoveCtx<'a, T> {
    r: &'a Hypergraph,
    h: &'a HomTiling<T>,
    beta: T,
    fine: T,
    k: usize,
    ell: usize,
}

impl<T: Scalar> MoveCtx<'_, T> {
    fn phi(&self, u: MoveUnit) -> Vec<Vertex> {
        match u {
            MoveUnit::Tiled(i) => self.h.entries[i].0.phi.clone(),
            MoveUnit::Padding(v) => vec![v; 2 * self.k - 2 * self.ell],
        }
    }

    fn frac(&self, num: usize, den: usize) -> T {
        self.beta.clone() * T::from_count(num) / T::from_count(den)
    }

    /// The current tiling with reduced units and extra skewed blocks on `K ∪ {x, y}`.
    fn rebuild(&self, cuts: &[(MoveUnit, T)], kset: &[Vertex], pairs: &[(Vertex, Vertex)], q: &T) -> Option<HomTiling<T>> {
        let mut out = HomTiling::new(self.k, self.ell, self.fine.clone());
        let mut entries = self.h.entries.clone();
        for (u, cut) in cuts {
            if let MoveUnit::Tiled(i) = u {
                entries[*i].1 = entries[*i].1.clone() - cut.clone();
            }
        }
        for (hom, w) in entries {
            if w.definitely_gt(&T::zero()) {
                out.push(hom, w);
            } else if w.is_negative() && !w.approx_eq(&T::zero()) {
                return None;
            }
        }
        for &(x, y) in pairs {
            let e: Vec<Vertex> = kset.iter().copied().chain([x, y]).collect();
            out.absorb(building_block(self.r, &e, self.ell, q, BlockVariant::Skewed).ok()?);
        }
        Some(out)
    }

    fn accept(&self, tiling: HomTiling<T>) -> Option<(HomTiling<T>, T)> {
        let w = tiling_validate(self.r, &tiling).ok()?;
        let gain = w - self.h.weight();
        gain.definitely_gt(&T::zero()).then_some((tiling, gain))
    }
}

/// Searches the three local moves over low-weight `(k-2)`-sets `K` and
/// ordered pairs of cherries, in a fixed order, and returns the first one that
/// yields a valid tiling of strictly larger weight. The result is a tiling
/// over the refined granularity [`refined_beta`].
pub fn improvement_moves<T: Scalar>(r: &Hypergraph, h: &HomTiling<T>, params: &MoveParams) -> Result<Option<MoveOutcome<T>>> {
    let (t, k, ell) = (r.n(), h.k, h.ell);
    check_loose(k, ell)?;
    if r.k() != k {
        return invalid(format!("tiling is for k = {k}, hypergraph has k = {}", r.k()));
    }
    if let Err(v) = tiling_validate(r, h) {
        return Err(Error::InvalidQuery(format!("input tiling invalid: {v}")));
    }
    let beta = h.beta.clone();
    let ctx = MoveCtx { r, h, beta: beta.clone(), fine: refined_beta(&beta, k, ell), k, ell };
    let weights = h.vertex_weights(t);
    let low: Vec<Vertex> = (0..t).filter(|&v| weights[v].approx_le(&(T::one() - beta.clone()))).collect();

    let mut units = Vec::new();
    for (i, (_, w)) in h.entries.iter().enumerate() {
        let copies = (w.clone() / beta.clone() + T::tolerance()).floor();
        units.push(MoveUnit::Tiled(i));
        if copies >= T::from_count(2) {
            units.push(MoveUnit::Tiled(i));
        }
    }
    if params.padding {
        units.extend(low.iter().map(|&v| MoveUnit::Padding(v)));
    }
    let phis: Vec<Vec<Vertex>> = units.iter().map(|&u| ctx.phi(u)).collect();
    let side = 2 * k - 2 * ell;
    let dd = k - ell - 1;

    for kset in low.iter().copied().combinations(k - 2).take(params.max_k_sets) {
        let in_k = |v: Vertex| kset.contains(&v);
        let linked = |x: Vertex, y: Vertex| {
            x != y && !in_k(x) && !in_k(y) && {
                let e: Vec<Vertex> = kset.iter().copied().chain([x, y]).collect();
                r.contains(&e)
            }
        };
        for a in 0..units.len() {
            for b in 0..units.len() {
                if a == b {
                    continue;
                }
                let (pa, pb) = (&phis[a], &phis[b]);
                let adj: Vec<Vec<usize>> =
                    (0..side).map(|i| (0..side).filter(|&j| linked(pa[i], pb[j])).collect()).collect();
                let n_edges: usize = adj.iter().map(Vec::len).sum();
                if n_edges == 0 {
                    continue;
                }
                let pair = (units[a], units[b]);
                let outcome = |kind, (tiling, gain)| MoveOutcome { kind, k_set: kset.clone(), cherries: pair, tiling, gain };

                // (a) three disjoint link edges
                let m = max_matching(&adj, side);
                if m.len() >= 3 {
                    let cut = ctx.frac(k - 2, 6 * dd);
                    let q = ctx.frac(1, 3);
                    let pairs: Vec<_> = m[..3].iter().map(|&(i, j)| (pa[i], pb[j])).collect();
                    let built = ctx.rebuild(&[(pair.0, cut.clone()), (pair.1, cut)], &kset, &pairs, &q);
                    if let Some(done) = built.and_then(|t| ctx.accept(t)) {
                        return Ok(Some(outcome(MoveKind::Matching, done)));
                    }
                }

                // (b) two vertices of the first cherry with four distinct neighbours
                let rich: Vec<usize> = (0..side).filter(|&i| adj[i].len() >= 2).collect();
                for (&i1, &i2) in rich.iter().tuple_combinations() {
                    for n1 in adj[i1].iter().copied().combinations(2) {
                        for n2 in adj[i2].iter().copied().combinations(2) {
                            if n1.iter().any(|j| n2.contains(j)) {
                                continue;
                            }
                            let pairs = [
                                (pa[i1], pb[n1[0]]),
                                (pa[i1], pb[n1[1]]),
                                (pa[i2], pb[n2[0]]),
                                (pa[i2], pb[n2[1]]),
                            ];
                            let cuts = [(pair.0, ctx.frac(k - 2, 4 * dd)), (pair.1, ctx.frac(k - 2, 8 * dd))];
                            let built = ctx.rebuild(&cuts, &kset, &pairs, &ctx.frac(1, 4));
                            if let Some(done) = built.and_then(|t| ctx.accept(t)) {
                                return Ok(Some(outcome(MoveKind::FourNeighbours, done)));
                            }
                        }
                    }
                }

                // (c) extremal pair: the link is exactly the two stars at u and u'
                if n_edges != 2 * side - 1 {
                    continue;
                }
                let full_left = (0..side).find(|&i| adj[i].len() == side);
                let full_right = (0..side).find(|&j| (0..side).all(|i| adj[i].contains(&j)));
                let (Some(u), Some(u2)) = (full_left, full_right) else {
                    continue;
                };
                let star = (0..side).all(|i| i == u || adj[i] == [u2]);
                if !star {
                    continue;
                }
                let mut pairs: Vec<(Vertex, Vertex)> = (0..side).filter(|&j| j != u2).map(|j| (pa[u], pb[j])).collect();
                pairs.extend((0..side).filter(|&i| i != u).map(|i| (pa[i], pb[u2])));
                let cut = ctx.frac(k - 2, 4 * dd);
                let q = ctx.frac(1, 4 * (k - ell) - 2);
                let Some(mut shifted) = ctx.rebuild(&[(pair.0, cut.clone()), (pair.1, cut)], &kset, &pairs, &q) else {
                    continue;
                };
                let fill = ctx.frac(k - 2, 4 * (k - ell) - 2);
                let loads = shifted.vertex_weights(t);
                let freed: Vec<Vertex> = (0..side)
                    .filter(|&i| i != u)
                    .map(|i| pa[i])
                    .chain((0..side).filter(|&j| j != u2).map(|j| pb[j]))
                    .collect();
                let target = r.edges().iter().find(|e| {
                    e.iter().any(|v| freed.contains(v))
                        && e.iter().all(|&v| (loads[v].clone() + fill.clone()).approx_le(&T::one()))
                });
                let Some(e) = target else {
                    continue;
                };
                let Ok(block) = building_block(r, e, ell, &fill, BlockVariant::Even) else {
                    continue;
                };
                shifted.absorb(block);
                if let Some(done) = ctx.accept(shifted) {
                    return Ok(Some(outcome(MoveKind::WeightShift, done)));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FracExtremalWitness<T> {
    pub b: Vec<T>,
    pub mass: T,
    pub edge_mass: T,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FracVerdict<T> {
    Extremal(FracExtremalWitness<T>),
    NotExtremal,
    /// Local search found nothing; this is not a proof of non-extremality.
    Inconclusive { best_edge_mass: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FracMode {
    /// `b` restricted to `{0, 1}`; all sets of the minimal admissible size.
    Binary { cap: usize },
    /// Seeded projected descent on the multilinear edge mass.
    Continuous { restarts: usize, seed: u64 },
}

impl FracMode {
    pub fn binary() -> Self {
        FracMode::Binary { cap: 14 }
    }

    pub fn continuous(seed: u64) -> Self {
        FracMode::Continuous { restarts: 50, seed }
    }
}

/// `(2(k-ℓ)-1)/(2(k-ℓ))·t`.
pub fn mass_threshold<T: Scalar>(t: usize, k: usize, ell: usize) -> T {
    let d = 2 * (k - ell);
    T::from_count((d - 1) * t) / T::from_count(d)
}

fn edge_mass<T: Scalar>(r: &Hypergraph, b: &[T]) -> T {
    r.edges()
        .iter()
        .fold(T::zero(), |acc, e| acc + e.iter().fold(T::one(), |p, &v| p * b[v].clone()))
}

/// Looks for `b: V → {0} ∪ [β,1]` with `Σ b >= (2(k-ℓ)-1)t/(2(k-ℓ))` and
/// `Σ_e Π_{v∈e} b(v) <= ξ C(t,k)`.
pub fn fractional_extremality<T: Scalar>(r: &Hypergraph, ell: usize, beta: &T, xi: &T, mode: FracMode) -> Result<FracVerdict<T>> {
    let (t, k) = (r.n(), r.k());
    check_loose(k, ell)?;
    if !beta.is_positive() || *beta > T::one() {
        return invalid(format!("beta = {beta} must lie in (0, 1]"));
    }
    let threshold: T = mass_threshold(t, k, ell);
    let bound = xi.clone() * binomial_as::<T>(t, k);
    match mode {
        FracMode::Binary { cap } => {
            if t > cap {
                return Err(Error::CapExceeded { what: "t", got: t, cap });
            }
            let edges = r.edge_masks().expect("t <= cap <= 128");
            let size = threshold.ceil().to_f64_lossy().round() as usize;
            let mut best: Option<(usize, Mask)> = None;
            for b in bits::subsets_of_size(bits::full_mask(t), size) {
                let e = edges.iter().filter(|&&x| x & !b == 0).count();
                if best.is_none_or(|(be, _)| e < be) {
                    best = Some((e, b));
                }
            }
            let Some((e, b)) = best else {
                return Ok(FracVerdict::NotExtremal);
            };
            if !T::from_count(e).approx_le(&bound) {
                return Ok(FracVerdict::NotExtremal);
            }
            let b: Vec<T> = (0..t).map(|v| if b >> v & 1 == 1 { T::one() } else { T::zero() }).collect();
            Ok(FracVerdict::Extremal(FracExtremalWitness { mass: T::from_count(size), edge_mass: T::from_count(e), b }))
        }
        FracMode::Continuous { restarts, seed } => {
            let beta_f = beta.to_f64_lossy();
            let need = threshold.to_f64_lossy();
            let runs: Vec<(f64, Vec<f64>)> = (0..restarts.max(1))
                .into_par_iter()
                .map(|i| descend(r, beta_f, need, seed.wrapping_add(i as u64)))
                .collect();
            let (best_f, best_b) = runs
                .into_iter()
                .reduce(|a, b| if b.0 < a.0 { b } else { a })
                .expect("at least one restart");
            let b = snap::<T>(r, &best_b, beta, &threshold);
            let mass = b.iter().fold(T::zero(), |acc, x| acc + x.clone());
            let em = edge_mass(r, &b);
            if mass.approx_le(&T::from_count(t)) && threshold.approx_le(&mass) && em.approx_le(&bound) {
                Ok(FracVerdict::Extremal(FracExtremalWitness { b, mass, edge_mass: em }))
            } else {
                Ok(FracVerdict::Inconclusive { best_edge_mass: best_f })
            }
        }
    }
}

fn f64_mass(r: &Hypergraph, b: &[f64]) -> f64 {
    r.edges().iter().map(|e| e.iter().map(|&v| b[v]).product::<f64>()).sum()
}

fn gradient(r: &Hypergraph, b: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; b.len()];
    for e in r.edges() {
        for &v in e {
            g[v] += e.iter().filter(|&&u| u != v).map(|&u| b[u]).product::<f64>();
        }
    }
    g
}

/// Tops `b` up (lowest gradient first) until its mass reaches `need`.
fn repair(b: &mut [f64], g: &[f64], beta: f64, need: f64) {
    let mut order: Vec<usize> = (0..b.len()).collect();
    order.sort_by(|&x, &y| g[x].total_cmp(&g[y]).then(x.cmp(&y)));
    for v in order {
        let deficit = need - b.iter().sum::<f64>();
        if deficit <= 1e-12 {
            return;
        }
        let target = (b[v] + deficit).min(1.0);
        b[v] = if target > 0.0 && target < beta { beta } else { target };
    }
}

/// Moves mass from the steepest vertex to the flattest one; the step halves
/// on failure, from 0.1 down to 0.001.
fn descend(r: &Hypergraph, beta: f64, need: f64, seed: u64) -> (f64, Vec<f64>) {
    let t = r.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b: Vec<f64> = (0..t).map(|_| rng.gen_range(beta..=1.0)).collect();
    let g0 = vec![0.0; t];
    repair(&mut b, &g0, beta, need);
    let mut f = f64_mass(r, &b);
    let mut step: f64 = 0.1;
    while step >= 0.001 {
        let g = gradient(r, &b);
        let from = (0..t).filter(|&v| b[v] > 0.0).max_by(|&x, &y| g[x].total_cmp(&g[y]).then(y.cmp(&x)));
        let to = (0..t).filter(|&v| b[v] < 1.0).min_by(|&x, &y| g[x].total_cmp(&g[y]).then(x.cmp(&y)));
        let (Some(v), Some(u)) = (from, to) else {
            break;
        };
        if u == v {
            break;
        }
        let mut c = b.clone();
        let moved = step.min(c[v]).min(1.0 - c[u]);
        c[v] -= moved;
        c[u] += moved;
        if c[v] > 0.0 && c[v] < beta {
            c[v] = 0.0;
        }
        if c[u] > 0.0 && c[u] < beta {
            c[u] = beta;
        }
        repair(&mut c, &g, beta, need);
        let cf = f64_mass(r, &c);
        if cf < f - 1e-12 {
            b = c;
            f = cf;
        } else {
            step *= 0.5;
        }
    }
    (f, b)
}

/// Rounds to thousandths, restores `{0} ∪ [β,1]`, and repairs the mass exactly.
fn snap<T: Scalar>(r: &Hypergraph, b: &[f64], beta: &T, need: &T) -> Vec<T> {
    let mut out: Vec<T> = b
        .iter()
        .map(|&x| {
            let v = T::from_ratio((x * 1000.0).round() as i64, 1000);
            if v.is_positive() && v < *beta {
                beta.clone()
            } else {
                T::min_of(v, T::one())
            }
        })
        .collect();
    let g = gradient(r, b);
    let mut order: Vec<usize> = (0..b.len()).collect();
    order.sort_by(|&x, &y| g[x].total_cmp(&g[y]).then(x.cmp(&y)));
    for v in order {
        let mass = out.iter().fold(T::zero(), |acc, x| acc + x.clone());
        if need.approx_le(&mass) {
            break;
        }
        let raised = T::min_of(out[v].clone() + need.clone() - mass, T::one());
        out[v] = T::max_of(raised, beta.clone());
    }
    out
}

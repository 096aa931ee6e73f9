//! Named hypergraphs, a seeded minimum-degree generator, and set extremality.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{self, Mask};
use crate::error::{check_loose, invalid, Error, Result};
use crate::hgraph::{Hypergraph, Vertex, VertexSet};
use crate::scalar::{binomial, binomial_as, Scalar};

/// Size of the vertex class `A` of the extremal example: `⌈n/(2(k-ℓ)) - 1⌉`, floored at 0.
pub fn extremal_class_size(n: usize, k: usize, ell: usize) -> usize {
    let two_d = 2 * (k - ell);
    if n <= two_d {
        0
    } else {
        (n - two_d).div_ceil(two_d)
    }
}

/// All k-sets meeting `A = {0, ..., |A|-1}`.
pub fn extremal_example(n: usize, k: usize, ell: usize) -> Result<Hypergraph> {
    check_loose(k, ell)?;
    if n < k {
        return invalid(format!("need n >= k, got n = {n}, k = {k}"));
    }
    let a = extremal_class_size(n, k, ell);
    let edges = (0..n).combinations(k).filter(|e| e[0] < a).collect();
    Ok(Hypergraph::from_checked(n, k, edges))
}

/// Two edges `{0..k-1}` and `{k-2ℓ..2k-2ℓ-1}` sharing `2ℓ` vertices.
pub fn cherry(k: usize, ell: usize) -> Result<Hypergraph> {
    check_loose(k, ell)?;
    let v = 2 * k - 2 * ell;
    Hypergraph::new(v, k, vec![(0..k).collect(), (k - 2 * ell..v).collect()])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomMinDegree {
    pub n: usize,
    pub k: usize,
    /// Target for `δ_{k-2}` as a fraction of `C(n, 2)`.
    pub delta_fraction: f64,
    /// Edge probability of the base random hypergraph.
    pub p: f64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub graph: Hypergraph,
    /// Requested `δ_{k-2}` after capping at `C(n-k+2, 2)`.
    pub target: usize,
    pub achieved: usize,
}

/// Seeded generator: a `p`-random hypergraph, then for every deficient
/// `(k-2)`-set (in lexicographic order) random missing link pairs are added
/// until its degree reaches the target.
///
/// A `(k-2)`-set can have at most `C(n-k+2, 2)` link pairs, so a target above
/// that is capped there; `delta_fraction = 1` therefore yields the complete
/// hypergraph.
pub fn random_mindeg(params: &RandomMinDegree) -> Result<RandomInstance> {
    let RandomMinDegree { n, k, delta_fraction, p, seed } = *params;
    if !(0.0..=1.0).contains(&delta_fraction) {
        return Err(Error::Unreachable(format!("delta_fraction {delta_fraction} outside [0, 1]")));
    }
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("edge probability {p} outside [0, 1]"));
    }
    if k < 2 || n < k {
        return invalid(format!("need 2 <= k <= n, got n = {n}, k = {k}"));
    }
    let max_pairs = binomial(n - k + 2, 2) as usize;
    let wanted = (delta_fraction * binomial(n, 2) as f64 - 1e-9).ceil().max(0.0) as usize;
    let target = wanted.min(max_pairs);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: BTreeSet<Vec<Vertex>> = (0..n).combinations(k).filter(|_| rng.gen_bool(p)).collect();

    if target > 0 {
        for kset in (0..n).combinations(k - 2) {
            let others: Vec<Vertex> = (0..n).filter(|v| !kset.contains(v)).collect();
            let mut present = 0;
            let mut missing = Vec::new();
            for pair in others.iter().copied().combinations(2) {
                let e = merged(&kset, &pair);
                if edges.contains(&e) {
                    present += 1;
                } else {
                    missing.push(e);
                }
            }
            if present >= target {
                continue;
            }
            missing.shuffle(&mut rng);
            for e in missing.into_iter().take(target - present) {
                edges.insert(e);
            }
        }
    }
    let graph = Hypergraph::from_checked(n, k, edges.into_iter().collect());
    let achieved = graph.min_s_degree(k - 2)?;
    Ok(RandomInstance { graph, target, achieved })
}

fn merged(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let mut e: Vec<Vertex> = a.iter().chain(b).copied().collect();
    e.sort_unstable();
    e
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremal {
    Yes,
    No,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremalityMode {
    /// All sets of the prescribed size; refused above `cap` vertices.
    Exhaustive { cap: usize },
    /// Seeded steepest single-swap descent from `restarts` random starts.
    LocalSearch { restarts: usize, seed: u64 },
}

impl ExtremalityMode {
    pub fn exhaustive() -> Self {
        ExtremalityMode::Exhaustive { cap: 14 }
    }

    pub fn local_search(seed: u64) -> Self {
        ExtremalityMode::LocalSearch { restarts: 50, seed }
    }

    fn name(&self) -> &'static str {
        match self {
            ExtremalityMode::Exhaustive { .. } => "exhaustive",
            ExtremalityMode::LocalSearch { .. } => "local-search",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalityVerdict<T> {
    pub extremal: Extremal,
    /// Best set found: the lexicographically least minimiser in exhaustive mode.
    pub witness: Option<VertexSet>,
    pub edges_inside: Option<usize>,
    /// `e(B) / C(n, k)` for the witness.
    pub density: Option<T>,
    /// Number of minimising sets (exhaustive mode only).
    pub minimizers: Option<usize>,
    pub mode: &'static str,
}

impl<T: Scalar> ExtremalityVerdict<T> {
    /// One-line JSON record.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "extremal": self.extremal,
            "witness": self.witness,
            "edges_inside": self.edges_inside,
            "density": self.density.as_ref().map(|d| d.to_f64_lossy()),
            "minimizers": self.minimizers,
            "mode": self.mode,
        })
        .to_string()
    }
}

/// `⌊(2(k-ℓ)-1) n / (2(k-ℓ))⌋`.
pub fn extremal_set_size(n: usize, k: usize, ell: usize) -> usize {
    let two_d = 2 * (k - ell);
    (two_d - 1) * n / two_d
}

fn inside(edges: &[Mask], b: Mask) -> usize {
    edges.iter().filter(|&&e| e & !b == 0).count()
}

/// Looks for a set `B` of `⌊(2(k-ℓ)-1)n/(2(k-ℓ))⌋` vertices with `e(B) <= ξ C(n,k)`.
pub fn extremality_check<T: Scalar>(
    h: &Hypergraph,
    ell: usize,
    xi: &T,
    mode: ExtremalityMode,
) -> Result<ExtremalityVerdict<T>> {
    let (n, k) = (h.n(), h.k());
    if ell == 0 || ell >= k {
        return invalid(format!("ell = {ell} must lie in [1, k)"));
    }
    if *xi <= T::zero() || *xi > T::one() {
        return invalid(format!("xi = {xi} must lie in (0, 1]"));
    }
    let Some(edges) = h.edge_masks() else {
        return Err(Error::CapExceeded { what: "n", got: n, cap: bits::MAX_BITS });
    };
    let size = extremal_set_size(n, k, ell);
    let total: T = binomial_as(n, k);
    let bound = xi.clone() * total.clone();
    let verdict = |extremal, best: Option<(usize, Mask)>, minimizers| ExtremalityVerdict {
        extremal,
        witness: best.map(|(_, b)| VertexSet::new(bits::iter(b))),
        edges_inside: best.map(|(e, _)| e),
        density: best.map(|(e, _)| T::from_count(e) / total.clone()),
        minimizers,
        mode: mode.name(),
    };
    match mode {
        ExtremalityMode::Exhaustive { cap } => {
            if n > cap {
                return Err(Error::CapExceeded { what: "n", got: n, cap });
            }
            let mut best: Option<(usize, Mask)> = None;
            let mut count = 0;
            for b in bits::subsets_of_size(bits::full_mask(n), size) {
                let e = inside(&edges, b);
                match best {
                    Some((be, _)) if e > be => {}
                    Some((be, _)) if e == be => count += 1,
                    _ => {
                        best = Some((e, b));
                        count = 1;
                    }
                }
            }
            let ok = best.is_some_and(|(e, _)| T::from_count(e).approx_le(&bound));
            let extremal = if ok { Extremal::Yes } else { Extremal::No };
            Ok(verdict(extremal, best, Some(count)))
        }
        ExtremalityMode::LocalSearch { restarts, seed } => {
            let best = (0..restarts.max(1))
                .into_par_iter()
                .map(|r| swap_descent(&edges, n, size, seed.wrapping_add(r as u64)))
                .min_by(|a, b| a.0.cmp(&b.0).then_with(|| lex_key(a.1).cmp(&lex_key(b.1))));
            let ok = best.is_some_and(|(e, _)| T::from_count(e).approx_le(&bound));
            let extremal = if ok { Extremal::Yes } else { Extremal::Inconclusive };
            Ok(verdict(extremal, best, None))
        }
    }
}

fn lex_key(m: Mask) -> Vec<Vertex> {
    bits::to_vec(m)
}

/// Steepest descent over single swaps; ties go to the lexicographically least set.
fn swap_descent(edges: &[Mask], n: usize, size: usize, seed: u64) -> (usize, Mask) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut b = bits::mask_of(&order[..size]);
    let mut e = inside(edges, b);
    loop {
        let mut best: Option<(usize, Mask)> = None;
        for u in bits::iter(b) {
            for w in bits::iter(bits::full_mask(n) & !b) {
                let c = (b & !(1u128 << u)) | (1u128 << w);
                let ce = inside(edges, c);
                let better = match best {
                    None => true,
                    Some((be, bm)) => ce < be || (ce == be && lex_key(c) < lex_key(bm)),
                };
                if better {
                    best = Some((ce, c));
                }
            }
        }
        match best {
            Some((ce, c)) if ce < e => {
                e = ce;
                b = c;
            }
            _ => return (e, b),
        }
    }
}

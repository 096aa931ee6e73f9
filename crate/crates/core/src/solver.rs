//! Exact search for Hamiltonian ℓ-cycles, plus brute-force oracles.
//!
//! The search builds the cycle as a sequence of vertex blocks
//! `O_0, P_0, O_1, P_1, ...` where `|O_j| = ℓ`, `|P_j| = k - 2ℓ` and edge `j`
//! is `O_j ∪ P_j ∪ O_{j+1}`. Within a block the order of vertices is
//! irrelevant, so blocks are chosen as sets. Rotations are removed by
//! putting vertex 0 in `O_0 ∪ P_0`; when `0 ∈ P_0` reflections are removed by
//! requiring `min O_0 < min O_1`.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use itertools::Itertools;
use rayon::prelude::*;

use crate::bits::{self, Mask};
use crate::error::{check_loose, Error, Result};
use crate::hgraph::{Hypergraph, Vertex};
use crate::walks::{validate_cycle, EllWalk, WalkKind};

const MEMO_LIMIT: usize = 4_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Budget {
    pub nodes: Option<u64>,
    pub time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(nodes: u64) -> Self {
        Budget { nodes: Some(nodes), time: None }
    }

    /// Splits off `fraction` of both limits.
    pub fn share(&self, fraction: f64) -> Budget {
        Budget {
            nodes: self.nodes.map(|n| ((n as f64 * fraction) as u64).max(1)),
            time: self.time.map(|t| t.mul_f64(fraction)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Found,
    Exhausted,
    Timeout,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_depth: usize,
    pub elapsed: Duration,
    pub outcome: Outcome,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub budget: Budget,
    /// Worker threads for the top-level branches; 1 gives a deterministic witness.
    pub workers: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { budget: Budget::unlimited(), workers: 1 }
    }
}

/// Immutable indices shared by all workers.
struct Ctx {
    ell: usize,
    free: usize,
    edges: HashSet<Mask>,
    by_overlap: HashMap<Mask, Vec<Mask>>,
    vertex_edges: Vec<Vec<Mask>>,
    nodes: AtomicU64,
    stop: AtomicBool,
    limit: Option<u64>,
    deadline: Option<Instant>,
}

#[derive(Clone, Copy)]
struct Start {
    o0: Mask,
    p0: Mask,
    o1: Mask,
}

enum Step {
    Found,
    Fail,
    Abort,
}

struct Worker<'a> {
    ctx: &'a Ctx,
    memo: HashSet<(Mask, Mask, Mask)>,
    max_depth: usize,
    local_nodes: u64,
}

impl<'a> Worker<'a> {
    fn new(ctx: &'a Ctx) -> Self {
        Worker { ctx, memo: HashSet::new(), max_depth: 0, local_nodes: 0 }
    }

    fn tick(&mut self) -> bool {
        let ctx = self.ctx;
        if ctx.stop.load(Ordering::Relaxed) {
            return true;
        }
        let total = ctx.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        self.local_nodes += 1;
        if ctx.limit.is_some_and(|l| total > l)
            || (self.local_nodes % 512 == 0 && ctx.deadline.is_some_and(|d| Instant::now() >= d))
        {
            ctx.stop.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }

    fn covered(&self, unused: Mask, allowed: Mask) -> bool {
        bits::iter(unused).all(|v| self.ctx.vertex_edges[v].iter().any(|&e| e & !allowed == 0))
    }

    fn onward(&self, o: Mask, unused: Mask, o0: Mask) -> usize {
        let ctx = self.ctx;
        if bits::count(unused) == ctx.free {
            return usize::from(ctx.edges.contains(&(o | unused | o0)));
        }
        ctx.by_overlap
            .get(&o)
            .map_or(0, |es| es.iter().filter(|&&e| (e & !o) & !unused == 0).count())
    }

    fn run(&mut self, s: Start, full: Mask) -> (Step, Vec<(Mask, Mask)>) {
        let unused = full & !(s.o0 | s.p0 | s.o1);
        let mut chain = vec![(s.p0, s.o1)];
        if !self.covered(unused, unused | s.o1 | s.o0) {
            return (Step::Fail, chain);
        }
        let step = self.dfs(s.o0, s.o1, unused, 1, &mut chain);
        (step, chain)
    }

    fn dfs(&mut self, o0: Mask, frontier: Mask, unused: Mask, depth: usize, chain: &mut Vec<(Mask, Mask)>) -> Step {
        if self.tick() {
            return Step::Abort;
        }
        self.max_depth = self.max_depth.max(depth);
        let ctx = self.ctx;
        if bits::count(unused) == ctx.free {
            if ctx.edges.contains(&(frontier | unused | o0)) {
                chain.push((unused, 0));
                return Step::Found;
            }
            return Step::Fail;
        }
        if self.memo.contains(&(unused, frontier, o0)) {
            return Step::Fail;
        }
        let mut cands: Vec<(usize, Vec<Vertex>, Vec<Vertex>, Mask, Mask)> = Vec::new();
        if let Some(es) = ctx.by_overlap.get(&frontier) {
            for &e in es {
                let rest = e & !frontier;
                if rest & !unused != 0 {
                    continue;
                }
                let next_unused = unused & !rest;
                for o in bits::subsets_of_size(rest, ctx.ell) {
                    let score = self.onward(o, next_unused, o0);
                    if score == 0 {
                        continue;
                    }
                    let p = rest & !o;
                    cands.push((score, bits::to_vec(p), bits::to_vec(o), p, o));
                }
            }
        }
        cands.sort();
        for (_, _, _, p, o) in cands {
            let next_unused = unused & !(p | o);
            if !self.covered(next_unused, next_unused | o | o0) {
                continue;
            }
            chain.push((p, o));
            match self.dfs(o0, o, next_unused, depth + 1, chain) {
                Step::Found => return Step::Found,
                Step::Abort => return Step::Abort,
                Step::Fail => {
                    chain.pop();
                }
            }
        }
        if self.memo.len() < MEMO_LIMIT {
            self.memo.insert((unused, frontier, o0));
        }
        Step::Fail
    }
}

fn starts(ctx: &Ctx, k: usize) -> Vec<Start> {
    let ell = ctx.ell;
    let mut out = Vec::new();
    let mut first: Vec<Mask> = ctx.vertex_edges.first().cloned().unwrap_or_default();
    first.sort_by_key(|&e| bits::to_vec(e));
    for e in first {
        for o0 in bits::subsets_of_size(e, ell) {
            for o1 in bits::subsets_of_size(e & !o0, ell) {
                if o1 & 1 != 0 {
                    continue;
                }
                let p0 = e & !o0 & !o1;
                if p0 & 1 != 0 && o0.trailing_zeros() > o1.trailing_zeros() {
                    continue;
                }
                debug_assert_eq!(bits::count(p0), k - 2 * ell);
                out.push(Start { o0, p0, o1 });
            }
        }
    }
    out
}

fn chain_to_seq(o0: Mask, chain: &[(Mask, Mask)]) -> Vec<Vertex> {
    let mut seq = bits::to_vec(o0);
    for &(p, o) in chain {
        seq.extend(bits::iter(p));
        seq.extend(bits::iter(o));
    }
    seq
}

/// Complete search for a Hamiltonian ℓ-cycle (requires `1 <= ℓ < k/2`, `n <= 128`).
///
/// `Outcome::Exhausted` certifies that no cycle exists. The decision is
/// independent of the worker count; the witness is deterministic only with
/// a single worker.
pub fn hamiltonian_cycle(h: &Hypergraph, ell: usize, opts: &SolverOptions) -> Result<(Option<EllWalk>, SearchStats)> {
    let (n, k) = (h.n(), h.k());
    check_loose(k, ell)?;
    if n % (k - ell) != 0 {
        return Err(Error::Divisibility { n, divisor: k - ell });
    }
    if n > bits::MAX_BITS {
        return Err(Error::CapExceeded { what: "n", got: n, cap: bits::MAX_BITS });
    }
    let started = Instant::now();
    let stats = |nodes, max_depth, outcome| SearchStats { nodes, max_depth, elapsed: started.elapsed(), outcome };
    if n / (k - ell) < 2 {
        return Ok((None, stats(0, 0, Outcome::Exhausted)));
    }

    let masks = h.edge_masks().unwrap_or_default();
    let mut by_overlap: HashMap<Mask, Vec<Mask>> = HashMap::new();
    let mut vertex_edges = vec![Vec::new(); n];
    for &e in &masks {
        for o in bits::subsets_of_size(e, ell) {
            by_overlap.entry(o).or_default().push(e);
        }
        for v in bits::iter(e) {
            vertex_edges[v].push(e);
        }
    }
    let ctx = Ctx {
        ell,
        free: k - 2 * ell,
        edges: masks.iter().copied().collect(),
        by_overlap,
        vertex_edges,
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        limit: opts.budget.nodes,
        deadline: opts.budget.time.map(|t| started + t),
    };
    if ctx.vertex_edges.iter().any(Vec::is_empty) {
        return Ok((None, stats(0, 0, Outcome::Exhausted)));
    }
    let full = bits::full_mask(n);
    let starts = starts(&ctx, k);

    let mut max_depth = 0;
    let mut witness: Option<(Mask, Vec<(Mask, Mask)>)> = None;
    let mut aborted = false;
    if opts.workers <= 1 {
        let mut w = Worker::new(&ctx);
        for s in &starts {
            match w.run(*s, full) {
                (Step::Found, chain) => {
                    witness = Some((s.o0, chain));
                    break;
                }
                (Step::Abort, _) => {
                    aborted = true;
                    break;
                }
                (Step::Fail, _) => {}
            }
        }
        max_depth = w.max_depth;
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::InvalidParameters(e.to_string()))?;
        let results: Vec<(Step, Mask, Vec<(Mask, Mask)>, usize)> = pool.install(|| {
            starts
                .par_iter()
                .map_init(
                    || Worker::new(&ctx),
                    |w, s| {
                        let (step, chain) = w.run(*s, full);
                        if matches!(step, Step::Found) {
                            ctx.stop.store(true, Ordering::Relaxed);
                        }
                        (step, s.o0, chain, w.max_depth)
                    },
                )
                .collect()
        });
        for (step, o0, chain, depth) in results {
            max_depth = max_depth.max(depth);
            match step {
                Step::Found if witness.is_none() => witness = Some((o0, chain)),
                Step::Abort => aborted = true,
                _ => {}
            }
        }
    }
    let nodes = ctx.nodes.load(Ordering::Relaxed);
    if let Some((o0, chain)) = witness {
        let seq = chain_to_seq(o0, &chain);
        let walk = validate_cycle(h, &seq, ell).expect("solver produced an invalid cycle");
        return Ok((Some(walk), stats(nodes, max_depth, Outcome::Found)));
    }
    let outcome = if aborted { Outcome::Timeout } else { Outcome::Exhausted };
    Ok((None, stats(nodes, max_depth, outcome)))
}

/// Brute force over cyclic orderings with vertex 0 first, modulo reflection.
/// Refused above `n = 10`.
pub fn hamiltonian_cycle_oracle(h: &Hypergraph, ell: usize) -> Result<bool> {
    const CAP: usize = 10;
    let (n, k) = (h.n(), h.k());
    if n > CAP {
        return Err(Error::CapExceeded { what: "n", got: n, cap: CAP });
    }
    if ell == 0 || ell >= k {
        return Err(Error::InvalidParameters(format!("ell = {ell} must lie in [1, k)")));
    }
    let d = k - ell;
    if n % d != 0 {
        return Err(Error::Divisibility { n, divisor: d });
    }
    if n == 0 || n / d < 2 || n <= k {
        return Ok(false);
    }
    let edges: HashSet<Mask> = h.edge_masks().unwrap_or_default().into_iter().collect();
    let m = n / d;
    let mut seq = vec![0; n];
    for perm in (1..n).permutations(n - 1) {
        if n >= 3 && perm[0] > perm[n - 2] {
            continue;
        }
        seq[1..].copy_from_slice(&perm);
        for shift in 0..d {
            let ok = (0..m).all(|j| {
                let e = (0..k).fold(0u128, |acc, i| acc | (1u128 << seq[(shift + j * d + i) % n]));
                edges.contains(&e)
            });
            if ok {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Streams every ordered vertex sequence forming an ℓ-path with exactly `m` edges.
pub fn enumerate_paths(h: &Hypergraph, ell: usize, m: usize) -> PathIter<'_> {
    PathIter { h, ell, m, seq: Vec::new(), stack: Vec::new(), started: false }
}

struct Frame {
    base: usize,
    cands: Vec<Vec<Vertex>>,
    next: usize,
}

pub struct PathIter<'a> {
    h: &'a Hypergraph,
    ell: usize,
    m: usize,
    seq: Vec<Vertex>,
    stack: Vec<Frame>,
    started: bool,
}

impl PathIter<'_> {
    fn extensions(&self) -> Vec<Vec<Vertex>> {
        let k = self.h.k();
        if self.seq.is_empty() {
            return self.h.edges().iter().flat_map(|e| e.iter().copied().permutations(k)).collect();
        }
        let tail: Vec<Vertex> = self.seq[self.seq.len() - self.ell..].iter().copied().sorted().collect();
        let mut out = Vec::new();
        for e in self.h.edges() {
            let mut it = e.iter();
            if !tail.iter().all(|v| it.any(|w| w == v)) {
                continue;
            }
            let fresh: Vec<Vertex> = e.iter().copied().filter(|v| !tail.contains(v)).collect();
            if fresh.iter().any(|v| self.seq.contains(v)) {
                continue;
            }
            out.extend(fresh.iter().copied().permutations(fresh.len()));
        }
        out
    }
}

impl Iterator for PathIter<'_> {
    type Item = EllWalk;

    fn next(&mut self) -> Option<EllWalk> {
        let k = self.h.k();
        if self.m == 0 || self.ell == 0 || self.ell >= k {
            return None;
        }
        if !self.started {
            self.started = true;
            let cands = self.extensions();
            self.stack.push(Frame { base: 0, cands, next: 0 });
        }
        loop {
            let depth = self.stack.len();
            let frame = self.stack.last_mut()?;
            if frame.next >= frame.cands.len() {
                self.stack.pop();
                continue;
            }
            let base = frame.base;
            let cand = std::mem::take(&mut frame.cands[frame.next]);
            frame.next += 1;
            self.seq.truncate(base);
            self.seq.extend(cand);
            if depth == self.m {
                return Some(EllWalk::unchecked(self.seq.clone(), k, self.ell, WalkKind::Path));
            }
            let cands = self.extensions();
            let base = self.seq.len();
            self.stack.push(Frame { base, cands, next: 0 });
        }
    }
}

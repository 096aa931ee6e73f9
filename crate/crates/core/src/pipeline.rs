//! Desk-scale version of the absorbing strategy: absorbing path, reservoir,
//! greedy path tiling, connections, absorption of the leftover, and an exact
//! solver fallback followed by an extremality check.

use std::time::{Duration, Instant};

use itertools::Itertools;
use serde::Serialize;

use crate::absorb::{absorbs_check, find_absorber, AbsorberOptions};
use crate::connect::{connect_all, reservoir_select, ConnectOptions, ConnectRequest, ReservoirParams};
use crate::error::{check_loose, Error, Result};
use crate::gen::{extremality_check, Extremal, ExtremalityMode, ExtremalityVerdict};
use crate::hgraph::{Hypergraph, UniformHypergraph, Vertex, VertexSet};
use crate::solver::{hamiltonian_cycle, Budget, Outcome, SolverOptions};
use crate::walks::{validate_cycle, validate_path, EllWalk};
use crate::Rational;

/// Fractions of the node budget for absorbers, tiling, connecting and absorption.
pub const STAGE_SHARES: [f64; 4] = [0.2, 0.5, 0.1, 0.2];

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineParams {
    pub ell: usize,
    pub budget: Budget,
    pub seed: u64,
    /// Absorbers chained into the absorbing path.
    pub absorbers: usize,
    /// Reservoir size as a fraction of the vertices outside the absorbing path.
    pub epsilon: f64,
    pub eta: f64,
    pub xi: Rational,
    /// Cap on `|V(A) ∪ U|` in the absorption search.
    pub absorb_cap: usize,
    pub fallback: bool,
    pub workers: usize,
}

impl PipelineParams {
    pub fn new(ell: usize) -> Self {
        PipelineParams {
            ell,
            budget: Budget::nodes(5_000_000),
            seed: 0,
            absorbers: 1,
            epsilon: 0.8,
            eta: 0.1,
            xi: Rational::new(1, 10),
            absorb_cap: crate::absorb::ABSORBS_CAP,
            fallback: true,
            workers: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Absorbers,
    Reservoir,
    Tiling,
    Connect,
    Absorption,
    Fallback,
    Extremality,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PipelineOutcome {
    Cycle { walk: EllWalk, via_fallback: bool },
    Extremal(ExtremalityVerdict<Rational>),
    Failure { stage: Stage },
    Timeout,
}

impl PipelineOutcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineOutcome::Cycle { .. } => 0,
            PipelineOutcome::Timeout => 2,
            PipelineOutcome::Extremal(_) => 3,
            PipelineOutcome::Failure { .. } => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineReport {
    pub outcome: PipelineOutcome,
    pub trace: Vec<StageRecord>,
}

impl PipelineReport {
    pub fn to_json(&self) -> String {
        let outcome = match &self.outcome {
            PipelineOutcome::Cycle { walk, via_fallback } => {
                serde_json::json!({"kind": "cycle", "cycle": walk.seq(), "via_fallback": via_fallback})
            }
            PipelineOutcome::Extremal(v) => serde_json::json!({
                "kind": "extremal",
                "witness": v.witness,
                "edges_inside": v.edges_inside,
                "mode": v.mode,
            }),
            PipelineOutcome::Failure { stage } => serde_json::json!({"kind": "failure", "stage": stage}),
            PipelineOutcome::Timeout => serde_json::json!({"kind": "timeout"}),
        };
        serde_json::json!({"outcome": outcome, "exit": self.outcome.exit_code(), "trace": self.trace}).to_string()
    }
}

struct Run<'a> {
    h: &'a Hypergraph,
    p: &'a PipelineParams,
    started: Instant,
    trace: Vec<StageRecord>,
}

impl Run<'_> {
    fn log(&mut self, stage: Stage, ok: bool, detail: impl Into<String>) {
        self.trace.push(StageRecord { stage, ok, detail: detail.into() });
    }

    fn out_of_time(&self) -> bool {
        self.p.budget.time.is_some_and(|t| self.started.elapsed() >= t)
    }

    fn nodes(&self, share: f64) -> Option<u64> {
        self.p.budget.share(share).nodes
    }

    /// Constructive stages; `None` after the first failing stage.
    fn construct(&mut self) -> Result<Option<EllWalk>> {
        let (h, p) = (self.h, self.p);
        let (n, k, ell) = (h.n(), h.k(), p.ell);
        if k < 4 {
            self.log(Stage::Absorbers, false, "absorbers need k >= 4");
            return Ok(None);
        }

        // 1. absorbing path from greedily chained absorbers
        let mut used = VertexSet::empty();
        let mut pieces: Vec<EllWalk> = Vec::new();
        let opts = AbsorberOptions { s3: None, node_budget: self.nodes(STAGE_SHARES[0]) };
        for _ in 0..p.absorbers.max(1) {
            let free: Vec<Vertex> = (0..n).filter(|&v| !used.contains(v)).collect();
            if free.len() < k - ell {
                break;
            }
            let target = VertexSet::new(free[..k - ell].iter().copied());
            match find_absorber(h, &target, &used, &opts)? {
                Some(a) => {
                    used = used.union(&a.p.vertex_set());
                    pieces.push(a.p);
                }
                None => break,
            }
        }
        if pieces.is_empty() {
            self.log(Stage::Absorbers, false, "no absorber within the stage budget");
            return Ok(None);
        }
        let mut absorbing = pieces[0].clone();
        if pieces.len() > 1 {
            let pool: VertexSet = (0..n).filter(|&v| !used.contains(v)).collect();
            let pairs: Vec<_> = pieces.windows(2).map(|w| Ok((w[0].ends()?.tail, w[1].ends()?.head))).collect::<Result<_>>()?;
            let req = ConnectRequest { pairs, reservoir: pool, eta: p.eta };
            match connect_all(h, ell, &req, &ConnectOptions { node_budget: self.nodes(STAGE_SHARES[0]) }) {
                Ok(links) => {
                    let mut seq = Vec::new();
                    for (piece, link) in pieces.iter().zip(links.iter().map(Some).chain([None])) {
                        seq.extend_from_slice(&piece.seq()[..piece.len() - ell]);
                        if let Some(link) = link {
                            seq.extend_from_slice(&link.seq()[..link.len() - ell]);
                        }
                    }
                    seq.extend_from_slice(&pieces.last().unwrap().seq()[pieces.last().unwrap().len() - ell..]);
                    absorbing = validate_path(h, &seq, ell).map_err(|v| Error::InvalidQuery(v.to_string()))?;
                    used = absorbing.vertex_set();
                }
                Err(e) => {
                    self.log(Stage::Absorbers, true, format!("kept one absorber, chaining failed: {e}"));
                    used = absorbing.vertex_set();
                }
            }
        }
        self.log(Stage::Absorbers, true, format!("absorbing path on {} vertices from {} absorber(s)", absorbing.len(), pieces.len()));

        // 2. reservoir, sampled among the vertices outside the absorbing path
        let outside: VertexSet = (0..n).filter(|&v| !used.contains(v)).collect();
        let rp = ReservoirParams::new(p.epsilon, p.eta, 1, p.seed);
        let reservoir = match reservoir_select(&h.induced(&outside)?, &rp) {
            Ok(c) => c.set.iter().map(|&i| outside[i]).collect::<VertexSet>(),
            Err(e) => {
                self.log(Stage::Reservoir, false, e.to_string());
                return Ok(None);
            }
        };
        self.log(Stage::Reservoir, true, format!("reservoir of {} vertices", reservoir.len()));

        // 3. greedy path tiling of the rest
        let rest: Vec<Vertex> = (0..n).filter(|&v| !used.contains(v) && !reservoir.contains(v)).collect();
        let (paths, covered, exhausted) = greedy_paths(h, ell, &rest, self.nodes(STAGE_SHARES[1]));
        if exhausted {
            self.log(Stage::Tiling, false, "greedy extraction ran out of nodes");
            return Ok(None);
        }
        self.log(
            Stage::Tiling,
            true,
            format!("greedy extraction: {} path(s) covering {covered} of {} vertices", paths.len(), rest.len()),
        );

        // 4. connect the absorbing path and the tiling paths into a cycle
        let mut segments = vec![absorbing];
        segments.extend(paths);
        let mut pairs = Vec::with_capacity(segments.len());
        for (i, s) in segments.iter().enumerate() {
            let next = &segments[(i + 1) % segments.len()];
            pairs.push((s.ends()?.tail, next.ends()?.head));
        }
        let taken = segments.iter().fold(VertexSet::empty(), |acc, s| acc.union(&s.vertex_set()));
        let req = ConnectRequest { pairs, reservoir: reservoir.difference(&taken), eta: p.eta };
        let links = match connect_all(h, ell, &req, &ConnectOptions { node_budget: self.nodes(STAGE_SHARES[2]) }) {
            Ok(l) => l,
            Err(e) => {
                self.log(Stage::Connect, false, e.to_string());
                return Ok(None);
            }
        };
        self.log(Stage::Connect, true, format!("{} connection(s)", links.len()));

        // 5. absorb the leftover into the absorbing path
        let on_cycle = links.iter().fold(taken, |acc, l| acc.union(&l.vertex_set()));
        let leftover: VertexSet = (0..n).filter(|&v| !on_cycle.contains(v)).collect();
        match absorbs_check(h, &segments[0], &leftover, p.absorb_cap) {
            Ok(Some(q)) => segments[0] = q,
            Ok(None) => {
                self.log(Stage::Absorption, false, format!("absorbing path cannot absorb {leftover}"));
                return Ok(None);
            }
            Err(e) => {
                self.log(Stage::Absorption, false, e.to_string());
                return Ok(None);
            }
        }
        self.log(Stage::Absorption, true, format!("absorbed {} leftover vertices", leftover.len()));

        let mut seq = Vec::with_capacity(n);
        for (s, l) in segments.iter().zip(&links) {
            seq.extend_from_slice(&s.seq()[..s.len() - ell]);
            seq.extend_from_slice(&l.seq()[..l.len() - ell]);
        }
        match validate_cycle(h, &seq, ell) {
            Ok(c) if c.len() == n => Ok(Some(c)),
            Ok(c) => {
                self.log(Stage::Absorption, false, format!("assembled cycle spans {} of {n} vertices", c.len()));
                Ok(None)
            }
            Err(v) => {
                self.log(Stage::Absorption, false, format!("assembled cycle rejected: {v}"));
                Ok(None)
            }
        }
    }
}

/// Repeatedly grows an ℓ-path inside `pool` from its lexicographically first
/// edge, extending by the first `k - ℓ` fresh vertices that close an edge.
/// Returns the paths, the number of covered vertices and whether the node
/// budget ran out.
fn greedy_paths(h: &Hypergraph, ell: usize, pool: &[Vertex], budget: Option<u64>) -> (Vec<EllWalk>, usize, bool) {
    let k = h.k();
    let mut free: Vec<Vertex> = pool.to_vec();
    let mut nodes = 0u64;
    let mut out = Vec::new();
    let mut covered = 0;
    let over = |nodes: &mut u64| {
        *nodes += 1;
        budget.is_some_and(|b| *nodes > b)
    };
    loop {
        let mut start = None;
        for e in free.iter().copied().combinations(k) {
            if over(&mut nodes) {
                return (out, covered, true);
            }
            if h.contains_sorted(&e) {
                start = Some(e);
                break;
            }
        }
        let Some(mut seq) = start else { break };
        free.retain(|v| !seq.contains(v));
        loop {
            let tail: Vec<Vertex> = seq[seq.len() - ell..].to_vec();
            let mut next = None;
            for z in free.iter().copied().combinations(k - ell) {
                if over(&mut nodes) {
                    return (out, covered, true);
                }
                if h.contains(&[&tail[..], &z].concat()) {
                    next = Some(z);
                    break;
                }
            }
            let Some(z) = next else { break };
            free.retain(|v| !z.contains(v));
            seq.extend(z);
        }
        covered += seq.len();
        out.push(validate_path(h, &seq, ell).expect("greedy extension yields a valid path"));
    }
    (out, covered, false)
}

/// Runs the stages, then the exact solver and the extremality check when a
/// stage fails.
pub fn pipeline(h: &Hypergraph, p: &PipelineParams) -> Result<PipelineReport> {
    let (n, k, ell) = (h.n(), h.k(), p.ell);
    check_loose(k, ell)?;
    if n % (k - ell) != 0 {
        return Err(Error::Divisibility { n, divisor: k - ell });
    }
    let mut run = Run { h, p, started: Instant::now(), trace: Vec::new() };
    if let Some(walk) = run.construct()? {
        return Ok(PipelineReport { outcome: PipelineOutcome::Cycle { walk, via_fallback: false }, trace: run.trace });
    }
    let mut timed_out = run.out_of_time();
    if p.fallback && !timed_out {
        let budget = Budget { nodes: p.budget.nodes, time: p.budget.time.map(|t| t.saturating_sub(run.started.elapsed())) };
        let (walk, stats) = hamiltonian_cycle(h, ell, &SolverOptions { budget, workers: p.workers })?;
        match (walk, stats.outcome) {
            (Some(walk), _) => {
                run.log(Stage::Fallback, true, format!("solver found a cycle after {} nodes", stats.nodes));
                return Ok(PipelineReport { outcome: PipelineOutcome::Cycle { walk, via_fallback: true }, trace: run.trace });
            }
            (None, Outcome::Timeout) => {
                run.log(Stage::Fallback, false, format!("solver budget exhausted after {} nodes", stats.nodes));
                timed_out = true;
            }
            (None, _) => run.log(Stage::Fallback, false, format!("solver exhausted: no cycle ({} nodes)", stats.nodes)),
        }
    }
    let mode = if n <= 14 { ExtremalityMode::exhaustive() } else { ExtremalityMode::local_search(p.seed) };
    let verdict = extremality_check(h, ell, &p.xi, mode)?;
    if verdict.extremal == Extremal::Yes {
        run.log(Stage::Extremality, true, verdict.to_json());
        return Ok(PipelineReport { outcome: PipelineOutcome::Extremal(verdict), trace: run.trace });
    }
    run.log(Stage::Extremality, false, verdict.to_json());
    let outcome = if timed_out {
        PipelineOutcome::Timeout
    } else {
        let stage = run.trace.iter().find(|r| !r.ok).map_or(Stage::Fallback, |r| r.stage);
        PipelineOutcome::Failure { stage }
    };
    Ok(PipelineReport { outcome, trace: run.trace })
}

/// Wall-clock limit helper for callers holding seconds.
pub fn seconds(s: f64) -> Duration {
    Duration::from_secs_f64(s)
}

//! Threshold sweeps: seeded `random_mindeg` instances decided by the exact
//! solver, written as CSV together with a per-cell summary.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::gen::{extremal_example, random_mindeg, RandomMinDegree};
use crate::hgraph::Hypergraph;
use crate::scalar::binomial;
use crate::solver::{hamiltonian_cycle, Budget, Outcome, SolverOptions};

pub const CSV_HEADER: [&str; 8] = ["n", "k", "ell", "delta_fraction", "seed", "hamiltonian", "nodes", "millis"];

/// `(4(k-ℓ)-1) / (4(k-ℓ)²)`.
pub fn threshold_constant(k: usize, ell: usize) -> f64 {
    let d = (k - ell) as f64;
    (4.0 * d - 1.0) / (4.0 * d * d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
    pub ells: Vec<usize>,
    pub delta_fractions: Vec<f64>,
    pub seeds: Vec<u64>,
    /// Edge probability of the base random hypergraph.
    pub p: f64,
    pub budget: Budget,
    /// Adds one complete and one extremal instance per `(n, k, ℓ)`.
    pub controls: bool,
    pub n_cap: usize,
    /// Fills the `millis` column; off keeps the CSV reproducible.
    pub timing: bool,
}

impl SweepGrid {
    pub fn new(ns: Vec<usize>, ks: Vec<usize>, ells: Vec<usize>, delta_fractions: Vec<f64>, seeds: Vec<u64>) -> Self {
        SweepGrid {
            ns,
            ks,
            ells,
            delta_fractions,
            seeds,
            p: 0.1,
            budget: Budget::nodes(2_000_000),
            controls: true,
            n_cap: 20,
            timing: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RowSeed {
    Seed(u64),
    ControlComplete,
    ControlExtremal,
}

impl fmt::Display for RowSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowSeed::Seed(s) => write!(f, "{s}"),
            RowSeed::ControlComplete => f.write_str("control-complete"),
            RowSeed::ControlExtremal => f.write_str("control-extremal"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub delta_fraction: f64,
    pub seed: RowSeed,
    pub hamiltonian: bool,
    pub nodes: u64,
    pub millis: Option<u128>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipReason {
    /// `(k - ℓ)` does not divide `n`.
    Divisibility,
    /// Not `1 <= ℓ < k/2`.
    EllRange,
    /// `n` above the solver cap.
    NCap,
    /// The generator rejected the parameters.
    Generator,
    /// The solver budget ran out; the instance has no verdict.
    Timeout,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SkipReason::Divisibility => "divisibility",
            SkipReason::EllRange => "ell-range",
            SkipReason::NCap => "n-cap",
            SkipReason::Generator => "generator",
            SkipReason::Timeout => "timeout",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Skip {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub delta_fraction: Option<f64>,
    pub seed: Option<RowSeed>,
    pub reason: SkipReason,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    /// The delta fraction, or the control label.
    pub group: String,
    pub instances: usize,
    pub hamiltonian: usize,
    pub threshold: f64,
}

impl SummaryRow {
    pub fn fraction(&self) -> f64 {
        self.hamiltonian as f64 / self.instances as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub skips: Vec<Skip>,
}

#[derive(Clone, Copy, Debug)]
enum Cell {
    Random { n: usize, k: usize, ell: usize, df: f64 },
    Control { n: usize, k: usize, ell: usize, which: RowSeed },
}

fn check_shape(n: usize, k: usize, ell: usize, cap: usize) -> Option<SkipReason> {
    if ell == 0 || 2 * ell >= k {
        Some(SkipReason::EllRange)
    } else if n % (k - ell) != 0 {
        Some(SkipReason::Divisibility)
    } else if n > cap {
        Some(SkipReason::NCap)
    } else {
        None
    }
}

fn decide(h: &Hypergraph, ell: usize, budget: Budget, timing: bool) -> Result<(Option<bool>, u64, Option<u128>)> {
    let start = Instant::now();
    let (_, stats) = hamiltonian_cycle(h, ell, &SolverOptions { budget, workers: 1 })?;
    let verdict = match stats.outcome {
        Outcome::Found => Some(true),
        Outcome::Exhausted => Some(false),
        Outcome::Timeout => None,
    };
    Ok((verdict, stats.nodes, timing.then(|| start.elapsed().as_millis())))
}

fn run_cell(cell: Cell, grid: &SweepGrid) -> Result<(Vec<SweepRow>, Vec<Skip>)> {
    let mut rows = Vec::new();
    let mut skips = Vec::new();
    match cell {
        Cell::Random { n, k, ell, df } => {
            for &seed in &grid.seeds {
                let skip = |reason| Skip { n, k, ell, delta_fraction: Some(df), seed: Some(RowSeed::Seed(seed)), reason };
                let inst = match random_mindeg(&RandomMinDegree { n, k, delta_fraction: df, p: grid.p, seed }) {
                    Ok(i) => i,
                    Err(Error::Unreachable(_) | Error::InvalidParameters(_)) => {
                        skips.push(skip(SkipReason::Generator));
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                match decide(&inst.graph, ell, grid.budget, grid.timing)? {
                    (Some(hamiltonian), nodes, millis) => {
                        rows.push(SweepRow { n, k, ell, delta_fraction: df, seed: RowSeed::Seed(seed), hamiltonian, nodes, millis })
                    }
                    (None, ..) => skips.push(skip(SkipReason::Timeout)),
                }
            }
        }
        Cell::Control { n, k, ell, which } => {
            let h = match which {
                RowSeed::ControlComplete => Hypergraph::complete(n, k)?,
                _ => extremal_example(n, k, ell)?,
            };
            let df = h.min_s_degree(k - 2)? as f64 / binomial(n, 2) as f64;
            match decide(&h, ell, grid.budget, grid.timing)? {
                (Some(hamiltonian), nodes, millis) => {
                    rows.push(SweepRow { n, k, ell, delta_fraction: df, seed: which, hamiltonian, nodes, millis })
                }
                (None, ..) => skips.push(Skip { n, k, ell, delta_fraction: Some(df), seed: Some(which), reason: SkipReason::Timeout }),
            }
        }
    }
    Ok((rows, skips))
}

/// Runs every cell on a pool of `workers` threads. Rows come back in grid
/// order (n, k, ℓ, delta fraction, seed, then controls), whatever the worker count.
pub fn sweep(grid: &SweepGrid, workers: usize) -> Result<SweepResult> {
    if !(0.0..=1.0).contains(&grid.p) {
        return invalid(format!("edge probability {} outside [0, 1]", grid.p));
    }
    let mut cells = Vec::new();
    let mut skips = Vec::new();
    for &n in &grid.ns {
        for &k in &grid.ks {
            for &ell in &grid.ells {
                if let Some(reason) = check_shape(n, k, ell, grid.n_cap) {
                    skips.push(Skip { n, k, ell, delta_fraction: None, seed: None, reason });
                    continue;
                }
                cells.extend(grid.delta_fractions.iter().map(|&df| Cell::Random { n, k, ell, df }));
                if grid.controls {
                    for which in [RowSeed::ControlComplete, RowSeed::ControlExtremal] {
                        cells.push(Cell::Control { n, k, ell, which });
                    }
                }
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameters(e.to_string()))?;
    let done: Vec<Result<(Vec<SweepRow>, Vec<Skip>)>> =
        pool.install(|| cells.par_iter().map(|&c| run_cell(c, grid)).collect());
    let mut rows = Vec::new();
    for r in done {
        let (rs, ss) = r?;
        rows.extend(rs);
        skips.extend(ss);
    }
    Ok(SweepResult { rows, skips })
}

fn fmt_fraction(x: f64) -> String {
    format!("{x:.6}")
}

pub fn write_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.k.to_string(),
            r.ell.to_string(),
            fmt_fraction(r.delta_fraction),
            r.seed.to_string(),
            r.hamiltonian.to_string(),
            r.nodes.to_string(),
            r.millis.map(|m| m.to_string()).unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Exact Hamiltonian counts per `(n, k, ℓ, group)`, random cells first.
pub fn summarize(rows: &[SweepRow]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(usize, usize, usize, u8, String), (usize, usize)> = BTreeMap::new();
    for r in rows {
        let (rank, group) = match r.seed {
            RowSeed::Seed(_) => (0, fmt_fraction(r.delta_fraction)),
            other => (1, other.to_string()),
        };
        let e = groups.entry((r.n, r.k, r.ell, rank, group)).or_default();
        e.0 += 1;
        e.1 += r.hamiltonian as usize;
    }
    groups
        .into_iter()
        .map(|((n, k, ell, _, group), (instances, hamiltonian))| SummaryRow {
            n,
            k,
            ell,
            group,
            instances,
            hamiltonian,
            threshold: threshold_constant(k, ell),
        })
        .collect()
}

pub fn write_summary(summary: &[SummaryRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["n", "k", "ell", "group", "instances", "hamiltonian", "fraction", "threshold"]).map_err(io)?;
    for s in summary {
        w.write_record([
            s.n.to_string(),
            s.k.to_string(),
            s.ell.to_string(),
            s.group.clone(),
            s.instances.to_string(),
            s.hamiltonian.to_string(),
            fmt_fraction(s.fraction()),
            fmt_fraction(s.threshold),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

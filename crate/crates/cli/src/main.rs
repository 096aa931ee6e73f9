use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ellcycle::absorb::{find_absorber, AbsorberOptions};
use ellcycle::connect::{connect_all, ConnectOptions, ConnectRequest};
use ellcycle::gen::{cherry, extremal_example, random_mindeg, RandomMinDegree};
use ellcycle::io;
use ellcycle::pipeline::{pipeline, PipelineParams};
use ellcycle::regular::{reduced, RegMode, RegPartition};
use ellcycle::solver::{hamiltonian_cycle, Budget, Outcome, SolverOptions};
use ellcycle::sweep::{summarize, sweep, write_csv, write_summary, SweepGrid};
use ellcycle::tiling::{improvement_moves, max_tiling_lp, tiling_validate, LpTilingOptions, MoveParams};
use ellcycle::{BigRational, Error, Hypergraph, Rational, Scalar, VertexSet};
use serde_json::json;

/// Exit code for bad input or a failed operation.
const EXIT_ERROR: u8 = 5;

#[derive(Parser)]
#[command(name = "ellcycle", version, about = "Loose Hamiltonian cycles in uniform hypergraphs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Global {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,
    #[arg(long, global = true)]
    budget_secs: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Khg)]
    format: Format,
}

impl Global {
    fn budget(&self) -> Budget {
        Budget { nodes: self.budget_nodes, time: self.budget_secs.map(Duration::from_secs_f64) }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Khg,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Complete,
    Extremal,
    Cherry,
    Random,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a hypergraph in .khg form.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long, default_value_t = 0.0)]
        delta_fraction: f64,
        #[arg(long, default_value_t = 0.1)]
        p: f64,
    },
    /// Minimum s-degree, or the degree of one set.
    Degree {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        set: Option<String>,
    },
    /// Exact search for a Hamiltonian ell-cycle.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        ell: usize,
    },
    /// Construct an absorber for a (k - ell)-set.
    Absorb {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        target: String,
        #[arg(long)]
        avoid: Option<String>,
    },
    /// Connect end-set pairs through a reservoir.
    Connect {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        reservoir: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
    },
    /// Fractional cherry tiling of a (reduced) hypergraph.
    Tile {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value = "1/16")]
        beta: String,
        /// Apply improvement moves until none is found.
        #[arg(long)]
        moves: bool,
        #[arg(long, default_value_t = 16)]
        cap: usize,
    },
    /// Reduced hypergraph of a partition.
    Regular {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        partition: Option<PathBuf>,
        /// Equitable split into this many classes instead of a partition file.
        #[arg(long)]
        equitable: Option<usize>,
        #[arg(long, default_value = "1/4")]
        epsilon: String,
        #[arg(long, default_value = "1/2")]
        d: String,
        /// Sampled regularity with this many trials.
        #[arg(long)]
        sampled: Option<usize>,
    },
    /// Absorbing-path pipeline with solver fallback.
    Pipeline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 1)]
        absorbers: usize,
        #[arg(long, default_value_t = 0.8)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        #[arg(long, default_value = "1/10")]
        xi: String,
        #[arg(long)]
        no_fallback: bool,
    },
    /// Hamiltonicity of random instances across a grid.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        ell: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        delta: Vec<f64>,
        /// Number of seeds, counted up from --seed.
        #[arg(long, default_value_t = 10)]
        instances: u64,
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        n_cap: usize,
        #[arg(long)]
        no_controls: bool,
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Parse and check .khg, walk, tiling and partition files.
    Validate {
        /// Hypergraph that walk, tiling and partition files refer to.
        #[arg(long)]
        graph: Option<PathBuf>,
        files: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.workers > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.global.workers).build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn scalar<T: Scalar>(what: &str, s: &str) -> Result<T, Error> {
    T::parse_scalar(s).ok_or_else(|| Error::InvalidParameters(format!("bad {what} {s:?}")))
}

fn emit_graph(h: &Hypergraph, format: Format) {
    match format {
        Format::Khg => print!("{}", io::write_khg(h)),
        Format::Json => println!("{}", json!({"n": h.n(), "k": h.k(), "edges": h.edges()})),
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let g = &cli.global;
    match &cli.cmd {
        Cmd::Gen { family, n, k, ell, delta_fraction, p } => {
            let h = match family {
                Family::Complete => Hypergraph::complete(*n, *k)?,
                Family::Extremal => extremal_example(*n, *k, *ell)?,
                Family::Cherry => cherry(*k, *ell)?,
                Family::Random => {
                    random_mindeg(&RandomMinDegree { n: *n, k: *k, delta_fraction: *delta_fraction, p: *p, seed: g.seed })?.graph
                }
            };
            emit_graph(&h, g.format);
            Ok(0)
        }
        Cmd::Degree { input, s, set } => {
            let h = io::read_khg(input)?;
            if let Some(set) = set {
                let set = VertexSet::try_new(io::parse_id_list(set)?)?;
                let d = h.degree(&set)?;
                match g.format {
                    Format::Khg => println!("{d}"),
                    Format::Json => println!("{}", json!({"set": set, "degree": d})),
                }
            } else {
                let s = s.unwrap_or(h.k() - 1);
                let d = h.min_s_degree(s)?;
                match g.format {
                    Format::Khg => println!("{d}"),
                    Format::Json => println!("{}", json!({"s": s, "min_degree": d})),
                }
            }
            Ok(0)
        }
        Cmd::Solve { input, ell } => {
            let h = io::read_khg(input)?;
            let (walk, stats) = hamiltonian_cycle(&h, *ell, &SolverOptions { budget: g.budget(), workers: g.workers.max(1) })?;
            let outcome = match stats.outcome {
                Outcome::Found => "found",
                Outcome::Exhausted => "exhausted",
                Outcome::Timeout => "timeout",
            };
            match g.format {
                Format::Khg => {
                    if let Some(w) = &walk {
                        println!("{}", w.to_line());
                    }
                    eprintln!("{outcome}: {} nodes", stats.nodes);
                }
                Format::Json => println!(
                    "{}",
                    json!({"outcome": outcome, "nodes": stats.nodes, "cycle": walk.as_ref().map(|w| w.seq())})
                ),
            }
            Ok(match stats.outcome {
                Outcome::Found => 0,
                Outcome::Exhausted => 1,
                Outcome::Timeout => 2,
            })
        }
        Cmd::Absorb { input, ell, target, avoid } => {
            let h = io::read_khg(input)?;
            let target = VertexSet::try_new(io::parse_id_list(target)?)?;
            if target.len() + ell != h.k() {
                return Err(Error::InvalidQuery(format!("target needs k - ell = {} vertices", h.k().saturating_sub(*ell))));
            }
            let avoid = match avoid {
                Some(a) => VertexSet::try_new(io::parse_id_list(a)?)?,
                None => VertexSet::empty(),
            };
            let opts = AbsorberOptions { s3: None, node_budget: g.budget_nodes };
            match find_absorber(&h, &target, &avoid, &opts)? {
                Some(a) => println!("{}", a.to_json()),
                None => println!("NONE"),
            }
            Ok(0)
        }
        Cmd::Connect { input, ell, pairs, reservoir, eta } => {
            let h = io::read_khg(input)?;
            let req = ConnectRequest {
                pairs: io::parse_pairs(&io::read_to_string(pairs)?)?,
                reservoir: io::parse_vertex_set(&io::read_to_string(reservoir)?)?,
                eta: *eta,
            };
            let paths = connect_all(&h, *ell, &req, &ConnectOptions { node_budget: g.budget_nodes.or(Some(5_000_000)) })?;
            print!("{}", io::write_walks(&paths));
            Ok(0)
        }
        Cmd::Tile { input, ell, beta, moves, cap } => {
            let r = io::read_khg(input)?;
            let beta: BigRational = scalar("beta", beta)?;
            let out = max_tiling_lp(&r, *ell, &beta, &LpTilingOptions { cap: *cap, include_constant: false })?;
            let mut tiling = out.tiling;
            let mut applied = 0;
            if *moves {
                while let Some(m) = improvement_moves(&r, &tiling, &MoveParams::default())? {
                    tiling = m.tiling;
                    applied += 1;
                }
            }
            let weight = tiling.weight();
            match g.format {
                Format::Khg => {
                    println!("# fractional {} rounded {} weight {weight} moves {applied}", out.fractional, out.rounded);
                    print!("{}", io::write_tiling(&tiling, r.n()));
                }
                Format::Json => println!(
                    "{}",
                    json!({
                        "fractional": out.fractional.to_string(),
                        "rounded": out.rounded.to_string(),
                        "weight": weight.to_string(),
                        "moves": applied,
                        "tiling": serde_json::from_str::<serde_json::Value>(&tiling.to_json()).unwrap_or_default(),
                    })
                ),
            }
            Ok(0)
        }
        Cmd::Regular { input, partition, equitable, epsilon, d, sampled } => {
            let h = io::read_khg(input)?;
            let p = match (partition, equitable) {
                (Some(f), _) => io::parse_partition(&io::read_to_string(f)?, h.n())?,
                (None, Some(t)) => RegPartition::equitable(h.n(), *t)?,
                (None, None) => return Err(Error::InvalidParameters("give --partition or --equitable".into())),
            };
            let eps: Rational = scalar("epsilon", epsilon)?;
            let d: Rational = scalar("d", d)?;
            let mode = match sampled {
                Some(trials) => RegMode::Sampled { seed: g.seed, trials: *trials },
                None => RegMode::exhaustive(),
            };
            let red = reduced(&h, &p, &eps, &d, mode)?;
            match g.format {
                Format::Khg => {
                    for a in &red.annotations {
                        let tuple: Vec<String> = a.tuple.iter().map(|i| i.to_string()).collect();
                        println!("# {} density {:.6} {}{}", tuple.join(" "), a.density, a.verdict, if a.edge { " edge" } else { "" });
                    }
                    print!("{}", io::write_khg(&red.graph));
                }
                Format::Json => println!(
                    "{}",
                    json!({
                        "t": red.graph.n(),
                        "k": red.graph.k(),
                        "epsilon": eps.to_string(),
                        "d": d.to_string(),
                        "edges": red.graph.edges(),
                        "annotations": red.annotations,
                    })
                ),
            }
            Ok(0)
        }
        Cmd::Pipeline { input, ell, absorbers, epsilon, eta, xi, no_fallback } => {
            let h = io::read_khg(input)?;
            let params = PipelineParams {
                budget: Budget { nodes: g.budget_nodes.or(Some(5_000_000)), ..g.budget() },
                seed: g.seed,
                absorbers: *absorbers,
                epsilon: *epsilon,
                eta: *eta,
                xi: scalar("xi", xi)?,
                fallback: !no_fallback,
                workers: g.workers.max(1),
                ..PipelineParams::new(*ell)
            };
            let rep = pipeline(&h, &params)?;
            println!("{}", rep.to_json());
            Ok(rep.outcome.exit_code() as u8)
        }
        Cmd::Sweep { n, k, ell, delta, instances, p, n_cap, no_controls, timing, out, summary } => {
            let seeds: Vec<u64> = (g.seed..g.seed + instances).collect();
            let mut grid = SweepGrid::new(n.clone(), k.clone(), ell.clone(), delta.clone(), seeds);
            grid.p = *p;
            grid.n_cap = *n_cap;
            grid.controls = !no_controls;
            grid.timing = *timing;
            if g.budget_nodes.is_some() || g.budget_secs.is_some() {
                grid.budget = g.budget();
            }
            let res = sweep(&grid, g.workers.max(1))?;
            let csv = write_csv(&res.rows)?;
            match out {
                Some(path) => write_file(path, &csv)?,
                None => print!("{csv}"),
            }
            let table = write_summary(&summarize(&res.rows))?;
            match summary {
                Some(path) => write_file(path, &table)?,
                None => eprint!("{table}"),
            }
            for s in &res.skips {
                let seed = s.seed.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
                let df = s.delta_fraction.map(|x| format!("{x}")).unwrap_or_else(|| "-".into());
                eprintln!("skip n={} k={} ell={} delta={df} seed={seed}: {}", s.n, s.k, s.ell, s.reason);
            }
            Ok(0)
        }
        Cmd::Validate { graph, files } => {
            let h = match graph {
                Some(p) => Some(io::read_khg(p)?),
                None => None,
            };
            let mut failures = 0;
            for f in files {
                match validate_file(f, h.as_ref()) {
                    Ok(msg) => println!("{}: ok ({msg})", f.display()),
                    Err(msg) => {
                        failures += 1;
                        println!("{}: FAIL {msg}", f.display());
                    }
                }
            }
            Ok(if failures == 0 { 0 } else { 1 })
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn validate_file(path: &Path, h: Option<&Hypergraph>) -> Result<String, String> {
    let text = io::read_to_string(path).map_err(|e| e.to_string())?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let need = || h.ok_or_else(|| "needs --graph".to_string());
    match ext {
        "khg" => {
            let g = io::parse_khg(&text).map_err(|e| e.to_string())?;
            Ok(format!("k = {}, n = {}, {} edges", g.k(), g.n(), g.edge_count()))
        }
        "walk" | "walks" => {
            let h = need()?;
            let recs = io::parse_walks(&text).map_err(|e| e.to_string())?;
            for (line, r) in &recs {
                r.validate(h).map_err(|v| format!("line {line}: {v}"))?;
            }
            Ok(format!("{} walk(s)", recs.len()))
        }
        "tiling" => {
            let h = need()?;
            let (t, order) = io::parse_tiling::<BigRational>(&text).map_err(|e| e.to_string())?;
            if order != h.n() {
                return Err(format!("tiling is on {order} vertices, graph has {}", h.n()));
            }
            let w = tiling_validate(h, &t).map_err(|v| v.to_string())?;
            Ok(format!("weight {w}"))
        }
        "part" | "partition" => {
            let h = need()?;
            let p = io::parse_partition(&text, h.n()).map_err(|e| e.to_string())?;
            Ok(format!("t = {}, m = {}, |V0| = {}", p.t(), p.m(), p.exceptional.len()))
        }
        "pairs" => {
            let pairs = io::parse_pairs(&text).map_err(|e| e.to_string())?;
            Ok(format!("{} pair(s)", pairs.len()))
        }
        "vs" => {
            let s = io::parse_vertex_set(&text).map_err(|e| e.to_string())?;
            if let Some(h) = h {
                s.check_range(h.n()).map_err(|e| e.to_string())?;
            }
            Ok(format!("{} vertices", s.len()))
        }
        other => Err(format!("unknown file type {other:?}")),
    }
}

//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ellcycle::absorb::{absorbs_check, find_absorber, AbsorberOptions, ABSORBS_CAP};
use ellcycle::connect::{connect_all, reservoir_size_bound, ConnectOptions, ConnectRequest};
use ellcycle::gen::{extremal_example, random_mindeg, RandomMinDegree};
use ellcycle::hgraph::CompleteHypergraph;
use ellcycle::pipeline::{pipeline, PipelineOutcome, PipelineParams};
use ellcycle::regular::{inheritance_report, reduced, regularity_check, sqrt_scalar, RegMode, RegPartition, RegVerdict};
use ellcycle::scalar::binomial;
use ellcycle::solver::{hamiltonian_cycle, hamiltonian_cycle_oracle, Budget, Outcome, SolverOptions};
use ellcycle::sweep::{summarize, sweep, write_csv, RowSeed, SweepGrid};
use ellcycle::tiling::{
    building_block, max_tiling_lp, tiling_validate, BlockVariant, LpTilingOptions, MoveKind, MoveParams,
};
use ellcycle::walks::{validate_cycle, validate_path};
use ellcycle::{EllWalk, Hypergraph, Rational, UniformHypergraph, VertexSet, WalkKind};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn r(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn extremal_certificates() -> Verdict {
    let start = Instant::now();
    let mut cases = 0;
    for (k, ell) in [(4, 1), (5, 1), (5, 2), (6, 1)] {
        for n in (k..=12).filter(|n| n % (k - ell) == 0) {
            let h = extremal_example(n, k, ell).map_err(|e| e.to_string())?;
            let (w, stats) = hamiltonian_cycle(&h, ell, &SolverOptions::default()).map_err(|e| e.to_string())?;
            ensure(w.is_none() && stats.outcome == Outcome::Exhausted, || format!("n={n} k={k} ell={ell}: not exhausted"))?;
            // ⌈n/(2(k-ℓ)) - 1⌉ in integers
            let two_d = 2 * (k - ell);
            let want = n.div_ceil(two_d) - 1;
            let got = h.min_s_degree(k - 1).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("n={n} k={k} ell={ell}: delta_(k-1) = {got}, want {want}"))?;
            cases += 1;
        }
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("{cases} extremal instances exhausted, degrees exact, {t:.2?}"))
}

fn oracle_equivalence() -> Verdict {
    let mut counts = [0usize; 2];
    for seed in 0..240u64 {
        let n = if seed % 3 == 0 { 6 } else { 9 };
        let p = [0.04, 0.08, 0.12, 0.2, 0.35][(seed % 5) as usize];
        let h = random_mindeg(&RandomMinDegree { n, k: 4, delta_fraction: 0.0, p, seed }).map_err(|e| e.to_string())?.graph;
        let (w, _) = hamiltonian_cycle(&h, 1, &SolverOptions::default()).map_err(|e| e.to_string())?;
        let oracle = hamiltonian_cycle_oracle(&h, 1).map_err(|e| e.to_string())?;
        ensure(w.is_some() == oracle, || format!("seed {seed}: solver {} oracle {oracle}", w.is_some()))?;
        counts[oracle as usize] += 1;
    }
    Ok(format!("240 instances, 0 disagreements ({} hamiltonian, {} not)", counts[1], counts[0]))
}

fn walk_identities(w: &EllWalk) -> bool {
    let (k, d) = (w.k(), w.k() - w.ell());
    let m = w.edges().len();
    w.size() == m
        && match w.kind() {
            WalkKind::Path => w.len() == k + (m - 1) * d,
            WalkKind::Cycle => w.len() == m * d,
        }
}

fn counting_identities() -> Verdict {
    for seed in 0..50u64 {
        let h = random_mindeg(&RandomMinDegree { n: 9, k: 4, delta_fraction: 0.0, p: 0.3, seed }).map_err(|e| e.to_string())?.graph;
        for s in 1..=4 {
            let total: usize = (0..9).combinations(s).map(|set| h.degree(&VertexSet::new(set)).unwrap()).sum();
            let want = h.edge_count() * binomial(4, s) as usize;
            ensure(total == want, || format!("seed {seed}, s = {s}: {total} != {want}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let shapes = [(3, 1), (4, 1), (5, 1), (5, 2), (6, 2), (7, 3)];
    let graphs: Vec<(Hypergraph, usize)> = shapes
        .iter()
        .flat_map(|&(k, ell)| {
            [Hypergraph::complete(12, k).unwrap(), random_mindeg(&RandomMinDegree { n: 12, k, delta_fraction: 0.0, p: 0.7, seed: k as u64 }).unwrap().graph]
                .into_iter()
                .map(move |g| (g, ell))
        })
        .collect();
    let (mut accepted, mut rejected) = (0, 0);
    let mut tries = 0;
    while accepted < 10_000 {
        tries += 1;
        let (h, ell) = &graphs[rng.gen_range(0..graphs.len())];
        let len = rng.gen_range(h.k()..=12);
        let mut vs: Vec<usize> = (0..12).collect();
        vs.shuffle(&mut rng);
        let seq = &vs[..len];
        let res = if rng.gen_bool(0.5) { validate_path(h, seq, *ell) } else { validate_cycle(h, seq, *ell) };
        match res {
            Ok(w) => {
                ensure(walk_identities(&w), || format!("identity fails on {}", w.to_line()))?;
                accepted += 1;
            }
            Err(_) => rejected += 1,
        }
    }
    Ok(format!("degree sums exact on 50 instances; {accepted} accepted walks ({rejected} rejected of {tries}) satisfy vertex counts"))
}

fn absorber_contract() -> Verdict {
    let start = Instant::now();
    let h = Hypergraph::complete(13, 4).map_err(|e| e.to_string())?;
    let mut targets = 0;
    for s in (0..13).combinations(3) {
        let s = VertexSet::new(s);
        let a = find_absorber(&h, &s, &VertexSet::empty(), &AbsorberOptions::default())
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("no absorber for {s}"))?;
        for (name, ok) in a.invariant_checks() {
            ensure(ok, || format!("target {s}: invariant {name:?} fails"))?;
        }
        let q = absorbs_check(&h, &a.p, &s, ABSORBS_CAP).map_err(|e| e.to_string())?;
        ensure(q.is_some(), || format!("target {s}: absorbs_check found no walk"))?;
        targets += 1;
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("{targets} targets, 10/10 invariants each, all absorbed, {t:.2?}"))
}

fn connect_case(k: usize, ell: usize, max_size: usize) -> Result<usize, String> {
    let m = 3;
    let bound = reservoir_size_bound(k, m, 1.0).ceil() as usize;
    let ends = 2 * ell * m;
    let h = CompleteHypergraph { n: ends + bound, k };
    let pairs: Vec<(VertexSet, VertexSet)> = (0..m)
        .map(|i| {
            let base = 2 * ell * i;
            (VertexSet::new(base..base + ell), VertexSet::new(base + ell..base + 2 * ell))
        })
        .collect();
    let req = ConnectRequest { pairs, reservoir: VertexSet::new(ends..ends + bound), eta: 1.0 };
    let paths = connect_all(&h, ell, &req, &ConnectOptions::default()).map_err(|e| e.to_string())?;
    ensure(paths.len() == m, || format!("{} paths", paths.len()))?;
    for (p, (x, y)) in paths.iter().zip(&req.pairs) {
        ensure(validate_path(&h, p.seq(), ell).is_ok(), || "invalid path".into())?;
        ensure(p.size() <= max_size, || format!("size {} > {max_size}", p.size()))?;
        let e = p.ends().map_err(|e| e.to_string())?;
        ensure(&e.head == x && &e.tail == y, || format!("ends {:?} for pair {x};{y}", e))?;
        for w in p.edges().windows(2) {
            let common = w[0].iter().filter(|v| w[1].contains(v)).count();
            ensure(common == ell, || format!("consecutive edges share {common} vertices"))?;
        }
    }
    for (a, b) in paths.iter().tuple_combinations() {
        ensure(a.vertex_set().is_disjoint(&b.vertex_set()), || "paths intersect".into())?;
    }
    Ok(bound)
}

fn connecting_gadget() -> Verdict {
    let r5 = connect_case(5, 2, 4)?;
    let r6 = connect_case(6, 2, 1)?;
    Ok(format!("(5,2): 3 disjoint paths of size <= 4 with |R| = {r5}; (6,2): single edges with |R| = {r6}"))
}

fn building_blocks() -> Verdict {
    let g = Hypergraph::complete(4, 4).map_err(|e| e.to_string())?;
    let e = [0, 1, 2, 3];
    let skewed = building_block(&g, &e, 1, &r(1, 1), BlockVariant::Skewed).map_err(|e| e.to_string())?;
    tiling_validate(&g, &skewed).map_err(|v| v.to_string())?;
    let w = skewed.vertex_weights(4);
    ensure(w == vec![r(1, 1), r(1, 1), r(1, 2), r(1, 2)], || format!("skewed weights {w:?}"))?;
    let even = building_block(&g, &e, 1, &r(1, 1), BlockVariant::Even).map_err(|e| e.to_string())?;
    tiling_validate(&g, &even).map_err(|v| v.to_string())?;
    let w = even.vertex_weights(4);
    ensure(w.iter().all(|x| *x == r(1, 1)), || format!("even weights {w:?}"))?;
    ensure(even.beta == r(1, 6), || format!("even beta {}", even.beta))?;
    Ok("skewed (1, 1, 1/2, 1/2); even all 1 at beta = 1/6".into())
}

fn tiling_optimizer() -> Verdict {
    let start = Instant::now();
    let g = Hypergraph::complete(8, 4).map_err(|e| e.to_string())?;
    let beta = r(1, 16);
    let out = max_tiling_lp(&g, 1, &beta, &LpTilingOptions::default()).map_err(|e| e.to_string())?;
    let checked = tiling_validate(&g, &out.tiling).map_err(|v| v.to_string())?;
    ensure(checked == out.rounded, || format!("validator weight {checked} != rounded {}", out.rounded))?;
    ensure(out.rounded >= r(6, 1), || format!("rounded {} < 0.75 t", out.rounded))?;
    let loss = r(8, 1) * beta * r(6, 1);
    ensure(out.fractional >= out.rounded && out.rounded >= out.fractional - loss, || {
        format!("fractional {} rounded {}", out.fractional, out.rounded)
    })?;
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!("fractional {} rounded {} (>= 6), {t:.2?}", out.fractional, out.rounded))
}

fn improvement_moves() -> Verdict {
    let mut parts = Vec::new();
    for (name, (g, h), kind) in [
        ("matching", common::matching_fixture(), MoveKind::Matching),
        ("four neighbours", common::four_neighbours_fixture(), MoveKind::FourNeighbours),
        ("weight shift", common::weight_shift_fixture(), MoveKind::WeightShift),
    ] {
        let out = ellcycle::tiling::improvement_moves(&g, &h, &MoveParams::default())
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("{name}: no move"))?;
        ensure(out.kind == kind, || format!("{name}: got {:?}", out.kind))?;
        let after = tiling_validate(&g, &out.tiling).map_err(|v| format!("{name}: {v}"))?;
        ensure(after == h.weight() + out.gain, || format!("{name}: weight {after}"))?;
        if kind != MoveKind::WeightShift {
            ensure(out.gain >= h.beta / 4, || format!("{name}: gain {} < beta/4", out.gain))?;
        } else {
            ensure(out.gain > r(0, 1), || format!("{name}: gain {}", out.gain))?;
        }
        parts.push(format!("{name} +{}", out.gain));
    }
    Ok(parts.join(", "))
}

fn regularity_suite() -> Verdict {
    // planted: density-1/2 tripartite graph on 8+8+8 with the 2x2x2 corner box emptied
    let classes: Vec<VertexSet> = (0..3).map(|i| VertexSet::new(8 * i..8 * i + 8)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let edges: Vec<Vec<usize>> = classes
        .iter()
        .map(|c| c.to_vec())
        .multi_cartesian_product()
        .filter(|e| !(e[0] < 2 && e[1] < 10 && e[2] < 18) && rng.gen_bool(0.5))
        .collect();
    let h = Hypergraph::new(24, 3, edges).map_err(|e| e.to_string())?;
    let eps = r(1, 4);
    let v = regularity_check(&h, &classes, &eps, RegMode::exhaustive()).map_err(|e| e.to_string())?;
    let RegVerdict::Irregular { density, witness, witness_density } = v else {
        return Err("planted fixture not detected".into());
    };
    let hits = witness.iter().map(|c| c.to_vec()).multi_cartesian_product().filter(|t| h.contains(t)).count();
    let size: usize = witness.iter().map(|c| c.len()).product();
    ensure(witness_density == r(hits as i64, size as i64), || "witness density does not recount".into())?;
    let gap = if witness_density > density { witness_density - density } else { density - witness_density };
    ensure(gap > eps, || "witness is not a violation".into())?;

    for seed in 0..20 {
        let g = random_mindeg(&RandomMinDegree { n: 12, k: 3, delta_fraction: 0.0, p: 0.5, seed }).unwrap().graph;
        let p = RegPartition::equitable(12, 4).unwrap();
        let lo = reduced(&g, &p, &r(1, 3), &r(1, 5), RegMode::exhaustive()).map_err(|e| e.to_string())?;
        let hi = reduced(&g, &p, &r(1, 3), &r(1, 2), RegMode::exhaustive()).map_err(|e| e.to_string())?;
        ensure(hi.graph.edges().iter().all(|e| lo.graph.contains_sorted(e)), || format!("seed {seed}: not monotone"))?;
    }

    let mut grid = 0;
    for (d, eps) in [(r(1, 10), r(1, 100)), (r(1, 5), r(1, 25)), (r(1, 4), r(1, 100))] {
        let t = (r(8, 1) / d).ceil().to_integer() as usize;
        let top = r(1, 1) - d * 2 - sqrt_scalar(&eps);
        for c in [top, top / 2, r(0, 1)] {
            let rep = inheritance_report(&CompleteHypergraph { n: t, k: 4 }, &c, &d, &eps).map_err(|e| e.to_string())?;
            ensure(rep.pass, || format!("inheritance fails at t={t} c={c} d={d} eps={eps}"))?;
            grid += 1;
        }
    }
    Ok(format!("planted witness verified (gap {gap}); monotone on 20 instances; inheritance passes on {grid} (c, d, eps)"))
}

fn pipeline_soundness() -> Verdict {
    let mut found = 0;
    let mut total = 0;
    let budget = Budget::nodes(3_000_000);
    for n in [6, 9, 12, 15] {
        for seed in 0..12u64 {
            let df = [0.0, 0.3, 0.6][(seed % 3) as usize];
            let p = [0.05, 0.2][(seed % 2) as usize];
            let h = random_mindeg(&RandomMinDegree { n, k: 4, delta_fraction: df, p, seed }).unwrap().graph;
            total += 1;
            let (w, _) = hamiltonian_cycle(&h, 1, &SolverOptions { budget, workers: 1 }).map_err(|e| e.to_string())?;
            if w.is_none() {
                continue;
            }
            found += 1;
            let rep = pipeline(&h, &PipelineParams { budget, ..PipelineParams::new(1) }).map_err(|e| e.to_string())?;
            let PipelineOutcome::Cycle { walk, .. } = &rep.outcome else {
                return Err(format!("n={n} seed={seed}: pipeline gave {:?}", rep.outcome));
            };
            ensure(walk.len() == n && validate_cycle(&h, walk.seq(), 1).is_ok(), || format!("n={n} seed={seed}: bad cycle"))?;
        }
    }
    let x = extremal_example(12, 4, 1).unwrap();
    let rep = pipeline(&x, &PipelineParams::new(1)).map_err(|e| e.to_string())?;
    ensure(rep.outcome.exit_code() == 3, || format!("H_(4,1)(12): exit {}", rep.outcome.exit_code()))?;
    Ok(format!("{found} of {total} corpus instances hamiltonian, all reproduced by the pipeline; H_(4,1)(12) exit 3"))
}

fn sweep_reproducibility() -> Verdict {
    let grid = SweepGrid::new(vec![9, 12], vec![4], vec![1], vec![0.0, 0.3, 1.0], (0..5).collect());
    let a = write_csv(&sweep(&grid, 1).map_err(|e| e.to_string())?.rows).map_err(|e| e.to_string())?;
    let res = sweep(&grid, 1).map_err(|e| e.to_string())?;
    let b = write_csv(&res.rows).map_err(|e| e.to_string())?;
    ensure(a.as_bytes() == b.as_bytes(), || "CSV bytes differ".into())?;
    for s in summarize(&res.rows) {
        let want = match s.group.as_str() {
            "control-complete" => Some(1.0),
            "control-extremal" => Some(0.0),
            _ => None,
        };
        if let Some(want) = want {
            ensure(s.fraction() == want, || format!("{} at n = {}: fraction {}", s.group, s.n, s.fraction()))?;
        }
    }
    let controls = res.rows.iter().filter(|r| !matches!(r.seed, RowSeed::Seed(_))).count();
    Ok(format!("{} bytes identical across runs; {controls} control rows at fractions 1.0 / 0.0", a.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("extremal certificates", extremal_certificates),
        ("oracle equivalence", oracle_equivalence),
        ("counting identities", counting_identities),
        ("absorber contract", absorber_contract),
        ("connecting gadget", connecting_gadget),
        ("building block weights", building_blocks),
        ("tiling optimizer", tiling_optimizer),
        ("improvement moves", improvement_moves),
        ("regularity suite", regularity_suite),
        ("pipeline soundness", pipeline_soundness),
        ("sweep reproducibility", sweep_reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use ellcycle::gen::{extremal_example, random_mindeg, RandomMinDegree};
use ellcycle::pipeline::{pipeline, PipelineOutcome, PipelineParams, Stage};
use ellcycle::solver::{hamiltonian_cycle, Budget, Outcome, SolverOptions};
use ellcycle::walks::validate_cycle;
use ellcycle::Hypergraph;

fn check_cycle(h: &Hypergraph, out: &PipelineOutcome) {
    let PipelineOutcome::Cycle { walk, .. } = out else { panic!("expected a cycle, got {out:?}") };
    assert_eq!(walk.len(), h.n());
    assert!(validate_cycle(h, walk.seq(), 1).is_ok());
}

#[test]
fn dense_random_fifteen() {
    let inst = random_mindeg(&RandomMinDegree { n: 15, k: 4, delta_fraction: 0.6, p: 0.1, seed: 4 }).unwrap();
    assert!(inst.achieved as f64 >= 0.6 * 105.0);
    let h = inst.graph;
    let (w, _) = hamiltonian_cycle(&h, 1, &SolverOptions { budget: Budget::nodes(5_000_000), workers: 1 }).unwrap();
    assert!(w.is_some());
    let rep = pipeline(&h, &PipelineParams::new(1)).unwrap();
    check_cycle(&h, &rep.outcome);
}

#[test]
fn constructive_stages_on_complete_graphs() {
    let h = Hypergraph::complete(15, 4).unwrap();
    let rep = pipeline(&h, &PipelineParams::new(1)).unwrap();
    check_cycle(&h, &rep.outcome);
    assert!(matches!(rep.outcome, PipelineOutcome::Cycle { via_fallback: false, .. }), "{:?}", rep.trace);
    // twelve vertices leave too few outside the absorbing path for a reservoir
    let h = Hypergraph::complete(12, 4).unwrap();
    let rep = pipeline(&h, &PipelineParams::new(1)).unwrap();
    check_cycle(&h, &rep.outcome);
    assert!(matches!(rep.outcome, PipelineOutcome::Cycle { via_fallback: true, .. }));
}

#[test]
fn extremal_without_fallback_names_a_stage() {
    let h = extremal_example(12, 4, 1).unwrap();
    let mut p = PipelineParams::new(1);
    p.fallback = false;
    let rep = pipeline(&h, &p).unwrap();
    assert_eq!(rep.outcome.exit_code(), 3);
    assert_eq!(rep.trace.first().map(|r| (r.stage, r.ok)), Some((Stage::Absorbers, false)));
    assert!(rep.trace.iter().all(|r| r.stage != Stage::Fallback));
}

#[test]
fn sparse_outcome_agrees_with_solver() {
    let inst = random_mindeg(&RandomMinDegree { n: 9, k: 4, delta_fraction: 0.0, p: 0.02, seed: 1 }).unwrap();
    let h = inst.graph;
    let mut p = PipelineParams::new(1);
    p.xi = ellcycle::Rational::new(1, 1_000_000);
    let rep = pipeline(&h, &p).unwrap();
    let solver = hamiltonian_cycle(&h, 1, &SolverOptions::default()).unwrap().1.outcome;
    match &rep.outcome {
        PipelineOutcome::Cycle { .. } => assert_eq!(solver, Outcome::Found),
        PipelineOutcome::Extremal(v) => assert_eq!(v.edges_inside, Some(0)),
        PipelineOutcome::Failure { .. } => assert_eq!(solver, Outcome::Exhausted),
        PipelineOutcome::Timeout => panic!("unexpected timeout"),
    }
    assert!(rep.to_json().contains("\"trace\""));
}

#[test]
fn tight_budget_times_out() {
    let h = random_mindeg(&RandomMinDegree { n: 15, k: 4, delta_fraction: 0.0, p: 0.05, seed: 2 }).unwrap().graph;
    let mut p = PipelineParams::new(1);
    p.budget = Budget::nodes(10);
    p.xi = ellcycle::Rational::new(1, 1_000_000);
    let rep = pipeline(&h, &p).unwrap();
    assert!(matches!(rep.outcome.exit_code(), 2 | 3), "{:?}", rep.outcome);
}

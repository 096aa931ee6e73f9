use ellcycle::gen::{
    extremal_example, extremal_set_size, extremality_check, random_mindeg, Extremal, ExtremalityMode, RandomMinDegree,
};
use ellcycle::scalar::binomial;
use ellcycle::solver::{hamiltonian_cycle, hamiltonian_cycle_oracle, Budget, Outcome, SolverOptions};
use ellcycle::walks::validate_cycle;
use ellcycle::{Hypergraph, Rational, UniformHypergraph};
use itertools::Itertools;
use proptest::prelude::*;

/// Every vertex order with vertex 0 inside the first block; cycles may only be
/// rotated by multiples of `k - ell`.
fn brute_cycle(h: &Hypergraph, ell: usize) -> bool {
    let (n, d) = (h.n(), h.k() - ell);
    (0..n).permutations(n).filter(|seq| seq.iter().position(|&v| v == 0).unwrap() < d).any(|seq| {
        validate_cycle(h, &seq, ell).is_ok()
    })
}

fn brute_extremal(h: &Hypergraph, ell: usize, xi: Rational) -> (bool, usize) {
    let (n, k) = (h.n(), h.k());
    let size = extremal_set_size(n, k, ell);
    let best = (0..n)
        .combinations(size)
        .map(|b| h.edges().iter().filter(|e| e.iter().all(|v| b.contains(v))).count())
        .min()
        .unwrap();
    (Rational::from_integer(best as i64) <= xi * Rational::from_integer(binomial(n, k) as i64), best)
}

#[test]
fn solver_matches_permutation_brute_force() {
    let mut seen = [0; 2];
    for seed in 0..40 {
        let n = if seed % 2 == 0 { 6 } else { 9 };
        let p = [0.05, 0.1, 0.2, 0.4][seed as usize % 4];
        let h = random_mindeg(&RandomMinDegree { n, k: 4, delta_fraction: 0.0, p, seed }).unwrap().graph;
        let (w, stats) = hamiltonian_cycle(&h, 1, &SolverOptions::default()).unwrap();
        let truth = brute_cycle(&h, 1);
        assert_eq!(w.is_some(), truth, "seed {seed}");
        assert_eq!(stats.outcome, if truth { Outcome::Found } else { Outcome::Exhausted });
        assert_eq!(hamiltonian_cycle_oracle(&h, 1).unwrap(), truth);
        seen[truth as usize] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn extremal_examples_have_no_cycle() {
    for (k, ell) in [(4, 1), (5, 1), (5, 2), (6, 1)] {
        for n in (k..=12).filter(|n| n % (k - ell) == 0) {
            let h = extremal_example(n, k, ell).unwrap();
            let (w, stats) = hamiltonian_cycle(&h, ell, &SolverOptions::default()).unwrap();
            assert!(w.is_none());
            assert_eq!(stats.outcome, Outcome::Exhausted);
            let want = (n as f64 / (2 * (k - ell)) as f64 - 1.0).ceil() as usize;
            assert_eq!(h.min_s_degree(k - 1).unwrap(), want, "n = {n}, k = {k}, ell = {ell}");
        }
    }
}

#[test]
fn extremality_matches_brute_force() {
    for seed in 0..15 {
        let n = 8 + seed as usize % 3;
        let h = random_mindeg(&RandomMinDegree { n, k: 4, delta_fraction: 0.0, p: 0.3, seed }).unwrap().graph;
        for xi in [Rational::new(1, 100), Rational::new(1, 20), Rational::new(1, 5)] {
            let v = extremality_check(&h, 1, &xi, ExtremalityMode::exhaustive()).unwrap();
            let (yes, best) = brute_extremal(&h, 1, xi);
            assert_eq!(v.extremal == Extremal::Yes, yes);
            assert_eq!(v.edges_inside, Some(best));
        }
    }
}

#[test]
fn extremal_twelve_is_extremal() {
    let h = extremal_example(12, 4, 1).unwrap();
    let v = extremality_check(&h, 1, &Rational::new(1, 5), ExtremalityMode::exhaustive()).unwrap();
    assert_eq!(v.extremal, Extremal::Yes);
    assert_eq!(v.edges_inside, Some(0));
    let complete = Hypergraph::complete(12, 4).unwrap();
    let v = extremality_check(&complete, 1, &Rational::new(1, 10), ExtremalityMode::exhaustive()).unwrap();
    assert_eq!(v.extremal, Extremal::No);
    assert_eq!(v.edges_inside, Some(210));
}

#[test]
fn adding_an_edge_keeps_a_cycle() {
    let mut checked = 0;
    for seed in 0..50u64 {
        let h = random_mindeg(&RandomMinDegree { n: 9, k: 4, delta_fraction: 0.0, p: 0.15, seed }).unwrap().graph;
        let missing: Vec<Vec<usize>> = (0..9).combinations(4).filter(|e| !h.contains(e)).collect();
        let Some(extra) = missing.get(seed as usize % missing.len().max(1)) else { continue };
        let bigger = Hypergraph::new(9, 4, h.edges().iter().cloned().chain([extra.clone()])).unwrap();
        let before = hamiltonian_cycle(&h, 1, &SolverOptions::default()).unwrap().1.outcome;
        let after = hamiltonian_cycle(&bigger, 1, &SolverOptions::default()).unwrap().1.outcome;
        if before == Outcome::Found {
            assert_eq!(after, Outcome::Found, "seed {seed}");
        }
        checked += 1;
    }
    assert_eq!(checked, 50);
}

#[test]
fn budget_gives_timeout_not_a_verdict() {
    let h = extremal_example(12, 4, 1).unwrap();
    let (w, stats) = hamiltonian_cycle(&h, 1, &SolverOptions { budget: Budget::nodes(3), workers: 1 }).unwrap();
    assert!(w.is_none());
    assert_eq!(stats.outcome, Outcome::Timeout);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn witnesses_are_spanning_cycles(seed in 0u64..10_000, p in 0.1f64..0.6) {
        let h = random_mindeg(&RandomMinDegree { n: 12, k: 4, delta_fraction: 0.0, p, seed }).unwrap().graph;
        let opts = SolverOptions { budget: Budget::nodes(2_000_000), workers: 2 };
        if let (Some(w), _) = hamiltonian_cycle(&h, 1, &opts).unwrap() {
            prop_assert_eq!(w.len(), 12);
            prop_assert!(validate_cycle(&h, w.seq(), 1).is_ok());
        }
    }

    #[test]
    fn generator_meets_its_target(seed in 0u64..10_000, df in 0.0f64..1.0) {
        let inst = random_mindeg(&RandomMinDegree { n: 10, k: 4, delta_fraction: df, p: 0.05, seed }).unwrap();
        prop_assert!(inst.achieved >= inst.target);
        let again = random_mindeg(&RandomMinDegree { n: 10, k: 4, delta_fraction: df, p: 0.05, seed }).unwrap();
        prop_assert_eq!(again.graph, inst.graph);
    }
}

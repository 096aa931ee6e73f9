//! Tuple densities, (ε, d)-regularity checks, reduced hypergraphs, degree
//! inheritance and greedy path covers of regular tuples.
//!
//! Partitions are inputs; nothing here constructs a regular partition.

use itertools::Itertools;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::hgraph::{Hypergraph, UniformHypergraph, Vertex, VertexSet};
use crate::scalar::{binomial_as, Scalar};
use crate::walks::{validate_path, EllWalk};

/// Exhaustive regularity checks scan `Π 2^{|V_i|}` sub-tuples; this caps `Σ |V_i|`.
pub const DEFAULT_REG_BUDGET: usize = 24;

/// Class index of every vertex, or `None` when the classes overlap or leave range.
fn class_of(n: usize, classes: &[VertexSet]) -> Result<Vec<Option<usize>>> {
    let mut owner = vec![None; n];
    for (i, c) in classes.iter().enumerate() {
        if c.is_empty() {
            return invalid(format!("class {i} is empty"));
        }
        c.check_range(n)?;
        for &v in c.iter() {
            if owner[v].replace(i).is_some() {
                return invalid(format!("vertex {v} lies in two classes"));
            }
        }
    }
    Ok(owner)
}

/// Edges with one vertex in each class, as tuples of positions inside the classes.
fn crossing_edges(h: &Hypergraph, classes: &[VertexSet]) -> Result<Vec<Vec<usize>>> {
    if classes.len() != h.k() {
        return invalid(format!("need {} classes, got {}", h.k(), classes.len()));
    }
    let owner = class_of(h.n(), classes)?;
    let pos: Vec<usize> = {
        let mut p = vec![0; h.n()];
        for c in classes {
            for (i, &v) in c.iter().enumerate() {
                p[v] = i;
            }
        }
        p
    };
    let mut out = Vec::new();
    for e in h.edges() {
        let mut tuple = vec![usize::MAX; classes.len()];
        let ok = e.iter().all(|&v| match owner[v] {
            Some(c) if tuple[c] == usize::MAX => {
                tuple[c] = pos[v];
                true
            }
            _ => false,
        });
        if ok {
            out.push(tuple);
        }
    }
    Ok(out)
}

fn product<T: Scalar>(sizes: impl IntoIterator<Item = usize>) -> T {
    sizes.into_iter().fold(T::one(), |acc, s| acc * T::from_count(s))
}

/// `e_H(V_1, ..., V_k) / (|V_1| ⋯ |V_k|)`.
pub fn tuple_density<T: Scalar>(h: &Hypergraph, classes: &[VertexSet]) -> Result<T> {
    let e = crossing_edges(h, classes)?.len();
    Ok(T::from_count(e) / product::<T>(classes.iter().map(|c| c.len())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegMode {
    /// Every sub-tuple; refused when `Σ |V_i|` exceeds `budget`.
    Exhaustive { budget: usize },
    /// `trials` random sub-tuples; can only certify irregularity.
    Sampled { seed: u64, trials: usize },
}

impl RegMode {
    pub fn exhaustive() -> Self {
        RegMode::Exhaustive { budget: DEFAULT_REG_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RegVerdict<T> {
    Regular { density: T },
    Irregular { density: T, witness: Vec<VertexSet>, witness_density: T },
    ProbablyRegular { density: T, trials: usize },
}

impl<T: Scalar> RegVerdict<T> {
    pub fn density(&self) -> &T {
        match self {
            RegVerdict::Regular { density }
            | RegVerdict::Irregular { density, .. }
            | RegVerdict::ProbablyRegular { density, .. } => density,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            RegVerdict::Regular { .. } => "regular",
            RegVerdict::Irregular { .. } => "irregular",
            RegVerdict::ProbablyRegular { .. } => "probably-regular",
        }
    }

    /// Regular, or not refuted by sampling.
    pub fn admits_edge(&self) -> bool {
        !matches!(self, RegVerdict::Irregular { .. })
    }
}

/// Smallest admissible `|A_i|`: `⌈ε |V_i|⌉`, at least 1.
fn min_sizes<T: Scalar>(classes: &[VertexSet], epsilon: &T) -> Vec<usize> {
    classes
        .iter()
        .map(|c| {
            let x = (epsilon.clone() * T::from_count(c.len())).ceil();
            (x.to_f64_lossy().round() as usize).max(1)
        })
        .collect()
}

struct Scan<'a, T> {
    dims: &'a [usize],
    mins: &'a [usize],
    d: T,
    d_f: f64,
    eps: T,
    eps_f: f64,
}

impl<T: Scalar> Scan<'_, T> {
    /// Violates `|e/P - d| <= ε`? The float test settles clear cases.
    fn violates(&self, count: u32, sizes: &[usize]) -> bool {
        let p: usize = sizes.iter().product();
        let dev = (count as f64 / p as f64 - self.d_f).abs();
        if dev < self.eps_f - 1e-9 {
            return false;
        }
        if dev > self.eps_f + 1e-9 {
            return true;
        }
        let exact = T::from_count(count as usize) / product::<T>(sizes.iter().copied()) - self.d.clone();
        exact.abs().definitely_gt(&self.eps)
    }

    /// Contracts the leading axis of `tensor` over every admissible subset.
    fn run(&self, level: usize, tensor: &[u32], masks: &mut Vec<u32>, sizes: &mut Vec<usize>) -> bool {
        if level == self.dims.len() {
            return self.violates(tensor[0], sizes);
        }
        let m = self.dims[level];
        let rest = tensor.len() / m;
        let mut sums = vec![0u32; rest << m];
        for mask in 1usize..1 << m {
            let low = mask.trailing_zeros() as usize;
            let prev = mask & (mask - 1);
            for j in 0..rest {
                sums[mask * rest + j] = sums[prev * rest + j] + tensor[low * rest + j];
            }
        }
        for mask in 1usize..1 << m {
            let size = mask.count_ones() as usize;
            if size < self.mins[level] {
                continue;
            }
            masks.push(mask as u32);
            sizes.push(size);
            if self.run(level + 1, &sums[mask * rest..(mask + 1) * rest], masks, sizes) {
                return true;
            }
            masks.pop();
            sizes.pop();
        }
        false
    }
}

/// Tests `|d_H(A_1, ..., A_k) - d| <= ε` for sub-tuples with `|A_i| >= ε|V_i|`,
/// where `d` is the density of the full tuple.
pub fn regularity_check<T: Scalar>(h: &Hypergraph, classes: &[VertexSet], epsilon: &T, mode: RegMode) -> Result<RegVerdict<T>> {
    if !epsilon.is_positive() || *epsilon > T::one() {
        return invalid(format!("epsilon = {epsilon} must lie in (0, 1]"));
    }
    let edges = crossing_edges(h, classes)?;
    let dims: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    let density = T::from_count(edges.len()) / product::<T>(dims.iter().copied());
    let mins = min_sizes(classes, epsilon);
    let witness_of = |masks: &[u32]| -> Vec<VertexSet> {
        classes
            .iter()
            .zip(masks)
            .map(|(c, &m)| VertexSet::new(c.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &v)| v)))
            .collect()
    };
    match mode {
        RegMode::Exhaustive { budget } => {
            let total: usize = dims.iter().sum();
            if total > budget || dims.iter().any(|&m| m > 31) {
                return Err(Error::CapExceeded { what: "sum of class sizes", got: total, cap: budget });
            }
            let mut tensor = vec![0u32; dims.iter().product()];
            for e in &edges {
                let idx = e.iter().zip(&dims).fold(0, |acc, (&x, &m)| acc * m + x);
                tensor[idx] += 1;
            }
            let scan = Scan {
                dims: &dims,
                mins: &mins,
                d: density.clone(),
                d_f: density.to_f64_lossy(),
                eps: epsilon.clone(),
                eps_f: epsilon.to_f64_lossy(),
            };
            let (mut masks, mut sizes) = (Vec::new(), Vec::new());
            if scan.run(0, &tensor, &mut masks, &mut sizes) {
                let witness = witness_of(&masks);
                let witness_density = tuple_density(h, &witness)?;
                Ok(RegVerdict::Irregular { density, witness, witness_density })
            } else {
                Ok(RegVerdict::Regular { density })
            }
        }
        RegMode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let masks: Vec<u32> = dims
                    .iter()
                    .zip(&mins)
                    .map(|(&m, &lo)| {
                        let size = rng.gen_range(lo.min(m)..=m);
                        sample(&mut rng, m, size).iter().fold(0u32, |acc, i| acc | 1 << i)
                    })
                    .collect();
                let count = edges.iter().filter(|e| e.iter().zip(&masks).all(|(&x, &m)| m >> x & 1 == 1)).count();
                let sizes: Vec<usize> = masks.iter().map(|m| m.count_ones() as usize).collect();
                let dev = T::from_count(count) / product::<T>(sizes) - density.clone();
                if dev.abs().definitely_gt(epsilon) {
                    let witness = witness_of(&masks);
                    let witness_density = tuple_density(h, &witness)?;
                    return Ok(RegVerdict::Irregular { density, witness, witness_density });
                }
            }
            Ok(RegVerdict::ProbablyRegular { density, trials })
        }
    }
}

/// Classes `V_1..V_t` of equal size `m`; `V_0` is everything else.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegPartition {
    pub n: usize,
    pub classes: Vec<VertexSet>,
    pub exceptional: VertexSet,
}

impl RegPartition {
    pub fn new(n: usize, classes: Vec<VertexSet>) -> Result<Self> {
        let owner = class_of(n, &classes)?;
        if let Some(m) = classes.first().map(|c| c.len()) {
            if let Some((i, c)) = classes.iter().enumerate().find(|(_, c)| c.len() != m) {
                return invalid(format!("class {} has {} vertices, class 1 has {m}", i + 1, c.len()));
            }
        }
        let exceptional = VertexSet::new((0..n).filter(|&v| owner[v].is_none()));
        Ok(RegPartition { n, classes, exceptional })
    }

    /// `t` consecutive blocks of `⌊n/t⌋` vertices; the remainder goes to `V_0`.
    pub fn equitable(n: usize, t: usize) -> Result<Self> {
        if t == 0 || t > n {
            return invalid(format!("need 1 <= t <= n, got t = {t}, n = {n}"));
        }
        let m = n / t;
        Self::new(n, (0..t).map(|i| VertexSet::new(i * m..(i + 1) * m)).collect())
    }

    pub fn t(&self) -> usize {
        self.classes.len()
    }

    pub fn m(&self) -> usize {
        self.classes.first().map_or(0, |c| c.len())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TupleAnnotation {
    pub tuple: Vec<usize>,
    pub density: f64,
    pub verdict: &'static str,
    pub edge: bool,
}

#[derive(Clone, Debug)]
pub struct ReducedHypergraph<T> {
    pub graph: Hypergraph,
    pub epsilon: T,
    pub d: T,
    pub annotations: Vec<TupleAnnotation>,
    /// Exact verdict per tuple, aligned with `annotations`.
    pub verdicts: Vec<RegVerdict<T>>,
}

/// `{i_1, ..., i_k}` is an edge iff the class tuple (in increasing index
/// order) is not found irregular and its density is at least `d`.
pub fn reduced<T: Scalar>(h: &Hypergraph, p: &RegPartition, epsilon: &T, d: &T, mode: RegMode) -> Result<ReducedHypergraph<T>> {
    let k = h.k();
    if p.n != h.n() {
        return invalid(format!("partition is for n = {}, hypergraph has n = {}", p.n, h.n()));
    }
    if !d.is_positive() {
        return invalid(format!("d = {d} must be positive"));
    }
    let tuples: Vec<Vec<usize>> = (0..p.t()).combinations(k).collect();
    let verdicts: Vec<RegVerdict<T>> = tuples
        .par_iter()
        .map(|tup| {
            let classes: Vec<VertexSet> = tup.iter().map(|&i| p.classes[i].clone()).collect();
            regularity_check(h, &classes, epsilon, mode)
        })
        .collect::<Result<_>>()?;
    let mut edges = Vec::new();
    let mut annotations = Vec::new();
    for (tup, v) in tuples.iter().zip(&verdicts) {
        let edge = v.admits_edge() && v.density() >= d;
        if edge {
            edges.push(tup.clone());
        }
        annotations.push(TupleAnnotation {
            tuple: tup.clone(),
            density: v.density().to_f64_lossy(),
            verdict: v.label(),
            edge,
        });
    }
    let graph = Hypergraph::new(p.t(), k, edges)?;
    Ok(ReducedHypergraph { graph, epsilon: epsilon.clone(), d: d.clone(), annotations, verdicts })
}

/// `√x`, exact when `x` is the square of a fraction with denominator dividing 10⁶.
pub fn sqrt_scalar<T: Scalar>(x: &T) -> T {
    let f = x.to_f64_lossy().max(0.0).sqrt();
    let guess = T::from_ratio((f * 1e6).round() as i64, 1_000_000);
    if (guess.clone() * guess.clone()).approx_eq(x) {
        return guess;
    }
    T::from_f64(f).unwrap_or(guess)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InheritanceReport {
    pub t: usize,
    pub violators: usize,
    /// `√ε · C(t, k-2)`.
    pub allowed: f64,
    /// `(c - 2d - √ε) · C(t, 2)`.
    pub threshold: f64,
    pub pass: bool,
}

/// Counts `(k-2)`-sets `K` of the reduced hypergraph with
/// `deg(K) < (c - 2d - √ε) C(t, 2)` and compares with `√ε C(t, k-2)`.
pub fn inheritance_report<H, T>(r: &H, c: &T, d: &T, epsilon: &T) -> Result<InheritanceReport>
where
    H: UniformHypergraph + ?Sized,
    T: Scalar,
{
    let (t, k) = (r.order(), r.uniformity());
    if k < 3 {
        return invalid("degree inheritance needs k >= 3");
    }
    let root = sqrt_scalar(epsilon);
    let threshold = (c.clone() - T::from_count(2) * d.clone() - root.clone()) * binomial_as::<T>(t, 2);
    let allowed = root * binomial_as::<T>(t, k - 2);
    let ksets: Vec<Vec<Vertex>> = (0..t).combinations(k - 2).collect();
    let violators = ksets
        .par_iter()
        .filter(|kset| {
            let mut e = kset.to_vec();
            e.extend([0, 0]);
            let mut deg = 0usize;
            for a in (0..t).filter(|v| !kset.contains(v)) {
                for b in (a + 1..t).filter(|v| !kset.contains(v)) {
                    e[k - 2] = a;
                    e[k - 1] = b;
                    deg += r.contains(&e) as usize;
                }
            }
            T::from_count(deg) < threshold
        })
        .count();
    Ok(InheritanceReport {
        t,
        violators,
        allowed: allowed.to_f64_lossy(),
        threshold: threshold.to_f64_lossy(),
        pass: T::from_count(violators).approx_le(&allowed),
    })
}

#[derive(Clone, Debug)]
pub struct PathCover {
    pub paths: Vec<EllWalk>,
    pub uncovered: VertexSet,
    /// `2k / ((d-ε)ε)`.
    pub path_bound: f64,
    /// `2kεm`.
    pub uncovered_bound: f64,
    /// The tuple was checked regular with density at least `d`.
    pub hypothesis_verified: bool,
    /// Present only when the hypothesis was verified.
    pub bounds_hold: Option<bool>,
}

/// Greedy cover of a tuple `(V_1, ..., V_k)` with `|V_i| = m` for `i <= 2ℓ`
/// and `|V_i| = 2m` otherwise by vertex-disjoint ℓ-paths.
///
/// Consecutive overlaps alternate between the classes `V_1..V_ℓ` and
/// `V_{ℓ+1}..V_{2ℓ}`; the `k-2ℓ` private vertices of each edge come from the
/// large classes. Each path is extended as far as possible before the next
/// one starts; choices are lexicographic.
pub fn cover_regular_tuple<T: Scalar>(
    h: &Hypergraph,
    classes: &[VertexSet],
    ell: usize,
    epsilon: &T,
    d: &T,
    verify: Option<RegMode>,
) -> Result<PathCover> {
    let k = h.k();
    crate::error::check_loose(k, ell)?;
    if classes.len() != k {
        return invalid(format!("need {k} classes, got {}", classes.len()));
    }
    class_of(h.n(), classes)?;
    let m = classes[0].len();
    for (i, c) in classes.iter().enumerate() {
        let want = if i < 2 * ell { m } else { 2 * m };
        if c.len() != want {
            return invalid(format!("class {} has {} vertices, the pattern needs {want}", i + 1, c.len()));
        }
    }
    let hypothesis_verified = match verify {
        Some(mode) => match regularity_check(h, classes, epsilon, mode)? {
            RegVerdict::Regular { density } => density >= *d,
            _ => false,
        },
        None => false,
    };

    let mut used = vec![false; h.n()];
    let mut paths = Vec::new();
    let group_a: Vec<&VertexSet> = classes[..ell].iter().collect();
    let group_b: Vec<&VertexSet> = classes[ell..2 * ell].iter().collect();
    let large: Vec<&VertexSet> = classes[2 * ell..].iter().collect();
    loop {
        // first edge: A-block, private block, B-block
        let mut pattern: Vec<&VertexSet> = group_a.clone();
        pattern.extend(&large);
        pattern.extend(&group_b);
        let Some(first) = pick(h, &[], &pattern, &used) else {
            break;
        };
        let mut seq = first;
        for &v in &seq {
            used[v] = true;
        }
        let mut next_is_a = true;
        loop {
            let tail = seq[seq.len() - ell..].to_vec();
            let mut pattern: Vec<&VertexSet> = large.clone();
            pattern.extend(if next_is_a { &group_a } else { &group_b });
            let Some(ext) = pick(h, &tail, &pattern, &used) else {
                break;
            };
            for &v in &ext[ell..] {
                used[v] = true;
            }
            seq.extend_from_slice(&ext[ell..]);
            next_is_a = !next_is_a;
        }
        let walk = validate_path(h, &seq, ell).map_err(|v| Error::Unreachable(format!("cover produced a bad path: {v}")))?;
        paths.push(walk);
    }
    let uncovered = VertexSet::new(classes.iter().flat_map(|c| c.iter().copied()).filter(|&v| !used[v]));
    let kf = k as f64;
    let (e, df) = (epsilon.to_f64_lossy(), d.to_f64_lossy());
    let path_bound = 2.0 * kf / ((df - e) * e);
    let uncovered_bound = 2.0 * kf * e * m as f64;
    let bounds_hold = hypothesis_verified
        .then(|| paths.len() as f64 <= path_bound && uncovered.len() as f64 <= uncovered_bound);
    Ok(PathCover { paths, uncovered, path_bound, uncovered_bound, hypothesis_verified, bounds_hold })
}

/// Lexicographically first choice of one unused vertex per class in `pattern`
/// such that `prefix` followed by the choice is an edge. Returns the full edge
/// in sequence order.
fn pick(h: &Hypergraph, prefix: &[Vertex], pattern: &[&VertexSet], used: &[bool]) -> Option<Vec<Vertex>> {
    fn go(h: &Hypergraph, cur: &mut Vec<Vertex>, pattern: &[&VertexSet], used: &[bool]) -> bool {
        let depth = cur.len() - (h.k() - pattern.len());
        if depth == pattern.len() {
            return h.contains(cur);
        }
        for &v in pattern[depth].iter() {
            if used[v] || cur.contains(&v) {
                continue;
            }
            cur.push(v);
            if go(h, cur, pattern, used) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = prefix.to_vec();
    go(h, &mut cur, pattern, used).then_some(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn singletons(vs: &[Vertex]) -> Vec<VertexSet> {
        vs.iter().map(|&v| VertexSet::new([v])).collect()
    }

    #[test]
    fn single_edge_density() {
        let h = Hypergraph::new(5, 4, vec![vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(tuple_density::<Rational>(&h, &singletons(&[0, 1, 2, 3])).unwrap(), r(1, 1));
        assert_eq!(tuple_density::<Rational>(&h, &singletons(&[0, 1, 2, 4])).unwrap(), r(0, 1));
        let overlapping = vec![VertexSet::new([0, 1]), VertexSet::new([1]), VertexSet::new([2]), VertexSet::new([3])];
        assert!(tuple_density::<Rational>(&h, &overlapping).is_err());
    }

    #[test]
    fn complete_and_empty_are_regular() {
        let classes: Vec<VertexSet> = (0..3).map(|i| VertexSet::new(i * 4..i * 4 + 4)).collect();
        let full = Hypergraph::complete(12, 3).unwrap();
        let v = regularity_check(&full, &classes, &r(1, 4), RegMode::exhaustive()).unwrap();
        assert_eq!(v, RegVerdict::Regular { density: r(1, 1) });
        let none = Hypergraph::empty(12, 3).unwrap();
        let v = regularity_check(&none, &classes, &r(1, 4), RegMode::exhaustive()).unwrap();
        assert_eq!(v, RegVerdict::Regular { density: r(0, 1) });
    }

    #[test]
    fn budget_enforced() {
        let classes: Vec<VertexSet> = (0..3).map(|i| VertexSet::new(i * 9..i * 9 + 9)).collect();
        let full = Hypergraph::complete(27, 3).unwrap();
        assert!(regularity_check(&full, &classes, &r(1, 4), RegMode::exhaustive()).is_err());
    }

    #[test]
    fn planted_two_block_reduced() {
        // classes of 2; dense on classes 0..4, nothing else
        let p = RegPartition::equitable(12, 6).unwrap();
        let edges = (0..8).combinations(4).filter(|e| e.iter().map(|v| v / 2).all_unique());
        let h = Hypergraph::new(12, 4, edges).unwrap();
        let red = reduced(&h, &p, &r(1, 4), &r(1, 2), RegMode::exhaustive()).unwrap();
        assert_eq!(red.graph.edges(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn inheritance_on_complete() {
        // deg(K) = C(6, 2) = 15 against (0.9 - 0.2 - 0.1)·28 = 16.8
        let r8 = Hypergraph::complete(8, 4).unwrap();
        let rep = inheritance_report(&r8, &r(9, 10), &r(1, 10), &r(1, 100)).unwrap();
        assert_eq!(rep.violators, 28);
        assert!(!rep.pass);
        let rep = inheritance_report(&r8, &r(1, 2), &r(1, 10), &r(1, 100)).unwrap();
        assert_eq!(rep.violators, 0);
        assert!(rep.pass);
        let e8 = Hypergraph::empty(8, 4).unwrap();
        let rep = inheritance_report(&e8, &r(9, 10), &r(1, 10), &r(1, 100)).unwrap();
        assert_eq!(rep.violators, 28);
        assert!(!rep.pass);
    }

    #[test]
    fn sqrt_is_exact_on_squares() {
        assert_eq!(sqrt_scalar(&r(1, 100)), r(1, 10));
        assert_eq!(sqrt_scalar(&r(9, 4)), r(3, 2));
    }

    #[test]
    fn cover_complete_tuple() {
        // k = 4, ℓ = 1, m = 4: classes of sizes 4, 4, 8, 8
        let sizes = [4, 4, 8, 8];
        let mut start = 0;
        let classes: Vec<VertexSet> = sizes
            .iter()
            .map(|&s| {
                let c = VertexSet::new(start..start + s);
                start += s;
                c
            })
            .collect();
        let owner: Vec<usize> = (0..24).map(|v| classes.iter().position(|c| c.contains(v)).unwrap()).collect();
        let edges = (0..24).combinations(4).filter(|e| e.iter().map(|&v| owner[v]).all_unique());
        let h = Hypergraph::new(24, 4, edges).unwrap();
        let cover = cover_regular_tuple(&h, &classes, 1, &r(1, 4), &r(1, 2), None).unwrap();
        assert_eq!(cover.paths.len(), 1);
        assert!(cover.uncovered.len() < 4);
        assert_eq!(cover.bounds_hold, None);
    }

    #[test]
    fn cover_empty() {
        let classes = vec![VertexSet::new([0, 1]), VertexSet::new([2, 3, 4, 5]), VertexSet::new([6, 7, 8, 9])];
        let bad = cover_regular_tuple(&Hypergraph::empty(10, 3).unwrap(), &classes, 1, &r(1, 4), &r(1, 2), None);
        assert!(bad.is_err());
        let classes = vec![VertexSet::new([0, 1]), VertexSet::new([2, 3]), VertexSet::new([4, 5, 6, 7])];
        let cover = cover_regular_tuple(&Hypergraph::empty(8, 3).unwrap(), &classes, 1, &r(1, 4), &r(1, 2), None).unwrap();
        assert!(cover.paths.is_empty());
        assert_eq!(cover.uncovered.len(), 8);
    }
}

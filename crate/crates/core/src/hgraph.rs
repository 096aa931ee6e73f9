//! k-uniform hypergraphs on the vertex set `0..n`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Deref;
use std::sync::OnceLock;

use itertools::Itertools;
use serde::Serialize;

use crate::bits::{self, Mask};
use crate::error::{Error, Result};
use crate::scalar::binomial;

pub type Vertex = usize;

/// Sorted, duplicate-free set of vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new(vs: impl IntoIterator<Item = Vertex>) -> Self {
        let mut v: Vec<Vertex> = vs.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    /// Like [`VertexSet::new`] but rejects repeated vertices.
    pub fn try_new(vs: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut v: Vec<Vertex> = vs.into_iter().collect();
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidQuery(format!("vertex {} listed twice", w[0])));
        }
        Ok(VertexSet(v))
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| !other.contains(v))
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }

    pub fn mask(&self) -> Mask {
        bits::mask_of(&self.0)
    }
}

impl Deref for VertexSet {
    type Target = [Vertex];
    fn deref(&self) -> &[Vertex] {
        &self.0
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(v: Vec<Vertex>) -> Self {
        VertexSet::new(v)
    }
}

impl<const N: usize> From<[Vertex; N]> for VertexSet {
    fn from(v: [Vertex; N]) -> Self {
        VertexSet::new(v)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a Vertex;
    type IntoIter = std::slice::Iter<'a, Vertex>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// Membership oracle for a k-uniform hypergraph on `0..order()`.
///
/// Search routines that only ever ask "is this k-set an edge?" are written
/// against this trait, so they also run on implicit hypergraphs whose edge
/// sets are too large to store.
pub trait UniformHypergraph: Sync {
    fn order(&self) -> usize;

    fn uniformity(&self) -> usize;

    /// `edge` must be strictly increasing.
    fn contains_sorted(&self, edge: &[Vertex]) -> bool;

    /// Accepts any order; repeated vertices or wrong arity give `false`.
    fn contains(&self, vertices: &[Vertex]) -> bool {
        if vertices.len() != self.uniformity() {
            return false;
        }
        let mut e = vertices.to_vec();
        e.sort_unstable();
        if e.windows(2).any(|w| w[0] == w[1]) || e.last().is_some_and(|&v| v >= self.order()) {
            return false;
        }
        self.contains_sorted(&e)
    }
}

#[derive(Clone, Debug)]
enum EdgeIndex {
    Masks(HashSet<Mask>),
    Lists(HashSet<Vec<Vertex>>),
}

/// Explicitly stored k-uniform hypergraph. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<Vertex>>,
    index: EdgeIndex,
    links: OnceLock<HashMap<Vec<Vertex>, Vec<(Vertex, Vertex)>>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl Hypergraph {
    /// Builds a hypergraph, rejecting edges of the wrong arity, repeated
    /// vertices, out-of-range ids and duplicate edges.
    pub fn new(n: usize, k: usize, edges: impl IntoIterator<Item = Vec<Vertex>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameters(format!("uniformity must be at least 2, got {k}")));
        }
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for mut e in edges {
            e.sort_unstable();
            check_edge(&e, n, k)?;
            if !seen.insert(e.clone()) {
                return Err(Error::InvalidQuery(format!("duplicate edge {e:?}")));
            }
            list.push(e);
        }
        Ok(Self::from_checked(n, k, list))
    }

    /// `edges` must already be valid, sorted and duplicate-free as sets.
    pub(crate) fn from_checked(n: usize, k: usize, mut edges: Vec<Vec<Vertex>>) -> Self {
        edges.sort_unstable();
        let index = if n <= bits::MAX_BITS {
            EdgeIndex::Masks(edges.iter().map(|e| bits::mask_of(e)).collect())
        } else {
            EdgeIndex::Lists(edges.iter().cloned().collect())
        };
        Hypergraph { n, k, edges, index, links: OnceLock::new() }
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, std::iter::empty())
    }

    pub fn complete(n: usize, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameters(format!("uniformity must be at least 2, got {k}")));
        }
        Ok(Self::from_checked(n, k, (0..n).combinations(k).collect()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted vertex lists, in lexicographic order.
    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn edge_masks(&self) -> Option<Vec<Mask>> {
        (self.n <= bits::MAX_BITS).then(|| self.edges.iter().map(|e| bits::mask_of(e)).collect())
    }

    pub fn contains_mask(&self, m: Mask) -> bool {
        match &self.index {
            EdgeIndex::Masks(set) => set.contains(&m),
            EdgeIndex::Lists(_) => false,
        }
    }

    fn check_query(&self, s: &VertexSet) -> Result<()> {
        s.check_range(self.n)?;
        if s.len() > self.k {
            return Err(Error::InvalidQuery(format!(
                "query set of size {} exceeds uniformity {}",
                s.len(),
                self.k
            )));
        }
        Ok(())
    }

    /// Number of edges containing `s`.
    pub fn degree(&self, s: &VertexSet) -> Result<usize> {
        self.check_query(s)?;
        if s.len() + 2 == self.k {
            return Ok(self.link_pairs(s).len());
        }
        Ok(self.edges.iter().filter(|e| is_sorted_subset(s, e)).count())
    }

    /// All `(k-|s|)`-sets `T` disjoint from `s` with `s ∪ T` an edge.
    pub fn neighborhood(&self, s: &VertexSet) -> Result<Vec<VertexSet>> {
        self.check_query(s)?;
        let mut out: Vec<VertexSet> = self
            .edges
            .iter()
            .filter(|e| is_sorted_subset(s, e))
            .map(|e| VertexSet(e.iter().copied().filter(|&v| !s.contains(v)).collect()))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Minimum of `degree(S)` over all `s`-subsets `S` of the vertex set.
    pub fn min_s_degree(&self, s: usize) -> Result<usize> {
        if s > self.k || s > self.n {
            return Err(Error::InvalidQuery(format!(
                "s = {s} exceeds k = {} or n = {}",
                self.k, self.n
            )));
        }
        if s == 0 {
            return Ok(self.edges.len());
        }
        let table = self.degree_table(s);
        if (table.len() as u128) < binomial(self.n, s) {
            return Ok(0);
        }
        Ok(table.values().copied().min().unwrap_or(0))
    }

    /// Map from each `s`-set contained in some edge to its degree.
    pub fn degree_table(&self, s: usize) -> HashMap<Vec<Vertex>, usize> {
        let mut table = HashMap::new();
        for e in &self.edges {
            for sub in e.iter().copied().combinations(s) {
                *table.entry(sub).or_insert(0) += 1;
            }
        }
        table
    }

    /// Subhypergraph induced by `b`, relabelled to `0..|b|` in increasing order.
    pub fn induced(&self, b: &VertexSet) -> Result<Hypergraph> {
        b.check_range(self.n)?;
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in b.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| pos[v] != usize::MAX))
            .map(|e| e.iter().map(|&v| pos[v]).collect())
            .collect();
        Ok(Self::from_checked(b.len(), self.k, edges))
    }

    /// Pairs `{a, b}` (with `a < b`) such that `kset ∪ {a, b}` is an edge.
    /// `kset` must be a sorted `(k-2)`-set.
    pub fn link_pairs(&self, kset: &[Vertex]) -> &[(Vertex, Vertex)] {
        let links = self.links.get_or_init(|| {
            let mut map: HashMap<Vec<Vertex>, Vec<(Vertex, Vertex)>> = HashMap::new();
            for e in &self.edges {
                for pair in e.iter().copied().combinations(2) {
                    let rest: Vec<Vertex> = e.iter().copied().filter(|v| !pair.contains(v)).collect();
                    map.entry(rest).or_default().push((pair[0], pair[1]));
                }
            }
            for v in map.values_mut() {
                v.sort_unstable();
            }
            map
        });
        links.get(kset).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                d[v] += 1;
            }
        }
        d
    }
}

impl UniformHypergraph for Hypergraph {
    fn order(&self) -> usize {
        self.n
    }

    fn uniformity(&self) -> usize {
        self.k
    }

    fn contains_sorted(&self, edge: &[Vertex]) -> bool {
        match &self.index {
            EdgeIndex::Masks(set) => {
                edge.len() == self.k && edge.iter().all(|&v| v < self.n) && set.contains(&bits::mask_of(edge))
            }
            EdgeIndex::Lists(set) => set.contains(edge),
        }
    }
}

fn check_edge(e: &[Vertex], n: usize, k: usize) -> Result<()> {
    if e.len() != k {
        return Err(Error::InvalidQuery(format!("edge {e:?} has {} vertices, expected {k}", e.len())));
    }
    if let Some(w) = e.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidQuery(format!("edge {e:?} repeats vertex {}", w[0])));
    }
    if let Some(&v) = e.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    Ok(())
}

fn is_sorted_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    let mut it = big.iter();
    small.iter().all(|v| it.any(|w| w == v))
}

/// The complete k-uniform hypergraph, stored implicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompleteHypergraph {
    pub n: usize,
    pub k: usize,
}

impl UniformHypergraph for CompleteHypergraph {
    fn order(&self) -> usize {
        self.n
    }

    fn uniformity(&self) -> usize {
        self.k
    }

    fn contains_sorted(&self, edge: &[Vertex]) -> bool {
        edge.len() == self.k && edge.last().is_some_and(|&v| v < self.n)
    }
}

/// Implicit binomial random hypergraph: each k-set is an edge with
/// probability `p`, decided by a seeded hash of the set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomHypergraph {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub seed: u64,
}

impl RandomHypergraph {
    fn hash(&self, edge: &[Vertex]) -> u64 {
        let mut h = self.seed ^ 0x9e37_79b9_7f4a_7c15;
        for &v in edge {
            h = mix(h ^ (v as u64).wrapping_mul(0xff51_afd7_ed55_8ccd));
        }
        h
    }

    /// Materialises the edge set (only sensible for small `n`).
    pub fn to_explicit(&self) -> Hypergraph {
        let edges = (0..self.n)
            .combinations(self.k)
            .filter(|e| self.contains_sorted(e))
            .collect();
        Hypergraph::from_checked(self.n, self.k, edges)
    }
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl UniformHypergraph for RandomHypergraph {
    fn order(&self) -> usize {
        self.n
    }

    fn uniformity(&self) -> usize {
        self.k
    }

    fn contains_sorted(&self, edge: &[Vertex]) -> bool {
        if edge.len() != self.k || edge.last().is_none_or(|&v| v >= self.n) {
            return false;
        }
        let threshold = (self.p.clamp(0.0, 1.0) * u64::MAX as f64) as u64;
        self.p >= 1.0 || self.hash(edge) < threshold
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_edge() -> Hypergraph {
        Hypergraph::new(6, 4, vec![vec![0, 1, 2, 3]]).unwrap()
    }

    #[test]
    fn degree_in_complete() {
        let h = Hypergraph::complete(6, 3).unwrap();
        assert_eq!(h.degree(&VertexSet::from([0, 1])).unwrap(), 4);
        assert_eq!(h.degree(&VertexSet::from([0, 1, 2])).unwrap(), 1);
        assert_eq!(h.degree(&VertexSet::empty()).unwrap(), 20);
        assert!(matches!(h.degree(&VertexSet::from([0, 1, 2, 3])), Err(Error::InvalidQuery(_))));
        assert!(matches!(h.degree(&VertexSet::from([9])), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn neighborhood_examples() {
        let h = Hypergraph::complete(5, 3).unwrap();
        let nb = h.neighborhood(&VertexSet::from([0, 1])).unwrap();
        assert_eq!(nb, vec![VertexSet::from([2]), VertexSet::from([3]), VertexSet::from([4])]);
        let nb = single_edge().neighborhood(&VertexSet::from([0, 1])).unwrap();
        assert_eq!(nb, vec![VertexSet::from([2, 3])]);
    }

    #[test]
    fn min_degree_complete() {
        let h = Hypergraph::complete(7, 4).unwrap();
        assert_eq!(h.min_s_degree(2).unwrap(), 10);
        assert_eq!(h.min_s_degree(0).unwrap(), 35);
        assert!(h.min_s_degree(5).is_err());
        assert_eq!(single_edge().min_s_degree(1).unwrap(), 0);
    }

    #[test]
    fn induced_relabels() {
        let h = Hypergraph::complete(6, 3).unwrap();
        let sub = h.induced(&VertexSet::from([0, 1, 2, 3])).unwrap();
        assert_eq!(sub.edge_count(), 4);
        assert_eq!(sub.n(), 4);
        let sub = single_edge().induced(&VertexSet::from([1, 2, 3, 5])).unwrap();
        assert_eq!(sub.edge_count(), 0);
        let sub = single_edge().induced(&VertexSet::from([0, 1, 2, 3, 4])).unwrap();
        assert_eq!(sub.edges(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn constructor_rejects_bad_edges() {
        assert!(Hypergraph::new(5, 3, vec![vec![0, 1]]).is_err());
        assert!(Hypergraph::new(5, 3, vec![vec![0, 1, 1]]).is_err());
        assert!(Hypergraph::new(5, 3, vec![vec![0, 1, 5]]).is_err());
        assert!(Hypergraph::new(5, 3, vec![vec![0, 1, 2], vec![2, 1, 0]]).is_err());
        assert!(Hypergraph::new(5, 1, Vec::<Vec<usize>>::new()).is_err());
    }

    #[test]
    fn link_pairs_match_degree_scan() {
        let h = Hypergraph::new(6, 4, vec![vec![0, 1, 2, 3], vec![0, 1, 4, 5], vec![1, 2, 3, 4]]).unwrap();
        assert_eq!(h.link_pairs(&[0, 1]), &[(2, 3), (4, 5)]);
        assert_eq!(h.link_pairs(&[0, 5]), &[(1, 4)]);
        assert!(h.link_pairs(&[3, 5]).is_empty());
    }

    #[test]
    fn implicit_graphs() {
        let c = CompleteHypergraph { n: 10, k: 4 };
        assert!(c.contains(&[9, 0, 3, 2]));
        assert!(!c.contains(&[0, 0, 3, 2]));
        assert!(!c.contains(&[0, 1, 3, 10]));
        let r = RandomHypergraph { n: 12, k: 3, p: 0.5, seed: 7 };
        let e = r.to_explicit();
        let frac = e.edge_count() as f64 / 220.0;
        assert!(frac > 0.3 && frac < 0.7, "{frac}");
        for edge in e.edges() {
            assert!(r.contains_sorted(edge));
        }
        let full = RandomHypergraph { p: 1.0, ..r }.to_explicit();
        assert_eq!(full.edge_count(), 220);
    }
}

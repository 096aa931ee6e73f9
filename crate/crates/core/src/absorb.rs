//! Three-edge absorbers for `(k-ℓ)`-sets and the absorption relation.
//!
//! An absorber for `S` is an ℓ-path `P = (e1, e2, e3)` together with a
//! four-edge ℓ-path `P' = (e1, f1, f2, e3)` on `V(P) ∪ S` with the same ends.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;

use crate::bits::{self, Mask};
use crate::error::{check_loose, Error, Result};
use crate::hgraph::{Hypergraph, UniformHypergraph, Vertex, VertexSet};
use crate::walks::{validate_path, EllWalk};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub s1_set: VertexSet,
    pub s2_set: VertexSet,
    pub s1: usize,
    pub s2: usize,
    pub s3: usize,
}

/// All admissible `(s1, s2, s3)` in increasing order of `s3`.
pub fn valid_splits(k: usize, ell: usize) -> Vec<(usize, usize, usize)> {
    if ell == 0 || 2 * ell >= k {
        return Vec::new();
    }
    let lo = (3 * ell).saturating_sub(k);
    (lo..ell)
        .map(|s3| {
            let total = k - ell + s3;
            (total.div_ceil(2), total / 2, s3)
        })
        .filter(|&(s1, s2, s3)| s2 >= ell && s3 <= s2 && s1 < k - ell)
        .collect()
}

fn split_with(s: &VertexSet, (s1, s2, s3): (usize, usize, usize)) -> Split {
    Split {
        s1_set: VertexSet::new(s[..s1].iter().copied()),
        s2_set: VertexSet::new(s[s1 - s3..s1 - s3 + s2].iter().copied()),
        s1,
        s2,
        s3,
    }
}

/// Overlapping split `S = S1 ∪ S2` with `|S1 ∩ S2|` as small as allowed.
pub fn split_target(s: &VertexSet, k: usize, ell: usize) -> Result<Split> {
    check_loose(k, ell)?;
    if s.len() != k - ell {
        return Err(Error::InvalidQuery(format!("target must have k - ell = {} vertices", k - ell)));
    }
    let sizes = *valid_splits(k, ell).first().expect("a split exists for 1 <= ell < k/2");
    Ok(split_with(s, sizes))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Absorber {
    pub target: VertexSet,
    pub split: Split,
    pub x: VertexSet,
    pub y: VertexSet,
    pub l1: VertexSet,
    pub l2: VertexSet,
    pub l1p: VertexSet,
    pub l2p: VertexSet,
    pub f: VertexSet,
    pub f1: VertexSet,
    pub f2: VertexSet,
    pub x1: Vertex,
    pub x2: Vertex,
    pub e1: VertexSet,
    pub e2: VertexSet,
    pub e3: VertexSet,
    pub f1_edge: VertexSet,
    pub f2_edge: VertexSet,
    pub p: EllWalk,
    pub p_prime: EllWalk,
}

impl Absorber {
    /// The ten structural conditions, each evaluated independently.
    pub fn invariant_checks(&self) -> [(&'static str, bool); 10] {
        let k = self.p.k();
        let ell = self.p.ell();
        let Split { s1, s2, s3, ref s1_set, ref s2_set } = self.split;
        let one = |v: Vertex| VertexSet::from([v]);
        let inter = s1_set.intersection(s2_set);
        let q = s1_set.intersection(s2_set).union(&self.f);
        [
            (
                "split constraints",
                s1 >= s2 && s2 + 1 >= s1 && (3 * ell).saturating_sub(k) <= s3 && s3 < ell && inter.len() == s3,
            ),
            ("size identity", s1 + s2 - s3 == k - ell && s1_set.union(s2_set) == self.target),
            ("|L1| = |L2| = ell", self.l1.len() == ell && self.l2.len() == ell),
            ("|F| = ell - s3 > 0", self.f.len() == ell - s3 && !self.f.is_empty()),
            ("|F1| = s2 - ell", self.f1.len() == s2 - ell),
            ("|F2| = s1 - ell", self.f2.len() == s1 - ell),
            (
                "path intersections",
                self.l1p.len() == ell - 1
                    && self.l2p.len() == ell - 1
                    && self.e1.intersection(&self.e2) == one(self.x1).union(&self.l1p)
                    && self.e2.intersection(&self.e3) == one(self.x2).union(&self.l2p),
            ),
            (
                "replacement intersections",
                self.e1.intersection(&self.f1_edge) == self.l1
                    && self.f1_edge.intersection(&self.f2_edge) == q
                    && q.len() == ell
                    && self.f2_edge.intersection(&self.e3) == self.l2,
            ),
            ("V(P') = V(P) + S", self.p_prime.vertex_set() == self.p.vertex_set().union(&self.target)),
            (
                "shared ends, |V(P)| = 3k - 2ell",
                self.p.ends().ok() == self.p_prime.ends().ok() && self.p.len() == 3 * k - 2 * ell,
            ),
        ]
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "target": self.target,
            "s1": self.split.s1_set,
            "s2": self.split.s2_set,
            "x": self.x, "y": self.y,
            "l1": self.l1, "l2": self.l2, "l1p": self.l1p, "l2p": self.l2p,
            "f": self.f, "f1": self.f1, "f2": self.f2,
            "x1": self.x1, "x2": self.x2,
            "p": self.p.seq(),
            "p_prime": self.p_prime.seq(),
        })
        .to_string()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AbsorberOptions {
    /// Intersection size `|S1 ∩ S2|`; the smallest admissible value by default.
    pub s3: Option<usize>,
    /// Upper bound on candidate sets examined; `None` means exhaustive.
    pub node_budget: Option<u64>,
}

struct Finder<'a, H: ?Sized> {
    h: &'a H,
    k: usize,
    ell: usize,
    nodes: u64,
    budget: Option<u64>,
}

impl<H: UniformHypergraph + ?Sized> Finder<'_, H> {
    fn spend(&mut self) -> bool {
        self.nodes += 1;
        self.budget.is_some_and(|b| self.nodes > b)
    }

    fn is_edge(&self, parts: &[&[Vertex]]) -> bool {
        let mut e: Vec<Vertex> = parts.iter().flat_map(|p| p.iter().copied()).collect();
        e.sort_unstable();
        self.h.contains_sorted(&e)
    }

    /// Lexicographically ordered `size`-subsets `Z` of `pool` with `base ∪ Z` an edge.
    fn completions<'p>(&'p self, base: &'p [Vertex], pool: &'p [Vertex], size: usize) -> impl Iterator<Item = Vec<Vertex>> + 'p {
        pool.iter().copied().combinations(size).filter(move |z| self.is_edge(&[base, z]))
    }
}

fn minus(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    a.iter().copied().filter(|v| !b.contains(v)).collect()
}

fn vs(a: &[Vertex]) -> VertexSet {
    VertexSet::new(a.iter().copied())
}

/// Constructs an absorber for `s` avoiding `forbidden`, scanning every choice
/// in lexicographic order. Returns `None` when the search space (or the
/// node budget, if one is set) is exhausted.
pub fn find_absorber<H: UniformHypergraph + ?Sized>(
    h: &H,
    s: &VertexSet,
    forbidden: &VertexSet,
    opts: &AbsorberOptions,
) -> Result<Option<Absorber>> {
    let (n, k) = (h.order(), h.uniformity());
    if s.len() >= k {
        return Err(Error::InvalidQuery("target must have fewer than k vertices".into()));
    }
    let ell = k - s.len();
    check_loose(k, ell)?;
    if k < 4 {
        return Err(Error::InvalidParameters("absorbers need k >= 4".into()));
    }
    s.check_range(n)?;
    forbidden.check_range(n)?;
    if !s.is_disjoint(forbidden) {
        return Err(Error::InvalidQuery("target meets the forbidden set".into()));
    }
    let sizes = match opts.s3 {
        None => valid_splits(k, ell)[0],
        Some(s3) => *valid_splits(k, ell)
            .iter()
            .find(|t| t.2 == s3)
            .ok_or_else(|| Error::InvalidParameters(format!("no admissible split with |S1 ∩ S2| = {s3}")))?,
    };
    let split = split_with(s, sizes);
    let (s1, _s2, s3) = sizes;
    let avail: Vec<Vertex> = (0..n).filter(|&v| !s.contains(v) && !forbidden.contains(v)).collect();
    if avail.len() < 3 * k - 2 * ell {
        return Ok(None);
    }
    let mut f = Finder { h, k, ell, nodes: 0, budget: opts.node_budget };
    Ok(search(&mut f, s, &split, &avail, s1, s3))
}

fn search<H: UniformHypergraph + ?Sized>(
    f: &mut Finder<'_, H>,
    s: &VertexSet,
    split: &Split,
    avail: &[Vertex],
    s1: usize,
    s3: usize,
) -> Option<Absorber> {
    let (k, ell) = (f.k, f.ell);
    let xs: Vec<Vec<Vertex>> = f.completions(split.s1_set.as_slice(), avail, k - s1).collect();
    for x in xs {
        for l1 in x.iter().copied().combinations(ell) {
            let x_rest = minus(&x, &l1);
            for ff in x_rest.iter().copied().combinations(ell - s3) {
                if f.spend() {
                    return None;
                }
                let f1 = minus(&x_rest, &ff);
                let pool_y = minus(avail, &x);
                let base_y: Vec<Vertex> = split.s2_set.iter().copied().chain(ff.iter().copied()).collect();
                let ys: Vec<Vec<Vertex>> = f.completions(&base_y, &pool_y, s1).collect();
                for y in ys {
                    for l2 in y.iter().copied().combinations(ell) {
                        let f2 = minus(&y, &l2);
                        for l1p in l1.iter().copied().combinations(ell - 1) {
                            for l2p in l2.iter().copied().combinations(ell - 1) {
                                if f.spend() {
                                    return None;
                                }
                                let core: Vec<Vertex> = [&l1p[..], &l2p, &ff, &f1, &f2].concat();
                                let pool_x: Vec<Vertex> = minus(&pool_y, &y);
                                let pairs: Vec<Vec<Vertex>> = f.completions(&core, &pool_x, 2).collect();
                                for pair in pairs {
                                    for (x1, x2) in [(pair[0], pair[1]), (pair[1], pair[0])] {
                                        let pool_e = minus(&pool_x, &pair);
                                        let base1: Vec<Vertex> = [&[x1][..], &l1].concat();
                                        let base3: Vec<Vertex> = [&[x2][..], &l2].concat();
                                        let n1s: Vec<Vec<Vertex>> = f.completions(&base1, &pool_e, k - ell - 1).collect();
                                        for n1 in n1s {
                                            if f.spend() {
                                                return None;
                                            }
                                            let pool3 = minus(&pool_e, &n1);
                                            let n3 = f.completions(&base3, &pool3, k - ell - 1).next();
                                            if let Some(n3) = n3 {
                                                let parts = Parts {
                                                    x: &x, y: &y, l1: &l1, l2: &l2, l1p: &l1p, l2p: &l2p,
                                                    f: &ff, f1: &f1, f2: &f2, x1, x2, n1: &n1, n3: &n3,
                                                };
                                                return Some(assemble(f.h, s, split, &parts, k, ell));
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

struct Parts<'a> {
    x: &'a [Vertex],
    y: &'a [Vertex],
    l1: &'a [Vertex],
    l2: &'a [Vertex],
    l1p: &'a [Vertex],
    l2p: &'a [Vertex],
    f: &'a [Vertex],
    f1: &'a [Vertex],
    f2: &'a [Vertex],
    x1: Vertex,
    x2: Vertex,
    n1: &'a [Vertex],
    n3: &'a [Vertex],
}

fn sorted(parts: &[&[Vertex]]) -> Vec<Vertex> {
    let mut v: Vec<Vertex> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    v.sort_unstable();
    v
}

fn assemble<H: UniformHypergraph + ?Sized>(
    h: &H,
    s: &VertexSet,
    split: &Split,
    p: &Parts<'_>,
    k: usize,
    ell: usize,
) -> Absorber {
    // the ends are the least ℓ-subsets of e1 \ ({x1} ∪ L1) and e3 \ ({x2} ∪ L2)
    let head = &p.n1[..ell];
    let tail = &p.n3[..ell];
    let n1_rest = &p.n1[ell..];
    let n3_rest = &p.n3[ell..];
    let l1_extra = minus(p.l1, p.l1p);
    let l2_extra = minus(p.l2, p.l2p);
    let s1_only = minus(&split.s1_set, &split.s2_set);
    let s2_only = minus(&split.s2_set, &split.s1_set);
    let shared = split.s1_set.intersection(&split.s2_set);

    let seq_p: Vec<Vertex> = [
        head.to_vec(),
        sorted(&[n1_rest, &l1_extra]),
        sorted(&[&[p.x1], p.l1p]),
        sorted(&[p.f, p.f1, p.f2]),
        sorted(&[&[p.x2], p.l2p]),
        sorted(&[n3_rest, &l2_extra]),
        tail.to_vec(),
    ]
    .concat();
    let seq_pp: Vec<Vertex> = [
        head.to_vec(),
        sorted(&[n1_rest, &[p.x1]]),
        p.l1.to_vec(),
        sorted(&[p.f1, &s1_only]),
        sorted(&[&shared, p.f]),
        sorted(&[&s2_only, p.f2]),
        p.l2.to_vec(),
        sorted(&[n3_rest, &[p.x2]]),
        tail.to_vec(),
    ]
    .concat();
    let walk_p = validate_path(h, &seq_p, ell).expect("absorber path P is valid by construction");
    let walk_pp = validate_path(h, &seq_pp, ell).expect("replacement path P' is valid by construction");
    debug_assert_eq!(walk_p.len(), 3 * k - 2 * ell);
    Absorber {
        target: s.clone(),
        split: split.clone(),
        x: vs(p.x),
        y: vs(p.y),
        l1: vs(p.l1),
        l2: vs(p.l2),
        l1p: vs(p.l1p),
        l2p: vs(p.l2p),
        f: vs(p.f),
        f1: vs(p.f1),
        f2: vs(p.f2),
        x1: p.x1,
        x2: p.x2,
        e1: vs(&sorted(&[&[p.x1], p.l1, p.n1])),
        e2: vs(&sorted(&[&[p.x1, p.x2], p.l1p, p.l2p, p.f, p.f1, p.f2])),
        e3: vs(&sorted(&[&[p.x2], p.l2, p.n3])),
        f1_edge: vs(&sorted(&[p.x, &split.s1_set])),
        f2_edge: vs(&sorted(&[&split.s2_set, p.f, p.y])),
        p: walk_p,
        p_prime: walk_pp,
    }
}

/// Search for an ℓ-path on exactly `vertices` whose sequence starts with
/// `head` and ends with `tail` (both ordered). Vertices are relabelled
/// locally, so at most 32 vertices are supported.
struct SpanningPath<'a, H: ?Sized> {
    h: &'a H,
    verts: Vec<Vertex>,
    k: usize,
    ell: usize,
    tail: u32,
    edge_cache: HashMap<u32, bool>,
    failed: HashSet<(u32, u32)>,
}

impl<H: UniformHypergraph + ?Sized> SpanningPath<'_, H> {
    fn is_edge(&mut self, m: u32) -> bool {
        if let Some(&b) = self.edge_cache.get(&m) {
            return b;
        }
        let e: Vec<Vertex> = (0..self.verts.len()).filter(|i| m >> i & 1 == 1).map(|i| self.verts[i]).collect();
        let b = self.h.contains_sorted(&e);
        self.edge_cache.insert(m, b);
        b
    }

    fn dfs(&mut self, frontier: u32, unused: u32, out: &mut Vec<u32>) -> bool {
        let free = self.k - 2 * self.ell;
        if unused.count_ones() as usize == free {
            if self.is_edge(frontier | unused | self.tail) {
                out.push(unused);
                return true;
            }
            return false;
        }
        if self.failed.contains(&(frontier, unused)) {
            return false;
        }
        let members: Vec<usize> = (0..32).filter(|i| unused >> i & 1 == 1).collect();
        for rest in members.iter().copied().combinations(self.k - self.ell) {
            let rest_mask = rest.iter().fold(0u32, |m, &i| m | 1 << i);
            if !self.is_edge(frontier | rest_mask) {
                continue;
            }
            for o in rest.iter().copied().combinations(self.ell) {
                let o_mask = o.iter().fold(0u32, |m, &i| m | 1 << i);
                let p_mask = rest_mask & !o_mask;
                out.push(p_mask);
                out.push(o_mask);
                if self.dfs(o_mask, unused & !rest_mask, out) {
                    return true;
                }
                out.truncate(out.len() - 2);
            }
        }
        self.failed.insert((frontier, unused));
        false
    }
}

fn spanning_path<H: UniformHypergraph + ?Sized>(
    h: &H,
    vertices: &VertexSet,
    head: &[Vertex],
    tail: &[Vertex],
    ell: usize,
) -> Option<Vec<Vertex>> {
    let k = h.uniformity();
    let verts = vertices.as_slice().to_vec();
    let local = |vs: &[Vertex]| vs.iter().fold(0u32, |m, v| m | 1 << verts.binary_search(v).expect("member"));
    let head_mask = local(head);
    let tail_mask = local(tail);
    let all = if verts.len() == 32 { u32::MAX } else { (1u32 << verts.len()) - 1 };
    let unused = all & !head_mask & !tail_mask;
    if (unused.count_ones() as usize) < k - 2 * ell {
        return None;
    }
    let mut sp = SpanningPath {
        h,
        verts: verts.clone(),
        k,
        ell,
        tail: tail_mask,
        edge_cache: HashMap::new(),
        failed: HashSet::new(),
    };
    let mut blocks = Vec::new();
    if !sp.dfs(head_mask, unused, &mut blocks) {
        return None;
    }
    let mut seq = head.to_vec();
    for b in blocks {
        seq.extend((0..verts.len()).filter(|i| b >> i & 1 == 1).map(|i| verts[i]));
    }
    seq.extend_from_slice(tail);
    Some(seq)
}

pub const ABSORBS_CAP: usize = 16;

/// Looks for an ℓ-path `Q` with `V(Q) = V(P) ∪ U` and the same ends as `P`.
/// The returned walk starts with `P`'s head and finishes with `P`'s tail in
/// the same order. Refused when `|V(P) ∪ U|` exceeds `cap`.
pub fn absorbs_check<H: UniformHypergraph + ?Sized>(
    h: &H,
    p: &EllWalk,
    u: &VertexSet,
    cap: usize,
) -> Result<Option<EllWalk>> {
    let (k, ell) = (p.k(), p.ell());
    if k != h.uniformity() {
        return Err(Error::InvalidQuery("walk and hypergraph disagree on k".into()));
    }
    if p.kind() != crate::walks::WalkKind::Path {
        return Err(Error::InvalidQuery("absorption is defined for paths".into()));
    }
    let vp = p.vertex_set();
    if !vp.is_disjoint(u) {
        return Err(Error::InvalidQuery("U meets V(P)".into()));
    }
    if u.len() % (k - ell) != 0 {
        return Err(Error::InvalidQuery(format!("|U| = {} is not a multiple of k - ell", u.len())));
    }
    u.check_range(h.order())?;
    let all = vp.union(u);
    let cap = cap.min(32);
    if all.len() > cap {
        return Err(Error::CapExceeded { what: "|V(P) ∪ U|", got: all.len(), cap });
    }
    if u.is_empty() {
        return Ok(Some(p.clone()));
    }
    if 2 * ell >= k {
        return Err(Error::InvalidParameters("absorption search needs ell < k/2".into()));
    }
    let seq = p.seq();
    let head = &seq[..ell];
    let tail = &seq[seq.len() - ell..];
    Ok(spanning_path(h, &all, head, tail, ell)
        .map(|q| validate_path(h, &q, ell).expect("spanning path search returned an invalid walk")))
}

pub const COUNT_CAP: usize = 13;

/// Number of ordered vertex sequences forming a 3-edge ℓ-path that absorbs `s`.
///
/// Paths are enumerated edge by edge as block structures
/// (head, middle, overlap, ..., tail); each structure stands for
/// `(ℓ!)^4 ((k-2ℓ)!)^3` orderings.
pub fn count_absorbers(h: &Hypergraph, s: &VertexSet, cap: usize) -> Result<u128> {
    let (n, k) = (h.n(), h.k());
    if n > cap {
        return Err(Error::CapExceeded { what: "n", got: n, cap });
    }
    if s.len() >= k {
        return Err(Error::InvalidQuery("target must have fewer than k vertices".into()));
    }
    let ell = k - s.len();
    check_loose(k, ell)?;
    s.check_range(n)?;
    let smask = s.mask();
    let masks = h.edge_masks().unwrap_or_default();
    let mut by_overlap: HashMap<Mask, Vec<Mask>> = HashMap::new();
    for &e in &masks {
        for o in bits::subsets_of_size(e, ell) {
            by_overlap.entry(o).or_default().push(e);
        }
    }
    let mut memo: HashMap<(Mask, Mask, Mask), bool> = HashMap::new();
    let mut structures: u128 = 0;
    for &e1 in masks.iter().filter(|&&e| e & smask == 0) {
        for head in bits::subsets_of_size(e1, ell) {
            for o1 in bits::subsets_of_size(e1 & !head, ell) {
                for &e2 in by_overlap.get(&o1).into_iter().flatten() {
                    if (e2 & !o1) & (smask | e1) != 0 {
                        continue;
                    }
                    for o2 in bits::subsets_of_size(e2 & !o1, ell) {
                        for &e3 in by_overlap.get(&o2).into_iter().flatten() {
                            if (e3 & !o2) & (smask | e1 | e2) != 0 {
                                continue;
                            }
                            for tail in bits::subsets_of_size(e3 & !o2, ell) {
                                let vp = e1 | e2 | e3;
                                let ok = *memo.entry((vp, head, tail)).or_insert_with(|| {
                                    let all = VertexSet::new(bits::iter(vp | smask));
                                    spanning_path(h, &all, &bits::to_vec(head), &bits::to_vec(tail), ell).is_some()
                                });
                                if ok {
                                    structures += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let fact = |m: usize| (1..=m as u128).product::<u128>();
    Ok(structures * fact(ell).pow(4) * fact(k - 2 * ell).pow(3))
}

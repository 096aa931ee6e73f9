//! ℓ-paths and ℓ-cycles as ordered vertex sequences.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::hgraph::{UniformHypergraph, Vertex, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkKind {
    Path,
    Cycle,
}

impl fmt::Display for WalkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WalkKind::Path => "path",
            WalkKind::Cycle => "cycle",
        })
    }
}

/// Reason a sequence is not an ℓ-path or ℓ-cycle. Only the first problem is reported.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("ell = {ell} must satisfy 1 <= ell < k = {k}")]
    BadEll { ell: usize, k: usize },
    #[error("vertex {0} appears more than once")]
    RepeatedVertex(Vertex),
    #[error("vertex {vertex} out of range for n = {n}")]
    OutOfRange { vertex: Vertex, n: usize },
    #[error("a path on {len} vertices is impossible for k = {k}, ell = {ell}")]
    Arity { len: usize, k: usize, ell: usize },
    #[error("k - ell = {step} does not divide the cycle length {len}")]
    Divisibility { len: usize, step: usize },
    #[error("a cycle needs at least two edges and more than k vertices (got {len} vertices)")]
    TooShort { len: usize },
    #[error("window {window} ({edge:?}) is not an edge")]
    MissingEdge { window: usize, edge: Vec<Vertex> },
}

/// A validated ℓ-path or ℓ-cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EllWalk {
    seq: Vec<Vertex>,
    ell: usize,
    k: usize,
    kind: WalkKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkEnds {
    pub head: VertexSet,
    pub tail: VertexSet,
}

impl EllWalk {
    pub fn seq(&self) -> &[Vertex] {
        &self.seq
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> WalkKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        edge_count(self.kind, self.seq.len(), self.k, self.ell)
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::new(self.seq.iter().copied())
    }

    /// Edges in walk order, each as a sorted vertex list.
    pub fn edges(&self) -> Vec<Vec<Vertex>> {
        windows(&self.seq, self.k, self.ell, self.kind)
    }

    pub fn ends(&self) -> Result<WalkEnds> {
        ends(self)
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> EllWalk {
        let mut seq = self.seq.clone();
        seq.reverse();
        EllWalk { seq, ..self.clone() }
    }

    /// Cycle rotated left by `shift` positions (`shift` should be a multiple of `k - ell`).
    pub fn rotated(&self, shift: usize) -> EllWalk {
        let mut seq = self.seq.clone();
        if !seq.is_empty() {
            let len = seq.len();
            seq.rotate_left(shift % len);
        }
        EllWalk { seq, ..self.clone() }
    }

    /// One-line form `path|cycle ell v0 v1 ...`.
    pub fn to_line(&self) -> String {
        format!("{} {} {}", self.kind, self.ell, self.seq.iter().join(" "))
    }

    /// Builds a walk without checking edges; used by constructions that
    /// validate separately.
    pub(crate) fn unchecked(seq: Vec<Vertex>, k: usize, ell: usize, kind: WalkKind) -> Self {
        EllWalk { seq, ell, k, kind }
    }
}

impl fmt::Display for EllWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// Parsed but not yet validated walk line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkRecord {
    pub kind: WalkKind,
    pub ell: usize,
    pub seq: Vec<Vertex>,
}

impl WalkRecord {
    pub fn parse(line: &str) -> std::result::Result<Self, String> {
        let mut it = line.split_whitespace();
        let kind = match it.next() {
            Some("path") => WalkKind::Path,
            Some("cycle") => WalkKind::Cycle,
            Some(other) => return Err(format!("unknown walk kind {other:?}")),
            None => return Err("empty walk line".into()),
        };
        let ell = it
            .next()
            .ok_or("missing ell")?
            .parse()
            .map_err(|e| format!("bad ell: {e}"))?;
        let seq = it
            .map(|t| t.parse::<Vertex>().map_err(|e| format!("bad vertex {t:?}: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(WalkRecord { kind, ell, seq })
    }

    pub fn validate<H: UniformHypergraph + ?Sized>(&self, h: &H) -> std::result::Result<EllWalk, Violation> {
        match self.kind {
            WalkKind::Path => validate_path(h, &self.seq, self.ell),
            WalkKind::Cycle => validate_cycle(h, &self.seq, self.ell),
        }
    }
}

fn edge_count(kind: WalkKind, len: usize, k: usize, ell: usize) -> usize {
    let d = k - ell;
    match kind {
        WalkKind::Path => (len - k) / d + 1,
        WalkKind::Cycle => len / d,
    }
}

fn windows(seq: &[Vertex], k: usize, ell: usize, kind: WalkKind) -> Vec<Vec<Vertex>> {
    let d = k - ell;
    let m = edge_count(kind, seq.len(), k, ell);
    (0..m)
        .map(|j| {
            let mut e: Vec<Vertex> = (0..k).map(|i| seq[(j * d + i) % seq.len()]).collect();
            e.sort_unstable();
            e
        })
        .collect()
}

fn check_ell(k: usize, ell: usize) -> std::result::Result<(), Violation> {
    if ell == 0 || ell >= k {
        return Err(Violation::BadEll { ell, k });
    }
    Ok(())
}

fn check_vertices<H: UniformHypergraph + ?Sized>(h: &H, seq: &[Vertex]) -> std::result::Result<(), Violation> {
    let n = h.order();
    let mut seen = std::collections::HashSet::with_capacity(seq.len());
    for &v in seq {
        if v >= n {
            return Err(Violation::OutOfRange { vertex: v, n });
        }
        if !seen.insert(v) {
            return Err(Violation::RepeatedVertex(v));
        }
    }
    Ok(())
}

fn check_windows<H: UniformHypergraph + ?Sized>(
    h: &H,
    seq: &[Vertex],
    ell: usize,
    kind: WalkKind,
) -> std::result::Result<(), Violation> {
    for (window, edge) in windows(seq, h.uniformity(), ell, kind).into_iter().enumerate() {
        if !h.contains_sorted(&edge) {
            return Err(Violation::MissingEdge { window, edge });
        }
    }
    Ok(())
}

/// Accepts `seq` iff it is an ℓ-path of `h`: `|seq| = k + (m-1)(k-ℓ)` and every
/// window starting at a multiple of `k-ℓ` is an edge.
pub fn validate_path<H: UniformHypergraph + ?Sized>(
    h: &H,
    seq: &[Vertex],
    ell: usize,
) -> std::result::Result<EllWalk, Violation> {
    let k = h.uniformity();
    check_ell(k, ell)?;
    if seq.len() < k || (seq.len() - k) % (k - ell) != 0 {
        return Err(Violation::Arity { len: seq.len(), k, ell });
    }
    check_vertices(h, seq)?;
    check_windows(h, seq, ell, WalkKind::Path)?;
    Ok(EllWalk { seq: seq.to_vec(), ell, k, kind: WalkKind::Path })
}

/// Accepts `seq` iff it is an ℓ-cycle of `h`: `(k-ℓ)` divides `|seq|`, there
/// are at least two edges, and every cyclic window starting at a multiple of
/// `k-ℓ` is an edge.
pub fn validate_cycle<H: UniformHypergraph + ?Sized>(
    h: &H,
    seq: &[Vertex],
    ell: usize,
) -> std::result::Result<EllWalk, Violation> {
    let k = h.uniformity();
    check_ell(k, ell)?;
    let d = k - ell;
    if seq.len() % d != 0 {
        return Err(Violation::Divisibility { len: seq.len(), step: d });
    }
    if seq.len() / d < 2 || seq.len() <= k {
        return Err(Violation::TooShort { len: seq.len() });
    }
    check_vertices(h, seq)?;
    check_windows(h, seq, ell, WalkKind::Cycle)?;
    Ok(EllWalk { seq: seq.to_vec(), ell, k, kind: WalkKind::Cycle })
}

/// First and last ℓ vertices of a path, as sets.
pub fn ends(w: &EllWalk) -> Result<WalkEnds> {
    if w.kind != WalkKind::Path {
        return Err(Error::InvalidQuery("a cycle has no ends".into()));
    }
    let ell = w.ell;
    Ok(WalkEnds {
        head: VertexSet::new(w.seq[..ell].iter().copied()),
        tail: VertexSet::new(w.seq[w.seq.len() - ell..].iter().copied()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::extremal_example;
    use crate::hgraph::Hypergraph;

    #[test]
    fn complete_path_and_cycle() {
        let h = Hypergraph::complete(10, 4).unwrap();
        let seq: Vec<usize> = (0..10).collect();
        let p = validate_path(&h, &seq, 1).unwrap();
        assert_eq!(p.size(), 3);
        let e = p.ends().unwrap();
        assert_eq!(e.head, VertexSet::from([0]));
        assert_eq!(e.tail, VertexSet::from([9]));
        assert_eq!(validate_path(&h, &(0..11).collect::<Vec<_>>(), 1).unwrap_err(), Violation::Arity {
            len: 11,
            k: 4,
            ell: 1
        });

        let h = Hypergraph::complete(12, 4).unwrap();
        let c = validate_cycle(&h, &(0..12).collect::<Vec<_>>(), 1).unwrap();
        assert_eq!(c.size(), 4);
        assert!(c.ends().is_err());
        assert!(matches!(
            validate_cycle(&h, &(0..10).collect::<Vec<_>>(), 1),
            Err(Violation::Divisibility { .. })
        ));
    }

    #[test]
    fn ends_for_two_overlap() {
        let h = Hypergraph::complete(8, 5).unwrap();
        let p = validate_path(&h, &(0..8).collect::<Vec<_>>(), 2).unwrap();
        let e = ends(&p).unwrap();
        assert_eq!(e.head, VertexSet::from([0, 1]));
        assert_eq!(e.tail, VertexSet::from([6, 7]));
        let single = validate_path(&Hypergraph::complete(4, 4).unwrap(), &[0, 1, 2, 3], 1).unwrap();
        assert_eq!(single.ends().unwrap().tail, VertexSet::from([3]));
    }

    #[test]
    fn extremal_window_missing() {
        let h = extremal_example(12, 4, 1).unwrap();
        let err = validate_path(&h, &[1, 2, 3, 4, 5, 6, 7], 1).unwrap_err();
        assert_eq!(err, Violation::MissingEdge { window: 0, edge: vec![1, 2, 3, 4] });
        let err = validate_path(&h, &[0, 2, 3, 4, 5, 6, 7], 1).unwrap_err();
        assert_eq!(err, Violation::MissingEdge { window: 1, edge: vec![4, 5, 6, 7] });
    }

    #[test]
    fn repeated_and_out_of_range() {
        let h = Hypergraph::complete(6, 3).unwrap();
        assert_eq!(validate_path(&h, &[0, 1, 1], 1).unwrap_err(), Violation::RepeatedVertex(1));
        assert!(matches!(validate_path(&h, &[0, 1, 6], 1), Err(Violation::OutOfRange { .. })));
        assert!(matches!(validate_path(&h, &[0, 1, 2], 3), Err(Violation::BadEll { .. })));
    }

    #[test]
    fn line_roundtrip() {
        let h = Hypergraph::complete(12, 4).unwrap();
        let c = validate_cycle(&h, &(0..12).rev().collect::<Vec<_>>(), 1).unwrap();
        let rec = WalkRecord::parse(&c.to_line()).unwrap();
        assert_eq!(rec.validate(&h).unwrap(), c);
        assert!(WalkRecord::parse("loop 1 0 1").is_err());
        assert!(WalkRecord::parse("path x 0 1").is_err());
    }
}

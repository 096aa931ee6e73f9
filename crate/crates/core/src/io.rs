//! Text formats: `.khg` hypergraphs, walk lines, tilings, partitions, pair
//! lists and vertex-set files. Parse errors carry 1-based line numbers.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hgraph::{Hypergraph, Vertex, VertexSet};
use crate::regular::RegPartition;
use crate::scalar::Scalar;
use crate::tiling::{CherryHom, HomTiling};
use crate::walks::{EllWalk, WalkRecord};

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

/// Non-blank, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_ids(line: usize, s: &str, sep: impl Fn(char) -> bool) -> Result<Vec<Vertex>> {
    s.split(sep)
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<Vertex>() {
            Ok(v) => Ok(v),
            Err(_) => perr(line, format!("bad vertex id {t:?}")),
        })
        .collect()
}

fn parse_header<const N: usize>(line: usize, s: &str, names: [&str; N]) -> Result<[usize; N]> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    if toks.len() != N {
        return perr(line, format!("expected header `{}`", names.join(" ")));
    }
    let mut out = [0; N];
    for (i, t) in toks.iter().enumerate() {
        out[i] = t.parse().map_err(|_| Error::Parse { line, msg: format!("bad {} {t:?}", names[i]) })?;
    }
    Ok(out)
}

pub fn read_to_string(path: impl AsRef<Path>) -> Result<String> {
    let p = path.as_ref();
    std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

pub fn parse_khg(text: &str) -> Result<Hypergraph> {
    let mut lines = content_lines(text);
    let Some((hl, header)) = lines.next() else {
        return perr(1, "missing header `k n`");
    };
    let [k, n] = parse_header(hl, header, ["k", "n"])?;
    if k < 2 {
        return perr(hl, format!("uniformity must be at least 2, got {k}"));
    }
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for (ln, l) in lines {
        let e = parse_ids(ln, l, char::is_whitespace)?;
        if e.len() != k {
            return perr(ln, format!("edge has {} vertices, expected {k}", e.len()));
        }
        if let Some(&v) = e.iter().find(|&&v| v >= n) {
            return perr(ln, format!("vertex {v} out of range for n = {n}"));
        }
        if let Some(w) = e.windows(2).find(|w| w[0] >= w[1]) {
            let msg = if w[0] == w[1] {
                format!("duplicate vertex {} in edge", w[0])
            } else {
                "vertex ids not strictly increasing".to_string()
            };
            return perr(ln, msg);
        }
        if !seen.insert(e.clone()) {
            return perr(ln, format!("duplicate edge {e:?}"));
        }
        edges.push(e);
    }
    Hypergraph::new(n, k, edges)
}

pub fn read_khg(path: impl AsRef<Path>) -> Result<Hypergraph> {
    parse_khg(&read_to_string(path)?)
}

pub fn write_khg(h: &Hypergraph) -> String {
    let mut s = format!("{} {}\n", h.k(), h.n());
    for e in h.edges() {
        s.push_str(&e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
        s.push('\n');
    }
    s
}

/// Walk records, one per non-comment line.
pub fn parse_walks(text: &str) -> Result<Vec<(usize, WalkRecord)>> {
    content_lines(text)
        .map(|(ln, l)| WalkRecord::parse(l).map(|r| (ln, r)).or_else(|m| perr(ln, m)))
        .collect()
}

pub fn write_walks(ws: &[EllWalk]) -> String {
    ws.iter().map(|w| w.to_line() + "\n").collect()
}

/// Tiling text: header `beta k ell t`, then `w: v0 … v_{2k-2ℓ-1}` per entry.
/// A single vertex after the colon is a constant padding map.
pub fn parse_tiling<T: Scalar>(text: &str) -> Result<(HomTiling<T>, usize)> {
    let mut lines = content_lines(text);
    let Some((hl, header)) = lines.next() else {
        return perr(1, "missing header `beta k ell t`");
    };
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 {
        return perr(hl, "expected header `beta k ell t`");
    }
    let beta = T::parse_scalar(toks[0]).ok_or(Error::Parse { line: hl, msg: format!("bad beta {:?}", toks[0]) })?;
    let [k, ell, t] = parse_header(hl, &toks[1..].join(" "), ["k", "ell", "t"])?;
    if ell == 0 || 2 * ell >= k {
        return perr(hl, format!("need 1 <= ell < k/2, got k = {k}, ell = {ell}"));
    }
    let len = 2 * k - 2 * ell;
    let mut tiling = HomTiling::new(k, ell, beta);
    for (ln, l) in lines {
        let Some((w, rest)) = l.split_once(':') else {
            return perr(ln, "expected `w: v0 v1 ...`");
        };
        let w = T::parse_scalar(w).ok_or(Error::Parse { line: ln, msg: format!("bad weight {:?}", w.trim()) })?;
        let phi = parse_ids(ln, rest, char::is_whitespace)?;
        if let Some(&v) = phi.iter().find(|&&v| v >= t) {
            return perr(ln, format!("vertex {v} out of range for t = {t}"));
        }
        let hom = match phi.len() {
            1 => CherryHom::constant(phi[0], k, ell),
            l if l == len => CherryHom::new(phi, k, ell),
            l => return perr(ln, format!("map has {l} entries, expected {len}")),
        };
        tiling.entries.push((hom, w));
    }
    Ok((tiling, t))
}

pub fn write_tiling<T: Scalar>(h: &HomTiling<T>, t: usize) -> String {
    let mut s = format!("{} {} {} {t}\n", h.beta, h.k, h.ell);
    for (hom, w) in &h.entries {
        let phi = if hom.is_constant() { &hom.phi[..1] } else { &hom.phi[..] };
        let _ = writeln!(s, "{w}: {}", phi.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
    }
    s
}

/// Partition text: `t m`, then `t` lines of `m` class members. Vertices not
/// listed form `V_0`.
pub fn parse_partition(text: &str, n: usize) -> Result<RegPartition> {
    let mut lines = content_lines(text);
    let Some((hl, header)) = lines.next() else {
        return perr(1, "missing header `t m`");
    };
    let [t, m] = parse_header(hl, header, ["t", "m"])?;
    let mut classes = Vec::with_capacity(t);
    let mut seen = vec![false; n];
    for (ln, l) in lines {
        if classes.len() == t {
            return perr(ln, format!("more than {t} classes"));
        }
        let c = parse_ids(ln, l, |c: char| c.is_whitespace() || c == ',')?;
        if c.len() != m {
            return perr(ln, format!("class has {} vertices, expected {m}", c.len()));
        }
        for &v in &c {
            if v >= n {
                return perr(ln, format!("vertex {v} out of range for n = {n}"));
            }
            if std::mem::replace(&mut seen[v], true) {
                return perr(ln, format!("vertex {v} listed twice"));
            }
        }
        classes.push(VertexSet::new(c));
    }
    if classes.len() != t {
        return perr(text.lines().count().max(1), format!("expected {t} classes, found {}", classes.len()));
    }
    RegPartition::new(n, classes)
}

pub fn write_partition(p: &RegPartition) -> String {
    let mut s = format!("{} {}\n", p.t(), p.m());
    for c in &p.classes {
        s.push_str(&c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
        s.push('\n');
    }
    s
}

/// One `X;Y` per line with comma-separated ids.
pub fn parse_pairs(text: &str) -> Result<Vec<(VertexSet, VertexSet)>> {
    content_lines(text)
        .map(|(ln, l)| {
            let Some((x, y)) = l.split_once(';') else {
                return perr(ln, "expected `X;Y`");
            };
            let side = |s: &str| -> Result<VertexSet> {
                let ids = parse_ids(ln, s, |c| c == ',')?;
                let len = ids.len();
                let set = VertexSet::new(ids);
                if set.len() != len {
                    return perr(ln, "repeated vertex in end-set");
                }
                Ok(set)
            };
            Ok((side(x)?, side(y)?))
        })
        .collect()
}

pub fn write_pairs(pairs: &[(VertexSet, VertexSet)]) -> String {
    let join = |s: &VertexSet| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
    pairs.iter().map(|(x, y)| format!("{};{}\n", join(x), join(y))).collect()
}

/// Vertex ids separated by commas or whitespace, over any number of lines.
pub fn parse_vertex_set(text: &str) -> Result<VertexSet> {
    let mut all = Vec::new();
    for (ln, l) in content_lines(text) {
        for v in parse_ids(ln, l, |c: char| c.is_whitespace() || c == ',')? {
            if all.contains(&v) {
                return perr(ln, format!("vertex {v} listed twice"));
            }
            all.push(v);
        }
    }
    Ok(VertexSet::new(all))
}

pub fn write_vertex_set(s: &VertexSet) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",") + "\n"
}

/// `v1,v2,...` as given on the command line.
pub fn parse_id_list(s: &str) -> Result<Vec<Vertex>> {
    parse_ids(1, s, |c| c == ',')
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn khg_roundtrip() {
        let h = Hypergraph::new(6, 3, vec![vec![0, 1, 2], vec![1, 3, 5]]).unwrap();
        assert_eq!(parse_khg(&write_khg(&h)).unwrap(), h);
    }

    #[test]
    fn khg_errors_name_lines() {
        let cases = [
            ("3 6\n0 1\n", 2),
            ("3 6\n# c\n0 1 6\n", 3),
            ("3 6\n0 1 2\n0 2 2\n", 3),
            ("3 6\n0 1 2\n\n0 1 2\n", 4),
            ("3 6\n2 1 0\n", 2),
            ("3\n", 1),
        ];
        for (text, want) in cases {
            match parse_khg(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn tiling_roundtrip() {
        let mut h = HomTiling::new(4, 1, Rational::new(1, 4));
        h.entries.push((CherryHom::new(vec![0, 1, 2, 3, 4, 5], 4, 1), Rational::new(1, 2)));
        h.entries.push((CherryHom::constant(6, 4, 1), Rational::new(1, 4)));
        let (back, t) = parse_tiling::<Rational>(&write_tiling(&h, 7)).unwrap();
        assert_eq!(t, 7);
        assert_eq!(back, h);
    }

    #[test]
    fn partition_and_pairs() {
        let p = parse_partition("2 2\n0 1\n3,4\n", 6).unwrap();
        assert_eq!(p.exceptional, VertexSet::from([2, 5]));
        assert_eq!(parse_partition(&write_partition(&p), 6).unwrap(), p);
        assert!(matches!(parse_partition("2 2\n0 1\n1 2\n", 6), Err(Error::Parse { line: 3, .. })));
        let pairs = parse_pairs("0,1;2,3\n4;5\n").unwrap();
        assert_eq!(pairs[1], (VertexSet::from([4]), VertexSet::from([5])));
        assert_eq!(parse_pairs(&write_pairs(&pairs)).unwrap(), pairs);
        assert_eq!(parse_vertex_set("3, 1\n2\n").unwrap(), VertexSet::from([1, 2, 3]));
    }
}

//! Helpers for vertex sets packed into a `u128` (instances with n <= 128).

use crate::hgraph::Vertex;

pub type Mask = u128;

pub const MAX_BITS: usize = 128;

pub fn mask_of(vs: &[Vertex]) -> Mask {
    vs.iter().fold(0, |m, &v| m | (1u128 << v))
}

pub fn full_mask(n: usize) -> Mask {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

pub fn count(m: Mask) -> usize {
    m.count_ones() as usize
}

pub fn lowest(m: Mask) -> Option<Vertex> {
    (m != 0).then(|| m.trailing_zeros() as usize)
}

/// Iterates the members of `m` in increasing order.
pub fn iter(m: Mask) -> impl Iterator<Item = Vertex> {
    let mut rest = m;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(v)
    })
}

pub fn to_vec(m: Mask) -> Vec<Vertex> {
    iter(m).collect()
}

/// All `r`-element sub-masks of `m`, in lexicographic order of their sorted members.
pub fn subsets_of_size(m: Mask, r: usize) -> Vec<Mask> {
    let members = to_vec(m);
    let mut out = Vec::new();
    if r > members.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.iter().fold(0, |acc, &i| acc | (1u128 << members[i])));
        let mut i = r;
        while i > 0 && idx[i - 1] == members.len() - r + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

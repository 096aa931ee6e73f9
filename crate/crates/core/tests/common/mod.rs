#![allow(dead_code)]

use ellcycle::tiling::{CherryHom, HomTiling};
use ellcycle::{Hypergraph, Rational, Vertex};

/// Two saturated cherries `C = (0..6)`, `C' = (6..12)` at weight 1 and the
/// unloaded pair `K = {12, 13}`; `link` lists pairs `(i, j)` meaning
/// `K ∪ {c_i, d_j}` is an edge. `extra` edges are added verbatim.
pub fn move_fixture(link: &[(usize, usize)], extra: &[[Vertex; 4]]) -> (Hypergraph, HomTiling<Rational>) {
    let mut edges: Vec<Vec<Vertex>> = vec![vec![0, 1, 2, 3], vec![2, 3, 4, 5], vec![6, 7, 8, 9], vec![8, 9, 10, 11]];
    for &(i, j) in link {
        edges.push(vec![12, 13, i, 6 + j]);
    }
    edges.extend(extra.iter().map(|e| e.to_vec()));
    let g = Hypergraph::new(14, 4, edges).unwrap();
    let mut h = HomTiling::new(4, 1, Rational::from_integer(1));
    h.entries.push((CherryHom::new((0..6).collect(), 4, 1), Rational::from_integer(1)));
    h.entries.push((CherryHom::new((6..12).collect(), 4, 1), Rational::from_integer(1)));
    (g, h)
}

pub fn matching_fixture() -> (Hypergraph, HomTiling<Rational>) {
    move_fixture(&[(0, 0), (1, 1), (2, 2)], &[])
}

pub fn four_neighbours_fixture() -> (Hypergraph, HomTiling<Rational>) {
    move_fixture(&[(0, 0), (0, 1), (1, 2), (1, 3)], &[])
}

/// Link is exactly the two stars at `c_0` and `d_0`.
pub fn weight_shift_fixture() -> (Hypergraph, HomTiling<Rational>) {
    let mut link: Vec<(usize, usize)> = (0..6).map(|j| (0, j)).collect();
    link.extend((1..6).map(|i| (i, 0)));
    move_fixture(&link, &[[1, 4, 7, 10]])
}

/// Independent count of `K ∪ {x, y}` edges for a fixture.
pub fn link_size(g: &Hypergraph) -> usize {
    g.edges().iter().filter(|e| e.contains(&12) && e.contains(&13)).count()
}

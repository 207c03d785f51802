//! Named graph families and the catalog of connected graphs up to
//! isomorphism.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::complex::{build_complex, canonical_weights, SimpleGraph, WeightedComplex};
use crate::error::{Error, Result};

/// Vertex identifier for index `i`; zero-padded so lexicographic order is
/// numeric order.
pub fn vertex_name(i: usize) -> String {
    format!("v{i:02}")
}

/// Canonically weighted graph complex on `v00, v01, …`.
///
/// Every vertex must lie on an edge, since the complex is pure.
pub fn graph_complex(g: &SimpleGraph) -> Result<WeightedComplex> {
    if let Some(v) = (0..g.n() as u32).find(|&v| g.degree(v) == 0) {
        return Err(Error::PreconditionViolated(format!("vertex {v} is isolated")));
    }
    let tops: Vec<Vec<String>> =
        g.edges().iter().map(|&(a, b)| vec![vertex_name(a as usize), vertex_name(b as usize)]).collect();
    Ok(canonical_weights(&build_complex(&tops)?))
}

/// As `graph_complex`, with the two color classes attached when bipartite.
pub fn bipartite_complex(g: &SimpleGraph) -> Result<WeightedComplex> {
    let colors = g
        .bipartition()
        .ok_or_else(|| Error::PreconditionViolated("graph is not bipartite".into()))?;
    graph_complex(g)?.with_partite(colors)
}

pub fn complete(n: u32) -> SimpleGraph {
    let mut e = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            e.push((a, b));
        }
    }
    SimpleGraph::new(n as usize, &e)
}

pub fn path(n: u32) -> SimpleGraph {
    let e: Vec<(u32, u32)> = (1..n).map(|i| (i - 1, i)).collect();
    SimpleGraph::new(n as usize, &e)
}

pub fn cycle(n: u32) -> SimpleGraph {
    let e: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimpleGraph::new(n as usize, &e)
}

pub fn complete_bipartite(a: u32, b: u32) -> SimpleGraph {
    let mut e = Vec::new();
    for i in 0..a {
        for j in 0..b {
            e.push((i, a + j));
        }
    }
    SimpleGraph::new((a + b) as usize, &e)
}

/// The icosahedron: 12 vertices, 5-regular.
pub fn icosahedron() -> SimpleGraph {
    // apex 0, upper ring 1..=5, lower ring 6..=10, apex 11
    let mut e = Vec::new();
    for i in 0..5 {
        let (u, un) = (1 + i, 1 + (i + 1) % 5);
        let (l, ln) = (6 + i, 6 + (i + 1) % 5);
        e.extend([(0, u), (u, un), (l, ln), (l, 11), (u, l), (un, l)]);
    }
    SimpleGraph::new(12, &e)
}

pub fn petersen() -> SimpleGraph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    SimpleGraph::new(10, &e)
}

fn pair_bit(a: usize, b: usize) -> u32 {
    let (a, b) = (a.min(b), a.max(b));
    (b * (b - 1) / 2 + a) as u32
}

fn code_of(n: usize, adj: &[u64], order: &[usize]) -> u64 {
    // order[new] = old
    let mut code = 0u64;
    for j in 1..n {
        for i in 0..j {
            if adj[order[i]] >> order[j] & 1 == 1 {
                code |= 1 << pair_bit(i, j);
            }
        }
    }
    code
}

/// Canonical code of a graph on at most 11 vertices: the minimal pair
/// bitmask over vertex orders refining (degree, neighbor degrees).
pub fn canonical_code(g: &SimpleGraph) -> u64 {
    let n = g.n();
    assert!(n <= 11, "canonical_code supports at most 11 vertices");
    let mut adj = vec![0u64; n];
    for &(a, b) in g.edges() {
        adj[a as usize] |= 1 << b;
        adj[b as usize] |= 1 << a;
    }
    let inv: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v as u32).iter().map(|&(u, _)| g.degree(u)).collect();
            nd.sort_unstable();
            (g.degree(v as u32), nd)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
    // cells of equal invariant, permuted independently
    let mut cells: Vec<(usize, usize)> = Vec::new();
    let mut s = 0;
    for i in 1..=n {
        if i == n || inv[order[i]] != inv[order[s]] {
            cells.push((s, i));
            s = i;
        }
    }
    let mut best = u64::MAX;
    permute_cells(n, &adj, &mut order, &cells, 0, &mut best);
    best
}

fn permute_cells(n: usize, adj: &[u64], order: &mut Vec<usize>, cells: &[(usize, usize)], c: usize, best: &mut u64) {
    if c == cells.len() {
        *best = (*best).min(code_of(n, adj, order));
        return;
    }
    let (lo, hi) = cells[c];
    heap_permute(n, adj, order, cells, c, lo, hi - lo, best);
}

#[allow(clippy::too_many_arguments)]
fn heap_permute(
    n: usize,
    adj: &[u64],
    order: &mut Vec<usize>,
    cells: &[(usize, usize)],
    c: usize,
    lo: usize,
    k: usize,
    best: &mut u64,
) {
    if k <= 1 {
        permute_cells(n, adj, order, cells, c + 1, best);
        return;
    }
    for i in 0..k - 1 {
        heap_permute(n, adj, order, cells, c, lo, k - 1, best);
        if k.is_multiple_of(2) {
            order.swap(lo + i, lo + k - 1);
        } else {
            order.swap(lo, lo + k - 1);
        }
    }
    heap_permute(n, adj, order, cells, c, lo, k - 1, best);
}

fn decode(n: usize, code: u64) -> SimpleGraph {
    let mut e = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if code >> pair_bit(i, j) & 1 == 1 {
                e.push((i as u32, j as u32));
            }
        }
    }
    SimpleGraph::new(n, &e)
}

fn all_codes(n: usize) -> Vec<u64> {
    if n <= 1 {
        return vec![0];
    }
    let prev = all_codes(n - 1);
    let mut seen = BTreeSet::new();
    for &c in &prev {
        let base = decode(n - 1, c);
        for mask in 0u32..1 << (n - 1) {
            let mut e = base.edges().to_vec();
            e.extend((0..n as u32 - 1).filter(|i| mask >> i & 1 == 1).map(|i| (i, n as u32 - 1)));
            seen.insert(canonical_code(&SimpleGraph::new(n, &e)));
        }
    }
    seen.into_iter().collect()
}

/// All graphs on `n ≤ 8` vertices up to isomorphism, in canonical-code order.
pub fn all_graphs(n: usize) -> Vec<SimpleGraph> {
    assert!(n <= 8, "catalog supports at most 8 vertices");
    all_codes(n).into_iter().map(|c| decode(n, c)).collect()
}

/// Connected graphs on `n` vertices up to isomorphism.
pub fn connected_graphs(n: usize) -> Vec<SimpleGraph> {
    all_graphs(n).into_iter().filter(SimpleGraph::is_connected).collect()
}

/// Connected graphs with `2 ≤ n ≤ 7` vertices, canonically weighted;
/// computed once.
pub fn catalog() -> &'static [WeightedComplex] {
    static CATALOG: OnceLock<Vec<WeightedComplex>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        (2..=7)
            .flat_map(connected_graphs)
            .map(|g| graph_complex(&g).expect("connected graphs have no isolated vertices"))
            .collect()
    })
}

/// Catalog entries with at most `n` vertices.
pub fn catalog_up_to(n: usize) -> impl Iterator<Item = &'static WeightedComplex> {
    catalog().iter().filter(move |x| x.num_vertices() <= n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorph_counts() {
        // graphs and connected graphs on n vertices
        let all = [1, 2, 4, 11, 34, 156];
        let conn = [1, 1, 2, 6, 21, 112];
        for n in 1..=6 {
            assert_eq!(all_graphs(n).len(), all[n - 1], "all graphs n={n}");
            assert_eq!(connected_graphs(n).len(), conn[n - 1], "connected n={n}");
        }
    }

    #[test]
    fn seven_vertex_catalog() {
        assert_eq!(connected_graphs(7).len(), 853);
        assert_eq!(catalog().len(), 1 + 2 + 6 + 21 + 112 + 853);
    }

    #[test]
    fn canonical_code_is_invariant() {
        let g = petersen();
        let relabel: Vec<u32> = vec![5, 3, 0, 7, 1, 9, 2, 4, 8, 6];
        let e: Vec<(u32, u32)> =
            g.edges().iter().map(|&(a, b)| (relabel[a as usize], relabel[b as usize])).collect();
        assert_eq!(canonical_code(&g), canonical_code(&SimpleGraph::new(10, &e)));
        assert_ne!(canonical_code(&g), canonical_code(&cycle(10)));
    }

    #[test]
    fn families() {
        let ico = icosahedron();
        assert_eq!(ico.edges().len(), 30);
        assert!((0..12).all(|v| ico.degree(v) == 5));
        let pet = petersen();
        assert_eq!(pet.edges().len(), 15);
        assert!((0..10).all(|v| pet.degree(v) == 3));
        assert_eq!(pet.diameter(), Some(2));
        assert!(complete_bipartite(2, 3).bipartition().is_some());
        assert!(graph_complex(&SimpleGraph::new(3, &[(0, 1)])).is_err());
    }
}

use serde::Serialize;

use super::{SimpleGraph, WeightedComplex};
use crate::error::{budget, Result};

/// Default cap on emitted objects for enumerations.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleKind {
    Cycle,
    ClosedPath,
    OpenPath,
}

/// A cycle or path subgraph.
///
/// For a cycle, `edges[i]` joins `vertices[i]` and `vertices[i + 1]`
/// cyclically; for a closed path of length ℓ there are ℓ + 1 vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclePath {
    pub kind: CycleKind,
    pub vertices: Vec<u32>,
    pub edges: Vec<usize>,
}

impl CyclePath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Simple cycles of length at most `max_len`, once each.
///
/// Each cycle is listed from its smallest vertex, in the direction whose
/// second vertex is smaller; output is sorted by length, then vertices.
pub fn enumerate_cycles(x: &WeightedComplex, max_len: usize, cap: u128) -> Result<Vec<CyclePath>> {
    cycles_in(&SimpleGraph::from_complex(x)?, max_len, cap)
}

pub fn cycles_in(g: &SimpleGraph, max_len: usize, cap: u128) -> Result<Vec<CyclePath>> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; g.n()];
    for s in 0..g.n() as u32 {
        path.push(s);
        on_path[s as usize] = true;
        extend_cycle(g, s, max_len, cap, &mut path, &mut on_path, &mut out)?;
        on_path[s as usize] = false;
        path.pop();
    }
    out.sort_by(|a: &CyclePath, b| (a.len(), &a.vertices).cmp(&(b.len(), &b.vertices)));
    Ok(out)
}

fn extend_cycle(
    g: &SimpleGraph,
    s: u32,
    max_len: usize,
    cap: u128,
    path: &mut Vec<u32>,
    on_path: &mut [bool],
    out: &mut Vec<CyclePath>,
) -> Result<()> {
    let v = *path.last().unwrap();
    for &(u, _) in g.neighbors(v) {
        if u == s && path.len() >= 3 && path[1] < v {
            let n = path.len();
            let edges = (0..n)
                .map(|i| g.edge_between(path[i], path[(i + 1) % n]).unwrap())
                .collect();
            out.push(CyclePath { kind: CycleKind::Cycle, vertices: path.clone(), edges });
            budget("cycle enumeration", cap, out.len() as u128)?;
        } else if u > s && !on_path[u as usize] && path.len() < max_len {
            path.push(u);
            on_path[u as usize] = true;
            extend_cycle(g, s, max_len, cap, path, on_path, out)?;
            on_path[u as usize] = false;
            path.pop();
        }
    }
    Ok(())
}

/// Simple paths with distinct endpoints of length `1..=max_len`, once each
/// up to reversal (listed from the smaller endpoint).
pub fn enumerate_short_paths(x: &WeightedComplex, max_len: usize) -> Result<Vec<CyclePath>> {
    Ok(paths_in(&SimpleGraph::from_complex(x)?, max_len))
}

pub fn paths_in(g: &SimpleGraph, max_len: usize) -> Vec<CyclePath> {
    fn walk(g: &SimpleGraph, max_len: usize, path: &mut Vec<u32>, edges: &mut Vec<usize>, out: &mut Vec<CyclePath>) {
        let v = *path.last().unwrap();
        if edges.len() == max_len {
            return;
        }
        for &(u, e) in g.neighbors(v) {
            if path.contains(&u) {
                continue;
            }
            path.push(u);
            edges.push(e);
            if u > path[0] {
                out.push(CyclePath { kind: CycleKind::ClosedPath, vertices: path.clone(), edges: edges.clone() });
            }
            walk(g, max_len, path, edges, out);
            edges.pop();
            path.pop();
        }
    }
    let mut out = Vec::new();
    for s in 0..g.n() as u32 {
        walk(g, max_len, &mut vec![s], &mut Vec::new(), &mut out);
    }
    out.sort_by(|a, b| (a.len(), &a.vertices).cmp(&(b.len(), &b.vertices)));
    out
}

/// One piece of `C − X′`: interior vertices and edges of an open path whose
/// closure ends at `start` and `end` in `X′`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenPathPiece {
    pub start: u32,
    pub end: u32,
    pub interior: Vec<u32>,
    pub edges: Vec<usize>,
}

/// Splits `C − X′` into open paths, where `X′` is given by vertex and edge
/// membership flags. Returns `None` if `C` shares no vertex with `X′`.
pub fn cycle_minus_subgraph(
    cycle: &CyclePath,
    in_sub_vertex: &[bool],
    in_sub_edge: &[bool],
) -> Option<Vec<OpenPathPiece>> {
    let n = cycle.vertices.len();
    let first = (0..n).find(|&i| in_sub_vertex[cycle.vertices[i] as usize])?;
    let mut pieces = Vec::new();
    let mut i = first;
    loop {
        // walk from one X′ vertex to the next along the cycle
        let start = cycle.vertices[i];
        let mut interior = Vec::new();
        let mut edges = vec![cycle.edges[i]];
        let mut j = (i + 1) % n;
        while !in_sub_vertex[cycle.vertices[j] as usize] {
            interior.push(cycle.vertices[j]);
            edges.push(cycle.edges[j]);
            j = (j + 1) % n;
        }
        let end = cycle.vertices[j];
        if !(interior.is_empty() && in_sub_edge[edges[0]]) {
            pieces.push(OpenPathPiece { start, end, interior, edges });
        }
        i = j;
        if i == first {
            break;
        }
    }
    Some(pieces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32) -> SimpleGraph {
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                e.push((a, b));
            }
        }
        SimpleGraph::new(n as usize, &e)
    }

    // brute force: edge subsets forming a single cycle (all degrees 2, connected)
    fn brute_cycles(g: &SimpleGraph, max_len: usize) -> usize {
        let m = g.edges().len();
        (1u32..1 << m)
            .filter(|mask| {
                let k = mask.count_ones() as usize;
                if k < 3 || k > max_len {
                    return false;
                }
                let sel: Vec<(u32, u32)> =
                    (0..m).filter(|i| mask >> i & 1 == 1).map(|i| g.edges()[i]).collect();
                let mut deg = vec![0; g.n()];
                for &(a, b) in &sel {
                    deg[a as usize] += 1;
                    deg[b as usize] += 1;
                }
                if deg.iter().any(|&d| d != 0 && d != 2) {
                    return false;
                }
                let verts: Vec<u32> = (0..g.n() as u32).filter(|&v| deg[v as usize] == 2).collect();
                let sub = SimpleGraph::new(g.n(), &sel);
                let d = sub.distances(verts[0]);
                verts.iter().all(|&v| d[v as usize] != usize::MAX)
            })
            .count()
    }

    #[test]
    fn k4_has_seven_cycles() {
        let k4 = complete(4);
        let c = cycles_in(&k4, 4, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(c.len(), 7);
        assert_eq!(c.iter().filter(|c| c.len() == 3).count(), 4);
        assert_eq!(brute_cycles(&k4, 4), 7);
    }

    #[test]
    fn cycle_counts_match_brute_force() {
        for n in 3..=6 {
            let g = complete(n);
            for len in 3..=n as usize {
                assert_eq!(cycles_in(&g, len, u128::MAX).unwrap().len(), brute_cycles(&g, len));
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = cycles_in(&complete(6), 6, 10).unwrap_err();
        assert!(matches!(err, crate::error::Error::BudgetExceeded { cap: 10, .. }));
    }

    #[test]
    fn short_paths() {
        let k3 = complete(3);
        let p = paths_in(&k3, 2);
        assert_eq!(p.iter().filter(|p| p.len() == 1).count(), 3);
        assert_eq!(p.iter().filter(|p| p.len() == 2).count(), 3);
        let p3 = SimpleGraph::new(3, &[(0, 1), (1, 2)]);
        let p = paths_in(&p3, 2);
        assert_eq!(p.len(), 3);
        assert_eq!(p[2].vertices, vec![0, 1, 2]);
        assert!(cycles_in(&p3, 3, 100).unwrap().is_empty());
        let edge = SimpleGraph::new(2, &[(0, 1)]);
        assert_eq!(paths_in(&edge, 2).len(), 1);
    }

    #[test]
    fn cycle_minus_subgraph_pieces() {
        let c6 = SimpleGraph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]);
        let cyc = cycles_in(&c6, 6, 10).unwrap().remove(0);
        // X′ = {0, 3} plus nothing else
        let mut vs = vec![false; 6];
        vs[0] = true;
        vs[3] = true;
        let pieces = cycle_minus_subgraph(&cyc, &vs, &[false; 6]).unwrap();
        assert_eq!(pieces.len(), 2);
        assert!(pieces.iter().all(|p| p.interior.len() == 2 && p.edges.len() == 3));
        assert!(cycle_minus_subgraph(&cyc, &[false; 6], &[false; 6]).is_none());
    }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::WeightedComplex;
use crate::error::{Error, Result};

/// Plain undirected graph on `0..n` with indexed edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<(u32, usize)>>,
}

impl SimpleGraph {
    /// Edges are normalized to `(min, max)`; order is preserved.
    pub fn new(n: usize, edges: &[(u32, u32)]) -> Self {
        let edges: Vec<(u32, u32)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let mut adj = vec![Vec::new(); n];
        for (i, &(a, b)) in edges.iter().enumerate() {
            adj[a as usize].push((b, i));
            adj[b as usize].push((a, i));
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
        }
        SimpleGraph { n, edges, adj }
    }

    pub fn from_complex(x: &WeightedComplex) -> Result<Self> {
        x.require_graph()?;
        let edges: Vec<(u32, u32)> = x.edges().iter().map(|e| (e[0], e[1])).collect();
        Ok(Self::new(x.num_vertices(), &edges))
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }
    /// Sorted `(neighbor, edge index)` pairs.
    pub fn neighbors(&self, v: u32) -> &[(u32, usize)] {
        &self.adj[v as usize]
    }
    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }
    pub fn edge_between(&self, a: u32, b: u32) -> Option<usize> {
        self.adj[a as usize].iter().find(|&&(u, _)| u == b).map(|&(_, e)| e)
    }

    /// BFS distances from `s`; unreachable vertices get `usize::MAX`.
    pub fn distances(&self, s: u32) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::from([s]);
        dist[s as usize] = 0;
        while let Some(v) = queue.pop_front() {
            for &(u, _) in self.neighbors(v) {
                if dist[u as usize] == usize::MAX {
                    dist[u as usize] = dist[v as usize] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.distances(0).iter().all(|&d| d != usize::MAX)
    }

    /// Largest finite distance; `None` if disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for v in 0..self.n as u32 {
            for d in self.distances(v) {
                if d == usize::MAX {
                    return None;
                }
                best = best.max(d);
            }
        }
        Some(best)
    }

    /// Two-coloring if bipartite.
    pub fn bipartition(&self) -> Option<Vec<u32>> {
        let mut color = vec![u32::MAX; self.n];
        for s in 0..self.n {
            if color[s] != u32::MAX {
                continue;
            }
            color[s] = 0;
            let mut stack = vec![s as u32];
            while let Some(v) = stack.pop() {
                for &(u, _) in self.neighbors(v) {
                    if color[u as usize] == u32::MAX {
                        color[u as usize] = 1 - color[v as usize];
                        stack.push(u);
                    } else if color[u as usize] == color[v as usize] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    /// Whether every edge lies on a cycle.
    pub fn is_bridgeless(&self) -> bool {
        (0..self.edges.len()).all(|skip| {
            let (a, b) = self.edges[skip];
            let mut seen = vec![false; self.n];
            let mut stack = vec![a];
            seen[a as usize] = true;
            while let Some(v) = stack.pop() {
                for &(u, e) in self.neighbors(v) {
                    if e != skip && !seen[u as usize] {
                        seen[u as usize] = true;
                        stack.push(u);
                    }
                }
            }
            seen[b as usize]
        })
    }
}

/// Vertex and edge weights of a graph as integers over one denominator.
///
/// Hot loops (subset scans, cochain enumeration) work on these; ratios of
/// two scaled quantities need no rescaling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledWeights {
    pub denom: u64,
    pub vertex: Vec<u64>,
    pub edge: Vec<u64>,
}

impl ScaledWeights {
    pub fn new(x: &WeightedComplex) -> Result<Self> {
        x.require_graph()?;
        let all = x.vertex_weights().iter().chain(x.edge_weights());
        let lcm = all.clone().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let scale = |w: &crate::scalar::Rational| -> Result<u64> {
            (w.numer() * (&lcm / w.denom())).to_u64().ok_or(Error::Overflow)
        };
        let vertex = x.vertex_weights().iter().map(scale).collect::<Result<Vec<_>>>()?;
        let edge = x.edge_weights().iter().map(scale).collect::<Result<Vec<_>>>()?;
        let denom = lcm.to_u64().ok_or(Error::Overflow)?;
        // sums must fit comfortably in u64 for the scans
        let vs: u128 = vertex.iter().map(|&v| v as u128).sum();
        let es: u128 = edge.iter().map(|&v| v as u128).sum();
        if vs.max(es) > u64::MAX as u128 / 4 {
            return Err(Error::Overflow);
        }
        Ok(ScaledWeights { denom, vertex, edge })
    }

    pub fn vertex_mass(&self, mask: u64) -> u64 {
        self.vertex.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, w)| w).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, canonical_weights};

    #[test]
    fn scaled_p3() {
        let p3 = canonical_weights(&build_complex(&[vec!["a", "b"], vec!["b", "c"]]).unwrap());
        let s = ScaledWeights::new(&p3).unwrap();
        assert_eq!(s.denom, 4);
        assert_eq!(s.vertex, vec![1, 2, 1]);
        assert_eq!(s.edge, vec![2, 2]);
    }

    #[test]
    fn structure_helpers() {
        let c5 = SimpleGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(c5.diameter(), Some(2));
        assert!(c5.bipartition().is_none());
        assert!(c5.is_bridgeless());
        let p3 = SimpleGraph::new(3, &[(0, 1), (1, 2)]);
        assert_eq!(p3.bipartition(), Some(vec![0, 1, 0]));
        assert!(!p3.is_bridgeless());
    }
}

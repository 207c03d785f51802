//! Exact cb₀ for quotients `R̄/𝒢` over `R = F₂^k` where every `R_v` is
//! zero or a line, the nonzero lines are linearly independent, and every
//! `R_e` is zero.
//!
//! A 0-cochain assigns each vertex a coset `L_v = x_v + R_v`: a point, or a
//! pair of points differing in direction `d_v`. An edge is uncut iff the
//! two cosets meet, and `dist(f, B⁰) = w(V) − max_h w({v : h ∈ L_v})`.
//! Viewing points as nodes and line cosets as edges, independence of the
//! directions makes this a forest, and any forest with distinct nodes is
//! realized by some cochain. So cb₀ is a minimum over "cluster forests":
//! each vertex sits in at most two clusters (one for a point), and the
//! cluster–vertex incidence graph is acyclic.
//!
//! Acyclicity gives `Σ (|C| − 1) ≤ n − 1` over the clusters, so the uncut
//! weight is bounded by a knapsack over cluster sizes. The search picks
//! connected clusters in order of decreasing weight (the first one fixes
//! the distance) and prunes with that knapsack bound.

use crate::cohomology::Expansion;
use crate::complex::{ScaledWeights, SimpleGraph, WeightedComplex};
use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::sheaf::SubgroupAssignment;

/// Largest graph the solver accepts; candidate clusters are found by
/// scanning vertex subsets.
pub const MAX_VERTICES: usize = 20;

/// Outcome of [`basis_line_cb0`].
#[derive(Clone, Debug)]
pub struct BasisLineResult {
    pub value: Expansion,
    /// A cochain attaining the minimum, as canonical representatives.
    pub witness: Option<Vec<Vec<u32>>>,
    pub witness_coboundary_norm: Option<Rational>,
    pub witness_distance: Option<Rational>,
    /// Search nodes expanded.
    pub nodes: u64,
}

/// Direction of each vertex line, or `None` for `R_v = 0`. Errors unless
/// the assignment has the shape described in the module docs.
pub fn line_directions(x: &WeightedComplex, a: &SubgroupAssignment) -> Result<Vec<Option<usize>>> {
    let fail = |m: &str| Err(Error::PreconditionViolated(format!("basis-line solver: {m}")));
    x.require_graph()?;
    let g = a.ambient();
    if g.field().map(|f| f.order()) != Some(2) {
        return fail("ambient must be F₂^k");
    }
    if a.edge.iter().any(|s| !s.is_trivial()) {
        return fail("edge subgroups must be zero");
    }
    let mut dirs = Vec::new();
    let mut lines = Vec::new();
    for s in &a.vertex {
        let basis = s.basis().expect("linear backend");
        match basis.len() {
            0 => dirs.push(None),
            1 => {
                lines.push(basis[0].clone());
                dirs.push(Some(lines.len() - 1));
            }
            _ => return fail("vertex subgroups must have dimension at most 1"),
        }
    }
    if crate::linalg::rank(g.field().unwrap(), &lines) != lines.len() {
        return fail("vertex lines must be linearly independent");
    }
    if x.num_vertices() > MAX_VERTICES {
        return fail("too many vertices");
    }
    Ok(dirs)
}

/// A connected vertex set that may serve as a cluster.
struct Candidate {
    mask: u32,
    size: usize,
    weight: u128,
    /// Weight of the edges inside.
    inner: u128,
}

struct Search<'a> {
    cands: &'a [Candidate],
    /// `knap[i][b]`: most inner weight from candidates `i..` with total
    /// `Σ (size − 1) ≤ b`, each usable repeatedly.
    knap: Vec<Vec<u128>>,
    line: Vec<bool>,
    total: u128,
    total_edges: u128,
    max_vertex: u128,
    uses: Vec<u8>,
    parent: Vec<usize>,
    chosen: Vec<usize>,
    best: Option<(u128, u128)>,
    best_clusters: Option<Vec<usize>>,
    dirs: &'a [Option<usize>],
    k: usize,
    nodes: u64,
}

impl Search<'_> {
    fn find(&self, mut c: usize) -> usize {
        while self.parent[c] != c {
            c = self.parent[c];
        }
        c
    }

    fn pruned(&self, cut: u128, room: u128) -> bool {
        match self.best {
            None => room == 0,
            Some((bc, bd)) => room == 0 || cut * bd >= bc * room,
        }
    }

    /// Tries to add candidate `i`; returns the union-find links to undo.
    fn add(&mut self, i: usize) -> Option<Vec<usize>> {
        let c = &self.cands[i];
        let members: Vec<usize> = (0..self.line.len()).filter(|&v| c.mask >> v & 1 == 1).collect();
        let mut roots: Vec<usize> = Vec::with_capacity(members.len());
        for &v in &members {
            if self.uses[v] >= if self.line[v] { 2 } else { 1 } {
                return None;
            }
            let r = self.find(v);
            if roots.contains(&r) {
                return None;
            }
            roots.push(r);
        }
        for &v in &members {
            self.uses[v] += 1;
        }
        for &r in &roots[1..] {
            self.parent[r] = roots[0];
        }
        Some(roots[1..].to_vec())
    }

    fn remove(&mut self, i: usize, links: Vec<usize>) {
        for r in links {
            self.parent[r] = r;
        }
        let mask = self.cands[i].mask;
        for v in 0..self.line.len() {
            if mask >> v & 1 == 1 {
                self.uses[v] -= 1;
            }
        }
    }

    fn consider(&mut self, uncut: u128, room: u128) {
        let cut = self.total_edges - uncut;
        if room > 0 && !self.pruned(cut, room) {
            let clusters: Vec<u32> = self.chosen.iter().map(|&i| self.cands[i].mask).collect();
            if realize(&clusters, self.dirs, self.k).is_some() {
                self.best = Some((cut, room));
                self.best_clusters = Some(self.chosen.clone());
            }
        }
    }

    /// Extends the chosen clusters with candidates from `from` on.
    fn go(&mut self, from: usize, uncut: u128, room: u128, budget: usize) {
        self.nodes += 1;
        for i in from..self.cands.len() {
            let c = &self.cands[i];
            if c.size - 1 > budget {
                continue;
            }
            let room = if self.chosen.is_empty() { self.total - c.weight.max(self.max_vertex) } else { room };
            let bound = self.total_edges - uncut - self.knap[i][budget].min(self.total_edges - uncut);
            if self.pruned(bound, room) {
                if self.chosen.is_empty() {
                    continue;
                }
                // later candidates are lighter but the bound only grows
                break;
            }
            let Some(links) = self.add(i) else { continue };
            self.chosen.push(i);
            let (inner, size) = (self.cands[i].inner, self.cands[i].size);
            self.consider(uncut + inner, room);
            self.go(i + 1, uncut + inner, room, budget - (size - 1));
            self.chosen.pop();
            self.remove(i, links);
        }
    }
}

/// Exact cb₀ of `quotient_by_subgroups(x, a)` for basis-line assignments
/// (see [`line_directions`]). The witness is the first optimum found.
pub fn basis_line_cb0(x: &WeightedComplex, a: &SubgroupAssignment) -> Result<BasisLineResult> {
    let dirs = line_directions(x, a)?;
    let f = a.ambient().field().expect("checked by line_directions");
    // the lines, completed by unit vectors to a basis of R
    let mut basis: Vec<Vec<u32>> =
        a.vertex.iter().filter_map(|s| s.basis().and_then(|b| b.first().cloned())).collect();
    let lines = basis.len();
    for i in 0..a.ambient().rank() {
        basis.push(a.ambient().unit(i));
        if crate::linalg::rank(f, &basis) < basis.len() {
            basis.pop();
        }
    }
    // a few spare coordinates already give every tree its own coset
    let n = x.num_vertices();
    let spare = (basis.len() - lines).min(usize::BITS as usize - (2 * n).leading_zeros() as usize);
    let k = lines + spare;
    let g = SimpleGraph::from_complex(x)?;
    let sw = ScaledWeights::new(x)?;
    let cands = candidates(&g, &sw);
    let mut knap = vec![vec![0u128; n]; cands.len() + 1];
    for i in (0..cands.len()).rev() {
        let (cost, val) = (cands[i].size - 1, cands[i].inner);
        for b in 0..n {
            let mut best = knap[i + 1][b];
            if cost <= b {
                best = best.max(knap[i][b - cost] + val);
            }
            knap[i][b] = best;
        }
    }
    let vw: Vec<u128> = sw.vertex.iter().map(|&w| w as u128).collect();
    let total: u128 = vw.iter().sum();
    let total_edges: u128 = sw.edge.iter().map(|&w| w as u128).sum();
    let max_vertex = vw.iter().copied().max().unwrap_or(0);
    let mut s = Search {
        cands: &cands,
        knap,
        line: dirs.iter().map(Option::is_some).collect(),
        total,
        total_edges,
        max_vertex,
        uses: vec![0; n],
        parent: (0..n).collect(),
        chosen: Vec::new(),
        best: None,
        best_clusters: None,
        dirs: &dirs,
        k,
        nodes: 0,
    };
    s.consider(0, total - max_vertex);
    s.go(0, 0, 0, n.saturating_sub(1));
    let nodes = s.nodes;
    let (Some((cut, dist)), Some(chosen)) = (s.best, s.best_clusters) else {
        return Ok(BasisLineResult {
            value: Expansion::Unconstrained,
            witness: None,
            witness_coboundary_norm: None,
            witness_distance: None,
            nodes,
        });
    };
    let clusters: Vec<u32> = chosen.iter().map(|&i| cands[i].mask).collect();
    let word = realize(&clusters, &dirs, k).expect("checked when recorded");
    let amb = a.ambient();
    let witness = (0..n)
        .map(|v| {
            let mut p = amb.zero();
            for (d, b) in basis.iter().enumerate() {
                if word[v] >> d & 1 == 1 {
                    p = amb.add(&p, b);
                }
            }
            a.vertex[v].canonical(amb, &p)
        })
        .collect();
    let scaled = |q: u128| Rational::new(q.into(), sw.denom.into());
    Ok(BasisLineResult {
        value: Expansion::Finite(Rational::new(cut.into(), dist.into())),
        witness: Some(witness),
        witness_coboundary_norm: Some(scaled(cut)),
        witness_distance: Some(scaled(dist)),
        nodes,
    })
}

/// Connected vertex sets with at least two vertices, heaviest first.
fn candidates(g: &SimpleGraph, sw: &ScaledWeights) -> Vec<Candidate> {
    let n = g.n();
    let adj: Vec<u32> =
        (0..n).map(|v| g.neighbors(v as u32).iter().fold(0u32, |m, &(u, _)| m | 1 << u)).collect();
    let mut out = Vec::new();
    for mask in 1u32..1 << n {
        if mask.count_ones() < 2 {
            continue;
        }
        let start = mask.trailing_zeros();
        let mut reach = 1u32 << start;
        loop {
            let grow = (0..n).filter(|&v| reach >> v & 1 == 1).fold(reach, |r, v| r | (adj[v] & mask));
            if grow == reach {
                break;
            }
            reach = grow;
        }
        if reach != mask {
            continue;
        }
        let weight = (0..n).filter(|&v| mask >> v & 1 == 1).map(|v| sw.vertex[v] as u128).sum();
        let inner = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| mask >> a & 1 == 1 && mask >> b & 1 == 1)
            .map(|(e, _)| sw.edge[e] as u128)
            .sum();
        out.push(Candidate { mask, size: mask.count_ones() as usize, weight, inner });
    }
    out.sort_by(|a, b| b.weight.cmp(&a.weight).then(b.inner.cmp(&a.inner)).then(a.mask.cmp(&b.mask)));
    out
}

/// Point coordinates (over the completed basis) of a cochain whose
/// clusters are exactly `clusters`, with distinct clusters on distinct
/// points; `None` if `k` coordinates are too few.
fn realize(clusters: &[u32], dirs: &[Option<usize>], k: usize) -> Option<Vec<u64>> {
    let n = dirs.len();
    // every vertex gets its clusters, then fresh singletons up to its arity
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (c, &mask) in clusters.iter().enumerate() {
        for (v, s) in slots.iter_mut().enumerate() {
            if mask >> v & 1 == 1 {
                s.push(c);
            }
        }
    }
    let mut nc = clusters.len();
    for (v, s) in slots.iter_mut().enumerate() {
        let arity = if dirs[v].is_some() { 2 } else { 1 };
        while s.len() < arity {
            s.push(nc);
            nc += 1;
        }
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nc];
    for (v, s) in slots.iter().enumerate() {
        if let Some(d) = dirs[v] {
            adj[s[0]].push((s[1], d));
            adj[s[1]].push((s[0], d));
        }
    }
    // offsets of each tree relative to its first cluster
    let mut trees: Vec<Vec<(usize, u64)>> = Vec::new();
    let mut seen = vec![false; nc];
    for root in 0..nc {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut offs = vec![(root, 0u64)];
        let mut i = 0;
        while i < offs.len() {
            let (c, o) = offs[i];
            for &(d, dir) in &adj[c] {
                if !seen[d] {
                    seen[d] = true;
                    offs.push((d, o ^ 1 << dir));
                }
            }
            i += 1;
        }
        trees.push(offs);
    }
    if nc as u128 > 1u128 << k {
        return None;
    }
    trees.sort_by_key(|t| std::cmp::Reverse(t.len()));
    fn place(trees: &[Vec<(usize, u64)>], i: usize, k: usize, used: &mut Vec<bool>, base: &mut Vec<u64>) -> bool {
        if i == trees.len() {
            return true;
        }
        // the first tree may sit at the origin by translation symmetry
        let range = if i == 0 { 1 } else { 1u64 << k };
        for b in 0..range {
            if trees[i].iter().all(|&(_, o)| !used[(b ^ o) as usize]) {
                for &(_, o) in &trees[i] {
                    used[(b ^ o) as usize] = true;
                }
                base.push(b);
                if place(trees, i + 1, k, used, base) {
                    return true;
                }
                base.pop();
                for &(_, o) in &trees[i] {
                    used[(b ^ o) as usize] = false;
                }
            }
        }
        false
    }
    let mut used = vec![false; 1 << k];
    let mut base = Vec::new();
    if !place(&trees, 0, k, &mut used, &mut base) {
        return None;
    }
    let mut point = vec![0u64; nc];
    for (t, b) in trees.iter().zip(base) {
        for &(c, o) in t {
            point[c] = b ^ o;
        }
    }
    Some(slots.iter().map(|s| point[s[0]]).collect())
}


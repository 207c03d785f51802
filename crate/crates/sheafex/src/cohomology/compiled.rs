//! Index-based cochain enumeration shared by the exact expansion routines.

use std::collections::{BTreeSet, HashMap};

use crate::complex::ScaledWeights;
use crate::error::{budget, Result};
use crate::linalg;
use crate::sheaf::AugmentedSheaf;

/// Coordinates of C⁰ over F_p when every face group is a quotient of `F_p^k`.
pub(crate) struct Linear {
    pub p: u32,
    /// `offsets[v]..offsets[v + 1]` are the coordinates of vertex `v`.
    pub offsets: Vec<usize>,
    /// Free ambient columns of each vertex group.
    pub free: Vec<Vec<usize>>,
    pub b0_basis: Vec<Vec<u32>>,
    pub b0_pivots: Vec<usize>,
}

pub(crate) struct Compiled<'a> {
    pub s: &'a AugmentedSheaf,
    pub sw: ScaledWeights,
    /// Canonical representatives of each `F(v)`, sorted by code.
    pub elems: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<u64, usize>>,
    /// `tab[e][side][i]`: code in `F(e)` of the restriction of `elems[end][i]`.
    tab: Vec<[Vec<u64>; 2]>,
    ends: Vec<[usize; 2]>,
    incident: Vec<Vec<usize>>,
    pub linear: Option<Linear>,
}

/// One position of the cochain odometer, acting on a vertex index.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Digit {
    pub vertex: usize,
    pub radix: usize,
    pub place: usize,
}

/// Minimum of `cut/dist` over visited cochains with positive distance.
pub(crate) struct Best {
    pub cut: u128,
    pub dist: u128,
    pub witness: Vec<usize>,
}

pub(crate) struct ScanOutcome {
    pub best: Option<Best>,
    pub visited: u128,
}

impl<'a> Compiled<'a> {
    pub fn new(s: &'a AugmentedSheaf) -> Result<Self> {
        let g = s.ambient();
        let x = s.complex();
        let sw = ScaledWeights::new(x)?;
        let n = s.num_vertices();
        let elems = (0..n).map(|v| s.vertex_sub(v).transversal(g)).collect::<Result<Vec<_>>>()?;
        let index = elems
            .iter()
            .map(|es| es.iter().enumerate().map(|(i, e)| (g.encode(e), i)).collect())
            .collect();
        let mut incident = vec![Vec::new(); n];
        let mut ends = Vec::new();
        let mut tab = Vec::new();
        for (e, face) in x.edges().iter().enumerate() {
            let (a, b) = (face[0] as usize, face[1] as usize);
            incident[a].push(e);
            incident[b].push(e);
            ends.push([a, b]);
            let side = |k: usize, v: usize| -> Vec<u64> {
                elems[v].iter().map(|el| g.encode(&s.res_edge_vertex(e, k, el))).collect()
            };
            tab.push([side(0, a), side(1, b)]);
        }
        let linear = match g.field() {
            Some(f) => {
                let free: Vec<Vec<usize>> =
                    (0..n).map(|v| s.vertex_sub(v).free_columns(g).expect("linear backend")).collect();
                let mut offsets = vec![0];
                for fr in &free {
                    offsets.push(offsets.last().unwrap() + fr.len());
                }
                let total = *offsets.last().unwrap();
                let mut b0_basis: Vec<Vec<u32>> = s
                    .empty_sub()
                    .free_columns(g)
                    .expect("linear backend")
                    .into_iter()
                    .map(|c| {
                        let u = g.unit(c);
                        let mut row = vec![0u32; total];
                        for v in 0..n {
                            let img = s.res_vertex(v, &u);
                            for (j, &col) in free[v].iter().enumerate() {
                                row[offsets[v] + j] = img[col];
                            }
                        }
                        row
                    })
                    .collect();
                let b0_pivots = linalg::rref(f, &mut b0_basis);
                Some(Linear { p: f.order(), offsets, free, b0_basis, b0_pivots })
            }
            None => None,
        };
        Ok(Compiled { s, sw, elems, index, tab, ends, incident, linear })
    }

    pub fn n(&self) -> usize {
        self.elems.len()
    }

    /// `|C⁰|`, saturating.
    pub fn c0_size(&self) -> u128 {
        self.elems.iter().fold(1u128, |acc, e| acc.saturating_mul(e.len() as u128))
    }

    pub fn index_of(&self, v: usize, value: &[u32]) -> usize {
        self.index[v][&self.s.ambient().encode(&self.s.canonical_vertex(v, value))]
    }

    pub fn to_values(&self, idx: &[usize]) -> Vec<Vec<u32>> {
        idx.iter().enumerate().map(|(v, &i)| self.elems[v][i].clone()).collect()
    }

    /// Vertex indices of a coordinate vector of C⁰.
    pub fn coords_to_indices(&self, c: &[u32]) -> Vec<usize> {
        let lin = self.linear.as_ref().expect("linear backend");
        (0..self.n())
            .map(|v| {
                c[lin.offsets[v]..lin.offsets[v + 1]]
                    .iter()
                    .rev()
                    .fold(0usize, |acc, &d| acc * lin.p as usize + d as usize)
            })
            .collect()
    }

    /// All `F_p`-combinations of `basis`, as vertex index vectors.
    pub fn span(&self, basis: &[Vec<u32>], cap: u128) -> Result<Vec<Vec<usize>>> {
        let lin = self.linear.as_ref().expect("linear backend");
        let p = lin.p as u128;
        let count = p.checked_pow(basis.len() as u32).unwrap_or(u128::MAX);
        budget("subspace enumeration", cap, count)?;
        let f = self.s.ambient().field().expect("linear backend");
        let total = *lin.offsets.last().unwrap();
        Ok((0..count)
            .map(|mut k| {
                let mut c = vec![0u32; total];
                for b in basis {
                    let coef = (k % p) as u32;
                    k /= p;
                    if coef != 0 {
                        for (x, &y) in c.iter_mut().zip(b) {
                            *x = f.add(*x, f.mul(coef, y));
                        }
                    }
                }
                self.coords_to_indices(&c)
            })
            .collect())
    }

    /// B⁰ as sorted vertex index vectors.
    pub fn b0(&self, cap: u128) -> Result<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<usize>> = match &self.linear {
            Some(lin) => self.span(&lin.b0_basis, cap)?,
            None => {
                let g = self.s.ambient();
                budget("enumeration of F(∅)", cap, self.s.empty_order() as u128)?;
                let set: BTreeSet<Vec<usize>> = self
                    .s
                    .empty_sub()
                    .transversal(g)?
                    .iter()
                    .map(|h| (0..self.n()).map(|v| self.index_of(v, &self.s.res_vertex(v, h))).collect())
                    .collect();
                set.into_iter().collect()
            }
        };
        out.sort();
        Ok(out)
    }

    /// Matrix of `d₀` from C⁰ coordinates to C¹ coordinates.
    pub fn d0_matrix(&self) -> Vec<Vec<u32>> {
        let lin = self.linear.as_ref().expect("linear backend");
        let g = self.s.ambient();
        let f = g.field().expect("linear backend");
        let efree: Vec<Vec<usize>> =
            (0..self.s.num_edges()).map(|e| self.s.edge_sub(e).free_columns(g).expect("linear")).collect();
        let cols = *lin.offsets.last().unwrap();
        let mut rows = Vec::new();
        for (e, ef) in efree.iter().enumerate() {
            let mut block = vec![vec![0u32; cols]; ef.len()];
            for side in 0..2 {
                let v = self.ends[e][side];
                for (j, &col) in lin.free[v].iter().enumerate() {
                    let img = self.s.res_edge_vertex(e, side, &g.unit(col));
                    for (r, &ec) in ef.iter().enumerate() {
                        let val = if side == 1 { img[ec] } else { f.neg(img[ec]) };
                        block[r][lin.offsets[v] + j] = f.add(block[r][lin.offsets[v] + j], val);
                    }
                }
            }
            rows.extend(block);
        }
        rows
    }

    pub fn z0_basis(&self) -> Vec<Vec<u32>> {
        let lin = self.linear.as_ref().expect("linear backend");
        let f = self.s.ambient().field().expect("linear backend");
        linalg::kernel(f, &self.d0_matrix(), *lin.offsets.last().unwrap())
    }

    /// Odometer over all of C⁰.
    pub fn full_digits(&self) -> Vec<Digit> {
        self.elems.iter().enumerate().map(|(v, e)| Digit { vertex: v, radix: e.len(), place: 1 }).collect()
    }

    /// Odometer over the coordinates not among `pivots`: a transversal of
    /// the subspace whose reduced basis has those pivots.
    pub fn complement_digits(&self, pivots: &[usize]) -> Vec<Digit> {
        let lin = self.linear.as_ref().expect("linear backend");
        let mut out = Vec::new();
        for v in 0..self.n() {
            let width = lin.offsets[v + 1] - lin.offsets[v];
            for j in (0..width).rev() {
                if !pivots.contains(&(lin.offsets[v] + j)) {
                    out.push(Digit { vertex: v, radix: lin.p as usize, place: (lin.p as usize).pow(j as u32) });
                }
            }
        }
        out
    }

    pub fn is_edge_nonzero(&self, e: usize, idx: &[usize]) -> bool {
        let [a, b] = self.ends[e];
        self.tab[e][0][idx[a]] != self.tab[e][1][idx[b]]
    }

    /// Scaled `‖d₀f‖`.
    pub fn cut(&self, idx: &[usize]) -> u128 {
        (0..self.ends.len()).filter(|&e| self.is_edge_nonzero(e, idx)).map(|e| self.sw.edge[e] as u128).sum()
    }

    /// Scaled `dist(f, t)`.
    pub fn disagreement(&self, a: &[usize], b: &[usize]) -> u128 {
        a.iter().zip(b).enumerate().filter(|(_, (x, y))| x != y).map(|(v, _)| self.sw.vertex[v] as u128).sum()
    }

    /// Scaled `‖f‖`.
    pub fn mass(&self, idx: &[usize]) -> u128 {
        idx.iter().enumerate().filter(|(_, &i)| i != 0).map(|(v, _)| self.sw.vertex[v] as u128).sum()
    }

    pub fn add(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let g = self.s.ambient();
        (0..self.n()).map(|v| self.index_of(v, &g.add(&self.elems[v][a[v]], &self.elems[v][b[v]]))).collect()
    }

    /// Lexicographically smallest element of `f + group`, comparing values.
    pub fn coset_min(&self, f: &[usize], group: &[Vec<usize>]) -> Vec<usize> {
        group.iter().map(|s| self.add(f, s)).min_by_key(|c| self.to_values(c)).unwrap_or_else(|| f.to_vec())
    }

    /// Cochain order: lexicographic on the value vectors.
    pub fn lex_less(&self, a: &[usize], b: &[usize]) -> bool {
        self.to_values(a) < self.to_values(b)
    }

    /// Minimizes `‖d₀f‖ / min_t dist(f, t)` over the odometer. Ties go to
    /// the lexicographically smallest element of `f + coset_group`.
    pub fn scan(&self, digits: &[Digit], targets: &[Vec<usize>], coset_group: &[Vec<usize>]) -> ScanOutcome {
        let n = self.n();
        let mut idx = vec![0usize; n];
        let mut d = vec![0usize; digits.len()];
        let mut cut = self.cut(&idx);
        let mut dis: Vec<u128> = targets.iter().map(|t| self.disagreement(&idx, t)).collect();
        let mut best: Option<Best> = None;
        let mut visited = 0u128;
        let set = |v: usize, new: usize, idx: &mut Vec<usize>, cut: &mut u128, dis: &mut Vec<u128>| {
            let old = idx[v];
            for &e in &self.incident[v] {
                let before = self.is_edge_nonzero(e, idx);
                idx[v] = new;
                let after = self.is_edge_nonzero(e, idx);
                idx[v] = old;
                let w = self.sw.edge[e] as u128;
                match (before, after) {
                    (false, true) => *cut += w,
                    (true, false) => *cut -= w,
                    _ => {}
                }
            }
            let w = self.sw.vertex[v] as u128;
            for (t, dd) in targets.iter().zip(dis.iter_mut()) {
                match (old != t[v], new != t[v]) {
                    (false, true) => *dd += w,
                    (true, false) => *dd -= w,
                    _ => {}
                }
            }
            idx[v] = new;
        };
        loop {
            visited += 1;
            let m = dis.iter().copied().min().unwrap_or(0);
            if m > 0 {
                let better = match &best {
                    None => true,
                    Some(b) => match (cut * b.dist).cmp(&(b.cut * m)) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => {
                            self.lex_less(&self.coset_min(&idx, coset_group), &self.coset_min(&b.witness, coset_group))
                        }
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some(Best { cut, dist: m, witness: idx.clone() });
                }
            }
            let mut k = digits.len();
            loop {
                if k == 0 {
                    let best = best.map(|b| Best { witness: self.coset_min(&b.witness, coset_group), ..b });
                    return ScanOutcome { best, visited };
                }
                k -= 1;
                let dg = digits[k];
                let v = dg.vertex;
                if d[k] + 1 < dg.radix {
                    d[k] += 1;
                    set(v, idx[v] + dg.place, &mut idx, &mut cut, &mut dis);
                    break;
                }
                let back = d[k] * dg.place;
                d[k] = 0;
                set(v, idx[v] - back, &mut idx, &mut cut, &mut dis);
            }
        }
    }

    /// Scaled quantity as an exact weight.
    pub fn weight(&self, scaled: u128) -> crate::scalar::Rational {
        crate::scalar::Rational::new(scaled.into(), self.sw.denom.into())
    }

    pub fn ratio(&self, cut: u128, dist: u128) -> crate::scalar::Rational {
        crate::scalar::Rational::new(cut.into(), dist.into())
    }

    pub fn check_budget(&self, cap: u128) -> Result<()> {
        budget("cochain enumeration |C⁰|", cap, self.c0_size())
    }
}

use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use super::cheeger::mask_to_set;
use super::operators::adjacency_matrix;
use super::spectrum::spectrum;
use super::SubsetMode;
use crate::complex::{skeleton, ScaledWeights, SimpleGraph, WeightedComplex};
use crate::error::{budget, Error, Result};
use crate::rng::seeded;
use crate::scalar::Rational;

/// Largest vertex count for the all-pairs scan.
pub const DEFAULT_EML_CAP: usize = 14;

/// Outcome of a mixing-lemma scan. Slacks are `bound − deviation`, so a
/// negative slack beyond the tolerance is a violation.
#[derive(Clone, Debug, Serialize)]
pub struct EmlReport {
    pub mode: SubsetMode,
    pub pairs_checked: u64,
    /// Pairs where `⟨𝒜1_A, 1_B⟩ ≠ ½w(E_ord(A,B))` in exact arithmetic.
    pub lemma31_failures: u64,
    /// Interval used for the bounds (C⁰∘ for graphs, C⁰⋄ for partite).
    pub mu: f64,
    pub lambda: f64,
    /// Number of pairs whose class supports were disjoint (partite only).
    pub split_pairs: u64,
    pub worst_slack_i: Option<f64>,
    pub worst_pair_i: Option<(Vec<u32>, Vec<u32>)>,
    pub worst_slack_ii: Option<f64>,
    pub worst_pair_ii: Option<(Vec<u32>, Vec<u32>)>,
    pub violations: u64,
    pub tolerance: f64,
    pub holds: bool,
}

struct Ctx {
    n: usize,
    denom: f64,
    vertex: Vec<u64>,
    nbrs: Vec<Vec<(usize, u64)>>,
    /// `2·denom·w(x)M[x][y]`, read off the operator matrix.
    p: Vec<Vec<u64>>,
    class: Vec<usize>,
    k: usize,
}

impl Ctx {
    fn new(x: &WeightedComplex) -> Result<Self> {
        let g = SimpleGraph::from_complex(x)?;
        let sw = ScaledWeights::new(x)?;
        let n = g.n();
        let m = adjacency_matrix(x)?;
        let scale = Rational::from_integer((2 * sw.denom).into());
        let mut p = vec![vec![0u64; n]; n];
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let s = v * &x.vertex_weights()[i] * &scale;
                if !s.is_integer() {
                    return Err(Error::Overflow);
                }
                p[i][j] = s.to_integer().to_u64().ok_or(Error::Overflow)?;
            }
        }
        let nbrs = (0..n as u32)
            .map(|v| g.neighbors(v).iter().map(|&(u, e)| (u as usize, sw.edge[e])).collect())
            .collect();
        let class: Vec<usize> = match x.partite() {
            Some(c) => c.iter().map(|&c| c as usize).collect(),
            None => vec![0; n],
        };
        let k = class.iter().max().map_or(0, |m| m + 1);
        Ok(Ctx { n, denom: sw.denom as f64, vertex: sw.vertex, nbrs, p, class, k })
    }
}

/// Per-set data of the left argument.
struct Left {
    mask: u64,
    se: Vec<u64>,
    sp: Vec<u64>,
    mass: u64,
    class_mass: Vec<u64>,
    classes: u64,
}

impl Left {
    fn new(c: &Ctx, mask: u64) -> Self {
        let mut se = vec![0; c.n];
        let mut sp = vec![0; c.n];
        let mut class_mass = vec![0; c.k];
        let mut mass = 0;
        let mut classes = 0u64;
        for x in 0..c.n {
            se[x] = c.nbrs[x].iter().filter(|(y, _)| mask >> y & 1 == 1).map(|(_, w)| w).sum();
            sp[x] = (0..c.n).filter(|y| mask >> y & 1 == 1).map(|y| c.p[x][y]).sum();
            if mask >> x & 1 == 1 {
                mass += c.vertex[x];
                class_mass[c.class[x]] += c.vertex[x];
                classes |= 1 << c.class[x];
            }
        }
        Left { mask, se, sp, mass, class_mass, classes }
    }
}

/// Running data of the right argument.
struct Right {
    mask: u64,
    s: u64,
    l: u64,
    mass: u64,
    class_mass: Vec<u64>,
    class_count: Vec<u32>,
}

impl Right {
    fn empty(c: &Ctx) -> Self {
        Right { mask: 0, s: 0, l: 0, mass: 0, class_mass: vec![0; c.k], class_count: vec![0; c.k] }
    }
    fn toggle(&mut self, c: &Ctx, a: &Left, v: usize) {
        let cl = c.class[v];
        if self.mask >> v & 1 == 0 {
            self.mask |= 1 << v;
            self.s += a.se[v];
            self.l += a.sp[v];
            self.mass += c.vertex[v];
            self.class_mass[cl] += c.vertex[v];
            self.class_count[cl] += 1;
        } else {
            self.mask &= !(1 << v);
            self.s -= a.se[v];
            self.l -= a.sp[v];
            self.mass -= c.vertex[v];
            self.class_mass[cl] -= c.vertex[v];
            self.class_count[cl] -= 1;
        }
    }
    fn of(c: &Ctx, a: &Left, mask: u64) -> Self {
        let mut r = Right::empty(c);
        for v in 0..c.n {
            if mask >> v & 1 == 1 {
                r.toggle(c, a, v);
            }
        }
        r
    }
    fn classes(&self) -> u64 {
        self.class_count.iter().enumerate().filter(|(_, &k)| k > 0).fold(0, |m, (i, _)| m | 1 << i)
    }
}

#[derive(Clone, Copy)]
enum Kind {
    Graph,
    Partite,
}

struct Tally<'a> {
    c: &'a Ctx,
    kind: Kind,
    mu: f64,
    lambda: f64,
    tol: f64,
    pairs: u64,
    lemma31_failures: u64,
    split: u64,
    violations: u64,
    worst_i: Option<(f64, u64, u64)>,
    worst_ii: Option<(f64, u64, u64)>,
}

fn sq(v: f64) -> f64 {
    v.max(0.0).sqrt()
}

fn record(slot: &mut Option<(f64, u64, u64)>, slack: f64, a: u64, b: u64) {
    if slot.is_none_or(|(s, _, _)| slack < s) {
        *slot = Some((slack, a, b));
    }
}

impl Tally<'_> {
    fn pair(&mut self, a: &Left, b: &Right) {
        let c = self.c;
        self.pairs += 1;
        if a.mask == b.mask {
            debug_assert_eq!(b.s, b.l);
        }
        if b.s != b.l {
            self.lemma31_failures += 1;
        }
        let e = b.s as f64 / (2.0 * c.denom);
        let al = a.mass as f64 / c.denom;
        let be = b.mass as f64 / c.denom;
        let big = self.lambda.abs().max(self.mu.abs());
        let (mut s1, mut s2) = (None, None);
        match self.kind {
            Kind::Graph => {
                s1 = Some(big * sq(al * be * (1.0 - al) * (1.0 - be)) - (e - al * be).abs());
                if a.mask == b.mask {
                    let dev = e - al * al;
                    let spread = al * (1.0 - al);
                    s2 = Some((dev - self.mu * spread).min(self.lambda * spread - dev));
                }
            }
            Kind::Partite => {
                let r = (c.k - 1) as f64;
                let cross: f64 = a
                    .class_mass
                    .iter()
                    .zip(&b.class_mass)
                    .map(|(&x, &y)| x as f64 * y as f64)
                    .sum::<f64>()
                    / (c.denom * c.denom);
                let main = (r + 1.0) / r * (al * be - cross);
                s2 = Some(self.lambda * r * sq(al * be * (1.0 - al) * (1.0 - be)) - (e - main).abs());
                let bc = b.classes();
                if a.classes & bc == 0 {
                    self.split += 1;
                    let t = a.classes.count_ones() as f64 / (r + 1.0);
                    let s = bc.count_ones() as f64 / (r + 1.0);
                    let bound = self.lambda * (r + 1.0) * sq(al * be * (t - al) * (s - be));
                    s1 = Some(bound - (e - (r + 1.0) / r * al * be).abs());
                }
            }
        }
        for (slack, slot) in [(s1, &mut self.worst_i), (s2, &mut self.worst_ii)] {
            if let Some(v) = slack {
                if v < -self.tol {
                    self.violations += 1;
                }
                record(slot, v, a.mask, b.mask);
            }
        }
    }

    fn finish(self, mode: SubsetMode) -> EmlReport {
        let n = self.c.n;
        let pair = |s: Option<(f64, u64, u64)>| s.map(|(_, a, b)| (mask_to_set(a, n), mask_to_set(b, n)));
        EmlReport {
            mode,
            pairs_checked: self.pairs,
            lemma31_failures: self.lemma31_failures,
            mu: self.mu,
            lambda: self.lambda,
            split_pairs: self.split,
            worst_slack_i: self.worst_i.map(|s| s.0),
            worst_pair_i: pair(self.worst_i),
            worst_slack_ii: self.worst_ii.map(|s| s.0),
            worst_pair_ii: pair(self.worst_ii),
            violations: self.violations,
            tolerance: self.tol,
            holds: self.violations == 0 && self.lemma31_failures == 0,
        }
    }
}

fn random_mask(rng: &mut impl Rng, allowed: u64, n: usize) -> u64 {
    (0..n).filter(|&i| allowed >> i & 1 == 1 && rng.gen_bool(0.5)).fold(0, |m, i| m | 1 << i)
}

fn run(x: &WeightedComplex, kind: Kind, mode: SubsetMode, cap: usize, tol: f64) -> Result<EmlReport> {
    let c = Ctx::new(x)?;
    let n = c.n;
    if n > 63 {
        return Err(Error::PreconditionViolated("subset masks hold at most 63 vertices".into()));
    }
    let s = spectrum(x)?;
    let interval = match kind {
        Kind::Graph => s.interval_circ,
        Kind::Partite => s.interval_diamond,
    };
    // a one-point space has an empty C⁰∘; any interval works
    let (mu, lambda) = interval.unwrap_or((0.0, 0.0));
    let (mu, lambda) = match kind {
        Kind::Graph => (mu, lambda),
        Kind::Partite => {
            let l = mu.abs().max(lambda.abs());
            (-l, l)
        }
    };
    let mut t = Tally {
        c: &c,
        kind,
        mu,
        lambda,
        tol,
        pairs: 0,
        lemma31_failures: 0,
        split: 0,
        violations: 0,
        worst_i: None,
        worst_ii: None,
    };
    let full = (1u64 << n) - 1;
    match mode {
        SubsetMode::Exhaustive => {
            budget("exhaustive EML vertex count", cap as u128, n as u128)?;
            for am in 0..=full {
                let a = Left::new(&c, am);
                let mut b = Right::empty(&c);
                t.pair(&a, &b);
                for k in 1..=full {
                    b.toggle(&c, &a, k.trailing_zeros() as usize);
                    t.pair(&a, &b);
                }
            }
        }
        SubsetMode::Sampled { seed, trials } => {
            let mut rng = seeded(seed);
            for trial in 0..trials {
                let (am, bm) = match kind {
                    Kind::Partite if trial % 2 == 0 && c.k > 1 => {
                        // A inside a proper class union, B in the rest
                        let tm = loop {
                            let tm = random_mask(&mut rng, (1 << c.k) - 1, c.k);
                            if tm != 0 && tm != (1 << c.k) - 1 {
                                break tm;
                            }
                        };
                        let inside: u64 = (0..n).filter(|&v| tm >> c.class[v] & 1 == 1).fold(0, |m, v| m | 1 << v);
                        (random_mask(&mut rng, inside, n), random_mask(&mut rng, full & !inside, n))
                    }
                    _ => (random_mask(&mut rng, full, n), random_mask(&mut rng, full, n)),
                };
                let a = Left::new(&c, am);
                t.pair(&a, &Right::of(&c, &a, bm));
                if matches!(kind, Kind::Graph) {
                    t.pair(&a, &Right::of(&c, &a, am));
                }
            }
        }
    }
    Ok(t.finish(mode))
}

/// Checks the ordered-edge identity and the weighted mixing bounds on every
/// visited pair `(A, B)`, against the interval on C⁰∘.
pub fn eml_check(x: &WeightedComplex, mode: SubsetMode, tol: f64) -> Result<EmlReport> {
    x.require_graph()?;
    run(x, Kind::Graph, mode, DEFAULT_EML_CAP, tol)
}

/// Partite mixing bounds on the 1-skeleton with λ from the C⁰⋄ interval.
/// The split bound is checked whenever the class supports of A and B are
/// disjoint; the general bound on every pair. Sampled mode alternates
/// split pairs with unconstrained ones.
pub fn partite_eml_check(x: &WeightedComplex, mode: SubsetMode, tol: f64) -> Result<EmlReport> {
    let k = x
        .num_classes()
        .ok_or_else(|| Error::PreconditionViolated("no partite labeling".into()))?;
    if k < 2 {
        return Err(Error::PreconditionViolated("need at least two classes".into()));
    }
    let g = if x.dimension() > 1 { skeleton(x, 1)? } else { x.clone() };
    run(&g, Kind::Partite, mode, DEFAULT_EML_CAP, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{bipartite_complex, complete, complete_bipartite, graph_complex, path};

    #[test]
    fn k3_all_pairs() {
        let k3 = graph_complex(&complete(3)).unwrap();
        let r = eml_check(&k3, SubsetMode::Exhaustive, 1e-9).unwrap();
        assert_eq!(r.pairs_checked, 64);
        assert!(r.holds, "{r:?}");
        // A = B = X(0) has zero slack in (ii)
        assert!(r.worst_slack_ii.unwrap().abs() < 1e-12);
    }

    #[test]
    fn a_equals_everything() {
        let p3 = graph_complex(&path(3)).unwrap();
        let c = Ctx::new(&p3).unwrap();
        let a = Left::new(&c, 0b111);
        let b = Right::of(&c, &a, 0b111);
        // ½w(E_ord(X,X)) = 1
        assert_eq!(b.s as f64 / (2.0 * c.denom), 1.0);
        assert_eq!(b.s, b.l);
    }

    #[test]
    fn partite_bipartite_graphs() {
        for g in [path(4), complete_bipartite(2, 3), crate::catalog::cycle(6)] {
            let x = bipartite_complex(&g).unwrap();
            let r = partite_eml_check(&x, SubsetMode::Exhaustive, 1e-9).unwrap();
            assert!(r.holds, "{r:?}");
            assert!(r.split_pairs > 0);
            let s = partite_eml_check(&x, SubsetMode::Sampled { seed: 5, trials: 200 }, 1e-9).unwrap();
            assert!(s.holds);
        }
    }

    #[test]
    fn detects_wrong_interval() {
        // with λ forced to zero the K_{2,3} general bound must fail somewhere
        let x = bipartite_complex(&complete_bipartite(2, 3)).unwrap();
        let c = Ctx::new(&x).unwrap();
        let mut t = Tally {
            c: &c,
            kind: Kind::Graph,
            mu: 0.0,
            lambda: 0.0,
            tol: 1e-9,
            pairs: 0,
            lemma31_failures: 0,
            split: 0,
            violations: 0,
            worst_i: None,
            worst_ii: None,
        };
        let a = Left::new(&c, 0b00011);
        t.pair(&a, &Right::of(&c, &a, 0b00011));
        assert!(t.violations > 0);
    }
}

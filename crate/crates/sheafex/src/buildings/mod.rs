//! The flag complexes `A_n(F_q)`, thickness, Coxeter-diagram constants and
//! the spectral and coboundary bounds for thick spherical buildings.

mod subspace;

use serde::Serialize;

use crate::complex::{build_complex, canonical_weights, WeightedComplex};
use crate::error::{budget, Error, Result};
use crate::ff::GaloisField;
use crate::scalar::{rat_int, Rational};

pub use subspace::{gaussian_binomial, subspaces, Subspace};

/// Largest field order served by [`field`].
pub const MAX_FIELD_ORDER: u32 = 64;
/// Default cap on subspaces plus maximal flags in [`build_an`].
pub const DEFAULT_BUILDING_BUDGET: u128 = 1_000_000;

/// `GF(q)` for a prime power `q ≤ 64`.
pub fn field(q: u32) -> Result<GaloisField> {
    crate::ff::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if q > MAX_FIELD_ORDER {
        return Err(Error::PreconditionViolated(format!("field order {q} exceeds {MAX_FIELD_ORDER}")));
    }
    GaloisField::new(q)
}

/// Vertex identifier: dimension, then the echelon entries, zero-padded so
/// identifiers sort by dimension first.
fn subspace_id(s: &Subspace) -> String {
    let entries: Vec<String> = s.rows().iter().flatten().map(|c| format!("{c:02}")).collect();
    format!("{}:{}", s.dim(), entries.join("."))
}

/// Number of maximal flags of `F_q^{n+1}`: `Π_{i ≤ n+1} [i]_q`.
fn maximal_flags(q: u128, n: usize) -> u128 {
    (1..=n as u32 + 1).fold(1u128, |acc, i| acc.saturating_mul((0..i).map(|j| q.pow(j)).sum::<u128>()))
}

/// The flag complex of nontrivial proper subspaces of `F_q^{n+1}` with
/// canonical weights; vertex class = subspace dimension − 1.
pub fn build_an(q: u32, n: usize, cap: u128) -> Result<WeightedComplex> {
    if n < 2 {
        return Err(Error::PreconditionViolated("A_n needs n ≥ 2".into()));
    }
    let f = field(q)?;
    let dim = n + 1;
    let vertices: u128 = (1..dim).map(|k| gaussian_binomial(q as u128, dim, k)).sum();
    budget("subspaces and flags", cap, vertices.saturating_add(maximal_flags(q as u128, n)))?;
    let levels: Vec<Vec<Subspace>> = (1..dim).map(|k| subspaces(&f, dim, k)).collect();
    // up[k][i]: indices of (k+2)-dimensional spaces containing levels[k][i]
    let up: Vec<Vec<Vec<usize>>> = (0..levels.len() - 1)
        .map(|k| {
            levels[k]
                .iter()
                .map(|a| (0..levels[k + 1].len()).filter(|&j| levels[k + 1][j].contains(&f, a)).collect())
                .collect()
        })
        .collect();
    let ids: Vec<Vec<String>> = levels.iter().map(|l| l.iter().map(subspace_id).collect()).collect();
    let mut tops: Vec<Vec<String>> = Vec::new();
    let mut chain: Vec<usize> = Vec::with_capacity(n);
    fn extend(
        k: usize,
        chain: &mut Vec<usize>,
        up: &[Vec<Vec<usize>>],
        ids: &[Vec<String>],
        out: &mut Vec<Vec<String>>,
    ) {
        if k == ids.len() {
            out.push(chain.iter().enumerate().map(|(d, &i)| ids[d][i].clone()).collect());
            return;
        }
        let next: Vec<usize> = if k == 0 { (0..ids[0].len()).collect() } else { up[k - 1][chain[k - 1]].clone() };
        for j in next {
            chain.push(j);
            extend(k + 1, chain, up, ids, out);
            chain.pop();
        }
    }
    extend(0, &mut chain, &up, &ids, &mut tops);
    let shell = build_complex(&tops)?;
    let classes: Vec<u32> =
        shell.vertex_ids().iter().map(|id| id.split(':').next().unwrap().parse::<u32>().unwrap() - 1).collect();
    Ok(canonical_weights(&shell.with_partite(classes)?))
}

/// Least number of top faces over codimension-one faces.
pub fn thickness(x: &WeightedComplex) -> u64 {
    let c = x.complex();
    let d = c.dimension() as isize;
    let mut count = vec![0u64; c.faces(d - 1).len()];
    for top in c.top_faces() {
        for skip in 0..top.len() {
            let mut sub = top.clone();
            sub.remove(skip);
            count[c.face_index(&sub).expect("downward closed")] += 1;
        }
    }
    count.into_iter().min().unwrap_or(0)
}

/// A Coxeter diagram given by its labeled edges; unlisted pairs commute.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoxeterDiagram {
    pub name: String,
    pub vertices: usize,
    pub edges: Vec<(usize, usize, u32)>,
}

impl CoxeterDiagram {
    fn chain(name: String, vertices: usize, last_label: u32) -> Self {
        let edges = (1..vertices).map(|i| (i - 1, i, if i + 1 == vertices { last_label } else { 3 })).collect();
        CoxeterDiagram { name, vertices, edges }
    }
    /// Path on `n` vertices, all labels 3.
    pub fn a(n: usize) -> Self {
        Self::chain(format!("A{n}"), n, 3)
    }
    /// Path on `n ≥ 2` vertices with one end labeled 4.
    pub fn c(n: usize) -> Self {
        assert!(n >= 2);
        Self::chain(format!("C{n}"), n, 4)
    }
    pub fn g2() -> Self {
        Self::chain("G2".into(), 2, 6)
    }
    /// `m(T) = max({2} ∪ labels)`.
    pub fn m(&self) -> u32 {
        self.edges.iter().map(|e| e.2).fold(2, u32::max)
    }
    /// Dimension `r` of a building of this type.
    pub fn rank(&self) -> u32 {
        self.vertices as u32 - 1
    }
}

fn check_thick(q: u64, r: u32, m: u32) -> Result<()> {
    if r == 0 {
        return Err(Error::PreconditionViolated("r must be at least 1".into()));
    }
    if (q as u128) < (r as u128).pow(2) * (m.saturating_sub(2)) as u128 {
        return Err(Error::PreconditionViolated(format!("q = {q} < r²(m−2) = {}", r * r * (m.saturating_sub(2)))));
    }
    Ok(())
}

/// `λ = √(m−2) / (√q − (r−1)√(m−2))` for a `q`-thick building of
/// dimension `r`; requires `q ≥ r²(m−2)`.
pub fn theorem72_bound(q: u64, r: u32, m: u32) -> Result<f64> {
    check_thick(q, r, m)?;
    let s = ((m - 2) as f64).sqrt();
    Ok(s / ((q as f64).sqrt() - (r - 1) as f64 * s))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorollaryBounds {
    /// cb₀ of constant augmented sheaves: `1 − λ`.
    pub cor74: f64,
    /// cb₀ of quotient sheaves with disjoint subgroups.
    pub cor76: f64,
    /// `cor76` with the `s` term dropped, available when `r = 1`.
    pub cor76_s_elided: Option<f64>,
}

/// Closed-form cb₀ lower bounds for a `q`-thick building of dimension `r`.
pub fn corollary_bounds(q: u64, r: u32, m: u32) -> Result<CorollaryBounds> {
    let lambda = theorem72_bound(q, r, m)?;
    let (rf, qf) = (r as f64, q as f64);
    let head = 2.0 * rf / (5.0 * rf + 2.0) - (4.0 * rf.powi(3) + 4.0 * rf) * lambda / (5.0 * rf + 2.0);
    Ok(CorollaryBounds {
        cor74: 1.0 - lambda,
        cor76: head - (14.0 * rf + 4.0) / ((5.0 * rf + 2.0) * (qf + rf - 1.0)),
        cor76_s_elided: (r == 1).then(|| head - 2.0 / (qf + rf - 1.0)),
    })
}

/// One row of the threshold table for the quotient-sheaf bound.
#[derive(Clone, Debug, Serialize)]
pub struct Table77Row {
    pub dimension: u32,
    pub diagram: String,
    pub m: u32,
    pub s_elided: bool,
    pub formula: String,
    /// Least `q` with a positive bound.
    pub threshold: u64,
    pub value_at_threshold: f64,
    pub value_below_threshold: Option<f64>,
}

fn table_value(q: u64, r: u32, m: u32) -> Result<f64> {
    let b = corollary_bounds(q, r, m)?;
    Ok(b.cor76_s_elided.unwrap_or(b.cor76))
}

fn table_formula(r: u32, m: u32) -> String {
    use num_integer::Integer;
    let reduce = |n: u32, d: u32| (n / n.gcd(&d), d / n.gcd(&d));
    let root = if m == 3 { String::new() } else { format!("*sqrt({})", m - 2) };
    let den = 5 * r + 2;
    let (a, b) = reduce(2 * r, den);
    let (c, cd) = reduce(4 * r * r * r + 4 * r, den);
    let mid = if r == 1 {
        format!("{c}{root}/({cd}*sqrt(q))")
    } else {
        let sm = if m == 3 { "1".to_string() } else { format!("sqrt({})", m - 2) };
        let shift = if r == 2 { sm } else { format!("{}*{sm}", r - 1) };
        format!("{c}{root}/({cd}*(sqrt(q) - {shift}))")
    };
    let last = if r == 1 {
        "2/q".to_string()
    } else {
        let (e, ed) = reduce(14 * r + 4, den);
        format!("{e}/({ed}*(q + {}))", r - 1)
    };
    format!("{a}/{b} - {mid} - {last}")
}

/// Threshold rows for `A2, C2, G2` (dimension 1, `s` elided) and `A3, C3`
/// (dimension 2).
pub fn table77() -> Result<Vec<Table77Row>> {
    let diagrams = [CoxeterDiagram::a(2), CoxeterDiagram::c(2), CoxeterDiagram::g2(), CoxeterDiagram::a(3), CoxeterDiagram::c(3)];
    diagrams
        .iter()
        .map(|d| {
            let (r, m) = (d.rank(), d.m());
            let start = ((r * r * (m - 2)) as u64).max(1);
            let threshold = (start..1 << 32)
                .find(|&q| table_value(q, r, m).is_ok_and(|v| v > 0.0))
                .ok_or_else(|| Error::PreconditionViolated(format!("no positive bound for {}", d.name)))?;
            Ok(Table77Row {
                dimension: r,
                diagram: d.name.clone(),
                m,
                s_elided: r == 1,
                formula: table_formula(r, m),
                threshold,
                value_at_threshold: table_value(threshold, r, m)?,
                value_below_threshold: table_value(threshold - 1, r, m).ok(),
            })
        })
        .collect()
}

/// Result of checking `w(e)/w(x) ≤ 2/(q+r−1)` on every incident pair.
#[derive(Clone, Debug, Serialize)]
pub struct WeightRatioReport {
    pub q: u64,
    pub r: u32,
    pub thickness: u64,
    /// `thickness ≥ q`; the bound is only claimed then.
    pub thick_enough: bool,
    #[serde(serialize_with = "crate::scalar::ser_rational")]
    pub bound: Rational,
    #[serde(serialize_with = "crate::scalar::ser_rational")]
    pub max_ratio: Rational,
    #[serde(serialize_with = "crate::scalar::ser_rational")]
    pub slack: Rational,
    /// Edge index and vertex attaining the maximum.
    pub witness: Option<(usize, u32)>,
    pub holds: bool,
}

pub fn check_weight_ratio(x: &WeightedComplex, q: u64) -> Result<WeightRatioReport> {
    let r = x.dimension() as u32;
    if r == 0 || q + r as u64 <= 1 {
        return Err(Error::PreconditionViolated("needs dimension ≥ 1 and q + r > 1".into()));
    }
    let bound = Rational::new(2.into(), (q as i64 + r as i64 - 1).into());
    let mut best: Option<(Rational, (usize, u32))> = None;
    for (e, face) in x.edges().iter().enumerate() {
        for &v in face {
            let ratio = x.edge_weights()[e].clone() / &x.vertex_weights()[v as usize];
            if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
                best = Some((ratio, (e, v)));
            }
        }
    }
    let t = thickness(x);
    let (max_ratio, witness) = match best {
        Some((m, w)) => (m, Some(w)),
        None => (rat_int(0), None),
    };
    Ok(WeightRatioReport {
        q,
        r,
        thickness: t,
        thick_enough: t >= q,
        slack: &bound - &max_ratio,
        holds: max_ratio <= bound,
        bound,
        max_ratio,
        witness,
    })
}

#[cfg(test)]
mod tests;

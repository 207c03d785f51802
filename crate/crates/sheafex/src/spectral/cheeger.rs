use std::cmp::Ordering;

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use super::spectrum::spectrum;
use super::SubsetMode;
use crate::complex::{ScaledWeights, SimpleGraph, WeightedComplex};
use crate::error::{budget, Error, Result};
use crate::rng::seeded;
use crate::scalar::{rational_to_f64, Rational};

/// Largest vertex count for the exhaustive subset scan.
pub const DEFAULT_CHEEGER_CAP: usize = 22;

/// Cheeger constants with minimizing vertex sets.
///
/// In sampled mode both values are upper bounds only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheegerReport {
    pub h: Rational,
    pub h_prime: Rational,
    pub witness_h: Vec<u32>,
    pub witness_h_prime: Vec<u32>,
    pub exact: bool,
    pub mode: SubsetMode,
}

/// `a/b` vs `c/d` for nonnegative values with positive denominators.
pub(crate) fn cmp_frac(a: u128, b: u128, c: u128, d: u128) -> Ordering {
    match (a.checked_mul(d), c.checked_mul(b)) {
        (Some(x), Some(y)) => x.cmp(&y),
        _ => (BigUint::from(a) * BigUint::from(d)).cmp(&(BigUint::from(c) * BigUint::from(b))),
    }
}

pub(crate) fn mask_to_set(mask: u64, n: usize) -> Vec<u32> {
    (0..n as u32).filter(|i| mask >> i & 1 == 1).collect()
}

/// Lexicographic order of the sorted index lists.
fn lex_cmp(a: u64, b: u64, n: usize) -> Ordering {
    mask_to_set(a, n).cmp(&mask_to_set(b, n))
}

struct Best {
    num: u128,
    den: u128,
    mask: u64,
}

impl Best {
    fn offer(&mut self, num: u128, den: u128, mask: u64, n: usize) {
        let ord = if self.den == 0 { Ordering::Less } else { cmp_frac(num, den, self.num, self.den) };
        if ord == Ordering::Less || (ord == Ordering::Equal && lex_cmp(mask, self.mask, n) == Ordering::Less) {
            *self = Best { num, den, mask };
        }
    }
    fn value(&self) -> Rational {
        Rational::new(self.num.into(), self.den.into())
    }
}

/// Exact `h` and `h′` when `|X(0)| ≤ 22`.
pub fn cheeger(x: &WeightedComplex) -> Result<CheegerReport> {
    cheeger_with(x, SubsetMode::Exhaustive, DEFAULT_CHEEGER_CAP)
}

/// `h = min w(E(A,Aᶜ))/min(w(A),w(Aᶜ))`, `h′ = min w(E(A,Aᶜ))/(2w(A)w(Aᶜ))`
/// over nonempty proper subsets; ties go to the lexicographically smallest set.
pub fn cheeger_with(x: &WeightedComplex, mode: SubsetMode, cap: usize) -> Result<CheegerReport> {
    let g = SimpleGraph::from_complex(x)?;
    let sw = ScaledWeights::new(x)?;
    let n = g.n();
    if n < 2 {
        return Err(Error::PreconditionViolated("Cheeger constants need two vertices".into()));
    }
    let d = sw.denom as u128;
    let mut bh = Best { num: 0, den: 0, mask: 0 };
    let mut bhp = Best { num: 0, den: 0, mask: 0 };
    let mut offer = |mask: u64, cut: u128, wa: u128| {
        if wa == 0 || wa == d {
            return;
        }
        bh.offer(cut, wa.min(d - wa), mask, n);
        bhp.offer(cut * d, 2 * wa * (d - wa), mask, n);
    };
    match mode {
        SubsetMode::Exhaustive => {
            budget("exact Cheeger vertex count", cap as u128, n as u128)?;
            let mut in_set = vec![false; n];
            let (mut mask, mut cut, mut wa) = (0u64, 0u128, 0u128);
            for k in 1u64..(1 << n) - 1 {
                // Gray code: flip the lowest set bit position of k
                let v = k.trailing_zeros() as usize;
                in_set[v] = !in_set[v];
                mask ^= 1 << v;
                if in_set[v] {
                    wa += sw.vertex[v] as u128;
                } else {
                    wa -= sw.vertex[v] as u128;
                }
                for &(u, e) in g.neighbors(v as u32) {
                    let w = sw.edge[e] as u128;
                    if in_set[u as usize] != in_set[v] {
                        cut += w;
                    } else {
                        cut -= w;
                    }
                }
                offer(mask, cut, wa);
            }
        }
        SubsetMode::Sampled { seed, trials } => {
            let mut rng = seeded(seed);
            for _ in 0..trials {
                let mask: u64 = (0..n).filter(|_| rng.gen_bool(0.5)).fold(0, |m, i| m | 1 << i);
                let cut: u128 = g
                    .edges()
                    .iter()
                    .zip(&sw.edge)
                    .filter(|(&(a, b), _)| (mask >> a & 1) != (mask >> b & 1))
                    .map(|(_, &w)| w as u128)
                    .sum();
                offer(mask, cut, sw.vertex_mass(mask) as u128);
            }
            if bh.den == 0 {
                return Err(Error::PreconditionViolated("no proper subset was sampled".into()));
            }
        }
    }
    Ok(CheegerReport {
        h: bh.value(),
        h_prime: bhp.value(),
        witness_h: mask_to_set(bh.mask, n),
        witness_h_prime: mask_to_set(bhp.mask, n),
        exact: mode == SubsetMode::Exhaustive,
        mode,
    })
}

/// Margins of `h′ ≥ 1 − λmax` and `λmax ≤ √(1 − h²/4)`, with λmax the top
/// of the spectrum on C⁰∘.
#[derive(Clone, Debug, Serialize)]
pub struct CheegerInequalityReport {
    pub h: f64,
    pub h_prime: f64,
    pub lambda_max: f64,
    /// `h′ − (1 − λmax)`.
    pub lower_margin: f64,
    /// `√(1 − h²/4) − λmax`.
    pub converse_margin: f64,
    pub holds: bool,
}

pub fn check_cheeger_inequality(x: &WeightedComplex, tol: f64) -> Result<CheegerInequalityReport> {
    let c = cheeger(x)?;
    let s = spectrum(x)?;
    let (_, lambda_max) = s.interval_circ.expect("at least two vertices");
    let h = rational_to_f64(&c.h);
    let h_prime = rational_to_f64(&c.h_prime);
    let lower_margin = h_prime - (1.0 - lambda_max);
    let converse_margin = (1.0 - h * h / 4.0).max(0.0).sqrt() - lambda_max;
    Ok(CheegerInequalityReport {
        h,
        h_prime,
        lambda_max,
        lower_margin,
        converse_margin,
        holds: lower_margin >= -tol && converse_margin >= -tol,
    })
}

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use super::cochain::{normalize, Cochain};
use super::compiled::{Compiled, ScanOutcome};
use crate::error::{budget, Result};
use crate::linalg;
use crate::rng::seeded;
use crate::scalar::{fmt_rational, Rational};
use crate::sheaf::AugmentedSheaf;
use crate::spectral::SubsetMode;

/// Default cap on `|C⁰| = Π|F(v)|` for exhaustive scans.
pub const DEFAULT_CB0_BUDGET: u128 = 1 << 20;

/// An expansion constant; `Unconstrained` when no cochain has positive
/// distance, so every ε works.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expansion {
    Finite(Rational),
    Unconstrained,
}

impl Expansion {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Expansion::Finite(r) => Some(r),
            Expansion::Unconstrained => None,
        }
    }
    pub fn at_least(&self, r: &Rational) -> bool {
        self.finite().is_none_or(|v| v >= r)
    }
    pub fn to_f64(&self) -> f64 {
        self.finite().map_or(f64::INFINITY, crate::scalar::rational_to_f64)
    }
}

impl std::fmt::Display for Expansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expansion::Finite(r) => write!(f, "{}", fmt_rational(r)),
            Expansion::Unconstrained => write!(f, "unconstrained"),
        }
    }
}

impl Serialize for Expansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct Cb0Result {
    pub mode: SubsetMode,
    pub value: Expansion,
    /// Set in sampled mode: the value only bounds cb₀ from above.
    pub upper_bound_only: bool,
    pub witness: Option<Cochain>,
    pub witness_coboundary_norm: Option<Rational>,
    pub witness_distance: Option<Rational>,
    pub cochains_visited: u128,
}

fn random_cochain(c: &Compiled, rng: &mut impl Rng) -> Vec<usize> {
    c.elems.iter().map(|e| rng.gen_range(0..e.len())).collect()
}

/// Sampled counterpart of [`Compiled::scan`].
fn sample(c: &Compiled, seed: u64, trials: usize, targets: &[Vec<usize>]) -> ScanOutcome {
    let mut rng = seeded(seed);
    let mut best: Option<super::compiled::Best> = None;
    for _ in 0..trials {
        let idx = random_cochain(c, &mut rng);
        let m = targets.iter().map(|t| c.disagreement(&idx, t)).min().unwrap_or(0);
        if m == 0 {
            continue;
        }
        let cut = c.cut(&idx);
        let better = best.as_ref().is_none_or(|b| match (cut * b.dist).cmp(&(b.cut * m)) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => c.lex_less(&idx, &b.witness),
            std::cmp::Ordering::Greater => false,
        });
        if better {
            best = Some(super::compiled::Best { cut, dist: m, witness: idx });
        }
    }
    ScanOutcome { best, visited: trials as u128 }
}

fn outcome_parts(c: &Compiled, o: &ScanOutcome) -> (Expansion, Option<Cochain>, Option<Rational>, Option<Rational>) {
    match &o.best {
        Some(b) => (
            Expansion::Finite(c.ratio(b.cut, b.dist)),
            Some(Cochain { degree: 0, values: c.to_values(&b.witness) }),
            Some(c.weight(b.cut)),
            Some(c.weight(b.dist)),
        ),
        None => (Expansion::Unconstrained, None, None, None),
    }
}

/// `cb₀ = min ‖d₀f‖ / dist(f, B⁰)` over cochains off B⁰.
///
/// The exhaustive scan visits one cochain per coset of B⁰ for the linear
/// backend; `budget` caps `|C⁰|` either way.
pub fn cb0(s: &AugmentedSheaf, mode: SubsetMode, budget: u128) -> Result<Cb0Result> {
    let c = Compiled::new(s)?;
    let b0 = c.b0(budget)?;
    let o = match mode {
        SubsetMode::Exhaustive => {
            c.check_budget(budget)?;
            match &c.linear {
                Some(lin) => c.scan(&c.complement_digits(&lin.b0_pivots), &b0, &b0),
                None => c.scan(&c.full_digits(), &b0, &[]),
            }
        }
        SubsetMode::Sampled { seed, trials } => sample(&c, seed, trials, &b0),
    };
    let (value, witness, witness_coboundary_norm, witness_distance) = outcome_parts(&c, &o);
    Ok(Cb0Result {
        mode,
        value,
        upper_bound_only: !matches!(mode, SubsetMode::Exhaustive),
        witness,
        witness_coboundary_norm,
        witness_distance,
        cochains_visited: o.visited,
    })
}

/// `min_{b ∈ B⁰} ‖f − b‖` and the first nearest `b` in code order.
pub fn dist_to_b0(s: &AugmentedSheaf, f: &Cochain, budget: u128) -> Result<(Rational, Cochain)> {
    let f = normalize(s, f)?;
    if f.degree != 0 {
        return Err(crate::Error::TypeMismatch("distance to B⁰ needs a 0-cochain".into()));
    }
    let c = Compiled::new(s)?;
    let idx: Vec<usize> = f.values.iter().enumerate().map(|(v, x)| c.index_of(v, x)).collect();
    let b0 = c.b0(budget)?;
    let (d, b) = b0.iter().map(|b| (c.disagreement(&idx, b), b)).min().expect("B⁰ contains 0");
    Ok((c.weight(d), Cochain { degree: 0, values: c.to_values(b) }))
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologySummary {
    #[serde(serialize_with = "ser_big")]
    pub b0_order: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub z0_order: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub h0_order: BigUint,
    #[serde(skip)]
    pub b0_generators: Vec<Cochain>,
    #[serde(skip)]
    pub z0_generators: Vec<Cochain>,
    /// `d₀ ∘ d₋₁ = 0` on the generators of B⁰.
    pub d0_dm1_zero: bool,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Greedy generating set of a finite subgroup of C⁰ listed in full.
fn greedy_generators(c: &Compiled, members: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let zero = vec![0usize; c.n()];
    let mut span: BTreeSet<Vec<usize>> = BTreeSet::from([zero]);
    let mut gens = Vec::new();
    for m in members {
        if span.contains(m) {
            continue;
        }
        gens.push(m.clone());
        let mut frontier: Vec<Vec<usize>> = span.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = c.add(&x, g);
                if span.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

/// All cocycles, by kernel enumeration or a full scan of C⁰.
fn z0_members(c: &Compiled, budget_cap: u128) -> Result<Vec<Vec<usize>>> {
    match &c.linear {
        Some(_) => c.span(&c.z0_basis(), budget_cap),
        None => {
            c.check_budget(budget_cap)?;
            let mut out = Vec::new();
            let mut idx = vec![0usize; c.n()];
            'all: loop {
                if c.cut(&idx) == 0 {
                    out.push(idx.clone());
                }
                let mut v = c.n();
                loop {
                    if v == 0 {
                        break 'all;
                    }
                    v -= 1;
                    idx[v] += 1;
                    if idx[v] < c.elems[v].len() {
                        break;
                    }
                    idx[v] = 0;
                }
            }
            Ok(out)
        }
    }
}

/// Orders of B⁰, Z⁰ and H⁰ with generating sets. The linear backend works
/// with ranks; the cyclic backend enumerates C⁰ within `budget`.
pub fn cohomology_spaces(s: &AugmentedSheaf, budget_cap: u128) -> Result<CohomologySummary> {
    let c = Compiled::new(s)?;
    let values = |idx: &Vec<usize>| Cochain { degree: 0, values: c.to_values(idx) };
    let (b0_order, z0_order, bg, zg) = match &c.linear {
        Some(lin) => {
            let z = c.z0_basis();
            let p = BigUint::from(lin.p);
            let to_idx = |rows: &[Vec<u32>]| rows.iter().map(|r| c.coords_to_indices(r)).collect::<Vec<_>>();
            (p.pow(lin.b0_basis.len() as u32), p.pow(z.len() as u32), to_idx(&lin.b0_basis), to_idx(&z))
        }
        None => {
            let b0 = c.b0(budget_cap)?;
            let z0 = z0_members(&c, budget_cap)?;
            let (bl, zl) = (BigUint::from(b0.len()), BigUint::from(z0.len()));
            (bl, zl, greedy_generators(&c, &b0), greedy_generators(&c, &z0))
        }
    };
    let d0_dm1_zero = bg.iter().all(|b| c.cut(b) == 0);
    Ok(CohomologySummary {
        h0_order: &z0_order / &b0_order,
        b0_order,
        z0_order,
        b0_generators: bg.iter().map(values).collect(),
        z0_generators: zg.iter().map(values).collect(),
        d0_dm1_zero,
    })
}

/// Every cocycle of `s`, as value vectors in lexicographic order.
pub fn z0_cochains(s: &AugmentedSheaf, budget_cap: u128) -> Result<Vec<Cochain>> {
    let c = Compiled::new(s)?;
    let mut out: Vec<Vec<Vec<u32>>> = z0_members(&c, budget_cap)?.iter().map(|z| c.to_values(z)).collect();
    budget("cocycle enumeration", budget_cap, out.len() as u128)?;
    out.sort();
    Ok(out.into_iter().map(|values| Cochain { degree: 0, values }).collect())
}

#[derive(Clone, Debug)]
pub struct CosystolicReport {
    pub mode: SubsetMode,
    pub upper_bound_only: bool,
    pub epsilon: Rational,
    pub delta: Rational,
    pub c1_holds: bool,
    pub c2_holds: bool,
    /// Largest ε satisfying (C1) over the visited cochains.
    pub epsilon_max: Expansion,
    /// Smallest `‖g‖` over `Z⁰ − B⁰`, or 1 when `Z⁰ = B⁰`.
    pub delta_max: Rational,
    pub c2_vacuous: bool,
    pub c1_witness: Option<Cochain>,
    pub c2_witness: Option<Cochain>,
    pub z0_order: u128,
    pub b0_order: u128,
}

impl CosystolicReport {
    pub fn holds(&self) -> bool {
        self.c1_holds && self.c2_holds
    }
}

/// Checks (C1) `‖d₀f‖ ≥ ε·dist(f, Z⁰)` and (C2) `‖g‖ ≥ δ` on `Z⁰ − B⁰`.
/// (C2) is always decided exactly since Z⁰ is enumerated.
pub fn cosystolic_check(
    s: &AugmentedSheaf,
    epsilon: &Rational,
    delta: &Rational,
    mode: SubsetMode,
    budget_cap: u128,
) -> Result<CosystolicReport> {
    let c = Compiled::new(s)?;
    let b0 = c.b0(budget_cap)?;
    let z0 = z0_members(&c, budget_cap)?;
    budget("cocycle enumeration", budget_cap, z0.len() as u128)?;
    let b0_set: BTreeSet<&Vec<usize>> = b0.iter().collect();
    let c2 = z0
        .iter()
        .filter(|z| !b0_set.contains(z))
        .map(|z| (c.mass(z), z))
        .min();
    let (delta_max, c2_witness, c2_vacuous) = match c2 {
        Some((m, z)) => (c.weight(m), Some(Cochain { degree: 0, values: c.to_values(z) }), false),
        None => (Rational::from_integer(1.into()), None, true),
    };
    let o = match mode {
        SubsetMode::Exhaustive => {
            c.check_budget(budget_cap)?;
            match &c.linear {
                Some(_) => {
                    let mut basis = c.z0_basis();
                    let pivots = linalg::rref(s.ambient().field().expect("linear"), &mut basis);
                    c.scan(&c.complement_digits(&pivots), &z0, &z0)
                }
                None => c.scan(&c.full_digits(), &z0, &[]),
            }
        }
        SubsetMode::Sampled { seed, trials } => sample(&c, seed, trials, &z0),
    };
    let (epsilon_max, c1_witness, _, _) = outcome_parts(&c, &o);
    Ok(CosystolicReport {
        mode,
        upper_bound_only: !matches!(mode, SubsetMode::Exhaustive),
        c1_holds: epsilon_max.at_least(epsilon),
        c2_holds: c2_vacuous || &delta_max >= delta,
        epsilon: epsilon.clone(),
        delta: delta.clone(),
        epsilon_max,
        delta_max,
        c2_vacuous,
        c1_witness,
        c2_witness,
        z0_order: z0.len() as u128,
        b0_order: b0.len() as u128,
    })
}

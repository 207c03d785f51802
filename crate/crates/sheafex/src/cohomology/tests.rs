use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng as _;

use super::*;
use crate::catalog::{catalog_up_to, complete, cycle, graph_complex, path};
use crate::complex::{SimpleGraph, WeightedComplex};
use crate::ff::GaloisField;
use crate::rng::seeded;
use crate::scalar::{rat, Rational};
use crate::sheaf::{
    constant_aug_sheaf, constant_sheaf, degenerate_assignment, locally_constant_twist, quotient_by_subgroups,
    AbelianGroup, AugmentedSheaf, Subgroup, SubgroupAssignment,
};
use crate::spectral::{cheeger, SubsetMode};

const CAP: u128 = 1 << 20;

fn k3() -> WeightedComplex {
    graph_complex(&complete(3)).unwrap()
}

fn cochain(values: Vec<Vec<u32>>) -> Cochain {
    Cochain { degree: 0, values }
}

/// Every 0-cochain, straight from the vertex transversals.
fn all_cochains(s: &AugmentedSheaf) -> Vec<Vec<Vec<u32>>> {
    let g = s.ambient();
    let mut out = vec![vec![]];
    for v in 0..s.num_vertices() {
        let t = s.vertex_sub(v).transversal(g).unwrap();
        out = out
            .into_iter()
            .flat_map(|pre: Vec<Vec<u32>>| {
                t.iter().map(move |a| {
                    let mut p = pre.clone();
                    p.push(a.clone());
                    p
                })
            })
            .collect();
    }
    out
}

fn norm0(s: &AugmentedSheaf, f: &[Vec<u32>]) -> Rational {
    f.iter()
        .enumerate()
        .filter(|(_, a)| a.iter().any(|&c| c != 0))
        .map(|(v, _)| s.complex().vertex_weights()[v].clone())
        .sum()
}

fn norm1(s: &AugmentedSheaf, f: &[Vec<u32>]) -> Rational {
    let x = s.complex();
    x.edges()
        .iter()
        .enumerate()
        .filter(|&(e, face)| {
            let g = s.ambient();
            let hi = s.res_edge_vertex(e, 1, &f[face[1] as usize]);
            let lo = s.res_edge_vertex(e, 0, &f[face[0] as usize]);
            !s.edge_sub(e).contains(g, &g.sub(&hi, &lo))
        })
        .map(|(e, _)| x.edge_weights()[e].clone())
        .sum()
}

fn b0_members(s: &AugmentedSheaf) -> Vec<Vec<Vec<u32>>> {
    let g = s.ambient();
    s.empty_sub()
        .transversal(g)
        .unwrap()
        .iter()
        .map(|h| (0..s.num_vertices()).map(|v| s.res_vertex(v, h)).collect())
        .collect()
}

fn dist(s: &AugmentedSheaf, f: &[Vec<u32>], set: &[Vec<Vec<u32>>]) -> Rational {
    let g = s.ambient();
    set.iter()
        .map(|b| {
            let d: Vec<Vec<u32>> =
                f.iter().zip(b).enumerate().map(|(v, (a, c))| s.canonical_vertex(v, &g.sub(a, c))).collect();
            norm0(s, &d)
        })
        .min()
        .unwrap()
}

/// cb₀ and the lexicographically first minimizer by direct enumeration.
fn oracle_cb0(s: &AugmentedSheaf) -> Option<(Rational, Vec<Vec<u32>>)> {
    let b0 = b0_members(s);
    let mut best: Option<(Rational, Vec<Vec<u32>>)> = None;
    for f in all_cochains(s) {
        let d = dist(s, &f, &b0);
        if d.is_zero() {
            continue;
        }
        let r = norm1(s, &f) / d;
        if best.as_ref().is_none_or(|(b, w)| r < *b || (r == *b && f < *w)) {
            best = Some((r, f));
        }
    }
    best
}

fn finite(e: &Expansion) -> Rational {
    e.finite().expect("finite").clone()
}

#[test]
fn k3_constant_values() {
    let x = k3();
    let cases = [
        (AbelianGroup::gf(2, 1).unwrap(), rat(2, 1)),
        (AbelianGroup::cyclic(&[3]).unwrap(), rat(3, 2)),
        (AbelianGroup::gf(2, 2).unwrap(), rat(3, 2)),
        (AbelianGroup::cyclic(&[4]).unwrap(), rat(3, 2)),
        (AbelianGroup::gf(3, 1).unwrap(), rat(3, 2)),
    ];
    for (r, want) in cases {
        let s = constant_aug_sheaf(&x, &r).unwrap();
        let res = cb0(&s, SubsetMode::Exhaustive, CAP).unwrap();
        assert_eq!(finite(&res.value), want, "{:?}", r.backend());
        assert!(!res.upper_bound_only);
        let (o, w) = oracle_cb0(&s).unwrap();
        assert_eq!(o, want);
        assert_eq!(res.witness.unwrap().values, w);
    }
}

#[test]
fn matches_oracle_on_small_catalog() {
    for x in catalog_up_to(5) {
        for r in [AbelianGroup::gf(2, 1).unwrap(), AbelianGroup::cyclic(&[3]).unwrap()] {
            let s = constant_aug_sheaf(x, &r).unwrap();
            let res = cb0(&s, SubsetMode::Exhaustive, CAP).unwrap();
            let (o, w) = oracle_cb0(&s).unwrap();
            assert_eq!(finite(&res.value), o);
            assert_eq!(res.witness.unwrap().values, w);
        }
    }
}

fn random_subgroup(r: &AbelianGroup, rng: &mut impl rand::Rng, max_gens: usize) -> Subgroup {
    let k = rng.gen_range(0..=max_gens);
    let gens: Vec<Vec<u32>> =
        (0..k).map(|_| r.moduli().iter().map(|&m| rng.gen_range(0..m)).collect()).collect();
    Subgroup::generated(r, &gens).unwrap()
}

fn random_assignment(x: &WeightedComplex, r: &AbelianGroup, seed: u64) -> SubgroupAssignment {
    let mut rng = seeded(seed);
    let vertex = (0..x.num_vertices()).map(|_| random_subgroup(r, &mut rng, 1)).collect();
    let edge = (0..x.edges().len()).map(|_| random_subgroup(r, &mut rng, 1)).collect();
    SubgroupAssignment::new(x, r, vertex, edge).unwrap()
}

#[test]
fn quotients_match_oracle() {
    let graphs = [complete(4), cycle(5), path(4)];
    let groups = [AbelianGroup::gf(2, 2).unwrap(), AbelianGroup::cyclic(&[2, 4]).unwrap(), AbelianGroup::gf(3, 1).unwrap()];
    for (gi, g) in graphs.iter().enumerate() {
        let x = graph_complex(g).unwrap();
        for (ri, r) in groups.iter().enumerate() {
            for seed in 0..4 {
                let a = random_assignment(&x, r, (gi * 100 + ri * 10) as u64 + seed);
                let s = quotient_by_subgroups(&x, &a).unwrap();
                let res = cb0(&s, SubsetMode::Exhaustive, CAP).unwrap();
                match oracle_cb0(&s) {
                    Some((o, w)) => {
                        assert_eq!(finite(&res.value), o);
                        assert_eq!(res.witness.unwrap().values, w);
                    }
                    None => assert_eq!(res.value, Expansion::Unconstrained),
                }
            }
        }
    }
}

#[test]
fn full_quotient_is_unconstrained() {
    let x = k3();
    let r = AbelianGroup::gf(2, 1).unwrap();
    let full = SubgroupAssignment::new(&x, &r, vec![Subgroup::full(&r); 3], vec![Subgroup::zero(&r); 3]).unwrap();
    let s = quotient_by_subgroups(&x, &full).unwrap();
    let res = cb0(&s, SubsetMode::Exhaustive, CAP).unwrap();
    assert_eq!(res.value, Expansion::Unconstrained);
    assert!(res.witness.is_none());
    assert_eq!(res.value.to_string(), "unconstrained");
}

#[test]
fn sampled_mode_bounds_from_above() {
    let x = graph_complex(&cycle(5)).unwrap();
    let s = constant_aug_sheaf(&x, &AbelianGroup::cyclic(&[3]).unwrap()).unwrap();
    let exact = finite(&cb0(&s, SubsetMode::Exhaustive, CAP).unwrap().value);
    let res = cb0(&s, SubsetMode::Sampled { seed: 7, trials: 200 }, CAP).unwrap();
    assert!(res.upper_bound_only);
    assert!(finite(&res.value) >= exact);
    assert_eq!(res.cochains_visited, 200);
}

#[test]
fn budget_is_enforced() {
    let x = graph_complex(&cycle(5)).unwrap();
    let s = constant_aug_sheaf(&x, &AbelianGroup::gf(2, 3).unwrap()).unwrap();
    assert!(matches!(cb0(&s, SubsetMode::Exhaustive, 1 << 10), Err(crate::Error::BudgetExceeded { .. })));
}

#[test]
fn coboundary_examples() {
    let x = k3();
    let f2 = AbelianGroup::gf(2, 1).unwrap();
    let s = constant_aug_sheaf(&x, &f2).unwrap();
    let c = coboundary(&s, &cochain(vec![vec![1], vec![1], vec![1]])).unwrap();
    assert!(c.is_zero());
    let c = coboundary(&s, &cochain(vec![vec![1], vec![0], vec![0]])).unwrap();
    let supp: Vec<usize> = (0..3).filter(|&e| c.values[e] != vec![0]).collect();
    let at_a: Vec<usize> = x.edges().iter().enumerate().filter(|(_, f)| f.contains(&0)).map(|(e, _)| e).collect();
    assert_eq!(supp, at_a);
    assert_eq!(support_norm(&s, &c).unwrap(), rat(2, 3));

    let field = GaloisField::new(3).unwrap();
    let x4 = graph_complex(&cycle(4)).unwrap();
    let t = locally_constant_twist(&x4, &field, 2, 0, x4.edges()[0][0]).unwrap();
    let c = coboundary(&t, &cochain(vec![vec![1]; 4])).unwrap();
    let supp: Vec<usize> = (0..4).filter(|&e| c.values[e] != vec![0]).collect();
    assert_eq!(supp, vec![0]);

    let d = coboundary(&s, &Cochain { degree: -1, values: vec![vec![1]] }).unwrap();
    assert_eq!(d.values, vec![vec![1]; 3]);
    assert!(coboundary(&s, &d).unwrap().is_zero());
    assert!(coboundary(&s, &cochain(vec![vec![2], vec![0], vec![0]])).is_err());
}

#[test]
fn distance_examples() {
    let x = k3();
    let f2 = AbelianGroup::gf(2, 1).unwrap();
    let s = constant_aug_sheaf(&x, &f2).unwrap();
    let (d, near) = dist_to_b0(&s, &cochain(vec![vec![1], vec![0], vec![0]]), CAP).unwrap();
    assert_eq!(d, rat(1, 3));
    assert!(near.is_zero());
    let (d, _) = dist_to_b0(&s, &cochain(vec![vec![1]; 3]), CAP).unwrap();
    assert!(d.is_zero());
    let s = constant_sheaf(&x, &f2).unwrap();
    let f = cochain(vec![vec![1], vec![1], vec![0]]);
    assert_eq!(dist_to_b0(&s, &f, CAP).unwrap().0, support_norm(&s, &f).unwrap());
}

#[test]
fn cohomology_orders() {
    let f2 = AbelianGroup::gf(2, 1).unwrap();
    let z4 = AbelianGroup::cyclic(&[4]).unwrap();
    for x in catalog_up_to(4) {
        for r in [&f2, &z4] {
            let s = constant_aug_sheaf(x, r).unwrap();
            let h = cohomology_spaces(&s, CAP).unwrap();
            assert_eq!(h.h0_order, 1u32.into());
            assert_eq!(h.b0_order, (r.order() as u32).into());
            assert!(h.d0_dm1_zero);
        }
    }
    let two = graph_complex(&SimpleGraph::new(4, &[(0, 1), (2, 3)])).unwrap();
    let h = cohomology_spaces(&constant_sheaf(&two, &f2).unwrap(), CAP).unwrap();
    assert_eq!((h.z0_order.clone(), h.h0_order.clone()), (4u32.into(), 4u32.into()));
    let h = cohomology_spaces(&constant_aug_sheaf(&two, &z4).unwrap(), CAP).unwrap();
    assert_eq!(h.h0_order, 4u32.into());
    assert_eq!(h.z0_generators.len(), 2);

    let x4 = graph_complex(&cycle(4)).unwrap();
    for q in [3, 4, 5] {
        let field = GaloisField::new(q).unwrap();
        let t = locally_constant_twist(&x4, &field, 2, 1, x4.edges()[1][1]).unwrap();
        let h = cohomology_spaces(&t, CAP).unwrap();
        assert_eq!(h.z0_order, 1u32.into());
    }
}

#[test]
fn degenerate_quotient_has_zero_expansion() {
    let x = graph_complex(&cycle(5)).unwrap();
    let r = AbelianGroup::gf(2, 2).unwrap();
    let f = vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![0, 0], vec![1, 0]];
    let a = degenerate_assignment(&x, &r, &f).unwrap();
    let s = quotient_by_subgroups(&x, &a).unwrap();
    let fc = cochain(f);
    assert!(coboundary(&s, &fc).unwrap().is_zero());
    assert!(dist_to_b0(&s, &fc, CAP).unwrap().0 > Rational::zero());
    let res = cb0(&s, SubsetMode::Exhaustive, CAP).unwrap();
    assert_eq!(finite(&res.value), Rational::zero());
    let w = res.witness.unwrap();
    assert!(coboundary(&s, &w).unwrap().is_zero());
    assert_eq!(oracle_cb0(&s).unwrap().1, w.values);
}

#[test]
fn constant_sheaf_is_h_prime_cosystolic() {
    let f2 = AbelianGroup::gf(2, 1).unwrap();
    for x in catalog_up_to(5) {
        let ch = cheeger(x).unwrap();
        let hp = ch.h_prime;
        let s = constant_aug_sheaf(x, &f2).unwrap();
        let rep = cosystolic_check(&s, &hp, &Rational::one(), SubsetMode::Exhaustive, CAP).unwrap();
        assert!(rep.holds());
        assert!(rep.c2_vacuous);
        assert_eq!(rep.delta_max, Rational::one());
        assert!(finite(&rep.epsilon_max) >= hp);
        assert_eq!(finite(&rep.epsilon_max), ch.h);
    }
}

#[test]
fn cosystolic_delta_on_basis_line_quotient() {
    let x = graph_complex(&complete(4)).unwrap();
    let r = AbelianGroup::gf(2, 4).unwrap();
    let vertex = (0..4).map(|i| Subgroup::generated(&r, &[r.unit(i)]).unwrap()).collect();
    let a = SubgroupAssignment::new(&x, &r, vertex, vec![Subgroup::zero(&r); 6]).unwrap();
    let s = quotient_by_subgroups(&x, &a).unwrap().deaugmented().unwrap();
    let eta = rat(1, 4);
    let rep = cosystolic_check(&s, &rat(0, 1), &(Rational::one() - &eta), SubsetMode::Exhaustive, CAP).unwrap();
    assert!(rep.c2_holds);
    assert_eq!(rep.delta_max, Rational::one() - eta);
    assert_eq!(rep.b0_order, 1);
    assert_eq!(rep.z0_order, 16);
}

#[test]
fn remark42_deltas() {
    let x = graph_complex(&cycle(4)).unwrap();
    let z3 = AbelianGroup::cyclic(&[3]).unwrap();
    let s = constant_aug_sheaf(&x, &z3).unwrap();
    let v = cb0(&s, SubsetMode::Exhaustive, CAP).unwrap().value;
    let c = remark42_convert(&v, &s, CAP).unwrap();
    assert_eq!(c.delta, Rational::one());
    assert!(!c.vacuous);
    let c = remark42_convert(&v, &constant_sheaf(&x, &z3).unwrap(), CAP).unwrap();
    assert!(c.delta.is_zero() && c.vacuous);

    let f2 = AbelianGroup::gf(2, 1).unwrap();
    let mut vertex = vec![Subgroup::zero(&f2); 4];
    vertex[2] = Subgroup::full(&f2);
    let a = SubgroupAssignment::new(&x, &f2, vertex, vec![Subgroup::zero(&f2); 4]).unwrap();
    let s = quotient_by_subgroups(&x, &a).unwrap();
    let c = remark42_convert(&v, &s, CAP).unwrap();
    assert_eq!(c.delta, rat(3, 4));
}

#[test]
fn cycle_solver_trivial_cases() {
    let x = graph_complex(&cycle(5)).unwrap();
    let r = AbelianGroup::gf(2, 3).unwrap();
    let zero = SubgroupAssignment::zero(&x, &r);
    let g = vec![1, 0, 1];
    assert_eq!(solve_cycle_cocycle(&x, &zero, &cochain(vec![g.clone(); 5]), CAP).unwrap(), g);
    let mut vertex = vec![Subgroup::zero(&r); 5];
    vertex[0] = Subgroup::generated(&r, &[vec![1, 0, 0]]).unwrap();
    vertex[3] = Subgroup::generated(&r, &[vec![0, 1, 0]]).unwrap();
    let a = SubgroupAssignment::new(&x, &r, vertex, vec![Subgroup::zero(&r); 5]).unwrap();
    let h = vec![0, 1, 1];
    assert_eq!(solve_cycle_cocycle(&x, &a, &cochain(vec![h.clone(); 5]), CAP).unwrap(), h);
}

#[test]
fn cycle_solver_errors() {
    let r = AbelianGroup::gf(2, 2).unwrap();
    let p = graph_complex(&path(4)).unwrap();
    let f = cochain(vec![vec![0, 0]; 4]);
    assert!(matches!(
        solve_cycle_cocycle(&p, &SubgroupAssignment::zero(&p, &r), &f, CAP),
        Err(crate::Error::PreconditionViolated(_))
    ));
    let x = graph_complex(&cycle(4)).unwrap();
    let line = Subgroup::generated(&r, &[vec![1, 0]]).unwrap();
    let mut vertex = vec![Subgroup::zero(&r); 4];
    vertex[0] = line.clone();
    vertex[2] = line;
    let a = SubgroupAssignment::new(&x, &r, vertex, vec![Subgroup::zero(&r); 4]).unwrap();
    assert!(matches!(solve_cycle_cocycle(&x, &a, &f, CAP), Err(crate::Error::DisjointnessViolated(_))));
    let zero = SubgroupAssignment::zero(&x, &r);
    let bad = cochain(vec![vec![1, 0], vec![0, 0], vec![0, 0], vec![0, 0]]);
    assert!(matches!(solve_cycle_cocycle(&x, &zero, &bad, CAP), Err(crate::Error::NotCocycle { .. })));
}

#[test]
fn cycle_solver_recovers_noisy_coset_data() {
    let x = graph_complex(&cycle(5)).unwrap();
    let r = AbelianGroup::gf(2, 8).unwrap();
    let mut rng = seeded(11);
    for _ in 0..20 {
        // disjoint subgroups from disjoint sets of coordinate axes
        let mut axes: Vec<usize> = (0..8).collect();
        rand::seq::SliceRandom::shuffle(axes.as_mut_slice(), &mut rng);
        let mut take = axes.into_iter();
        let mut pick = |rng: &mut crate::rng::Rng| {
            let k = rng.gen_range(0..=1usize);
            let gens: Vec<Vec<u32>> = take.by_ref().take(k).map(|i| r.unit(i)).collect();
            Subgroup::generated(&r, &gens).unwrap()
        };
        let vertex: Vec<Subgroup> = (0..5).map(|_| pick(&mut rng)).collect();
        let edge: Vec<Subgroup> = (0..5).map(|_| pick(&mut rng)).collect();
        let a = SubgroupAssignment::new(&x, &r, vertex.clone(), edge).unwrap();
        let h: Vec<u32> = (0..8).map(|_| rng.gen_range(0..2)).collect();
        let f: Vec<Vec<u32>> = vertex
            .iter()
            .map(|sub| {
                let els = sub.elements(&r);
                r.add(&h, &els[rng.gen_range(0..els.len())])
            })
            .collect();
        let got = solve_cycle_cocycle(&x, &a, &cochain(f.clone()), CAP).unwrap();
        let valid: Vec<Vec<u32>> = r
            .elements()
            .filter(|c| f.iter().zip(&vertex).all(|(fv, sub)| sub.contains(&r, &r.sub(fv, c))))
            .collect();
        assert!(valid.contains(&got));
        assert!(valid.contains(&h));
    }
}

#[test]
fn corollary_54_halving() {
    let groups = [
        AbelianGroup::gf(2, 1).unwrap(),
        AbelianGroup::cyclic(&[3]).unwrap(),
        AbelianGroup::cyclic(&[4]).unwrap(),
        AbelianGroup::gf(2, 2).unwrap(),
    ];
    for x in catalog_up_to(5) {
        let vals: Vec<Rational> = groups
            .iter()
            .map(|r| finite(&cb0(&constant_aug_sheaf(x, r).unwrap(), SubsetMode::Exhaustive, CAP).unwrap().value))
            .collect();
        for a in &vals {
            for b in &vals {
                assert!(a * rat(2, 1) >= *b);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d0_after_dm1_vanishes(seed in 0u64..10_000, which in 0usize..3) {
        let x = graph_complex(&[complete(4), cycle(5), path(3)][which]).unwrap();
        let r = AbelianGroup::cyclic(&[2, 6]).unwrap();
        let a = random_assignment(&x, &r, seed);
        let s = quotient_by_subgroups(&x, &a).unwrap();
        for h in r.elements() {
            let b = coboundary(&s, &Cochain { degree: -1, values: vec![h] }).unwrap();
            prop_assert!(coboundary(&s, &b).unwrap().is_zero());
        }
        for v in 0..x.num_vertices() {
            prop_assert_eq!(s.vertex_order(v) * a.vertex[v].order(&r), r.order());
        }
        let h = cohomology_spaces(&s, CAP).unwrap();
        prop_assert!(h.d0_dm1_zero);
        prop_assert!((&h.z0_order % &h.b0_order).is_zero());
    }

    #[test]
    fn lemma_51_arithmetic(raw in prop::collection::vec(1u32..1000, 1..8), slack in 0u32..1000) {
        let total: u32 = raw.iter().sum::<u32>() + slack;
        let mut alpha: Vec<Rational> = raw.iter().map(|&a| rat(a as i64, total as i64)).collect();
        alpha.sort_by(|a, b| b.cmp(a));
        let lhs: Rational = alpha.iter().map(|a| a * (Rational::one() - a)).sum();
        let rhs: Rational = alpha[1..].iter().cloned().sum();
        prop_assert!(lhs >= rhs);
    }

    #[test]
    fn witness_attains_value(seed in 0u64..10_000) {
        let x = graph_complex(&cycle(4)).unwrap();
        let r = AbelianGroup::gf(3, 1).unwrap();
        let s = quotient_by_subgroups(&x, &random_assignment(&x, &r, seed)).unwrap();
        let res = cb0(&s, SubsetMode::Exhaustive, CAP).unwrap();
        if let Some(w) = &res.witness {
            let d = coboundary(&s, w).unwrap();
            let n = support_norm(&s, &d).unwrap();
            let (dd, _) = dist_to_b0(&s, w, CAP).unwrap();
            prop_assert_eq!(n / dd, finite(&res.value));
        }
    }
}

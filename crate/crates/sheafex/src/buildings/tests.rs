use num_traits::One;

use super::*;
use crate::catalog::{complete, graph_complex, path};
use crate::complex::{validate_weights, SimpleGraph};
use crate::scalar::rat;
use crate::spectral::spectrum;

#[test]
fn fields() {
    assert_eq!(field(2).unwrap().order(), 2);
    assert!(matches!(field(6), Err(Error::NotPrimePower(6))));
    assert!(field(128).is_err());
    let f4 = field(4).unwrap();
    // x² + x + 1, constant term first
    assert_eq!(f4.modulus(), &[1, 1, 1]);
    for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64] {
        let f = field(q).unwrap();
        for a in 0..q {
            assert_eq!(f.pow(a, q as u64), a, "Frobenius in GF({q})");
        }
        let g = f.generator().unwrap();
        let orbit: std::collections::BTreeSet<u32> = (0..q - 1).map(|k| f.pow(g, k as u64)).collect();
        assert_eq!(orbit.len() as u32, q - 1);
    }
}

/// Counts RREF matrices directly: one per pivot set, `q` choices per free slot.
fn rref_count(q: u128, n: usize, k: usize) -> u128 {
    let mut total = 0;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != k {
            continue;
        }
        let pivots: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let free: usize = pivots.iter().map(|&p| (p + 1..n).filter(|c| !pivots.contains(c)).count()).sum();
        total += q.pow(free as u32);
    }
    total
}

#[test]
fn subspace_counts() {
    for q in [2u32, 3, 4] {
        let f = field(q).unwrap();
        for n in 1..=4 {
            for k in 0..=n {
                let all = subspaces(&f, n, k);
                assert_eq!(all.len() as u128, gaussian_binomial(q as u128, n, k));
                assert_eq!(all.len() as u128, rref_count(q as u128, n, k));
                assert!(all.iter().all(|s| Subspace::span(&f, n, s.rows()) == *s));
            }
        }
    }
}

#[test]
fn fano_incidence_graph() {
    let x = build_an(2, 2, DEFAULT_BUILDING_BUDGET).unwrap();
    assert_eq!(x.num_vertices(), 14);
    assert_eq!(x.edges().len(), 21);
    assert_eq!(x.num_classes(), Some(2));
    assert!(validate_weights(&x).is_valid());
    let g = SimpleGraph::from_complex(&x).unwrap();
    assert!((0..14).all(|v| g.degree(v) == 3));
    assert!(g.bipartition().is_some());
    assert_eq!(thickness(&x), 3);
    let x3 = build_an(3, 2, DEFAULT_BUILDING_BUDGET).unwrap();
    assert_eq!((x3.num_vertices(), x3.edges().len()), (26, 52));
    assert_eq!(thickness(&x3), 4);
}

#[test]
fn a3_flags() {
    let x = build_an(2, 3, DEFAULT_BUILDING_BUDGET).unwrap();
    assert_eq!(x.num_vertices(), 15 + 35 + 15);
    assert_eq!(x.complex().top_faces().len(), 15 * 7 * 3);
    assert_eq!(x.num_classes(), Some(3));
    assert!(validate_weights(&x).is_valid());
    assert_eq!(thickness(&x), 3);
    assert!(matches!(build_an(3, 3, 100), Err(Error::BudgetExceeded { .. })));
    assert!(build_an(2, 1, DEFAULT_BUILDING_BUDGET).is_err());
}

#[test]
fn small_thickness() {
    assert_eq!(thickness(&graph_complex(&path(3)).unwrap()), 1);
    assert_eq!(thickness(&graph_complex(&complete(3)).unwrap()), 2);
}

#[test]
fn a2_spectrum_and_bound() {
    for q in [2u32, 3, 4] {
        let x = build_an(q, 2, DEFAULT_BUILDING_BUDGET).unwrap();
        let s = spectrum(&x).unwrap();
        let mid = (q as f64).sqrt() / (q as f64 + 1.0);
        for e in &s.eigenvalues {
            let near = [1.0, -1.0, mid, -mid].iter().any(|t| (e - t).abs() < 1e-9);
            assert!(near, "eigenvalue {e} for q = {q}");
        }
        let (_, top) = s.interval_diamond.unwrap();
        assert!(theorem72_bound(thickness(&x), 1, 3).unwrap() >= top - 1e-12);
    }
}

#[test]
fn theorem72_values() {
    assert!((theorem72_bound(3, 1, 3).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    assert_eq!(theorem72_bound(17, 3, 2).unwrap(), 0.0);
    assert!((theorem72_bound(9, 2, 3).unwrap() - 0.5).abs() < 1e-15);
    assert!(theorem72_bound(3, 2, 3).is_err());
    assert!(theorem72_bound(3, 0, 3).is_err());
}

#[test]
fn corollary_rows() {
    for q in [29u64, 100, 1000] {
        let b = corollary_bounds(q, 1, 3).unwrap();
        let direct = 2.0 / 7.0 - 8.0 / (7.0 * (q as f64).sqrt()) - 2.0 / q as f64;
        assert!((b.cor76_s_elided.unwrap() - direct).abs() < 1e-12);
        assert!((b.cor74 - (1.0 - 1.0 / (q as f64).sqrt())).abs() < 1e-12);
        assert!(b.cor76 < direct);
        let a3 = corollary_bounds(q * 5, 2, 3).unwrap();
        let q5 = (q * 5) as f64;
        let direct = 1.0 / 3.0 - 10.0 / (3.0 * (q5.sqrt() - 1.0)) - 8.0 / (3.0 * (q5 + 1.0));
        assert!((a3.cor76 - direct).abs() < 1e-12);
        assert!(a3.cor76_s_elided.is_none());
    }
}

#[test]
fn threshold_table() {
    let rows = table77().unwrap();
    let got: Vec<(String, u64)> = rows.iter().map(|r| (r.diagram.clone(), r.threshold)).collect();
    let want = [("A2", 29), ("C2", 45), ("G2", 78), ("A3", 136), ("C3", 257)];
    assert_eq!(got, want.map(|(d, t)| (d.to_string(), t)).to_vec());
    for r in &rows {
        assert!(r.value_at_threshold > 0.0);
        assert!(r.value_below_threshold.unwrap() <= 0.0);
    }
    assert_eq!(rows[0].formula, "2/7 - 8/(7*sqrt(q)) - 2/q");
    assert_eq!(rows[1].formula, "2/7 - 8*sqrt(2)/(7*sqrt(q)) - 2/q");
    assert_eq!(rows[2].formula, "2/7 - 8*sqrt(4)/(7*sqrt(q)) - 2/q");
    assert_eq!(rows[3].formula, "1/3 - 10/(3*(sqrt(q) - 1)) - 8/(3*(q + 1))");
    assert_eq!(rows[4].formula, "1/3 - 10*sqrt(2)/(3*(sqrt(q) - sqrt(2))) - 8/(3*(q + 1))");
}

#[test]
fn coxeter_constants() {
    assert_eq!(CoxeterDiagram::a(1).m(), 2);
    assert_eq!(CoxeterDiagram::a(3).m(), 3);
    assert_eq!(CoxeterDiagram::c(2).m(), 4);
    assert_eq!(CoxeterDiagram::c(3).edges, vec![(0, 1, 3), (1, 2, 4)]);
    assert_eq!(CoxeterDiagram::g2().m(), 6);
}

#[test]
fn weight_ratio_examples() {
    let fano = build_an(2, 2, DEFAULT_BUILDING_BUDGET).unwrap();
    let rep = check_weight_ratio(&fano, 3).unwrap();
    assert_eq!(rep.max_ratio, rat(2, 3));
    assert_eq!(rep.bound, rat(2, 3));
    assert_eq!(rep.slack, rat(0, 1));
    assert!(rep.holds && rep.thick_enough);
    assert_eq!(fano.edge_weights()[0], rat(1, 21));
    assert_eq!(fano.vertex_weights()[0], rat(1, 14));
    let rep = check_weight_ratio(&build_an(3, 2, DEFAULT_BUILDING_BUDGET).unwrap(), 4).unwrap();
    assert!(rep.holds && rep.max_ratio <= rat(1, 2));
    let rep = check_weight_ratio(&graph_complex(&complete(3)).unwrap(), 2).unwrap();
    assert_eq!(rep.max_ratio, Rational::one());
    assert!(rep.holds);
    let a3 = build_an(2, 3, DEFAULT_BUILDING_BUDGET).unwrap();
    let rep = check_weight_ratio(&a3, thickness(&a3)).unwrap();
    assert!(rep.holds);
}

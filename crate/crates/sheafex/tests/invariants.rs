use proptest::prelude::*;
use sheafex::cohomology::{cb0, coboundary, dist_to_b0, support_norm, Expansion};
use sheafex::complex::{complex_from_json, complex_to_json, SimpleGraph, WeightedComplex};
use sheafex::catalog::graph_complex;
use sheafex::sheaf::{quotient_by_subgroups, AbelianGroup, SheafSpec, Subgroup, SubgroupAssignment};
use sheafex::spectral::{check_cheeger_inequality, spectrum, SubsetMode};

const CAP: u128 = 1 << 20;

/// A graph on `n` vertices from an edge bitmask over all pairs; `None` when
/// some vertex is isolated.
fn graph(n: usize, mask: u32) -> Option<WeightedComplex> {
    let mut edges = Vec::new();
    let mut k = 0;
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            if mask >> k & 1 == 1 {
                edges.push((a, b));
            }
            k += 1;
        }
    }
    graph_complex(&SimpleGraph::new(n, &edges)).ok()
}

fn assignment(x: &WeightedComplex, gens: &[u32]) -> SubgroupAssignment {
    let r = AbelianGroup::gf(2, 2).unwrap();
    let sub = |i: usize| {
        let g = gens[i % gens.len()];
        Subgroup::generated(&r, &[vec![g & 1, g >> 1 & 1]]).unwrap()
    };
    let vertex = (0..x.num_vertices()).map(sub).collect();
    let edge = (0..x.edges().len()).map(|i| sub(i + 7)).collect();
    SubgroupAssignment::new(x, &r, vertex, edge).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complex_json_round_trips(n in 2usize..7, mask in any::<u32>()) {
        let Some(x) = graph(n, mask) else { return Ok(()) };
        let text = complex_to_json(&x);
        prop_assert_eq!(complex_to_json(&complex_from_json(&text).unwrap()), text);
    }

    #[test]
    fn walk_spectrum_lies_in_unit_interval(n in 2usize..8, mask in any::<u32>()) {
        let Some(x) = graph(n, mask) else { return Ok(()) };
        let ev = spectrum(&x).unwrap().eigenvalues;
        prop_assert!(ev.iter().all(|e| e.abs() <= 1.0 + 1e-9));
        let top = ev.iter().copied().fold(f64::MIN, f64::max);
        prop_assert!((top - 1.0).abs() < 1e-9);
        let ones = ev.iter().filter(|e| (*e - 1.0).abs() < 1e-9).count();
        let g = SimpleGraph::from_complex(&x).unwrap();
        prop_assert_eq!(ones == 1, g.is_connected());
    }

    #[test]
    fn cheeger_inequalities_hold(n in 2usize..8, mask in any::<u32>()) {
        let Some(x) = graph(n, mask) else { return Ok(()) };
        prop_assert!(check_cheeger_inequality(&x, 1e-9).unwrap().holds);
    }

    #[test]
    fn cb0_witness_attains_the_value(n in 2usize..6, mask in any::<u32>(), gens in prop::collection::vec(0u32..4, 1..5)) {
        let Some(x) = graph(n, mask) else { return Ok(()) };
        let a = assignment(&x, &gens);
        let s = quotient_by_subgroups(&x, &a).unwrap();
        let res = cb0(&s, SubsetMode::Exhaustive, CAP).unwrap();
        if let Expansion::Finite(v) = &res.value {
            let w = res.witness.unwrap();
            let norm = support_norm(&s, &coboundary(&s, &w).unwrap()).unwrap();
            let (dist, _) = dist_to_b0(&s, &w, CAP).unwrap();
            prop_assert_eq!(&norm, res.witness_coboundary_norm.as_ref().unwrap());
            prop_assert_eq!(&dist, res.witness_distance.as_ref().unwrap());
            prop_assert_eq!(&(norm / dist), v);
        }
    }

    #[test]
    fn sampling_only_bounds_cb0_from_above(n in 2usize..6, mask in any::<u32>(), gens in prop::collection::vec(0u32..4, 1..5), seed in any::<u64>()) {
        let Some(x) = graph(n, mask) else { return Ok(()) };
        let s = quotient_by_subgroups(&x, &assignment(&x, &gens)).unwrap();
        let exact = cb0(&s, SubsetMode::Exhaustive, CAP).unwrap();
        let sampled = cb0(&s, SubsetMode::Sampled { seed, trials: 64 }, CAP).unwrap();
        match (exact.value.finite(), sampled.value.finite()) {
            (Some(e), Some(v)) => prop_assert!(v >= e),
            (Some(_), None) => {}
            (None, v) => prop_assert!(v.is_none()),
        }
    }

    #[test]
    fn sheaf_spec_round_trips(n in 2usize..7, mask in any::<u32>(), gens in prop::collection::vec(0u32..4, 1..5)) {
        let Some(x) = graph(n, mask) else { return Ok(()) };
        let text = assignment(&x, &gens).to_spec(&x).to_json();
        let back = SubgroupAssignment::from_spec(&x, &SheafSpec::from_json(&text).unwrap()).unwrap();
        prop_assert_eq!(back.to_spec(&x).to_json(), text);
    }
}


//! End-to-end runs through file formats, sheaves and expansion constants,
//! checked against oracles computed here from scratch.

use num_traits::Zero;
use sheafex::buildings::build_an;
use sheafex::catalog::{complete, cycle, graph_complex, petersen};
use sheafex::cohomology::{cb0, theorem_bound_for, Expansion, DEFAULT_CB0_BUDGET};
use sheafex::complex::{complex_from_json, complex_to_json};
use sheafex::sheaf::{quotient_by_subgroups, AbelianGroup, SheafSpec, SubgroupAssignment};
use sheafex::spectral::{spectrum, SubsetMode};
use sheafex::Rational;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn sorted_close(mut got: Vec<f64>, mut want: Vec<f64>) {
    got.sort_by(f64::total_cmp);
    want.sort_by(f64::total_cmp);
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-9, "{got:?} vs {want:?}");
    }
}

/// cb₀ of the constant augmented F₂ sheaf on a cycle, by listing all 2ⁿ
/// vertex labelings. B⁰ is {0, 1}; vertices weigh 1/n, edges 1/n.
fn cycle_cb0_oracle(n: usize) -> Rational {
    let mut best: Option<Rational> = None;
    for f in 0u32..(1 << n) {
        let ones = f.count_ones() as i64;
        let dist = ones.min(n as i64 - ones);
        if dist == 0 {
            continue;
        }
        let cut = (0..n).filter(|&i| (f >> i & 1) != (f >> ((i + 1) % n) & 1)).count() as i64;
        let r = rat(cut, dist);
        if best.as_ref().is_none_or(|b| r < *b) {
            best = Some(r);
        }
    }
    best.unwrap()
}

#[test]
fn cycles_match_the_labeling_oracle() {
    let f2 = AbelianGroup::gf(2, 1).unwrap();
    for n in 3..=9u32 {
        let x = graph_complex(&cycle(n)).unwrap();
        let s = quotient_by_subgroups(&x, &SubgroupAssignment::zero(&x, &f2)).unwrap();
        let res = cb0(&s, SubsetMode::Exhaustive, DEFAULT_CB0_BUDGET).unwrap();
        assert_eq!(res.value, Expansion::Finite(cycle_cb0_oracle(n as usize)), "C{n}");
    }
}

#[test]
fn complex_file_round_trip_preserves_cb0() {
    let x = graph_complex(&complete(4)).unwrap();
    let text = complex_to_json(&x);
    let y = complex_from_json(&text).unwrap();
    assert_eq!(complex_to_json(&y), text);
    let r = AbelianGroup::cyclic(&[3]).unwrap();
    let a = SubgroupAssignment::zero(&y, &r);
    let spec = SheafSpec::from_json(&a.to_spec(&y).to_json()).unwrap();
    let b = SubgroupAssignment::from_spec(&y, &spec).unwrap();
    let va = cb0(&quotient_by_subgroups(&x, &a).unwrap(), SubsetMode::Exhaustive, DEFAULT_CB0_BUDGET).unwrap();
    let vb = cb0(&quotient_by_subgroups(&y, &b).unwrap(), SubsetMode::Exhaustive, DEFAULT_CB0_BUDGET).unwrap();
    assert_eq!(va.value, vb.value);
}

#[test]
fn constant_sheaf_on_k4_beats_the_theorem_bound() {
    let x = graph_complex(&complete(4)).unwrap();
    let r = AbelianGroup::gf(2, 1).unwrap();
    let a = SubgroupAssignment::zero(&x, &r);
    let s = quotient_by_subgroups(&x, &a).unwrap();
    let v = cb0(&s, SubsetMode::Exhaustive, DEFAULT_CB0_BUDGET).unwrap();
    let bound = theorem_bound_for(&x, &a, DEFAULT_CB0_BUDGET).unwrap();
    assert!(v.value.to_f64() >= bound.value);
    // K4: one vertex flipped gives (3/6)/(1/4) = 2, a two-two split (4/6)/(1/2) = 4/3
    assert_eq!(v.value, Expansion::Finite(rat(4, 3)));
    assert!(!v.witness_distance.unwrap().is_zero());
}

#[test]
fn petersen_spectrum_is_the_scaled_adjacency_spectrum() {
    // adjacency eigenvalues 3, 1 (×5), −2 (×4), divided by the degree
    let x = graph_complex(&petersen()).unwrap();
    let mut want = vec![1.0];
    want.extend([1.0 / 3.0; 5]);
    want.extend([-2.0 / 3.0; 4]);
    sorted_close(spectrum(&x).unwrap().eigenvalues, want);
}

#[test]
fn a2_over_f2_is_the_heawood_graph() {
    // Heawood adjacency spectrum ±3, ±√2 (×6 each), scaled by 1/3
    let x = build_an(2, 2, 1 << 20).unwrap();
    assert_eq!(x.num_vertices(), 14);
    let t = 2f64.sqrt() / 3.0;
    let mut want = vec![1.0, -1.0];
    want.extend([t; 6]);
    want.extend([-t; 6]);
    sorted_close(spectrum(&x).unwrap().eigenvalues, want);
}

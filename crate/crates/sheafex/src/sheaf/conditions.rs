use std::collections::BTreeMap;

use serde::Serialize;

use super::group::{AbelianGroup, Subgroup};
use super::spec::SubgroupAssignment;
use crate::complex::{cycles_in, paths_in, CycleKind, SimpleGraph, WeightedComplex, DEFAULT_ENUMERATION_BUDGET};
use crate::error::{budget, Result};
use crate::linalg;

/// Whether the summation map `⊕ Rᵢ → R` is injective.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disjointness {
    pub disjoint: bool,
    /// Nonzero `(rᵢ)` with `Σ rᵢ = 0`, when not disjoint.
    pub certificate: Option<Vec<Vec<u32>>>,
}

/// Decides linear disjointness. The linear backend compares ranks; the
/// cyclic backend builds the sums one subgroup at a time and stops at the
/// first collision, spending at most `cap` additions.
pub fn check_linear_disjoint(g: &AbelianGroup, subgroups: &[&Subgroup], cap: u128) -> Result<Disjointness> {
    if let Some(f) = g.field() {
        let vectors: Vec<(usize, &Vec<u32>)> = subgroups
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.basis().expect("linear backend").iter().map(move |b| (i, b)))
            .collect();
        if linalg::rank(f, &vectors.iter().map(|(_, b)| (*b).clone()).collect::<Vec<_>>()) == vectors.len() {
            return Ok(Disjointness { disjoint: true, certificate: None });
        }
        let rows: Vec<Vec<u32>> = (0..g.rank()).map(|r| vectors.iter().map(|(_, b)| b[r]).collect()).collect();
        let c = linalg::kernel(f, &rows, vectors.len()).into_iter().next().expect("dependent columns");
        let mut cert = vec![g.zero(); subgroups.len()];
        for ((i, b), &ci) in vectors.iter().zip(&c) {
            cert[*i] = g.add(&cert[*i], &g.scale(b, ci as u64));
        }
        return Ok(Disjointness { disjoint: false, certificate: Some(cert) });
    }
    // sum code -> index of its (unique so far) decomposition
    let mut sums: BTreeMap<u64, usize> = BTreeMap::from([(0, 0)]);
    let mut reps: Vec<Vec<Vec<u32>>> = vec![vec![]];
    let mut work = 0u128;
    for (i, s) in subgroups.iter().enumerate() {
        let elems = s.elements(g);
        let mut next: BTreeMap<u64, usize> = BTreeMap::new();
        let mut next_reps = Vec::new();
        for (&code, &idx) in &sums {
            let base = g.decode(code);
            for r in &elems {
                work += 1;
                budget("linear disjointness search", cap, work)?;
                let sum = g.encode(&g.add(&base, r));
                let mut rep = reps[idx].clone();
                rep.push(r.clone());
                if let Some(&other) = next.get(&sum) {
                    let prev: &Vec<Vec<u32>> = &next_reps[other];
                    let mut cert: Vec<Vec<u32>> = rep.iter().zip(prev).map(|(a, b)| g.sub(a, b)).collect();
                    cert.resize(subgroups.len(), g.zero());
                    debug_assert!(i < subgroups.len());
                    return Ok(Disjointness { disjoint: false, certificate: Some(cert) });
                }
                next.insert(sum, next_reps.len());
                next_reps.push(rep);
            }
        }
        sums = next;
        reps = next_reps;
    }
    Ok(Disjointness { disjoint: true, certificate: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConditionOptions {
    /// Overrides the cycle-length bound `⌈2n/3⌉`. A smaller value no longer
    /// checks the theorem's hypothesis and is reported as such.
    pub max_cycle_len: Option<usize>,
    pub budget: u128,
}

impl Default for ConditionOptions {
    fn default() -> Self {
        ConditionOptions { max_cycle_len: None, budget: DEFAULT_ENUMERATION_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionViolation {
    /// 1 or 2.
    pub condition: u8,
    pub kind: CycleKind,
    pub vertices: Vec<u32>,
    pub edges: Vec<usize>,
    /// Kernel element of the summation map, aligned with the family
    /// (vertices first, then edges).
    pub certificate: Option<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub condition1: bool,
    pub condition2: bool,
    /// `⌈2n/3⌉`.
    pub cycle_bound: usize,
    pub cycle_len_checked: usize,
    pub hypothesis_weakened: bool,
    pub cycles_checked: usize,
    pub paths_checked: usize,
    pub first_violation: Option<ConditionViolation>,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.condition1 && self.condition2 && !self.hypothesis_weakened
    }
}

/// Checks `condition1` on every path of length 1 or 2 and every cycle of length at
/// most `⌈2n/3⌉`, and `condition2` on every pair of distinct vertices.
pub fn check_conditions(x: &WeightedComplex, a: &SubgroupAssignment, opts: ConditionOptions) -> Result<ConditionReport> {
    a.check_shape(x)?;
    let g = SimpleGraph::from_complex(x)?;
    let r = a.ambient();
    let n = g.n();
    let cycle_bound = (2 * n).div_ceil(3);
    let cycle_len_checked = opts.max_cycle_len.unwrap_or(cycle_bound);
    let paths = paths_in(&g, 2);
    let cycles = cycles_in(&g, cycle_len_checked, opts.budget)?;
    let mut first_violation = None;
    let mut condition1 = true;
    for y in paths.iter().chain(&cycles) {
        let family: Vec<&Subgroup> = y
            .vertices
            .iter()
            .map(|&v| &a.vertex[v as usize])
            .chain(y.edges.iter().map(|&e| &a.edge[e]))
            .collect();
        let d = check_linear_disjoint(r, &family, opts.budget)?;
        if !d.disjoint {
            condition1 = false;
            first_violation = Some(ConditionViolation {
                condition: 1,
                kind: y.kind,
                vertices: y.vertices.clone(),
                edges: y.edges.clone(),
                certificate: d.certificate,
            });
            break;
        }
    }
    let mut condition2 = true;
    'outer: for u in 0..n {
        for v in u + 1..n {
            if !a.vertex[u].meets_trivially(r, &a.vertex[v])? {
                condition2 = false;
                if first_violation.is_none() {
                    let d = check_linear_disjoint(r, &[&a.vertex[u], &a.vertex[v]], opts.budget)?;
                    first_violation = Some(ConditionViolation {
                        condition: 2,
                        kind: CycleKind::OpenPath,
                        vertices: vec![u as u32, v as u32],
                        edges: vec![],
                        certificate: d.certificate,
                    });
                }
                break 'outer;
            }
        }
    }
    Ok(ConditionReport {
        condition1,
        condition2,
        cycle_bound,
        cycle_len_checked,
        hypothesis_weakened: cycle_len_checked < cycle_bound,
        cycles_checked: cycles.len(),
        paths_checked: paths.len(),
        first_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{complete, cycle, graph_complex};

    fn sub(g: &AbelianGroup, gens: &[Vec<u32>]) -> Subgroup {
        Subgroup::generated(g, gens).unwrap()
    }

    #[test]
    fn disjointness_examples() {
        let g = AbelianGroup::gf(2, 2).unwrap();
        let e1 = sub(&g, &[vec![1, 0]]);
        let e2 = sub(&g, &[vec![0, 1]]);
        let d = sub(&g, &[vec![1, 1]]);
        assert!(check_linear_disjoint(&g, &[&e1, &e2], 1000).unwrap().disjoint);
        let r = check_linear_disjoint(&g, &[&e1, &e1], 1000).unwrap();
        assert_eq!(r.certificate, Some(vec![vec![1, 0], vec![1, 0]]));
        assert!(!check_linear_disjoint(&g, &[&d, &e1, &e2], 1000).unwrap().disjoint);
    }

    #[test]
    fn cyclic_certificates_sum_to_zero() {
        let g = AbelianGroup::cyclic(&[4, 2]).unwrap();
        let a = sub(&g, &[vec![2, 0]]);
        let b = sub(&g, &[vec![2, 1]]);
        let c = sub(&g, &[vec![0, 1]]);
        let r = check_linear_disjoint(&g, &[&a, &b, &c], 1000).unwrap();
        let cert = r.certificate.unwrap();
        let total = cert.iter().fold(g.zero(), |acc, v| g.add(&acc, v));
        assert_eq!(total, g.zero());
        assert!(cert.iter().any(|v| v.iter().any(|&x| x != 0)));
        assert!(check_linear_disjoint(&g, &[&a, &c], 1000).unwrap().disjoint);
    }

    #[test]
    fn zero_and_intro_assignments_pass() {
        let x = graph_complex(&cycle(6)).unwrap();
        let r = AbelianGroup::gf(2, 6).unwrap();
        let zero = SubgroupAssignment::zero(&x, &r);
        assert!(check_conditions(&x, &zero, ConditionOptions::default()).unwrap().holds());
        let mut intro = zero.clone();
        for v in 0..6 {
            intro.vertex[v] = sub(&r, &[r.unit(v)]);
        }
        let rep = check_conditions(&x, &intro, ConditionOptions::default()).unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert_eq!(rep.cycle_bound, 4);
        // C6 has no cycle of length ≤ 4
        assert_eq!(rep.cycles_checked, 0);
    }

    #[test]
    fn dependent_triangle_fails_condition_one() {
        // K4 checks cycles up to length 3
        let x = graph_complex(&complete(4)).unwrap();
        let r = AbelianGroup::gf(2, 2).unwrap();
        let mut a = SubgroupAssignment::zero(&x, &r);
        // edge labels of a coboundary sum to zero around the triangle 0,1,2
        a.edge[0] = sub(&r, &[vec![1, 0]]);
        a.edge[1] = sub(&r, &[vec![1, 1]]);
        a.edge[3] = sub(&r, &[vec![0, 1]]);
        let rep = check_conditions(&x, &a, ConditionOptions::default()).unwrap();
        assert!(!rep.condition1 && rep.condition2);
        let v = rep.first_violation.unwrap();
        assert_eq!((v.kind, v.vertices), (CycleKind::Cycle, vec![0, 1, 2]));
        let weak = check_conditions(&x, &a, ConditionOptions { max_cycle_len: Some(2), ..Default::default() }).unwrap();
        assert!(weak.condition1 && weak.hypothesis_weakened && !weak.holds());
    }
}

use super::cochain::{coboundary, normalize, Cochain};
use crate::complex::{SimpleGraph, WeightedComplex};
use crate::error::{budget, Error, Result};
use crate::linalg;
use crate::sheaf::{check_linear_disjoint, quotient_by_subgroups, AbelianGroup, Subgroup, SubgroupAssignment};

/// Writes `d = a + u + b` with the parts in the three subgroups.
fn decompose(
    g: &AbelianGroup,
    parts: [&Subgroup; 3],
    d: &[u32],
    cap: u128,
) -> Result<Option<[Vec<u32>; 3]>> {
    if let Some(f) = g.field() {
        let owned: Vec<(usize, &Vec<u32>)> = parts
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.basis().expect("linear backend").iter().map(move |b| (i, b)))
            .collect();
        let cols: Vec<Vec<u32>> = owned.iter().map(|(_, b)| (*b).clone()).collect();
        return Ok(linalg::solve_combination(f, &cols, d).map(|coef| {
            let mut out = [g.zero(), g.zero(), g.zero()];
            for ((i, b), c) in owned.iter().zip(coef) {
                out[*i] = g.add(&out[*i], &g.scale(b, c as u64));
            }
            out
        }));
    }
    let (a_el, u_el) = (parts[0].elements(g), parts[1].elements(g));
    budget("coset decomposition", cap, a_el.len() as u128 * u_el.len() as u128)?;
    for a in &a_el {
        for u in &u_el {
            let b = g.sub(&g.sub(d, a), u);
            if parts[2].contains(g, &b) {
                return Ok(Some([a.clone(), u.clone(), b]));
            }
        }
    }
    Ok(None)
}

/// For a cycle graph with jointly disjoint subgroups, finds `h ∈ R` with
/// `f(v) = h + R_v` for a cocycle `f` of the quotient sheaf.
///
/// Walks the cycle from vertex 0, splitting each step `g′ᵢ₊₁ − g′ᵢ` into its
/// `R_{vᵢ}`, `R_{eᵢ}`, `R_{vᵢ₊₁}` parts; the first vertex part corrects `g₀`.
pub fn solve_cycle_cocycle(x: &WeightedComplex, a: &SubgroupAssignment, f: &Cochain, cap: u128) -> Result<Vec<u32>> {
    let graph = SimpleGraph::from_complex(x)?;
    let n = graph.n();
    if n < 3 || !graph.is_connected() || (0..n as u32).any(|v| graph.degree(v) != 2) {
        return Err(Error::PreconditionViolated("the graph is not a cycle".into()));
    }
    let r = a.ambient();
    let family: Vec<&Subgroup> = a.vertex.iter().chain(&a.edge).collect();
    let dj = check_linear_disjoint(r, &family, cap)?;
    if !dj.disjoint {
        return Err(Error::DisjointnessViolated(format!("kernel element {:?}", dj.certificate.unwrap_or_default())));
    }
    let q = quotient_by_subgroups(x, a)?;
    let f = normalize(&q, f)?;
    if f.degree != 0 {
        return Err(Error::TypeMismatch("expected a 0-cochain".into()));
    }
    if let Some(e) = coboundary(&q, &f)?.values.iter().position(|v| v.iter().any(|&c| c != 0)) {
        return Err(Error::NotCocycle { edge: e });
    }
    // vertices v₀ = 0, v₁, … around the cycle and eᵢ = vᵢvᵢ₊₁
    let mut order = vec![0u32];
    let mut edges = Vec::new();
    while order.len() < n {
        let cur = *order.last().unwrap();
        let &(next, e) = graph
            .neighbors(cur)
            .iter()
            .find(|(u, _)| !order.contains(u))
            .expect("a cycle continues");
        order.push(next);
        edges.push(e);
    }
    let g: Vec<&Vec<u32>> = order.iter().map(|&v| &f.values[v as usize]).collect();
    let gp: Vec<Vec<u32>> = g.iter().map(|gi| r.sub(gi, g[0])).collect();
    let mut partial = r.zero();
    let mut tilde = r.zero();
    let mut c0 = None;
    for i in 0..n - 1 {
        let d = r.sub(&gp[i + 1], &r.add(&partial, &tilde));
        let parts = [&a.vertex[order[i] as usize], &a.edge[edges[i]], &a.vertex[order[i + 1] as usize]];
        let [ai, ui, bi] = decompose(r, parts, &d, cap)?.ok_or(Error::NotCocycle { edge: edges[i] })?;
        let ci = r.add(&ai, &tilde);
        c0.get_or_insert_with(|| ci.clone());
        partial = r.add(&partial, &r.add(&ci, &ui));
        tilde = bi;
    }
    let h = r.add(g[0], &c0.expect("at least one step"));
    for (v, fv) in f.values.iter().enumerate() {
        if !a.vertex[v].contains(r, &r.sub(fv, &h)) {
            return Err(Error::PreconditionViolated(format!("recovered h misses the coset at vertex {v}")));
        }
    }
    Ok(h)
}

use serde::Serialize;

use super::expansion::Expansion;
use crate::complex::{equal_edge_weights, ts_constants, WeightedComplex};
use crate::error::{budget, Error, Result};
use crate::scalar::{rational_to_f64, Rational};
use crate::sheaf::{check_linear_disjoint, AugmentedSheaf, Subgroup, SubgroupAssignment};
use crate::spectral::spectrum;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundInputs {
    pub lambda: f64,
    pub mu: f64,
    pub t: f64,
    pub s: f64,
    /// Present for the partite form.
    pub r: Option<u32>,
    /// The `s` term was dropped.
    pub s_elided: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremBound {
    pub value: f64,
    pub inputs: BoundInputs,
}

/// Lower bound on cb₀ of a quotient of the constant augmented sheaf:
/// `(2 − 4λ − 4M − 5t − 2s)/(5 − 2λ)` with `M = max(|λ|, |μ|)`, or for
/// `r + 1` classes `(2r − 4rλ − 4r²M − (5r+2)t − 2rs)/(5r + 2 − 2rλ)`.
/// The value is returned as is, negative or not.
pub fn theorem_bound(lambda: f64, mu: f64, t: f64, s: f64, r: Option<u32>, s_elided: bool) -> Result<TheoremBound> {
    if lambda < mu {
        return Err(Error::PreconditionViolated(format!("λ = {lambda} < μ = {mu}")));
    }
    let m = lambda.abs().max(mu.abs());
    let s_term = if s_elided { 0.0 } else { s };
    let value = match r {
        None => (2.0 - 4.0 * lambda - 4.0 * m - 5.0 * t - 2.0 * s_term) / (5.0 - 2.0 * lambda),
        Some(0) => return Err(Error::PreconditionViolated("r must be at least 1".into())),
        Some(r) => {
            let r = r as f64;
            if lambda < -1.0 / r {
                return Err(Error::PreconditionViolated(format!("λ = {lambda} < −1/r")));
            }
            (2.0 * r - 4.0 * r * lambda - 4.0 * r * r * m - (5.0 * r + 2.0) * t - 2.0 * r * s_term)
                / (5.0 * r + 2.0 - 2.0 * r * lambda)
        }
    };
    Ok(TheoremBound { value, inputs: BoundInputs { lambda, mu, t, s, r, s_elided } })
}

/// Closed form for a connected `k`-regular graph with canonical weights and
/// nontrivial spectrum in `[−ρ, ρ]`: `2/5 − 8ρ/5 − 2/k`, or in the bipartite
/// case `2/7 − 8ρ/7 − 2/k`. These drop the `−2λ` from the denominator, so
/// they are weaker than [`theorem_bound`] whenever the bound is positive.
pub fn regular_graph_bound(k: u32, rho: f64, bipartite: bool) -> f64 {
    let k = k as f64;
    if bipartite {
        2.0 / 7.0 - 8.0 * rho / 7.0 - 2.0 / k
    } else {
        2.0 / 5.0 - 8.0 * rho / 5.0 - 2.0 / k
    }
}

/// Theorem bound for a quotient sheaf on `x`, reading λ, μ from the
/// spectrum (the C⁰⋄ interval when `x` is partite) and t, s from the
/// weights. `s` is elided when all edges weigh the same or the vertex
/// subgroups are jointly linearly disjoint.
pub fn theorem_bound_for(x: &WeightedComplex, a: &SubgroupAssignment, cap: u128) -> Result<TheoremBound> {
    let spec = spectrum(x)?;
    let (t, s) = ts_constants(x)?;
    let partite = x.num_classes().filter(|&k| k >= 2);
    let interval = match partite {
        Some(_) => spec.interval_diamond,
        None => spec.interval_circ,
    };
    let (mu, lambda) = interval.ok_or_else(|| Error::PreconditionViolated("no nontrivial spectrum".into()))?;
    let vertex_refs: Vec<&Subgroup> = a.vertex.iter().collect();
    let s_elided = equal_edge_weights(x) || check_linear_disjoint(a.ambient(), &vertex_refs, cap)?.disjoint;
    theorem_bound(
        lambda,
        mu,
        rational_to_f64(&t),
        rational_to_f64(&s),
        partite.map(|k| k as u32 - 1),
        s_elided,
    )
}

/// `(ε, δ)` cosystolic claim for the sheaf with ∅ removed.
#[derive(Clone, Debug, Serialize)]
pub struct Remark42Claim {
    pub epsilon: Expansion,
    /// `max_{g ∈ F(∅)} ‖d₋₁g‖`.
    #[serde(serialize_with = "crate::scalar::ser_rational")]
    pub delta: Rational,
    /// `F(∅) = 0`, so δ = 0 says nothing.
    pub vacuous: bool,
    pub note: &'static str,
}

/// Turns a cb₀ value of an augmented sheaf into a cosystolic claim for
/// its de-augmentation.
pub fn remark42_convert(cb0: &Expansion, s: &AugmentedSheaf, cap: u128) -> Result<Remark42Claim> {
    let g = s.ambient();
    budget("enumeration of F(∅)", cap, s.empty_order() as u128)?;
    let x = s.complex();
    let delta = s
        .empty_sub()
        .transversal(g)?
        .iter()
        .map(|h| {
            (0..s.num_vertices())
                .filter(|&v| s.res_vertex(v, h).iter().any(|&c| c != 0))
                .map(|v| x.vertex_weights()[v].clone())
                .sum::<Rational>()
        })
        .max()
        .unwrap_or_default();
    Ok(Remark42Claim {
        epsilon: cb0.clone(),
        vacuous: s.empty_order() == 1,
        delta,
        note: "the converse direction needs H⁰(X, F) = 0",
    })
}

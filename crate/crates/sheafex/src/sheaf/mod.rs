//! Augmented sheaves on graphs with finite abelian coefficients.
//!
//! Every face group is a quotient `R/H_x` of one ambient group `R`, and
//! every restriction map is induced by an endomorphism of `R`. This covers
//! constant sheaves, the locally constant twist, and quotients of the
//! constant augmented sheaf by subgroup assignments.

mod conditions;
mod group;
mod spec;

pub use conditions::{
    check_conditions, check_linear_disjoint, ConditionOptions, ConditionReport, ConditionViolation, Disjointness,
};
pub use group::{AbelianGroup, Backend, Subgroup, SUBGROUP_ENUMERATION_CAP};
pub use spec::{SheafSpec, SubgroupAssignment};

use crate::complex::{SimpleGraph, WeightedComplex};
use crate::error::{Error, Result};
use crate::ff::GaloisField;

/// Restriction map, as an integer matrix acting on ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homomorphism {
    Identity,
    Zero,
    Matrix(Vec<Vec<u32>>),
}

impl Homomorphism {
    pub fn apply(&self, g: &AbelianGroup, v: &[u32]) -> Vec<u32> {
        match self {
            Homomorphism::Identity => v.to_vec(),
            Homomorphism::Zero => g.zero(),
            Homomorphism::Matrix(m) => g.apply(m, v),
        }
    }
    fn check(&self, g: &AbelianGroup) -> Result<()> {
        match self {
            Homomorphism::Matrix(m) if !g.is_endomorphism(m) => {
                Err(Error::TypeMismatch(format!("{m:?} is not an endomorphism of {:?}", g.backend())))
            }
            _ => Ok(()),
        }
    }
}

/// Raw ingredients of an [`AugmentedSheaf`]; `F(x) = R / sub[x]`.
#[derive(Clone, Debug)]
pub struct SheafParts {
    pub ambient: AbelianGroup,
    pub empty: Subgroup,
    pub vertex: Vec<Subgroup>,
    pub edge: Vec<Subgroup>,
    /// `res_{v←∅}` per vertex.
    pub res_vertex: Vec<Homomorphism>,
    /// `res_{e←∅}` per edge.
    pub res_edge_empty: Vec<Homomorphism>,
    /// `[res_{e←e⁻}, res_{e←e⁺}]` per edge, lower endpoint first.
    pub res_edge_vertex: Vec<[Homomorphism; 2]>,
}

/// An augmented sheaf on a weighted graph.
#[derive(Clone, Debug)]
pub struct AugmentedSheaf {
    x: WeightedComplex,
    p: SheafParts,
}

impl AugmentedSheaf {
    /// Validates well-definedness of every map and the composition law.
    pub fn new(x: &WeightedComplex, parts: SheafParts) -> Result<Self> {
        x.require_graph()?;
        let (nv, ne) = (x.num_vertices(), x.edges().len());
        if parts.vertex.len() != nv
            || parts.res_vertex.len() != nv
            || parts.edge.len() != ne
            || parts.res_edge_empty.len() != ne
            || parts.res_edge_vertex.len() != ne
        {
            return Err(Error::PreconditionViolated("sheaf data does not match the graph".into()));
        }
        let s = AugmentedSheaf { x: x.clone(), p: parts };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        let g = &self.p.ambient;
        let maps_into = |h: &Homomorphism, src: &Subgroup, tgt: &Subgroup, what: &str| -> Result<()> {
            h.check(g)?;
            if src.generators().iter().all(|v| tgt.contains(g, &h.apply(g, v))) {
                Ok(())
            } else {
                Err(Error::TypeMismatch(format!("{what} is not well defined on the quotient")))
            }
        };
        let key = |f: &[u32]| self.x.complex().face_key(f);
        for (v, h) in self.p.res_vertex.iter().enumerate() {
            maps_into(h, &self.p.empty, &self.p.vertex[v], &format!("res[{}←∅]", key(&[v as u32])))?;
        }
        for (e, face) in self.x.edges().iter().enumerate() {
            let tgt = &self.p.edge[e];
            maps_into(&self.p.res_edge_empty[e], &self.p.empty, tgt, &format!("res[{}←∅]", key(face)))?;
            for side in 0..2 {
                let v = face[side] as usize;
                let h = &self.p.res_edge_vertex[e][side];
                maps_into(h, &self.p.vertex[v], tgt, &format!("res[{}←{}]", key(face), key(&[v as u32])))?;
                for i in 0..g.rank() {
                    let u = g.unit(i);
                    let via = h.apply(g, &self.p.res_vertex[v].apply(g, &u));
                    let direct = self.p.res_edge_empty[e].apply(g, &u);
                    if !tgt.contains(g, &g.sub(&via, &direct)) {
                        return Err(Error::PreconditionViolated(format!(
                            "composition law fails at {} ⊃ {}",
                            key(face),
                            key(&[v as u32])
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> &WeightedComplex {
        &self.x
    }
    pub fn ambient(&self) -> &AbelianGroup {
        &self.p.ambient
    }
    pub fn parts(&self) -> &SheafParts {
        &self.p
    }
    pub fn num_vertices(&self) -> usize {
        self.p.vertex.len()
    }
    pub fn num_edges(&self) -> usize {
        self.p.edge.len()
    }
    /// The subgroup `H_∅` with `F(∅) = R/H_∅`.
    pub fn empty_sub(&self) -> &Subgroup {
        &self.p.empty
    }
    pub fn vertex_sub(&self, v: usize) -> &Subgroup {
        &self.p.vertex[v]
    }
    pub fn edge_sub(&self, e: usize) -> &Subgroup {
        &self.p.edge[e]
    }
    /// Non-augmented: `F(∅) = 0`.
    pub fn is_sheaf(&self) -> bool {
        self.p.empty.order(&self.p.ambient) == self.p.ambient.order()
    }
    pub fn vertex_order(&self, v: usize) -> u64 {
        self.p.ambient.order() / self.p.vertex[v].order(&self.p.ambient)
    }
    pub fn edge_order(&self, e: usize) -> u64 {
        self.p.ambient.order() / self.p.edge[e].order(&self.p.ambient)
    }
    pub fn empty_order(&self) -> u64 {
        self.p.ambient.order() / self.p.empty.order(&self.p.ambient)
    }
    pub fn canonical_vertex(&self, v: usize, a: &[u32]) -> Vec<u32> {
        self.p.vertex[v].canonical(&self.p.ambient, a)
    }
    pub fn canonical_edge(&self, e: usize, a: &[u32]) -> Vec<u32> {
        self.p.edge[e].canonical(&self.p.ambient, a)
    }
    pub fn canonical_empty(&self, a: &[u32]) -> Vec<u32> {
        self.p.empty.canonical(&self.p.ambient, a)
    }
    pub fn res_vertex(&self, v: usize, a: &[u32]) -> Vec<u32> {
        self.canonical_vertex(v, &self.p.res_vertex[v].apply(&self.p.ambient, a))
    }
    pub fn res_edge_empty(&self, e: usize, a: &[u32]) -> Vec<u32> {
        self.canonical_edge(e, &self.p.res_edge_empty[e].apply(&self.p.ambient, a))
    }
    /// The sheaf `F₀` agreeing with `F` on nonempty faces, with `F₀(∅) = 0`.
    pub fn deaugmented(&self) -> Result<AugmentedSheaf> {
        let mut p = self.p.clone();
        p.empty = Subgroup::full(&p.ambient);
        p.res_vertex.fill(Homomorphism::Zero);
        p.res_edge_empty.fill(Homomorphism::Zero);
        AugmentedSheaf::new(&self.x, p)
    }
    /// `res_{e←v}` with `side` 0 for the lower endpoint.
    pub fn res_edge_vertex(&self, e: usize, side: usize, a: &[u32]) -> Vec<u32> {
        self.canonical_edge(e, &self.p.res_edge_vertex[e][side].apply(&self.p.ambient, a))
    }
}

fn uniform(x: &WeightedComplex, ambient: &AbelianGroup, empty: Subgroup, from_empty: Homomorphism) -> SheafParts {
    let (nv, ne) = (x.num_vertices(), x.edges().len());
    SheafParts {
        ambient: ambient.clone(),
        empty,
        vertex: vec![Subgroup::zero(ambient); nv],
        edge: vec![Subgroup::zero(ambient); ne],
        res_vertex: vec![from_empty.clone(); nv],
        res_edge_empty: vec![from_empty; ne],
        res_edge_vertex: vec![[Homomorphism::Identity, Homomorphism::Identity]; ne],
    }
}

/// `F(x) = R` on every face including ∅, identity restrictions.
pub fn constant_aug_sheaf(x: &WeightedComplex, r: &AbelianGroup) -> Result<AugmentedSheaf> {
    AugmentedSheaf::new(x, uniform(x, r, Subgroup::zero(r), Homomorphism::Identity))
}

/// As [`constant_aug_sheaf`] but with `F(∅) = 0`.
pub fn constant_sheaf(x: &WeightedComplex, r: &AbelianGroup) -> Result<AugmentedSheaf> {
    AugmentedSheaf::new(x, uniform(x, r, Subgroup::full(r), Homomorphism::Zero))
}

/// The sheaf with `F(x) = F` on nonempty faces and identity restrictions,
/// except `res_{e₀←v₀} = α·id`.
///
/// `alpha` is an element index of `field`; `F` is realized as `F_p^e`.
pub fn locally_constant_twist(
    x: &WeightedComplex,
    field: &GaloisField,
    alpha: u32,
    e0: usize,
    v0: u32,
) -> Result<AugmentedSheaf> {
    x.require_graph()?;
    let fail = |m: &str| Err(Error::PreconditionViolated(m.to_string()));
    if field.order() <= 2 {
        return fail("the field must have more than 2 elements");
    }
    if alpha <= 1 || alpha >= field.order() {
        return fail("α must lie in F − {0, 1}");
    }
    let Some(edge) = x.edges().get(e0) else {
        return fail("e₀ is not an edge");
    };
    let Some(side) = edge.iter().position(|&v| v == v0) else {
        return fail("v₀ is not a vertex of e₀");
    };
    let g = SimpleGraph::from_complex(x)?;
    if (0..g.n() as u32).any(|v| g.degree(v) < 2) {
        return fail("every vertex must lie in at least 2 edges");
    }
    if !g.is_connected() {
        return fail("the graph must be connected");
    }
    let r = AbelianGroup::gf(field.characteristic(), field.degree() as usize)?;
    let mut parts = uniform(x, &r, Subgroup::full(&r), Homomorphism::Zero);
    parts.res_edge_vertex[e0][side] = Homomorphism::Matrix(field.mul_matrix(alpha));
    AugmentedSheaf::new(x, parts)
}

/// The quotient `R̄/𝒢` with `𝒢(v) = R_v` and `𝒢(e) = R_u + R_v + R_e`.
pub fn quotient_by_subgroups(x: &WeightedComplex, a: &SubgroupAssignment) -> Result<AugmentedSheaf> {
    a.check_shape(x)?;
    let r = a.ambient();
    let mut parts = uniform(x, r, Subgroup::zero(r), Homomorphism::Identity);
    parts.vertex = a.vertex.clone();
    for (e, face) in x.edges().iter().enumerate() {
        parts.edge[e] = a.edge[e].join(r, &a.vertex[face[0] as usize])?.join(r, &a.vertex[face[1] as usize])?;
    }
    AugmentedSheaf::new(x, parts)
}

/// `R_v = 0` and `R_e` spanned by the edge difference of `f`, so `f`
/// becomes a cocycle of the quotient that is not a coboundary whenever it
/// is nonconstant on a connected graph.
pub fn degenerate_assignment(x: &WeightedComplex, r: &AbelianGroup, f: &[Vec<u32>]) -> Result<SubgroupAssignment> {
    x.require_graph()?;
    if f.len() != x.num_vertices() {
        return Err(Error::BadDimension { expected: format!("{} vertex values", x.num_vertices()), got: f.len() });
    }
    for v in f {
        r.check(v)?;
    }
    let edge = x
        .edges()
        .iter()
        .map(|e| {
            let d = r.sub(&f[e[1] as usize], &f[e[0] as usize]);
            Subgroup::generated(r, &[d])
        })
        .collect::<Result<Vec<_>>>()?;
    SubgroupAssignment::new(x, r, vec![Subgroup::zero(r); x.num_vertices()], edge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{complete, cycle, graph_complex, path};

    #[test]
    fn constant_sheaves() {
        let k3 = graph_complex(&complete(3)).unwrap();
        let f2 = AbelianGroup::gf(2, 1).unwrap();
        let s = constant_aug_sheaf(&k3, &f2).unwrap();
        assert!(!s.is_sheaf());
        assert!((0..3).all(|v| s.vertex_order(v) == 2));
        let s = constant_sheaf(&k3, &f2).unwrap();
        assert!(s.is_sheaf());
        assert_eq!(s.empty_order(), 1);
        let p3 = graph_complex(&path(3)).unwrap();
        let z3 = AbelianGroup::cyclic(&[3]).unwrap();
        let s = constant_aug_sheaf(&p3, &z3).unwrap();
        assert_eq!(s.edge_order(1), 3);
        assert_eq!(s.res_edge_vertex(0, 1, &[2]), vec![2]);
    }

    #[test]
    fn twist_preconditions() {
        let k3 = graph_complex(&complete(3)).unwrap();
        let f3 = GaloisField::new(3).unwrap();
        let s = locally_constant_twist(&k3, &f3, 2, 0, 0).unwrap();
        assert_eq!(s.res_edge_vertex(0, 0, &[1]), vec![2]);
        assert_eq!(s.res_edge_vertex(0, 1, &[1]), vec![1]);
        assert!(locally_constant_twist(&k3, &f3, 1, 0, 0).is_err());
        assert!(locally_constant_twist(&k3, &GaloisField::new(2).unwrap(), 1, 0, 0).is_err());
        assert!(locally_constant_twist(&k3, &f3, 2, 0, 2).is_err());
        let p3 = graph_complex(&path(3)).unwrap();
        assert!(locally_constant_twist(&p3, &f3, 2, 0, 0).is_err());
        let f4 = GaloisField::new(4).unwrap();
        let s = locally_constant_twist(&graph_complex(&cycle(4)).unwrap(), &f4, 2, 0, 1).unwrap();
        assert_eq!(s.ambient().order(), 4);
    }

    #[test]
    fn composition_law_is_enforced() {
        let p2 = graph_complex(&path(2)).unwrap();
        let z4 = AbelianGroup::cyclic(&[4]).unwrap();
        let mut parts = uniform(&p2, &z4, Subgroup::zero(&z4), Homomorphism::Identity);
        parts.res_edge_vertex[0][0] = Homomorphism::Matrix(vec![vec![3]]);
        assert!(matches!(AugmentedSheaf::new(&p2, parts.clone()), Err(Error::PreconditionViolated(_))));
        // an ill-defined map out of a quotient
        parts.res_edge_vertex[0][0] = Homomorphism::Identity;
        parts.vertex[0] = Subgroup::generated(&z4, &[vec![2]]).unwrap();
        assert!(matches!(AugmentedSheaf::new(&p2, parts), Err(Error::TypeMismatch(_))));
    }

    #[test]
    fn quotient_orders() {
        let k3 = graph_complex(&complete(3)).unwrap();
        let r = AbelianGroup::gf(2, 3).unwrap();
        let zero = quotient_by_subgroups(&k3, &SubgroupAssignment::zero(&k3, &r)).unwrap();
        assert!((0..3).all(|e| zero.edge_order(e) == 8));
        let mut a = SubgroupAssignment::zero(&k3, &r);
        for v in 0..3 {
            a.vertex[v] = Subgroup::generated(&r, &[r.unit(v)]).unwrap();
        }
        let q = quotient_by_subgroups(&k3, &a).unwrap();
        for v in 0..3 {
            assert_eq!(q.vertex_order(v) * a.vertex[v].order(&r), r.order());
        }
        assert!((0..3).all(|e| q.edge_order(e) == 2));
        let full = SubgroupAssignment::new(&k3, &r, vec![Subgroup::full(&r); 3], vec![Subgroup::zero(&r); 3]).unwrap();
        let q = quotient_by_subgroups(&k3, &full).unwrap();
        assert!((0..3).all(|v| q.vertex_order(v) == 1));
    }
}

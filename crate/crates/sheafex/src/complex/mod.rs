//! Finite pure simplicial complexes, weight functions and partite labelings.

mod cycles;
mod graph;
mod io;

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{binomial, fmt_rational, Rational};

pub use cycles::{
    cycle_minus_subgraph, cycles_in, enumerate_cycles, paths_in, enumerate_short_paths, CycleKind, CyclePath,
    OpenPathPiece, DEFAULT_ENUMERATION_BUDGET,
};
pub use graph::{ScaledWeights, SimpleGraph};
pub use io::{complex_from_json, complex_to_json, ComplexFile};

/// A face as a strictly increasing list of dense vertex indices.
pub type Face = Vec<u32>;

/// Downward-closed pure complex without weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_ids: Vec<String>,
    dim: usize,
    // faces[k + 1] lists X(k) in lexicographic order
    faces: Vec<Vec<Face>>,
    index: Vec<HashMap<Face, usize>>,
    partite: Option<Vec<u32>>,
}

/// Builds the downward closure of a list of equal-size top faces.
///
/// Vertex identifiers are sorted lexicographically and mapped to dense
/// indices in that order.
pub fn build_complex<S: AsRef<str>>(top_faces: &[Vec<S>]) -> Result<SimplicialComplex> {
    let first = top_faces.first().ok_or(Error::EmptyInput)?.len();
    if first == 0 {
        return Err(Error::EmptyInput);
    }
    let mut ids = BTreeSet::new();
    for f in top_faces {
        if f.len() != first {
            return Err(Error::MixedDimension { first, other: f.len() });
        }
        ids.extend(f.iter().map(|v| v.as_ref().to_string()));
    }
    let vertex_ids: Vec<String> = ids.into_iter().collect();
    let lookup: HashMap<&str, u32> =
        vertex_ids.iter().enumerate().map(|(i, v)| (v.as_str(), i as u32)).collect();
    let mut tops = Vec::with_capacity(top_faces.len());
    for f in top_faces {
        let mut face: Face = f.iter().map(|v| lookup[v.as_ref()]).collect();
        face.sort_unstable();
        if face.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidFace(f.iter().map(|v| v.as_ref().to_string()).collect()));
        }
        tops.push(face);
    }
    Ok(SimplicialComplex::from_top_indices(vertex_ids, tops))
}

/// All subfaces of `face`, including the empty face and `face` itself.
pub fn subfaces(face: &[u32]) -> impl Iterator<Item = Face> + '_ {
    (0u32..1 << face.len()).map(move |mask| {
        face.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect()
    })
}

impl SimplicialComplex {
    fn from_top_indices(vertex_ids: Vec<String>, tops: Vec<Face>) -> Self {
        let dim = tops[0].len() - 1;
        let mut sets: Vec<BTreeSet<Face>> = vec![BTreeSet::new(); dim + 2];
        for t in &tops {
            for s in subfaces(t) {
                sets[s.len()].insert(s);
            }
        }
        let faces: Vec<Vec<Face>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = faces
            .iter()
            .map(|fs| fs.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect())
            .collect();
        SimplicialComplex { vertex_ids, dim, faces, index, partite: None }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }
    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }
    pub fn num_vertices(&self) -> usize {
        self.vertex_ids.len()
    }
    /// Faces of dimension `k` (`k = -1` is the empty face).
    pub fn faces(&self, k: isize) -> &[Face] {
        &self.faces[(k + 1) as usize]
    }
    pub fn top_faces(&self) -> &[Face] {
        &self.faces[self.dim + 1]
    }
    pub fn edges(&self) -> &[Face] {
        if self.dim >= 1 {
            &self.faces[2]
        } else {
            &[]
        }
    }
    pub fn face_index(&self, face: &[u32]) -> Option<usize> {
        self.index.get(face.len())?.get(face).copied()
    }
    pub fn face_ids(&self, face: &[u32]) -> Vec<String> {
        face.iter().map(|&v| self.vertex_ids[v as usize].clone()).collect()
    }
    pub fn vertex_index(&self, id: &str) -> Option<u32> {
        self.vertex_ids.binary_search_by(|v| v.as_str().cmp(id)).ok().map(|i| i as u32)
    }
    /// Comma-joined sorted vertex identifiers.
    pub fn face_key(&self, face: &[u32]) -> String {
        self.face_ids(face).join(",")
    }

    /// Class index per vertex, if a partite labeling is attached.
    pub fn partite(&self) -> Option<&[u32]> {
        self.partite.as_deref()
    }
    /// Number of classes `r + 1`.
    pub fn num_classes(&self) -> Option<usize> {
        self.partite.as_ref().map(|c| c.iter().max().map_or(0, |&m| m as usize + 1))
    }
    /// Attaches a labeling; faces with two vertices in one class are reported
    /// by `validate_weights`, not rejected here.
    pub fn with_partite(mut self, classes: Vec<u32>) -> Result<Self> {
        if classes.len() != self.num_vertices() {
            return Err(Error::PreconditionViolated(format!(
                "partite labeling has {} entries for {} vertices",
                classes.len(),
                self.num_vertices()
            )));
        }
        self.partite = Some(classes);
        Ok(self)
    }
    fn partite_ok(&self, face: &[u32]) -> bool {
        match &self.partite {
            None => true,
            Some(c) => {
                let mut seen: Vec<u32> = face.iter().map(|&v| c[v as usize]).collect();
                seen.sort_unstable();
                seen.windows(2).all(|w| w[0] != w[1])
            }
        }
    }

    /// Top faces as identifier lists.
    pub fn top_face_ids(&self) -> Vec<Vec<String>> {
        self.top_faces().iter().map(|f| self.face_ids(f)).collect()
    }
}

/// A complex together with a positive weight on every face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedComplex {
    complex: SimplicialComplex,
    // weights[k + 1][i] is the weight of faces(k)[i]
    weights: Vec<Vec<Rational>>,
}

/// Weights induced by the uniform distribution on top faces.
pub fn canonical_weights(shell: &SimplicialComplex) -> WeightedComplex {
    let n = shell.top_faces().len() as i64;
    let top = vec![Rational::new(BigInt::one(), BigInt::from(n)); n as usize];
    WeightedComplex::from_top_weights(shell.clone(), top)
}

impl WeightedComplex {
    /// Extends top-face weights downward through (W2).
    pub fn from_top_weights(complex: SimplicialComplex, top: Vec<Rational>) -> Self {
        let d = complex.dim;
        assert_eq!(top.len(), complex.top_faces().len());
        let mut weights: Vec<Vec<Rational>> =
            complex.faces.iter().map(|fs| vec![Rational::zero(); fs.len()]).collect();
        for (face, w) in complex.top_faces().iter().zip(&top) {
            for s in subfaces(face) {
                let i = complex.index[s.len()][&s];
                weights[s.len()][i] += w;
            }
        }
        for (k1, ws) in weights.iter_mut().enumerate().take(d + 1) {
            let c = Rational::from_integer(binomial(d + 1, k1));
            for w in ws.iter_mut() {
                *w = &*w / &c;
            }
        }
        WeightedComplex { complex, weights }
    }

    /// Uses the given weights verbatim; see `validate_weights`.
    pub fn from_parts(complex: SimplicialComplex, weights: Vec<Vec<Rational>>) -> Result<Self> {
        if weights.len() != complex.faces.len()
            || weights.iter().zip(&complex.faces).any(|(w, f)| w.len() != f.len())
        {
            return Err(Error::PreconditionViolated("weight table shape mismatch".into()));
        }
        Ok(WeightedComplex { complex, weights })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }
    pub fn dimension(&self) -> usize {
        self.complex.dim
    }
    pub fn num_vertices(&self) -> usize {
        self.complex.num_vertices()
    }
    pub fn weight(&self, k: isize, i: usize) -> &Rational {
        &self.weights[(k + 1) as usize][i]
    }
    pub fn weights(&self, k: isize) -> &[Rational] {
        &self.weights[(k + 1) as usize]
    }
    pub fn face_weight(&self, face: &[u32]) -> Option<&Rational> {
        self.complex.face_index(face).map(|i| &self.weights[face.len()][i])
    }
    pub fn vertex_weights(&self) -> &[Rational] {
        self.weights(0)
    }
    pub fn edge_weights(&self) -> &[Rational] {
        if self.complex.dim >= 1 {
            self.weights(1)
        } else {
            &[]
        }
    }
    pub fn edges(&self) -> &[Face] {
        self.complex.edges()
    }
    pub fn partite(&self) -> Option<&[u32]> {
        self.complex.partite()
    }
    pub fn num_classes(&self) -> Option<usize> {
        self.complex.num_classes()
    }
    pub fn with_partite(self, classes: Vec<u32>) -> Result<Self> {
        Ok(WeightedComplex { complex: self.complex.with_partite(classes)?, ..self })
    }

    /// Replaces one weight; used to build deliberately invalid instances.
    pub fn set_weight(&mut self, k: isize, i: usize, w: Rational) {
        self.weights[(k + 1) as usize][i] = w;
    }

    /// Fails unless the complex is a graph.
    pub fn require_graph(&self) -> Result<()> {
        if self.complex.dim != 1 {
            return Err(Error::BadDimension { expected: "1".into(), got: self.complex.dim });
        }
        Ok(())
    }

    /// Total weight of a vertex set.
    pub fn vertex_set_weight(&self, set: &[u32]) -> Rational {
        set.iter().map(|&v| &self.weights[1][v as usize]).sum()
    }

    /// Whether the weights equal the canonical ones.
    pub fn is_canonical(&self) -> bool {
        *self == canonical_weights(&self.complex)
    }

    /// Class masses `w(X_{i})` for a partite complex.
    pub fn class_masses(&self) -> Option<Vec<Rational>> {
        let classes = self.partite()?;
        let mut m = vec![Rational::zero(); self.num_classes()?];
        for (v, &c) in classes.iter().enumerate() {
            m[c as usize] += &self.weights[1][v];
        }
        Some(m)
    }

    /// Edge masses `w(E(X_{i}, X_{j}))` for `i < j`, keyed by the pair.
    pub fn class_edge_masses(&self) -> Option<Vec<((usize, usize), Rational)>> {
        let classes = self.partite()?;
        let r1 = self.num_classes()?;
        let mut m = vec![vec![Rational::zero(); r1]; r1];
        for (e, w) in self.edges().iter().zip(self.edge_weights()) {
            let (a, b) = (classes[e[0] as usize] as usize, classes[e[1] as usize] as usize);
            let (a, b) = (a.min(b), a.max(b));
            m[a][b] += w;
        }
        let mut out = Vec::new();
        for i in 0..r1 {
            for j in i + 1..r1 {
                out.push(((i, j), m[i][j].clone()));
            }
        }
        Some(out)
    }
}

/// Which weight axiom a violation concerns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Positivity,
    W1,
    W2,
    /// The superset-sum identity between dimensions `k ≤ ell`.
    SupersetSum { ell: usize },
    Partite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub face: Vec<String>,
    pub expected: Option<String>,
    pub found: Option<String>,
}

/// Every violated axiom with its witnessing face; empty iff valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks positivity, (W1), (W2), the superset-sum identity for all
/// `k ≤ ℓ`, and the partite condition.
pub fn validate_weights(x: &WeightedComplex) -> ValidationReport {
    let c = &x.complex;
    let d = c.dim;
    let mut violations = Vec::new();
    let push = |v: &mut Vec<Violation>, axiom, face: &[u32], exp: Option<&Rational>, found: &Rational| {
        v.push(Violation {
            axiom,
            face: c.face_ids(face),
            expected: exp.map(fmt_rational),
            found: Some(fmt_rational(found)),
        })
    };
    for (k1, fs) in c.faces.iter().enumerate() {
        for (f, w) in fs.iter().zip(&x.weights[k1]) {
            if !w.is_positive() {
                push(&mut violations, Axiom::Positivity, f, None, w);
            }
        }
    }
    let total: Rational = x.weights[d + 1].iter().sum();
    if !total.is_one() {
        violations.push(Violation {
            axiom: Axiom::W1,
            face: vec![],
            expected: Some("1".into()),
            found: Some(fmt_rational(&total)),
        });
    }
    // sums[ell][k1][i] = Σ_{y ∈ X(ell), y ⊇ x} w(y)
    for ell in 0..=d {
        let mut sums: Vec<Vec<Rational>> =
            c.faces.iter().take(ell + 1).map(|fs| vec![Rational::zero(); fs.len()]).collect();
        for (y, wy) in c.faces[ell + 1].iter().zip(&x.weights[ell + 1]) {
            for s in subfaces(y) {
                if s.len() <= ell {
                    let i = c.index[s.len()][&s];
                    sums[s.len()][i] += wy;
                }
            }
        }
        for (k1, ws) in sums.iter().enumerate() {
            let coef = Rational::from_integer(binomial(ell + 1, k1));
            for (i, s) in ws.iter().enumerate() {
                let face = &c.faces[k1][i];
                let expected = &x.weights[k1][i] * &coef;
                if *s != expected {
                    let axiom = if ell == d { Axiom::W2 } else { Axiom::SupersetSum { ell } };
                    // report (W2) in its normalized form w(x) = Σ / C(d+1, k+1)
                    if ell == d {
                        push(&mut violations, axiom, face, Some(&(s / &coef)), &x.weights[k1][i]);
                    } else {
                        push(&mut violations, axiom, face, Some(&expected), s);
                    }
                }
            }
        }
    }
    for fs in &c.faces {
        for f in fs {
            if !c.partite_ok(f) {
                violations.push(Violation {
                    axiom: Axiom::Partite,
                    face: c.face_ids(f),
                    expected: None,
                    found: None,
                });
            }
        }
    }
    ValidationReport { violations }
}

/// Faces of dimension at most `k` with restricted weights.
pub fn skeleton(x: &WeightedComplex, k: usize) -> Result<WeightedComplex> {
    let d = x.dimension();
    if k > d {
        return Err(Error::BadDimension { expected: format!("≤ {d}"), got: k });
    }
    let faces: Vec<Vec<Face>> = x.complex.faces[..k + 2].to_vec();
    let index = x.complex.index[..k + 2].to_vec();
    let complex = SimplicialComplex {
        vertex_ids: x.complex.vertex_ids.clone(),
        dim: k,
        faces,
        index,
        partite: x.complex.partite.clone(),
    };
    Ok(WeightedComplex { complex, weights: x.weights[..k + 2].to_vec() })
}

/// `t = max w(e)/w(x)` over incident pairs and `s = max w(e)`.
pub fn ts_constants(x: &WeightedComplex) -> Result<(Rational, Rational)> {
    x.require_graph()?;
    let vw = x.vertex_weights();
    let mut t = Rational::zero();
    let mut s = Rational::zero();
    for (e, w) in x.edges().iter().zip(x.edge_weights()) {
        for &v in e {
            let r = w / &vw[v as usize];
            if r > t {
                t = r;
            }
        }
        if *w > s {
            s = w.clone();
        }
    }
    Ok((t, s))
}

/// Whether every edge carries the same weight.
pub fn equal_edge_weights(x: &WeightedComplex) -> bool {
    x.edge_weights().windows(2).all(|w| w[0] == w[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn graph(edges: &[(&str, &str)]) -> WeightedComplex {
        let tops: Vec<Vec<&str>> = edges.iter().map(|&(a, b)| vec![a, b]).collect();
        canonical_weights(&build_complex(&tops).unwrap())
    }

    #[test]
    fn closures() {
        let p3 = build_complex(&[vec!["a", "b"], vec!["b", "c"]]).unwrap();
        assert_eq!(p3.faces(0).len(), 3);
        assert_eq!(p3.faces(1).len(), 2);
        assert_eq!(p3.faces(-1), &[Vec::<u32>::new()]);
        let tri = build_complex(&[vec!["a", "b", "c"]]).unwrap();
        assert_eq!((tri.faces(1).len(), tri.faces(0).len(), tri.dimension()), (3, 3, 2));
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            build_complex(&[vec!["a", "b"], vec!["c"]]),
            Err(Error::MixedDimension { first: 2, other: 1 })
        );
        assert_eq!(build_complex::<&str>(&[]), Err(Error::EmptyInput));
        assert!(matches!(build_complex(&[vec!["a", "a"]]), Err(Error::InvalidFace(_))));
    }

    #[test]
    fn canonical_k3_and_p3() {
        let k3 = graph(&[("a", "b"), ("b", "c"), ("a", "c")]);
        assert!(k3.edge_weights().iter().all(|w| *w == rat(1, 3)));
        assert!(k3.vertex_weights().iter().all(|w| *w == rat(1, 3)));
        assert_eq!(*k3.weight(-1, 0), rat(1, 1));
        assert!(validate_weights(&k3).is_valid());

        let p3 = graph(&[("a", "b"), ("b", "c")]);
        assert_eq!(p3.vertex_weights(), &[rat(1, 4), rat(1, 2), rat(1, 4)]);
        assert_eq!(p3.edge_weights(), &[rat(1, 2), rat(1, 2)]);
        let total: Rational = p3.vertex_weights().iter().sum();
        assert_eq!(total, rat(1, 1));
    }

    #[test]
    fn perturbed_weight_is_reported() {
        let mut k3 = graph(&[("a", "b"), ("b", "c"), ("a", "c")]);
        k3.set_weight(0, 1, rat(1, 3) + rat(1, 100));
        let report = validate_weights(&k3);
        assert!(report
            .violations
            .iter()
            .any(|v| v.axiom == Axiom::W2 && v.face == vec!["b".to_string()]));
    }

    #[test]
    fn skeleton_of_triangle() {
        let tri = canonical_weights(&build_complex(&[vec!["a", "b", "c"]]).unwrap());
        let s = skeleton(&tri, 1).unwrap();
        assert_eq!(s.dimension(), 1);
        assert!(validate_weights(&s).is_valid());
        assert!(s.edge_weights().iter().all(|w| *w == rat(1, 3)));
        assert_eq!(skeleton(&tri, 2).unwrap(), tri);
        assert!(skeleton(&tri, 3).is_err());
    }

    #[test]
    fn ts_values() {
        let k3 = graph(&[("a", "b"), ("b", "c"), ("a", "c")]);
        assert_eq!(ts_constants(&k3).unwrap(), (rat(1, 1), rat(1, 3)));
        let p3 = graph(&[("a", "b"), ("b", "c")]);
        assert_eq!(ts_constants(&p3).unwrap(), (rat(2, 1), rat(1, 2)));
    }

    #[test]
    fn partite_violation() {
        let p3 = graph(&[("a", "b"), ("b", "c")]).with_partite(vec![0, 0, 1]).unwrap();
        let r = validate_weights(&p3);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].axiom, Axiom::Partite);
    }
}

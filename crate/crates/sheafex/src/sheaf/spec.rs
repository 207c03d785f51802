use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::group::{AbelianGroup, Backend, Subgroup};
use crate::complex::WeightedComplex;
use crate::error::{Error, Result};

/// Subgroups `R_x ≤ R` for every vertex and edge; `R_∅ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgroupAssignment {
    ambient: AbelianGroup,
    pub vertex: Vec<Subgroup>,
    pub edge: Vec<Subgroup>,
}

impl SubgroupAssignment {
    pub fn new(x: &WeightedComplex, ambient: &AbelianGroup, vertex: Vec<Subgroup>, edge: Vec<Subgroup>) -> Result<Self> {
        let a = SubgroupAssignment { ambient: ambient.clone(), vertex, edge };
        a.check_shape(x)?;
        Ok(a)
    }
    pub fn zero(x: &WeightedComplex, ambient: &AbelianGroup) -> Self {
        SubgroupAssignment {
            ambient: ambient.clone(),
            vertex: vec![Subgroup::zero(ambient); x.num_vertices()],
            edge: vec![Subgroup::zero(ambient); x.edges().len()],
        }
    }
    pub fn ambient(&self) -> &AbelianGroup {
        &self.ambient
    }
    pub(crate) fn check_shape(&self, x: &WeightedComplex) -> Result<()> {
        x.require_graph()?;
        if self.vertex.len() != x.num_vertices() || self.edge.len() != x.edges().len() {
            return Err(Error::PreconditionViolated("subgroup assignment does not match the graph".into()));
        }
        Ok(())
    }
    pub fn from_spec(x: &WeightedComplex, spec: &SheafSpec) -> Result<Self> {
        let ambient = AbelianGroup::new(spec.ambient.clone())?;
        let mut a = Self::zero(x, &ambient);
        let c = x.complex();
        for (key, gens) in &spec.subgroups {
            let mut face = key
                .split(',')
                .map(|id| c.vertex_index(id.trim()).ok_or_else(|| Error::UnknownVertex(id.to_string())))
                .collect::<Result<Vec<u32>>>()?;
            face.sort_unstable();
            let sub = Subgroup::generated(&ambient, gens)?;
            let slot = match face.len() {
                1 => &mut a.vertex[face[0] as usize],
                2 => {
                    let e = c.face_index(&face).ok_or_else(|| Error::InvalidFace(c.face_ids(&face)))?;
                    &mut a.edge[e]
                }
                _ => return Err(Error::InvalidFace(c.face_ids(&face))),
            };
            *slot = sub;
        }
        Ok(a)
    }
    /// Nontrivial subgroups only, keyed by face.
    pub fn to_spec(&self, x: &WeightedComplex) -> SheafSpec {
        let c = x.complex();
        let vs = self.vertex.iter().enumerate().map(|(v, s)| (c.face_key(&[v as u32]), s));
        let es = self.edge.iter().zip(x.edges()).map(|(s, f)| (c.face_key(f), s));
        SheafSpec {
            ambient: self.ambient.backend().clone(),
            subgroups: vs
                .chain(es)
                .filter(|(_, s)| !s.is_trivial())
                .map(|(k, s)| (k, s.generators().to_vec()))
                .collect(),
        }
    }
}

/// JSON form of a quotient sheaf: ambient group and generators per face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafSpec {
    pub ambient: Backend,
    #[serde(default)]
    pub subgroups: BTreeMap<String, Vec<Vec<u32>>>,
}

impl SheafSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sheaf specs serialize") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{complete, graph_complex};

    #[test]
    fn spec_round_trip() {
        let k3 = graph_complex(&complete(3)).unwrap();
        let text = r#"{"ambient": {"backend": "gf", "p": 2, "k": 3},
                       "subgroups": {"v00": [[1,0,0]], "v01,v02": [[0,1,1]]}}"#;
        let spec = SheafSpec::from_json(text).unwrap();
        let a = SubgroupAssignment::from_spec(&k3, &spec).unwrap();
        assert_eq!(a.vertex[0].order(a.ambient()), 2);
        assert_eq!(a.edge[2].order(a.ambient()), 2);
        assert!(a.vertex[1].is_trivial());
        assert_eq!(a.to_spec(&k3), spec);
        let back = SheafSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn spec_errors() {
        let k3 = graph_complex(&complete(3)).unwrap();
        let bad_vertex = r#"{"ambient": {"backend": "cyclic", "moduli": [4]}, "subgroups": {"zz": [[1]]}}"#;
        let spec = SheafSpec::from_json(bad_vertex).unwrap();
        assert!(matches!(SubgroupAssignment::from_spec(&k3, &spec), Err(Error::UnknownVertex(_))));
        let bad_gen = r#"{"ambient": {"backend": "cyclic", "moduli": [4]}, "subgroups": {"v00": [[5]]}}"#;
        let spec = SheafSpec::from_json(bad_gen).unwrap();
        assert!(matches!(SubgroupAssignment::from_spec(&k3, &spec), Err(Error::NotSubgroup(_))));
        assert!(SheafSpec::from_json("{}").is_err());
    }
}

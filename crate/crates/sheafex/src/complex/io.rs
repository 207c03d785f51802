use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{build_complex, canonical_weights, WeightedComplex};
use crate::error::{Error, Result};
use crate::scalar::{fmt_rational, parse_rational};

/// On-disk complex format. Weight keys are comma-joined sorted vertex ids,
/// with `""` for the empty face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub dimension: usize,
    pub top_faces: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partite: Option<BTreeMap<String, u32>>,
}

impl ComplexFile {
    pub fn to_complex(&self) -> Result<WeightedComplex> {
        let shell = build_complex(&self.top_faces)?;
        if shell.dimension() != self.dimension {
            return Err(Error::Parse(format!(
                "declared dimension {} but top faces have dimension {}",
                self.dimension,
                shell.dimension()
            )));
        }
        let mut x = match &self.weights {
            None => canonical_weights(&shell),
            Some(map) => {
                let mut parsed = Vec::with_capacity(map.len());
                for (key, val) in map {
                    let face = parse_face_key(&shell, key)?;
                    let w = parse_rational(val)
                        .ok_or_else(|| Error::Parse(format!("bad weight {val:?} for {key:?}")))?;
                    parsed.push((face, w));
                }
                let d = shell.dimension();
                let mut top = vec![None; shell.top_faces().len()];
                for (face, w) in &parsed {
                    if face.len() == d + 1 {
                        top[shell.face_index(face).unwrap()] = Some(w.clone());
                    }
                }
                let top: Vec<_> = top
                    .into_iter()
                    .enumerate()
                    .map(|(i, w)| {
                        w.ok_or_else(|| {
                            Error::Parse(format!("missing weight for top face {:?}", shell.face_key(&shell.top_faces()[i])))
                        })
                    })
                    .collect::<Result<_>>()?;
                let mut x = WeightedComplex::from_top_weights(shell, top);
                for (face, w) in parsed {
                    let i = x.complex().face_index(&face).unwrap();
                    x.set_weight(face.len() as isize - 1, i, w);
                }
                x
            }
        };
        if let Some(p) = &self.partite {
            let mut classes = Vec::with_capacity(x.num_vertices());
            for id in x.complex().vertex_ids() {
                classes.push(*p.get(id).ok_or_else(|| Error::Parse(format!("no class for vertex {id:?}")))?);
            }
            x = x.with_partite(classes)?;
        }
        Ok(x)
    }

    pub fn from_complex(x: &WeightedComplex) -> Self {
        let c = x.complex();
        let mut top_faces = c.top_face_ids();
        top_faces.sort();
        let weights = (!x.is_canonical()).then(|| {
            let mut map = BTreeMap::new();
            for k in -1..=x.dimension() as isize {
                for (f, w) in c.faces(k).iter().zip(x.weights(k)) {
                    map.insert(c.face_key(f), fmt_rational(w));
                }
            }
            map
        });
        let partite = c.partite().map(|cl| {
            c.vertex_ids().iter().cloned().zip(cl.iter().copied()).collect::<BTreeMap<_, _>>()
        });
        ComplexFile { dimension: x.dimension(), top_faces, weights, partite }
    }
}

fn parse_face_key(shell: &super::SimplicialComplex, key: &str) -> Result<Vec<u32>> {
    let mut face = Vec::new();
    if !key.is_empty() {
        for id in key.split(',') {
            face.push(shell.vertex_index(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))?);
        }
    }
    face.sort_unstable();
    if shell.face_index(&face).is_none() {
        return Err(Error::Parse(format!("{key:?} is not a face")));
    }
    Ok(face)
}

pub fn complex_from_json(text: &str) -> Result<WeightedComplex> {
    let file: ComplexFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_complex()
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn complex_to_json(x: &WeightedComplex) -> String {
    let mut s = serde_json::to_string_pretty(&ComplexFile::from_complex(x)).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn canonical_round_trip_is_byte_stable() {
        let text = r#"{"dimension": 1, "top_faces": [["b","c"],["a","b"]]}"#;
        let x = complex_from_json(text).unwrap();
        let once = complex_to_json(&x);
        assert!(!once.contains("weights"));
        assert_eq!(complex_to_json(&complex_from_json(&once).unwrap()), once);
    }

    #[test]
    fn explicit_weights_round_trip() {
        let text = r#"{"dimension": 1, "top_faces": [["a","b"],["b","c"]],
            "weights": {"a,b": "1/3", "b,c": "2/3"}, "partite": {"a": 0, "b": 1, "c": 0}}"#;
        let x = complex_from_json(text).unwrap();
        assert_eq!(x.vertex_weights(), &[rat(1, 6), rat(1, 2), rat(1, 3)]);
        let once = complex_to_json(&x);
        let again = complex_from_json(&once).unwrap();
        assert_eq!(again, x);
        assert_eq!(complex_to_json(&again), once);
    }

    #[test]
    fn bad_inputs() {
        assert!(complex_from_json(r#"{"dimension": 2, "top_faces": [["a","b"]]}"#).is_err());
        assert!(complex_from_json(r#"{"dimension": 1, "top_faces": [["a","b"]], "weights": {"a,c": "1"}}"#).is_err());
        assert!(complex_from_json(r#"{"dimension": 1, "top_faces": [["a","b"]], "partite": {"a": 0}}"#).is_err());
    }
}

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::sheaf::AugmentedSheaf;

/// Values on the faces of one dimension, as canonical ambient
/// representatives. Degree −1 has a single value on ∅.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cochain {
    pub degree: i8,
    pub values: Vec<Vec<u32>>,
}

impl Cochain {
    pub fn zero(s: &AugmentedSheaf, degree: i8) -> Self {
        let n = match degree {
            -1 => 1,
            0 => s.num_vertices(),
            _ => s.num_edges(),
        };
        Cochain { degree, values: vec![s.ambient().zero(); n] }
    }
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|&x| x == 0))
    }
    /// Face key → coordinates, for reports.
    pub fn to_map(&self, s: &AugmentedSheaf) -> BTreeMap<String, Vec<u32>> {
        let c = s.complex().complex();
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let key = match self.degree {
                    -1 => String::new(),
                    0 => c.face_key(&[i as u32]),
                    _ => c.face_key(&s.complex().edges()[i]),
                };
                (key, v.clone())
            })
            .collect()
    }
}

/// Checks shape and ambient membership, then canonicalizes each value in
/// its face group.
pub fn normalize(s: &AugmentedSheaf, f: &Cochain) -> Result<Cochain> {
    let expected = match f.degree {
        -1 => 1,
        0 => s.num_vertices(),
        1 => s.num_edges(),
        d => return Err(Error::TypeMismatch(format!("cochain degree {d} is not in {{-1, 0, 1}}"))),
    };
    if f.values.len() != expected {
        return Err(Error::TypeMismatch(format!("expected {expected} values, got {}", f.values.len())));
    }
    let g = s.ambient();
    let values = f
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            g.check(v)?;
            Ok(match f.degree {
                -1 => s.canonical_empty(v),
                0 => s.canonical_vertex(i, v),
                _ => s.canonical_edge(i, v),
            })
        })
        .collect::<Result<_>>()?;
    Ok(Cochain { degree: f.degree, values })
}

/// `d₋₁` or `d₀`, with `(d₀f)(e) = res_{e←e⁺} f(e⁺) − res_{e←e⁻} f(e⁻)` and
/// `e⁺` the endpoint with the larger index.
pub fn coboundary(s: &AugmentedSheaf, f: &Cochain) -> Result<Cochain> {
    let f = normalize(s, f)?;
    let g = s.ambient();
    match f.degree {
        -1 => Ok(Cochain { degree: 0, values: (0..s.num_vertices()).map(|v| s.res_vertex(v, &f.values[0])).collect() }),
        0 => Ok(Cochain {
            degree: 1,
            values: s
                .complex()
                .edges()
                .iter()
                .enumerate()
                .map(|(e, face)| {
                    let hi = s.res_edge_vertex(e, 1, &f.values[face[1] as usize]);
                    let lo = s.res_edge_vertex(e, 0, &f.values[face[0] as usize]);
                    s.canonical_edge(e, &g.sub(&hi, &lo))
                })
                .collect(),
        }),
        _ => Err(Error::TypeMismatch("d₁ maps into 2-cochains, which graphs do not have".into())),
    }
}

/// `‖f‖_w = w(supp f)`.
pub fn support_norm(s: &AugmentedSheaf, f: &Cochain) -> Result<Rational> {
    let f = normalize(s, f)?;
    let k = f.degree as isize;
    Ok(f.values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.iter().any(|&x| x != 0))
        .map(|(i, _)| s.complex().weight(k, i).clone())
        .sum())
}

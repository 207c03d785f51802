use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{budget, Error, Result};
use crate::ff::{prime_power, GaloisField};
use crate::linalg;

/// Largest subgroup the cyclic backend will enumerate.
pub const SUBGROUP_ENUMERATION_CAP: u128 = 1 << 22;

/// Which concrete group an ambient group is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "lowercase")]
pub enum Backend {
    /// `F_p^k`.
    Gf { p: u32, k: usize },
    /// `Z/m₁ × … × Z/m_j`.
    Cyclic { moduli: Vec<u32> },
}

/// A finite abelian group with elements stored as coordinate vectors.
#[derive(Clone, Debug)]
pub struct AbelianGroup {
    backend: Backend,
    moduli: Vec<u32>,
    field: Option<Arc<GaloisField>>,
    order: u64,
}

impl PartialEq for AbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.backend == other.backend
    }
}

impl AbelianGroup {
    pub fn new(backend: Backend) -> Result<Self> {
        let (moduli, field) = match &backend {
            Backend::Gf { p, k } => {
                if prime_power(*p).is_none_or(|(_, e)| e != 1) {
                    return Err(Error::PreconditionViolated(format!("{p} is not prime")));
                }
                (vec![*p; *k], Some(Arc::new(GaloisField::new(*p)?)))
            }
            Backend::Cyclic { moduli } => {
                if let Some(m) = moduli.iter().find(|&&m| m < 2) {
                    return Err(Error::PreconditionViolated(format!("cyclic modulus {m} < 2")));
                }
                (moduli.clone(), None)
            }
        };
        let order = moduli
            .iter()
            .try_fold(1u64, |acc, &m| acc.checked_mul(m as u64).filter(|&o| o < 1 << 62))
            .ok_or(Error::Overflow)?;
        Ok(AbelianGroup { backend, moduli, field, order })
    }
    pub fn gf(p: u32, k: usize) -> Result<Self> {
        Self::new(Backend::Gf { p, k })
    }
    pub fn cyclic(moduli: &[u32]) -> Result<Self> {
        Self::new(Backend::Cyclic { moduli: moduli.to_vec() })
    }
    pub fn backend(&self) -> &Backend {
        &self.backend
    }
    /// Number of coordinates.
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }
    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }
    pub fn order(&self) -> u64 {
        self.order
    }
    /// Prime field when the group is an `F_p`-vector space.
    pub fn field(&self) -> Option<&GaloisField> {
        self.field.as_deref()
    }
    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.rank()]
    }
    pub fn unit(&self, i: usize) -> Vec<u32> {
        let mut v = self.zero();
        v[i] = 1;
        v
    }
    pub fn is_element(&self, v: &[u32]) -> bool {
        v.len() == self.rank() && v.iter().zip(&self.moduli).all(|(&x, &m)| x < m)
    }
    pub fn check(&self, v: &[u32]) -> Result<()> {
        if self.is_element(v) {
            Ok(())
        } else {
            Err(Error::TypeMismatch(format!("{v:?} is not an element of {:?}", self.backend)))
        }
    }
    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).zip(&self.moduli).map(|((&x, &y), &m)| ((x as u64 + y as u64) % m as u64) as u32).collect()
    }
    pub fn neg(&self, a: &[u32]) -> Vec<u32> {
        a.iter().zip(&self.moduli).map(|(&x, &m)| (m - x) % m).collect()
    }
    pub fn sub(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        self.add(a, &self.neg(b))
    }
    pub fn scale(&self, a: &[u32], c: u64) -> Vec<u32> {
        a.iter().zip(&self.moduli).map(|(&x, &m)| ((x as u64 % m as u64) * (c % m as u64) % m as u64) as u32).collect()
    }
    /// Mixed-radix code, first coordinate least significant.
    pub fn encode(&self, v: &[u32]) -> u64 {
        v.iter().zip(&self.moduli).rev().fold(0, |acc, (&x, &m)| acc * m as u64 + x as u64)
    }
    pub fn decode(&self, mut code: u64) -> Vec<u32> {
        self.moduli
            .iter()
            .map(|&m| {
                let d = (code % m as u64) as u32;
                code /= m as u64;
                d
            })
            .collect()
    }
    pub fn elements(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.order).map(|c| self.decode(c))
    }
    /// `M v` with row `i` reduced mod `mᵢ`.
    pub fn apply(&self, m: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
        m.iter()
            .zip(&self.moduli)
            .map(|(row, &mi)| {
                (row.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64 % mi as u64).sum::<u64>() % mi as u64) as u32
            })
            .collect()
    }
    /// Whether the integer matrix defines an endomorphism of this group.
    pub fn is_endomorphism(&self, m: &[Vec<u32>]) -> bool {
        let r = self.rank();
        m.len() == r
            && m.iter().all(|row| row.len() == r)
            && (0..r).all(|i| (0..r).all(|j| (m[i][j] as u64 * self.moduli[j] as u64).is_multiple_of(self.moduli[i] as u64)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// Reduced echelon basis over the prime field.
    Linear { basis: Vec<Vec<u32>>, pivots: Vec<usize> },
    /// Sorted element codes.
    Set { codes: Vec<u64> },
}

/// Subgroup of an ambient [`AbelianGroup`], given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    generators: Vec<Vec<u32>>,
    repr: Repr,
}

impl Subgroup {
    pub fn generated(g: &AbelianGroup, gens: &[Vec<u32>]) -> Result<Self> {
        for v in gens {
            if !g.is_element(v) {
                return Err(Error::NotSubgroup(format!("generator {v:?} is not in {:?}", g.backend)));
            }
        }
        let generators: Vec<Vec<u32>> = gens.iter().filter(|v| v.iter().any(|&x| x != 0)).cloned().collect();
        let repr = match g.field() {
            Some(f) => {
                let mut basis = generators.clone();
                let pivots = linalg::rref(f, &mut basis);
                Repr::Linear { basis, pivots }
            }
            None => {
                let mut seen = BTreeSet::from([0u64]);
                let mut frontier = vec![g.zero()];
                while let Some(v) = frontier.pop() {
                    for s in &generators {
                        let w = g.add(&v, s);
                        if seen.insert(g.encode(&w)) {
                            budget("subgroup closure", SUBGROUP_ENUMERATION_CAP, seen.len() as u128)?;
                            frontier.push(w);
                        }
                    }
                }
                Repr::Set { codes: seen.into_iter().collect() }
            }
        };
        Ok(Subgroup { generators, repr })
    }
    pub fn zero(g: &AbelianGroup) -> Self {
        Self::generated(g, &[]).expect("the zero subgroup is always valid")
    }
    pub fn full(g: &AbelianGroup) -> Self {
        let units: Vec<Vec<u32>> = (0..g.rank()).map(|i| g.unit(i)).collect();
        match g.field() {
            Some(_) => Self::generated(g, &units).expect("unit vectors are elements"),
            None => Subgroup { generators: units, repr: Repr::Set { codes: (0..g.order()).collect() } },
        }
    }
    /// Nonzero generators as given.
    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }
    /// Reduced basis over the prime field, for the linear backend.
    pub fn basis(&self) -> Option<&[Vec<u32>]> {
        match &self.repr {
            Repr::Linear { basis, .. } => Some(basis),
            Repr::Set { .. } => None,
        }
    }
    pub fn pivots(&self) -> Option<&[usize]> {
        match &self.repr {
            Repr::Linear { pivots, .. } => Some(pivots),
            Repr::Set { .. } => None,
        }
    }
    pub fn order(&self, g: &AbelianGroup) -> u64 {
        match &self.repr {
            Repr::Linear { basis, .. } => (g.moduli.first().copied().unwrap_or(1) as u64).pow(basis.len() as u32),
            Repr::Set { codes } => codes.len() as u64,
        }
    }
    pub fn is_trivial(&self) -> bool {
        match &self.repr {
            Repr::Linear { basis, .. } => basis.is_empty(),
            Repr::Set { codes } => codes.len() == 1,
        }
    }
    pub fn contains(&self, g: &AbelianGroup, v: &[u32]) -> bool {
        match &self.repr {
            Repr::Linear { basis, pivots } => {
                linalg::reduce(g.field().expect("linear backend"), basis, pivots, v).iter().all(|&x| x == 0)
            }
            Repr::Set { codes } => codes.binary_search(&g.encode(v)).is_ok(),
        }
    }
    /// Canonical representative of `v + H`: zero at the pivots for the
    /// linear backend, smallest code otherwise.
    pub fn canonical(&self, g: &AbelianGroup, v: &[u32]) -> Vec<u32> {
        match &self.repr {
            Repr::Linear { basis, pivots } => linalg::reduce(g.field().expect("linear backend"), basis, pivots, v),
            Repr::Set { codes } => {
                if codes.len() == 1 {
                    return v.to_vec();
                }
                codes
                    .iter()
                    .map(|&c| g.encode(&g.add(v, &g.decode(c))))
                    .min()
                    .map(|c| g.decode(c))
                    .expect("a subgroup contains zero")
            }
        }
    }
    pub fn elements(&self, g: &AbelianGroup) -> Vec<Vec<u32>> {
        match &self.repr {
            Repr::Linear { basis, .. } => {
                let p = g.moduli.first().copied().unwrap_or(1) as u64;
                (0..p.pow(basis.len() as u32))
                    .map(|mut c| {
                        let mut v = g.zero();
                        for b in basis {
                            v = g.add(&v, &g.scale(b, c % p));
                            c /= p;
                        }
                        v
                    })
                    .collect()
            }
            Repr::Set { codes } => codes.iter().map(|&c| g.decode(c)).collect(),
        }
    }
    /// `H + K`.
    pub fn join(&self, g: &AbelianGroup, other: &Subgroup) -> Result<Subgroup> {
        let gens: Vec<Vec<u32>> = self.generators.iter().chain(&other.generators).cloned().collect();
        Subgroup::generated(g, &gens)
    }
    /// Whether `H ∩ K = 0`.
    pub fn meets_trivially(&self, g: &AbelianGroup, other: &Subgroup) -> Result<bool> {
        Ok(self.join(g, other)?.order(g) as u128 == self.order(g) as u128 * other.order(g) as u128)
    }

    /// Free coordinates of the linear quotient `R/H`: the non-pivot columns.
    pub fn free_columns(&self, g: &AbelianGroup) -> Option<Vec<usize>> {
        self.pivots().map(|piv| (0..g.rank()).filter(|c| !piv.contains(c)).collect())
    }

    /// Canonical representatives of `R/H`, sorted by code.
    pub fn transversal(&self, g: &AbelianGroup) -> Result<Vec<Vec<u32>>> {
        match &self.repr {
            Repr::Linear { .. } => {
                let free = self.free_columns(g).expect("linear backend");
                let p = g.moduli.first().copied().unwrap_or(1) as u64;
                let count = (p as u128).pow(free.len() as u32);
                budget("quotient transversal", SUBGROUP_ENUMERATION_CAP, count)?;
                Ok((0..count as u64)
                    .map(|mut c| {
                        let mut v = g.zero();
                        for &col in &free {
                            v[col] = (c % p) as u32;
                            c /= p;
                        }
                        v
                    })
                    .collect())
            }
            Repr::Set { codes } => {
                budget("quotient transversal", SUBGROUP_ENUMERATION_CAP, g.order() as u128)?;
                let mut seen = vec![false; g.order() as usize];
                let mut reps = Vec::new();
                for c in 0..g.order() {
                    if seen[c as usize] {
                        continue;
                    }
                    let v = g.decode(c);
                    for &h in codes {
                        seen[g.encode(&g.add(&v, &g.decode(h))) as usize] = true;
                    }
                    reps.push(v);
                }
                Ok(reps)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_codes() {
        let g = AbelianGroup::cyclic(&[2, 3, 4]).unwrap();
        assert_eq!(g.order(), 24);
        let all: BTreeSet<u64> = g.elements().map(|v| g.encode(&v)).collect();
        assert_eq!(all.len(), 24);
        for v in g.elements() {
            assert_eq!(g.decode(g.encode(&v)), v);
            assert_eq!(g.add(&v, &g.neg(&v)), g.zero());
        }
        assert!(AbelianGroup::gf(6, 1).is_err());
        assert_eq!(AbelianGroup::gf(3, 0).unwrap().order(), 1);
    }

    #[test]
    fn cyclic_subgroups() {
        let g = AbelianGroup::cyclic(&[4]).unwrap();
        let h = Subgroup::generated(&g, &[vec![2]]).unwrap();
        assert_eq!(h.order(&g), 2);
        assert_eq!(h.canonical(&g, &[3]), vec![1]);
        assert_eq!(h.transversal(&g).unwrap(), vec![vec![0], vec![1]]);
        assert!(Subgroup::generated(&g, &[vec![4]]).is_err());
    }

    #[test]
    fn linear_subgroups() {
        let g = AbelianGroup::gf(2, 3).unwrap();
        let h = Subgroup::generated(&g, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        assert_eq!(h.order(&g), 4);
        assert_eq!(h.elements(&g).len(), 4);
        assert!(h.elements(&g).iter().all(|v| h.contains(&g, v)));
        assert_eq!(h.transversal(&g).unwrap().len(), 2);
        let e1 = Subgroup::generated(&g, &[g.unit(0)]).unwrap();
        assert!(!h.meets_trivially(&g, &Subgroup::full(&g)).unwrap());
        assert!(e1.meets_trivially(&g, &Subgroup::generated(&g, &[g.unit(1)]).unwrap()).unwrap());
    }

    #[test]
    fn endomorphisms() {
        let g = AbelianGroup::cyclic(&[2, 4]).unwrap();
        assert!(g.is_endomorphism(&[vec![1, 0], vec![0, 1]]));
        // Z/2 → Z/4 must land in 2Z/4
        assert!(!g.is_endomorphism(&[vec![1, 0], vec![1, 1]]));
        assert!(g.is_endomorphism(&[vec![1, 0], vec![2, 1]]));
    }
}

//! Finite fields GF(p^e) with table-driven arithmetic.

use crate::error::{Error, Result};

/// Largest order handled by the table representation.
pub const MAX_TABLE_ORDER: u32 = 256;

/// A finite field of order `q = p^e`.
///
/// Element `a` encodes the polynomial whose coefficient of `x^i` is the
/// i-th base-p digit of `a`. Multiplication is modulo `modulus`, the
/// smallest monic irreducible polynomial of degree `e` in that encoding.
#[derive(Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl std::fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

/// Returns `(p, e)` with `q = p^e`, or `None`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn poly_mod(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    // m monic
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - (lead * c) % p) % p;
            }
        }
        a.pop();
    }
    a
}

fn poly_is_zero(a: &[u32]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn digits(mut a: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = a % p;
        a /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        // every monic polynomial of degree d
        for low in 0..p.pow(d as u32) {
            let mut f = digits(low, p, d);
            f.push(1);
            if poly_is_zero(&poly_mod(m.to_vec(), &f, p)) {
                return false;
            }
        }
    }
    true
}

impl GaloisField {
    /// Builds GF(q) for a prime power `q ≤ 256`.
    pub fn new(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_TABLE_ORDER {
            return Err(Error::PreconditionViolated(format!(
                "field order {q} exceeds {MAX_TABLE_ORDER}"
            )));
        }
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            (0..p.pow(e))
                .map(|low| {
                    let mut m = digits(low, p, e as usize);
                    m.push(1);
                    m
                })
                .find(|m| is_irreducible(m, p))
                .expect("an irreducible polynomial exists in every degree")
        };
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        let mut neg = vec![0; n];
        for a in 0..q {
            let da = digits(a, p, e as usize);
            neg[a as usize] = undigits(&da.iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p);
            for b in 0..q {
                let db = digits(b, p, e as usize);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * n + b as usize] = undigits(&s, p);
                let mut prod = vec![0; 2 * e as usize - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = if e == 1 { prod } else { poly_mod(prod, &modulus, p) };
                r.resize(e as usize, 0);
                mul[a as usize * n + b as usize] = undigits(&r, p);
            }
        }
        let mut inv = vec![0; n];
        for a in 1..q {
            inv[a as usize] = (1..q)
                .find(|&b| mul[a as usize * n + b as usize] == 1)
                .expect("nonzero elements are invertible");
        }
        Ok(GaloisField { p, e, q, modulus, add, mul, neg, inv })
    }

    pub fn order(&self) -> u32 {
        self.q
    }
    pub fn characteristic(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.e
    }
    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg[b as usize])
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }
    /// Multiplicative inverse; `inv(0)` is 0.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }
    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        let (mut base, mut acc) = (a, 1);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Smallest element generating the multiplicative group.
    pub fn generator(&self) -> Option<u32> {
        (1..self.q).find(|&g| {
            let mut x = g;
            let mut ord = 1;
            while x != 1 {
                x = self.mul(x, g);
                ord += 1;
            }
            ord == self.q - 1
        })
    }

    /// Matrix of `x ↦ a·x` over F_p in the power basis, as rows.
    pub fn mul_matrix(&self, a: u32) -> Vec<Vec<u32>> {
        let e = self.e as usize;
        let cols: Vec<Vec<u32>> = (0..e)
            .map(|j| digits(self.mul(a, self.p.pow(j as u32)), self.p, e))
            .collect();
        (0..e).map(|i| (0..e).map(|j| cols[j][i]).collect()).collect()
    }

    /// Base-p digit vector of an element.
    pub fn to_vector(&self, a: u32) -> Vec<u32> {
        digits(a, self.p, self.e as usize)
    }
}

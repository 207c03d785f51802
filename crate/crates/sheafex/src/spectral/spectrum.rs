use serde::Serialize;

use super::jacobi::{jacobi_eigen, MAX_SWEEPS};
use super::operators::adjacency_matrix;
use crate::complex::WeightedComplex;
use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Spectrum of 𝒜 with the intervals on the constant-free and class-free
/// subspaces.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReportOf<T> {
    /// Full spectrum, descending.
    pub eigenvalues: Vec<T>,
    /// Smallest λ ≥ 0 with the spectrum on C⁰∘ inside [−λ, λ].
    pub lambda: T,
    /// `(μ, λmax)` on C⁰∘; `None` for a single vertex.
    pub interval_circ: Option<(T, T)>,
    /// `(μ, λmax)` on C⁰⋄ when a partite labeling is present.
    pub interval_diamond: Option<(T, T)>,
    /// `‖S v − θ v‖` per eigenpair of the symmetrized matrix.
    pub residuals: Vec<T>,
    /// Unit eigenvectors of `S = D^{1/2} M D^{−1/2}`, aligned with `eigenvalues`.
    #[serde(skip)]
    pub vectors: Vec<Vec<T>>,
}

/// `S = D^{1/2} M D^{−1/2}`, symmetric since `w(x)M[x][y] = w(e)/2`.
pub fn symmetrized<T: Real>(x: &WeightedComplex) -> Result<Vec<Vec<T>>> {
    let m = adjacency_matrix(x)?;
    let sq: Vec<T> = x.vertex_weights().iter().map(|w| T::from_rational(w).sqrt()).collect();
    Ok(m.iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, v)| sq[i] * T::from_rational(v) / sq[j]).collect())
        .collect())
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Orthonormal basis of the complement of `span(deflate)`.
fn complement_basis<T: Real>(n: usize, deflate: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut basis: Vec<Vec<T>> = Vec::new();
    let cutoff = T::from(1e-8).unwrap();
    let push = |v: Vec<T>, basis: &mut Vec<Vec<T>>| -> bool {
        let mut v = v;
        // two passes of Gram-Schmidt
        for _ in 0..2 {
            for b in basis.iter() {
                let c = dot(&v, b);
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = *x - c * y;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > cutoff {
            basis.push(v.into_iter().map(|x| x / norm).collect());
            true
        } else {
            false
        }
    };
    let k = deflate.iter().filter(|d| push((*d).clone(), &mut basis)).count();
    for j in 0..n {
        let e: Vec<T> = (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect();
        push(e, &mut basis);
    }
    basis.split_off(k)
}

fn compressed_interval<T: Real>(s: &[Vec<T>], deflate: &[Vec<T>], tol: T) -> Result<Option<(T, T)>> {
    let n = s.len();
    let b = complement_basis(n, deflate);
    if b.is_empty() {
        return Ok(None);
    }
    let sb: Vec<Vec<T>> = b
        .iter()
        .map(|v| (0..n).map(|i| dot(&s[i], v)).collect())
        .collect();
    let c: Vec<Vec<T>> = b.iter().map(|u| sb.iter().map(|w| dot(u, w)).collect()).collect();
    let e = jacobi_eigen(&c, tol, MAX_SWEEPS)?;
    Ok(Some((*e.values.last().unwrap(), e.values[0])))
}

fn tolerance_for<T: Real>(s: &[Vec<T>]) -> T {
    let frob = s.iter().flatten().fold(T::zero(), |acc, &v| acc + v * v).sqrt();
    T::jacobi_tolerance().max(T::epsilon() * T::from(16).unwrap() * frob.max(T::one()))
}

/// Spectrum report in the scalar type `T`.
pub fn spectrum_of<T: Real>(x: &WeightedComplex) -> Result<SpectrumReportOf<T>> {
    let s = symmetrized::<T>(x)?;
    let n = s.len();
    let tol = tolerance_for(&s);
    let full = jacobi_eigen(&s, tol, MAX_SWEEPS)?;
    let residuals: Vec<T> = full
        .values
        .iter()
        .zip(&full.vectors)
        .map(|(&lam, v)| {
            let r: Vec<T> = (0..n).map(|i| dot(&s[i], v) - lam * v[i]).collect();
            dot(&r, &r).sqrt()
        })
        .collect();
    let res_cap = T::from(1e-9).unwrap().max(tol * T::from(100).unwrap());
    if let Some(bad) = residuals.iter().find(|&&r| r > res_cap) {
        return Err(Error::ConvergenceFailure { sweeps: full.sweeps, off_norm: Scalar::to_f64(bad) });
    }
    let sqrt_w: Vec<T> = x.vertex_weights().iter().map(|w| T::from_rational(w).sqrt()).collect();
    let interval_circ = compressed_interval(&s, std::slice::from_ref(&sqrt_w), tol)?;
    let interval_diamond = match (x.partite(), x.num_classes()) {
        (Some(classes), Some(r1)) => {
            let defl: Vec<Vec<T>> = (0..r1 as u32)
                .map(|c| {
                    classes.iter().zip(&sqrt_w).map(|(&k, &w)| if k == c { w } else { T::zero() }).collect()
                })
                .collect();
            compressed_interval(&s, &defl, tol)?
        }
        _ => None,
    };
    let lambda = interval_circ.map_or(T::zero(), |(mu, la)| mu.abs().max(la.abs()));
    Ok(SpectrumReportOf {
        eigenvalues: full.values,
        lambda,
        interval_circ,
        interval_diamond,
        residuals,
        vectors: full.vectors,
    })
}

/// Double-precision spectrum report.
pub fn spectrum(x: &WeightedComplex) -> Result<SpectrumReportOf<f64>> {
    spectrum_of::<f64>(x)
}

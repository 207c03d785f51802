use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymmetricEigen<T> {
    /// Eigenvalues in descending order.
    pub values: Vec<T>,
    /// `vectors[k]` is the unit eigenvector of `values[k]`.
    pub vectors: Vec<Vec<T>>,
    pub sweeps: usize,
}

pub const MAX_SWEEPS: usize = 100;

fn off_norm<T: Real>(a: &[Vec<T>]) -> T {
    let mut s = T::zero();
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if i != j {
                s = s + v * v;
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops
/// below `tol`, at most `max_sweeps` sweeps.
pub fn jacobi_eigen<T: Real>(a: &[Vec<T>], tol: T, max_sweeps: usize) -> Result<SymmetricEigen<T>> {
    let n = a.len();
    let mut a: Vec<Vec<T>> = a.to_vec();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let two = T::one() + T::one();
    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off < tol {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::ConvergenceFailure { sweeps, off_norm: Scalar::to_f64(&off) });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order.iter().map(|&i| v.iter().map(|row| row[i]).collect()).collect();
    Ok(SymmetricEigen { values, vectors, sweeps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let e = jacobi_eigen(&[vec![2.0f64, 1.0], vec![1.0, 2.0]], 1e-12, MAX_SWEEPS).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-12 && (e.values[1] - 1.0).abs() < 1e-12);
        let v = &e.vectors[0];
        assert!((v[0].abs() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn f32_path() {
        let e = jacobi_eigen(&[vec![0.0f32, 1.0], vec![1.0, 0.0]], f32::jacobi_tolerance(), MAX_SWEEPS).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn residuals_small_on_random_symmetric() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 9;
        let mut a = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in i..n {
                let x: f64 = rng.gen_range(-1.0..1.0);
                a[i][j] = x;
                a[j][i] = x;
            }
        }
        let e = jacobi_eigen(&a, 1e-12, MAX_SWEEPS).unwrap();
        for (lam, v) in e.values.iter().zip(&e.vectors) {
            for i in 0..n {
                let av: f64 = (0..n).map(|j| a[i][j] * v[j]).sum();
                assert!((av - lam * v[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn sweep_cap_reports_failure() {
        let a = vec![vec![1.0, 0.5, 0.2], vec![0.5, 2.0, 0.1], vec![0.2, 0.1, 3.0]];
        assert!(matches!(jacobi_eigen(&a, 1e-12, 0), Err(Error::ConvergenceFailure { .. })));
    }
}

//! Dense linear algebra over a finite field.

use crate::ff::GaloisField;

/// Row-reduces in place to reduced echelon form, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref(f: &GaloisField, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let s = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, s);
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let m = rows[k][c];
                for j in 0..ncols {
                    let t = f.mul(m, rows[r][j]);
                    rows[k][j] = f.sub(rows[k][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(f: &GaloisField, rows: &[Vec<u32>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Reduces `v` against a basis in reduced echelon form; the result has
/// zeros in every pivot column and is the canonical coset representative.
pub fn reduce(f: &GaloisField, basis: &[Vec<u32>], pivots: &[usize], v: &[u32]) -> Vec<u32> {
    let mut out = v.to_vec();
    for (row, &c) in basis.iter().zip(pivots) {
        let m = out[c];
        if m != 0 {
            for (o, &b) in out.iter_mut().zip(row) {
                *o = f.sub(*o, f.mul(m, b));
            }
        }
    }
    out
}

/// Basis of `{x : A x = 0}` for `A` given by rows with `ncols` columns.
pub fn kernel(f: &GaloisField, rows: &[Vec<u32>], ncols: usize) -> Vec<Vec<u32>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![0; ncols];
            x[fc] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                x[pc] = f.neg(row[fc]);
            }
            x
        })
        .collect()
}

/// Some `x` with `Σ_j x_j·cols[j] = b`, or `None`.
pub fn solve_combination(f: &GaloisField, cols: &[Vec<u32>], b: &[u32]) -> Option<Vec<u32>> {
    let n = cols.len();
    let dim = b.len();
    // augmented system, one row per coordinate
    let mut rows: Vec<Vec<u32>> = (0..dim)
        .map(|i| {
            let mut row: Vec<u32> = cols.iter().map(|c| c[i]).collect();
            row.push(b[i]);
            row
        })
        .collect();
    let pivots = rref(f, &mut rows);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![0; n];
    for (row, &pc) in rows.iter().zip(&pivots) {
        x[pc] = row[n];
    }
    Some(x)
}

/// Matrix-vector product for a row-major matrix.
pub fn mat_vec(f: &GaloisField, m: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_annihilated() {
        let f = GaloisField::new(3).unwrap();
        let a = vec![vec![1, 2, 0, 1], vec![0, 1, 1, 2], vec![1, 0, 1, 0]];
        let k = kernel(&f, &a, 4);
        assert_eq!(k.len() + rank(&f, &a), 4);
        for x in &k {
            assert!(mat_vec(&f, &a, x).iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn solve_and_reduce() {
        let f = GaloisField::new(2).unwrap();
        let cols = vec![vec![1, 1, 0], vec![0, 1, 1]];
        let x = solve_combination(&f, &cols, &[1, 0, 1]).unwrap();
        assert_eq!(x, vec![1, 1]);
        assert!(solve_combination(&f, &cols, &[1, 0, 0]).is_none());
        let mut basis = cols.clone();
        let piv = rref(&f, &mut basis);
        assert_eq!(reduce(&f, &basis, &piv, &[1, 0, 1]), vec![0, 0, 0]);
    }
}

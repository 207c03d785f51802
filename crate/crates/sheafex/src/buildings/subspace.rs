use crate::ff::GaloisField;
use crate::linalg;

/// A subspace of `F_q^N` in reduced row-echelon form; equal subspaces have
/// identical echelon forms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Row-reduces the span of `gens`.
    pub fn span(f: &GaloisField, ambient: usize, gens: &[Vec<u32>]) -> Self {
        let mut rows = gens.to_vec();
        let pivots = linalg::rref(f, &mut rows);
        rows.truncate(pivots.len());
        Subspace { ambient, rows, pivots }
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn contains_vector(&self, f: &GaloisField, v: &[u32]) -> bool {
        linalg::reduce(f, &self.rows, &self.pivots, v).iter().all(|&c| c == 0)
    }
    /// `other ⊆ self`.
    pub fn contains(&self, f: &GaloisField, other: &Subspace) -> bool {
        other.dim() <= self.dim() && other.rows.iter().all(|r| self.contains_vector(f, r))
    }
}

/// Gaussian binomial `[n choose k]_q`.
pub fn gaussian_binomial(q: u128, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k as u32 {
        num *= q.pow(n as u32 - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All `k`-dimensional subspaces of `F_q^n`, by pivot pattern and then by
/// the free entries in row-major order.
pub fn subspaces(f: &GaloisField, n: usize, k: usize) -> Vec<Subspace> {
    let q = f.order();
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        // free slots: (row, column) right of the row's pivot and off every pivot column
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| ((pivots[i] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        let mut digits = vec![0u32; free.len()];
        loop {
            let mut rows = vec![vec![0u32; n]; k];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = 1;
            }
            for (&(i, c), &d) in free.iter().zip(&digits) {
                rows[i][c] = d;
            }
            out.push(Subspace { ambient: n, rows, pivots: pivots.clone() });
            let Some(pos) = digits.iter().rposition(|&d| d + 1 < q) else { break };
            digits[pos] += 1;
            digits[pos + 1..].fill(0);
        }
    }
    out
}

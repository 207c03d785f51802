use num_traits::Zero;

use crate::complex::WeightedComplex;
use crate::error::{Error, Result};
use crate::scalar::{factorial, Rational, Scalar};

/// Matrix of 𝒜 in the vertex basis: `M[x][y] = Σ_{e={x,y}} w(e)/(2w(x))`.
pub fn adjacency_matrix(x: &WeightedComplex) -> Result<Vec<Vec<Rational>>> {
    x.require_graph()?;
    let n = x.num_vertices();
    let vw = x.vertex_weights();
    let two = Rational::from_integer(2.into());
    let mut m = vec![vec![Rational::zero(); n]; n];
    for (e, w) in x.edges().iter().zip(x.edge_weights()) {
        let (a, b) = (e[0] as usize, e[1] as usize);
        m[a][b] += w / (&two * &vw[a]);
        m[b][a] += w / (&two * &vw[b]);
    }
    Ok(m)
}

fn check_len(x: &WeightedComplex, len: usize) -> Result<()> {
    if len != x.num_vertices() {
        return Err(Error::TypeMismatch(format!(
            "vertex function of length {len} on {} vertices",
            x.num_vertices()
        )));
    }
    Ok(())
}

/// `(𝒜f)(x) = Σ_{e∋x} w(e)/(2w(x)) · f(e−x)`.
pub fn adjacency_apply<S: Scalar>(x: &WeightedComplex, f: &[S]) -> Result<Vec<S>> {
    x.require_graph()?;
    check_len(x, f.len())?;
    let vw = x.vertex_weights();
    let two = Rational::from_integer(2.into());
    let mut out = vec![S::zero(); f.len()];
    for (e, w) in x.edges().iter().zip(x.edge_weights()) {
        let (a, b) = (e[0] as usize, e[1] as usize);
        let ca = S::from_rational(&(w / (&two * &vw[a])));
        let cb = S::from_rational(&(w / (&two * &vw[b])));
        out[a] = out[a].clone() + ca * f[b].clone();
        out[b] = out[b].clone() + cb * f[a].clone();
    }
    Ok(out)
}

/// `Δf = f − 𝒜f`.
pub fn laplacian_apply<S: Scalar>(x: &WeightedComplex, f: &[S]) -> Result<Vec<S>> {
    let a = adjacency_apply(x, f)?;
    Ok(f.iter().cloned().zip(a).map(|(u, v)| u - v).collect())
}

/// `⟨f,g⟩ = 1/(i+1)! Σ_{x∈X(i)} w(x) f(x) g(x)`.
pub fn inner_product<S: Scalar>(x: &WeightedComplex, i: isize, f: &[S], g: &[S]) -> Result<S> {
    if i < -1 || i > x.dimension() as isize {
        return Err(Error::BadDimension { expected: format!("-1..={}", x.dimension()), got: i.unsigned_abs() });
    }
    let ws = x.weights(i);
    if f.len() != ws.len() || g.len() != ws.len() {
        return Err(Error::TypeMismatch(format!("cochains on X({i}) need {} entries", ws.len())));
    }
    let scale = Rational::new(1.into(), factorial((i + 1) as usize));
    let mut acc = S::zero();
    for ((w, a), b) in ws.iter().zip(f).zip(g) {
        acc = acc + S::from_rational(&(w * &scale)) * a.clone() * b.clone();
    }
    Ok(acc)
}

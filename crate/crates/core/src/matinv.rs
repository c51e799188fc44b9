//! Entrywise inversion `J`, matrix inversion `I` and `K = I ∘ J` on the
//! projectivized space of `q x q` matrices, coordinates `x_{i,j}` flattened row-major.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{spectral_radius_of_charpoly, IntMatrix, IntPoly, SpectralResult};
use crate::oracle::{Embedding, FastEval, MapHandle, RationalMapSpec, Stage};
use crate::poly::{Domain, MonoSumPoly};

/// Largest `q` for which `K` is built symbolically.
pub const SYMBOLIC_Q_MAX: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    J,
    I,
    K,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatMapSpec {
    pub q: usize,
    pub family: Family,
    pub spec: RationalMapSpec,
}

fn check_q(q: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::Invalid(format!("matrix size q = {q} must be at least 2")));
    }
    Ok(())
}

/// Component `(i,j)` is the product of every entry except `x_{i,j}`.
pub fn build_j(q: usize) -> Result<MatMapSpec> {
    check_q(q)?;
    let n = q * q;
    let comps = (0..n)
        .map(|k| {
            let mut e = vec![1u32; n];
            e[k] = 0;
            MonoSumPoly::monomial(n, Domain::Integer, e, BigInt::from(1))
        })
        .collect();
    Ok(MatMapSpec {
        q,
        family: Family::J,
        spec: RationalMapSpec::new(comps, format!("J_{q}"))?,
    })
}

/// Permutations of `0..n` with their signs.
fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        // insert n-1 at position k: moves it past (n-1-k) entries
        for k in 0..n {
            let mut v = p.clone();
            v.insert(k, n - 1);
            let sign = if (n - 1 - k).is_multiple_of(2) { s } else { -s };
            out.push((v, sign));
        }
    }
    out
}

/// Component `(i,j)` is the `(j,i)` cofactor: the classical adjoint.
pub fn build_i(q: usize) -> Result<MatMapSpec> {
    check_q(q)?;
    let n = q * q;
    let perms = permutations(q - 1);
    let mut comps = Vec::with_capacity(n);
    for i in 0..q {
        for j in 0..q {
            // delete row j and column i
            let rows: Vec<usize> = (0..q).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..q).filter(|&c| c != i).collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            let mut poly = MonoSumPoly::zero(n, Domain::Integer);
            for (p, s) in &perms {
                let mut e = vec![0u32; n];
                for (a, &b) in p.iter().enumerate() {
                    e[rows[a] * q + cols[b]] += 1;
                }
                let t = MonoSumPoly::monomial(n, Domain::Integer, e, BigInt::from(sign * s));
                poly = poly.add(&t)?;
            }
            comps.push(poly);
        }
    }
    Ok(MatMapSpec {
        q,
        family: Family::I,
        spec: RationalMapSpec::new(comps, format!("I_{q}"))?,
    })
}

/// `K = I ∘ J` expanded symbolically, `q <= SYMBOLIC_Q_MAX`.
pub fn build_k(q: usize) -> Result<MatMapSpec> {
    check_q(q)?;
    if q > SYMBOLIC_Q_MAX {
        return Err(Error::Invalid(format!(
            "symbolic K is capped at q = {SYMBOLIC_Q_MAX}; use the oracle handle for q = {q}"
        )));
    }
    build_k_unchecked(q)
}

/// `K = I ∘ J` expanded symbolically for any `q`; the degree is checked against
/// `q^2 - q + 1`.
pub fn build_k_unchecked(q: usize) -> Result<MatMapSpec> {
    let j = build_j(q)?;
    let i = build_i(q)?;
    let spec = i.spec.compose(&j.spec)?.with_label(format!("K_{q}"));
    let expected = (q * q - q + 1) as u64;
    if spec.degree() != expected {
        return Err(Error::Reduction(format!(
            "deg K = {} after reduction, expected {expected}",
            spec.degree()
        )));
    }
    Ok(MatMapSpec {
        q,
        family: Family::K,
        spec,
    })
}

/// `K` as the composed handle `[J, I]` with pointwise shortcuts, for any `q`.
pub fn k_handle(q: usize) -> Result<MapHandle> {
    let j = build_j(q)?;
    let i = build_i(q)?;
    MapHandle::composed(
        format!("K_{q}"),
        vec![
            Stage {
                spec: j.spec,
                fast: Some(FastEval::EntrywiseInverse),
            },
            Stage {
                spec: i.spec,
                fast: Some(FastEval::MatrixInverse { q }),
            },
        ],
    )
}

/// Pullback of `J` on `Pic(X)` in the basis `(H, E_{1,1}, ..., E_{q,q})`, images as
/// columns.
pub fn jx_pullback(q: usize) -> Result<IntMatrix> {
    check_q(q)?;
    let n = q * q;
    let dim = n + 1;
    let mut m = IntMatrix::zero(dim);
    m.set(0, 0, BigInt::from(n as i64 - 1));
    for r in 1..dim {
        m.set(r, 0, BigInt::from(-(n as i64 - 2)));
    }
    for c in 1..dim {
        m.set(0, c, BigInt::from(1));
        for r in 1..dim {
            if r != c {
                m.set(r, c, BigInt::from(-1));
            }
        }
    }
    Ok(m)
}

/// `t^2 - (q^2 - 4q + 2) t + 1`.
pub fn delta_k_polynomial(q: usize) -> IntPoly {
    let q = q as i64;
    IntPoly::from_i64(&[1, -(q * q - 4 * q + 2), 1])
}

/// Largest root modulus of `t^2 - (q^2 - 4q + 2) t + 1`, certified.
pub fn delta_k(q: usize, tol: f64) -> Result<SpectralResult> {
    check_q(q)?;
    spectral_radius_of_charpoly(&delta_k_polynomial(q), tol)
}

/// Symmetric matrices: one parameter per entry on or above the diagonal.
#[allow(clippy::needless_range_loop)]
pub fn symmetric_subspace(q: usize) -> Embedding {
    let mut idx = vec![vec![0usize; q]; q];
    let mut k = 0;
    for i in 0..q {
        for j in i..q {
            idx[i][j] = k;
            idx[j][i] = k;
            k += 1;
        }
    }
    Embedding {
        label: format!("symmetric q={q}"),
        nparams: k,
        rows: (0..q * q).map(|c| vec![(idx[c / q][c % q], 1)]).collect(),
    }
}

/// Cyclic matrices: `x_{i,j} = a_{(j - i) mod q}`.
pub fn cyclic_subspace(q: usize) -> Embedding {
    Embedding {
        label: format!("cyclic q={q}"),
        nparams: q,
        rows: (0..q * q)
            .map(|c| vec![((c % q + q - c / q) % q, 1)])
            .collect(),
    }
}

/// Symmetric cyclic matrices: `a_k = a_{q-k}`.
pub fn symmetric_cyclic_subspace(q: usize) -> Embedding {
    let rep = |k: usize| k.min((q - k) % q);
    Embedding {
        label: format!("symmetric cyclic q={q}"),
        nparams: q / 2 + 1,
        rows: (0..q * q)
            .map(|c| vec![(rep((c % q + q - c / q) % q), 1)])
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().map(|x| x.1).sum::<i64>(), 0);
        let id = p.iter().find(|x| x.0 == vec![0, 1, 2]).unwrap();
        assert_eq!(id.1, 1);
        let swap = p.iter().find(|x| x.0 == vec![1, 0, 2]).unwrap();
        assert_eq!(swap.1, -1);
        let cyc = p.iter().find(|x| x.0 == vec![1, 2, 0]).unwrap();
        assert_eq!(cyc.1, 1);
    }

    #[test]
    fn two_by_two_adjugate() {
        let i = build_i(2).unwrap();
        let shown: Vec<String> = i.spec.components().iter().map(|c| c.to_string()).collect();
        assert_eq!(shown, vec!["x3", "-x1", "-x2", "x0"]);
    }

    #[test]
    fn subspaces() {
        let c = cyclic_subspace(3);
        let rows: Vec<usize> = c.rows.iter().map(|r| r[0].0).collect();
        assert_eq!(rows, vec![0, 1, 2, 2, 0, 1, 1, 2, 0]);
        let s = symmetric_subspace(3);
        assert_eq!(s.nparams, 6);
        let sc = symmetric_cyclic_subspace(4);
        let rows: Vec<usize> = sc.rows.iter().take(4).map(|r| r[0].0).collect();
        assert_eq!(rows, vec![0, 1, 2, 1]);
    }
}

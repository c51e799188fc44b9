use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::intpoly::IntPoly;
use crate::error::{Error, Result};

/// Dense square matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(dim: usize, entries: Vec<BigInt>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::NotSquare {
                rows: dim,
                len: entries.len(),
            });
        }
        Ok(IntMatrix { dim, entries })
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    len: rows.iter().map(Vec::len).sum(),
                });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix::new(dim, entries)
    }

    /// Convenience constructor for fixtures; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        IntMatrix::from_rows(&rows).expect("square fixture")
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = IntMatrix::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn zero(dim: usize) -> Self {
        IntMatrix {
            dim,
            entries: vec![BigInt::zero(); dim * dim],
        }
    }

    /// Companion matrix of a monic polynomial; its characteristic polynomial is `p`.
    pub fn companion(p: &IntPoly) -> Result<Self> {
        let n = p
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::Invalid("companion of a constant polynomial".into()))?;
        if !p.leading().is_one() {
            return Err(Error::Invalid("companion needs a monic polynomial".into()));
        }
        let mut m = IntMatrix::zero(n);
        for i in 1..n {
            m.entries[i * n + (i - 1)] = BigInt::one();
        }
        for i in 0..n {
            m.entries[i * n + (n - 1)] = -p.coeff(i);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.dim)
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut t = IntMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                t.entries[j * n + i] = self.entries[i * n + j].clone();
            }
        }
        t
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| !e.is_negative())
    }

    /// Entrywise absolute value `|M|`.
    pub fn abs_entries(&self) -> Self {
        IntMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(Signed::abs).collect(),
        }
    }

    /// Max-absolute-entry norm, used for growth-rate estimates.
    pub fn max_abs_entry(&self) -> BigInt {
        self.entries
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn add(&self, other: &IntMatrix) -> Result<Self> {
        self.check_dim(other)?;
        Ok(IntMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn mul_checked(&self, other: &IntMatrix) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        out[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(IntMatrix { dim: n, entries: out })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Exact `n`-th power by repeated squaring; `m^0` is the identity.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut result = IntMatrix::identity(self.dim);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        bareiss_det(self.dim, self.entries.clone())
    }

    /// Determinant of the submatrix picked out by sorted row and column index lists.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> BigInt {
        let k = rows.len();
        debug_assert_eq!(k, cols.len());
        let mut sub = Vec::with_capacity(k * k);
        for &r in rows {
            for &c in cols {
                sub.push(self.get(r, c).clone());
            }
        }
        bareiss_det(k, sub)
    }

    /// Exact monic characteristic polynomial `det(xI - M)` by Faddeev–LeVerrier.
    ///
    /// Every division by `k` in the recurrence is exact over the integers.
    pub fn charpoly(&self) -> IntPoly {
        let n = self.dim;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        // running matrix M_k, starts at the identity (M_1 = I)
        let mut mk = IntMatrix::identity(n);
        for k in 1..=n {
            let am = self * &mk;
            let tr = am.trace();
            let c = -(tr / BigInt::from(k as u64));
            coeffs[n - k] = c.clone();
            if k < n {
                mk = am;
                for i in 0..n {
                    mk.entries[i * n + i] += &c;
                }
            }
        }
        IntPoly::new(coeffs)
    }

    /// `p`-th exterior power: the matrix of `p x p` minors, rows and columns indexed
    /// by the sorted `p`-subsets of `0..dim` in lexicographic order.
    pub fn exterior_power(&self, p: usize) -> Result<Self> {
        if p == 0 || p > self.dim {
            return Err(Error::PowerOutOfRange { p, dim: self.dim });
        }
        let subsets = lex_subsets(self.dim, p);
        let n = subsets.len();
        let mut entries = Vec::with_capacity(n * n);
        for rows in &subsets {
            for cols in &subsets {
                entries.push(self.minor(rows, cols));
            }
        }
        IntMatrix::new(n, entries)
    }

    fn check_dim(&self, other: &IntMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.rows()
            .map(|r| r.iter().map(|e| e.to_string()).collect())
            .collect()
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.mul_checked(rhs).expect("matrix dimensions agree")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_string_rows()).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_string_rows() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<crate::json::BigIntRepr>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.0).collect())
            .collect();
        IntMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// All sorted `p`-subsets of `0..n` in lexicographic order.
pub fn lex_subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if p > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - p + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..p {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn bareiss_det(n: usize, mut a: Vec<BigInt>) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, r * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &pivot * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                let (q, r) = v.div_rem(&prev);
                debug_assert!(r.is_zero());
                a[i * n + j] = q;
            }
        }
        prev = pivot;
    }
    sign * &a[n * n - 1]
}

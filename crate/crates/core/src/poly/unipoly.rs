//! Dense univariate polynomials over `F_p` as standalone values.

use serde::{Serialize, Serializer};

use super::dense::{self, Poly};
use super::field::PrimeField;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPolyF {
    field: PrimeField,
    coeffs: Poly,
}

impl UniPolyF {
    /// Reduces and trims the given residues.
    pub fn new(field: PrimeField, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Poly = coeffs.into_iter().map(|c| field.reduce(c)).collect();
        dense::trim(&mut coeffs);
        UniPolyF { field, coeffs }
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        UniPolyF {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn prime(&self) -> u64 {
        self.field.modulus()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Poly {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        dense::deg(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.prime() != other.prime() {
            return Err(Error::PrimeMismatch(self.prime(), other.prime()));
        }
        Ok(())
    }

    fn wrap(&self, coeffs: Poly) -> Self {
        UniPolyF {
            field: self.field,
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(dense::add(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(dense::sub(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(dense::mul(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn divrem(&self, other: &Self) -> Result<(Self, Self)> {
        self.same_field(other)?;
        if other.is_zero() {
            return Err(Error::Invalid("division by the zero polynomial".into()));
        }
        let (q, r) = dense::divrem(&self.field, &self.coeffs, &other.coeffs);
        Ok((self.wrap(q), self.wrap(r)))
    }

    pub fn eval(&self, x: u64) -> u64 {
        dense::eval(&self.field, &self.coeffs, self.field.reduce(x))
    }

    pub fn monic(&self) -> Self {
        self.wrap(dense::make_monic(&self.field, &self.coeffs))
    }
}

impl Serialize for UniPolyF {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("UniPolyF", 2)?;
        st.serialize_field("prime", &self.prime().to_string())?;
        let c: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        st.serialize_field("coeffs", &c)?;
        st.end()
    }
}

/// Monic greatest common divisor.
pub fn uni_gcd(a: &UniPolyF, b: &UniPolyF) -> Result<UniPolyF> {
    a.same_field(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::AllZero);
    }
    Ok(a.wrap(dense::gcd(&a.field, &a.coeffs, &b.coeffs)))
}

/// GCD of a whole tuple of raw polynomials (zero entries ignored), monic.
pub fn tuple_gcd(f: &PrimeField, tuple: &[Poly]) -> Option<Poly> {
    let mut nz = tuple.iter().filter(|p| !p.is_empty());
    let mut g = nz.next()?.clone();
    for p in nz {
        if g.len() == 1 {
            break;
        }
        // reduce first so the gcd starts from the smaller pair
        let r = dense::rem(f, p, &g);
        g = dense::gcd(f, &g, &r);
    }
    Some(dense::make_monic(f, &g))
}

/// Divides a tuple of raw polynomials by their common GCD; returns the quotients and
/// the GCD degree.
pub fn reduce_tuple_raw(f: &PrimeField, tuple: &[Poly]) -> Result<(Vec<Poly>, usize)> {
    let g = tuple_gcd(f, tuple).ok_or(Error::AllZero)?;
    let d = g.len() - 1;
    if d == 0 {
        return Ok((tuple.to_vec(), 0));
    }
    let out = tuple
        .iter()
        .map(|p| {
            if p.is_empty() {
                Vec::new()
            } else {
                let (q, r) = dense::divrem(f, p, &g);
                debug_assert!(r.is_empty());
                q
            }
        })
        .collect();
    Ok((out, d))
}

/// Divides out the GCD of the whole tuple.
pub fn tuple_reduce_univariate(tuple: &[UniPolyF]) -> Result<(Vec<UniPolyF>, usize)> {
    let Some(first) = tuple.first() else {
        return Err(Error::AllZero);
    };
    for p in tuple {
        first.same_field(p)?;
    }
    let raw: Vec<Poly> = tuple.iter().map(|p| p.coeffs.clone()).collect();
    let (red, d) = reduce_tuple_raw(&first.field, &raw)?;
    Ok((red.into_iter().map(|c| first.wrap(c)).collect(), d))
}

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dyadic::Dyadic;

/// Univariate polynomial over the integers, lowest degree first.
///
/// Trailing zeros are trimmed on construction, so the zero polynomial has no
/// coefficients and every other value has a nonzero leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::from_i64(&[1])
    }

    /// `x^n`
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        IntPoly { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Sign of the value at a dyadic rational, computed exactly.
    pub fn sign_at(&self, x: &Dyadic) -> i32 {
        let Some(d) = self.degree() else { return 0 };
        // 2^(e d) p(n / 2^e) = sum c_i n^i 2^(e (d - i)), by Horner
        let scale = BigInt::one() << x.exp();
        let mut acc = self.coeffs[d].clone();
        let mut pow = BigInt::one();
        for i in (0..d).rev() {
            pow *= &scale;
            acc = acc * x.num() + &self.coeffs[i] * &pow;
        }
        sign(&acc)
    }

    /// Sign of the value at a rational, computed exactly.
    pub fn sign_at_rational(&self, x: &num_rational::BigRational) -> i32 {
        let Some(d) = self.degree() else { return 0 };
        // den^d p(num / den) with den > 0
        let (n, m) = (x.numer(), x.denom());
        let mut acc = self.coeffs[d].clone();
        let mut pow = BigInt::one();
        for i in (0..d).rev() {
            pow *= m;
            acc = acc * n + &self.coeffs[i] * &pow;
        }
        sign(&acc)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: c }
    }

    /// Substitute `x -> -x`.
    pub fn reflect(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Split off the largest power of `x` dividing `self`: returns `(k, self / x^k)`.
    pub fn strip_x_power(&self) -> (usize, IntPoly) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (
            k,
            IntPoly {
                coeffs: self.coeffs[k..].to_vec(),
            },
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Pseudo-remainder scaled by a positive power of `|lc(b)|`, so its sign
    /// agrees with the remainder over the rationals.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree().expect("division by zero polynomial");
        let lb = b.leading();
        let m = lb.abs();
        let s = sign(&lb);
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading();
            let t = b.shift(dr - db).scale(&(lr * s));
            r = r.scale(&m).sub(&t);
        }
        r
    }

    /// Exact quotient over the integers, or `None` if `b` does not divide `self`
    /// with an integral quotient.
    pub fn exact_div(&self, b: &IntPoly) -> Option<IntPoly> {
        let db = b.degree()?;
        let lb = b.leading();
        let mut r = self.clone();
        let Some(dr) = r.degree() else {
            return Some(IntPoly::zero());
        };
        if dr < db {
            return None;
        }
        let mut q = vec![BigInt::zero(); dr - db + 1];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let (c, rem) = r.leading().div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            r = r.sub(&b.shift(dr - db).scale(&c));
            q[dr - db] = c;
        }
        Some(IntPoly::new(q))
    }

    /// Primitive greatest common divisor (positive leading coefficient).
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a
    }

    /// Product of the distinct irreducible factors (primitive, positive leading coefficient).
    pub fn squarefree_part(&self) -> IntPoly {
        let p = self.primitive();
        if p.degree().unwrap_or(0) == 0 {
            return p;
        }
        let g = p.gcd(&p.derivative());
        p.exact_div(&g).expect("gcd divides").primitive()
    }

    /// Square-free decomposition: `(factor, multiplicity)` pairs with pairwise
    /// coprime, square-free, primitive factors of positive degree.
    ///
    /// Uses the chain `s_1 = sqf(f)`, `s_{i+1} = sqf(f / (s_1 ... s_i))`; the factor of
    /// multiplicity exactly `i` is `s_i / s_{i+1}`.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, usize)> {
        let mut chain = Vec::new();
        let mut r = self.primitive();
        while r.degree().unwrap_or(0) > 0 {
            let s = r.squarefree_part();
            r = r.exact_div(&s).expect("square-free part divides").primitive();
            chain.push(s);
        }
        let mut out = Vec::new();
        for i in 0..chain.len() {
            let f = match chain.get(i + 1) {
                Some(next) => chain[i].exact_div(next).expect("chain is nested").primitive(),
                None => chain[i].clone(),
            };
            if f.degree().unwrap_or(0) > 0 {
                out.push((f, i + 1));
            }
        }
        out
    }

    pub fn to_string_coeffs(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

fn sign(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show = !a.is_one() || i == 0;
            if show {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        crate::json::de_bigint_vec(d).map(IntPoly::new)
    }
}

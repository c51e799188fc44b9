//! Sparse multivariate polynomials stored as sums of monomials, over `Z` or `F_p`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::dense::{self, Poly};
use super::field::PrimeField;
use crate::error::{Error, Result};
use crate::json::BigIntRepr;

/// Coefficient domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Integer,
    Prime(u64),
}

impl Domain {
    fn normalize(&self, c: BigInt) -> BigInt {
        match self {
            Domain::Integer => c,
            Domain::Prime(p) => c.mod_floor(&BigInt::from(*p)),
        }
    }

    /// Common domain of two operands; integers coerce into a prime field.
    pub fn join(self, other: Domain) -> Result<Domain> {
        match (self, other) {
            (a, b) if a == b => Ok(a),
            (Domain::Integer, d) | (d, Domain::Integer) => Ok(d),
            (a, b) => Err(Error::MixedDomains(format!("{a:?} and {b:?}"))),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Integer => write!(f, "Z"),
            Domain::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One serialized term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exponents: Vec<u32>,
    #[serde(
        serialize_with = "crate::json::ser_bigint",
        deserialize_with = "crate::json::de_bigint"
    )]
    pub coeff: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoSumPoly {
    nvars: usize,
    domain: Domain,
    terms: BTreeMap<Exponent, BigInt>,
}

impl MonoSumPoly {
    pub fn zero(nvars: usize, domain: Domain) -> Self {
        MonoSumPoly {
            nvars,
            domain,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, domain: Domain, c: BigInt) -> Self {
        Self::monomial(nvars, domain, vec![0; nvars], c)
    }

    /// The coordinate `x_i`.
    pub fn var(nvars: usize, domain: Domain, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, domain, e, BigInt::one())
    }

    pub fn monomial(nvars: usize, domain: Domain, exps: Vec<u32>, c: BigInt) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut p = Self::zero(nvars, domain);
        p.add_term(Exponent(exps), c);
        p
    }

    pub fn from_terms(nvars: usize, domain: Domain, terms: &[Term]) -> Result<Self> {
        let mut p = Self::zero(nvars, domain);
        for t in terms {
            if t.exponents.len() != nvars {
                return Err(Error::VariableCount {
                    expected: nvars,
                    found: t.exponents.len(),
                });
            }
            p.add_term(Exponent(t.exponents.clone()), t.coeff.clone());
        }
        Ok(p)
    }

    /// Terms in descending graded-lex order.
    pub fn to_terms(&self) -> Vec<Term> {
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| Term {
                exponents: e.0.clone(),
                coeff: c.clone(),
            })
            .collect()
    }

    fn add_term(&mut self, e: Exponent, c: BigInt) {
        let c = self.domain.normalize(c);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *slot = self.domain.normalize(&*slot + c);
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    /// Largest total degree, `None` for zero.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(Exponent::total)
    }

    /// The common total degree of every term, if there is one.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut it = self.terms.keys().map(Exponent::total);
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn leading(&self) -> Option<(&Exponent, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Same polynomial viewed over `F_p` (coefficients reduced).
    pub fn to_domain(&self, domain: Domain) -> Result<Self> {
        let target = self.domain.join(domain)?;
        if target != domain {
            return Err(Error::MixedDomains(format!(
                "cannot move {} coefficients into {}",
                self.domain, domain
            )));
        }
        let mut out = Self::zero(self.nvars, domain);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Self) -> Result<Domain> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCount {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        self.domain.join(other.domain)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let d = self.check_compatible(other)?;
        let mut out = self.to_domain(d)?;
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.nvars, self.domain);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.nvars, self.domain);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.check_compatible(other)?;
        let mut out = Self::zero(self.nvars, d);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.nvars, self.domain, BigInt::one());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Multiplies by the monomial `x^e`.
    pub fn shift(&self, e: &[u32]) -> Self {
        let e = Exponent(e.to_vec());
        MonoSumPoly {
            nvars: self.nvars,
            domain: self.domain,
            terms: self.terms.iter().map(|(k, c)| (k.add(&e), c.clone())).collect(),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    /// Over `Z`, coefficient quotients must also be exact.
    pub fn div_exact(&self, d: &Self) -> Result<Option<Self>> {
        let dom = self.check_compatible(d)?;
        let Some((le, lc)) = d.leading() else {
            return Err(Error::Invalid("division by the zero polynomial".into()));
        };
        let lc_inv = match dom {
            Domain::Prime(p) => Some(mod_inverse(lc, p)),
            Domain::Integer => None,
        };
        let mut rem = self.to_domain(dom)?;
        let d = d.to_domain(dom)?;
        let mut quot = Self::zero(self.nvars, dom);
        while let Some((re, rc)) = rem.leading() {
            if !le.divides(re) {
                return Ok(None);
            }
            let c = match &lc_inv {
                Some(inv) => rc * inv,
                None => {
                    let (q, r) = rc.div_rem(lc);
                    if !r.is_zero() {
                        return Ok(None);
                    }
                    q
                }
            };
            let e = re.sub(le);
            let t = Self::monomial(self.nvars, dom, e.0.clone(), c.clone());
            rem = rem.sub(&t.mul(&d)?)?;
            quot.add_term(e, c);
        }
        Ok(Some(quot))
    }

    /// Componentwise minimum of the exponent vectors (the largest monomial dividing
    /// every term); `None` for zero.
    pub fn monomial_content(&self) -> Option<Vec<u32>> {
        let mut it = self.terms.keys();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |acc, e| {
            acc.iter().zip(&e.0).map(|(a, b)| *a.min(b)).collect()
        }))
    }

    /// Divides by `x^e`; every term must be divisible.
    pub fn unshift(&self, e: &[u32]) -> Self {
        let e = Exponent(e.to_vec());
        MonoSumPoly {
            nvars: self.nvars,
            domain: self.domain,
            terms: self.terms.iter().map(|(k, c)| (k.sub(&e), c.clone())).collect(),
        }
    }

    /// Coefficients reduced into `F_p` with exponents, ready for repeated evaluation.
    pub fn compile(&self, f: &PrimeField) -> Result<CompiledPoly> {
        if let Domain::Prime(p) = self.domain {
            if p != f.modulus() {
                return Err(Error::PrimeMismatch(p, f.modulus()));
            }
        }
        let m = BigInt::from(f.modulus());
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let r = c.mod_floor(&m).to_u64().expect("reduced residue");
                (r, e.0.clone())
            })
            .filter(|(c, _)| *c != 0)
            .collect();
        Ok(CompiledPoly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Value at an integer point.
    pub fn eval_int(&self, point: &[BigInt]) -> BigInt {
        let mut s = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&e.0) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            s += t;
        }
        self.domain.normalize(s)
    }
}

fn mod_inverse(c: &BigInt, p: u64) -> BigInt {
    let pb = BigInt::from(p);
    let r = c.mod_floor(&pb);
    // p is prime: c^(p-2)
    r.modpow(&(&pb - 2u32), &pb)
}

impl fmt::Display for MonoSumPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{i}")
                    } else {
                        format!("x{i}^{k}")
                    }
                })
                .collect();
            let neg = c.is_negative();
            let mag = c.abs();
            if k > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            match (mag.is_one(), mono.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{}", mono.join("*"))?,
                (false, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl Serialize for MonoSumPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_terms().serialize(s)
    }
}

/// Term list as read from JSON before the variable count and domain are known.
#[derive(Debug, Clone, Deserialize)]
#[serde(transparent)]
pub struct RawPoly(pub Vec<RawTerm>);

#[derive(Debug, Clone, Deserialize)]
pub struct RawTerm {
    pub exponents: Vec<u32>,
    pub coeff: BigIntRepr,
}

impl RawPoly {
    pub fn into_poly(self, nvars: usize, domain: Domain) -> Result<MonoSumPoly> {
        let terms: Vec<Term> = self
            .0
            .into_iter()
            .map(|t| Term {
                exponents: t.exponents,
                coeff: t.coeff.0,
            })
            .collect();
        MonoSumPoly::from_terms(nvars, domain, &terms)
    }

    /// Exponent-vector length of the first term.
    pub fn nvars_hint(&self) -> Option<usize> {
        self.0.first().map(|t| t.exponents.len())
    }
}

/// A polynomial with coefficients reduced modulo a fixed prime.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    nvars: usize,
    terms: Vec<(u64, Vec<u32>)>,
}

impl CompiledPoly {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.nvars];
        for (_, e) in &self.terms {
            for (a, &b) in m.iter_mut().zip(e) {
                *a = (*a).max(b);
            }
        }
        m
    }

    pub fn eval(&self, f: &PrimeField, x: &[u64]) -> u64 {
        let mut s = 0;
        for (c, e) in &self.terms {
            let mut t = *c;
            for (&xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = f.mul(t, f.pow(xi, k as u64));
                }
            }
            s = f.add(s, t);
        }
        s
    }

    /// Value on univariate arguments, using a shared cache of their powers.
    pub fn eval_uni(&self, f: &PrimeField, powers: &mut PowerCache<'_>) -> Poly {
        let mut s: Poly = Vec::new();
        for (c, e) in &self.terms {
            let mut t: Poly = vec![*c];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = dense::mul(f, &t, powers.get(f, i, k));
                }
            }
            s = dense::add(f, &s, &t);
        }
        s
    }
}

/// Memoized powers of a tuple of univariate polynomials.
pub struct PowerCache<'a> {
    base: &'a [Poly],
    cache: Vec<BTreeMap<u32, Poly>>,
}

impl<'a> PowerCache<'a> {
    pub fn new(base: &'a [Poly]) -> Self {
        PowerCache {
            base,
            cache: vec![BTreeMap::new(); base.len()],
        }
    }

    pub fn get(&mut self, f: &PrimeField, i: usize, k: u32) -> &Poly {
        if !self.cache[i].contains_key(&k) {
            let v = if k == 1 {
                self.base[i].clone()
            } else {
                let half = self.get(f, i, k / 2).clone();
                let sq = dense::square(f, &half);
                if k % 2 == 1 {
                    dense::mul(f, &sq, &self.base[i])
                } else {
                    sq
                }
            };
            self.cache[i].insert(k, v);
        }
        &self.cache[i][&k]
    }
}

/// Substitutes `args` for the variables of each component.
pub fn substitute(components: &[MonoSumPoly], args: &[MonoSumPoly]) -> Result<Vec<MonoSumPoly>> {
    let Some(first) = args.first() else {
        return Err(Error::Invalid("no arguments to substitute".into()));
    };
    let (nv, dom) = (first.nvars, first.domain);
    for a in args {
        if a.nvars != nv {
            return Err(Error::VariableCount {
                expected: nv,
                found: a.nvars,
            });
        }
        if a.domain != dom {
            return Err(Error::MixedDomains(format!("{} and {}", dom, a.domain)));
        }
    }
    let mut out = Vec::with_capacity(components.len());
    for c in components {
        if c.nvars != args.len() {
            return Err(Error::VariableCount {
                expected: c.nvars,
                found: args.len(),
            });
        }
        if c.domain.join(dom)? != dom {
            return Err(Error::MixedDomains(format!("{} and {}", c.domain, dom)));
        }
    }
    let mut cache: Vec<BTreeMap<u32, MonoSumPoly>> = vec![BTreeMap::new(); args.len()];
    for c in components {
        let mut acc = MonoSumPoly::zero(nv, dom);
        for (e, coef) in &c.terms {
            let mut t = MonoSumPoly::constant(nv, dom, coef.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = cache[i].entry(k).or_insert_with(|| args[i].pow(k));
                t = t.mul(p)?;
            }
            for (te, tc) in t.terms {
                acc.add_term(te, tc);
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Divides out the largest monomial dividing every term of every component.
pub fn mono_gcd_reduce(tuple: &[MonoSumPoly]) -> Result<(Vec<MonoSumPoly>, Vec<u32>)> {
    let nv = tuple.first().map(|p| p.nvars).unwrap_or(0);
    let mut common: Option<Vec<u32>> = None;
    for p in tuple {
        if let Some(m) = p.monomial_content() {
            common = Some(match common {
                None => m,
                Some(c) => c.iter().zip(&m).map(|(a, b)| *a.min(b)).collect(),
            });
        }
    }
    let common = common.ok_or(Error::AllZero)?;
    if common.iter().all(|&e| e == 0) {
        return Ok((tuple.to_vec(), vec![0; nv]));
    }
    Ok((tuple.iter().map(|p| p.unshift(&common)).collect(), common))
}

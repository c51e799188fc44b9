//! Exact real-root isolation over the integers (Sturm sequences on dyadic points)
//! plus the integer-root and cyclotomic tests built on it.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dyadic::Dyadic;
use super::intpoly::IntPoly;

/// Sturm chain of a square-free polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    polys: Vec<IntPoly>,
}

impl SturmChain {
    /// Builds the chain for the square-free part of `p`.
    pub fn new(p: &IntPoly) -> Self {
        let p0 = p.squarefree_part();
        let mut polys = vec![p0.clone()];
        if p0.degree().unwrap_or(0) == 0 {
            return SturmChain { polys };
        }
        polys.push(p0.derivative().primitive());
        loop {
            let n = polys.len();
            let r = polys[n - 2].pseudo_rem(&polys[n - 1]);
            if r.is_zero() {
                break;
            }
            // primitive() may flip the sign; keep the sign of -rem
            let neg = r.neg();
            let c = neg.content();
            polys.push(IntPoly::new(neg.coeffs().iter().map(|x| x / &c).collect()));
        }
        SturmChain { polys }
    }

    pub fn base(&self) -> &IntPoly {
        &self.polys[0]
    }

    fn variations<I: Iterator<Item = i32>>(signs: I) -> usize {
        let mut last = 0;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Dyadic) -> usize {
        Self::variations(self.polys.iter().map(|p| p.sign_at(x)))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.polys.iter().map(|p| {
            let s = if p.leading().is_positive() { 1 } else { -1 };
            let d = p.degree().unwrap_or(0);
            if positive || d % 2 == 0 {
                s
            } else {
                -s
            }
        }))
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count(&self, a: &Dyadic, b: &Dyadic) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false)
            .saturating_sub(self.variations_at_infinity(true))
    }
}

/// An isolating interval `(lo, hi]` holding exactly one real root; `lo == hi`
/// marks an exactly located root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl RootInterval {
    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.midpoint(&self.hi)
    }
}

/// Power of two strictly exceeding the modulus of every complex root.
pub fn root_bound(p: &IntPoly) -> Dyadic {
    let lead = p.leading().abs();
    let max = p.coeffs().iter().map(Signed::abs).max().unwrap_or_default();
    // Cauchy: |z| < 1 + max|c_i| / |c_n| <= 1 + max|c_i|
    let q = max / &lead + 2u32;
    Dyadic::from_int(BigInt::one() << q.bits())
}

/// Isolates all distinct real roots of `p`, in increasing order.
pub fn isolate_real_roots(p: &IntPoly) -> Vec<RootInterval> {
    let chain = SturmChain::new(p);
    isolate_with(&chain)
}

pub fn isolate_with(chain: &SturmChain) -> Vec<RootInterval> {
    let base = chain.base();
    if base.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let b = root_bound(base);
    let mut out = Vec::new();
    let mut stack = vec![(b.neg(), b.clone(), chain.count(&b.neg(), &b))];
    while let Some((lo, hi, c)) = stack.pop() {
        match c {
            0 => {}
            1 => out.push(RootInterval { lo, hi }),
            _ => {
                let m = lo.midpoint(&hi);
                let left = chain.count(&lo, &m);
                stack.push((m.clone(), hi, c - left));
                stack.push((lo, m, left));
            }
        }
    }
    out.sort_by(|a, b| a.hi.cmp(&b.hi));
    out
}

/// Shrinks an isolating interval until its width is at most `2^-bits`.
pub fn refine(chain: &SturmChain, iv: &RootInterval, bits: u32) -> RootInterval {
    let base = chain.base();
    let target = Dyadic::new(BigInt::one(), bits);
    let mut iv = iv.clone();
    if base.sign_at(&iv.hi) == 0 {
        return RootInterval {
            lo: iv.hi.clone(),
            hi: iv.hi,
        };
    }
    while iv.width() > target {
        let m = iv.midpoint();
        let s = base.sign_at(&m);
        if s == 0 {
            return RootInterval { lo: m.clone(), hi: m };
        }
        if chain.count(&iv.lo, &m) == 1 {
            iv.hi = m;
        } else {
            iv.lo = m;
        }
    }
    iv
}

/// Converts a tolerance to the number of fractional bits needed to reach it.
pub fn tol_bits(tol: f64) -> u32 {
    let t = tol.clamp(1e-300, 1.0);
    (-t.log2()).ceil() as u32 + 1
}

/// Largest real root of `p` bracketed to width `tol`, or `None` if `p` has none.
pub fn largest_real_root(p: &IntPoly, tol: f64) -> Option<RootInterval> {
    let chain = SturmChain::new(p);
    let roots = isolate_with(&chain);
    roots.last().map(|iv| refine(&chain, iv, tol_bits(tol)))
}

/// All integer roots of `p`, with multiplicity, in increasing order.
///
/// Located exactly: each real root is isolated, narrowed below width one half,
/// and the at most one integer inside is tested by exact evaluation.
pub fn integer_roots(p: &IntPoly) -> Vec<BigInt> {
    if p.is_zero() {
        return Vec::new();
    }
    let (zeros, rest) = p.strip_x_power();
    let mut out: Vec<BigInt> = std::iter::repeat_n(BigInt::zero(), zeros).collect();
    for (factor, mult) in rest.squarefree_decomposition() {
        let chain = SturmChain::new(&factor);
        // factor is squarefree: each integer root counts once
        let mut found = BTreeSet::new();
        for iv in isolate_with(&chain) {
            let iv = refine(&chain, &iv, 2);
            let mut n = iv.lo.ceil();
            let top = iv.hi.floor();
            while n <= top {
                if factor.eval(&n).is_zero() {
                    found.insert(n.clone());
                }
                n += 1;
            }
        }
        for n in found {
            out.extend(std::iter::repeat_n(n, mult));
        }
    }
    out.sort();
    out
}

/// `true` when every root of `p` lies on the unit circle, i.e. `p` is, up to sign,
/// a product of cyclotomic polynomials. Requires `p(0) != 0`.
pub fn is_cyclotomic_product(p: &IntPoly) -> bool {
    let Some(d) = p.degree() else { return false };
    if d == 0 || p.coeff(0).is_zero() {
        return false;
    }
    let unit = |x: &BigInt| x.abs().is_one();
    if !unit(&p.leading()) || !unit(&p.coeff(0)) {
        return false;
    }
    let mut rest = p.clone();
    let mut cache: BTreeMap<usize, IntPoly> = BTreeMap::new();
    // phi(k) <= d forces k <= 2 d^2
    let bound = 2 * d * d + 2;
    for k in 1..=bound {
        let phi = cyclotomic(k, &mut cache);
        if phi.degree().unwrap_or(0) > rest.degree().unwrap_or(0) {
            continue;
        }
        while let Some(q) = rest.exact_div(&phi) {
            rest = q;
            if rest.degree() == Some(0) {
                return true;
            }
        }
    }
    rest.degree() == Some(0)
}

/// `k`-th cyclotomic polynomial.
pub fn cyclotomic(k: usize, cache: &mut BTreeMap<usize, IntPoly>) -> IntPoly {
    if let Some(p) = cache.get(&k) {
        return p.clone();
    }
    let mut p = IntPoly::monomial(k).sub(&IntPoly::one());
    for d in 1..k {
        if k.is_multiple_of(d) {
            let f = cyclotomic(d, cache);
            p = p.exact_div(&f).expect("cyclotomic factor divides x^k - 1");
        }
    }
    cache.insert(k, p.clone());
    p
}

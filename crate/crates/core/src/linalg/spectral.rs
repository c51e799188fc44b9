use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::complexroots::aberth;
use super::dyadic::Dyadic;
use super::intpoly::IntPoly;
use super::matrix::IntMatrix;
use super::realroots::{self, isolate_with, refine, tol_bits, SturmChain};
use crate::error::{Error, Result};

/// Collatz–Wielandt iterations tried on nonnegative matrices before falling back.
const CW_BUDGET: usize = 400;

/// How a spectral-radius bracket was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Characteristic polynomial is `t^k` times a product of cyclotomic factors.
    Exact,
    /// Min/max ratios `(M x)_i / x_i` for `x = M^j 1`.
    CollatzWielandt,
    /// Sturm isolation of the largest-modulus real eigenvalue.
    RealRoot,
    /// Sturm isolation of `rho^2` as the largest real eigenvalue of the second compound.
    ConjugatePair,
}

/// Spectral radius with an exact rational bracket `lo <= radius <= hi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    pub radius: f64,
    #[serde(serialize_with = "ser_rational")]
    pub lo: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub hi: BigRational,
    pub is_one: bool,
    pub certificate: Certificate,
}

fn ser_rational<S: serde::Serializer>(
    v: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl SpectralResult {
    fn exact(v: i64) -> Self {
        SpectralResult {
            radius: v as f64,
            lo: BigRational::from_integer(v.into()),
            hi: BigRational::from_integer(v.into()),
            is_one: v == 1,
            certificate: Certificate::Exact,
        }
    }

    fn from_dyadic(lo: Dyadic, hi: Dyadic, certificate: Certificate) -> Self {
        SpectralResult {
            radius: lo.midpoint(&hi).to_f64(),
            lo: lo.to_rational(),
            hi: hi.to_rational(),
            is_one: false,
            certificate,
        }
    }

    pub fn width(&self) -> f64 {
        (&self.hi - &self.lo).to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }
}

/// Spectral radius of an integer matrix, bracketed to width at most `tol`.
pub fn spectral_radius(m: &IntMatrix, tol: f64) -> Result<SpectralResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    let cp = m.charpoly();
    if let Some(r) = trivial_radius(&cp) {
        return Ok(r);
    }
    if m.is_nonnegative() {
        if let Some(r) = collatz_wielandt(m, tol) {
            return Ok(r);
        }
        // Perron root: the largest real eigenvalue
        let iv = realroots::largest_real_root(&cp, tol).expect("Perron root is real");
        return Ok(SpectralResult::from_dyadic(iv.lo, iv.hi, Certificate::RealRoot));
    }
    radius_from_charpoly(&cp, tol)
}

/// Spectral radius of any matrix with characteristic polynomial `cp`.
pub fn spectral_radius_of_charpoly(cp: &IntPoly, tol: f64) -> Result<SpectralResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    if let Some(r) = trivial_radius(cp) {
        return Ok(r);
    }
    radius_from_charpoly(cp, tol)
}

fn trivial_radius(cp: &IntPoly) -> Option<SpectralResult> {
    let (_, rest) = cp.strip_x_power();
    if rest.degree().unwrap_or(0) == 0 {
        return Some(SpectralResult::exact(0));
    }
    if realroots::is_cyclotomic_product(&rest) {
        return Some(SpectralResult::exact(1));
    }
    None
}

fn collatz_wielandt(m: &IntMatrix, tol: f64) -> Option<SpectralResult> {
    let n = m.dim();
    let tol_q = BigRational::from_float(tol)?;
    let mut x: Vec<BigInt> = vec![BigInt::one(); n];
    for _ in 0..CW_BUDGET {
        let y = m.mul_vec(&x);
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        let mut positive = true;
        for (yi, xi) in y.iter().zip(&x) {
            if xi.is_zero() {
                positive = false;
                continue;
            }
            let r = BigRational::new(yi.clone(), xi.clone());
            if lo.as_ref().is_none_or(|l| &r < l) {
                lo = Some(r.clone());
            }
            if hi.as_ref().is_none_or(|h| &r > h) {
                hi = Some(r);
            }
        }
        if let (true, Some(lo), Some(hi)) = (positive, lo, hi) {
            if &hi - &lo <= tol_q {
                let radius = ((&lo + &hi) / BigRational::from_integer(2.into()))
                    .to_f64()
                    .unwrap_or(f64::NAN);
                return Some(SpectralResult {
                    radius,
                    lo,
                    hi,
                    is_one: false,
                    certificate: Certificate::CollatzWielandt,
                });
            }
        }
        // keep entries small: divide out the common content
        let g = y.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        if g.is_zero() {
            return None;
        }
        x = y.into_iter().map(|v| v / &g).collect();
    }
    None
}

fn radius_from_charpoly(cp: &IntPoly, tol: f64) -> Result<SpectralResult> {
    let bits = tol_bits(tol) + 2;
    let (_, rest) = cp.strip_x_power();
    let sqf = rest.squarefree_part();

    // largest |real root|, exactly
    let chain = SturmChain::new(&sqf);
    let reals = isolate_with(&chain);
    let real_bracket = extreme_modulus(&chain, &reals, bits);

    // floating estimate decides whether a complex pair might dominate
    let approx = aberth(&sqf)?;
    let complex_max = approx
        .iter()
        .filter(|r| r.value.im != 0.0)
        .map(|r| r.value.norm() + r.radius)
        .fold(f64::NEG_INFINITY, f64::max);
    let real_lo = real_bracket.as_ref().map_or(0.0, |(lo, _)| lo.to_f64());
    let pair_needed = complex_max.is_finite() && complex_max >= real_lo * (1.0 - 1e-9);

    let pair_bracket = if pair_needed {
        pair_modulus_bracket(cp, bits)
    } else {
        None
    };

    let (lo, hi, cert) = match (real_bracket, pair_bracket) {
        (Some((a, b)), None) => (a, b, Certificate::RealRoot),
        (None, Some((a, b))) => (a, b, Certificate::ConjugatePair),
        (Some((ra, rb)), Some((pa, pb))) => {
            if ra > pb {
                (ra, rb, Certificate::RealRoot)
            } else if pa > rb {
                (pa, pb, Certificate::ConjugatePair)
            } else {
                // equal moduli within the requested width: take the hull
                (ra.min(pa), rb.max(pb), Certificate::RealRoot)
            }
        }
        (None, None) => {
            let hi = approx.iter().map(|r| r.value.norm()).fold(0.0, f64::max);
            return Err(Error::NoConvergence {
                iterations: 0,
                lo: 0.0,
                hi,
            });
        }
    };
    Ok(SpectralResult::from_dyadic(lo, hi, cert))
}

/// Bracket of `max |r|` over the real roots in `isolated`.
fn extreme_modulus(
    chain: &SturmChain,
    isolated: &[realroots::RootInterval],
    bits: u32,
) -> Option<(Dyadic, Dyadic)> {
    let first = isolated.first()?;
    let last = isolated.last()?;
    let top = refine(chain, last, bits);
    let bottom = refine(chain, first, bits);
    // |x| over (lo, hi]
    let abs_bounds = |lo: &Dyadic, hi: &Dyadic| {
        if !lo.is_negative() {
            (lo.clone(), hi.clone())
        } else if hi.is_negative() || hi == &Dyadic::from_int(0) {
            (hi.abs(), lo.abs())
        } else {
            (Dyadic::from_int(0), lo.abs().max(hi.abs()))
        }
    };
    let (a_lo, a_hi) = abs_bounds(&top.lo, &top.hi);
    let (b_lo, b_hi) = abs_bounds(&bottom.lo, &bottom.hi);
    if a_lo > b_hi {
        Some((a_lo, a_hi))
    } else if b_lo > a_hi {
        Some((b_lo, b_hi))
    } else {
        Some((a_lo.min(b_lo), a_hi.max(b_hi)))
    }
}

/// Bracket of `sqrt(lambda)` where `lambda` is the largest real eigenvalue of the
/// second compound; equals the spectral radius when a conjugate pair dominates.
fn pair_modulus_bracket(cp: &IntPoly, bits: u32) -> Option<(Dyadic, Dyadic)> {
    let cp2 = second_compound_charpoly(cp);
    let (_, rest) = cp2.strip_x_power();
    let chain = SturmChain::new(&rest);
    let roots = isolate_with(&chain);
    let top = roots.last()?;
    // sqrt halves relative precision near 1; ask for a few extra bits
    let iv = refine(&chain, top, bits + 4);
    if !iv.hi.is_negative() && iv.hi > Dyadic::from_int(0) {
        Some((iv.lo.sqrt_lower(bits + 2), iv.hi.sqrt_upper(bits + 2)))
    } else {
        None
    }
}

/// Power sums `s_1..=s_count` of the roots of a monic polynomial (Newton's identities).
pub fn power_sums(p: &IntPoly, count: usize) -> Vec<BigInt> {
    let n = p.degree().unwrap_or(0);
    // a_i of x^n + a_{n-1} x^{n-1} + ... + a_0
    let a = |i: usize| p.coeff(i);
    let mut s = vec![BigInt::zero(); count + 1];
    for k in 1..=count {
        let mut acc = BigInt::zero();
        for j in 1..=(k - 1).min(n) {
            acc += a(n - j) * &s[k - j];
        }
        if k <= n {
            acc += a(n - k) * BigInt::from(k);
        }
        s[k] = -acc;
    }
    s.remove(0);
    s
}

/// Monic polynomial with the given root power sums `s_1..=s_n` (inverse Newton).
pub fn from_power_sums(s: &[BigInt]) -> IntPoly {
    let n = s.len();
    // e_0 = 1; k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} s_i
    let mut e = vec![BigInt::one()];
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &s[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "power sums of an integer polynomial");
        e.push(q);
    }
    // x^n - e_1 x^{n-1} + e_2 x^{n-2} - ...
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (k, ek) in e.into_iter().enumerate() {
        coeffs[n - k] = if k % 2 == 1 { -ek } else { ek };
    }
    IntPoly::new(coeffs)
}

/// Characteristic polynomial of the second exterior power, computed from the
/// characteristic polynomial alone: its roots are the pairwise products `mu_i mu_j`.
pub fn second_compound_charpoly(cp: &IntPoly) -> IntPoly {
    let n = cp.degree().unwrap_or(0);
    let m = n * n.saturating_sub(1) / 2;
    if m == 0 {
        return IntPoly::one();
    }
    let s = power_sums(cp, 2 * m);
    let two = BigInt::from(2);
    let pair: Vec<BigInt> = (1..=m)
        .map(|k| {
            let v = &s[k - 1] * &s[k - 1] - &s[2 * k - 1];
            let (q, r) = v.div_rem(&two);
            debug_assert!(r.is_zero());
            q
        })
        .collect();
    from_power_sums(&pair)
}

/// Radius of a monic polynomial with bounded growth: `true` when all roots lie in the
/// closed unit disk, decided exactly.
pub fn radius_at_most_one(cp: &IntPoly) -> bool {
    let (_, rest) = cp.strip_x_power();
    rest.degree().unwrap_or(0) == 0 || realroots::is_cyclotomic_product(&rest)
}

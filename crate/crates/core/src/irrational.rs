//! Irrationality certificates for spectral radii of unimodular integer matrices, and
//! the product formula for compositions of generalized Hénon maps.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    integer_roots, second_compound_charpoly, spectral_radius, Certificate, IntMatrix,
    SpectralResult,
};
use crate::oracle::RationalMapSpec;
use crate::poly::{Domain, MonoSumPoly};

/// Bracket widths tried in order before giving up.
pub const BRACKET_WIDTHS: [f64; 2] = [1e-12, 1e-20];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictCase {
    RadiusOne,
    RealDominantIrrational,
    ComplexPairIrrational,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrrationalityVerdict {
    pub radius: f64,
    pub case: VerdictCase,
    pub bracket: SpectralResult,
    /// Exact checks passed, in order.
    pub certificate: Vec<String>,
    #[serde(serialize_with = "crate::json::ser_bigint")]
    pub det: BigInt,
    #[serde(serialize_with = "crate::json::ser_bigint_vec")]
    pub integer_roots: Vec<BigInt>,
    #[serde(serialize_with = "crate::json::ser_bigint_vec")]
    pub compound_integer_roots: Vec<BigInt>,
}

/// Integers `n` with `lo <= n <= hi`.
fn integers_in(lo: &BigRational, hi: &BigRational) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut n = lo.ceil().to_integer();
    let top = hi.floor().to_integer();
    while n <= top {
        out.push(n.clone());
        n += 1;
    }
    out
}

/// Decides whether the spectral radius of a unimodular matrix is irrational.
pub fn certify_irrational(m: &IntMatrix, tol: f64) -> Result<IrrationalityVerdict> {
    let det = m.det();
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular(det.abs().to_string()));
    }
    let cp = m.charpoly();
    let roots = integer_roots(&cp);
    let mut trail = vec![format!("|det| = 1 (det = {det})")];
    let widths: Vec<f64> = std::iter::once(tol)
        .chain(BRACKET_WIDTHS.iter().copied().filter(|&w| w < tol))
        .collect();
    let mut last = None;
    for &w in &widths {
        let sr = spectral_radius(m, w)?;
        if sr.is_one {
            trail.push("characteristic polynomial is a product of cyclotomic factors".into());
            return Ok(IrrationalityVerdict {
                radius: 1.0,
                case: VerdictCase::RadiusOne,
                bracket: sr,
                certificate: trail,
                det,
                integer_roots: roots,
                compound_integer_roots: Vec::new(),
            });
        }
        let roots_ok = roots.iter().all(|r| r.abs().is_one());
        let verdict = match sr.certificate {
            Certificate::ConjugatePair => {
                let c2 = second_compound_charpoly(&cp);
                let r2 = integer_roots(&c2);
                let lo2 = &sr.lo * &sr.lo;
                let hi2 = &sr.hi * &sr.hi;
                let clash: Vec<&BigInt> = r2
                    .iter()
                    .filter(|r| {
                        let q = BigRational::from_integer((*r).clone());
                        lo2 <= q && q <= hi2
                    })
                    .collect();
                if clash.is_empty() {
                    let mut t = trail.clone();
                    t.push(format!(
                        "dominant eigenvalues form a conjugate pair; rho^2 in [{lo2}, {hi2}]"
                    ));
                    t.push(format!(
                        "integer eigenvalues of the second exterior power {r2:?} all lie outside the rho^2 bracket"
                    ));
                    (VerdictCase::ComplexPairIrrational, t, r2)
                } else {
                    (VerdictCase::Inconclusive, trail.clone(), r2)
                }
            }
            _ => {
                let ints = integers_in(&sr.lo, &sr.hi);
                if roots_ok && ints.is_empty() {
                    let mut t = trail.clone();
                    t.push(format!("integer roots of the characteristic polynomial: {roots:?}"));
                    t.push(format!(
                        "dominant eigenvalue is real with bracket [{}, {}] containing no integer",
                        sr.lo, sr.hi
                    ));
                    (VerdictCase::RealDominantIrrational, t, Vec::new())
                } else {
                    (VerdictCase::Inconclusive, trail.clone(), Vec::new())
                }
            }
        };
        let (case, t, r2) = verdict;
        let out = IrrationalityVerdict {
            radius: sr.radius,
            case,
            bracket: sr,
            certificate: t,
            det: det.clone(),
            integer_roots: roots.clone(),
            compound_integer_roots: r2,
        };
        if case != VerdictCase::Inconclusive {
            return Ok(out);
        }
        last = Some(out);
    }
    Ok(last.expect("at least one bracket width"))
}

/// `deg(φ_1) ... deg(φ_j)`.
pub fn henon_delta(degrees: &[u64]) -> Result<BigInt> {
    if degrees.is_empty() {
        return Err(Error::Invalid("need at least one Hénon factor".into()));
    }
    if let Some(&d) = degrees.iter().find(|&&d| d < 2) {
        return Err(Error::HenonDegree(d));
    }
    Ok(degrees.iter().fold(BigInt::one(), |acc, &d| acc * d))
}

/// `h(x, y) = (y, y^2 - x)` on `P^2`: `[x_0^2 : x_0 x_2 : x_2^2 - x_0 x_1]`.
pub fn henon_spec() -> RationalMapSpec {
    let m = |e: [u32; 3], c: i64| MonoSumPoly::monomial(3, Domain::Integer, e.to_vec(), BigInt::from(c));
    let c2 = m([0, 0, 2], 1).add(&m([1, 1, 0], -1)).expect("same ring");
    RationalMapSpec::new(vec![m([2, 0, 0], 1), m([1, 0, 1], 1), c2], "henon y^2 - x")
        .expect("valid map")
}

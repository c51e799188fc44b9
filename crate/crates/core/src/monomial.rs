//! Monomial maps `f_A(x) = (prod_j x_j^{a_{1,j}}, ..., prod_j x_j^{a_{k,j}})`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{sorted_roots, spectral_radius, IntMatrix, SpectralResult};
use crate::oracle::RationalMapSpec;
use crate::poly::{Domain, MonoSumPoly};

/// Relative slack in the log-concavity comparison.
pub const LOG_CONCAVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialMap {
    a: IntMatrix,
}

impl MonomialMap {
    /// Rejects singular exponent matrices.
    pub fn new(a: IntMatrix) -> Result<Self> {
        if a.det().is_zero() {
            return Err(Error::SingularExponents);
        }
        Ok(MonomialMap { a })
    }

    pub fn k(&self) -> usize {
        self.a.dim()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    /// `f_A^n = f_{A^n}`
    pub fn power(&self, n: u64) -> MonomialMap {
        MonomialMap { a: self.a.pow(n) }
    }
}

fn exp_u32(x: &BigInt) -> Result<u32> {
    x.to_u32()
        .ok_or_else(|| Error::Invalid(format!("exponent {x} out of range")))
}

/// The homogeneous representative on `P^k`: clear the least common monomial
/// denominator, top every component up to the common degree with `x_0`, then strip
/// the common monomial.
pub fn projectivize(m: &MonomialMap) -> Result<RationalMapSpec> {
    let k = m.k();
    let a = &m.a;
    // denominator exponent of x_j: max over rows of the negative part
    let den: Vec<BigInt> = (0..k)
        .map(|j| {
            (0..k)
                .map(|i| (-a.get(i, j)).max(BigInt::zero()))
                .max()
                .unwrap_or_default()
        })
        .collect();
    let mut exps: Vec<Vec<BigInt>> = Vec::with_capacity(k + 1);
    let mut e0 = vec![BigInt::zero()];
    e0.extend(den.iter().cloned());
    exps.push(e0);
    for i in 0..k {
        let mut e = vec![BigInt::zero()];
        e.extend((0..k).map(|j| a.get(i, j) + &den[j]));
        exps.push(e);
    }
    let total = |e: &[BigInt]| e.iter().fold(BigInt::zero(), |s, x| s + x);
    let d = exps.iter().map(|e| total(e)).max().unwrap_or_default();
    let comps = exps
        .into_iter()
        .map(|mut e| {
            e[0] = &d - total(&e);
            let e = e.iter().map(exp_u32).collect::<Result<Vec<_>>>()?;
            Ok(MonoSumPoly::monomial(k + 1, Domain::Integer, e, BigInt::from(1)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalMapSpec::normalized(comps, format!("monomial {}", a.to_string_rows_compact()))?.0)
}

/// `|⋀^p A|`, the action on `H^{p,p}` of `(P^1)^k` in the lexicographic subset basis.
pub fn degp_matrix(m: &MonomialMap, p: usize) -> Result<IntMatrix> {
    Ok(m.a.exterior_power(p)?.abs_entries())
}

#[derive(Debug, Clone, Serialize)]
pub struct DynamicalDegrees {
    /// `δ_1, ..., δ_k`
    pub deltas: Vec<f64>,
    /// Certified brackets, one per `δ_p`.
    pub brackets: Vec<SpectralResult>,
    /// `|μ_1| >= ... >= |μ_k|`
    pub moduli: Vec<f64>,
}

/// `δ_p = |μ_1 ... μ_p|`, each certified as the spectral radius of `⋀^p A`.
pub fn dynamical_degrees(m: &MonomialMap, tol: f64) -> Result<DynamicalDegrees> {
    if tol <= 0.0 {
        return Err(Error::Invalid(format!("tolerance {tol} must be positive")));
    }
    let moduli: Vec<f64> = sorted_roots(&m.a.charpoly())?
        .iter()
        .map(|r| r.value.norm())
        .collect();
    let mut deltas = Vec::with_capacity(m.k());
    let mut brackets = Vec::with_capacity(m.k());
    for p in 1..=m.k() {
        let r = spectral_radius(&m.a.exterior_power(p)?, tol)?;
        deltas.push(r.radius);
        brackets.push(r);
    }
    Ok(DynamicalDegrees {
        deltas,
        brackets,
        moduli,
    })
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `||⋀^p(A^N)||^{1/N}` with the max-entry norm.
pub fn delta_via_limit(m: &MonomialMap, p: usize, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Invalid("N must be positive".into()));
    }
    let norm = m.a.pow(n).exterior_power(p)?.max_abs_entry();
    Ok((ln_big(&norm) / n as f64).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LogConcavity {
    pub holds: bool,
    pub first_violation: Option<usize>,
}

/// Checks `δ_p^2 >= δ_{p-1} δ_{p+1}` on `[δ_0 = 1, δ_1, ..., δ_k]`.
pub fn log_concavity_check(deltas: &[f64]) -> LogConcavity {
    let bad = (1..deltas.len().saturating_sub(1)).find(|&p| {
        let lhs = deltas[p] * deltas[p];
        let rhs = deltas[p - 1] * deltas[p + 1];
        lhs < rhs * (1.0 - LOG_CONCAVITY_TOL)
    });
    LogConcavity {
        holds: bad.is_none(),
        first_violation: bad,
    }
}

trait CompactRows {
    fn to_string_rows_compact(&self) -> String;
}

impl CompactRows for IntMatrix {
    fn to_string_rows_compact(&self) -> String {
        let rows: Vec<String> = self
            .rows()
            .map(|r| {
                let v: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", v.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

//! Floating-point simultaneous root finding (Aberth–Ehrlich) for integer polynomials.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::intpoly::IntPoly;
use crate::error::{Error, Result};

const MAX_ITER: usize = 2000;

/// An approximate root together with a Newton inclusion radius: some root of the
/// polynomial lies within `radius` of `value` (up to floating-point rounding).
#[derive(Debug, Clone, Copy)]
pub struct ApproxRoot {
    pub value: Complex64,
    pub radius: f64,
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Roots of a square-free polynomial of positive degree.
pub fn aberth(p: &IntPoly) -> Result<Vec<ApproxRoot>> {
    let d = match p.degree() {
        Some(d) if d > 0 => d,
        _ => return Ok(Vec::new()),
    };
    let lead = p.leading().to_f64().unwrap_or(f64::NAN);
    let c: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|x| x.to_f64().unwrap_or(f64::NAN) / lead)
        .collect();
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::Invalid(
            "polynomial coefficients exceed floating-point range".into(),
        ));
    }
    if d == 1 {
        return Ok(vec![ApproxRoot {
            value: Complex64::new(-c[0], 0.0),
            radius: 0.0,
        }]);
    }
    // Fujiwara-style radius for the initial circle
    let r0 = (0..d)
        .map(|i| c[i].abs().powf(1.0 / (d - i) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            Complex64::from_polar(r0, th)
        })
        .collect();
    let mut done = vec![false; d];
    for _ in 0..MAX_ITER {
        let mut all = true;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (pv, dpv) = horner(&c, z[i]);
            if pv.norm() <= rounding_bound(&c, z[i]) {
                done[i] = true;
                continue;
            }
            let ratio = pv / dpv;
            let sum: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(1.0) {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            return Ok(z
                .into_iter()
                .map(|v| {
                    let (pv, dpv) = horner(&c, v);
                    let radius = if pv.norm() == 0.0 {
                        0.0
                    } else {
                        d as f64 * (pv / dpv).norm()
                    };
                    ApproxRoot {
                        value: snap_real(v, radius),
                        radius,
                    }
                })
                .collect());
        }
    }
    let hi = z.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Err(Error::NoConvergence {
        iterations: MAX_ITER,
        lo: 0.0,
        hi,
    })
}

/// Size of the Horner evaluation error at `z`; below it the residual is noise.
fn rounding_bound(c: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    let mut acc = 0.0;
    for &a in c.iter().rev() {
        acc = acc * r + a.abs();
    }
    4.0 * c.len() as f64 * f64::EPSILON * acc
}

// roots of real polynomials come in conjugate pairs; tiny imaginary noise is dropped
fn snap_real(v: Complex64, radius: f64) -> Complex64 {
    if v.im.abs() <= (radius * 4.0).max(1e-13 * v.norm().max(1.0)) {
        Complex64::new(v.re, 0.0)
    } else {
        v
    }
}

/// All roots of `p` with multiplicity (zero roots included).
pub fn all_roots(p: &IntPoly) -> Result<Vec<ApproxRoot>> {
    let (zeros, rest) = p.strip_x_power();
    let mut out: Vec<ApproxRoot> = (0..zeros)
        .map(|_| ApproxRoot {
            value: Complex64::new(0.0, 0.0),
            radius: 0.0,
        })
        .collect();
    for (factor, mult) in rest.squarefree_decomposition() {
        for r in aberth(&factor)? {
            out.extend(std::iter::repeat_n(r, mult));
        }
    }
    Ok(out)
}

/// Eigenvalue approximations sorted by descending modulus, ties broken by
/// descending real part.
pub fn sorted_roots(p: &IntPoly) -> Result<Vec<ApproxRoot>> {
    let mut r = all_roots(p)?;
    r.sort_by(|a, b| {
        b.value
            .norm()
            .partial_cmp(&a.value.norm())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(
                b.value
                    .re
                    .partial_cmp(&a.value.re)
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
    });
    Ok(r)
}

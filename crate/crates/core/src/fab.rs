//! The family `f_{a,b}(x, y) = (y, (y + a) / (x + b))`: Picard pullback matrices,
//! the polynomials `χ_n`, their largest roots `λ_n`, and the orbit condition `V_n`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{isolate_real_roots, refine, tol_bits, IntMatrix, IntPoly, SturmChain};
use crate::linalg::Dyadic;
use crate::oracle::RationalMapSpec;
use crate::poly::{Domain, MonoSumPoly};

/// Newton acceptance threshold for `V_n` candidates.
pub const VN_RESIDUAL_TOL: f64 = 1e-9;
/// Candidates closer than this are merged.
pub const VN_DEDUPE_TOL: f64 = 1e-6;
const NEWTON_ITERS: usize = 200;
const FD_STEP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FabParams {
    pub a: Complex64,
    pub b: Complex64,
}

impl FabParams {
    pub fn real(a: f64, b: f64) -> Self {
        FabParams {
            a: Complex64::new(a, 0.0),
            b: Complex64::new(b, 0.0),
        }
    }
}

/// `f_X^*` on `Pic(X) = <H_X, E_1, E_2>`.
pub fn fx_matrix() -> IntMatrix {
    IntMatrix::from_i64(&[&[2, 1, 1], &[-1, -1, 0], &[-1, -1, -1]])
}

/// Labels of the ordered basis `H_Y, E_1, E_2, Q_n, ..., Q_0` of `Pic(Y)`.
pub fn pic_basis_y(n: usize) -> Vec<String> {
    let mut v = vec!["H_Y".to_string(), "E_1".into(), "E_2".into()];
    v.extend((0..=n).rev().map(|j| format!("Q_{j}")));
    v
}

/// `f_Y^*` on `Pic(Y)`, columns the images of the basis classes:
/// `H -> 2H - E_1 - E_2 - P`, `E_1 -> L_∞ = H - E_1 - E_2`,
/// `E_2 -> [x + b = 0] = H - E_2 - P`, `Q_j -> Q_{j-1}`, `Q_0 -> [y + a = 0] = H - E_1 - P`,
/// where `P = Q_n`.
pub fn fy_matrix(n: usize) -> IntMatrix {
    let d = n + 4;
    let p = 3;
    let mut m = IntMatrix::zero(d);
    let mut put = |r: usize, c: usize, v: i64| m.set(r, c, BigInt::from(v));
    put(0, 0, 2);
    put(1, 0, -1);
    put(2, 0, -1);
    put(p, 0, -1);
    put(0, 1, 1);
    put(1, 1, -1);
    put(2, 1, -1);
    put(0, 2, 1);
    put(2, 2, -1);
    put(p, 2, -1);
    for c in 3..d - 1 {
        put(c + 1, c, 1);
    }
    put(0, d - 1, 1);
    put(1, d - 1, -1);
    put(p, d - 1, -1);
    m
}

/// The 7x7 matrix exactly as printed for `n = 3`.
pub fn fy_display_fixture() -> IntMatrix {
    IntMatrix::from_i64(&[
        &[2, 1, 1, 0, 0, 0, 1],
        &[-1, -1, 0, 0, 0, 0, -1],
        &[-1, 0, -1, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0, -1],
        &[0, 0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0],
    ])
}

/// Entries `(row, col, printed, corrected)` (zero-based) where the printed matrix
/// differs from `fy_matrix(3)`.
pub const FY_DISPLAY_CORRECTIONS: [(usize, usize, i64, i64); 3] =
    [(2, 1, 0, -1), (3, 0, 0, -1), (3, 2, 0, -1)];

/// The printed matrix with the corrections applied.
pub fn fy_display_corrected() -> IntMatrix {
    let mut m = fy_display_fixture();
    for (r, c, _, v) in FY_DISPLAY_CORRECTIONS {
        m.set(r, c, BigInt::from(v));
    }
    m
}

/// `(M^j)_{1,1}` for `j = 0..=steps`: the degrees of `f^j` predicted by a pullback
/// matrix whose first basis class is the hyperplane.
pub fn picard_degrees(m: &IntMatrix, steps: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut pw = IntMatrix::identity(m.dim());
    for _ in 0..=steps {
        out.push(pw.get(0, 0).clone());
        pw = &pw * m;
    }
    out
}

/// `χ_n(t) = t^{n+1}(t^3 - t - 1) + t^3 + t^2 - 1`.
pub fn chi_formula(n: usize) -> IntPoly {
    IntPoly::from_i64(&[-1, -1, 0, 1])
        .shift(n + 1)
        .add(&IntPoly::from_i64(&[-1, 0, 1, 1]))
}

/// Largest real root of `χ_n` with an exact dyadic bracket.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaResult {
    pub n: usize,
    pub value: f64,
    #[serde(serialize_with = "ser_rational")]
    pub lo: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub hi: BigRational,
    /// No root of `χ_n` exceeds 1.
    pub is_one: bool,
}

fn ser_rational<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `λ_n`, certified by Sturm isolation and bisection on exact values.
pub fn lambda_n(n: usize, tol: f64) -> Result<LambdaResult> {
    if tol <= 0.0 {
        return Err(Error::Invalid(format!("tolerance {tol} must be positive")));
    }
    let chi = chi_formula(n);
    let chain = SturmChain::new(&chi);
    let one = Dyadic::from_int(1);
    let big = crate::linalg::root_bound(&chi);
    if chain.count(&one, &big) == 0 {
        let r = BigRational::from_integer(BigInt::from(1));
        return Ok(LambdaResult {
            n,
            value: 1.0,
            lo: r.clone(),
            hi: r,
            is_one: true,
        });
    }
    let roots = isolate_real_roots(&chi);
    let top = roots.last().expect("a root above 1 exists");
    let iv = refine(&chain, top, tol_bits(tol));
    Ok(LambdaResult {
        n,
        value: iv.midpoint().to_f64(),
        lo: iv.lo.to_rational(),
        hi: iv.hi.to_rational(),
        is_one: false,
    })
}

/// `f_{a,b}` in double precision; `None` at the pole `x + b = 0`.
fn step(p: &FabParams, (x, y): (Complex64, Complex64)) -> Option<(Complex64, Complex64)> {
    let den = x + p.b;
    if den.norm() == 0.0 {
        return None;
    }
    let next = (y, (y + p.a) / den);
    (next.1.re.is_finite() && next.1.im.is_finite()).then_some(next)
}

fn vn_map(p: &FabParams, n: usize) -> Result<[Complex64; 2]> {
    let mut z = (-p.a, Complex64::new(0.0, 0.0));
    for s in 1..=n {
        z = step(p, z).ok_or(Error::OrbitPole { step: s })?;
    }
    Ok([z.0 + p.b, z.1 + p.a])
}

/// Distance between `f^n(-a, 0)` and `(-b, -a)`.
pub fn vn_residual(p: &FabParams, n: usize) -> Result<f64> {
    let [u, v] = vn_map(p, n)?;
    Ok((u.norm_sqr() + v.norm_sqr()).sqrt())
}

fn norm2(v: &[Complex64; 2]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

fn newton(mut z: FabParams, n: usize) -> Option<FabParams> {
    let mut fz = vn_map(&z, n).ok()?;
    for _ in 0..NEWTON_ITERS {
        let r = norm2(&fz);
        if r < 1e-13 {
            break;
        }
        // holomorphic: a real finite-difference step gives the complex derivative
        let h = FD_STEP * (1.0 + z.a.norm().max(z.b.norm()));
        let da = vn_map(&FabParams { a: z.a + h, ..z }, n).ok()?;
        let db = vn_map(&FabParams { b: z.b + h, ..z }, n).ok()?;
        let j = [
            [(da[0] - fz[0]) / h, (db[0] - fz[0]) / h],
            [(da[1] - fz[1]) / h, (db[1] - fz[1]) / h],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.norm() < 1e-300 {
            return None;
        }
        let sa = (j[1][1] * fz[0] - j[0][1] * fz[1]) / det;
        let sb = (j[0][0] * fz[1] - j[1][0] * fz[0]) / det;
        let mut lam = 1.0;
        let mut moved = false;
        while lam > 1e-6 {
            let cand = FabParams {
                a: z.a - sa * lam,
                b: z.b - sb * lam,
            };
            if let Ok(fc) = vn_map(&cand, n) {
                if norm2(&fc) < r {
                    z = cand;
                    fz = fc;
                    moved = true;
                    break;
                }
            }
            lam *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Some(z)
}

fn clean(x: f64) -> f64 {
    if x.abs() < VN_RESIDUAL_TOL {
        0.0
    } else {
        x
    }
}

/// Damped Newton search for points of `V_n` from `restarts` random starts.
pub fn vn_search(n: usize, seed: u64, restarts: usize) -> Vec<FabParams> {
    let mut found: Vec<FabParams> = Vec::new();
    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
        let mut c = || Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let start = FabParams { a: c(), b: c() };
        let Some(z) = newton(start, n) else { continue };
        if !matches!(vn_residual(&z, n), Ok(res) if res < VN_RESIDUAL_TOL) {
            continue;
        }
        let z = FabParams {
            a: Complex64::new(z.a.re, clean(z.a.im)),
            b: Complex64::new(z.b.re, clean(z.b.im)),
        };
        let dup = found
            .iter()
            .any(|w| ((w.a - z.a).norm_sqr() + (w.b - z.b).norm_sqr()).sqrt() < VN_DEDUPE_TOL);
        if !dup {
            found.push(z);
        }
    }
    found
}

/// Points of `V_n` over `F_p` with distinct, pole-free orbit points, by exhaustive
/// search; intended for small primes.
pub fn vn_points_mod_p(n: usize, p: u64, limit: usize) -> Vec<(u64, u64)> {
    let inv = |x: u64| -> u64 {
        // Fermat
        let (mut r, mut b, mut e) = (1u64, x % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut out = Vec::new();
    for a in 1..p {
        for b in 0..p {
            let mut pts = vec![((p - a) % p, 0u64)];
            let mut ok = true;
            for _ in 0..n {
                let (x, y) = *pts.last().expect("nonempty");
                let den = (x + b) % p;
                if den == 0 {
                    ok = false;
                    break;
                }
                pts.push((y, (y + a) % p * inv(den) % p));
            }
            if !ok {
                continue;
            }
            let target = ((p - b) % p, (p - a) % p);
            if *pts.last().expect("nonempty") != target {
                continue;
            }
            let mut sorted = pts.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() == pts.len() {
                out.push((a, b));
                if out.len() >= limit {
                    return out;
                }
            }
        }
    }
    out
}

/// `[x_0(x_1 + b x_0) : x_2(x_1 + b x_0) : x_0(x_2 + a x_0)]` over `F_p`.
pub fn fab_spec(a: u64, b: u64, prime: u64) -> Result<RationalMapSpec> {
    let dom = Domain::Prime(prime);
    let mono = |e: [u32; 3], c: u64| MonoSumPoly::monomial(3, dom, e.to_vec(), BigInt::from(c));
    let c0 = mono([1, 1, 0], 1).add(&mono([2, 0, 0], b))?;
    let c1 = mono([0, 1, 1], 1).add(&mono([1, 0, 1], b))?;
    let c2 = mono([1, 0, 1], 1).add(&mono([2, 0, 0], a))?;
    RationalMapSpec::new(vec![c0, c1, c2], format!("f_(a={a},b={b}) mod {prime}"))
}

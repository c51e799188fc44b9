//! Dense univariate arithmetic over `F_p` on raw coefficient vectors (lowest
//! degree first, trimmed). Multiplication switches between schoolbook, Karatsuba and
//! NTT; GCD switches between Euclid and half-GCD.

use super::field::PrimeField;

const SCHOOLBOOK: usize = 32;
const NTT_MIN: usize = 64;
const HGCD_MIN: usize = 96;
const NEWTON_DIV_MIN: usize = 128;

pub type Poly = Vec<u64>;

#[inline]
pub fn trim(v: &mut Poly) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree, `None` for zero.
#[inline]
pub fn deg(v: &[u64]) -> Option<usize> {
    v.len().checked_sub(1)
}

/// Degree with `-1` for zero, for the degree comparisons in the GCD code.
#[inline]
fn sdeg(v: &[u64]) -> isize {
    v.len() as isize - 1
}

pub fn add(f: &PrimeField, a: &[u64], b: &[u64]) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(&mut out);
    out
}

pub fn sub(f: &PrimeField, a: &[u64], b: &[u64]) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(&mut out);
    out
}

pub fn scale(f: &PrimeField, a: &[u64], c: u64) -> Poly {
    if c == 0 {
        return Vec::new();
    }
    let cm = f.to_mont(c);
    a.iter().map(|&x| f.mul_mont(x, cm)).collect()
}

pub fn eval(f: &PrimeField, a: &[u64], x: u64) -> u64 {
    let xm = f.to_mont(x);
    a.iter()
        .rev()
        .fold(0, |acc, &c| f.add(f.mul_mont(acc, xm), c))
}

pub fn derivative(f: &PrimeField, a: &[u64]) -> Poly {
    let mut out: Poly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| f.mul(c, f.reduce(i as u64)))
        .collect();
    trim(&mut out);
    out
}

pub fn mul(f: &PrimeField, a: &[u64], b: &[u64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let small = a.len().min(b.len());
    let mut out = if small <= SCHOOLBOOK {
        mul_schoolbook(f, a, b)
    } else {
        let n = (a.len() + b.len() - 1).next_power_of_two();
        if small >= NTT_MIN && f.root_of_unity(n.trailing_zeros()).is_some() {
            mul_ntt(f, a, b)
        } else {
            mul_karatsuba(f, a, b)
        }
    };
    trim(&mut out);
    out
}

pub fn square(f: &PrimeField, a: &[u64]) -> Poly {
    mul(f, a, a)
}

fn mul_schoolbook(f: &PrimeField, a: &[u64], b: &[u64]) -> Poly {
    let (a, b) = if a.len() < b.len() { (a, b) } else { (b, a) };
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let xm = f.to_mont(x);
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul_mont(y, xm));
        }
    }
    out
}

fn mul_karatsuba(f: &PrimeField, a: &[u64], b: &[u64]) -> Poly {
    if a.len().min(b.len()) <= SCHOOLBOOK {
        return mul_schoolbook(f, a, b);
    }
    let h = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(h.min(a.len()));
    let (b0, b1) = b.split_at(h.min(b.len()));
    let z0 = mul_or_empty(f, a0, b0);
    let z2 = mul_or_empty(f, a1, b1);
    let sa = add_raw(f, a0, a1);
    let sb = add_raw(f, b0, b1);
    let z1 = mul_or_empty(f, &sa, &sb);
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &v) in z0.iter().enumerate() {
        out[i] = f.add(out[i], v);
    }
    for (i, &v) in z2.iter().enumerate() {
        out[i + 2 * h] = f.add(out[i + 2 * h], v);
    }
    for i in 0..z1.len() {
        let mid = f.sub(
            f.sub(z1[i], *z0.get(i).unwrap_or(&0)),
            *z2.get(i).unwrap_or(&0),
        );
        if i + h < out.len() {
            out[i + h] = f.add(out[i + h], mid);
        }
    }
    out
}

fn mul_or_empty(f: &PrimeField, a: &[u64], b: &[u64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        Vec::new()
    } else {
        mul_karatsuba(f, a, b)
    }
}

fn add_raw(f: &PrimeField, a: &[u64], b: &[u64]) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect()
}

/// In-place transform of length `a.len()` (a power of two). `inverse` includes the
/// `1/n` scaling.
pub fn ntt(f: &PrimeField, a: &mut [u64], inverse: bool) {
    let n = a.len();
    if n <= 1 {
        return;
    }
    let log_n = n.trailing_zeros();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let root = f.root_of_unity(log_n).expect("field supports this transform length");
    let root = if inverse { f.inv(root) } else { root };
    // twiddles for the largest stage; smaller stages stride through them
    let half = n / 2;
    let mut tw = Vec::with_capacity(half);
    let mut w = f.to_mont(1);
    let rm = f.to_mont(root);
    for _ in 0..half {
        tw.push(w);
        w = f.mul_mont(w, rm);
    }
    let mut len = 2;
    while len <= n {
        let h = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..h {
                let u = a[start + k];
                let v = f.mul_mont(a[start + k + h], tw[k * stride]);
                a[start + k] = f.add(u, v);
                a[start + k + h] = f.sub(u, v);
            }
        }
        len <<= 1;
    }
    if inverse {
        let ninv = f.to_mont(f.inv(f.reduce(n as u64)));
        for x in a.iter_mut() {
            *x = f.mul_mont(*x, ninv);
        }
    }
}

fn mul_ntt(f: &PrimeField, a: &[u64], b: &[u64]) -> Poly {
    let len = a.len() + b.len() - 1;
    let n = len.next_power_of_two();
    let mut fa = a.to_vec();
    fa.resize(n, 0);
    ntt(f, &mut fa, false);
    if std::ptr::eq(a, b) {
        for x in fa.iter_mut() {
            *x = f.mul(*x, *x);
        }
    } else {
        let mut fb = b.to_vec();
        fb.resize(n, 0);
        ntt(f, &mut fb, false);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = f.mul(*x, *y);
        }
    }
    ntt(f, &mut fa, true);
    fa.truncate(len);
    fa
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(f: &PrimeField, a: &[u64], b: &[u64]) -> (Poly, Poly) {
    let db = deg(b).expect("division by the zero polynomial");
    let Some(da) = deg(a) else {
        return (Vec::new(), Vec::new());
    };
    if da < db {
        return (Vec::new(), a.to_vec());
    }
    let qlen = da - db + 1;
    if qlen >= NEWTON_DIV_MIN && db >= NEWTON_DIV_MIN {
        return divrem_newton(f, a, b);
    }
    let inv_lead = f.to_mont(f.inv(b[db]));
    let mut r = a.to_vec();
    let mut q = vec![0u64; qlen];
    let bm: Vec<u64> = b.iter().map(|&x| f.to_mont(x)).collect();
    for i in (0..qlen).rev() {
        let c = f.mul_mont(r[i + db], inv_lead);
        q[i] = c;
        if c != 0 {
            for (j, &y) in bm.iter().enumerate().take(db) {
                r[i + j] = f.sub(r[i + j], f.mul_mont(c, y));
            }
        }
        r[i + db] = 0;
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

/// Power-series inverse of `a` modulo `x^n` (`a[0] != 0`).
fn series_inverse(f: &PrimeField, a: &[u64], n: usize) -> Poly {
    let mut g = vec![f.inv(a[0])];
    let mut k = 1;
    while k < n {
        k = (2 * k).min(n);
        // g <- g (2 - a g) mod x^k
        let ak: Vec<u64> = a.iter().take(k).copied().collect();
        let mut ag = mul(f, &ak, &g);
        ag.resize(k, 0);
        for x in ag.iter_mut() {
            *x = f.neg(*x);
        }
        ag[0] = f.add(ag[0], 2);
        let mut ng = mul(f, &g, &ag);
        ng.resize(k, 0);
        g = ng;
    }
    g
}

fn divrem_newton(f: &PrimeField, a: &[u64], b: &[u64]) -> (Poly, Poly) {
    let da = a.len() - 1;
    let db = b.len() - 1;
    let qlen = da - db + 1;
    let ra: Vec<u64> = a.iter().rev().take(qlen).copied().collect();
    let rb: Vec<u64> = b.iter().rev().copied().collect();
    let inv = series_inverse(f, &rb, qlen);
    let mut rq = mul(f, &ra, &inv);
    rq.resize(qlen, 0);
    rq.reverse();
    let mut q = rq;
    trim(&mut q);
    let bq = mul(f, b, &q);
    let mut r = sub(f, a, &bq);
    r.truncate(db);
    trim(&mut r);
    (q, r)
}

pub fn rem(f: &PrimeField, a: &[u64], b: &[u64]) -> Poly {
    divrem(f, a, b).1
}

pub fn make_monic(f: &PrimeField, a: &[u64]) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(f, a, f.inv(l)),
    }
}

/// `a div x^k`.
fn shr(a: &[u64], k: usize) -> Poly {
    if k >= a.len() {
        Vec::new()
    } else {
        a[k..].to_vec()
    }
}

/// 2x2 polynomial matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug)]
pub struct Mat2 {
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    pub d: Poly,
}

impl Mat2 {
    pub fn identity() -> Self {
        Mat2 {
            a: vec![1],
            b: Vec::new(),
            c: Vec::new(),
            d: vec![1],
        }
    }

    pub fn apply(&self, f: &PrimeField, x: &[u64], y: &[u64]) -> (Poly, Poly) {
        (
            add(f, &mul(f, &self.a, x), &mul(f, &self.b, y)),
            add(f, &mul(f, &self.c, x), &mul(f, &self.d, y)),
        )
    }

    /// `self * rhs`
    pub fn compose(&self, f: &PrimeField, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: add(f, &mul(f, &self.a, &rhs.a), &mul(f, &self.b, &rhs.c)),
            b: add(f, &mul(f, &self.a, &rhs.b), &mul(f, &self.b, &rhs.d)),
            c: add(f, &mul(f, &self.c, &rhs.a), &mul(f, &self.d, &rhs.c)),
            d: add(f, &mul(f, &self.c, &rhs.b), &mul(f, &self.d, &rhs.d)),
        }
    }

    /// The Euclid step `(x, y) -> (y, x - q y)`.
    fn step(f: &PrimeField, q: &[u64]) -> Mat2 {
        Mat2 {
            a: Vec::new(),
            b: vec![1],
            c: vec![1],
            d: sub(f, &[], q),
        }
    }
}

/// Half-GCD: a unimodular `M` with `(x', y') = M (x, y)` consecutive remainders of
/// the Euclidean sequence and `deg x' >= ceil(deg x / 2) > deg y'`.
/// Requires `deg x > deg y`.
pub fn half_gcd(f: &PrimeField, x: &[u64], y: &[u64]) -> Mat2 {
    let m = (sdeg(x) + 1) / 2;
    if sdeg(y) < m {
        return Mat2::identity();
    }
    if x.len() < HGCD_MIN {
        return half_gcd_euclid(f, x, y, m);
    }
    let mu = m as usize;
    let r = half_gcd(f, &shr(x, mu), &shr(y, mu));
    let (x1, y1) = r.apply(f, x, y);
    if sdeg(&y1) < m {
        return r;
    }
    let (q, rem) = divrem(f, &x1, &y1);
    let t = Mat2::step(f, &q);
    let (x2, y2) = (y1, rem);
    let tr = t.compose(f, &r);
    if sdeg(&y2) < m {
        return tr;
    }
    let k = (2 * m - sdeg(&x2)).max(0) as usize;
    let s = half_gcd(f, &shr(&x2, k), &shr(&y2, k));
    s.compose(f, &tr)
}

fn half_gcd_euclid(f: &PrimeField, x: &[u64], y: &[u64], m: isize) -> Mat2 {
    let mut mat = Mat2::identity();
    let (mut a, mut b) = (x.to_vec(), y.to_vec());
    while sdeg(&b) >= m {
        let (q, r) = divrem(f, &a, &b);
        mat = Mat2::step(f, &q).compose(f, &mat);
        a = b;
        b = r;
    }
    mat
}

/// Monic GCD (zero only when both inputs are zero).
pub fn gcd(f: &PrimeField, x: &[u64], y: &[u64]) -> Poly {
    let (mut a, mut b) = if x.len() >= y.len() {
        (x.to_vec(), y.to_vec())
    } else {
        (y.to_vec(), x.to_vec())
    };
    trim(&mut a);
    trim(&mut b);
    loop {
        if b.is_empty() {
            return make_monic(f, &a);
        }
        if a.len() == b.len() {
            let r = rem(f, &a, &b);
            a = std::mem::replace(&mut b, r);
            continue;
        }
        if b.len() >= HGCD_MIN {
            let m = half_gcd(f, &a, &b);
            let (na, nb) = m.apply(f, &a, &b);
            a = na;
            b = nb;
            if b.is_empty() {
                continue;
            }
        }
        let r = rem(f, &a, &b);
        a = std::mem::replace(&mut b, r);
    }
}

/// Rational reconstruction: returns `(num, den)` with `num = den * v mod m`,
/// `deg num < bound`, `deg den <= deg m - bound`, or `None` if the Euclidean
/// sequence of `(m, v)` has no such pair.
pub fn rational_reconstruct(
    f: &PrimeField,
    m: &[u64],
    v: &[u64],
    bound: usize,
) -> Option<(Poly, Poly)> {
    let mut v = v.to_vec();
    trim(&mut v);
    let mut mat = Mat2::identity();
    let (mut a, mut b) = (m.to_vec(), rem(f, &v, m));
    // cofactors of v: a = s0 v (mod m), b = s1 v (mod m)
    if sdeg(&b) < bound as isize {
        let den = vec![1];
        return Some((b, den));
    }
    if deg(m).unwrap_or(0) >= 2 * HGCD_MIN {
        let h = half_gcd(f, &a, &b);
        let (na, nb) = h.apply(f, &a, &b);
        mat = h;
        a = na;
        b = nb;
    }
    while sdeg(&b) >= bound as isize {
        let (q, r) = divrem(f, &a, &b);
        mat = Mat2::step(f, &q).compose(f, &mat);
        a = b;
        b = r;
    }
    // the first remainder below the bound might sit in `a` if half-GCD overshot
    let (num, den) = if sdeg(&a) < bound as isize {
        (a, mat.b)
    } else {
        (b, mat.d)
    };
    if den.is_empty() {
        return None;
    }
    Some((num, den))
}

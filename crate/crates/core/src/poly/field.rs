//! Arithmetic in `F_p` for odd primes below `2^62`, via Montgomery reduction.

use crate::error::{Error, Result};

/// Primes `c * 2^32 + 1` just above `2^61`. Every one supports number-theoretic
/// transforms of length up to `2^32`, and they serve as the oracle's prime table.
pub const PRIME_TABLE: [u64; 20] = [
    2305843095113039873,
    2305843185307353089,
    2305843262616764417,
    2305843322746306561,
    2305843327041273857,
    2305843391465783297,
    2305843430120488961,
    2305843546084605953,
    2305843567559442433,
    2305843700703428609,
    2305843799487676417,
    2305843928336695297,
    2305843966991400961,
    2305843992761204737,
    2305844022825975809,
    2305844138790092801,
    2305844173149831169,
    2305844203214602241,
    2305844224689438721,
    2305844379308261377,
];

/// Field context. Values handed in and out are canonical residues in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    neg_inv: u64,
    r2: u64,
    two_adicity: u32,
    /// primitive `2^two_adicity`-th root of unity
    root: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || p >= 1 << 62 || !is_prime_u64(p) {
            return Err(Error::InvalidPrime(p));
        }
        let mut inv: u64 = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        let mut f = PrimeField {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
            two_adicity: 0,
            root: 1,
        };
        let s = (p - 1).trailing_zeros();
        let odd = (p - 1) >> s;
        let mut g = 2;
        while f.pow(g, (p - 1) / 2) != p - 1 {
            g += 1;
        }
        f.two_adicity = s;
        f.root = f.pow(g, odd);
        Ok(f)
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        let r = (x as i128).rem_euclid(self.p as i128);
        r as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let t = self.redc(a as u128 * b as u128);
        self.redc(t as u128 * self.r2 as u128)
    }

    /// Montgomery form `a R mod p`.
    #[inline]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.redc(a as u128 * self.r2 as u128)
    }

    /// `a * b` where `b_mont` is in Montgomery form and `a` is canonical.
    #[inline]
    pub fn mul_mont(&self, a: u64, b_mont: u64) -> u64 {
        self.redc(a as u128 * b_mont as u128)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = self.to_mont(a);
        let mut acc = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.redc(acc as u128 * base as u128);
            }
            base = self.redc(base as u128 * base as u128);
            e >>= 1;
        }
        self.redc(acc as u128)
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    pub fn two_adicity(&self) -> u32 {
        self.two_adicity
    }

    /// Primitive `2^log_n`-th root of unity, when the field has one.
    pub fn root_of_unity(&self, log_n: u32) -> Option<u64> {
        if log_n > self.two_adicity {
            return None;
        }
        let mut w = self.root;
        for _ in log_n..self.two_adicity {
            w = self.mul(w, w);
        }
        Some(w)
    }

    /// Inverses of every element of `xs` with one field inversion. All must be nonzero.
    pub fn batch_inv(&self, xs: &[u64]) -> Vec<u64> {
        let mut prefix = Vec::with_capacity(xs.len());
        let mut acc = 1;
        for &x in xs {
            prefix.push(acc);
            acc = self.mul(acc, x);
        }
        let mut inv = self.inv(acc);
        let mut out = vec![0; xs.len()];
        for i in (0..xs.len()).rev() {
            out[i] = self.mul(inv, prefix[i]);
            inv = self.mul(inv, xs[i]);
        }
        out
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

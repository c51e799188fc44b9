use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact dyadic rational `num / 2^exp`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: BigInt, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic {
            num: n.into(),
            exp: 0,
        }
    }

    /// Largest dyadic with denominator `2^bits` not exceeding `x`.
    pub fn floor_f64(x: f64, bits: u32) -> Self {
        let scaled = (x * 2f64.powi(bits as i32)).floor();
        Dyadic::new(BigInt::from(scaled as i128), bits)
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    fn normalize(&mut self) {
        while self.exp > 0 && self.num.is_even() {
            if self.num.is_zero() {
                self.exp = 0;
                return;
            }
            self.num >>= 1;
            self.exp -= 1;
        }
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u32) {
        let e = self.exp.max(other.exp);
        (
            &self.num << (e - self.exp),
            &other.num << (e - other.exp),
            e,
        )
    }

    pub fn midpoint(&self, other: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e + 1)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a - b, e)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &other.num, self.exp + other.exp)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            num: -&self.num,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            num: num_traits::Signed::abs(&self.num),
            exp: self.exp,
        }
    }

    pub fn is_negative(&self) -> bool {
        num_traits::Signed::is_negative(&self.num)
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&(BigInt::one() << self.exp))
    }

    pub fn ceil(&self) -> BigInt {
        -((-&self.num).div_floor(&(BigInt::one() << self.exp)))
    }

    pub fn to_f64(&self) -> f64 {
        // shift the numerator down to 60 significant bits before converting
        let bits = self.num.bits() as i64;
        let drop = (bits - 60).max(0) as u32;
        let n = (&self.num >> drop).to_f64().unwrap_or(f64::NAN);
        n * 2f64.powi(drop as i32 - self.exp as i32)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), BigInt::one() << self.exp)
    }

    /// Dyadic upper bound on `sqrt(self)` with at most `bits` fractional bits.
    pub fn sqrt_upper(&self, bits: u32) -> Dyadic {
        let lo = self.sqrt_lower(bits);
        if lo.mul(&lo) == *self {
            lo
        } else {
            lo.add(&Dyadic::new(BigInt::one(), bits))
        }
    }

    /// Dyadic lower bound on `sqrt(self)` (zero for negative input).
    pub fn sqrt_lower(&self, bits: u32) -> Dyadic {
        if self.is_negative() || self.num.is_zero() {
            return Dyadic::from_int(0);
        }
        // floor(sqrt(num * 2^(2 bits - exp))) / 2^bits, made exact by evening the exponent
        let (mut n, mut e) = (self.num.clone(), self.exp);
        if e % 2 == 1 {
            n <<= 1;
            e += 1;
        }
        // sqrt(n / 2^e) = sqrt(n) / 2^(e/2)
        let half = e / 2;
        let target = bits.max(half);
        let shifted = n << (2 * (target - half));
        Dyadic::new(shifted.sqrt(), target)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

//! Random parametrized lines over a prime field.

use rand::Rng;
use serde::Serialize;

use crate::poly::dense::Poly;
use crate::poly::PrimeField;

/// A linear subspace given by integer combinations of free parameters: coordinate
/// `i` is `sum_j rows[i][j].1 * param[rows[i][j].0]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub label: String,
    pub nparams: usize,
    pub rows: Vec<Vec<(usize, i64)>>,
}

impl Embedding {
    pub fn ncoords(&self) -> usize {
        self.rows.len()
    }

    pub fn apply(&self, f: &PrimeField, params: &[u64]) -> Vec<u64> {
        self.rows
            .iter()
            .map(|row| {
                row.iter().fold(0, |acc, &(j, c)| {
                    f.add(acc, f.mul(f.from_i64(c), params[j]))
                })
            })
            .collect()
    }
}

/// The line `t -> a + b t` in `F_p^{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamLine {
    #[serde(with = "crate::json::u64_string")]
    pub prime: u64,
    pub k: usize,
    #[serde(with = "crate::json::u64_string_vec")]
    pub point_a: Vec<u64>,
    #[serde(with = "crate::json::u64_string_vec")]
    pub point_b: Vec<u64>,
}

impl ParamLine {
    /// Two random points, projectively independent, optionally inside a subspace.
    pub fn random<R: Rng>(
        f: &PrimeField,
        nvars: usize,
        embedding: Option<&Embedding>,
        rng: &mut R,
    ) -> ParamLine {
        let p = f.modulus();
        let point = |rng: &mut R| -> Vec<u64> {
            match embedding {
                None => (0..nvars).map(|_| rng.gen_range(1..p)).collect(),
                Some(e) => {
                    let params: Vec<u64> = (0..e.nparams).map(|_| rng.gen_range(1..p)).collect();
                    e.apply(f, &params)
                }
            }
        };
        loop {
            let a = point(rng);
            let b = point(rng);
            if independent(f, &a, &b) {
                return ParamLine {
                    prime: p,
                    k: nvars - 1,
                    point_a: a,
                    point_b: b,
                };
            }
        }
    }

    /// Coordinates as degree-one polynomials in `t`.
    pub fn tuple(&self) -> Vec<Poly> {
        self.point_a
            .iter()
            .zip(&self.point_b)
            .map(|(&a, &b)| {
                let mut v = vec![a, b];
                crate::poly::dense::trim(&mut v);
                v
            })
            .collect()
    }

    pub fn at(&self, f: &PrimeField, t: u64) -> Vec<u64> {
        self.point_a
            .iter()
            .zip(&self.point_b)
            .map(|(&a, &b)| f.add(a, f.mul(b, t)))
            .collect()
    }
}

fn independent(f: &PrimeField, a: &[u64], b: &[u64]) -> bool {
    let n = a.len();
    for i in 0..n {
        for j in i + 1..n {
            if f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i])) != 0 {
                return true;
            }
        }
    }
    false
}

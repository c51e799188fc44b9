//! Degree sequences `deg(f^n)` by restriction to random lines over prime fields.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::line::{Embedding, ParamLine};
use super::spec::{CompiledHandle, MapHandle};
use crate::error::{Error, Result};
use crate::poly::dense::{self, Poly};
use crate::poly::{PrimeField, UniPolyF, PRIME_TABLE};

/// How a trial computes the restriction of `f^n` to its line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Substitute the line into the components and strip the common GCD.
    Pullback,
    /// Iterate the map on points of the line and recover the restriction by
    /// rational reconstruction.
    Sampling,
    /// Sampling when the handle has pointwise shortcuts, pullback otherwise.
    Auto,
}

#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub strategy: Strategy,
    /// Lines are drawn inside this subspace when set.
    pub embedding: Option<Embedding>,
    /// Overrides the seeded draw from the prime table.
    pub primes: Option<Vec<u64>>,
    pub line_retries: usize,
    pub prime_retries: usize,
}

impl OracleConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        OracleConfig {
            n,
            trials,
            seed,
            strategy: Strategy::Auto,
            embedding: None,
            primes: None,
            line_retries: 8,
            prime_retries: 3,
        }
    }

    pub fn strategy(mut self, s: Strategy) -> Self {
        self.strategy = s;
        self
    }

    pub fn embedding(mut self, e: Embedding) -> Self {
        self.embedding = Some(e);
        self
    }

    pub fn primes(mut self, p: Vec<u64>) -> Self {
        self.primes = Some(p);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    #[serde(with = "crate::json::u64_string")]
    pub prime: u64,
    #[serde(with = "crate::json::u64_string")]
    pub seed: u64,
    pub line_resamples: usize,
    pub prime_changes: usize,
    pub strategy: Strategy,
    #[serde(with = "crate::json::u64_string_vec")]
    pub degrees: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    #[serde(with = "crate::json::u64_string")]
    pub seed: u64,
    #[serde(with = "crate::json::u64_string_vec")]
    pub primes: Vec<u64>,
    pub strategy: Strategy,
    pub subspace: Option<String>,
    pub method: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeReport {
    pub label: String,
    /// Majority value of `deg(f^n)` for `n = 0..=N`.
    #[serde(with = "crate::json::u64_string_vec")]
    pub degrees: Vec<u64>,
    /// `d_{n+1} / d_n`
    pub ratios: Vec<f64>,
    /// `d_n^{1/n}` for `n >= 1`
    pub roots: Vec<f64>,
    /// `true` where every trial reported the majority value.
    pub agreement: Vec<bool>,
    pub trials: Vec<TrialRecord>,
    pub provenance: Provenance,
}

impl DegreeReport {
    pub fn all_agree(&self) -> bool {
        self.agreement.iter().all(|&a| a)
    }

    /// `d_{m+n} <= d_m d_n` for every admissible pair.
    pub fn is_submultiplicative(&self) -> bool {
        let d = &self.degrees;
        (1..d.len()).all(|m| (1..d.len() - m).all(|n| d[m + n] as u128 <= d[m] as u128 * d[n] as u128))
    }
}

const METHOD: &str = "Monte Carlo: generic line over a random prime field";

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `deg(f^n)` for `n = 0..=N` with the default configuration.
pub fn degree_sequence(map: &MapHandle, n: usize, trials: usize, seed: u64) -> Result<DegreeReport> {
    degree_sequence_with(map, &OracleConfig::new(n, trials, seed))
}

pub fn degree_sequence_with(map: &MapHandle, cfg: &OracleConfig) -> Result<DegreeReport> {
    if cfg.n < 1 || cfg.trials < 1 {
        return Err(Error::Invalid("degree_sequence needs N >= 1 and trials >= 1".into()));
    }
    if let Some(e) = &cfg.embedding {
        if e.ncoords() != map.nvars() {
            return Err(Error::VariableCount {
                expected: map.nvars(),
                found: e.ncoords(),
            });
        }
    }
    let strategy = match cfg.strategy {
        Strategy::Auto if map.has_fast_stage() => Strategy::Sampling,
        Strategy::Auto => Strategy::Pullback,
        s => s,
    };
    let table: Vec<u64> = if let Some(p) = map.fixed_prime() {
        vec![p]
    } else if let Some(p) = &cfg.primes {
        if p.is_empty() {
            return Err(Error::Invalid("empty prime list".into()));
        }
        p.clone()
    } else {
        let mut t = PRIME_TABLE.to_vec();
        t.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));
        t
    };
    let mut records = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials {
        let trial_seed = splitmix(cfg.seed ^ splitmix(trial as u64));
        records.push(run_trial(map, cfg, strategy, &table, trial, trial_seed)?);
    }
    let n = cfg.n;
    let mut degrees = Vec::with_capacity(n + 1);
    let mut agreement = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let vals: Vec<u64> = records.iter().map(|r| r.degrees[i]).collect();
        let mut best = vals[0];
        let mut best_count = 0;
        for &v in &vals {
            let c = vals.iter().filter(|&&x| x == v).count();
            if c > best_count {
                best = v;
                best_count = c;
            }
        }
        degrees.push(best);
        agreement.push(best_count == vals.len());
    }
    let ratios = degrees
        .windows(2)
        .map(|w| w[1] as f64 / w[0] as f64)
        .collect();
    let roots = degrees
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &d)| (d as f64).powf(1.0 / i as f64))
        .collect();
    Ok(DegreeReport {
        label: map.label.clone(),
        degrees,
        ratios,
        roots,
        agreement,
        provenance: Provenance {
            seed: cfg.seed,
            primes: records.iter().map(|r| r.prime).collect(),
            strategy,
            subspace: cfg.embedding.as_ref().map(|e| e.label.clone()),
            method: METHOD,
        },
        trials: records,
    })
}

fn run_trial(
    map: &MapHandle,
    cfg: &OracleConfig,
    strategy: Strategy,
    table: &[u64],
    trial: usize,
    seed: u64,
) -> Result<TrialRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prime_attempts = if table.len() == 1 { 1 } else { cfg.prime_retries + 1 };
    let line_attempts = if table.len() == 1 {
        (cfg.line_retries + 1) * (cfg.prime_retries + 1)
    } else {
        cfg.line_retries + 1
    };
    let mut tried = 0;
    for pa in 0..prime_attempts {
        let prime = table[(trial + pa * cfg.trials) % table.len()];
        let f = PrimeField::new(prime)?;
        let compiled = map.compile(&f)?;
        for la in 0..line_attempts {
            tried += 1;
            let line = ParamLine::random(&f, map.nvars(), cfg.embedding.as_ref(), &mut rng);
            let res = match strategy {
                Strategy::Sampling => {
                    sampling_degrees(&compiled, &line, cfg.n, map.degree_bound(), &mut rng)
                }
                _ => pullback_degrees(&compiled, &line, cfg.n),
            };
            match res {
                Ok(degrees) => {
                    return Ok(TrialRecord {
                        trial,
                        prime,
                        seed,
                        line_resamples: la,
                        prime_changes: pa,
                        strategy,
                        degrees,
                    })
                }
                Err(Error::Degenerate(_)) | Err(Error::AllZero) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Err(Error::RetryBudget(tried))
}

fn max_degree(t: &[Poly]) -> u64 {
    t.iter().map(|p| p.len().saturating_sub(1)).max().unwrap_or(0) as u64
}

fn pullback_degrees(ch: &CompiledHandle, line: &ParamLine, n: usize) -> Result<Vec<u64>> {
    let mut cur = line.tuple();
    let mut out = vec![1];
    for _ in 0..n {
        cur = ch.pullback(&cur).map_err(|e| match e {
            Error::AllZero => Error::Degenerate("line meets the indeterminacy locus".into()),
            e => e,
        })?;
        out.push(max_degree(&cur));
    }
    Ok(out)
}

/// One pullback on a tuple of univariate polynomials: returns the reduced tuple and
/// its degree.
pub fn pullback_step(map: &MapHandle, current: &[UniPolyF]) -> Result<(Vec<UniPolyF>, u64)> {
    let first = current.first().ok_or(Error::AllZero)?;
    if current.len() != map.nvars() {
        return Err(Error::VariableCount {
            expected: map.nvars(),
            found: current.len(),
        });
    }
    let f = *first.field();
    if let Some(p) = current.iter().map(|c| c.prime()).find(|&p| p != f.modulus()) {
        return Err(Error::PrimeMismatch(f.modulus(), p));
    }
    let ch = map.compile(&f)?;
    let raw: Vec<Poly> = current.iter().map(|c| c.coeffs().to_vec()).collect();
    let next = ch.pullback(&raw)?;
    let d = max_degree(&next);
    Ok((next.into_iter().map(|c| UniPolyF::new(f, c)).collect(), d))
}

struct PointCache {
    log_n: u32,
    step: usize,
    images: Vec<Vec<u64>>,
}

fn degenerate(what: &str) -> Error {
    Error::Degenerate(what.into())
}

fn iterate_point(ch: &CompiledHandle, x: Vec<u64>, steps: usize) -> Option<Vec<u64>> {
    let mut x = x;
    for _ in 0..steps {
        x = ch.eval_point(&x)?;
    }
    Some(x)
}

fn dot(f: &PrimeField, a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

fn sampling_degrees<R: Rng>(
    ch: &CompiledHandle,
    line: &ParamLine,
    n: usize,
    bound1: u64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    let f = *ch.field();
    let p = f.modulus();
    let nv = line.point_a.len();
    let l1: Vec<u64> = (0..nv).map(|_| rng.gen_range(1..p)).collect();
    let l2: Vec<u64> = (0..nv).map(|_| rng.gen_range(1..p)).collect();
    let mut out = vec![1u64];
    let mut cache: Option<PointCache> = None;
    for m in 1..=n {
        let bound = if m == 1 { bound1 } else { out[1].saturating_mul(out[m - 1]) };
        let mut guess = if m <= 2 {
            bound
        } else {
            let r = out[m - 1] as f64 / out[m - 2] as f64;
            ((r * out[m - 1] as f64 * 1.25).ceil() as u64 + 8).min(bound)
        };
        loop {
            let log_n = (2 * guess + 2).next_power_of_two().trailing_zeros();
            if log_n > f.two_adicity() {
                return Err(Error::Invalid(format!(
                    "degree bound {guess} exceeds the transform length of this prime"
                )));
            }
            let size = 1usize << log_n;
            let reuse = matches!(&cache, Some(c) if c.log_n == log_n && c.step <= m);
            if !reuse {
                let w = f.root_of_unity(log_n).expect("checked two-adicity");
                let mut t = 1;
                let mut images = Vec::with_capacity(size);
                for _ in 0..size {
                    images.push(line.at(&f, t));
                    t = f.mul(t, w);
                }
                cache = Some(PointCache {
                    log_n,
                    step: 0,
                    images,
                });
            }
            let c = cache.as_mut().expect("cache populated");
            let extra = m - c.step;
            for x in c.images.iter_mut() {
                *x = iterate_point(ch, std::mem::take(x), extra)
                    .ok_or_else(|| degenerate("sample point hit the indeterminacy locus"))?;
            }
            c.step = m;
            let dens: Vec<u64> = c.images.iter().map(|x| dot(&f, &l2, x)).collect();
            if dens.contains(&0) {
                return Err(degenerate("linear form vanished at a sample point"));
            }
            let inv = f.batch_inv(&dens);
            let mut vals: Vec<u64> = c
                .images
                .iter()
                .zip(&inv)
                .map(|(x, &di)| f.mul(dot(&f, &l1, x), di))
                .collect();
            dense::ntt(&f, &mut vals, true);
            dense::trim(&mut vals);
            let mut modulus = vec![0u64; size + 1];
            modulus[0] = p - 1;
            modulus[size] = 1;
            let rec = dense::rational_reconstruct(&f, &modulus, &vals, size / 2);
            if let Some((num, den)) = rec {
                let d = max_degree(&[num.clone(), den.clone()]);
                if !num.is_empty()
                    && den.len() <= size / 2 + 1
                    && verify(ch, line, m, &num, &den, &l1, &l2, rng)?
                {
                    out.push(d);
                    break;
                }
            }
            if guess >= bound {
                return Err(degenerate("reconstruction failed at the degree bound"));
            }
            guess = (2 * guess).min(bound);
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn verify<R: Rng>(
    ch: &CompiledHandle,
    line: &ParamLine,
    m: usize,
    num: &[u64],
    den: &[u64],
    l1: &[u64],
    l2: &[u64],
    rng: &mut R,
) -> Result<bool> {
    let f = *ch.field();
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 3 {
        attempts += 1;
        if attempts > 20 {
            return Err(degenerate("no usable verification point"));
        }
        let t = rng.gen_range(1..f.modulus());
        let Some(x) = iterate_point(ch, line.at(&f, t), m) else {
            continue;
        };
        let a = dot(&f, l1, &x);
        let b = dot(&f, l2, &x);
        let s = dense::eval(&f, den, t);
        if b == 0 || s == 0 {
            continue;
        }
        // num(t) / den(t) == a / b
        if f.mul(dense::eval(&f, num, t), b) != f.mul(a, s) {
            return Ok(false);
        }
        checked += 1;
    }
    Ok(true)
}

/// Growth-rate estimate read off a degree sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaEstimate {
    pub last_ratio: f64,
    pub root: f64,
    pub converged: bool,
    pub bounded_growth: bool,
}

pub const DEFAULT_RATIO_TOL: f64 = 1e-2;

/// Last ratio `d_N / d_{N-1}` and root `d_N^{1/N}`; `converged` when the last three
/// ratios agree within `rel_tol`.
pub fn delta_estimate(degrees: &[u64], rel_tol: f64) -> Result<DeltaEstimate> {
    let n = degrees.len();
    if n < 3 {
        return Err(Error::Invalid("delta_estimate needs at least three degrees".into()));
    }
    let tail = &degrees[n.saturating_sub(3)..];
    if tail.iter().all(|&d| d == tail[0]) {
        return Ok(DeltaEstimate {
            last_ratio: 1.0,
            root: 1.0,
            converged: true,
            bounded_growth: true,
        });
    }
    let ratios: Vec<f64> = degrees
        .windows(2)
        .map(|w| w[1] as f64 / w[0] as f64)
        .collect();
    let last = *ratios.last().expect("n >= 3");
    let converged = ratios.len() >= 3
        && ratios[ratios.len() - 3..]
            .iter()
            .all(|r| ((r - last) / last).abs() <= rel_tol);
    Ok(DeltaEstimate {
        last_ratio: last,
        root: (degrees[n - 1] as f64).powf(1.0 / (n - 1) as f64),
        converged,
        bounded_growth: false,
    })
}

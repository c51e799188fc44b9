//! Rational self-maps of projective space as tuples of homogeneous polynomials, and
//! composed handles that chain several of them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::dense::Poly;
use crate::poly::mono::{mono_gcd_reduce, substitute, CompiledPoly, PowerCache};
use crate::poly::unipoly::reduce_tuple_raw;
use crate::poly::{Domain, MonoSumPoly, PrimeField};

/// `f = [f_0 : ... : f_k]` on `P^k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalMapSpec {
    k: usize,
    degree: u64,
    components: Vec<MonoSumPoly>,
    label: String,
}

impl RationalMapSpec {
    /// Validates the tuple; a common monomial factor is an error here.
    pub fn new(components: Vec<MonoSumPoly>, label: impl Into<String>) -> Result<Self> {
        let (spec, extracted) = Self::normalized(components, label)?;
        if extracted.iter().any(|&e| e > 0) {
            return Err(Error::Reduction(format!(
                "components share the monomial factor with exponents {extracted:?}"
            )));
        }
        Ok(spec)
    }

    /// Validates the tuple and divides out any common monomial; returns the
    /// extracted exponent vector alongside.
    pub fn normalized(
        components: Vec<MonoSumPoly>,
        label: impl Into<String>,
    ) -> Result<(Self, Vec<u32>)> {
        let n = components.len();
        if n < 2 {
            return Err(Error::Invalid("a self-map of P^k needs k + 1 >= 2 components".into()));
        }
        for c in &components {
            if c.nvars() != n {
                return Err(Error::VariableCount {
                    expected: n,
                    found: c.nvars(),
                });
            }
        }
        let mut domain = Domain::Integer;
        for c in &components {
            domain = domain.join(c.domain())?;
        }
        let components = components
            .into_iter()
            .map(|c| c.to_domain(domain))
            .collect::<Result<Vec<_>>>()?;
        let degs: Vec<Option<u64>> = components.iter().map(|c| c.homogeneous_degree()).collect();
        let mut common = None;
        let mut ok = true;
        for (c, d) in components.iter().zip(&degs) {
            if c.is_zero() {
                continue;
            }
            match (d, common) {
                (None, _) => ok = false,
                (Some(d), None) => common = Some(*d),
                (Some(d), Some(c)) if *d != c => ok = false,
                _ => {}
            }
        }
        if !ok {
            return Err(Error::Inhomogeneous(
                components
                    .iter()
                    .map(|c| c.homogeneous_degree().or(c.total_degree()).map(|d| d as u32))
                    .collect(),
            ));
        }
        let (components, extracted) = mono_gcd_reduce(&components)?;
        let degree = components
            .iter()
            .find_map(|c| c.homogeneous_degree())
            .ok_or(Error::AllZero)?;
        Ok((
            RationalMapSpec {
                k: n - 1,
                degree,
                components,
                label: label.into(),
            },
            extracted,
        ))
    }

    pub fn identity(k: usize, domain: Domain) -> Self {
        let comps = (0..=k).map(|i| MonoSumPoly::var(k + 1, domain, i)).collect();
        RationalMapSpec::new(comps, "identity").expect("identity is valid")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn nvars(&self) -> usize {
        self.k + 1
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn components(&self) -> &[MonoSumPoly] {
        &self.components
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn domain(&self) -> Domain {
        self.components[0].domain()
    }

    /// `self ∘ inner`, with common monomials removed. Non-monomial common factors
    /// are left in place.
    pub fn compose(&self, inner: &RationalMapSpec) -> Result<RationalMapSpec> {
        let raw = self.compose_raw(inner)?;
        let label = format!("{}∘{}", self.label, inner.label);
        Ok(RationalMapSpec::normalized(raw, label)?.0)
    }

    /// `self ∘ inner` before any reduction.
    pub fn compose_raw(&self, inner: &RationalMapSpec) -> Result<Vec<MonoSumPoly>> {
        if inner.nvars() != self.nvars() {
            return Err(Error::VariableCount {
                expected: self.nvars(),
                found: inner.nvars(),
            });
        }
        let dom = self.domain().join(inner.domain())?;
        let args = inner
            .components
            .iter()
            .map(|c| c.to_domain(dom))
            .collect::<Result<Vec<_>>>()?;
        substitute(&self.components, &args)
    }

    /// `true` when the map is `[x_0 : ... : x_k]` up to a common scalar.
    pub fn is_identity(&self) -> bool {
        if self.degree != 1 {
            return false;
        }
        let mut scalar = None;
        for (i, c) in self.components.iter().enumerate() {
            let terms: Vec<_> = c.terms().collect();
            if terms.len() != 1 || terms[0].0 .0[i] != 1 {
                return false;
            }
            match &scalar {
                None => scalar = Some(terms[0].1.clone()),
                Some(s) if s != terms[0].1 => return false,
                _ => {}
            }
        }
        true
    }
}

/// Pointwise shortcuts for stages whose polynomial form is expensive to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FastEval {
    /// `x_ij -> 1 / x_ij`
    EntrywiseInverse,
    /// `x -> x^{-1}` on `q x q` matrices flattened row-major.
    MatrixInverse { q: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    pub spec: RationalMapSpec,
    pub fast: Option<FastEval>,
}

/// A map given as a composition of stages applied in order: `stages[0]` first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapHandle {
    pub label: String,
    pub stages: Vec<Stage>,
}

impl From<RationalMapSpec> for MapHandle {
    fn from(spec: RationalMapSpec) -> Self {
        MapHandle {
            label: spec.label.clone(),
            stages: vec![Stage { spec, fast: None }],
        }
    }
}

impl MapHandle {
    pub fn composed(label: impl Into<String>, stages: Vec<Stage>) -> Result<Self> {
        let first = stages
            .first()
            .ok_or_else(|| Error::Invalid("empty composition".into()))?;
        let n = first.spec.nvars();
        if let Some(s) = stages.iter().find(|s| s.spec.nvars() != n) {
            return Err(Error::VariableCount {
                expected: n,
                found: s.spec.nvars(),
            });
        }
        Ok(MapHandle {
            label: label.into(),
            stages,
        })
    }

    pub fn nvars(&self) -> usize {
        self.stages[0].spec.nvars()
    }

    /// Product of the stage degrees, an upper bound for the degree of the map.
    pub fn degree_bound(&self) -> u64 {
        self.stages.iter().map(|s| s.spec.degree()).product()
    }

    pub fn has_fast_stage(&self) -> bool {
        self.stages.iter().any(|s| s.fast.is_some())
    }

    /// The prime a map with `F_p` coefficients is tied to.
    pub fn fixed_prime(&self) -> Option<u64> {
        self.stages.iter().find_map(|s| match s.spec.domain() {
            Domain::Prime(p) => Some(p),
            Domain::Integer => None,
        })
    }

    pub fn compile(&self, f: &PrimeField) -> Result<CompiledHandle> {
        let stages = self
            .stages
            .iter()
            .map(|s| {
                Ok(CompiledStage {
                    comps: s
                        .spec
                        .components()
                        .iter()
                        .map(|c| c.compile(f))
                        .collect::<Result<Vec<_>>>()?,
                    fast: s.fast,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CompiledHandle { field: *f, stages })
    }
}

struct CompiledStage {
    comps: Vec<CompiledPoly>,
    fast: Option<FastEval>,
}

/// A map handle with coefficients reduced modulo one prime.
pub struct CompiledHandle {
    field: PrimeField,
    stages: Vec<CompiledStage>,
}

impl CompiledHandle {
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// One application of the map at a point; `None` when the point is degenerate
    /// for some stage (all coordinates vanish or a shortcut is undefined).
    pub fn eval_point(&self, x: &[u64]) -> Option<Vec<u64>> {
        let f = &self.field;
        let mut cur = x.to_vec();
        for st in &self.stages {
            cur = match st.fast {
                Some(FastEval::EntrywiseInverse) => {
                    if cur.contains(&0) {
                        return None;
                    }
                    f.batch_inv(&cur)
                }
                Some(FastEval::MatrixInverse { q }) => invert_mod(f, &cur, q)?,
                None => st.comps.iter().map(|c| c.eval(f, &cur)).collect(),
            };
            if cur.iter().all(|&v| v == 0) {
                return None;
            }
        }
        Some(cur)
    }

    /// Substitutes a tuple of univariate polynomials through every stage, removing
    /// the common GCD after each stage.
    pub fn pullback(&self, tuple: &[Poly]) -> Result<Vec<Poly>> {
        let f = &self.field;
        let mut cur = tuple.to_vec();
        for st in &self.stages {
            let mut cache = PowerCache::new(&cur);
            let next: Vec<Poly> = st.comps.iter().map(|c| c.eval_uni(f, &mut cache)).collect();
            cur = reduce_tuple_raw(f, &next)?.0;
        }
        Ok(cur)
    }
}

/// Inverse of a `q x q` matrix over `F_p` by Gauss–Jordan elimination.
fn invert_mod(f: &PrimeField, x: &[u64], q: usize) -> Option<Vec<u64>> {
    let w = 2 * q;
    let mut a = vec![0u64; q * w];
    for i in 0..q {
        a[i * w..i * w + q].copy_from_slice(&x[i * q..(i + 1) * q]);
        a[i * w + q + i] = 1;
    }
    for col in 0..q {
        let piv = (col..q).find(|&r| a[r * w + col] != 0)?;
        if piv != col {
            for j in 0..w {
                a.swap(piv * w + j, col * w + j);
            }
        }
        let inv = f.inv(a[col * w + col]);
        for j in 0..w {
            a[col * w + j] = f.mul(a[col * w + j], inv);
        }
        for r in 0..q {
            if r == col || a[r * w + col] == 0 {
                continue;
            }
            let m = a[r * w + col];
            for j in 0..w {
                let v = f.mul(m, a[col * w + j]);
                a[r * w + j] = f.sub(a[r * w + j], v);
            }
        }
    }
    let mut out = Vec::with_capacity(q * q);
    for i in 0..q {
        out.extend_from_slice(&a[i * w + q..i * w + w]);
    }
    Some(out)
}

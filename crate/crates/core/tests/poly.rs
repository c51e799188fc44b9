use dyndeg::matinv::build_j;
use dyndeg::poly::{
    mono_gcd_reduce, substitute, tuple_reduce_univariate, uni_gcd, Domain, MonoSumPoly,
    PrimeField, Term, UniPolyF,
};
use dyndeg::Error;
use num_bigint::BigInt;
use proptest::prelude::*;

const P: u64 = 1_000_000_007;

fn poly(nv: usize, dom: Domain, terms: &[(&[u32], i64)]) -> MonoSumPoly {
    let terms: Vec<Term> = terms
        .iter()
        .map(|(e, c)| Term {
            exponents: e.to_vec(),
            coeff: BigInt::from(*c),
        })
        .collect();
    MonoSumPoly::from_terms(nv, dom, &terms).unwrap()
}

fn z(nv: usize, terms: &[(&[u32], i64)]) -> MonoSumPoly {
    poly(nv, Domain::Integer, terms)
}

fn uni(c: &[i64]) -> UniPolyF {
    UniPolyF::from_i64(PrimeField::new(P).unwrap(), c)
}

#[test]
fn identity_substitution_returns_arguments() {
    let id: Vec<MonoSumPoly> = (0..3).map(|i| MonoSumPoly::var(3, Domain::Integer, i)).collect();
    let args = vec![
        z(2, &[(&[2, 0], 1), (&[1, 1], -3)]),
        z(2, &[(&[0, 2], 5)]),
        z(2, &[(&[1, 1], 1)]),
    ];
    assert_eq!(substitute(&id, &args).unwrap(), args);
}

#[test]
fn worked_component_on_a_line_has_degree_five() {
    let c = z(3, &[(&[0, 2, 3], 1)]);
    // x_i = a_i + b_i t as homogeneous forms in (s, t)
    let line = vec![
        z(2, &[(&[1, 0], 3), (&[0, 1], 1)]),
        z(2, &[(&[1, 0], 1), (&[0, 1], 2)]),
        z(2, &[(&[1, 0], 5), (&[0, 1], 7)]),
    ];
    let out = substitute(&[c], &line).unwrap();
    assert_eq!(out[0].homogeneous_degree(), Some(5));
}

#[test]
fn j_into_itself_before_reduction() {
    let j = build_j(2).unwrap().spec;
    let raw = substitute(j.components(), j.components()).unwrap();
    for c in &raw {
        assert_eq!(c.len(), 1);
        assert_eq!(c.homogeneous_degree(), Some(9));
    }
    let (red, extracted) = mono_gcd_reduce(&raw).unwrap();
    assert_eq!(extracted, vec![2, 2, 2, 2]);
    for (i, c) in red.iter().enumerate() {
        assert_eq!(c, &MonoSumPoly::var(4, Domain::Integer, i));
    }
}

#[test]
fn substitute_errors() {
    let c = vec![z(3, &[(&[1, 0, 0], 1)])];
    let two = vec![z(2, &[(&[1, 0], 1)]), z(2, &[(&[0, 1], 1)])];
    assert!(matches!(substitute(&c, &two), Err(Error::VariableCount { .. })));
    let mixed = vec![
        z(2, &[(&[1, 0], 1)]),
        poly(2, Domain::Prime(P), &[(&[0, 1], 1)]),
        z(2, &[(&[0, 1], 1)]),
    ];
    assert!(matches!(substitute(&c, &mixed), Err(Error::MixedDomains(_))));
}

#[test]
fn gcd_reduce_examples() {
    let t = vec![z(3, &[(&[2, 1, 0], 1)]), z(3, &[(&[2, 0, 1], 1)])];
    let (red, m) = mono_gcd_reduce(&t).unwrap();
    assert_eq!(m, vec![2, 0, 0]);
    assert_eq!(red, vec![z(3, &[(&[0, 1, 0], 1)]), z(3, &[(&[0, 0, 1], 1)])]);

    let coprime = vec![z(2, &[(&[1, 0], 1)]), z(2, &[(&[0, 1], 1)])];
    let (same, m) = mono_gcd_reduce(&coprime).unwrap();
    assert_eq!(same, coprime);
    assert_eq!(m, vec![0, 0]);

    let zero = vec![MonoSumPoly::zero(2, Domain::Integer); 2];
    assert_eq!(mono_gcd_reduce(&zero), Err(Error::AllZero));
}

#[test]
fn uni_gcd_examples() {
    let g = uni_gcd(&uni(&[-1, 0, 1]), &uni(&[-1, 1])).unwrap();
    assert_eq!(g, uni(&[-1, 1]));
    let g = uni_gcd(&uni(&[4, 0, 2]), &UniPolyF::zero(PrimeField::new(P).unwrap())).unwrap();
    assert_eq!(g, uni(&[2, 0, 1]));
    // (t^2 + 1)(t + 3) and (t^2 + t + 1)(t - 5) share nothing
    let a = uni(&[1, 0, 1]).mul(&uni(&[3, 1])).unwrap();
    let b = uni(&[1, 1, 1]).mul(&uni(&[-5, 1])).unwrap();
    assert_eq!(uni_gcd(&a, &b).unwrap(), uni(&[1]));
    let other = UniPolyF::from_i64(PrimeField::new(998_244_353).unwrap(), &[1, 1]);
    assert!(matches!(uni_gcd(&a, &other), Err(Error::PrimeMismatch(..))));
}

#[test]
fn tuple_reduction_examples() {
    let c = uni(&[-1, 1]);
    let p = uni(&[1, 0, 1]);
    let q = uni(&[2, 1]);
    let (red, d) = tuple_reduce_univariate(&[c.mul(&p).unwrap(), c.mul(&q).unwrap()]).unwrap();
    assert_eq!(d, 1);
    assert_eq!(red, vec![p.clone(), q.clone()]);
    let (same, d) = tuple_reduce_univariate(&[p.clone(), q.clone()]).unwrap();
    assert_eq!(d, 0);
    assert_eq!(same, vec![p, q]);
    let zero = UniPolyF::zero(PrimeField::new(P).unwrap());
    assert_eq!(tuple_reduce_univariate(&[zero.clone(), zero]), Err(Error::AllZero));
}

#[test]
fn serialization_is_canonical() {
    let p = z(3, &[(&[0, 0, 1], -3), (&[0, 2, 0], 1), (&[1, 1, 0], 2)]);
    let json = serde_json::to_string(&p).unwrap();
    assert_eq!(
        json,
        r#"[{"exponents":[1,1,0],"coeff":"2"},{"exponents":[0,2,0],"coeff":"1"},{"exponents":[0,0,1],"coeff":"-3"}]"#
    );
}

fn sparse_homogeneous(nv: usize, deg: u32) -> impl Strategy<Value = MonoSumPoly> {
    proptest::collection::vec((proptest::collection::vec(0u32..=deg, nv - 1), -5i64..=5), 1..5)
        .prop_map(move |terms| {
            let mut acc = MonoSumPoly::zero(nv, Domain::Integer);
            for (head, c) in terms {
                let mut e: Vec<u32> = Vec::with_capacity(nv);
                let mut left = deg;
                for h in head {
                    let take = h.min(left);
                    e.push(take);
                    left -= take;
                }
                e.push(left);
                let t = MonoSumPoly::monomial(nv, Domain::Integer, e, BigInt::from(c));
                acc = acc.add(&t).unwrap();
            }
            if acc.is_zero() {
                let mut e = vec![0; nv];
                e[0] = deg;
                acc = MonoSumPoly::monomial(nv, Domain::Integer, e, BigInt::from(1));
            }
            acc
        })
}

fn nonzero_uni() -> impl Strategy<Value = UniPolyF> {
    proptest::collection::vec(-50i64..=50, 1..8)
        .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
        .prop_map(|c| uni(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn substitution_multiplies_degrees(
        c in sparse_homogeneous(3, 3),
        a0 in sparse_homogeneous(2, 2),
        a1 in sparse_homogeneous(2, 2),
        a2 in sparse_homogeneous(2, 2),
    ) {
        let out = substitute(&[c], &[a0, a1, a2]).unwrap();
        if !out[0].is_zero() {
            prop_assert_eq!(out[0].homogeneous_degree(), Some(6));
        }
    }

    #[test]
    fn gcd_reduce_is_idempotent(a in sparse_homogeneous(3, 4), b in sparse_homogeneous(3, 4), s in 0u32..3) {
        let shift = vec![s, 1, 0];
        let t = vec![a.shift(&shift), b.shift(&shift)];
        let (once, m) = mono_gcd_reduce(&t).unwrap();
        prop_assert!(m[0] >= s && m[1] >= 1);
        let (twice, m2) = mono_gcd_reduce(&once).unwrap();
        prop_assert_eq!(m2, vec![0, 0, 0]);
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn gcd_divides_and_is_symmetric(a in nonzero_uni(), b in nonzero_uni(), c in nonzero_uni()) {
        let (ac, bc) = (a.mul(&c).unwrap(), b.mul(&c).unwrap());
        let g = uni_gcd(&ac, &bc).unwrap();
        prop_assert!(ac.divrem(&g).unwrap().1.is_zero());
        prop_assert!(bc.divrem(&g).unwrap().1.is_zero());
        prop_assert_eq!(&g, &uni_gcd(&bc, &ac).unwrap());
        prop_assert!(g.degree() >= c.degree());
    }

    #[test]
    fn reduction_preserves_degree_bookkeeping(a in nonzero_uni(), b in nonzero_uni(), c in nonzero_uni()) {
        let t = vec![a.mul(&c).unwrap(), b.mul(&c).unwrap()];
        let (red, d) = tuple_reduce_univariate(&t).unwrap();
        for (orig, r) in t.iter().zip(&red) {
            prop_assert_eq!(orig.degree().unwrap(), r.degree().unwrap() + d);
        }
    }
}

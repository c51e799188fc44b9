//! Polynomial arithmetic over `Z` and `F_p`: sparse multivariate sums of monomials
//! and dense univariate polynomials.

pub mod dense;
pub mod field;
pub mod mono;
pub mod unipoly;

pub use field::{PrimeField, PRIME_TABLE};
pub use mono::{mono_gcd_reduce, substitute, Domain, MonoSumPoly, Term};
pub use unipoly::{tuple_reduce_univariate, uni_gcd, UniPolyF};

//! Exact integer linear algebra: characteristic polynomials, powers, exterior
//! powers and certified spectral radii.

mod complexroots;
mod dyadic;
mod intpoly;
mod matrix;
mod realroots;
mod spectral;

pub use complexroots::{all_roots, sorted_roots, ApproxRoot};
pub use dyadic::Dyadic;
pub use intpoly::IntPoly;
pub use matrix::{lex_subsets, IntMatrix};
pub use realroots::{
    cyclotomic, integer_roots, is_cyclotomic_product, isolate_real_roots, largest_real_root,
    refine, root_bound, tol_bits, RootInterval, SturmChain,
};
pub use spectral::{
    power_sums, radius_at_most_one, second_compound_charpoly, spectral_radius,
    spectral_radius_of_charpoly, Certificate, SpectralResult,
};

/// `det(xI - m)`.
pub fn charpoly(m: &IntMatrix) -> IntPoly {
    m.charpoly()
}

pub fn mat_pow(m: &IntMatrix, n: u64) -> IntMatrix {
    m.pow(n)
}

pub fn exterior_power(m: &IntMatrix, p: usize) -> crate::Result<IntMatrix> {
    m.exterior_power(p)
}

pub fn abs_entries(m: &IntMatrix) -> IntMatrix {
    m.abs_entries()
}

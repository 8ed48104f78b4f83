//! Gröbner bases over `k[t, x_1, …, x_n]` with `t` an ordinary variable.

pub(crate) mod groebner;
pub mod ops;
pub mod order;
mod parse;
pub mod poly;
pub mod radical;

pub use ops::{
    divide_exact, eliminate, groebner_basis, ideal_membership, poly_gcd, poly_lcm, radical_membership, saturate,
    GroebnerBasis, Ideal,
};
pub use order::MonomialOrder;
pub use poly::{format_poly, Monomial, MultiPoly, PolyRing};
pub use radical::{radical, squarefree_part, verify_radical};

//! Exact scalars and canonical sparse multivariate polynomials.

mod field;
mod poly;
mod text;

pub use field::{is_prime_u64, mul_mod, pow_mod, FieldTag, Scalar};
pub use poly::{elementary_symmetric, Monomial, Polynomial, Variable};
pub use text::{parse_polynomial, parse_variable};

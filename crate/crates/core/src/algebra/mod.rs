//! Finite fields, polynomials, rational functions, Laurent series and
//! linear algebra over GF(q).

pub mod additive;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod series;

pub use field::{is_prime, prime_power, Elem, Field, FieldCtx, MAX_ORDER};
pub use matrix::Matrix;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use series::Series;

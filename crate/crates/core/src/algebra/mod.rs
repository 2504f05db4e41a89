//! Exact arithmetic: rationals, univariate polynomials, number fields and
//! Laurent polynomials with matrices over them.

pub mod factor;
pub mod laurent;
pub mod linsolve;
pub mod matrix;
pub mod number_field;
pub mod rational;
pub mod unipoly;

pub use factor::{factor_rational, is_irreducible};
pub use laurent::{exponent, Exponent, LaurentPoly};
pub use linsolve::{sparse_nullity, sparse_rank, Echelon, SparseRow};
pub use matrix::{determinant, fraction_field_rank, Cancel, PolyMatrix};
pub use number_field::{AlgebraicScalar, NfElem, NumberField};
pub use rational::Rational;
pub use unipoly::{univariate_gcd, UniPoly};

//! Exact arithmetic substrate: rationals, polynomials in `x` and `t`,
//! number fields, resultants, factorization and matrix kernels.

pub mod bipoly;
pub mod factor;
pub mod function_field;
pub mod matrix;
pub mod number_field;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod resultant;
pub mod scalar;

pub use bipoly::BiPoly;
pub use factor::{factor_rationals, Factorization};
pub use function_field::{irreducible_over_function_field, FunctionFieldSplit};
pub use matrix::{char_poly, generalized_eigenspace, nilpotency_test, Matrix};
pub use number_field::{NumberField, NumberFieldElement};
pub use parse::{parse_bipoly, parse_rational, parse_unipoly, ParseError};
pub use poly::UniPoly;
pub use ratfunc::RationalFunction;
pub use resultant::{resultant, resultant_t};
pub use scalar::{int, rat, Field, Rational, Ring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division is not exact")]
    InexactDivision,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial must be monic")]
    NonMonic,
    #[error("polynomial is not irreducible over the rationals")]
    NotIrreducible,
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix shapes do not match")]
    ShapeMismatch,
    #[error("interpolation nodes must be distinct")]
    RepeatedNode,
    #[error("factor search limited to degree {limit}, got a factor candidate space of degree {degree}")]
    DegreeLimit { degree: usize, limit: usize },
    #[error("integer too large for exhaustive divisor search: {0}")]
    IntegerTooLarge(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

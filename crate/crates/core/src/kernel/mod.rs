//! Exact coefficient arithmetic: finite and rational fields, polynomials,
//! exact Laurent polynomials and precision-tracked Laurent series.

pub mod field;
pub mod laurent_poly;
pub mod poly;
pub mod series;
pub mod wire;

pub use field::{prime_power, Fe, Field};
pub use laurent_poly::LaurentPoly;
pub use poly::Poly;
pub use series::{LaurentSeries, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("invalid extension modulus: {0}")]
    BadModulus(String),
    #[error("field too large to enumerate")]
    FieldTooLarge,
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
    #[error("cannot parse polynomial {0:?}")]
    BadPolynomial(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("series variables differ: {0} vs {1}")]
    VariableMismatch(String, String),
    #[error("coefficient of t^{exponent} lies at or beyond the precision t^{prec}")]
    BeyondPrecision { exponent: i64, prec: i64 },
    #[error("series is zero to its precision")]
    ZeroSeries,
    #[error("precision window is empty")]
    EmptyPrecisionWindow,
    #[error("malformed input: {0}")]
    Malformed(String),
}

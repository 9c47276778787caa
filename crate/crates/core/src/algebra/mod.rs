//! Exact arithmetic: finite fields, 2×2 matrices, rationals.

mod field;
mod mat2;
pub mod numtheory;
mod ratio;
mod zp_poly;

pub use field::{Field, FqElem};
pub use mat2::Mat2;
pub use ratio::{cmp_exact, BigRatio};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1, got {0}")]
    BadDegree(u32),
    #[error("field of order {p}^{r} is too large")]
    FieldTooLarge { p: u64, r: u32 },
    #[error("value {value} is not an element of F_{q}")]
    OutOfRange { value: u32, q: u32 },
    #[error("coefficient vector does not describe a field element")]
    BadCoefficients,
    #[error("operands live in different fields (F_{expected} vs F_{found})")]
    FieldMismatch { expected: u32, found: u32 },
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("matrix is singular")]
    Singular,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {0:?} as a rational")]
    BadRational(String),
}

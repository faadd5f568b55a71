//! Exact arithmetic: coefficient fields, dense polynomials in `T`, rational
//! functions, and a reader for polynomial expressions.

mod descriptor;
mod ext;
mod field;
mod irreducible;
pub(crate) mod modgcd;
mod parse;
mod poly;
mod prime;
mod ratfunc;
mod rational;

pub use descriptor::{field_arith, ArithOp, ElemValue, FieldDescriptor, FieldElem};
pub use ext::ExtField;
pub use field::Field;
pub use irreducible::{all_monic, enumerate_irreducibles, is_irreducible, necklace_count, DEFAULT_ENUMERATION_GUARD};
pub use parse::{parse_poly, parse_ratfunc};
pub use poly::{karatsuba, poly_arith, Poly, PolyOp, PolyResult};
pub use prime::{is_prime_trial, PrimeField};
pub use ratfunc::{FunctionField, RatFunc};
pub use rational::Rationals;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("operands belong to different fields")]
    DescriptorMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("reduction modulo the zero polynomial")]
    ZeroModulus,
    #[error("not a perfect square up to a unit")]
    NotASquare,
    #[error("zero input")]
    ZeroInput,
    #[error("derivative vanishes identically; squarefreeness undecided by gcd(f, f')")]
    NotSquarefreeDecidable,
    #[error("{p}^{n} exceeds the enumeration guard")]
    RangeTooLarge { p: u64, n: usize },
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("coefficient {0} is not in the field")]
    CoefficientNotInField(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("unknown field descriptor `{0}`")]
    BadDescriptor(String),
}

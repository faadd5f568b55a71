use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Field, FunctionField, Poly, Rationals};
use crate::curve::CurveBase;

use super::EdsError;

/// Base fields whose integral model has a denominator ring: Z for Q and
/// k[T] for k(T). Provides the `x = A/D²` split and gcd arithmetic on `D`.
pub trait EdsBase: CurveBase {
    type Num: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync;
    type Denom: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync;
    /// What `denom_size` measures.
    const SIZE_UNIT: &'static str;

    /// `x = A / D²` with `gcd(A, D) = 1` and `D` normalized (positive or monic).
    fn split_x(&self, x: &Self::Elem) -> Result<(Self::Num, Self::Denom), EdsError>;

    /// Normalized gcd.
    fn denom_gcd(&self, a: &Self::Denom, b: &Self::Denom) -> Self::Denom;
    fn denom_divides(&self, a: &Self::Denom, b: &Self::Denom) -> bool;
    /// Exact quotient `b / a` for `a | b`.
    fn denom_quotient(&self, b: &Self::Denom, a: &Self::Denom) -> Self::Denom;
    fn denom_is_unit(&self, d: &Self::Denom) -> bool;
    /// Degree of a polynomial, natural log of an integer.
    fn denom_size(&self, d: &Self::Denom) -> f64;
}

/// Natural logarithm of a positive integer of any size.
pub fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return num_traits::ToPrimitive::to_f64(n).map(f64::ln).unwrap_or(f64::NAN);
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    num_traits::ToPrimitive::to_f64(&top).unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

impl EdsBase for Rationals {
    type Num = BigInt;
    type Denom = BigInt;
    const SIZE_UNIT: &'static str = "ln";

    fn split_x(&self, x: &Self::Elem) -> Result<(BigInt, BigInt), EdsError> {
        let den = x.denom();
        let root = den.sqrt();
        if &(&root * &root) != den {
            return Err(EdsError::NonSquareDenominator(den.to_string()));
        }
        Ok((x.numer().clone(), root))
    }

    fn denom_gcd(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a.gcd(b)
    }

    fn denom_divides(&self, a: &BigInt, b: &BigInt) -> bool {
        if a.is_zero() {
            return b.is_zero();
        }
        (b % a).is_zero()
    }

    fn denom_quotient(&self, b: &BigInt, a: &BigInt) -> BigInt {
        b / a
    }

    fn denom_is_unit(&self, d: &BigInt) -> bool {
        d.abs().is_one()
    }

    fn denom_size(&self, d: &BigInt) -> f64 {
        ln_big(&d.abs())
    }
}

impl<F: Field> EdsBase for FunctionField<F> {
    type Num = Poly<F>;
    type Denom = Poly<F>;
    const SIZE_UNIT: &'static str = "degree";

    fn split_x(&self, x: &Self::Elem) -> Result<(Poly<F>, Poly<F>), EdsError> {
        // The reduced denominator is already monic.
        let d = x.den().sqrt().map_err(|_| EdsError::NonSquareDenominator(x.den().to_string()))?;
        Ok((x.num().clone(), d))
    }

    fn denom_gcd(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        a.gcd(b).expect("denominators are nonzero")
    }

    fn denom_divides(&self, a: &Poly<F>, b: &Poly<F>) -> bool {
        a.divides(b)
    }

    fn denom_quotient(&self, b: &Poly<F>, a: &Poly<F>) -> Poly<F> {
        b.exact_div(a).expect("nonzero divisor")
    }

    fn denom_is_unit(&self, d: &Poly<F>) -> bool {
        d.is_constant() && !d.is_zero()
    }

    fn denom_size(&self, d: &Poly<F>) -> f64 {
        d.deg_or_zero() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_of_huge_integers() {
        let n = BigInt::from(10).pow(400);
        assert!((ln_big(&n) - 400.0 * 10f64.ln()).abs() < 1e-9);
        assert!((ln_big(&BigInt::from(8)) - 8f64.ln()).abs() < 1e-12);
    }
}

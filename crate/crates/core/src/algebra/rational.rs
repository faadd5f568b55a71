use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::Field;
use super::modgcd;
use super::poly::Poly;

/// `num / den` in lowest terms for a positive `den`.
fn reduced(num: BigInt, den: BigInt) -> BigRational {
    if num.is_zero() {
        return BigRational::zero();
    }
    let g = modgcd::int_gcd(&num, &den);
    if g.is_one() {
        BigRational::new_raw(num, den)
    } else {
        BigRational::new_raw(num / &g, den / g)
    }
}

/// The field of rational numbers with arbitrary-precision coefficients.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if a.denom().is_one() && b.denom().is_one() {
            return BigRational::from_integer(a.numer() + b.numer());
        }
        if a.denom() == b.denom() {
            return reduced(a.numer() + b.numer(), a.denom().clone());
        }
        reduced(a.numer() * b.denom() + b.numer() * a.denom(), a.denom() * b.denom())
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.add(a, &-b)
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if a.denom().is_one() && b.denom().is_one() {
            return BigRational::from_integer(a.numer() * b.numer());
        }
        let g1 = modgcd::int_gcd(a.numer(), b.denom());
        let g2 = modgcd::int_gcd(b.numer(), a.denom());
        BigRational::new_raw(a.numer() / &g1 * (b.numer() / &g2), a.denom() / &g2 * (b.denom() / &g1))
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<BigRational> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn split_sign(&self, a: &BigRational) -> (bool, BigRational) {
        if a.is_negative() {
            (true, -a)
        } else {
            (false, a.clone())
        }
    }

    fn is_atomic(&self, a: &BigRational) -> bool {
        !a.is_negative()
    }

    fn write_elem(&self, a: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if a.denom().is_one() {
            write!(f, "{}", a.numer())
        } else {
            write!(f, "{}/{}", a.numer(), a.denom())
        }
    }

    fn poly_mul(&self, f: &[BigRational], g: &[BigRational]) -> Vec<BigRational> {
        modgcd::rational_poly_mul(f, g)
    }

    fn poly_gcd(&self, f: &Poly<Self>, g: &Poly<Self>) -> Poly<Self> {
        modgcd::rational_gcd(f, g)
    }

    fn poly_exact_div(&self, f: &Poly<Self>, g: &Poly<Self>) -> Poly<Self> {
        modgcd::rational_exact_div(f, g)
    }
}

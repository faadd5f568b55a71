use std::fmt;

use num_bigint::BigInt;

use super::poly::{self, Poly};

/// A field context. Elements are plain values; every operation goes through
/// the context so that runtime parameters (the prime, the modulus) live in
/// one place.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + Sized {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|b_inv| self.mul(a, &b_inv))
    }

    fn from_i64(&self, n: i64) -> Self::Elem;

    /// Image of the fraction `num/den`; `None` when `den` maps to zero.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Self::Elem>;

    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Splits off a printable sign: `(true, -a)` when `a` prints naturally
    /// as a negative number.
    fn split_sign(&self, a: &Self::Elem) -> (bool, Self::Elem) {
        (false, a.clone())
    }

    /// Whether the printed form can be used as a factor without parentheses.
    fn is_atomic(&self, _a: &Self::Elem) -> bool {
        true
    }

    fn write_elem(&self, a: &Self::Elem, f: &mut fmt::Formatter<'_>) -> fmt::Result;

    fn elem_to_string(&self, a: &Self::Elem) -> String {
        struct Show<'a, F: Field>(&'a F, &'a F::Elem);
        impl<F: Field> fmt::Display for Show<'_, F> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write_elem(self.1, f)
            }
        }
        Show(self, a).to_string()
    }

    /// Product of two coefficient slices (ascending powers, no trailing zeros).
    fn poly_mul(&self, f: &[Self::Elem], g: &[Self::Elem]) -> Vec<Self::Elem> {
        poly::karatsuba(self, f, g)
    }

    /// Monic gcd. The default is the Euclidean algorithm.
    fn poly_gcd(&self, f: &Poly<Self>, g: &Poly<Self>) -> Poly<Self> {
        poly::euclid_gcd(f, g)
    }

    /// Quotient of an exact division. Callers guarantee `g | f`.
    fn poly_exact_div(&self, f: &Poly<Self>, g: &Poly<Self>) -> Poly<Self> {
        let (q, r) = f.divrem(g).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }
}

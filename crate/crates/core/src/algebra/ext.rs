use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::field::Field;
use super::irreducible::is_irreducible;
use super::poly::Poly;
use super::prime::PrimeField;
use super::AlgebraError;

/// The residue field F_p[T]/(modulus) for a monic irreducible modulus.
///
/// Elements are reduced residues of degree below `deg(modulus)`.
#[derive(Clone, PartialEq, Debug)]
pub struct ExtField {
    base: PrimeField,
    modulus: Arc<Poly<PrimeField>>,
}

impl ExtField {
    pub fn new(modulus: Poly<PrimeField>) -> Result<Self, AlgebraError> {
        if !modulus.is_monic() || modulus.degree().unwrap_or(0) < 1 {
            return Err(AlgebraError::NotMonic);
        }
        if !is_irreducible(&modulus) {
            return Err(AlgebraError::NotIrreducible);
        }
        Ok(Self::new_unchecked(modulus))
    }

    pub(crate) fn new_unchecked(modulus: Poly<PrimeField>) -> Self {
        Self { base: *modulus.field(), modulus: Arc::new(modulus) }
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn modulus(&self) -> &Poly<PrimeField> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().expect("nonconstant modulus")
    }

    /// `p^deg`, the field size.
    pub fn order(&self) -> u128 {
        (self.base.modulus() as u128).pow(self.degree() as u32)
    }

    /// Reduces an arbitrary polynomial into the field.
    pub fn reduce(&self, f: &Poly<PrimeField>) -> Poly<PrimeField> {
        f.rem(&self.modulus).expect("nonzero modulus")
    }

    pub fn embed(&self, c: u64) -> Poly<PrimeField> {
        Poly::constant(self.base, c)
    }
}

impl Field for ExtField {
    type Elem = Poly<PrimeField>;

    fn zero(&self) -> Self::Elem {
        Poly::zero(self.base)
    }

    fn one(&self) -> Self::Elem {
        Poly::one(self.base)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        a.is_one()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a + b
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a - b
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        -a
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.reduce(&(a * b))
    }

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.is_zero() {
            return None;
        }
        let (g, s, _) = a.ext_gcd(&self.modulus).ok()?;
        debug_assert!(g.is_one());
        Some(self.reduce(&s))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.embed(self.base.from_i64(n))
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Self::Elem> {
        self.base.from_ratio(num, den).map(|c| self.embed(c))
    }

    fn characteristic(&self) -> u64 {
        self.base.modulus()
    }

    fn is_atomic(&self, a: &Self::Elem) -> bool {
        a.is_constant()
    }

    fn write_elem(&self, a: &Self::Elem, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{a}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5(coeffs: &[i64]) -> Poly<PrimeField> {
        Poly::from_i64s(PrimeField::new(5).unwrap(), coeffs)
    }

    #[test]
    fn square_of_generator_reduces() {
        let k = ExtField::new(f5(&[2, 0, 1])).unwrap();
        let t = f5(&[0, 1]);
        assert_eq!(k.mul(&t, &t), f5(&[3]));
    }

    #[test]
    fn inverses_multiply_to_one() {
        let k = ExtField::new(f5(&[2, 0, 1])).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let x = f5(&[a, b]);
                if x.is_zero() {
                    assert!(k.inv(&x).is_none());
                    continue;
                }
                assert!(k.mul(&x, &k.inv(&x).unwrap()).is_one());
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert_eq!(ExtField::new(f5(&[1, 0, 1])), Err(AlgebraError::NotIrreducible));
        assert_eq!(ExtField::new(f5(&[1, 0, 2])), Err(AlgebraError::NotMonic));
    }
}

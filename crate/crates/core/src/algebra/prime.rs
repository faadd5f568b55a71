use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::field::Field;
use super::AlgebraError;

/// The prime field F_p with residues stored as canonical `u64` in `0..p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Checks primality by trial division.
    pub fn new(p: u64) -> Result<Self, AlgebraError> {
        if !is_prime_trial(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Self { p })
    }

    /// Skips the primality check; for callers that already proved `p` prime.
    pub(crate) fn new_unchecked(p: u64) -> Self {
        debug_assert!(p >= 2);
        Self { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn reduce_big(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }
}

pub fn is_prime_trial(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        if s >= self.p as u128 {
            (s - self.p as u128) as u64
        } else {
            s as u64
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulmod(*a, *b)
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.p as i128) as u64)
    }

    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<u64> {
        let d = self.reduce_big(den);
        let d_inv = self.inv(&d)?;
        Some(self.mulmod(self.reduce_big(num), d_inv))
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn write_elem(&self, a: &u64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{a}")
    }

    fn poly_mul(&self, f: &[u64], g: &[u64]) -> Vec<u64> {
        if f.is_empty() || g.is_empty() {
            return Vec::new();
        }
        if f.len().min(g.len()) >= super::poly::KARATSUBA_THRESHOLD {
            return super::poly::karatsuba(self, f, g);
        }
        // Accumulate unreduced products while they fit in u128.
        let p = self.p as u128;
        let sq = (p - 1) * (p - 1);
        let budget = (u128::MAX / sq.max(1)).min(u64::MAX as u128) as usize;
        let mut acc = vec![0u128; f.len() + g.len() - 1];
        let mut pending = 0usize;
        for (i, a) in f.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in g.iter().enumerate() {
                acc[i + j] += *a as u128 * *b as u128;
            }
            pending += 1;
            if pending + 1 >= budget {
                acc.iter_mut().for_each(|c| *c %= p);
                pending = 1;
            }
        }
        acc.into_iter().map(|c| (c % p) as u64).collect()
    }
}

impl PrimeField {
    /// Whether `a` is a nonzero square, by exhaustive search over the field.
    /// Only used for small primes.
    pub fn is_square_exhaustive(&self, a: u64) -> bool {
        (1..self.p).any(|y| self.mulmod(y, y) == a)
    }

    /// Legendre symbol of a residue by Euler's criterion.
    pub fn legendre(&self, a: u64) -> i8 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.p == 2 {
            return 1;
        }
        if self.pow(&a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn to_signed(&self, a: u64) -> BigInt {
        if a > self.p / 2 {
            -BigInt::from(self.p - a)
        } else {
            BigInt::from(a)
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(PrimeField::new(5).is_ok());
        assert!(PrimeField::new(7919).is_ok());
        assert!(matches!(PrimeField::new(1), Err(AlgebraError::NotPrime(1))));
        assert!(PrimeField::new(91).is_err());
    }

    #[test]
    fn inverse_matches_exhaustive_search() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.div(&1, &4), Some(4));
        for a in 1..5u64 {
            let inv = f.inv(&a).unwrap();
            let brute = (1..5u64).find(|b| (a * b) % 5 == 1).unwrap();
            assert_eq!(inv, brute);
        }
        assert_eq!(f.inv(&0), None);
    }

    #[test]
    fn fractions_use_modular_inverse() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.from_ratio(&1.into(), &2.into()), Some(3));
        assert_eq!(f.from_ratio(&1.into(), &10.into()), None);
        assert_eq!(f.from_i64(-1), 4);
    }

    #[test]
    fn euler_criterion_agrees_with_squares() {
        for p in [5u64, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                let expect = if f.is_square_exhaustive(a) { 1 } else { -1 };
                assert_eq!(f.legendre(a), expect, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn delayed_reduction_product_matches_naive() {
        let f = PrimeField::new_unchecked(4611686018427387847);
        let a: Vec<u64> = (1..40).map(|i| f.elem(i * 1_000_000_007 - 3)).collect();
        let b: Vec<u64> = (1..30).map(|i| f.elem(-i * 998_244_353)).collect();
        let fast = f.poly_mul(&a, &b);
        let mut naive = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                naive[i + j] = f.add(&naive[i + j], &f.mul(x, y));
            }
        }
        assert_eq!(fast, naive);
    }
}

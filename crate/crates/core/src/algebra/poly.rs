use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use super::AlgebraError;

/// Operand size above which multiplication switches to Karatsuba.
pub(crate) const KARATSUBA_THRESHOLD: usize = 64;

/// Dense univariate polynomial in `T` over a field.
///
/// `coeffs[i]` is the coefficient of `T^i`. There is never a trailing zero,
/// so the zero polynomial has no coefficients and no degree.
#[derive(Clone)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    DivRem,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PolyResult<F: Field> {
    Single(Poly<F>),
    Pair(Poly<F>, Poly<F>),
}

/// Checked polynomial arithmetic over a shared field.
pub fn poly_arith<F: Field>(f: &Poly<F>, g: &Poly<F>, op: PolyOp) -> Result<PolyResult<F>, AlgebraError> {
    f.check_same(g)?;
    Ok(match op {
        PolyOp::Add => PolyResult::Single(f + g),
        PolyOp::Sub => PolyResult::Single(f - g),
        PolyOp::Mul => PolyResult::Single(f * g),
        PolyOp::DivRem => {
            let (q, r) = f.divrem(g)?;
            PolyResult::Pair(q, r)
        }
    })
}

impl<F: Field> Poly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn zero(field: F) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn one(field: F) -> Self {
        let one = field.one();
        Self::new(field, vec![one])
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// The indeterminate `T`.
    pub fn var(field: F) -> Self {
        Self::monomial(field.clone(), field.one(), 1)
    }

    pub fn monomial(field: F, c: F::Elem, k: usize) -> Self {
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    pub fn from_i64s(field: F, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| field.from_i64(c)).collect();
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; for reporting only.
    pub fn deg_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| self.field.is_one(c))
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(AlgebraError::DescriptorMismatch)
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(self.field.clone());
        }
        let coeffs = self.coeffs.iter().map(|a| self.field.mul(a, c)).collect();
        Self::new(self.field.clone(), coeffs)
    }

    /// Scales to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) if self.field.is_one(lc) => self.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.field.mul(c, &self.field.from_i64(i as i64)))
            .collect();
        Self::new(self.field.clone(), coeffs)
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| self.field.add(&self.field.mul(&acc, x), c))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient and remainder with `self = q·g + r`, `deg r < deg g`.
    pub fn divrem(&self, g: &Self) -> Result<(Self, Self), AlgebraError> {
        let dg = g.degree().ok_or(AlgebraError::DivisionByZero)?;
        let field = &self.field;
        if self.coeffs.len() <= dg {
            return Ok((Self::zero(field.clone()), self.clone()));
        }
        let lc = g.leading().expect("nonzero");
        let lc_inv = if field.is_one(lc) { None } else { Some(field.inv(lc).expect("nonzero")) };
        let mut r = self.coeffs.clone();
        let mut q = vec![field.zero(); r.len() - dg];
        for i in (0..q.len()).rev() {
            let top = std::mem::replace(&mut r[i + dg], field.zero());
            if field.is_zero(&top) {
                continue;
            }
            let c = match &lc_inv {
                Some(inv) => field.mul(&top, inv),
                None => top,
            };
            for (j, gj) in g.coeffs[..dg].iter().enumerate() {
                if !field.is_zero(gj) {
                    r[i + j] = field.sub(&r[i + j], &field.mul(&c, gj));
                }
            }
            q[i] = c;
        }
        r.truncate(dg);
        Ok((Self::new(field.clone(), q), Self::new(field.clone(), r)))
    }

    pub fn rem(&self, g: &Self) -> Result<Self, AlgebraError> {
        self.divrem(g).map(|(_, r)| r)
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, g: &Self) -> Result<Self, AlgebraError> {
        if g.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if g.is_constant() {
            let inv = self.field.inv(&g.coeffs[0]).expect("nonzero");
            return Ok(self.scale(&inv));
        }
        Ok(self.field.poly_exact_div(self, g))
    }

    pub fn divides(&self, other: &Self) -> bool {
        match self.degree() {
            None => other.is_zero(),
            Some(0) => true,
            Some(_) => other.rem(self).map(|r| r.is_zero()).unwrap_or(false),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(AlgebraError::BothZero);
        }
        if self.is_zero() {
            return Ok(other.monic());
        }
        if other.is_zero() {
            return Ok(self.monic());
        }
        if self.is_constant() || other.is_constant() {
            return Ok(Self::one(self.field.clone()));
        }
        Ok(self.field.poly_gcd(self, other))
    }

    /// Extended Euclid: `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> Result<(Self, Self, Self), AlgebraError> {
        if self.is_zero() && other.is_zero() {
            return Err(AlgebraError::BothZero);
        }
        let field = self.field.clone();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(field.clone()), Self::zero(field.clone()));
        let (mut t0, mut t1) = (Self::zero(field.clone()), Self::one(field.clone()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        let lc_inv = field.inv(r0.leading().expect("nonzero")).expect("nonzero");
        Ok((r0.scale(&lc_inv), s0.scale(&lc_inv), t0.scale(&lc_inv)))
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Result<Self, AlgebraError> {
        if m.is_zero() {
            return Err(AlgebraError::ZeroModulus);
        }
        let mut base = self.rem(m)?;
        let mut acc = Self::one(self.field.clone()).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// True iff `gcd(f, f')` is constant.
    pub fn is_squarefree(&self) -> Result<bool, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroInput);
        }
        if self.is_constant() {
            return Ok(true);
        }
        let d = self.derivative();
        if d.is_zero() {
            return Err(AlgebraError::NotSquarefreeDecidable);
        }
        Ok(self.gcd(&d)?.is_constant())
    }

    /// Monic `g` with `g² = c·self` for a unit `c`.
    pub fn sqrt(&self) -> Result<Self, AlgebraError> {
        let deg = self.degree().ok_or(AlgebraError::ZeroInput)?;
        if deg % 2 == 1 {
            return Err(AlgebraError::NotASquare);
        }
        let field = &self.field;
        if deg == 0 {
            return Ok(Self::one(field.clone()));
        }
        let two_inv = field.inv(&field.from_i64(2)).ok_or(AlgebraError::NotASquare)?;
        let f = self.monic();
        let m = deg / 2;
        // g_m = 1, then solve downward: coeff of T^(m+k) in g² fixes g_k.
        let mut g = vec![field.zero(); m + 1];
        g[m] = field.one();
        for k in (0..m).rev() {
            let target = m + k;
            let mut acc = f.coeffs[target].clone();
            for i in (k + 1)..m {
                let j = target - i;
                if j > k && j < m {
                    acc = field.sub(&acc, &field.mul(&g[i], &g[j]));
                }
            }
            g[k] = field.mul(&acc, &two_inv);
        }
        let g = Self::new(field.clone(), g);
        if &g * &g == f {
            Ok(g)
        } else {
            Err(AlgebraError::NotASquare)
        }
    }

    /// Writes the polynomial in descending powers with explicit `*`.
    fn write_canonical(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = &self.field;
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if field.is_zero(c) {
                continue;
            }
            let (neg, abs) = field.split_sign(c);
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let unit = field.is_one(&abs);
            if k == 0 || !unit {
                if field.is_atomic(&abs) {
                    field.write_elem(&abs, f)?;
                } else {
                    write!(f, "(")?;
                    field.write_elem(&abs, f)?;
                    write!(f, ")")?;
                }
                if k > 0 {
                    write!(f, "*")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "T")?,
                _ => write!(f, "T^{k}")?,
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_canonical(f)
    }
}

fn add_coeffs<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = field.add(o, s);
    }
    out
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;

    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        assert!(self.field == rhs.field, "field mismatch");
        Poly::new(self.field.clone(), add_coeffs(&self.field, &self.coeffs, &rhs.coeffs))
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;

    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        assert!(self.field == rhs.field, "field mismatch");
        let field = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let c = match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => field.sub(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => field.neg(b),
                (None, None) => unreachable!(),
            };
            out.push(c);
        }
        Poly::new(field.clone(), out)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;

    fn neg(self) -> Poly<F> {
        let coeffs = self.coeffs.iter().map(|c| self.field.neg(c)).collect();
        Poly::new(self.field.clone(), coeffs)
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;

    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        assert!(self.field == rhs.field, "field mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field.clone());
        }
        let coeffs = self.field.poly_mul(&self.coeffs, &rhs.coeffs);
        Poly::new(self.field.clone(), coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for Poly<F> {
            type Output = Poly<F>;
            fn $m(self, rhs: Poly<F>) -> Poly<F> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub(crate) fn schoolbook<F: Field>(field: &F, f: &[F::Elem], g: &[F::Elem]) -> Vec<F::Elem> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if field.is_zero(a) {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            if !field.is_zero(b) {
                out[i + j] = field.add(&out[i + j], &field.mul(a, b));
            }
        }
    }
    out
}

/// Karatsuba product of coefficient slices; falls back to schoolbook below
/// [`KARATSUBA_THRESHOLD`].
pub fn karatsuba<F: Field>(field: &F, f: &[F::Elem], g: &[F::Elem]) -> Vec<F::Elem> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    karatsuba_rec(field, f, g)
}

fn karatsuba_rec<F: Field>(field: &F, f: &[F::Elem], g: &[F::Elem]) -> Vec<F::Elem> {
    if f.len().min(g.len()) < KARATSUBA_THRESHOLD {
        return schoolbook(field, f, g);
    }
    let half = f.len().max(g.len()) / 2;
    let out_len = f.len() + g.len() - 1;
    let mut out = vec![field.zero(); out_len];
    let accumulate = |out: &mut Vec<F::Elem>, part: Vec<F::Elem>, shift: usize| {
        for (k, c) in part.into_iter().enumerate() {
            out[k + shift] = field.add(&out[k + shift], &c);
        }
    };
    // Unbalanced operands: split only the longer one.
    if g.len() <= half || f.len() <= half {
        let (long, short) = if f.len() >= g.len() { (f, g) } else { (g, f) };
        let (lo, hi) = long.split_at(half);
        accumulate(&mut out, karatsuba_rec(field, lo, short), 0);
        accumulate(&mut out, karatsuba_rec(field, hi, short), half);
        return out;
    }
    let (f0, f1) = f.split_at(half);
    let (g0, g1) = g.split_at(half);
    let z0 = karatsuba_rec(field, f0, g0);
    let z2 = karatsuba_rec(field, f1, g1);
    let fs = add_coeffs(field, f0, f1);
    let gs = add_coeffs(field, g0, g1);
    let mut z1 = karatsuba_rec(field, &fs, &gs);
    for (k, c) in z0.iter().enumerate() {
        z1[k] = field.sub(&z1[k], c);
    }
    for (k, c) in z2.iter().enumerate() {
        z1[k] = field.sub(&z1[k], c);
    }
    accumulate(&mut out, z0, 0);
    accumulate(&mut out, z1, half);
    accumulate(&mut out, z2, 2 * half);
    out
}

pub(crate) fn euclid_gcd<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let r = a.rem(&b).expect("nonzero divisor");
        a = b;
        b = r;
    }
    a.monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(coeffs: &[i64]) -> Poly<Rationals> {
        Poly::from_i64s(Rationals, coeffs)
    }

    fn f5(coeffs: &[i64]) -> Poly<PrimeField> {
        Poly::from_i64s(PrimeField::new(5).unwrap(), coeffs)
    }

    #[test]
    fn products_and_division() {
        assert_eq!(&q(&[1, 1]) * &q(&[-1, 1]), q(&[-1, 0, 1]));
        let (quo, rem) = q(&[1, 1, 0, 1]).divrem(&q(&[0, 0, 1])).unwrap();
        assert_eq!(quo, q(&[0, 1]));
        assert_eq!(rem, q(&[1, 1]));
        assert_eq!(&f5(&[2, 1]) * &f5(&[3, 1]), f5(&[1, 0, 1]));
        assert_eq!(q(&[1]).divrem(&q(&[])), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = f5(&[1, 1]);
        let b = Poly::from_i64s(PrimeField::new(7).unwrap(), &[1, 1]);
        assert_eq!(poly_arith(&a, &b, PolyOp::Add), Err(AlgebraError::DescriptorMismatch));
        assert!(matches!(poly_arith(&a, &a, PolyOp::DivRem), Ok(PolyResult::Pair(_, _))));
    }

    #[test]
    fn gcd_examples() {
        // Euclid by hand: remainder 3(T+1)
        assert_eq!(f5(&[-1, 0, 1]).gcd(&f5(&[2, 3, 1])).unwrap(), f5(&[1, 1]));
        assert_eq!(q(&[1, 0, 1]).gcd(&q(&[2, 0, 1])).unwrap(), q(&[1]));
        assert_eq!(q(&[]).gcd(&q(&[])), Err(AlgebraError::BothZero));
    }

    #[test]
    fn gcd_with_zero_is_monic_input() {
        let f = q(&[3, 6]);
        assert_eq!(f.gcd(&q(&[])).unwrap(), f.monic());
        assert_eq!(f.monic(), Poly::new(Rationals, vec![BigRational::new(1.into(), 2.into()), BigRational::from_integer(1.into())]));
    }

    #[test]
    fn pow_mod_examples() {
        let m = f5(&[2, 0, 1]);
        let t = f5(&[0, 1]);
        assert_eq!(t.pow_mod(1, &m).unwrap(), t);
        assert_eq!(f5(&[4]).pow_mod(2, &f5(&[1, 1])).unwrap(), f5(&[1]));
        // oracle: naive repeated multiplication then one reduction
        let naive = t.pow(5).rem(&m).unwrap();
        assert_eq!(t.pow_mod(5, &m).unwrap(), naive);
        assert_eq!(naive, f5(&[0, 4]));
        assert_eq!(t.pow_mod(3, &f5(&[])), Err(AlgebraError::ZeroModulus));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(q(&[1, 2, 1]).sqrt().unwrap(), q(&[1, 1]));
        assert_eq!(q(&[0, 0, 4]).sqrt().unwrap(), q(&[0, 1]));
        assert_eq!(q(&[1, 0, 1]).sqrt(), Err(AlgebraError::NotASquare));
        assert_eq!(q(&[1, 1]).sqrt(), Err(AlgebraError::NotASquare));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(q(&[1, 1, 0, 1]).is_squarefree(), Ok(true));
        assert_eq!(f5(&[1, 2, 1]).is_squarefree(), Ok(false));
        assert_eq!(f5(&[0, 1]).is_squarefree(), Ok(true));
        assert_eq!(q(&[]).is_squarefree(), Err(AlgebraError::ZeroInput));
        // T^5 + 1 has zero derivative in characteristic 5
        assert_eq!(f5(&[1, 0, 0, 0, 0, 1]).is_squarefree(), Err(AlgebraError::NotSquarefreeDecidable));
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let field = PrimeField::new(7).unwrap();
        let f: Vec<u64> = (0..150).map(|i| (i * i + 3) % 7).collect();
        let g: Vec<u64> = (0..97).map(|i| (5 * i + 1) % 7).collect();
        assert_eq!(karatsuba(&field, &f, &g), schoolbook(&field, &f, &g));
        assert_eq!(karatsuba(&field, &g, &f[..10]), schoolbook(&field, &g, &f[..10]));
    }

    #[test]
    fn printer_is_canonical() {
        assert_eq!(q(&[1, 2, 0, 1]).to_string(), "T^3 + 2*T + 1");
        assert_eq!(q(&[1, 0, -1]).to_string(), "-T^2 + 1");
        assert_eq!(q(&[]).to_string(), "0");
        let half = Poly::new(Rationals, vec![BigRational::from_integer(0.into()), BigRational::new((-1).into(), 2.into())]);
        assert_eq!(half.to_string(), "-1/2*T");
        assert_eq!(f5(&[-1, 1]).to_string(), "T + 4");
    }
}

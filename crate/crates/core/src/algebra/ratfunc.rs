use std::fmt;

use num_bigint::BigInt;

use super::field::Field;
use super::poly::Poly;
use super::AlgebraError;

/// A reduced fraction `num/den` of polynomials: `den` monic, coprime to `num`.
/// Zero is `0/1`.
#[derive(Clone)]
pub struct RatFunc<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> PartialEq for RatFunc<F> {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl<F: Field> fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl<F: Field> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

fn div_by<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
    if g.is_one() {
        f.clone()
    } else {
        f.exact_div(g).expect("nonzero divisor")
    }
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        num.check_same(&den)?;
        if num.is_zero() {
            return Ok(Self::zero(num.field().clone()));
        }
        let g = num.gcd(&den)?;
        Ok(Self::from_coprime(div_by(&num, &g), div_by(&den, &g)))
    }

    /// Makes `den` monic; caller guarantees `gcd(num, den) = 1`.
    fn from_coprime(num: Poly<F>, den: Poly<F>) -> Self {
        if den.is_monic() {
            return Self { num, den };
        }
        let field = den.field().clone();
        let inv = field.inv(den.leading().expect("nonzero")).expect("nonzero");
        Self { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn zero(field: F) -> Self {
        Self { num: Poly::zero(field.clone()), den: Poly::one(field) }
    }

    pub fn one(field: F) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        let den = Poly::one(p.field().clone());
        Self { num: p, den }
    }

    pub fn field(&self) -> &F {
        self.num.field()
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Degree-zero as a rational function, i.e. an element of the constants.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn neg(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, c, d) = (&self.num, &self.den, &other.num, &other.den);
        if b.is_one() && d.is_one() {
            return Self::from_poly(a + c);
        }
        if a.is_zero() {
            return other.clone();
        }
        if c.is_zero() {
            return self.clone();
        }
        let g = b.gcd(d).expect("nonzero");
        if g.is_one() {
            let num = &(a * d) + &(c * b);
            if num.is_zero() {
                return Self::zero(self.field().clone());
            }
            return Self { num, den: b * d };
        }
        let b1 = div_by(b, &g);
        let d1 = div_by(d, &g);
        let num = &(a * &d1) + &(c * &b1);
        if num.is_zero() {
            return Self::zero(self.field().clone());
        }
        let h = num.gcd(&g).expect("nonzero");
        let num = div_by(&num, &h);
        let den = &(&b1 * &d1) * &div_by(&g, &h);
        Self { num, den }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field().clone());
        }
        let g1 = self.num.gcd(&other.den).expect("nonzero");
        let g2 = other.num.gcd(&self.den).expect("nonzero");
        let num = &div_by(&self.num, &g1) * &div_by(&other.num, &g2);
        let den = &div_by(&self.den, &g2) * &div_by(&other.den, &g1);
        Self { num, den }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field().is_zero(c) {
            return Self::zero(self.field().clone());
        }
        Self { num: self.num.scale(c), den: self.den.clone() }
    }
}

/// The rational function field k(T) over a constant field k.
#[derive(Clone, PartialEq, Debug)]
pub struct FunctionField<F: Field> {
    base: F,
}

impl<F: Field> FunctionField<F> {
    pub fn new(base: F) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn from_poly(&self, p: Poly<F>) -> RatFunc<F> {
        RatFunc::from_poly(p)
    }

    pub fn var(&self) -> RatFunc<F> {
        RatFunc::from_poly(Poly::var(self.base.clone()))
    }
}

impl<F: Field> Field for FunctionField<F> {
    type Elem = RatFunc<F>;

    fn zero(&self) -> RatFunc<F> {
        RatFunc::zero(self.base.clone())
    }

    fn one(&self) -> RatFunc<F> {
        RatFunc::one(self.base.clone())
    }

    fn is_zero(&self, a: &RatFunc<F>) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &RatFunc<F>) -> bool {
        a.num.is_one() && a.den.is_one()
    }

    fn add(&self, a: &RatFunc<F>, b: &RatFunc<F>) -> RatFunc<F> {
        a.add(b)
    }

    fn sub(&self, a: &RatFunc<F>, b: &RatFunc<F>) -> RatFunc<F> {
        a.sub(b)
    }

    fn neg(&self, a: &RatFunc<F>) -> RatFunc<F> {
        a.neg()
    }

    fn mul(&self, a: &RatFunc<F>, b: &RatFunc<F>) -> RatFunc<F> {
        a.mul(b)
    }

    fn inv(&self, a: &RatFunc<F>) -> Option<RatFunc<F>> {
        a.inv()
    }

    fn from_i64(&self, n: i64) -> RatFunc<F> {
        RatFunc::from_poly(Poly::constant(self.base.clone(), self.base.from_i64(n)))
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<RatFunc<F>> {
        let c = self.base.from_ratio(num, den)?;
        Some(RatFunc::from_poly(Poly::constant(self.base.clone(), c)))
    }

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn is_atomic(&self, a: &RatFunc<F>) -> bool {
        a.den.is_one() && a.num.coeffs().iter().filter(|c| !self.base.is_zero(c)).count() <= 1
    }

    fn write_elem(&self, a: &RatFunc<F>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{a}")
    }
}

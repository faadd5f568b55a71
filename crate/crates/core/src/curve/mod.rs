//! Weierstrass curves over any supported field, the chord–tangent group
//! law, quadratic twists, and reduction modulo a prime of F_p[T].

mod reduce;
mod twist;

pub use reduce::{reduce_curve_mod, reduce_point_mod, reduce_ratfunc};
pub use twist::{quadratic_twist, TwistData};

use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::algebra::{AlgebraError, ExtField, Field, FunctionField, PrimeField, Rationals};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("singular curve (discriminant is zero)")]
    SingularCurve,
    #[error("coefficient {0} is not integral; an integral model is required")]
    NonIntegralModel(String),
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("a·b = 0 gives j in {{0, 1728}}, which is not supported")]
    ForbiddenJInvariant,
    #[error("4a^3 + 27b^2 = 0: the constant curve is singular")]
    SingularConstants,
    #[error("bad twisting polynomial: {0}")]
    BadDelta(String),
    #[error("bad reduction at the given prime")]
    BadReduction,
    #[error("modulus is not a monic irreducible polynomial")]
    NotIrreducible,
    #[error("characteristic {0} is not supported; p >= 5 is required")]
    CharacteristicTooSmall(u64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Fields that can carry a Weierstrass model here. Function fields add the
/// integrality and constancy notions the model and `j` checks rely on.
pub trait CurveBase: Field {
    /// Whether `a` lies in the ring of the integral model (Z or k[T]).
    fn is_integral(&self, _a: &Self::Elem) -> bool {
        true
    }

    /// Whether `a` lies in the constant field.
    fn is_constant(&self, _a: &Self::Elem) -> bool {
        true
    }
}

impl CurveBase for Rationals {
    fn is_integral(&self, a: &BigRational) -> bool {
        a.denom().is_one()
    }
}

impl CurveBase for PrimeField {}

impl CurveBase for ExtField {}

impl<F: Field> CurveBase for FunctionField<F> {
    fn is_integral(&self, a: &Self::Elem) -> bool {
        a.is_polynomial()
    }

    fn is_constant(&self, a: &Self::Elem) -> bool {
        a.is_constant()
    }
}

#[derive(Clone, PartialEq)]
pub enum CurvePoint<K: Field> {
    Infinity,
    Affine { x: K::Elem, y: K::Elem },
}

impl<K: Field> CurvePoint<K> {
    pub fn affine(x: K::Elem, y: K::Elem) -> Self {
        Self::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn x(&self) -> Option<&K::Elem> {
        match self {
            Self::Affine { x, .. } => Some(x),
            Self::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&K::Elem> {
        match self {
            Self::Affine { y, .. } => Some(y),
            Self::Infinity => None,
        }
    }
}

impl<K: Field> fmt::Debug for CurvePoint<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinity => write!(f, "O"),
            Self::Affine { x, y } => write!(f, "({x:?}, {y:?})"),
        }
    }
}

/// Standard invariants of a Weierstrass model.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveInvariants<K: Field> {
    pub b2: K::Elem,
    pub b4: K::Elem,
    pub b6: K::Elem,
    pub b8: K::Elem,
    pub c4: K::Elem,
    pub discriminant: K::Elem,
    pub j: K::Elem,
    /// `j` lies in the constant field.
    pub constant_j: bool,
}

/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`.
#[derive(Clone, PartialEq, Debug)]
pub struct WeierstrassCurve<K: Field> {
    field: K,
    a1: K::Elem,
    a2: K::Elem,
    a3: K::Elem,
    a4: K::Elem,
    a6: K::Elem,
}

impl<K: CurveBase> WeierstrassCurve<K> {
    pub fn new(field: K, coeffs: [K::Elem; 5]) -> Result<Self, CurveError> {
        let p = field.characteristic();
        if p == 2 || p == 3 {
            return Err(CurveError::CharacteristicTooSmall(p));
        }
        for c in &coeffs {
            if !field.is_integral(c) {
                return Err(CurveError::NonIntegralModel(field.elem_to_string(c)));
            }
        }
        let [a1, a2, a3, a4, a6] = coeffs;
        let curve = Self { field, a1, a2, a3, a4, a6 };
        if curve.field.is_zero(&curve.discriminant()) {
            return Err(CurveError::SingularCurve);
        }
        Ok(curve)
    }

    /// `y² = x³ + a·x + b`.
    pub fn short(field: K, a: K::Elem, b: K::Elem) -> Result<Self, CurveError> {
        let z = field.zero();
        Self::new(field, [z.clone(), z.clone(), z, a, b])
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    /// `[a1, a2, a3, a4, a6]`.
    pub fn coeffs(&self) -> [&K::Elem; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn is_short(&self) -> bool {
        let k = &self.field;
        k.is_zero(&self.a1) && k.is_zero(&self.a2) && k.is_zero(&self.a3)
    }

    fn b_invariants(&self) -> [K::Elem; 4] {
        let k = &self.field;
        let c = |n: i64| k.from_i64(n);
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let b2 = k.add(&k.mul(a1, a1), &k.mul(&c(4), a2));
        let b4 = k.add(&k.mul(&c(2), a4), &k.mul(a1, a3));
        let b6 = k.add(&k.mul(a3, a3), &k.mul(&c(4), a6));
        // b8 = a1²a6 + 4a2a6 − a1a3a4 + a2a3² − a4²
        let mut b8 = k.mul(&k.mul(a1, a1), a6);
        b8 = k.add(&b8, &k.mul(&c(4), &k.mul(a2, a6)));
        b8 = k.sub(&b8, &k.mul(&k.mul(a1, a3), a4));
        b8 = k.add(&b8, &k.mul(a2, &k.mul(a3, a3)));
        b8 = k.sub(&b8, &k.mul(a4, a4));
        [b2, b4, b6, b8]
    }

    fn discriminant_from(&self, b: &[K::Elem; 4]) -> K::Elem {
        let k = &self.field;
        let [b2, b4, b6, b8] = b;
        let c = |n: i64| k.from_i64(n);
        // Δ = −b2²b8 − 8b4³ − 27b6² + 9b2b4b6
        let mut d = k.neg(&k.mul(&k.mul(b2, b2), b8));
        d = k.sub(&d, &k.mul(&c(8), &k.mul(b4, &k.mul(b4, b4))));
        d = k.sub(&d, &k.mul(&c(27), &k.mul(b6, b6)));
        k.add(&d, &k.mul(&c(9), &k.mul(b2, &k.mul(b4, b6))))
    }

    pub fn discriminant(&self) -> K::Elem {
        self.discriminant_from(&self.b_invariants())
    }

    pub fn invariants(&self) -> CurveInvariants<K> {
        let k = &self.field;
        let b = self.b_invariants();
        let discriminant = self.discriminant_from(&b);
        let [b2, b4, b6, b8] = b;
        let c4 = k.sub(&k.mul(&b2, &b2), &k.mul(&k.from_i64(24), &b4));
        let c4_cubed = k.mul(&c4, &k.mul(&c4, &c4));
        let j = k.div(&c4_cubed, &discriminant).expect("nonsingular");
        let constant_j = k.is_constant(&j);
        CurveInvariants { b2, b4, b6, b8, c4, discriminant, j, constant_j }
    }

    pub fn on_curve(&self, p: &CurvePoint<K>) -> bool {
        let CurvePoint::Affine { x, y } = p else {
            return true;
        };
        let k = &self.field;
        let lhs = k.mul(y, &k.add(&k.add(y, &k.mul(&self.a1, x)), &self.a3));
        let rhs = k.add(&k.mul(x, &k.add(&k.mul(x, &k.add(x, &self.a2)), &self.a4)), &self.a6);
        lhs == rhs
    }

    pub fn check_point(&self, p: &CurvePoint<K>) -> Result<(), CurveError> {
        if self.on_curve(p) {
            Ok(())
        } else {
            Err(CurveError::PointNotOnCurve)
        }
    }

    /// `-(x, y) = (x, −y − a1·x − a3)`.
    pub fn neg(&self, p: &CurvePoint<K>) -> CurvePoint<K> {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let k = &self.field;
                let mut ny = k.neg(y);
                if !k.is_zero(&self.a1) {
                    ny = k.sub(&ny, &k.mul(&self.a1, x));
                }
                if !k.is_zero(&self.a3) {
                    ny = k.sub(&ny, &self.a3);
                }
                CurvePoint::affine(x.clone(), ny)
            }
        }
    }

    pub fn add(&self, p: &CurvePoint<K>, q: &CurvePoint<K>) -> Result<CurvePoint<K>, CurveError> {
        self.check_point(p)?;
        self.check_point(q)?;
        Ok(self.add_unchecked(p, q))
    }

    /// Group law for points already known to lie on the curve.
    pub fn add_unchecked(&self, p: &CurvePoint<K>, q: &CurvePoint<K>) -> CurvePoint<K> {
        let k = &self.field;
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            // tangent, unless q = −p
            let mut den = k.add(y1, y2);
            if !k.is_zero(&self.a1) {
                den = k.add(&den, &k.mul(&self.a1, x2));
            }
            if !k.is_zero(&self.a3) {
                den = k.add(&den, &self.a3);
            }
            if k.is_zero(&den) {
                return CurvePoint::Infinity;
            }
            // (3x² + 2a2·x + a4 − a1·y) / (2y + a1·x + a3)
            let mut num = k.mul(&k.from_i64(3), &k.mul(x1, x1));
            if !k.is_zero(&self.a2) {
                num = k.add(&num, &k.mul(&k.from_i64(2), &k.mul(&self.a2, x1)));
            }
            num = k.add(&num, &self.a4);
            if !k.is_zero(&self.a1) {
                num = k.sub(&num, &k.mul(&self.a1, y1));
            }
            k.div(&num, &den).expect("nonzero")
        } else {
            k.div(&k.sub(y2, y1), &k.sub(x2, x1)).expect("distinct x")
        };
        let nu = k.sub(y1, &k.mul(&lambda, x1));
        // x3 = λ² + a1·λ − a2 − x1 − x2
        let mut x3 = k.mul(&lambda, &lambda);
        if !k.is_zero(&self.a1) {
            x3 = k.add(&x3, &k.mul(&self.a1, &lambda));
        }
        x3 = k.sub(&k.sub(&k.sub(&x3, &self.a2), x1), x2);
        // y3 = −(λ + a1)·x3 − ν − a3
        let slope = k.add(&lambda, &self.a1);
        let y3 = k.sub(&k.sub(&k.neg(&k.mul(&slope, &x3)), &nu), &self.a3);
        CurvePoint::affine(x3, y3)
    }

    pub fn double(&self, p: &CurvePoint<K>) -> CurvePoint<K> {
        self.add_unchecked(p, p)
    }

    /// `n·p` by double-and-add; negative `n` goes through `neg`.
    pub fn scalar_mul(&self, n: i64, p: &CurvePoint<K>) -> Result<CurvePoint<K>, CurveError> {
        self.check_point(p)?;
        Ok(self.scalar_mul_unchecked(n, p))
    }

    pub fn scalar_mul_unchecked(&self, n: i64, p: &CurvePoint<K>) -> CurvePoint<K> {
        let base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut m = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut run = base;
        while m > 0 {
            if m.is_odd() {
                acc = self.add_unchecked(&acc, &run);
            }
            m >>= 1;
            if m > 0 {
                run = self.double(&run);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn q_curve() -> WeierstrassCurve<Rationals> {
        WeierstrassCurve::short(Rationals, rat(1, 1), rat(1, 1)).unwrap()
    }

    fn f5_curve() -> WeierstrassCurve<PrimeField> {
        WeierstrassCurve::short(PrimeField::new(5).unwrap(), 1, 1).unwrap()
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(q_curve().discriminant(), rat(-496, 1));
        assert_eq!(f5_curve().discriminant(), 4);
        let z = rat(0, 1);
        assert_eq!(WeierstrassCurve::short(Rationals, z.clone(), z), Err(CurveError::SingularCurve));
    }

    #[test]
    fn invariants_match_short_form_closed_formulas() {
        let inv = q_curve().invariants();
        assert_eq!(
            [inv.b2.clone(), inv.b4.clone(), inv.b6.clone(), inv.b8.clone(), inv.c4.clone()],
            [rat(0, 1), rat(2, 1), rat(4, 1), rat(-1, 1), rat(-48, 1)]
        );
        // short form: Δ = −16(4a³+27b²), j = 1728·4a³/(4a³+27b²)
        let (a, b) = (rat(1, 1), rat(1, 1));
        let s = rat(4, 1) * &a * &a * &a + rat(27, 1) * &b * &b;
        assert_eq!(inv.discriminant, rat(-16, 1) * &s);
        assert_eq!(inv.j, rat(1728 * 4, 1) * &a * &a * &a / &s);
        assert!(inv.constant_j);
    }

    #[test]
    fn general_model_invariants() {
        // y² + xy + y = x³ − x²; Δ = −53 (16·disc of the completed-square cubic)
        let c = |n: i64| BigRational::from_integer(BigInt::from(n));
        let e = WeierstrassCurve::new(Rationals, [c(1), c(-1), c(1), c(0), c(0)]).unwrap();
        assert_eq!(e.discriminant(), c(-53));
        let p = CurvePoint::affine(c(0), c(0));
        assert!(e.on_curve(&p));
        let minus = e.neg(&p);
        assert_eq!(minus, CurvePoint::affine(c(0), c(-1)));
        assert!(e.add(&p, &minus).unwrap().is_infinity());
        let two = e.double(&p);
        assert!(e.on_curve(&two));
    }

    #[test]
    fn non_integral_model_rejected() {
        assert!(matches!(
            WeierstrassCurve::short(Rationals, rat(1, 2), rat(1, 1)),
            Err(CurveError::NonIntegralModel(_))
        ));
    }

    #[test]
    fn small_characteristic_rejected() {
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(WeierstrassCurve::short(f3, 1, 1), Err(CurveError::CharacteristicTooSmall(3)));
    }

    #[test]
    fn group_law_examples_mod_five() {
        let e = f5_curve();
        let p = CurvePoint::affine(0, 1);
        assert!(e.on_curve(&p));
        assert!(!e.on_curve(&CurvePoint::affine(1, 1)));
        assert_eq!(e.add(&p, &p).unwrap(), CurvePoint::affine(4, 2));
        assert!(e.add(&p, &CurvePoint::affine(0, 4)).unwrap().is_infinity());
        assert_eq!(e.add(&p, &CurvePoint::Infinity).unwrap(), p);
        assert!(e.scalar_mul(9, &p).unwrap().is_infinity());
        assert!(e.scalar_mul(0, &p).unwrap().is_infinity());
        assert_eq!(e.add(&CurvePoint::affine(1, 1), &p), Err(CurveError::PointNotOnCurve));
    }

    #[test]
    fn doubling_over_q() {
        let e = q_curve();
        let p = CurvePoint::affine(rat(0, 1), rat(1, 1));
        assert_eq!(e.scalar_mul(2, &p).unwrap(), CurvePoint::affine(rat(1, 4), rat(-9, 8)));
        assert_eq!(e.scalar_mul(-2, &p).unwrap(), e.neg(&e.scalar_mul(2, &p).unwrap()));
    }
}

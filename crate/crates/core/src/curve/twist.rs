use crate::algebra::{Field, FunctionField, Poly, RatFunc};

use super::{CurveError, CurvePoint, WeierstrassCurve};

/// `E: y² = x³ + δ²a·x + δ³b` over k(T), the twist of `E': y² = x³ + a·x + b`
/// by a squarefree monic `δ`.
#[derive(Clone, Debug)]
pub struct TwistData<F: Field> {
    pub a: F::Elem,
    pub b: F::Elem,
    pub delta: Poly<F>,
    pub curve: WeierstrassCurve<FunctionField<F>>,
    /// `(T·δ, δ²)` when `δ = T³ + aT + b`.
    pub point: Option<CurvePoint<FunctionField<F>>>,
}

pub fn quadratic_twist<F: Field>(a: F::Elem, b: F::Elem, delta: Poly<F>) -> Result<TwistData<F>, CurveError> {
    let k = delta.field().clone();
    let p = k.characteristic();
    if p == 2 || p == 3 {
        return Err(CurveError::CharacteristicTooSmall(p));
    }
    if k.is_zero(&a) || k.is_zero(&b) {
        return Err(CurveError::ForbiddenJInvariant);
    }
    let a3 = k.mul(&a, &k.mul(&a, &a));
    let s = k.add(&k.mul(&k.from_i64(4), &a3), &k.mul(&k.from_i64(27), &k.mul(&b, &b)));
    if k.is_zero(&s) {
        return Err(CurveError::SingularConstants);
    }
    if delta.is_constant() {
        return Err(CurveError::BadDelta(
            "constant delta is the trivial twist, which has no nontorsion points (the statement is vacuously true)".into(),
        ));
    }
    if !delta.is_monic() {
        return Err(CurveError::BadDelta("delta must be monic".into()));
    }
    match delta.is_squarefree() {
        Ok(true) => {}
        Ok(false) => return Err(CurveError::BadDelta("delta must be squarefree".into())),
        Err(e) => return Err(CurveError::BadDelta(format!("squarefreeness undecided: {e}"))),
    }

    let kt = FunctionField::new(k.clone());
    let d2 = &delta * &delta;
    let d3 = &d2 * &delta;
    let a4 = RatFunc::from_poly(d2.scale(&a));
    let a6 = RatFunc::from_poly(d3.scale(&b));
    let curve = WeierstrassCurve::short(kt, a4, a6)?;

    let t = Poly::var(k.clone());
    let canonical = &(&t.pow(3) + &t.scale(&a)) + &Poly::constant(k, b.clone());
    let point = if delta == canonical {
        let pt = CurvePoint::affine(RatFunc::from_poly(&t * &delta), RatFunc::from_poly(d2));
        curve.check_point(&pt)?;
        Some(pt)
    } else {
        None
    };
    Ok(TwistData { a, b, delta, curve, point })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, PrimeField, Rationals};
    use num_rational::BigRational;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn canonical_point_over_q() {
        let delta = parse_poly("T^3+T+1", &Rationals).unwrap();
        let tw = quadratic_twist(rat(1), rat(1), delta).unwrap();
        let p = tw.point.clone().unwrap();
        assert!(tw.curve.on_curve(&p));
        assert!(tw.curve.invariants().constant_j);
        let x2 = tw.curve.double(&p);
        let expect = parse_poly("1/4*T^4 - 1/2*T^2 - 2*T + 1/4", &Rationals).unwrap();
        assert_eq!(x2.x().unwrap(), &RatFunc::from_poly(expect));
    }

    #[test]
    fn canonical_point_mod_five() {
        let f5 = PrimeField::new(5).unwrap();
        let delta = parse_poly("T^3+T+1", &f5).unwrap();
        let tw = quadratic_twist(1, 1, delta).unwrap();
        assert!(tw.curve.on_curve(tw.point.as_ref().unwrap()));
    }

    #[test]
    fn other_delta_has_no_canonical_point() {
        let delta = parse_poly("T^2+1", &Rationals).unwrap();
        assert!(quadratic_twist(rat(1), rat(1), delta).unwrap().point.is_none());
    }

    #[test]
    fn guards() {
        let d = parse_poly("T^3+1", &Rationals).unwrap();
        assert_eq!(quadratic_twist(rat(0), rat(1), d.clone()).unwrap_err(), CurveError::ForbiddenJInvariant);
        // 4·(−3)³ + 27·2² = 0
        assert_eq!(quadratic_twist(rat(-3), rat(2), d).unwrap_err(), CurveError::SingularConstants);
        let one = parse_poly("1", &Rationals).unwrap();
        match quadratic_twist(rat(1), rat(1), one) {
            Err(CurveError::BadDelta(msg)) => assert!(msg.contains("vacuously true")),
            other => panic!("{other:?}"),
        }
        let square = parse_poly("(T+1)^2", &Rationals).unwrap();
        assert!(matches!(quadratic_twist(rat(1), rat(1), square), Err(CurveError::BadDelta(_))));
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(
            quadratic_twist(1, 1, parse_poly("T", &f3).unwrap()).unwrap_err(),
            CurveError::CharacteristicTooSmall(3)
        );
    }
}

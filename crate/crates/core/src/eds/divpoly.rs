use crate::algebra::Field;
use crate::curve::{CurveBase, CurvePoint, WeierstrassCurve};

use super::EdsError;

/// `ψ_0(P), …, ψ_{n_max}(P)` on `y² = x³ + ax + b`, by the classical
/// doubling recurrences.
pub fn division_poly_values<K: Field>(k: &K, a: &K::Elem, b: &K::Elem, x: &K::Elem, y: &K::Elem, n_max: usize) -> Vec<K::Elem> {
    let c = |n: i64| k.from_i64(n);
    let mul = |u: &K::Elem, v: &K::Elem| k.mul(u, v);
    let x2 = mul(x, x);
    let x3 = mul(&x2, x);
    let x4 = mul(&x2, &x2);
    let x6 = mul(&x3, &x3);
    let a2 = mul(a, a);
    let ab = mul(a, b);

    let mut psi: Vec<K::Elem> = Vec::with_capacity(n_max.max(4) + 1);
    psi.push(k.zero());
    psi.push(k.one());
    psi.push(mul(&c(2), y));
    // 3x⁴ + 6ax² + 12bx − a²
    let mut p3 = mul(&c(3), &x4);
    p3 = k.add(&p3, &mul(&c(6), &mul(a, &x2)));
    p3 = k.add(&p3, &mul(&c(12), &mul(b, x)));
    psi.push(k.sub(&p3, &a2));
    // 4y(x⁶ + 5ax⁴ + 20bx³ − 5a²x² − 4abx − 8b² − a³)
    let mut inner = x6;
    inner = k.add(&inner, &mul(&c(5), &mul(a, &x4)));
    inner = k.add(&inner, &mul(&c(20), &mul(b, &x3)));
    inner = k.sub(&inner, &mul(&c(5), &mul(&a2, &x2)));
    inner = k.sub(&inner, &mul(&c(4), &mul(&ab, x)));
    inner = k.sub(&inner, &mul(&c(8), &mul(b, b)));
    inner = k.sub(&inner, &mul(&a2, a));
    psi.push(mul(&mul(&c(4), y), &inner));

    let cube = |u: &K::Elem| mul(u, &mul(u, u));
    for i in 5..=n_max {
        let m = i / 2;
        let next = if i % 2 == 1 {
            // ψ_{2m+1} = ψ_{m+2}ψ_m³ − ψ_{m−1}ψ_{m+1}³
            k.sub(&mul(&psi[m + 2], &cube(&psi[m])), &mul(&psi[m - 1], &cube(&psi[m + 1])))
        } else {
            // ψ_{2m} = (ψ_m/ψ_2)(ψ_{m+2}ψ_{m−1}² − ψ_{m−2}ψ_{m+1}²)
            let sq = |u: &K::Elem| mul(u, u);
            let diff = k.sub(&mul(&psi[m + 2], &sq(&psi[m - 1])), &mul(&psi[m - 2], &sq(&psi[m + 1])));
            let ratio = k.div(&psi[m], &psi[2]).expect("psi_2 nonzero");
            mul(&ratio, &diff)
        };
        psi.push(next);
    }
    psi.truncate(n_max + 1);
    psi
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivPolyRow<K: Field> {
    pub n: u64,
    pub x_divpoly: K::Elem,
    pub x_group: K::Elem,
    pub agree: bool,
}

/// Compares `x_P − ψ_{n−1}ψ_{n+1}/ψ_n²` with the group-law x-coordinate.
pub fn division_poly_crosscheck<K: CurveBase>(
    curve: &WeierstrassCurve<K>,
    p: &CurvePoint<K>,
    n_max: u64,
) -> Result<Vec<DivPolyRow<K>>, EdsError> {
    if !curve.is_short() {
        return Err(EdsError::ShortFormRequired);
    }
    curve.check_point(p)?;
    let CurvePoint::Affine { x, y } = p else {
        return Err(EdsError::PointAtInfinity);
    };
    let k = curve.field();
    if k.is_zero(y) {
        return Err(EdsError::TorsionEncountered { order: 2 });
    }
    let [_, _, _, a, b] = curve.coeffs();
    let psi = division_poly_values(k, a, b, x, y, n_max as usize + 1);
    let mut rows = Vec::new();
    let mut acc = CurvePoint::Infinity;
    for n in 1..=n_max {
        acc = curve.add_unchecked(&acc, p);
        let n_us = n as usize;
        let psi_n_sq = k.mul(&psi[n_us], &psi[n_us]);
        if k.is_zero(&psi_n_sq) || acc.is_infinity() {
            return Err(EdsError::TorsionEncountered { order: n });
        }
        let frac = k.div(&k.mul(&psi[n_us - 1], &psi[n_us + 1]), &psi_n_sq).expect("nonzero");
        let x_divpoly = k.sub(x, &frac);
        let x_group = acc.x().expect("affine").clone();
        let agree = x_divpoly == x_group;
        rows.push(DivPolyRow { n, x_divpoly, x_group, agree });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rationals;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn low_order_values_at_zero_one() {
        let (a, b) = (rat(1, 1), rat(1, 1));
        let psi = division_poly_values(&Rationals, &a, &b, &rat(0, 1), &rat(1, 1), 4);
        assert_eq!(psi[2], rat(2, 1));
        assert_eq!(psi[3], rat(-1, 1));
        // ψ₁ψ₃/ψ₂² = −1/4 so x_{2P} = 1/4
        assert_eq!(rat(0, 1) - &psi[1] * &psi[3] / (&psi[2] * &psi[2]), rat(1, 4));
    }

    #[test]
    fn agrees_with_group_law_on_q_curve() {
        let e = WeierstrassCurve::short(Rationals, rat(1, 1), rat(1, 1)).unwrap();
        let p = CurvePoint::affine(rat(0, 1), rat(1, 1));
        let rows = division_poly_crosscheck(&e, &p, 10).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r.agree));
    }

    #[test]
    fn general_model_rejected() {
        let c = |n: i64| rat(n, 1);
        let e = WeierstrassCurve::new(Rationals, [c(1), c(-1), c(1), c(0), c(0)]).unwrap();
        let p = CurvePoint::affine(c(0), c(0));
        assert_eq!(division_poly_crosscheck(&e, &p, 3).unwrap_err(), EdsError::ShortFormRequired);
    }
}

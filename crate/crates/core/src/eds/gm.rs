use crate::algebra::{Field, Poly, RatFunc};

use super::EdsError;

#[derive(Clone, Debug, PartialEq)]
pub struct GmRow<F: Field> {
    pub n: u64,
    pub g: Poly<F>,
    /// `g` equals `gcd(a − 1, b − 1)`.
    pub equals_base: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderStabilityRow<F: Field> {
    pub m: u64,
    pub g: Poly<F>,
    pub coprime: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GmReport<F: Field> {
    pub base: Poly<F>,
    pub rows: Vec<GmRow<F>>,
    /// `a = b`: every gcd is `aⁿ − 1`; rows are reported but not asserted.
    pub degenerate: bool,
    pub order_rows: Vec<OrderStabilityRow<F>>,
}

/// Numerator of `rⁿ − 1` for `r = A/B` in lowest terms, i.e. `Aⁿ − Bⁿ` up to a unit.
fn power_minus_one<F: Field>(r: &RatFunc<F>, n: u64) -> Poly<F> {
    &r.num().pow(n) - &r.den().pow(n)
}

/// gcd of the finite zeros of `aⁿ − 1` and `bⁿ − 1` for `n = 1..n_max`, plus
/// the order-stability check on `a = A/B`.
pub fn gm_gcd_scan<F: Field>(a: &RatFunc<F>, b: &RatFunc<F>, n_max: u64) -> Result<GmReport<F>, EdsError> {
    if a.field().characteristic() != 0 {
        return Err(EdsError::PositiveCharacteristic);
    }
    if a.is_constant() || b.is_constant() {
        return Err(EdsError::ConstantInput);
    }
    let gcd = |u: &Poly<F>, v: &Poly<F>| u.gcd(v).expect("nonzero");
    let base = gcd(&power_minus_one(a, 1), &power_minus_one(b, 1));
    let rows = (1..=n_max)
        .map(|n| {
            let g = gcd(&power_minus_one(a, n), &power_minus_one(b, n));
            let equals_base = g == base;
            GmRow { n, g, equals_base }
        })
        .collect();
    let order_rows = gm_order_stability(a.num(), a.den(), n_max)?;
    Ok(GmReport { base, rows, degenerate: a == b, order_rows })
}

/// `gcd((Aᵐ − Bᵐ)/(A − B), A − B)` for `m = 1..m_max`; requires `gcd(A − B, B) = 1`.
pub fn gm_order_stability<F: Field>(
    a: &Poly<F>,
    b: &Poly<F>,
    m_max: u64,
) -> Result<Vec<OrderStabilityRow<F>>, EdsError> {
    let diff = a - b;
    if diff.is_zero() {
        return Err(EdsError::SharedFactorGuard("0".into()));
    }
    let guard = diff.gcd(b).expect("nonzero");
    if !guard.is_one() {
        return Err(EdsError::SharedFactorGuard(guard.to_string()));
    }
    (1..=m_max)
        .map(|m| {
            let quotient = (&a.pow(m) - &b.pow(m)).exact_div(&diff).expect("nonzero");
            let g = quotient.gcd(&diff).expect("nonzero");
            let coprime = g.is_one();
            Ok(OrderStabilityRow { m, g, coprime })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, PrimeField, Rationals};

    fn rf(text: &str) -> RatFunc<Rationals> {
        RatFunc::from_poly(parse_poly(text, &Rationals).unwrap())
    }

    #[test]
    fn sixth_roots_of_unity() {
        let report = gm_gcd_scan(&rf("T"), &rf("T+1"), 12).unwrap();
        assert_eq!(report.rows[5].g, parse_poly("T^2+T+1", &Rationals).unwrap());
        assert!(report.rows[4].g.is_one());
        assert!(report.base.is_one());
        assert!(report.order_rows.iter().all(|r| r.coprime));
        assert!(!report.degenerate);
    }

    #[test]
    fn rational_argument_order_stability() {
        let a = parse_poly("T^2+1", &Rationals).unwrap();
        let b = parse_poly("T", &Rationals).unwrap();
        let rows = gm_order_stability(&a, &b, 10).unwrap();
        assert!(rows.iter().all(|r| r.coprime));
    }

    #[test]
    fn guards() {
        assert_eq!(gm_gcd_scan(&rf("2"), &rf("T"), 3).unwrap_err(), EdsError::ConstantInput);
        let f5 = PrimeField::new(5).unwrap();
        let t = RatFunc::from_poly(parse_poly("T", &f5).unwrap());
        assert_eq!(gm_gcd_scan(&t, &t, 3).unwrap_err(), EdsError::PositiveCharacteristic);
        // A − B = T² shares T with B = T
        let a = parse_poly("T^2+T", &Rationals).unwrap();
        let b = parse_poly("T", &Rationals).unwrap();
        assert!(matches!(gm_order_stability(&a, &b, 3), Err(EdsError::SharedFactorGuard(_))));
        assert!(gm_gcd_scan(&rf("T"), &rf("T"), 3).unwrap().degenerate);
    }
}

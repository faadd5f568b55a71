use crate::curve::{CurvePoint, WeierstrassCurve};

use super::{EdsBase, EdsBuilder, EdsError};

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Row {
    pub m: u64,
    pub size: f64,
    /// `D_R | D_{mR}`.
    pub divides: bool,
    /// `gcd(D_{mR}/D_R, D_R) = 1`.
    pub cofactor_coprime: bool,
}

/// Valuation stability for `R = n0·P`, the first multiple with `D_R ≠ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Report<K: EdsBase> {
    pub n0: u64,
    pub d_r: K::Denom,
    pub rows: Vec<Lemma1Row>,
}

impl<K: EdsBase> Lemma1Report<K> {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.divides && r.cofactor_coprime)
    }
}

/// Checks that every prime of `D_R` occurs in `D_{mR}` with the same
/// multiplicity, in the factor-free form `D_R | D_{mR}` and
/// `gcd(D_{mR}/D_R, D_R) = 1`. Characteristic 0 only.
pub fn lemma1_check<K: EdsBase>(
    curve: &WeierstrassCurve<K>,
    p: &CurvePoint<K>,
    m_max: u64,
    search_bound: u64,
) -> Result<Lemma1Report<K>, EdsError> {
    let k = curve.field();
    if k.characteristic() != 0 {
        return Err(EdsError::PositiveCharacteristic);
    }
    let mut builder = EdsBuilder::new(curve, p)?;
    let mut n0 = None;
    for n in 1..=search_bound {
        let entries = builder.extend_to(n)?;
        if !k.denom_is_unit(&entries[n as usize - 1].d) {
            n0 = Some(n);
            break;
        }
    }
    let n0 = n0.ok_or(EdsError::NoNontrivialDenominator { bound: search_bound })?;
    let entries = builder.extend_to(n0 * m_max.max(1))?;
    let d_r = entries[n0 as usize - 1].d.clone();
    let rows = (1..=m_max)
        .map(|m| {
            let d_mr = &entries[(m * n0) as usize - 1].d;
            let divides = k.denom_divides(&d_r, d_mr);
            let cofactor_coprime =
                divides && k.denom_is_unit(&k.denom_gcd(&k.denom_quotient(d_mr, &d_r), &d_r));
            Lemma1Row { m, size: k.denom_size(d_mr), divides, cofactor_coprime }
        })
        .collect();
    Ok(Lemma1Report { n0, d_r, rows })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisibilityReport {
    /// `(m, n, D_{mP} | D_{nP})` for every `m | n <= n_max`.
    pub rows: Vec<(u64, u64, bool)>,
}

impl DivisibilityReport {
    pub fn counterexamples(&self) -> Vec<(u64, u64)> {
        self.rows.iter().filter(|r| !r.2).map(|r| (r.0, r.1)).collect()
    }
}

pub fn divisibility_check<K: EdsBase>(
    curve: &WeierstrassCurve<K>,
    p: &CurvePoint<K>,
    n_max: u64,
) -> Result<DivisibilityReport, EdsError> {
    let k = curve.field();
    let mut builder = EdsBuilder::new(curve, p)?;
    let entries = builder.extend_to(n_max)?;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for m in (1..=n).filter(|m| n % m == 0) {
            let ok = k.denom_divides(&entries[m as usize - 1].d, &entries[n as usize - 1].d);
            rows.push((m, n, ok));
        }
    }
    Ok(DivisibilityReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, PrimeField, Rationals};
    use crate::curve::quadratic_twist;
    use num_rational::BigRational;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn divisibility_on_q_curve() {
        let e = WeierstrassCurve::short(Rationals, rat(1), rat(1)).unwrap();
        let p = CurvePoint::affine(rat(0), rat(1));
        let report = divisibility_check(&e, &p, 8).unwrap();
        assert!(report.counterexamples().is_empty());
        assert!(report.rows.contains(&(2, 4, true)));
        assert!(report.rows.contains(&(4, 4, true)));
    }

    #[test]
    fn integer_analogue_picks_up_valuation_of_m() {
        // 2·(0,1) = (1/4, −9/8) is the first multiple with D ≠ 1. Over ℤ the
        // 2-adic valuation of D_{mR} grows with v_2(m), so even m must fail.
        let e = WeierstrassCurve::short(Rationals, rat(1), rat(1)).unwrap();
        let p = CurvePoint::affine(rat(0), rat(1));
        let report = lemma1_check(&e, &p, 4, 12).unwrap();
        assert_eq!(report.n0, 2);
        assert_eq!(report.d_r, 2.into());
        let pattern: Vec<bool> = report.rows.iter().map(|r| r.divides && r.cofactor_coprime).collect();
        assert_eq!(pattern, vec![true, false, true, false]);
    }

    #[test]
    fn twist_over_rational_functions() {
        let delta = parse_poly("T^3+T+1", &Rationals).unwrap();
        let tw = quadratic_twist(rat(1), rat(1), delta).unwrap();
        let report = lemma1_check(&tw.curve, tw.point.as_ref().unwrap(), 3, 12).unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn lemma_rejects_positive_characteristic() {
        let f5 = PrimeField::new(5).unwrap();
        let tw = quadratic_twist(1, 1, parse_poly("T^3+T+1", &f5).unwrap()).unwrap();
        assert_eq!(
            lemma1_check(&tw.curve, tw.point.as_ref().unwrap(), 3, 5).unwrap_err(),
            EdsError::PositiveCharacteristic
        );
    }

    #[test]
    fn search_bound_exhaustion() {
        let delta = parse_poly("T^3+T+1", &Rationals).unwrap();
        let tw = quadratic_twist(rat(1), rat(1), delta).unwrap();
        assert_eq!(
            lemma1_check(&tw.curve, tw.point.as_ref().unwrap(), 2, 2).unwrap_err(),
            EdsError::NoNontrivialDenominator { bound: 2 }
        );
    }
}

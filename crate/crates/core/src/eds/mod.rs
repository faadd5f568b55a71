//! Elliptic divisibility sequences: denominators `D_{nP}` of the multiples
//! of a point, gcd tables between two sequences, stability scans, valuation
//! checks, the division-polynomial cross-check, and the multiplicative-group
//! analogue.

mod base;
mod divpoly;
mod gm;
mod lemma;

pub use base::{ln_big, EdsBase};
pub use divpoly::{division_poly_crosscheck, division_poly_values, DivPolyRow};
pub use gm::{gm_gcd_scan, gm_order_stability, GmReport, GmRow, OrderStabilityRow};
pub use lemma::{divisibility_check, lemma1_check, DivisibilityReport, Lemma1Report, Lemma1Row};

use num_integer::Integer;
use thiserror::Error;

use crate::curve::{CurveError, CurvePoint, WeierstrassCurve};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EdsError {
    #[error("the point at infinity has no denominator")]
    PointAtInfinity,
    #[error("x-denominator {0} is not a square; the model is not integral")]
    NonSquareDenominator(String),
    #[error("point is torsion: {order}·P = O")]
    TorsionEncountered { order: u64 },
    #[error("no multiple n·P with n <= {bound} has a nontrivial denominator")]
    NoNontrivialDenominator { bound: u64 },
    #[error("this check requires characteristic 0")]
    PositiveCharacteristic,
    #[error("the curve must be in short form y^2 = x^3 + ax + b")]
    ShortFormRequired,
    #[error("input must be nonconstant")]
    ConstantInput,
    #[error("gcd(A - B, B) = {0} is not 1; the order-stability hypothesis fails")]
    SharedFactorGuard(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// One term of the sequence: `x_{nP} = a / d²`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdsEntry<K: EdsBase> {
    pub n: u64,
    pub a: K::Num,
    pub d: K::Denom,
    /// Degree of `d`, or its natural log over Q.
    pub size: f64,
}

/// One cell of a gcd table: `g = gcd(D_{n1·P1}, D_{n2·P2})`.
#[derive(Clone, Debug, PartialEq)]
pub struct GcdRow<K: EdsBase> {
    pub n1: u64,
    pub n2: u64,
    pub g: K::Denom,
    pub size: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport<K: EdsBase> {
    pub baseline: GcdRow<K>,
    pub rows: Vec<GcdRow<K>>,
    pub stable_set: Vec<u64>,
    pub exceptional_set: Vec<u64>,
    /// Smallest `N <= n_max` with every `n` coprime to `N` stable.
    pub modulus_estimate: Option<u64>,
}

impl<K: EdsBase> StabilityReport<K> {
    /// Whether the stable set is consistent with a coprimality condition.
    pub fn consistent(&self) -> bool {
        self.modulus_estimate.is_some()
    }
}

pub fn denominator_of<K: EdsBase>(curve: &WeierstrassCurve<K>, p: &CurvePoint<K>) -> Result<EdsEntry<K>, EdsError> {
    entry_for(curve, 1, p)
}

fn entry_for<K: EdsBase>(curve: &WeierstrassCurve<K>, n: u64, p: &CurvePoint<K>) -> Result<EdsEntry<K>, EdsError> {
    let x = p.x().ok_or(EdsError::PointAtInfinity)?;
    let k = curve.field();
    let (a, d) = k.split_x(x)?;
    let size = k.denom_size(&d);
    Ok(EdsEntry { n, a, d, size })
}

/// Incrementally extended sequence `D_P, D_{2P}, …` built by adding `P`.
pub struct EdsBuilder<'a, K: EdsBase> {
    curve: &'a WeierstrassCurve<K>,
    base: CurvePoint<K>,
    last: CurvePoint<K>,
    entries: Vec<EdsEntry<K>>,
}

impl<'a, K: EdsBase> EdsBuilder<'a, K> {
    pub fn new(curve: &'a WeierstrassCurve<K>, p: &CurvePoint<K>) -> Result<Self, EdsError> {
        curve.check_point(p)?;
        if p.is_infinity() {
            return Err(EdsError::TorsionEncountered { order: 1 });
        }
        Ok(Self { curve, base: p.clone(), last: CurvePoint::Infinity, entries: Vec::new() })
    }

    pub fn extend_to(&mut self, n_max: u64) -> Result<&[EdsEntry<K>], EdsError> {
        while (self.entries.len() as u64) < n_max {
            let n = self.entries.len() as u64 + 1;
            self.last = self.curve.add_unchecked(&self.last, &self.base);
            if self.last.is_infinity() {
                return Err(EdsError::TorsionEncountered { order: n });
            }
            self.entries.push(entry_for(self.curve, n, &self.last)?);
            log::debug!("computed D_{{{n}P}}");
        }
        Ok(&self.entries[..n_max as usize])
    }

    pub fn entries(&self) -> &[EdsEntry<K>] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<EdsEntry<K>> {
        self.entries
    }
}

pub fn eds_sequence<K: EdsBase>(
    curve: &WeierstrassCurve<K>,
    p: &CurvePoint<K>,
    n_max: u64,
) -> Result<Vec<EdsEntry<K>>, EdsError> {
    let mut builder = EdsBuilder::new(curve, p)?;
    builder.extend_to(n_max)?;
    Ok(builder.into_entries())
}

fn gcd_row<K: EdsBase>(k: &K, n1: u64, n2: u64, d1: &K::Denom, d2: &K::Denom) -> GcdRow<K> {
    let g = k.denom_gcd(d1, d2);
    let size = k.denom_size(&g);
    GcdRow { n1, n2, g, size }
}

/// gcd table over `grid`, rows sorted by `(n1, n2)`.
pub fn gcd_table<K: EdsBase>(
    e1: &WeierstrassCurve<K>,
    p1: &CurvePoint<K>,
    e2: &WeierstrassCurve<K>,
    p2: &CurvePoint<K>,
    grid: &[(u64, u64)],
) -> Result<Vec<GcdRow<K>>, EdsError> {
    let mut cells: Vec<(u64, u64)> = grid.to_vec();
    cells.sort_unstable();
    cells.dedup();
    let max1 = cells.iter().map(|c| c.0).max().unwrap_or(0);
    let max2 = cells.iter().map(|c| c.1).max().unwrap_or(0);
    let (s1, s2) = rayon::join(|| eds_sequence(e1, p1, max1), || eds_sequence(e2, p2, max2));
    let (s1, s2) = (s1?, s2?);
    let k = e1.field();
    Ok(cells
        .iter()
        .map(|&(n1, n2)| gcd_row(k, n1, n2, &s1[n1 as usize - 1].d, &s2[n2 as usize - 1].d))
        .collect())
}

/// Every `(n1, n2)` with `1 <= n1, n2 <= n_max`.
pub fn square_grid(n_max: u64) -> Vec<(u64, u64)> {
    (1..=n_max).flat_map(|a| (1..=n_max).map(move |b| (a, b))).collect()
}

/// `(n, n)` for `1 <= n <= n_max`.
pub fn diagonal_grid(n_max: u64) -> Vec<(u64, u64)> {
    (1..=n_max).map(|n| (n, n)).collect()
}

/// Smallest `N <= n_max` whose coprime residues up to `n_max` all lie in `stable`.
pub fn smallest_consistent_modulus(stable: &[u64], n_max: u64) -> Option<u64> {
    (1..=n_max).find(|&m| (1..=n_max).filter(|n| n.gcd(&m) == 1).all(|n| stable.contains(&n)))
}

pub fn stability_scan<K: EdsBase>(
    e1: &WeierstrassCurve<K>,
    p1: &CurvePoint<K>,
    e2: &WeierstrassCurve<K>,
    p2: &CurvePoint<K>,
    n_max: u64,
) -> Result<StabilityReport<K>, EdsError> {
    let rows = gcd_table(e1, p1, e2, p2, &diagonal_grid(n_max))?;
    Ok(stability_from_rows(rows, n_max))
}

/// Builds the report from diagonal rows `n = 1..n_max`.
pub fn stability_from_rows<K: EdsBase>(rows: Vec<GcdRow<K>>, n_max: u64) -> StabilityReport<K> {
    let baseline = rows[0].clone();
    let (stable, exceptional): (Vec<_>, Vec<_>) = rows.iter().partition(|r| r.g == baseline.g);
    let stable_set: Vec<u64> = stable.iter().map(|r| r.n1).collect();
    let exceptional_set = exceptional.iter().map(|r| r.n1).collect();
    let modulus_estimate = smallest_consistent_modulus(&stable_set, n_max);
    StabilityReport { baseline, rows, stable_set, exceptional_set, modulus_estimate }
}

/// `deg D_{nP} / n²` (or `log D_{nP} / n²` over Q) for the given range.
pub fn growth_ratios<K: EdsBase>(entries: &[EdsEntry<K>], range: std::ops::RangeInclusive<u64>) -> Vec<(u64, f64, f64)> {
    entries
        .iter()
        .filter(|e| range.contains(&e.n))
        .map(|e| (e.n, e.size, e.size / (e.n * e.n) as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, Rationals};
    use crate::curve::quadratic_twist;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn q_curve_first_terms() {
        let e = WeierstrassCurve::short(Rationals, rat(1, 1), rat(1, 1)).unwrap();
        let p = CurvePoint::affine(rat(0, 1), rat(1, 1));
        let seq = eds_sequence(&e, &p, 4).unwrap();
        assert_eq!(seq[0].d, BigInt::from(1));
        assert_eq!(seq[1].d, BigInt::from(2));
        assert_eq!(seq[1].a, BigInt::from(1));
        assert_eq!(eds_sequence(&e, &p, 1).unwrap().len(), 1);
        // 2 | D_4
        assert!(Rationals.denom_divides(&seq[1].d, &seq[3].d));
    }

    #[test]
    fn twist_prefix() {
        let delta = parse_poly("T^3+T+1", &Rationals).unwrap();
        let tw = quadratic_twist(rat(1, 1), rat(1, 1), delta).unwrap();
        let seq = eds_sequence(&tw.curve, tw.point.as_ref().unwrap(), 3).unwrap();
        assert!(seq[0].d.is_one());
        assert!(seq[1].d.is_one());
        assert!(!seq[2].d.is_constant());
    }

    #[test]
    fn torsion_is_reported() {
        // (2, 3) has order 6 on y² = x³ + 1
        let e = WeierstrassCurve::short(Rationals, rat(0, 1), rat(1, 1)).unwrap();
        let p = CurvePoint::affine(rat(2, 1), rat(3, 1));
        assert_eq!(eds_sequence(&e, &p, 10).unwrap_err(), EdsError::TorsionEncountered { order: 6 });
        assert_eq!(denominator_of(&e, &CurvePoint::Infinity).unwrap_err(), EdsError::PointAtInfinity);
    }

    #[test]
    fn modulus_search() {
        assert_eq!(smallest_consistent_modulus(&(1..=12).collect::<Vec<_>>(), 12), Some(1));
        assert_eq!(smallest_consistent_modulus(&[1, 3, 5, 7, 9, 11], 12), Some(2));
        assert_eq!(smallest_consistent_modulus(&[1], 12), None);
    }
}

//! The characteristic-p experiment: monic primes of F_p[T] classified by the
//! Legendre symbol of the twisting polynomial, Frobenius traces, and
//! annihilation of reduced points as a lower bound for gcd degrees.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{enumerate_irreducibles, is_irreducible, AlgebraError, Field, FunctionField, Poly, PrimeField};
use crate::curve::{quadratic_twist, reduce_point_mod, CurveError, CurvePoint, TwistData};
use crate::eds::{eds_sequence, EdsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FfError {
    #[error("4a^3 + 27b^2 = 0: the constants define a singular curve")]
    SingularConstants,
    #[error("characteristic {0} is too small; p >= 5 is required")]
    PTooSmall(u64),
    #[error("Hasse bound violated: |a_{n}| = |{value}| > 2·q^({n}/2)")]
    HasseViolation { n: usize, value: i128 },
    #[error("delta and pi are not coprime")]
    NotCoprime,
    #[error("delta must be irreducible for the reciprocity check")]
    DeltaNotIrreducible,
    #[error("pi is not a monic irreducible")]
    NotIrreducible,
    #[error("both candidates q^N + 1 ± a_N are divisible by p")]
    NoAdmissibleN,
    #[error("projected degree {projected} exceeds the ceiling {ceiling}")]
    DegreeGuard { projected: u64, ceiling: u64 },
    #[error("no point is known on this twist; supply one explicitly")]
    NoPoint,
    #[error("{0}·P = O on the twist; the point is torsion")]
    Torsion(u64),
    #[error("integer overflow in q^N")]
    Overflow,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Eds(#[from] EdsError),
}

type Kt = FunctionField<PrimeField>;
type Pt = CurvePoint<Kt>;

/// Multiples checked before a point is accepted as nontorsion.
const TORSION_PROBE: u64 = 12;

/// A twist `y² = x³ + δ²a·x + δ³b` over F_p(T) with two points on it.
#[derive(Clone, Debug)]
pub struct TwistSpec {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub twist: TwistData<PrimeField>,
    pub point_p: Pt,
    pub point_q: Pt,
    /// `Q = 2P`, so annihilation of `Q̃` follows from that of `P̃`.
    pub q_is_double: bool,
}

impl TwistSpec {
    /// Uses the canonical point `(Tδ, δ²)`, which requires `δ = T³ + aT + b`,
    /// and `Q = 2P`.
    pub fn new(p: u64, a: u64, b: u64, delta: Poly<PrimeField>) -> Result<Self, FfError> {
        let twist = Self::twist(p, a, b, delta)?;
        let pp = twist.point.clone().ok_or(FfError::NoPoint)?;
        let q = twist.curve.double(&pp);
        Self::assemble(p, a, b, twist, pp, q, true)
    }

    /// Explicit points; `Q` defaults to `2P`.
    pub fn with_points(p: u64, a: u64, b: u64, delta: Poly<PrimeField>, pp: Pt, q: Option<Pt>) -> Result<Self, FfError> {
        let twist = Self::twist(p, a, b, delta)?;
        let q_is_double = q.is_none();
        let q = q.unwrap_or_else(|| twist.curve.double(&pp));
        Self::assemble(p, a, b, twist, pp, q, q_is_double)
    }

    fn twist(p: u64, a: u64, b: u64, delta: Poly<PrimeField>) -> Result<TwistData<PrimeField>, FfError> {
        if p < 5 {
            return Err(FfError::PTooSmall(p));
        }
        let k = PrimeField::new(p)?;
        if *delta.field() != k {
            return Err(AlgebraError::DescriptorMismatch.into());
        }
        Ok(quadratic_twist(a % p, b % p, delta)?)
    }

    fn assemble(p: u64, a: u64, b: u64, twist: TwistData<PrimeField>, pp: Pt, q: Pt, q_is_double: bool) -> Result<Self, FfError> {
        for pt in [&pp, &q] {
            twist.curve.check_point(pt)?;
            let mut acc = CurvePoint::Infinity;
            for n in 1..=TORSION_PROBE {
                acc = twist.curve.add_unchecked(&acc, pt);
                if acc.is_infinity() {
                    return Err(FfError::Torsion(n));
                }
            }
        }
        Ok(Self { p, a: a % p, b: b % p, twist, point_p: pp, point_q: q, q_is_double })
    }

    pub fn field(&self) -> PrimeField {
        *self.twist.delta.field()
    }

    pub fn delta(&self) -> &Poly<PrimeField> {
        &self.twist.delta
    }
}

/// Exhaustive `#E'(F_p)` for `y² = x³ + ax + b`, with `a1 = p + 1 − #E'`.
pub fn count_points(a: u64, b: u64, p: u64) -> Result<(u64, i64), FfError> {
    if p < 5 {
        return Err(FfError::PTooSmall(p));
    }
    let k = PrimeField::new(p)?;
    let (a, b) = (a % p, b % p);
    let disc = k.add(&k.mul(&4, &k.pow(&a, 3)), &k.mul(&27, &k.mul(&b, &b)));
    if disc == 0 {
        return Err(FfError::SingularConstants);
    }
    let mut count = 1u64;
    for x in 0..p {
        let rhs = k.add(&k.add(&k.pow(&x, 3), &k.mul(&a, &x)), &b);
        count += (1 + k.legendre(rhs) as i64) as u64;
    }
    Ok((count, p as i64 + 1 - count as i64))
}

/// `a_N` for `N = 0..=n_max`, `a_0 = 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSeq {
    pub q: u64,
    pub a1: i64,
    pub values: Vec<i128>,
}

impl TraceSeq {
    pub fn get(&self, n: usize) -> i128 {
        self.values[n]
    }
}

pub fn trace_sequence(a1: i64, q: u64, n_max: usize) -> Result<TraceSeq, FfError> {
    let q128 = q as i128;
    let mut values: Vec<i128> = vec![2, a1 as i128];
    while values.len() <= n_max {
        let n = values.len();
        let next = (a1 as i128)
            .checked_mul(values[n - 1])
            .and_then(|x| x.checked_sub(q128.checked_mul(values[n - 2])?))
            .ok_or(FfError::Overflow)?;
        values.push(next);
    }
    values.truncate(n_max + 1);
    for (n, &v) in values.iter().enumerate().skip(1) {
        let qn = q128.checked_pow(n as u32).ok_or(FfError::Overflow)?;
        // |a_N| <= 2 q^{N/2}  <=>  a_N² <= 4 q^N
        if v.checked_mul(v).ok_or(FfError::Overflow)? > 4 * qn {
            return Err(FfError::HasseViolation { n, value: v });
        }
    }
    Ok(TraceSeq { q, a1, values })
}

fn residue_count(p: u64, deg: usize) -> Result<u64, FfError> {
    p.checked_pow(deg as u32).ok_or(FfError::Overflow)
}

/// `(δ/π)` by Euler's criterion in F_p[T]/(π).
pub fn legendre_symbol(delta: &Poly<PrimeField>, pi: &Poly<PrimeField>) -> Result<i8, FfError> {
    if !pi.is_monic() || !is_irreducible(pi) {
        return Err(FfError::NotIrreducible);
    }
    let r = delta.rem(pi)?;
    if r.is_zero() {
        return Ok(0);
    }
    let p = pi.field().modulus();
    let e = (residue_count(p, pi.deg_or_zero())? - 1) / 2;
    let s = r.pow_mod(e, pi)?;
    Ok(if s.is_one() { 1 } else { -1 })
}

/// `(δ/π) = (−1)^{((q−1)/2)·deg π·deg δ} (π/δ)` for distinct monic irreducibles.
pub fn reciprocity_check(delta: &Poly<PrimeField>, pi: &Poly<PrimeField>) -> Result<bool, FfError> {
    if !delta.is_monic() || !is_irreducible(delta) {
        return Err(FfError::DeltaNotIrreducible);
    }
    if !pi.is_monic() || !is_irreducible(pi) {
        return Err(FfError::NotIrreducible);
    }
    if !delta.gcd(pi)?.is_one() {
        return Err(FfError::NotCoprime);
    }
    let q = pi.field().modulus();
    let exp = (q - 1) / 2 * pi.deg_or_zero() as u64 * delta.deg_or_zero() as u64;
    let sign = if exp.is_multiple_of(2) { 1 } else { -1 };
    Ok(legendre_symbol(delta, pi)? == sign * legendre_symbol(pi, delta)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExclusionReason {
    DividesDelta,
    BadReduction,
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::DividesDelta => "pi divides delta",
            Self::BadReduction => "bad reduction",
        })
    }
}

/// The degree-`N` monic primes split by `(δ/π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeClasses {
    pub degree: usize,
    pub splus: Vec<Poly<PrimeField>>,
    pub sminus: Vec<Poly<PrimeField>>,
    pub excluded: Vec<(Poly<PrimeField>, ExclusionReason)>,
}

impl PrimeClasses {
    pub fn total(&self) -> usize {
        self.splus.len() + self.sminus.len() + self.excluded.len()
    }

    /// `q^N / 2N`, the expected size of each class.
    pub fn expected_class_size(&self, q: u64) -> f64 {
        (q as f64).powi(self.degree as i32) / (2.0 * self.degree as f64)
    }

    pub fn excluded_mass(&self) -> u64 {
        (self.excluded.len() * self.degree) as u64
    }
}

pub fn classify_primes(spec: &TwistSpec, degree: usize, guard: u64) -> Result<PrimeClasses, FfError> {
    let primes = enumerate_irreducibles(spec.field(), degree, guard)?;
    let disc = spec.twist.curve.discriminant();
    let labels: Vec<Result<i8, FfError>> = primes
        .par_iter()
        .map(|pi| {
            let l = legendre_symbol(spec.delta(), pi)?;
            if l != 0 && disc.num().rem(pi)?.is_zero() {
                return Ok(2);
            }
            Ok(l)
        })
        .collect();
    let mut classes = PrimeClasses { degree, splus: vec![], sminus: vec![], excluded: vec![] };
    for (pi, label) in primes.into_iter().zip(labels) {
        match label? {
            1 => classes.splus.push(pi),
            -1 => classes.sminus.push(pi),
            0 => classes.excluded.push((pi, ExclusionReason::DividesDelta)),
            _ => classes.excluded.push((pi, ExclusionReason::BadReduction)),
        }
    }
    Ok(classes)
}

/// Whether `n·P̃ = O` and `n·Q̃ = O` on the reduction modulo `pi`.
pub fn annihilation_check(spec: &TwistSpec, pi: &Poly<PrimeField>, n: u64) -> Result<(bool, bool), FfError> {
    let (e, p) = reduce_point_mod(&spec.twist.curve, &spec.point_p, pi)?;
    let (_, q) = reduce_point_mod(&spec.twist.curve, &spec.point_q, pi)?;
    let n = i64::try_from(n).map_err(|_| FfError::Overflow)?;
    Ok((e.scalar_mul_unchecked(n, &p).is_infinity(), e.scalar_mul_unchecked(n, &q).is_infinity()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn legendre(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimeRow {
    pub pi: Poly<PrimeField>,
    pub degree: usize,
    pub legendre: i8,
    /// `q^N + 1 − (δ/π)·a_N`, the order of the reduced group.
    pub n_pi: i128,
    pub annihilates_p: bool,
    pub annihilates_q: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FfReport {
    pub degree: usize,
    pub sign: Sign,
    pub n: u64,
    pub rows: Vec<PrimeRow>,
    pub sum_deg: u64,
    pub excluded: Vec<(Poly<PrimeField>, ExclusionReason)>,
    pub q_is_double: bool,
    pub q: u64,
}

impl FfReport {
    pub fn q_pow_n(&self) -> f64 {
        (self.q as f64).powi(self.degree as i32)
    }

    pub fn half_n(&self) -> f64 {
        self.n as f64 / 2.0
    }

    pub fn half_qn(&self) -> f64 {
        self.q_pow_n() / 2.0
    }

    /// `q^N/2 − 3q^{N/2} − (excluded degree mass)`.
    pub fn floor(&self) -> f64 {
        let excluded = (self.excluded.len() * self.degree) as f64;
        self.half_qn() - 3.0 * self.q_pow_n().sqrt() - excluded
    }

    /// `Σ deg π / n`; the class sum tracks `q^N/2`, so this sits near 1/2.
    pub fn ratio(&self) -> f64 {
        self.sum_deg as f64 / self.n as f64
    }

    pub fn annihilation_holds(&self) -> bool {
        self.rows.iter().all(|r| r.annihilates_p && r.annihilates_q)
    }

    pub fn floor_holds(&self) -> bool {
        self.sum_deg as f64 >= self.floor()
    }

    pub fn hasse_holds(&self) -> bool {
        let qn = (self.q as i128).pow(self.degree as u32);
        self.rows.iter().all(|r| {
            let t = qn + 1 - r.n_pi;
            t * t <= 4 * qn
        })
    }
}

/// The candidates `q^N + 1 ∓ a_N` paired with their Legendre class, keeping
/// those prime to p.
pub fn admissible_candidates(p: u64, a_n: i128, degree: usize) -> Result<Vec<(Sign, u64)>, FfError> {
    let qn = (p as i128).checked_pow(degree as u32).ok_or(FfError::Overflow)?;
    let out: Vec<(Sign, u64)> = [(Sign::Plus, qn + 1 - a_n), (Sign::Minus, qn + 1 + a_n)]
        .into_iter()
        .filter(|(_, n)| n % p as i128 != 0)
        .map(|(s, n)| (s, n as u64))
        .collect();
    if out.is_empty() {
        return Err(FfError::NoAdmissibleN);
    }
    Ok(out)
}

/// One report per admissible sign at degree `N`.
pub fn lower_bound_experiment(spec: &TwistSpec, degree: usize, guard: u64) -> Result<Vec<FfReport>, FfError> {
    let (_, a1) = count_points(spec.a, spec.b, spec.p)?;
    let a_n = trace_sequence(a1, spec.p, degree)?.get(degree);
    let classes = classify_primes(spec, degree, guard)?;
    let qn = (spec.p as i128).pow(degree as u32);
    let mut reports = Vec::new();
    for (sign, n) in admissible_candidates(spec.p, a_n, degree)? {
        let class = match sign {
            Sign::Plus => &classes.splus,
            Sign::Minus => &classes.sminus,
        };
        let rows: Vec<PrimeRow> = class
            .par_iter()
            .map(|pi| {
                let (annihilates_p, annihilates_q) = annihilation_check(spec, pi, n)?;
                Ok(PrimeRow {
                    pi: pi.clone(),
                    degree,
                    legendre: sign.legendre(),
                    n_pi: qn + 1 - sign.legendre() as i128 * a_n,
                    annihilates_p,
                    annihilates_q,
                })
            })
            .collect::<Result<_, FfError>>()?;
        let sum_deg = rows.iter().filter(|r| r.annihilates_p && r.annihilates_q).map(|r| r.degree as u64).sum();
        reports.push(FfReport {
            degree,
            sign,
            n,
            rows,
            sum_deg,
            excluded: classes.excluded.clone(),
            q_is_double: spec.q_is_double,
            q: spec.p,
        });
    }
    Ok(reports)
}

/// Exact `gcd(D_{nP}, D_{nQ})` over F_p[T] against the product of the primes
/// the reduction path says must divide it.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactCheck {
    pub n: u64,
    pub gcd: Poly<PrimeField>,
    pub product: Poly<PrimeField>,
    pub divisible: bool,
}

pub fn exact_gcd_check(spec: &TwistSpec, report: &FfReport) -> Result<ExactCheck, FfError> {
    let k = spec.field();
    let dp = eds_sequence(&spec.twist.curve, &spec.point_p, report.n)?;
    let dq = eds_sequence(&spec.twist.curve, &spec.point_q, report.n)?;
    let gcd = dp.last().expect("n >= 1").d.gcd(&dq.last().expect("n >= 1").d)?;
    let product = report
        .rows
        .iter()
        .filter(|r| r.annihilates_p && r.annihilates_q)
        .fold(Poly::one(k), |acc, r| &acc * &r.pi);
    let divisible = product.divides(&gcd);
    Ok(ExactCheck { n: report.n, gcd, product, divisible })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PPowerReport {
    pub base_n: u64,
    pub i: u32,
    pub n: u64,
    pub base_gcd: Poly<PrimeField>,
    pub power_gcd: Poly<PrimeField>,
    pub deg_base: usize,
    pub deg_power: usize,
    /// `p^i · deg gcd(D_{R1}, D_{R2})`.
    pub bound: u64,
    pub holds: bool,
    /// The base gcd is 1, so the inequality says nothing.
    pub vacuous: bool,
}

/// Index at which the height constant of each point is sampled.
const HEIGHT_PROBE: u64 = 8;

/// Projected `max(deg D_{nP}, deg D_{nQ})` from `deg D_{mS} ≈ h_S·m²`, with
/// `h_S` read off at a small index.
pub fn projected_degree(spec: &TwistSpec, n: u64) -> Result<u64, FfError> {
    let mut worst = 0.0f64;
    for pt in [&spec.point_p, &spec.point_q] {
        let seq = eds_sequence(&spec.twist.curve, pt, HEIGHT_PROBE)?;
        let h = seq.last().expect("nonempty").size / (HEIGHT_PROBE * HEIGHT_PROBE) as f64;
        worst = worst.max(h * (n as f64) * (n as f64));
    }
    Ok(worst.ceil() as u64)
}

pub fn ppower_check(spec: &TwistSpec, base_n: u64, i: u32, degree_ceiling: u64) -> Result<PPowerReport, FfError> {
    let n = spec
        .p
        .checked_pow(i)
        .and_then(|pi| pi.checked_mul(base_n))
        .ok_or(FfError::Overflow)?;
    let projected = projected_degree(spec, n)?;
    if projected > degree_ceiling {
        return Err(FfError::DegreeGuard { projected, ceiling: degree_ceiling });
    }
    let dp = eds_sequence(&spec.twist.curve, &spec.point_p, n)?;
    let dq = eds_sequence(&spec.twist.curve, &spec.point_q, n)?;
    let g = |m: u64| dp[m as usize - 1].d.gcd(&dq[m as usize - 1].d);
    let base_gcd = g(base_n)?;
    let power_gcd = g(n)?;
    let deg_base = base_gcd.deg_or_zero();
    let deg_power = power_gcd.deg_or_zero();
    let bound = spec.p.pow(i) * deg_base as u64;
    Ok(PPowerReport {
        base_n,
        i,
        n,
        holds: deg_power as u64 >= bound,
        vacuous: deg_base == 0,
        base_gcd,
        power_gcd,
        deg_base,
        deg_power,
        bound,
    })
}

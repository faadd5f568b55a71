use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ext::ExtField;
use super::field::Field;
use super::parse::parse_poly;
use super::poly::Poly;
use super::prime::PrimeField;
use super::rational::Rationals;
use super::AlgebraError;

/// Runtime description of a coefficient field.
///
/// Textual forms: `Q`, `GF(p)`, `GF(p)[T]/(modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rationals,
    PrimeField(u64),
    /// Residues modulo a monic irreducible; coefficients ascending.
    ExtField { p: u64, modulus: Vec<u64> },
}

impl FieldDescriptor {
    pub fn validate(&self) -> Result<(), AlgebraError> {
        match self {
            Self::Rationals => Ok(()),
            Self::PrimeField(p) => PrimeField::new(*p).map(|_| ()),
            Self::ExtField { .. } => self.ext_field().map(|_| ()),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Self::Rationals => 0,
            Self::PrimeField(p) | Self::ExtField { p, .. } => *p,
        }
    }

    pub fn prime_field(&self) -> Result<PrimeField, AlgebraError> {
        match self {
            Self::PrimeField(p) | Self::ExtField { p, .. } => PrimeField::new(*p),
            Self::Rationals => Err(AlgebraError::DescriptorMismatch),
        }
    }

    pub fn ext_field(&self) -> Result<ExtField, AlgebraError> {
        match self {
            Self::ExtField { p, modulus } => {
                let base = PrimeField::new(*p)?;
                ExtField::new(Poly::new(base, modulus.clone()))
            }
            _ => Err(AlgebraError::DescriptorMismatch),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rationals => write!(f, "Q"),
            Self::PrimeField(p) => write!(f, "GF({p})"),
            Self::ExtField { p, modulus } => {
                let base = PrimeField::new_unchecked(*p);
                write!(f, "GF({p})[T]/({})", Poly::new(base, modulus.clone()))
            }
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || AlgebraError::BadDescriptor(s.to_string());
        if text == "Q" {
            return Ok(Self::Rationals);
        }
        let rest = text.strip_prefix("GF(").ok_or_else(bad)?;
        let close = rest.find(')').ok_or_else(bad)?;
        let p: u64 = rest[..close].parse().map_err(|_| bad())?;
        let base = PrimeField::new(p)?;
        let tail = &rest[close + 1..];
        if tail.is_empty() {
            return Ok(Self::PrimeField(p));
        }
        let modulus = tail.strip_prefix("[T]/").ok_or_else(bad)?;
        let m = parse_poly(modulus, &base)?;
        let desc = Self::ExtField { p, modulus: m.into_coeffs() };
        desc.validate()?;
        Ok(desc)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ElemValue {
    Rational(BigRational),
    Residue(u64),
    /// Reduced residue, coefficients ascending.
    Ext(Vec<u64>),
}

/// A field element tagged with its descriptor.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldElem {
    descriptor: FieldDescriptor,
    value: ElemValue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElem {
    /// Parses a constant expression (no `T` unless the field is an extension,
    /// where `T` denotes the class of `T`).
    pub fn parse(descriptor: &FieldDescriptor, text: &str) -> Result<Self, AlgebraError> {
        let value = match descriptor {
            FieldDescriptor::Rationals => ElemValue::Rational(constant_of(parse_poly(text, &Rationals)?)?),
            FieldDescriptor::PrimeField(p) => {
                let k = PrimeField::new(*p)?;
                ElemValue::Residue(constant_of(parse_poly(text, &k)?)?)
            }
            FieldDescriptor::ExtField { .. } => {
                let k = descriptor.ext_field()?;
                let f = parse_poly(text, k.base())?;
                ElemValue::Ext(k.reduce(&f).into_coeffs())
            }
        };
        Ok(Self { descriptor: descriptor.clone(), value })
    }

    pub fn from_ratio(descriptor: &FieldDescriptor, num: i64, den: i64) -> Result<Self, AlgebraError> {
        let (n, d) = (BigInt::from(num), BigInt::from(den));
        let miss = || AlgebraError::CoefficientNotInField(format!("{num}/{den}"));
        let value = match descriptor {
            FieldDescriptor::Rationals => ElemValue::Rational(Rationals.from_ratio(&n, &d).ok_or_else(miss)?),
            FieldDescriptor::PrimeField(p) => ElemValue::Residue(PrimeField::new(*p)?.from_ratio(&n, &d).ok_or_else(miss)?),
            FieldDescriptor::ExtField { .. } => {
                let k = descriptor.ext_field()?;
                ElemValue::Ext(k.from_ratio(&n, &d).ok_or_else(miss)?.into_coeffs())
            }
        };
        Ok(Self { descriptor: descriptor.clone(), value })
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.descriptor
    }

    pub fn value(&self) -> &ElemValue {
        &self.value
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            ElemValue::Rational(r) => Rationals.write_elem(r, f),
            ElemValue::Residue(r) => write!(f, "{r}"),
            ElemValue::Ext(c) => {
                write!(f, "{}", Poly::new(PrimeField::new_unchecked(self.descriptor.characteristic()), c.clone()))
            }
        }
    }
}

fn constant_of<F: Field>(p: Poly<F>) -> Result<F::Elem, AlgebraError> {
    match p.degree() {
        None => Ok(p.field().zero()),
        Some(0) => Ok(p.coeff(0)),
        Some(_) => Err(AlgebraError::CoefficientNotInField(p.to_string())),
    }
}

fn apply<F: Field>(k: &F, a: &F::Elem, b: &F::Elem, op: ArithOp) -> Result<F::Elem, AlgebraError> {
    Ok(match op {
        ArithOp::Add => k.add(a, b),
        ArithOp::Sub => k.sub(a, b),
        ArithOp::Mul => k.mul(a, b),
        ArithOp::Div => k.div(a, b).ok_or(AlgebraError::DivisionByZero)?,
    })
}

/// Checked arithmetic on tagged elements.
pub fn field_arith(a: &FieldElem, b: &FieldElem, op: ArithOp) -> Result<FieldElem, AlgebraError> {
    if a.descriptor != b.descriptor {
        return Err(AlgebraError::DescriptorMismatch);
    }
    let value = match (&a.value, &b.value) {
        (ElemValue::Rational(x), ElemValue::Rational(y)) => ElemValue::Rational(apply(&Rationals, x, y, op)?),
        (ElemValue::Residue(x), ElemValue::Residue(y)) => {
            ElemValue::Residue(apply(&a.descriptor.prime_field()?, x, y, op)?)
        }
        (ElemValue::Ext(x), ElemValue::Ext(y)) => {
            let k = a.descriptor.ext_field()?;
            let x = Poly::new(*k.base(), x.clone());
            let y = Poly::new(*k.base(), y.clone());
            ElemValue::Ext(apply(&k, &x, &y, op)?.into_coeffs())
        }
        _ => return Err(AlgebraError::DescriptorMismatch),
    };
    Ok(FieldElem { descriptor: a.descriptor.clone(), value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_sum_over_q() {
        let q = FieldDescriptor::Rationals;
        let a = FieldElem::from_ratio(&q, 1, 2).unwrap();
        let b = FieldElem::from_ratio(&q, 1, 3).unwrap();
        let s = field_arith(&a, &b, ArithOp::Add).unwrap();
        assert_eq!(s, FieldElem::from_ratio(&q, 5, 6).unwrap());
        assert_eq!(s.to_string(), "5/6");
    }

    #[test]
    fn prime_field_division() {
        let f5 = FieldDescriptor::PrimeField(5);
        let one = FieldElem::parse(&f5, "1").unwrap();
        let four = FieldElem::parse(&f5, "4").unwrap();
        assert_eq!(field_arith(&one, &four, ArithOp::Div).unwrap(), four);
        let zero = FieldElem::parse(&f5, "0").unwrap();
        assert_eq!(field_arith(&one, &zero, ArithOp::Div), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn extension_product() {
        let k: FieldDescriptor = "GF(5)[T]/(T^2+2)".parse().unwrap();
        let t = FieldElem::parse(&k, "T").unwrap();
        let sq = field_arith(&t, &t, ArithOp::Mul).unwrap();
        assert_eq!(sq, FieldElem::parse(&k, "3").unwrap());
    }

    #[test]
    fn mismatch_and_bad_descriptors() {
        let a = FieldElem::parse(&FieldDescriptor::PrimeField(5), "1").unwrap();
        let b = FieldElem::parse(&FieldDescriptor::PrimeField(7), "1").unwrap();
        assert_eq!(field_arith(&a, &b, ArithOp::Add), Err(AlgebraError::DescriptorMismatch));
        assert_eq!("GF(6)".parse::<FieldDescriptor>(), Err(AlgebraError::NotPrime(6)));
        assert_eq!("GF(5)[T]/(T^2+1)".parse::<FieldDescriptor>(), Err(AlgebraError::NotIrreducible));
        assert!(matches!("R".parse::<FieldDescriptor>(), Err(AlgebraError::BadDescriptor(_))));
        for text in ["Q", "GF(7)", "GF(5)[T]/(T^2 + 2)"] {
            let d: FieldDescriptor = text.parse().unwrap();
            assert_eq!(d.to_string(), text);
        }
    }
}

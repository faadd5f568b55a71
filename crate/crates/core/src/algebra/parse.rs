//! Reader for polynomial expressions in `T`.
//!
//! ```text
//! expr   := ["-"] term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := coeff | "T" | "(" expr ")" | factor "^" nat
//! coeff  := int | int "/" int
//! ```
//!
//! Whitespace is ignored. Fractions are mapped into the coefficient field,
//! so `1/2` reads as `3` over F_5.

use num_bigint::BigInt;

use super::field::Field;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::AlgebraError;

const MAX_EXPONENT: u64 = 1 << 16;

struct Parser<'a, F: Field> {
    src: &'a [u8],
    pos: usize,
    field: &'a F,
}

pub fn parse_poly<F: Field>(text: &str, field: &F) -> Result<Poly<F>, AlgebraError> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0, field };
    parser.skip_ws();
    if parser.at_end() {
        return Err(parser.error("empty expression"));
    }
    let value = parser.expr()?;
    parser.skip_ws();
    if !parser.at_end() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(value)
}

/// Reads `poly` or `(poly)/(poly)`, the form produced by `RatFunc`'s printer.
pub fn parse_ratfunc<F: Field>(text: &str, field: &F) -> Result<RatFunc<F>, AlgebraError> {
    let bytes = text.as_bytes();
    let mut depth = 0i32;
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'/' if depth == 0 => {
                let before = text[..i].trim_end();
                let after = text[i + 1..].trim_start();
                if before.ends_with(')') && after.starts_with('(') {
                    let num = parse_poly(&text[..i], field)?;
                    let den = parse_poly(&text[i + 1..], field).map_err(|e| match e {
                        AlgebraError::Syntax { column, message } => AlgebraError::Syntax { column: column + i + 1, message },
                        other => other,
                    })?;
                    return RatFunc::new(num, den);
                }
            }
            _ => {}
        }
    }
    Ok(RatFunc::from_poly(parse_poly(text, field)?))
}

impl<F: Field> Parser<'_, F> {
    fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Syntax { column: self.pos + 1, message: msg.to_string() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly<F>, AlgebraError> {
        let negate = self.eat(b'-');
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly<F>, AlgebraError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly<F>, AlgebraError> {
        let mut base = self.primary()?;
        while self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected exponent"));
            }
            let e: u64 = digits
                .parse()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| AlgebraError::Syntax { column: start + 1, message: "exponent too large".into() })?;
            base = base.pow(e);
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn primary(&mut self) -> Result<Poly<F>, AlgebraError> {
        match self.peek() {
            Some(b'T') => {
                self.pos += 1;
                Ok(Poly::var(self.field.clone()))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.coeff(),
            Some(_) => Err(self.error("expected coefficient, 'T' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn coeff(&mut self) -> Result<Poly<F>, AlgebraError> {
        let num: BigInt = self.digits().parse().expect("digit run");
        let mut den = BigInt::from(1);
        if self.eat(b'/') {
            self.skip_ws();
            let d = self.digits();
            if d.is_empty() {
                return Err(self.error("expected denominator"));
            }
            den = d.parse().expect("digit run");
        }
        let c = self
            .field
            .from_ratio(&num, &den)
            .ok_or_else(|| AlgebraError::CoefficientNotInField(format!("{num}/{den}")))?;
        Ok(Poly::constant(self.field.clone(), c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{PrimeField, Rationals};

    #[test]
    fn grammar_examples() {
        assert_eq!(parse_poly("T^3 + 2*T + 1", &Rationals).unwrap(), Poly::from_i64s(Rationals, &[1, 2, 0, 1]));
        assert_eq!(parse_poly("(T+1)*(T-1)", &Rationals).unwrap(), Poly::from_i64s(Rationals, &[-1, 0, 1]));
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(parse_poly("1/2*T", &f5).unwrap(), Poly::from_i64s(f5, &[0, 3]));
        assert_eq!(parse_poly(" - T ^2+ 1", &Rationals).unwrap(), Poly::from_i64s(Rationals, &[1, 0, -1]));
        assert_eq!(parse_poly("(T^2)^3", &Rationals).unwrap(), Poly::from_i64s(Rationals, &[0, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("T + * 2", &Rationals) {
            Err(AlgebraError::Syntax { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly("(T+1", &Rationals), Err(AlgebraError::Syntax { .. })));
        assert!(matches!(parse_poly("T/2", &Rationals), Err(AlgebraError::Syntax { column: 2, .. })));
        assert!(matches!(parse_poly("", &Rationals), Err(AlgebraError::Syntax { .. })));
        assert!(matches!(parse_poly("x", &Rationals), Err(AlgebraError::Syntax { .. })));
    }

    #[test]
    fn zero_denominators_rejected() {
        let f5 = PrimeField::new(5).unwrap();
        assert!(matches!(parse_poly("1/5*T", &f5), Err(AlgebraError::CoefficientNotInField(_))));
        assert!(matches!(parse_poly("1/0", &Rationals), Err(AlgebraError::CoefficientNotInField(_))));
    }

    #[test]
    fn rational_functions() {
        let r = parse_ratfunc("(T^2-1)/(2*T+2)", &Rationals).unwrap();
        assert_eq!(r.to_string(), "1/2*T - 1/2");
        let s = parse_ratfunc("(T)/(T^2+1)", &Rationals).unwrap();
        assert_eq!(parse_ratfunc(&s.to_string(), &Rationals).unwrap(), s);
        assert_eq!(parse_ratfunc("(T)/(0)", &Rationals).unwrap_err(), AlgebraError::ZeroDenominator);
        assert!(matches!(parse_ratfunc("(T)/(T+*)", &Rationals), Err(AlgebraError::Syntax { column: 8, .. })));
    }
}

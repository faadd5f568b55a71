//! Polynomial arithmetic over Q routed through Z[T]: products and exact
//! quotients on cleared denominators, gcd by small-prime images with
//! Chinese remaindering and trial division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::Field;
use super::poly::{self, Poly};
use super::prime::PrimeField;
use super::rational::Rationals;

/// gcd that first reduces the larger operand modulo the smaller one; the
/// binary gcd underneath is quadratic when the sizes are lopsided.
pub(crate) fn int_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (big, small) = if a.magnitude() >= b.magnitude() { (a, b) } else { (b, a) };
    if small.is_zero() {
        return big.abs();
    }
    if small.magnitude().is_one() {
        return BigInt::one();
    }
    let r = big % small;
    r.gcd(small)
}

/// `c · n` for an integer `n`, reducing against the denominator of `c` only.
pub(crate) fn scale_by_int(c: &BigRational, n: BigInt) -> BigRational {
    if n.is_zero() {
        return BigRational::zero();
    }
    if c.denom().is_one() {
        return BigRational::from_integer(c.numer() * n);
    }
    let g = int_gcd(&n, c.denom());
    if g.is_one() {
        BigRational::new_raw(c.numer() * n, c.denom().clone())
    } else {
        BigRational::new_raw(c.numer() * (n / &g), c.denom() / g)
    }
}

/// `f = content · prim` with `prim` primitive in Z[T], positive leading term.
pub(crate) fn primitive_part(f: &[BigRational]) -> (BigRational, Vec<BigInt>) {
    if f.is_empty() {
        return (BigRational::zero(), Vec::new());
    }
    let lcm = f.iter().fold(BigInt::one(), |acc, c| {
        if c.denom().is_one() {
            acc
        } else {
            &acc / int_gcd(&acc, c.denom()) * c.denom()
        }
    });
    let mut ints: Vec<BigInt> =
        f.iter().map(|c| if c.denom() == &lcm { c.numer().clone() } else { c.numer() * (&lcm / c.denom()) }).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        if content.magnitude().is_one() {
            break;
        }
        content = int_gcd(&content, c);
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        content = -content;
    }
    for c in ints.iter_mut() {
        *c = &*c / &content;
    }
    (BigRational::new(content, lcm), ints)
}

fn int_mul(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    if f.len().min(g.len()) < 8 {
        return schoolbook_int(f, g);
    }
    kronecker_mul(f, g)
}

fn schoolbook_int(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            if !b.is_zero() {
                out[i + j] += a * b;
            }
        }
    }
    out
}

/// Product via one big-integer multiplication: pack at `T = 2^k`, multiply,
/// then read back signed base-`2^k` digits.
fn kronecker_mul(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let bits = |v: &[BigInt]| v.iter().map(|c| c.bits()).max().unwrap_or(0);
    let len = f.len().min(g.len()) as u64;
    // |h_i| < len · 2^(bf + bg); one extra bit for the sign, rounded to bytes
    let need = bits(f) + bits(g) + (64 - len.leading_zeros() as u64) + 2;
    let k = need.div_ceil(8) * 8;
    let pack = |v: &[BigInt]| {
        let mut acc = BigInt::zero();
        for c in v.iter().rev() {
            acc <<= k;
            acc += c;
        }
        acc
    };
    let product = pack(f) * pack(g);
    let bytes = product.to_signed_bytes_le();
    let fill: u8 = if product.is_negative() { 0xff } else { 0 };
    let step = (k / 8) as usize;
    let n = f.len() + g.len() - 1;
    let half = BigInt::one() << (k - 1);
    let full = BigInt::one() << k;
    let mut carry = false;
    let mut out = Vec::with_capacity(n);
    let mut chunk = vec![0u8; step];
    for i in 0..n {
        for (j, b) in chunk.iter_mut().enumerate() {
            *b = bytes.get(i * step + j).copied().unwrap_or(fill);
        }
        let mut digit = BigInt::from(num_bigint::BigUint::from_bytes_le(&chunk));
        if carry {
            digit += 1;
        }
        carry = digit >= half;
        if carry {
            digit -= &full;
        }
        out.push(digit);
    }
    out
}

pub(crate) fn rational_poly_mul(f: &[BigRational], g: &[BigRational]) -> Vec<BigRational> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    if f.len().min(g.len()) < 4 {
        return poly::schoolbook(&Rationals, f, g);
    }
    let (cf, pf) = primitive_part(f);
    let (cg, pg) = primitive_part(g);
    let c = cf * cg;
    int_mul(&pf, &pg)
        .into_iter()
        .map(|n| scale_by_int(&c, n))
        .collect()
}

/// Exact quotient in Z[T], or `None` if `g` does not divide `f`.
fn int_exact_div(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let dg = g.len().checked_sub(1)?;
    if f.len() <= dg {
        return if f.iter().all(Zero::is_zero) { Some(Vec::new()) } else { None };
    }
    let lc = &g[dg];
    let mut r = f.to_vec();
    let mut q = vec![BigInt::zero(); f.len() - dg];
    for i in (0..q.len()).rev() {
        let top = std::mem::take(&mut r[i + dg]);
        if top.is_zero() {
            continue;
        }
        let (c, rem) = top.div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        for (j, gj) in g[..dg].iter().enumerate() {
            if !gj.is_zero() {
                r[i + j] -= &c * gj;
            }
        }
        q[i] = c;
    }
    if r[..dg].iter().all(Zero::is_zero) {
        Some(q)
    } else {
        None
    }
}

pub(crate) fn rational_exact_div(f: &Poly<Rationals>, g: &Poly<Rationals>) -> Poly<Rationals> {
    let (cf, pf) = primitive_part(f.coeffs());
    let (cg, pg) = primitive_part(g.coeffs());
    let q = int_exact_div(&pf, &pg).expect("inexact division over Q");
    let c = cf / cg;
    Poly::new(Rationals, q.into_iter().map(|n| scale_by_int(&c, n)).collect())
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Descending primes below 2^62.
pub(crate) fn large_primes() -> impl Iterator<Item = u64> {
    let mut next = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime_u64(next) {
            next -= 2;
        }
        let p = next;
        next -= 2;
        Some(p)
    })
}

fn reduce_mod(field: &PrimeField, f: &[BigInt]) -> Poly<PrimeField> {
    let p = BigInt::from(field.modulus());
    let coeffs = f.iter().map(|c| c.mod_floor(&p).to_u64().expect("residue")).collect();
    Poly::new(*field, coeffs)
}

/// Monic gcd over Q. Inputs are nonzero and nonconstant.
pub(crate) fn rational_gcd(f: &Poly<Rationals>, g: &Poly<Rationals>) -> Poly<Rationals> {
    let (_, pf) = primitive_part(f.coeffs());
    let (_, pg) = primitive_part(g.coeffs());
    let lf = pf.last().expect("nonzero").clone();
    let lg = pg.last().expect("nonzero").clone();
    let gamma = lf.gcd(&lg);

    let mut best_deg: Option<usize> = None;
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut last: Option<Vec<BigInt>> = None;

    for p in large_primes() {
        let pb = BigInt::from(p);
        if (&lf % &pb).is_zero() || (&lg % &pb).is_zero() {
            continue;
        }
        let field = PrimeField::new_unchecked(p);
        let h = poly::euclid_gcd(&reduce_mod(&field, &pf), &reduce_mod(&field, &pg));
        let d = h.degree().expect("nonzero gcd");
        if d == 0 {
            return Poly::one(Rationals);
        }
        match best_deg {
            Some(b) if d > b => continue,
            Some(b) if d == b => {}
            _ => {
                best_deg = Some(d);
                acc = vec![BigInt::zero(); d + 1];
                modulus = BigInt::one();
                last = None;
            }
        }
        let gamma_p = field.from_ratio(&gamma, &BigInt::one()).expect("residue");
        let image: Vec<u64> = h.coeffs().iter().map(|c| field.mul(c, &gamma_p)).collect();
        // CRT: acc ≡ acc (mod modulus), acc ≡ image (mod p)
        let m_inv = field.inv(&field.from_ratio(&modulus, &BigInt::one()).expect("residue")).expect("coprime moduli");
        for (a, &c) in acc.iter_mut().zip(&image) {
            let a_p = a.mod_floor(&pb).to_u64().expect("residue");
            let t = field.mul(&field.sub(&c, &a_p), &m_inv);
            *a += &modulus * BigInt::from(t);
        }
        modulus *= &pb;
        let half = &modulus >> 1;
        let symmetric: Vec<BigInt> =
            acc.iter().map(|a| if *a > half { a - &modulus } else { a.clone() }).collect();
        if last.as_ref() == Some(&symmetric) {
            let content = symmetric.iter().fold(BigInt::zero(), |x, c| x.gcd(c));
            let cand: Vec<BigInt> = symmetric.iter().map(|c| c / &content).collect();
            if int_exact_div(&pf, &cand).is_some() && int_exact_div(&pg, &cand).is_some() {
                let lc = BigRational::from_integer(cand.last().expect("nonzero").clone());
                return Poly::new(
                    Rationals,
                    cand.into_iter().map(|c| BigRational::from_integer(c) / &lc).collect(),
                );
            }
        }
        last = Some(symmetric);
    }
    unreachable!("prime supply is unbounded")
}
